//! Exact generalized Donaldson-Thomas wall-crossing.
//!
//! Modules, bottom up:
//! - [`numerics`]: rationals, Möbius function, compositions, labelled trees
//! - [`series`]: truncated multivariate power series with `exp`, `log`, products
//! - [`lattice`]: classes, quivers, Euler forms, cones, weak stability conditions
//! - [`wallcross`]: the coefficients `S`, `U`, `V`, the transformation law, Lie brackets
//! - [`invariants`]: BPS and pair-invariant transforms, generating functions, integrality
//! - [`fforacle`]: finite-field point counts of framed quiver moduli
//! - [`catalog`]: worked examples with closed forms and their verification

pub mod error;
pub mod catalog;
pub mod fforacle;
pub mod invariants;
pub mod lattice;
pub mod numerics;
pub mod series;
pub mod wallcross;

pub use error::{Error, Result};
pub use invariants::{InvariantKind, InvariantTable};
pub use lattice::{KClass, NumericalContext, Quiver, StabValue, WeakStability};
pub use numerics::{format_rational, parse_rational, Rational};
pub use series::{Bound, Monomial, TruncatedSeries};
