//! Fixtures shared by the criterion benches.

use dtwc_core::invariants::InvariantKind;
use dtwc_core::numerics::rat;
use dtwc_core::{InvariantTable, KClass, NumericalContext, WeakStability};

/// Rank-2 context with `χ̄(e_0, e_1) = x`.
pub fn rank_two(x: i64) -> NumericalContext {
    NumericalContext::from_chi_bar(vec![vec![0, x], vec![-x, 0]]).expect("antisymmetric matrix")
}

/// Deterministic DT̄ table on every cone class of total degree at most `max`.
pub fn sample_table(ctx: &NumericalContext, max: i64) -> InvariantTable {
    InvariantTable::from_fn(InvariantKind::DTbar, "tau", ctx.cone_classes(max), |c: &KClass| {
        rat(1 + c.coords()[0], 1 + c.total())
    })
}

/// Slope stabilities on either side of the wall through `(1, 1)`.
pub fn wall_pair() -> (WeakStability, WeakStability) {
    (
        WeakStability::slope_from_ints(&[1, 0], &[1, 1]),
        WeakStability::slope_from_ints(&[0, 1], &[1, 1]),
    )
}
