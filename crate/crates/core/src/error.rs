use thiserror::Error;

use crate::lattice::KClass;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("enumeration bound exceeded: {what} = {value} > {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },
    #[error("series arity/bound mismatch")]
    SeriesMismatch,
    #[error("constant term must be {expected} for {op}")]
    ConstantTerm { op: &'static str, expected: &'static str },
    #[error("monomial {0:?} lies beyond the truncation bound")]
    BeyondBound(Vec<u32>),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("class {0} is not in the positive cone")]
    OutsideCone(KClass),
    #[error("matrix is not antisymmetric")]
    NotAntisymmetric,
    #[error("context has no framing functional")]
    MissingFraming,
    #[error("unknown stability `{0}`")]
    UnknownStability(String),
    #[error("stability kind cannot evaluate this class: {0}")]
    Stability(String),
    #[error("class {class} needs divisor class {divisor}, which the table lacks")]
    MissingDivisor { class: KClass, divisor: KClass },
    #[error("antisymmetric form does not vanish on {0} and {1}")]
    ChiBarNonzero(KClass, KClass),
    #[error("table classes {0} and {1} have different stability values")]
    OffSlope(KClass, KClass),
    #[error("framing vanishes on class {0} but its log coefficient does not")]
    FramingZero(KClass),
    #[error("decomposition of {target} needs more than {cap} parts")]
    PartCap { target: KClass, cap: usize },
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("{0} is not a supported field order")]
    UnsupportedField(u64),
    #[error("{samples} samples cannot determine a degree-{degree} polynomial")]
    TooFewSamples { samples: usize, degree: i64 },
    #[error("stable count over F_{q} is not divisible by the group order")]
    GroupOrder { q: u64 },
    #[error("point counts are inconsistent: {0}")]
    Interpolation(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
