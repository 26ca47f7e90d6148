use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("malformed polynomial input: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Möbius parameter {which} = {value} does not lie in the open unit disk")]
    MobiusOutsideDisk { which: &'static str, value: String },

    #[error("resultant in z2 is undefined: both polynomials are constant in z2")]
    ResultantUndefined,

    #[error("input not irreducible: {0}")]
    NotIrreducible(String),

    #[error("polynomial vanishes in the open bidisk near ({z1}, {z2})")]
    ZerosInBidisk { z1: String, z2: String },

    #[error("Gram matrix is singular beyond jitter (condition estimate {condition:e})")]
    SingularGram { condition: f64 },

    #[error("matrix is not unitary: max |U*U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("sample matrix has numerical rank {rank} < {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("regenerated polynomial differs from the input by {residual:e} per coefficient")]
    RegenerationMismatch { residual: f64 },

    #[error("det P(z2) vanishes inside the unit disk at {root}")]
    DetPZeroInDisk { root: String },

    #[error("branch ambiguity at t = {t}: two unimodular roots within {separation:e}")]
    BranchAmbiguity { t: f64, separation: f64 },

    #[error("no unimodular root of f(e^it, .) at t = {t}")]
    BranchLost { t: f64 },

    #[error("parametrization is not regular at t = {t}")]
    IrregularParametrization { t: f64 },

    #[error("no Möbius candidate reached type 2: {0}")]
    RetypeFailed(String),

    #[error("zero set on the torus is not a curve")]
    NotACurve,

    #[error("resolution too low: {0}")]
    Resolution(String),

    #[error("empty dyadic shell at radius {radius}")]
    EmptyShell { radius: usize },

    #[error("f vanishes on the torus grid at ({t1}, {t2}) away from the supplied zeros")]
    InconsistentZeros { t1: f64, t2: f64 },

    #[error("unknown dataset entry {0:?}")]
    UnknownDatasetEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
