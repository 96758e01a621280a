use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid curve parameters: {0}")]
    InvalidCurve(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("pole at {location}")]
    PoleAt { location: String },

    #[error("unstable residue extrapolation at {location}: |r(eps/2) - r(eps)| = {jump:e}")]
    Unstable { location: String, jump: f64 },

    #[error("Weyl group closure exceeded {cap} elements")]
    Overflow { cap: usize },

    #[error("evaluation matrix numerically singular (condition number {condition:e})")]
    Singular { condition: f64 },

    #[error("division by ({numer}) left a nonzero remainder")]
    NonDivisible { numer: String },

    #[error("jet with zero constant term is not a unit")]
    NotUnit,

    #[error("local parameter singular set meets required point {point}")]
    SingularParameter { point: String },

    #[error("string detection ambiguous for points {first} and {second}: offsets {offsets:?} all match")]
    AmbiguousString {
        first: usize,
        second: usize,
        offsets: Vec<i64>,
    },

    #[error("the parameter t must be non-torsion, but it has order {order}")]
    NonTorsionRequired { order: u32 },

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("count mismatch: enumeration {enumerated}, oracle {oracle:?}")]
    Mismatch { enumerated: usize, oracle: Vec<usize> },

    #[error("unknown root datum preset '{0}'")]
    UnknownDatum(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
