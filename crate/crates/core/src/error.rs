use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("modulus {0} is not prime")]
    CompositeModulus(String),
    #[error("polynomial is not a quartic CM field: {0}")]
    NotCm(String),
    #[error("field is not cyclic quartic: {0}")]
    NotCyclic(String),
    /// A ball predicate could not be decided at the current precision.
    #[error("undecided at current precision: {0}")]
    Indeterminate(String),
    #[error("precision exhausted at {prec} bits")]
    PrecisionExhausted { prec: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("ideal is not principal")]
    NotPrincipal,
    #[error("no CM type admits a principal polarization")]
    NoPolarization,
    #[error("{0}")]
    Failed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
