use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NonPrimeP(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("modulus must have {expected} coefficients (degree n, constant first), got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus must be monic")]
    ModulusNotMonic,
    #[error("modulus coefficient {0} is not reduced mod p")]
    ModulusCoefficient(u32),
    #[error("modulus {0:?} is reducible over F_p")]
    ReducibleModulus(Vec<u32>),
    #[error("field size {q} exceeds the cap {cap}; raise it explicitly to continue")]
    FieldTooLarge { q: u64, cap: u64 },
    #[error("element {enc} is out of range for a field of size {q}")]
    ElementOutOfRange { enc: u64, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("subfield degree {d} does not divide n = {n}")]
    DegreeNotDividing { d: u32, n: u32 },
    #[error("linearized term exponent index {index} is not below n = {n}")]
    FrobeniusIndex { index: u32, n: u32 },
    #[error("characteristic 2 is not supported by the character-sum machinery")]
    EvenCharacteristic,
    #[error("coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("leading coefficient A must be nonzero")]
    ZeroA,
    #[error("alpha + beta must be nonzero")]
    ZeroLeadCoefficient,
    #[error("k = {k} is out of range for n = {n} (need 1 <= k < n)")]
    InvalidK { k: u32, n: u32 },
    #[error("exponent d = {0} is not of the Gold form p^k + 1 with 1 <= k < n")]
    NotAGoldExponent(u64),
    #[error("monomial exponent {d} must satisfy 1 <= d < q = {q}")]
    InvalidExponent { d: u64, q: u32 },
    #[error("c must be nonzero")]
    ZeroC,
    #[error("entry estimate {value} is {residual:e} away from an integer")]
    RoundingToleranceExceeded { value: f64, residual: f64 },
    #[error("T_b has imaginary part {imag:e} (tolerance {tol:e})")]
    NonRealSum { imag: f64, tol: f64 },
    #[error("homogeneity check failed at (a, b) = ({a}, {b}): direct {direct}, mapped {mapped}")]
    HomogeneityViolation { a: u32, b: u32, direct: u64, mapped: u64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("table of {q}x{q} entries exceeds the cap of {cap} cells")]
    TableTooLarge { q: u32, cap: u64 },
    #[error("engine `{engine}` does not support this job: {reason}")]
    UnsupportedEngine { engine: String, reason: String },
    #[error("internal error: {0}")]
    Internal(String),
}
