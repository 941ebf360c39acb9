use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too small: need p >= 5")]
    PrimeTooSmall(u64),
    #[error("prime {0} is too large for the table-based context")]
    PrimeTooLarge(u64),
    #[error("p-adic operands disagree: {0}")]
    PadicMismatch(String),
    #[error("division by p-adic zero")]
    DivisionByZero,
    #[error("modulus {p}^{n} does not fit in 63 bits")]
    ModulusTooLarge { p: u64, n: u32 },
    #[error("{0} is not in Z_p: denominator divisible by p={1}")]
    NotInZp(String, u64),
    #[error("Teichmüller lift of 0 is undefined")]
    TeichmullerOfZero,
    #[error("insufficient p-adic precision: {0}")]
    InsufficientPrecision(String),
    #[error("decoded value is not an integer: {0}")]
    NotIntegral(String),
    #[error("Gauss-sum product has pi-exponent {exponent} not divisible by p-1={modulus}")]
    PiExponent { exponent: u64, modulus: u64 },
    #[error("{0}")]
    Precondition(String),
    #[error("lambda = {lambda} is singular for {what}")]
    Singular { lambda: u64, what: &'static str },
    #[error("p = {p} is in the wrong residue class: {need}")]
    ResidueClass { p: u64, need: &'static str },
    #[error("rounding guard band violated: {0}")]
    Guard(String),
}
