use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("reduced part is not a nonzero monomial, element is not a unit")]
    NotAUnit,
    #[error("prime {0} divides a stored denominator")]
    BadPrime(u64),
    #[error("modulus {0} is not an odd prime below 2^63")]
    InvalidModulus(u64),
    #[error("genus {0} is too small for this operation")]
    GenusTooSmall(u32),
    #[error("coordinate change matrix is singular")]
    SingularMatrix,
    #[error("Clifford index {clifford} is out of range for genus {genus}")]
    InvalidClifford { genus: u32, clifford: u32 },
    #[error("could not construct a ribbon of genus {genus} with Clifford index {clifford}")]
    ConstructionFailed { genus: u32, clifford: u32 },
    #[error("H^0(omega^{power}) has dimension {found}, expected {expected}")]
    DimensionMismatch {
        power: u32,
        expected: usize,
        found: usize,
    },
    #[error("product is not in the span of the stored basis")]
    NotInSpan,
    #[error("ribbon is hyperelliptic and has no canonical embedding")]
    HyperellipticInput,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
