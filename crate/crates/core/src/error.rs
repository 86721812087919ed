use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field of order {p}^{ell} is too large")]
    FieldTooLarge { p: u32, ell: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus is reducible over Z_{p}")]
    ReducibleModulus { p: u32 },
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("enumeration of {requested} items exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },
    #[error("root orders differ: {left} vs {right}")]
    RootOrderMismatch { left: u32, right: u32 },
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("duplicate element in set")]
    DuplicateElement,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("unsupported radius class: {0}")]
    UnsupportedRadiusClass(String),
    #[error("radius does not belong to the declared class")]
    RadiusClassViolation,
    #[error("cannot draw {requested} items from a population of {available}")]
    PopulationTooSmall { requested: u64, available: u64 },
    #[error("distance must be nonzero")]
    ZeroDistance,
}
