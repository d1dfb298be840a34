use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("set is not closed under addition and scaling")]
    NotASubspace,
    #[error("set is not a multiplicative subgroup")]
    NotASubgroup,
    #[error("polynomial of degree {degree} does not fit dimension {k}")]
    DegreeTooHigh { degree: usize, k: usize },
    #[error("{count} exceeds cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("code has a single word")]
    SingleWord,
    #[error("word lengths differ: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("search needs about {estimate} steps, budget is {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("E and F do not cover the image of f")]
    CoverFailed,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("the chosen words share no coordinate")]
    NoCoincidence,
}
