use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("precision must be at least 1")]
    InvalidPrecision,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("denominator is divisible by p = {0}")]
    DenominatorDivisibleByP(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("valuation {valuation} is below the floor -{floor}")]
    ValuationFloor { valuation: i64, floor: i64 },
    #[error("operands belong to different p-adic contexts")]
    ContextMismatch,
    #[error("requested modulus p^{requested} exceeds held precision p^{available}")]
    PrecisionExceeded { requested: i64, available: i64 },
    #[error("value is not in Z_p (valuation {0})")]
    NotIntegral(i64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("summation of {terms} terms exceeds the budget of {budget}")]
    BudgetExceeded { terms: u128, budget: u64 },
    #[error("cylinder {a} + p^{n} Z_p is invalid: base must be below p^n")]
    InvalidCylinder { a: u64, n: u32 },
    #[error("level {requested} is beyond the deepest tabulated level {available}")]
    LevelBeyondTable { requested: u32, available: u32 },
    #[error("measure table is malformed: {0}")]
    MalformedTable(String),
    #[error("function has no finite polynomial or Mahler representation")]
    NotFinitelyExpandable,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
