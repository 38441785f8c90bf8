use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime characteristic")]
    InvalidCharacteristic(u64),
    #[error("no element of order {order} in a field of order {field_order}")]
    OrderUnavailable { order: u64, field_order: u64 },
    #[error("internal error: {0}")]
    Internal(String),

    #[error("elements do not belong to this group")]
    GroupMismatch,
    #[error("closure exceeded cap of {cap} elements (reached {partial})")]
    ClosureOverflow { cap: usize, partial: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("module is not irreducible: {0}")]
    NotIrreducible(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no generating pair found for {0}")]
    NotFound(String),

    #[error("group is 2-generated: pair ({0}, {1}) lies in no candidate subgroup")]
    TwoGenerated(String, String),
    #[error("no covering exists: {0}")]
    NoCover(String),
    #[error("node budget exhausted (best bounds {lower}..={upper})")]
    BudgetExceeded { lower: usize, upper: usize },

    #[error("structural check failed: {0}")]
    StructuralFailure(String),
    #[error("theorem violated: expected {expected}, computed {computed}")]
    TheoremViolation { expected: u64, computed: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
