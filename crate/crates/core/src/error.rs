use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AodeError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree {degree} exceeds the cap {cap} (tower so far: {tower})")]
    ExtensionLimitExceeded { degree: usize, cap: usize, tower: String },
    #[error("polynomial is not irreducible; nontrivial factor: {factor}")]
    NotIrreducible { factor: String },
    #[error("polynomial does not involve y'")]
    NoDerivative,
    #[error("equation is y' = constant ({equation})")]
    TrivialLinear { equation: String },
    #[error("the polynomials share a common component")]
    CommonComponent,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("no admissible Newton polygon edge")]
    DegenerateInput,
    #[error("series has no invertible constant term")]
    NotAUnit,
    #[error("inner series must have positive order")]
    InnerNotPositiveOrder,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("place is not order-suitable")]
    NotOrderSuitable,
    #[error("separant vanishes at the initial tuple")]
    SeparantVanishes,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("root index {index} out of range (polynomial has {count} roots)")]
    RootIndexOutOfRange { index: usize, count: usize },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
}

impl AodeError {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            AodeError::ExtensionLimitExceeded { .. } | AodeError::InsufficientPrecision(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, AodeError>;
