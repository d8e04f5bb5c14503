use thiserror::Error;

/// Every failure the library can report. Variant names double as the
/// stable error names printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinError {
    #[error("BlockOrderViolation: {0}")]
    BlockOrderViolation(String),
    #[error("AmplitudeMismatch: {0}")]
    AmplitudeMismatch(String),
    #[error("LengthMismatch: {0}")]
    LengthMismatch(String),
    #[error("DegenerateBlock: {0}")]
    DegenerateBlock(String),
    #[error("InvalidCombo: {0}")]
    InvalidCombo(String),
    #[error("BudgetExceeded: {0}")]
    BudgetExceeded(String),
    #[error("Case1PreconditionFailed: {0}")]
    Case1PreconditionFailed(String),
    #[error("EmptyTree: {0}")]
    EmptyTree(String),
    #[error("NotASubsequence: {0}")]
    NotASubsequence(String),
    #[error("CertificateInsufficient: {0}")]
    CertificateInsufficient(String),
    #[error("DepthExceeded: {0}")]
    DepthExceeded(String),
    #[error("UnknownRule: {0}")]
    UnknownRule(String),
    #[error("UncoveredTuple: {0}")]
    UncoveredTuple(String),
    #[error("InvalidParams: {0}")]
    InvalidParams(String),
    #[error("ParseError: {0}")]
    ParseError(String),
}

impl FinError {
    /// The bare variant name, e.g. `"BlockOrderViolation"`.
    pub fn name(&self) -> &'static str {
        match self {
            FinError::BlockOrderViolation(_) => "BlockOrderViolation",
            FinError::AmplitudeMismatch(_) => "AmplitudeMismatch",
            FinError::LengthMismatch(_) => "LengthMismatch",
            FinError::DegenerateBlock(_) => "DegenerateBlock",
            FinError::InvalidCombo(_) => "InvalidCombo",
            FinError::BudgetExceeded(_) => "BudgetExceeded",
            FinError::Case1PreconditionFailed(_) => "Case1PreconditionFailed",
            FinError::EmptyTree(_) => "EmptyTree",
            FinError::NotASubsequence(_) => "NotASubsequence",
            FinError::CertificateInsufficient(_) => "CertificateInsufficient",
            FinError::DepthExceeded(_) => "DepthExceeded",
            FinError::UnknownRule(_) => "UnknownRule",
            FinError::UncoveredTuple(_) => "UncoveredTuple",
            FinError::InvalidParams(_) => "InvalidParams",
            FinError::ParseError(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, FinError>;
