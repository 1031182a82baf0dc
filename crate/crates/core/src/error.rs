use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// The variants fall into three families that the CLI maps onto its exit
/// codes: input errors (bad text, bad arithmetic requests), hypothesis
/// violations (the inputs do not meet a theorem's assumptions) and theorem
/// violations (the engine found a counterexample to a proven statement,
/// which means the engine is broken).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid angle {text:?}: {reason}")]
    InvalidAngle { text: String, reason: String },

    #[error("invalid cyclotomic expression {text:?}: {reason}")]
    InvalidExpr { text: String, reason: String },

    #[error("division by zero in Q(zeta_{order})")]
    DivisionByZero { order: u32 },

    #[error("{0} is not an n-th root of unity for n = {1}")]
    NotRootOfUnity(String, u32),

    #[error("arc lengths sum to {0} turns, which wraps the full circle")]
    SumWrapsCircle(String),

    #[error("{0}")]
    Input(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the zero distribution has no hull")]
    ZeroDistribution,

    #[error("support point {0} lies outside R_n of the given arc")]
    SupportOutsideOrbit(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("THEOREM-VIOLATION: {0}")]
    TheoremViolation(String),
}

impl Error {
    pub fn is_hypothesis(&self) -> bool {
        matches!(self, Error::Hypothesis(_))
    }

    pub fn is_theorem_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
