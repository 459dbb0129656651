use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unbound parameter `{0}`")]
    UnboundParam(String),

    #[error("binding for undeclared parameter `{0}`")]
    ExtraParam(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("outcome {0} is not in the model's feasibility list")]
    InfeasibleOutcome(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("unknown action `{action}` for party {party}")]
    UnknownAction { party: String, action: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no parameter set satisfying the constraints found after {draws} draws (sample {sample})")]
    UnsatisfiedAfterBudget { sample: usize, draws: usize },

    #[error("rule amount `{amount}` is not strictly positive ({value})")]
    NonPositiveAmount { amount: String, value: Rational },

    #[error("unknown protocol `{name}`; valid names: {valid}")]
    UnknownProtocol { name: String, valid: String },

    #[error("unknown game variant `{0}`")]
    UnknownGame(String),

    #[error("{0}")]
    InvalidClaim(String),
}
