use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(i64),

    #[error("operation requires a non-empty set")]
    EmptyInput,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("bisection bracket [{lo}, {hi}] has no sign change")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("no constant w(t) known for |t| = {0}")]
    UnknownConstant(u64),

    #[error("rule {rule} does not apply: {reason}")]
    RuleNotApplicable { rule: String, reason: String },

    #[error("element {element} lies outside the window starting at {start} of length {length}")]
    ElementOutsideWindow { element: u64, start: u64, length: u64 },

    #[error("enumeration of about {estimated} sets exceeds the limit of {limit}")]
    InfeasibleEnumeration { estimated: f64, limit: f64 },

    #[error("the {0} conclusion of the dichotomy is violated")]
    DichotomyViolated(&'static str),

    #[error("cannot parse set literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
