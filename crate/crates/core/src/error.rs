use thiserror::Error;

use crate::rational::Rational;

/// Errors raised by the exact probability toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot draw from an empty urn")]
    EmptyUrn,
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(String),
    #[error("value {value} is outside the range {range}")]
    OutOfRange { value: String, range: String },
    #[error("bad beta parameters: alpha = {alpha}, beta = {beta}")]
    BadParams { alpha: String, beta: String },
    #[error("weight {weight} of atom {atom} is negative")]
    NegativeWeight { atom: String, weight: String },
    #[error("weights sum to {0}, not 1")]
    NotNormalized(String),
    #[error("not exchangeable: outcome {outcome} has weight {weight} but its swap has weight {swapped_weight}")]
    NotExchangeable {
        outcome: String,
        weight: Rational,
        swapped_weight: Rational,
    },
    #[error("not a cone: level {level}, atom {atom}: {lhs} != {rhs}")]
    NotACone {
        level: usize,
        atom: String,
        lhs: Rational,
        rhs: Rational,
    },
    #[error("not completely monotone: (-1)^{k} (D^{k} m)_{n} = {value} < 0")]
    NotCompletelyMonotone { k: usize, n: usize, value: Rational },
    #[error("horizon exceeded: requested {requested}, available {available}")]
    HorizonExceeded { requested: usize, available: usize },
    #[error("candidate has no exact rational representation: {0}")]
    InexactCandidate(String),
    #[error("malformed level {level}: {reason}")]
    MalformedCone { level: usize, reason: String },
    #[error("parse error in {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("json error: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
