use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dyadic {numerator}/2^{exponent} lies outside [0,1]")]
    OutOfRange { numerator: String, exponent: u32 },

    #[error("point 1 is outside the half-open unit interval [0,1)")]
    PointIsOne,

    #[error("0 has no preimage in [0,1)")]
    NoPreimage,

    #[error("0 has no doubled point")]
    NoDoubledPoint,

    #[error("level {0} is too deep for a machine-word interval index")]
    LevelTooDeep(u32),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse {what}: {detail}")]
    Parse { what: &'static str, detail: String },

    #[error("invalid {what}: {detail}")]
    InvalidArgument { what: &'static str, detail: String },

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: usize, right: usize },

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("table is not an automorphism: {0}")]
    InvalidTable(String),

    #[error("not an interval exchange: {0}")]
    ExchangeViolation(String),

    #[error("automorphism does not have finite depth")]
    NotFiniteDepth,

    #[error("N must satisfy 1 <= N <= {max}, got {got}")]
    BadDepth { got: u32, max: u32 },

    #[error("exhaustive enumeration refused for N = {0} ((2^N)! permutations); use sampling mode")]
    ExhaustiveRefused(u32),
}

impl Error {
    pub(crate) fn parse(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Parse {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn argument(what: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidArgument {
            what,
            detail: detail.into(),
        }
    }
}
