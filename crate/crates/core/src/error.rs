use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field is in {found} representation, expected {expected}")]
    Representation {
        expected: &'static str,
        found: &'static str,
    },

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("ratio undefined: {0}")]
    UndefinedRatio(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("non-finite values after t = {last_good_time}")]
    BlowUp { last_good_time: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("data recipe failed: {0}")]
    Data(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
