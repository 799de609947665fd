use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the region where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of the gamma function at {0}")]
    Pole(f64),

    /// The requested integral is infinite.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Potential densities are not evaluated on the diagonal x = y.
    #[error("diagonal point x = y = {0} is not supported")]
    Diagonal(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("empty record stream")]
    EmptyStream,

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("evaluation failed at abscissa {abscissa}: {source}")]
    AtAbscissa {
        abscissa: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
