use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),
    #[error("contraction error: {0}")]
    Contraction(String),
    #[error("singular scalar product: radical spanned by {radical:?}")]
    Singular { radical: Vec<Vec<String>> },
    #[error("homotopy error: {0}")]
    Homotopy(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("window error: {0}")]
    Window(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
