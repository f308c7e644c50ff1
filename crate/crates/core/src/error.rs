use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error{}: {msg}", location(*.line, *.column))]
    Parse {
        msg: String,
        line: Option<usize>,
        column: Option<usize>,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("nondeterministic graphing: {0}")]
    Nondeterministic(String),

    #[error("realiser of edge {edge} is undefined at the current point")]
    RealiserUndefined { edge: usize },

    #[error("runtime error: {0}")]
    Runtime(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("io error: {0}")]
    Io(String),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at {l}:{c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse {
            msg: msg.into(),
            line: None,
            column: None,
        }
    }

    pub fn parse_at(msg: impl Into<String>, line: usize, column: usize) -> Self {
        Error::Parse {
            msg: msg.into(),
            line: Some(line),
            column: Some(column),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            msg: e.to_string(),
            line: Some(e.line()),
            column: Some(e.column()),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
