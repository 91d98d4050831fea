use thiserror::Error;

/// Errors produced by parsing, validation and the constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("empty production body for `{0}`")]
    EpsilonProduction(String),

    #[error("malformed input: {0}")]
    Invalid(String),

    #[error("the language of the grammar is empty (start symbol `{0}` is useless)")]
    EmptyLanguage(String),

    #[error("grammar is not in Chomsky normal form: {0}")]
    NotCnf(String),

    #[error("grammar is not bounded by the given words: `{0}` is generated")]
    NotBounded(String),

    #[error("variable `{variable}` has self-embedding contexts over several letters ({letters})")]
    InconsistentBorder { variable: String, letters: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {what} > {limit}")]
    Budget { what: &'static str, limit: usize },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("search caps reached on `{0}`")]
    Inconclusive(String),

    #[error("empty word has no first or last letter")]
    EmptyWord,

    #[error("word `{0}` is not sorted along the alphabet order")]
    Unsorted(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}
