use std::fmt;

/// Stable diagnostic codes for document parsing failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseCode {
    /// Missing or malformed `format ... v1` header.
    Header,
    /// A line did not match the grammar.
    Syntax,
    /// A key that the format does not define.
    UnknownKey,
    /// A required line is absent.
    MissingKey,
    /// A singleton key appeared twice.
    RepeatedKey,
    /// Candidate declared twice.
    DuplicateCandidate,
    /// A vote or agenda that is not a permutation of the universe.
    WrongUniverse,
    /// Budgets or candidate sets that contradict the problem shape.
    BudgetShape,
    /// A numeric field out of range.
    BadNumber,
}

impl ParseCode {
    pub fn code(self) -> &'static str {
        match self {
            ParseCode::Header => "E100",
            ParseCode::Syntax => "E101",
            ParseCode::UnknownKey => "E102",
            ParseCode::MissingKey => "E103",
            ParseCode::RepeatedKey => "E104",
            ParseCode::DuplicateCandidate => "E110",
            ParseCode::WrongUniverse => "E111",
            ParseCode::BudgetShape => "E120",
            ParseCode::BadNumber => "E130",
        }
    }
}

impl fmt::Display for ParseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("{code} at line {line}: {message}")]
    Parse {
        code: ParseCode,
        line: usize,
        message: String,
    },
    /// A structurally invalid value, tagged with the diagnostic code a parser
    /// would report for it.
    #[error("{code}: {message}")]
    Invalid { code: ParseCode, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub fn invalid(code: ParseCode, message: impl Into<String>) -> Self {
        Error::Invalid {
            code,
            message: message.into(),
        }
    }

    pub(crate) fn parse(code: ParseCode, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            code,
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Parse { .. } | Error::Invalid { .. } | Error::Precondition(_) => 2,
            Error::Resource(_) => 3,
            Error::Invariant(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
