use std::fmt;
use std::path::Path;

use simplicial_means::Error;

/// A failed command, sorted by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or flag values.
    Usage(String),
    /// Unreadable, malformed or inconsistent input.
    Data(String),
    /// A non-finite value turned up in input or results.
    Numeric(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    /// Attaches the file a library error came from.
    pub fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
        move |e| match Failure::from(e) {
            Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
            Failure::Data(m) => Failure::Data(format!("{}: {m}", path.display())),
            Failure::Numeric(m) => Failure::Numeric(format!("{}: {m}", path.display())),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numeric(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite(_) => Failure::Numeric(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}
