use mixid::Error;

/// An error message paired with the process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(2, message)
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(3, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => 2,
            Error::NonFiniteObjective { .. } => 4,
            _ => 3,
        };
        Self::new(code, e.to_string())
    }
}
