//! Errors surfaced by the command-line tool, each with a machine-readable
//! code and a process exit code.

use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_RESOURCE: u8 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub code: String,
    pub message: String,
    #[serde(rename = "exit")]
    exit: u8,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Failure { code: "parse".into(), message: message.into(), exit: EXIT_PARSE }
    }

    pub fn validation(code: &str, message: impl Into<String>) -> Self {
        Failure { code: code.into(), message: message.into(), exit: EXIT_VALIDATION }
    }

    pub fn io(path: &str, e: &std::io::Error) -> Self {
        Failure { code: "io".into(), message: format!("{path}: {e}"), exit: EXIT_PARSE }
    }

    pub fn exit_code(&self) -> u8 {
        self.exit
    }
}

impl From<abdyn::Error> for Failure {
    fn from(e: abdyn::Error) -> Self {
        let exit = match &e {
            abdyn::Error::Resource(_) => EXIT_RESOURCE,
            abdyn::Error::InvariantViolation(_) => EXIT_VIOLATION,
            _ => EXIT_VALIDATION,
        };
        Failure { code: e.code().into(), message: e.to_string(), exit }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "error [{}]: {}", self.code, self.message)
    }
}
