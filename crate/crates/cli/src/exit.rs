use std::fmt;

/// Process exit codes.
pub const OK: i32 = 0;
pub const INPUT: i32 = 2;
pub const UNDECIDED: i32 = 3;
pub const NUMERIC: i32 = 4;

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: INPUT,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Failure {
            code: NUMERIC,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<crn_core::Error> for Failure {
    fn from(e: crn_core::Error) -> Self {
        use crn_core::Error::*;
        match e {
            InfeasibleTotals | NotSteadyState { .. } | Numeric(_) => Failure::numeric(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::input(format!("JSON: {e}"))
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
