use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("failed invariants: {}", .0.join(", "))]
    Invariant(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

/// One-line diagnostic written to standard error.
#[derive(Debug, Serialize)]
pub struct Diagnostic<'a> {
    pub error: &'a str,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<&'a [String]>,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Numeric(_) => "numeric",
            CliError::Invariant(_) => "invariant",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invariant(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    pub fn diagnostic_json(&self) -> String {
        let failed = match self {
            CliError::Invariant(names) => Some(names.as_slice()),
            _ => None,
        };
        let d = Diagnostic {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
            failed,
        };
        serde_json::to_string(&d).expect("diagnostic serializes")
    }
}

impl From<wavequanta::Error> for CliError {
    fn from(e: wavequanta::Error) -> Self {
        use wavequanta::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::Unstable { .. }
            | E::GridMismatch(_)
            | E::NonUniformGrid(_)
            | E::TooFewSamples { .. } => CliError::Validation(e.to_string()),
            E::RealityViolated { .. } | E::ZeroFrequencyMode { .. } | E::ZeroWave | E::Numerical(_) => {
                CliError::Numeric(e.to_string())
            }
            E::Format(_) => CliError::Parse(e.to_string()),
            E::Io(_) => CliError::Io(e.to_string()),
        }
    }
}

pub fn invalid(field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("`{field}`: {reason}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_diagnostics() {
        let e = CliError::Invariant(vec!["energy_drift".into()]);
        assert_eq!(e.exit_code(), 1);
        let v: serde_json::Value = serde_json::from_str(&e.diagnostic_json()).unwrap();
        assert_eq!(v["error"], "invariant");
        assert_eq!(v["failed"][0], "energy_drift");
        let core = wavequanta::Error::Unstable { dt: 2.0, bound: 1.0 };
        assert_eq!(CliError::from(core).exit_code(), 3);
        assert_eq!(CliError::from(wavequanta::Error::ZeroWave).exit_code(), 4);
        assert_eq!(CliError::Parse("x".into()).exit_code(), 2);
    }
}
