//! In-memory outputs and invariant checks.
//!
//! Every scenario builds its complete file set in memory first; nothing
//! touches the output directory until the computation has succeeded.

use crate::error::CliError;
use serde::Serialize;
use std::fs;
use std::path::Path;

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn text(&mut self, name: &str, body: String) {
        self.files.push((name.to_string(), body.into_bytes()));
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        self.text(name, s);
    }

    pub fn bytes(&mut self, name: &str, body: Vec<u8>) {
        self.files.push((name.to_string(), body));
    }

    pub fn extend(&mut self, other: Artifacts) {
        self.files.extend(other.files);
    }

    pub fn names(&self) -> Vec<&str> {
        self.files.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Write every file through a temporary name and rename it into place.
    pub fn write_all(&self, dir: &Path) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        for (name, body) in &self.files {
            let tmp = dir.join(format!(".{name}.partial"));
            fs::write(&tmp, body).map_err(io)?;
            fs::rename(&tmp, dir.join(name)).map_err(io)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
    Within,
    Holds,
    /// Reported only.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: Bound,
    pub limit: Vec<f64>,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: Bound::AtMost,
            limit: vec![limit],
            passed: measured <= limit,
        }
    }

    pub fn at_least(name: &str, measured: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: Bound::AtLeast,
            limit: vec![limit],
            passed: measured >= limit,
        }
    }

    pub fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: Bound::Within,
            limit: vec![lo, hi],
            passed: (lo..=hi).contains(&measured),
        }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Check {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            bound: Bound::Holds,
            limit: vec![],
            passed: ok,
        }
    }

    pub fn info(name: &str, measured: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            bound: Bound::Info,
            limit: vec![],
            passed: true,
        }
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let rule = match (self.bound, self.limit.as_slice()) {
            (Bound::AtMost, [l]) => format!("<= {l:e}"),
            (Bound::AtLeast, [l]) => format!(">= {l}"),
            (Bound::Within, [lo, hi]) => format!("in [{lo}, {hi}]"),
            (Bound::Holds, _) => "holds".into(),
            _ => "info".into(),
        };
        format!("{verdict} {} measured={:e} {rule}", self.name, self.measured)
    }
}

/// Result of one scenario: files to write plus the invariants it measured.
#[derive(Debug, Default, Clone)]
pub struct Outcome {
    pub artifacts: Artifacts,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn failed(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_bounds() {
        assert!(Check::at_most("a", 1e-7, 1e-6).passed);
        assert!(!Check::at_most("a", f64::NAN, 1e-6).passed);
        assert!(Check::at_least("b", 1.95, 1.9).passed);
        assert!(!Check::within("c", 0.46, 0.47, 0.50).passed);
        assert!(Check::info("d", 3.0).passed);
        assert!(Check::at_most("e", 2.0, 1.0).line().starts_with("FAIL e"));
    }

    #[test]
    fn write_leaves_no_temporaries() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = Artifacts::default();
        a.text("x.csv", "1\n".into());
        a.json("y.json", &serde_json::json!({"k": 1}));
        a.write_all(dir.path()).unwrap();
        let mut names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert_eq!(names, ["x.csv", "y.json"]);
    }
}
