use serde::Serialize;
use serde_json::Value;

/// Overall verdict of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Passed,
    Failed,
    /// The identity does not apply to the inputs (for instance maximality
    /// under a `phi` with the wrong sign), so no verdict was reached.
    Inapplicable,
}

/// Outcome of one axiom or identity check.
///
/// `passed` is exactly `residual <= tol`. `status` is the verdict, which can
/// additionally fail on structural conditions (such as non-monotone
/// convergence) or be marked inapplicable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: CheckStatus,
    pub passed: bool,
    pub residual: f64,
    pub tol: f64,
    /// Whether `residual` is scaled by `max(1, |lhs|)`.
    pub relative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64, relative: bool) -> Self {
        let passed = residual <= tol;
        Self {
            name: name.into(),
            status: if passed {
                CheckStatus::Passed
            } else {
                CheckStatus::Failed
            },
            passed,
            residual,
            tol,
            relative,
            seed: None,
            witness: Value::Null,
            note: None,
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn mark_failed(mut self, note: impl Into<String>) -> Self {
        self.status = CheckStatus::Failed;
        self.with_note(note)
    }

    pub fn mark_inapplicable(mut self, note: impl Into<String>) -> Self {
        self.status = CheckStatus::Inapplicable;
        self.with_note(note)
    }

    pub fn is_ok(&self) -> bool {
        self.status == CheckStatus::Passed
    }
}

/// `|lhs - rhs| / max(1, |lhs|)`.
pub fn relative_residual(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / lhs.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_tracks_tolerance() {
        assert!(CheckReport::new("x", 1e-13, 1e-12, true).is_ok());
        let r = CheckReport::new("x", 1e-11, 1e-12, true);
        assert!(!r.passed && r.status == CheckStatus::Failed);
        let r = CheckReport::new("x", 0.0, 1e-12, false).mark_inapplicable("sign");
        assert!(r.passed && !r.is_ok());
    }

    #[test]
    fn serializes_lowercase_status() {
        let r = CheckReport::new("x", 0.0, 1.0, false).with_seed(3);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "passed");
        assert_eq!(v["seed"], 3);
        assert!(v.get("note").is_none());
    }

    #[test]
    fn relative_scaling() {
        assert_eq!(relative_residual(10.0, 9.0), 0.1);
        assert_eq!(relative_residual(0.5, 0.25), 0.25);
    }
}
