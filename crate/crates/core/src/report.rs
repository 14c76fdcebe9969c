//! Structured outcome of a single inequality check.

use serde::{Deserialize, Serialize};

/// Outcome of checking one inequality.
///
/// `margin` is the signed slack of the inequality: for a check of the form
/// `lhs <= rhs` it is `rhs - lhs`, for `lhs >= rhs` it is `lhs - rhs`. In both
/// cases a nonnegative margin means the inequality holds exactly, and
/// `pass == (margin >= -tolerance)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub context: String,
}

impl InequalityReport {
    /// Report for `lhs <= rhs` accepted up to `tolerance`.
    pub fn upper(check: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(check.into(), lhs, rhs, rhs - lhs, tolerance)
    }

    /// Report for `lhs >= rhs` accepted up to `tolerance`.
    pub fn lower(check: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::build(check.into(), lhs, rhs, lhs - rhs, tolerance)
    }

    fn build(check: String, lhs: f64, rhs: f64, margin: f64, tolerance: f64) -> Self {
        let pass = margin.is_finite() && margin >= -tolerance;
        Self {
            check,
            lhs,
            rhs,
            margin,
            tolerance,
            pass,
            context: String::new(),
        }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    /// Margin divided by the larger of `|lhs|`, `|rhs|` (0 when both vanish).
    pub fn relative_margin(&self) -> f64 {
        let scale = self.lhs.abs().max(self.rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            self.margin / scale
        }
    }
}

/// Serialized verification record used by the batch reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub params: crate::conditions::OperatorParams,
    pub p: Option<f64>,
    pub eps: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl VerificationRecord {
    pub fn from_report(
        report: &InequalityReport,
        params: crate::conditions::OperatorParams,
        p: Option<f64>,
        eps: Option<f64>,
    ) -> Self {
        Self {
            check: report.check.clone(),
            params,
            p,
            eps,
            lhs: report.lhs,
            rhs: report.rhs,
            margin: report.margin,
            pass: report.pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation() {
        let r = InequalityReport::upper("le", 1.0, 2.0, 0.0);
        assert!(r.pass);
        assert_eq!(r.margin, 1.0);
        let r = InequalityReport::lower("ge", 1.0, 2.0, 0.5);
        assert!(!r.pass);
        let r = InequalityReport::lower("ge", 1.0, 1.4, 0.5);
        assert!(r.pass);
    }

    #[test]
    fn nan_never_passes() {
        assert!(!InequalityReport::upper("nan", f64::NAN, 1.0, 1.0).pass);
    }
}
