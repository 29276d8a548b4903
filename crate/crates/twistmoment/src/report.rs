//! Structured results for identity checks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of one numerical identity check: both sides, residual, verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    /// Named parameters, in display order.
    pub parameters: Vec<(String, String)>,
    pub lhs: (f64, f64),
    pub rhs: (f64, f64),
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Truncation lengths, tail bounds, and similar provenance.
    pub truncation: Vec<(String, String)>,
}

impl VerificationReport {
    pub fn new(
        identity: impl Into<String>,
        parameters: Vec<(String, String)>,
        lhs: Complex64,
        rhs: Complex64,
        tolerance: f64,
    ) -> Self {
        let residual = (lhs - rhs).norm();
        VerificationReport {
            identity: identity.into(),
            parameters,
            lhs: (lhs.re, lhs.im),
            rhs: (rhs.re, rhs.im),
            residual,
            tolerance,
            pass: residual < tolerance,
            truncation: Vec::new(),
        }
    }

    pub fn with_truncation(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.truncation.push((key.into(), value.to_string()));
        self
    }

    pub fn lhs_complex(&self) -> Complex64 {
        Complex64::new(self.lhs.0, self.lhs.1)
    }

    pub fn rhs_complex(&self) -> Complex64 {
        Complex64::new(self.rhs.0, self.rhs.1)
    }
}

pub fn param(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}
