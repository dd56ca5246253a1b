//! Residual gates shared by the verified operations.

use crate::error::{Error, Result};

/// A measured residual together with the bound it must respect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
    pub bound: f64,
    /// Reported but never gated.
    pub advisory: bool,
}

impl Residual {
    pub fn new(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, advisory: false }
    }

    pub fn advisory(name: &'static str, value: f64, bound: f64) -> Self {
        Self { name, value, bound, advisory: true }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.bound
    }

    /// `Ok(self)` when within bound or advisory, `VerificationFailed`
    /// otherwise.
    pub fn gate(self) -> Result<Self> {
        if self.advisory || self.passed() {
            Ok(self)
        } else {
            Err(Error::VerificationFailed { what: self.name, residual: self.value, bound: self.bound })
        }
    }
}
