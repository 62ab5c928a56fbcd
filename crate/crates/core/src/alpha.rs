use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ExpectileError, Result};

/// Asymmetry level of an expectile, validated to the open interval (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct AlphaLevel(f64);

impl AlphaLevel {
    pub const HALF: AlphaLevel = AlphaLevel(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(AlphaLevel(value))
        } else {
            Err(ExpectileError::InvalidAlpha(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The level `1 - alpha` used by the reflection `e_a(X) = -e_{1-a}(-X)`.
    pub fn complement(self) -> Self {
        AlphaLevel(1.0 - self.0)
    }

    pub fn is_half(self) -> bool {
        self.0 == 0.5
    }

    pub fn below_half(self) -> bool {
        self.0 < 0.5
    }

    /// Lipschitz constant of the one-sided map at this level.
    pub fn contraction_constant(self) -> f64 {
        let a = self.0;
        if a < 0.5 {
            (1.0 - 2.0 * a) / (1.0 - a)
        } else {
            (2.0 * a - 1.0) / a
        }
    }
}

impl TryFrom<f64> for AlphaLevel {
    type Error = ExpectileError;

    fn try_from(value: f64) -> Result<Self> {
        AlphaLevel::new(value)
    }
}

impl From<AlphaLevel> for f64 {
    fn from(a: AlphaLevel) -> f64 {
        a.0
    }
}

impl fmt::Display for AlphaLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
