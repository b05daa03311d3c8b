//! Unit conventions. Everything in this crate works in units with 2μ = 1;
//! the mass never appears as a parameter. ħ is carried explicitly so that
//! the ħ → 0 classical limit can be probed at runtime.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64) -> Result<Self> {
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hbar must be finite and positive, got {hbar}"
            )));
        }
        Ok(Self { hbar })
    }

    /// ħ = 1.
    pub fn natural() -> Self {
        Self { hbar: 1.0 }
    }

    #[inline]
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    #[inline]
    pub fn hbar_sq(&self) -> f64 {
        self.hbar * self.hbar
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_hbar() {
        assert!(UnitSystem::new(0.0).is_err());
        assert!(UnitSystem::new(-1.0).is_err());
        assert!(UnitSystem::new(f64::NAN).is_err());
        assert!(UnitSystem::new(0.5).is_ok());
    }
}
