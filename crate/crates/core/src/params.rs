use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance from a pole or branch point below which inputs are rejected.
pub const SINGULAR_TOL: f64 = 1e-9;

/// Coefficients of the lattice equation and the involution sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GardnerParams {
    pub a: f64,
    pub b: f64,
    pub sigma: i32,
}

impl GardnerParams {
    pub fn new(a: f64, b: f64, sigma: i32) -> Result<Self> {
        let p = GardnerParams { a, b, sigma };
        p.check()?;
        Ok(p)
    }

    pub fn check(&self) -> Result<()> {
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(Error::Domain("a and b must be finite".into()));
        }
        if self.b == 0.0 {
            return Err(Error::Domain("b must be non-zero".into()));
        }
        if self.sigma != 1 && self.sigma != -1 {
            return Err(Error::Domain(format!("sigma must be +1 or -1, got {}", self.sigma)));
        }
        Ok(())
    }

    /// a² + 4b.
    pub fn disc(&self) -> f64 {
        self.a * self.a + 4.0 * self.b
    }

    /// The symmetric far-field level −a/(2b).
    pub fn background(&self) -> f64 {
        -self.a / (2.0 * self.b)
    }

    /// Soliton families need σ = −1 and a² + 4b < 0.
    pub fn require_symmetric(&self) -> Result<()> {
        self.check()?;
        if self.sigma != -1 {
            return Err(Error::Regime(format!(
                "soliton families need sigma = -1, got {}",
                self.sigma
            )));
        }
        if self.disc() >= 0.0 {
            return Err(Error::Regime(format!(
                "soliton families need a^2 + 4b < 0, got {}",
                self.disc()
            )));
        }
        Ok(())
    }

    /// Step-like families need σ = +1 and a² + 4b > 0.
    pub fn require_steplike(&self) -> Result<()> {
        self.check()?;
        if self.sigma != 1 {
            return Err(Error::Regime(format!(
                "step-like families need sigma = +1, got {}",
                self.sigma
            )));
        }
        if self.disc() <= 0.0 {
            return Err(Error::Regime(format!(
                "step-like families need a^2 + 4b > 0, got {}",
                self.disc()
            )));
        }
        Ok(())
    }
}

/// A real discrete eigenvalue λ > 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub lambda: f64,
}

impl SpectralPoint {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 1.0 {
            return Err(Error::Domain(format!("eigenvalue must satisfy lambda > 1, got {lambda}")));
        }
        if lambda - 1.0 < SINGULAR_TOL {
            return Err(Error::SingularPoint(format!("lambda = {lambda} is too close to 1")));
        }
        Ok(SpectralPoint { lambda })
    }
}
