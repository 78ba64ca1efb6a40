//! Dispersion rates, velocities, thresholds and the step-like uniformization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{GardnerParams, SINGULAR_TOL};

/// Background rates (ω₁, ω₂) of the time part of the Lax pair.
pub fn omega_pair(lambda: f64, p: &GardnerParams) -> Result<(f64, f64)> {
    if lambda.abs() < SINGULAR_TOL {
        return Err(Error::SingularPoint("omega is singular at lambda = 0".into()));
    }
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    let x = lambda * lambda;
    let x2 = x * x;
    let c = -24.0 * a * a * b;
    let w1 = (c + 6.0 * a * a * s * x + s * s * (x - 1.0).powi(3) * (x + 3.0) / (4.0 * x2))
        / (16.0 * b * b);
    let w2 = (c + 6.0 * a * a * s / x - s * s * (x - 1.0).powi(3) * (3.0 * x + 1.0) / (4.0 * x2))
        / (16.0 * b * b);
    Ok((w1, w2))
}

/// dω₁/dλ and dω₂/dλ.
pub fn omega_derivatives(lambda: f64, p: &GardnerParams) -> Result<(f64, f64)> {
    if lambda.abs() < SINGULAR_TOL {
        return Err(Error::SingularPoint("omega is singular at lambda = 0".into()));
    }
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    let x = lambda * lambda;
    let l5 = lambda.powi(5);
    let sq = (x - 1.0) * (x - 1.0);
    let d1 = 12.0 * a * a * s * lambda + s * s * sq * (x * x + 2.0 * x + 3.0) / l5;
    let d2 = -12.0 * a * a * s / lambda.powi(3) - s * s * sq * (3.0 * x * x + 2.0 * x + 1.0) / l5;
    Ok((d1 / (16.0 * b * b), d2 / (16.0 * b * b)))
}

/// Soliton velocity (ω₂ − ω₁)/(2 log λ).
pub fn soliton_velocity(lambda: f64, p: &GardnerParams) -> Result<f64> {
    if lambda <= 1.0 || lambda - 1.0 < SINGULAR_TOL {
        return Err(Error::SingularPoint(format!("velocity needs lambda > 1, got {lambda}")));
    }
    let (w1, w2) = omega_pair(lambda, p)?;
    Ok((w2 - w1) / (2.0 * lambda.ln()))
}

/// Height of the one-soliton above (or below) the background.
pub fn soliton_amplitude(lambda: f64, p: &GardnerParams) -> f64 {
    (-p.disc()).sqrt() * (lambda * lambda - 1.0 / (lambda * lambda)) / (4.0 * p.b.abs())
}

/// Threshold Q: a soliton moves to the right iff λ² < Q.
pub fn positive_speed_threshold(p: &GardnerParams) -> Result<f64> {
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    if s.abs() < SINGULAR_TOL {
        return Err(Error::SingularPoint("Q is undefined for a^2 + 4b = 0".into()));
    }
    let rad = a.powi(4) - 8.0 * a * a * b;
    if rad < 0.0 {
        return Err(Error::Domain(format!("Q needs a^4 - 8a^2 b >= 0, got {rad}")));
    }
    Ok((-2.0 * (a * a - 2.0 * b) - 3f64.sqrt() * rad.sqrt()) / s)
}

/// C(t) = C(0)·exp((ω₂ − ω₁)t).
pub fn norming_constant(t: f64, lambda: f64, c0: f64, p: &GardnerParams) -> Result<f64> {
    let (w1, w2) = omega_pair(lambda, p)?;
    Ok(c0 * ((w2 - w1) * t).exp())
}

/// (b₁(t), d₁(t)) for a double pole at λ.
pub fn double_pole_constants(
    t: f64,
    lambda: f64,
    b0: f64,
    d0: f64,
    p: &GardnerParams,
) -> Result<(f64, f64)> {
    let (w1, w2) = omega_pair(lambda, p)?;
    let (dw1, dw2) = omega_derivatives(lambda, p)?;
    let e = ((w2 - w1) * t).exp();
    Ok((b0 * e, e * (d0 + b0 * t * (dw2 - dw1))))
}

/// Derivatives of the reflectionless scattering coefficient at λ₁.
///
/// `a1` belongs to a simple zero, `a2` and `a3` to the double zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceDerivatives {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn trace_formulas(lambda1: f64) -> Result<TraceDerivatives> {
    if lambda1 <= 1.0 || lambda1 - 1.0 < SINGULAR_TOL {
        return Err(Error::SingularPoint(format!("trace formulas need lambda > 1, got {lambda1}")));
    }
    let l2 = lambda1 * lambda1;
    let lb2 = 1.0 / l2;
    let d = l2 - lb2;
    Ok(TraceDerivatives {
        a1: 2.0 * lambda1.powi(3) / (l2 * l2 - 1.0),
        a2: 8.0 * l2 / (d * d),
        a3: -24.0 * lambda1 * (3.0 * l2 + lb2) / d.powi(3),
    })
}

/// Reflectionless a(λ) with one simple zero at λ₁ (and its mirror −λ₁).
pub fn scattering_a(lambda: f64, lambda1: f64) -> f64 {
    let l2 = lambda * lambda;
    (l2 - lambda1 * lambda1) / (l2 - 1.0 / (lambda1 * lambda1))
}

/// A point ζ on the uniformized sheet of the step-like problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformizedPoint {
    pub zeta: f64,
    pub r: f64,
    pub k_squared: f64,
    pub lambda_squared: f64,
    /// (λ, k) with λ the positive root; `None` when λ² < 0.
    pub branch: Option<(f64, f64)>,
}

/// r = √(1 − c₀²).
pub fn step_r(c0: f64) -> Result<f64> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::Domain(format!("c0 must lie in (0, 1), got {c0}")));
    }
    Ok((1.0 - c0 * c0).sqrt())
}

pub fn uniformize(zeta: f64, r: f64) -> Result<UniformizedPoint> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("r must lie in (0, 1), got {r}")));
    }
    if !zeta.is_finite() {
        return Err(Error::Domain("zeta must be finite".into()));
    }
    for (bad, name) in [(0.0, "0"), (r, "r"), (1.0 / r, "1/r")] {
        if (zeta - bad).abs() < SINGULAR_TOL {
            return Err(Error::SingularPoint(format!("zeta = {zeta} is a branch point ({name})")));
        }
    }
    let den = r * zeta - 1.0;
    let k_squared = zeta * (zeta - r) / den;
    let lambda_squared = (zeta - r) / (zeta * den);
    let branch = (lambda_squared > 0.0).then(|| {
        let lam = lambda_squared.sqrt();
        (lam, lam * zeta)
    });
    Ok(UniformizedPoint { zeta, r, k_squared, lambda_squared, branch })
}

/// The rational functions p(λ) and q(λ) of the step-like time evolution.
pub fn pq(lambda: f64, c: f64, p: &GardnerParams) -> (f64, f64) {
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    let l2 = lambda * lambda;
    let c2 = c * c;
    let pp = s * (1.0 + l2)
        * (a * a * (1.0 + l2 * l2 + l2 * (4.0 - 2.0 * c2))
            + 4.0 * b * (1.0 + l2 * l2 - 2.0 * l2 * (1.0 + c2)))
        / (16.0 * b * b * lambda.powi(3));
    let inner = |shift: f64| {
        -3.0 + l2
            * (4.0
                + 4.0 * c2
                + l2 * (-26.0 + 4.0 * l2 - 3.0 * l2 * l2 + 4.0 * c2 * (l2 - shift) + 12.0 * c2 * c2))
    };
    let qq = (16.0
        * b
        * b
        * (-(l2 - 1.0).powi(2) * (3.0 + 2.0 * l2 + 3.0 * l2 * l2)
            + 4.0 * c2 * (lambda + lambda.powi(3)).powi(2)
            + 12.0 * c2 * c2 * l2 * l2)
        + a.powi(4) * inner(4.0)
        + 8.0 * a * a * b * inner(1.0))
        / (16.0 * b * b * l2 * l2);
    (pp, qq)
}

/// κ⁽¹⁾ = rp/k + q and κ⁽²⁾ = krp + q at a real point of the sheet.
pub fn kappa_pair(zeta: f64, r: f64, c0: f64, p: &GardnerParams) -> Result<(f64, f64)> {
    let u = uniformize(zeta, r)?;
    let (lam, k) = u.branch.ok_or_else(|| {
        Error::Domain(format!("zeta = {zeta} maps to lambda^2 = {} < 0", u.lambda_squared))
    })?;
    Ok(kappa_on_branch(lam, k, r, c0, p))
}

/// κ pair for an explicit branch (λ, k).
pub fn kappa_on_branch(lam: f64, k: f64, r: f64, c0: f64, p: &GardnerParams) -> (f64, f64) {
    let (pp, qq) = pq(lam, c0, p);
    (r * pp / k + qq, k * r * pp + qq)
}

/// Kink velocity (κ⁽²⁾ − κ⁽¹⁾)(ζ̄)/log k²(ζ), with ζ = 1/ζ̄.
pub fn kink_velocity(zeta_bar: f64, r: f64, c0: f64, p: &GardnerParams) -> Result<f64> {
    let (k1, k2) = kappa_pair(zeta_bar, r, c0, p)?;
    let ks = uniformize(1.0 / zeta_bar, r)?.k_squared;
    if !(ks > 0.0) || (ks - 1.0).abs() < SINGULAR_TOL {
        return Err(Error::Domain(format!("kink velocity needs k^2 > 0 and != 1, got {ks}")));
    }
    Ok((k2 - k1) / ks.ln())
}

/// Closed form of the kink velocity at ζ̄ = (1 − c₀)/r.
pub fn kink_velocity_reduced(c0: f64, p: &GardnerParams) -> f64 {
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    s * c0 * (3.0 * a * a - s * c0 * c0) / (2.0 * b * b * ((1.0 - c0) / (1.0 + c0)).ln())
}
