//! Kink solutions under the step-like boundary condition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{Evaluator, Trajectory};
use crate::params::GardnerParams;
use crate::spectral::{kappa_pair, kink_velocity, step_r, uniformize};

/// |log(C k^(−2n))| beyond which the far-field level is returned.
const FAR_LOG: f64 = 300.0;
/// Relative phase offset used to step over removable singular points.
const NUDGE: f64 = 1e-7;

/// Far-field data u_n → u_± with c_± = sign_± · c₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepBoundary {
    pub c0: f64,
    pub sign_plus: i32,
    pub sign_minus: i32,
}

impl StepBoundary {
    /// The sign pairing that gives a regular kink for a norming constant of sign `sign_c`.
    pub fn regular_for(c0: f64, sign_c: f64) -> Self {
        let sp = if sign_c > 0.0 { -1 } else { 1 };
        StepBoundary { c0, sign_plus: sp, sign_minus: -sp }
    }

    pub fn c_plus(&self) -> f64 {
        self.sign_plus as f64 * self.c0
    }

    pub fn c_minus(&self) -> f64 {
        self.sign_minus as f64 * self.c0
    }

    pub fn r(&self) -> Result<f64> {
        step_r(self.c0)
    }

    /// (u₋, u₊) = ((c_± √(a²+4b) − a)/(2b)).
    pub fn levels(&self, p: &GardnerParams) -> (f64, f64) {
        let w = p.disc().sqrt();
        let lvl = |c: f64| (c * w - p.a) / (2.0 * p.b);
        (lvl(self.c_minus()), lvl(self.c_plus()))
    }
}

/// Which radical multiplies the reconstructed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Radical {
    /// √(a² + 4b), consistent with the far-field levels.
    #[default]
    Corrected,
    /// √|a² − 4b|, kept only to show that it fails the residual check.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinkSpec {
    pub params: GardnerParams,
    pub boundary: StepBoundary,
    pub zeta_bar1: f64,
    pub c1_0: f64,
    #[serde(default)]
    pub radical: Radical,
}

impl KinkSpec {
    /// The eigenvalue ζ̄₁ = (1 − c₀)/r where λ² = 1.
    pub fn default_zeta_bar(c0: f64) -> Result<f64> {
        Ok((1.0 - c0) / step_r(c0)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.require_steplike()?;
        let bd = &self.boundary;
        let r = bd.r()?;
        for s in [bd.sign_plus, bd.sign_minus] {
            if s != 1 && s != -1 {
                return Err(Error::Domain(format!("boundary signs must be +1 or -1, got {s}")));
            }
        }
        if bd.sign_plus == bd.sign_minus {
            return Err(Error::Regime("equal signs of c+ and c- carry no bound state".into()));
        }
        if !(self.zeta_bar1 > 0.0 && self.zeta_bar1 < 1.0) {
            return Err(Error::Domain(format!("zeta_bar1 must lie in (0, 1), got {}", self.zeta_bar1)));
        }
        if self.c1_0 == 0.0 || !self.c1_0.is_finite() {
            return Err(Error::Domain("C1(0) must be non-zero".into()));
        }
        uniformize(self.zeta_bar1, r)?;
        let u1 = uniformize(1.0 / self.zeta_bar1, r)?;
        if !(u1.k_squared > 0.0) || u1.branch.is_none() {
            return Err(Error::Domain(format!(
                "zeta_bar1 = {} is off the real part of the sheet",
                self.zeta_bar1
            )));
        }
        Ok(())
    }
}

/// Kink from the 5×5 reflectionless system.
#[derive(Debug, Clone)]
pub struct Kink {
    spec: KinkSpec,
    r: f64,
    /// (κ⁽¹⁾ − κ⁽²⁾) at ζ₁ = 1/ζ̄₁.
    rate: f64,
    log_k2: f64,
    velocity: f64,
}

impl Kink {
    pub fn new(spec: KinkSpec) -> Result<Self> {
        let k = Self::new_unchecked(spec)?;
        k.check_regular()?;
        Ok(k)
    }

    /// Builds the evaluator without scanning for poles.
    pub fn new_unchecked(spec: KinkSpec) -> Result<Self> {
        spec.validate()?;
        let c0 = spec.boundary.c0;
        let r = spec.boundary.r()?;
        let z1 = 1.0 / spec.zeta_bar1;
        let (k1, k2) = kappa_pair(z1, r, c0, &spec.params)?;
        let log_k2 = uniformize(z1, r)?.k_squared.ln();
        let velocity = kink_velocity(spec.zeta_bar1, r, c0, &spec.params)?;
        Ok(Kink { spec, r, rate: k1 - k2, log_k2, velocity })
    }

    pub fn spec(&self) -> &KinkSpec {
        &self.spec
    }

    pub fn velocity(&self) -> f64 {
        self.velocity
    }

    /// (u₋, u₊).
    pub fn far_field(&self) -> (f64, f64) {
        self.spec.boundary.levels(&self.spec.params)
    }

    /// log|C₁(t) k²(ζ₁)^(−n)|.
    fn log_phase(&self, n: i64, t: f64) -> f64 {
        self.spec.c1_0.abs().ln() + self.rate * t - n as f64 * self.log_k2
    }

    fn system(&self, x: f64) -> (Matrix, [f64; 5]) {
        let zb = self.spec.zeta_bar1;
        let z1 = 1.0 / zb;
        let r = self.r;
        let cp = self.spec.boundary.c_plus();
        // x = C k^(−2n); C̄ = −ζ̄² C and k(ζ̄)^(2n) = k(ζ₁)^(−2n)
        let xb = -zb * zb * x;
        let alpha = (zb - r) * x / ((z1 - r) * (zb - z1));
        let beta = (z1 - 1.0 / r) * xb / ((zb - 1.0 / r) * (z1 - zb));
        let m = Matrix::from_rows([
            [1.0, 0.0, -alpha, 0.0, -cp],
            [0.0, 1.0, 0.0, -alpha, 0.0],
            [-beta, 0.0, 1.0, 0.0, 0.0],
            [0.0, -beta, 0.0, 1.0, cp],
            [0.0, 0.0, 0.0, x / ((z1 - r) * z1), 1.0],
        ]);
        (m, [0.0, zb - r, r - 1.0 / z1, 0.0, 1.0])
    }

    /// u as a function of the phase variable x = C k^(−2n).
    fn u_of_phase(&self, x: f64) -> Result<f64> {
        let zb = self.spec.zeta_bar1;
        let (a, b) = (self.spec.params.a, self.spec.params.b);
        let cp = self.spec.boundary.c_plus();
        let (m, rhs) = self.system(x);
        let y = m.solve(&rhs)?;
        let xb = -zb * zb * x;
        let w = cp - xb / (zb - 1.0 / self.r) * y[1] / y[4];
        let rad = match self.spec.radical {
            Radical::Corrected => self.spec.params.disc(),
            Radical::Printed => (a * a - 4.0 * b).abs(),
        };
        Ok(rad.sqrt() / (2.0 * b) * w - a / (2.0 * b))
    }

    fn u_at_log(&self, log_x: f64) -> Result<f64> {
        let sign = self.spec.c1_0.signum();
        let l = log_x.clamp(-FAR_LOG, FAR_LOG);
        match self.u_of_phase(sign * l.exp()) {
            Err(Error::SingularSystem { .. }) => {
                let lo = self.u_of_phase(sign * (l - NUDGE).exp())?;
                let hi = self.u_of_phase(sign * (l + NUDGE).exp())?;
                Ok(0.5 * (lo + hi))
            }
            other => other,
        }
    }

    /// Scans the phase axis for a genuine pole of u.
    fn check_regular(&self) -> Result<()> {
        let sign = self.spec.c1_0.signum();
        let numer4 = |l: f64| {
            let (m, rhs) = self.system(sign * l.exp());
            m.with_column(4, &rhs).det()
        };
        let (lo_u, hi_u) = self.far_field();
        let scale = (hi_u - lo_u).abs().max(1.0);
        let steps = 6000;
        let span = 60.0;
        let mut prev_l = -span;
        let mut prev = numer4(prev_l);
        for i in 1..=steps {
            let l = -span + 2.0 * span * i as f64 / steps as f64;
            let cur = numer4(l);
            if prev.signum() != cur.signum() && prev != 0.0 {
                let (mut a, mut b) = (prev_l, l);
                for _ in 0..80 {
                    let mid = 0.5 * (a + b);
                    if numer4(mid).signum() == prev.signum() {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                let root = 0.5 * (a + b);
                let probe = [root - 1e-6, root + 1e-6]
                    .iter()
                    .map(|&q| self.u_of_phase(sign * q.exp()).map(|u| (u - 0.5 * (lo_u + hi_u)).abs()))
                    .collect::<Result<Vec<_>>>();
                let blown = match probe {
                    Ok(v) => v.iter().any(|&d| d > 1e3 * scale),
                    Err(_) => true,
                };
                if blown {
                    return Err(Error::Regime(format!(
                        "kink is singular: u has a pole at log(C k^-2n) = {root:.6}; \
                         flip the sign of c+ or of C1(0)"
                    )));
                }
            }
            prev_l = l;
            prev = cur;
        }
        Ok(())
    }
}

impl Evaluator for Kink {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        let u = self.u_at_log(self.log_phase(n, t))?;
        if !u.is_finite() {
            return Err(Error::NonFinite { last_good_t: t });
        }
        Ok(u)
    }

    fn params(&self) -> GardnerParams {
        self.spec.params
    }
}

/// Reflectionless theta-condition residual, reported but never enforced.
pub fn theta_condition_check(spec: &KinkSpec) -> Result<f64> {
    let r = spec.boundary.r()?;
    let zb = spec.zeta_bar1;
    let bd = &spec.boundary;
    Ok(bd.c_plus() * bd.c_minus() / (1.0 - r * r) - zb * (r - zb) / (r * zb - 1.0))
}

/// Mid-level crossing of the front in each time slice.
pub fn kink_front_position(tr: &Trajectory, u_minus: f64, u_plus: f64) -> Result<Vec<f64>> {
    let mid = 0.5 * (u_minus + u_plus);
    tr.values
        .iter()
        .zip(&tr.times)
        .map(|(row, &t)| {
            row.windows(2)
                .enumerate()
                .find(|(_, w)| (w[0] - mid) * (w[1] - mid) <= 0.0 && w[0] != w[1])
                .map(|(i, w)| tr.n_lo as f64 + i as f64 + (mid - w[0]) / (w[1] - w[0]))
                .ok_or_else(|| Error::Analysis(format!("no front inside the window at t = {t}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConstantField;

    fn fig8(c1: f64, sign_plus: i32) -> KinkSpec {
        let c0 = 0.7;
        KinkSpec {
            params: GardnerParams::new(1.0, 1.0, 1).unwrap(),
            boundary: StepBoundary { c0, sign_plus, sign_minus: -sign_plus },
            zeta_bar1: KinkSpec::default_zeta_bar(c0).unwrap(),
            c1_0: c1,
            radical: Radical::Corrected,
        }
    }

    #[test]
    fn far_field_levels() {
        let k = Kink::new(fig8(0.5, -1)).unwrap();
        let (um, up) = k.far_field();
        let w = 0.7 * 5f64.sqrt();
        assert!((up - (-w - 1.0) / 2.0).abs() < 1e-14);
        assert!((um - (w - 1.0) / 2.0).abs() < 1e-14);
        assert!((k.u(40, 0.0).unwrap() - up).abs() < 1e-6);
        assert!((k.u(-40, 0.0).unwrap() - um).abs() < 1e-6);
        assert!((k.u(4000, 0.0).unwrap() - up).abs() < 1e-12);
        assert!((k.u(-4000, 0.0).unwrap() - um).abs() < 1e-12);
    }

    #[test]
    fn profile_is_monotone() {
        let k = Kink::new(fig8(0.5, -1)).unwrap();
        let v: Vec<f64> = (-40..=40).map(|n| k.u(n, 0.0).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn singular_sign_pairing_rejected() {
        assert!(matches!(Kink::new(fig8(0.5, 1)), Err(Error::Regime(_))));
        assert!(Kink::new(fig8(-0.5, 1)).is_ok());
        assert!(matches!(Kink::new(fig8(-0.5, -1)), Err(Error::Regime(_))));
        let bd = StepBoundary::regular_for(0.7, 0.5);
        assert_eq!((bd.sign_plus, bd.sign_minus), (-1, 1));
    }

    #[test]
    fn equal_signs_rejected() {
        let mut s = fig8(0.5, -1);
        s.boundary.sign_minus = -1;
        assert!(matches!(s.validate(), Err(Error::Regime(_))));
        let mut s = fig8(0.5, -1);
        s.params = GardnerParams::new(1.0, -1.0, -1).unwrap();
        assert!(matches!(s.validate(), Err(Error::Regime(_))));
    }

    #[test]
    fn theta_residual() {
        let s = fig8(0.5, -1);
        let res = theta_condition_check(&s).unwrap();
        let expect = -1.0 + 0.3 / 1.7;
        assert!((res - expect).abs() < 1e-14, "{res}");
        // equal signs: residual only vanishes on the unit circle
        let mut eq = s;
        eq.boundary.sign_minus = eq.boundary.sign_plus;
        for i in 1..200 {
            eq.zeta_bar1 = i as f64 / 200.0;
            if (eq.zeta_bar1 - eq.boundary.r().unwrap()).abs() < 1e-3 {
                continue;
            }
            assert!(theta_condition_check(&eq).unwrap().abs() > 1e-6);
        }
    }

    #[test]
    fn front_positions() {
        let k = Kink::new(fig8(0.5, -1)).unwrap();
        let (um, up) = k.far_field();
        let tr = Trajectory::sample(&k, -40, 40, &[-1.0, 1.0]).unwrap();
        let x = kink_front_position(&tr, um, up).unwrap();
        let v = (x[1] - x[0]) / 2.0;
        assert!((v / k.velocity() - 1.0).abs() < 0.01, "{v} {}", k.velocity());
        let flat = ConstantField { params: k.params(), value: up };
        let tr = Trajectory::sample(&flat, -5, 5, &[0.0]).unwrap();
        assert!(kink_front_position(&tr, um, up).is_err());
    }

    #[test]
    fn mirrored_signs_mirror_the_field() {
        let k = Kink::new(fig8(0.5, -1)).unwrap();
        let m = Kink::new(fig8(-0.5, 1)).unwrap();
        let bg = k.params().background();
        for n in -20..=20 {
            let a = k.u(n, 0.3).unwrap();
            let b = m.u(n, 0.3).unwrap();
            assert!((a + b - 2.0 * bg).abs() < 1e-10, "n={n} {a} {b}");
        }
        assert_eq!(k.velocity(), m.velocity());
    }
}
