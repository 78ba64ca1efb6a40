//! Right-hand side, time stepping and exactness checks on the lattice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Evaluator, Trajectory};
use crate::params::{GardnerParams, SINGULAR_TOL};

/// du_n/dt from the five-site stencil u_{n−2} .. u_{n+2}.
#[inline]
pub fn rhs_point(s: [f64; 5], p: &GardnerParams) -> f64 {
    let [um2, um1, u, up1, up2] = s;
    let (a, b) = (p.a, p.b);
    let quad = up1 * up1 + up1 * up2 + u * up1 - u * um1 - um1 * um2 - um1 * um1;
    let cubic = up1 * up1 * u + up1 * up1 * up2 - um1 * um1 * um2 - um1 * um1 * u;
    let lin = um2 + 2.0 * up1 - 2.0 * um1 - up2;
    -(1.0 - a * u - b * u * u) * (a * quad + b * cubic + lin)
}

/// Evaluates the rhs on `out.len()` interior sites of `padded`,
/// which carries two ghost values on each side.
pub fn rhs(padded: &[f64], p: &GardnerParams, out: &mut [f64]) {
    assert_eq!(padded.len(), out.len() + 4, "need two ghost sites per side");
    for (i, o) in out.iter_mut().enumerate() {
        *o = rhs_point([padded[i], padded[i + 1], padded[i + 2], padded[i + 3], padded[i + 4]], p);
    }
}

/// Interior values on [n_lo, n_lo + len) plus two ghost sites per side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeState {
    pub n_lo: i64,
    pub t: f64,
    pub values: Vec<f64>,
    pub left: [f64; 2],
    pub right: [f64; 2],
}

impl LatticeState {
    pub fn new(n_lo: i64, t: f64, values: Vec<f64>, left: [f64; 2], right: [f64; 2]) -> Result<Self> {
        if values.len() < 5 {
            return Err(Error::Domain(format!("window needs at least 5 sites, got {}", values.len())));
        }
        if !left.iter().chain(&right).all(|v| v.is_finite()) {
            return Err(Error::Domain("ghost values must be finite".into()));
        }
        Ok(LatticeState { n_lo, t, values, left, right })
    }

    pub fn from_model<M: Evaluator + ?Sized>(m: &M, n_lo: i64, n_hi: i64, t: f64) -> Result<Self> {
        let values = (n_lo..=n_hi).map(|n| m.u(n, t)).collect::<Result<Vec<_>>>()?;
        let left = [m.u(n_lo - 2, t)?, m.u(n_lo - 1, t)?];
        let right = [m.u(n_hi + 1, t)?, m.u(n_hi + 2, t)?];
        LatticeState::new(n_lo, t, values, left, right)
    }

    pub fn n_hi(&self) -> i64 {
        self.n_lo + self.values.len() as i64 - 1
    }
}

/// How the two sites beyond each edge are filled.
#[derive(Clone, Copy)]
pub enum Ghosts<'a> {
    /// Refreshed from an exact solution at every stage time.
    Model(&'a dyn Evaluator),
    /// Held at the state's initial ghost values.
    Constant,
}

/// Largest number of steps `integrate` accepts.
pub const MAX_STEPS: f64 = 1e7;

/// Classical fixed-step RK4 from `init.t` to `t_end`.
///
/// The step is shrunk so the interval is covered exactly. `snapshots` evenly
/// spaced states (in steps, always including both ends) are returned.
pub fn integrate(
    init: &LatticeState,
    t_end: f64,
    dt: f64,
    ghosts: Ghosts<'_>,
    p: &GardnerParams,
    snapshots: usize,
) -> Result<Trajectory> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    let span = t_end - init.t;
    let raw = (span.abs() / dt).ceil();
    if raw > MAX_STEPS {
        return Err(Error::Domain(format!("{raw} steps exceed the limit of {MAX_STEPS}")));
    }
    let steps = raw.max(1.0) as usize;
    let h = span / steps as f64;
    let snapshots = snapshots.max(2);
    let marks: Vec<usize> =
        (0..snapshots).map(|k| (k as f64 * steps as f64 / (snapshots - 1) as f64).round() as usize).collect();

    let len = init.values.len();
    let n_lo = init.n_lo;
    let n_hi = init.n_hi();
    let mut u = init.values.clone();
    let mut pad = vec![0.0; len + 4];
    let mut k = [vec![0.0; len], vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    let mut stage = vec![0.0; len];

    let fill = |pad: &mut [f64], vals: &[f64], t: f64| -> Result<()> {
        match ghosts {
            Ghosts::Model(m) => {
                pad[0] = m.u(n_lo - 2, t)?;
                pad[1] = m.u(n_lo - 1, t)?;
                pad[len + 2] = m.u(n_hi + 1, t)?;
                pad[len + 3] = m.u(n_hi + 2, t)?;
            }
            Ghosts::Constant => {
                pad[..2].copy_from_slice(&init.left);
                pad[len + 2..].copy_from_slice(&init.right);
            }
        }
        pad[2..len + 2].copy_from_slice(vals);
        Ok(())
    };

    let mut times = Vec::with_capacity(snapshots);
    let mut values = Vec::with_capacity(snapshots);
    let mut next_mark = 0;
    let mut record = |i: usize, u: &[f64], times: &mut Vec<f64>, values: &mut Vec<Vec<f64>>| {
        while next_mark < marks.len() && marks[next_mark] == i {
            times.push(if i == steps { t_end } else { init.t + i as f64 * h });
            values.push(u.to_vec());
            next_mark += 1;
        }
    };
    record(0, &u, &mut times, &mut values);

    for i in 0..steps {
        let t = init.t + i as f64 * h;
        fill(&mut pad, &u, t)?;
        rhs(&pad, p, &mut k[0]);
        for j in 0..len {
            stage[j] = u[j] + 0.5 * h * k[0][j];
        }
        fill(&mut pad, &stage, t + 0.5 * h)?;
        rhs(&pad, p, &mut k[1]);
        for j in 0..len {
            stage[j] = u[j] + 0.5 * h * k[1][j];
        }
        fill(&mut pad, &stage, t + 0.5 * h)?;
        rhs(&pad, p, &mut k[2]);
        for j in 0..len {
            stage[j] = u[j] + h * k[2][j];
        }
        fill(&mut pad, &stage, t + h)?;
        rhs(&pad, p, &mut k[3]);
        let mut finite = true;
        for j in 0..len {
            u[j] += h / 6.0 * (k[0][j] + 2.0 * k[1][j] + 2.0 * k[2][j] + k[3][j]);
            finite &= u[j].is_finite();
        }
        if !finite {
            return Err(Error::NonFinite { last_good_t: t });
        }
        record(i + 1, &u, &mut times, &mut values);
    }
    Ok(Trajectory { n_lo, n_hi, times, values })
}

/// Fourth-order central difference of u(n, ·) at t.
fn time_derivative<M: Evaluator + ?Sized>(m: &M, n: i64, t: f64, h: f64) -> Result<f64> {
    let f = |s: f64| m.u(n, t + s * h);
    Ok((-f(2.0)? + 8.0 * f(1.0)? - 8.0 * f(-1.0)? + f(-2.0)?) / (12.0 * h))
}

/// max |du/dt − rhs| over the window and times; du/dt by finite differences with step `h`.
pub fn ode_residual<M: Evaluator + ?Sized>(
    m: &M,
    n_lo: i64,
    n_hi: i64,
    times: &[f64],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("h must be positive, got {h}")));
    }
    let p = m.params();
    let mut worst: f64 = 0.0;
    for &t in times {
        let pad = (n_lo - 2..=n_hi + 2).map(|n| m.u(n, t)).collect::<Result<Vec<_>>>()?;
        for (i, n) in (n_lo..=n_hi).enumerate() {
            let r = rhs_point([pad[i], pad[i + 1], pad[i + 2], pad[i + 3], pad[i + 4]], &p);
            let d = time_derivative(m, n, t, h)?;
            worst = worst.max((d - r).abs());
        }
    }
    Ok(worst)
}

pub type Mat2 = [[f64; 2]; 2];

/// U_n and V_n of the Lax pair at spectral parameter λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaxMatrices {
    pub lambda: f64,
    pub u: Mat2,
    pub v: Mat2,
}

/// Builds U_n, V_n from the samples u_{n−2} .. u_{n+1}.
pub fn lax_matrices(window: [f64; 4], lambda: f64, p: &GardnerParams) -> Result<LaxMatrices> {
    if lambda.abs() < SINGULAR_TOL {
        return Err(Error::SingularPoint("Lax pair is singular at lambda = 0".into()));
    }
    let (a, b) = (p.a, p.b);
    let s = p.disc();
    let sg = p.sigma as f64;
    let rad = (sg * s).sqrt();
    let [um2, um1, u0, up1] = window;
    let w = |x: f64| 2.0 * b * x + a;
    let (wm2, wm1, w0, wp1) = (w(um2), w(um1), w(u0), w(up1));
    let bb = b * b;
    let k1 = |l: f64| 3.0 * a * a * s / (8.0 * bb) * l * l - 3.0 * a * a * w0 * wm1 / (8.0 * bb) - 3.0 * a * a / (2.0 * b);
    let l1 = |l: f64| 3.0 * a * a * s / (8.0 * bb) * (w0 / rad * l + wm1 / rad / l);
    let k2 = |l: f64| {
        (2.0 * wm1 * w0 - wm2 * w0 - wp1 * wm1) / s
            + (w0 * w0 * wm1 * wm1 + w0 * wm1 * wm1 * wm2 + w0 * w0 * wm1 * wp1) / (s * s)
            - 1.5
            - (l * l - l.powi(-2)) * w0 * wm1 / s
            + 2.0 * l.powi(-2)
            + l.powi(4) / 4.0
            - 3.0 / (4.0 * l.powi(4))
    };
    let l2 = |l: f64| {
        (l.powi(3) * w0
            + l * (2.0 * b * up1 - 4.0 * b * u0 - a - 2.0 * (b * um1 + b * up1 + a) * w0 * w0 / s)
            + (2.0 * b * um2 - 4.0 * b * um1 - a - 2.0 * (b * um2 + b * u0 + a) * wm1 * wm1 / s) / l
            + wm1 / l.powi(3))
            / rad
    };
    let f = (s / (4.0 * b)).powi(2);
    let li = 1.0 / lambda;
    let v = [
        [k1(lambda) + f * k2(lambda), l1(lambda) + f * l2(lambda)],
        [sg * (l1(li) + f * l2(li)), k1(li) + f * k2(li)],
    ];
    let u = [[lambda, w0 / rad], [sg * w0 / rad, li]];
    Ok(LaxMatrices { lambda, u, v })
}

fn mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut z = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    z
}

/// ‖dU_n/dt − (V_{n+1}U_n − U_nV_n)‖_max with du_n/dt taken from the rhs.
pub fn zero_curvature_residual<M: Evaluator + ?Sized>(m: &M, lambda: f64, n: i64, t: f64) -> Result<f64> {
    let p = m.params();
    let s = (n - 2..=n + 2).map(|k| m.u(k, t)).collect::<Result<Vec<_>>>()?;
    let here = lax_matrices([s[0], s[1], s[2], s[3]], lambda, &p)?;
    let next = lax_matrices([s[1], s[2], s[3], s[4]], lambda, &p)?;
    let du = rhs_point([s[0], s[1], s[2], s[3], s[4]], &p);
    let off = 2.0 * p.b * du / (p.sigma as f64 * p.disc()).sqrt();
    let du_mat = [[0.0, off], [p.sigma as f64 * off, 0.0]];
    let left = mul(&next.v, &here.u);
    let right = mul(&here.u, &here.v);
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((du_mat[i][j] - (left[i][j] - right[i][j])).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ConstantField;
    use proptest::prelude::*;

    fn p() -> GardnerParams {
        GardnerParams::new(1.0, -1.0, -1).unwrap()
    }

    /// Same bracket expanded term by term.
    fn rhs_expanded(s: [f64; 5], p: &GardnerParams) -> f64 {
        let [a2, a1, u, b1, b2] = s;
        let (a, b) = (p.a, p.b);
        let terms = [
            a * b1 * b1,
            a * b1 * b2,
            a * u * b1,
            -a * u * a1,
            -a * a1 * a2,
            -a * a1 * a1,
            b * b1 * b1 * u,
            b * b1 * b1 * b2,
            -b * a1 * a1 * a2,
            -b * a1 * a1 * u,
            a2,
            2.0 * b1,
            -2.0 * a1,
            -b2,
        ];
        let pre = 1.0 - a * u - b * u * u;
        -terms.iter().map(|x| pre * x).sum::<f64>()
    }

    #[test]
    fn backgrounds_are_fixed_points() {
        let p = p();
        let bg = p.background();
        assert_eq!(rhs_point([bg; 5], &p), 0.0);
        let q = GardnerParams::new(1.0, 1.0, 1).unwrap();
        for c in [0.7, -0.7] {
            let lvl = (c * q.disc().sqrt() - q.a) / (2.0 * q.b);
            assert!(rhs_point([lvl; 5], &q).abs() < 1e-15);
        }
    }

    #[test]
    fn integrate_background_constant_ghosts() {
        let p = p();
        let st = LatticeState::new(-5, 0.0, vec![0.5; 11], [0.5; 2], [0.5; 2]).unwrap();
        let tr = integrate(&st, 1.0, 1e-3, Ghosts::Constant, &p, 3).unwrap();
        assert_eq!(tr.times, vec![0.0, 0.5, 1.0]);
        assert!(tr.values.iter().flatten().all(|&v| (v - 0.5).abs() < 1e-12));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(LatticeState::new(0, 0.0, vec![0.0; 4], [0.0; 2], [0.0; 2]).is_err());
        let st = LatticeState::new(0, 0.0, vec![0.5; 6], [0.5; 2], [0.5; 2]).unwrap();
        assert!(integrate(&st, 1.0, 0.0, Ghosts::Constant, &p(), 2).is_err());
        assert!(integrate(&st, 1e9, 1e-3, Ghosts::Constant, &p(), 2).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let p = p();
        let st = LatticeState::new(0, 0.0, vec![0.5, 40.0, -30.0, 55.0, 0.5, 0.5], [0.5; 2], [0.5; 2]).unwrap();
        match integrate(&st, 10.0, 0.1, Ghosts::Constant, &p, 2) {
            Err(Error::NonFinite { last_good_t }) => assert!(last_good_t >= 0.0),
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn background_residuals_vanish() {
        let m = ConstantField { params: p(), value: 0.5 };
        assert!(ode_residual(&m, -5, 5, &[0.0, 1.0], 1e-4).unwrap() <= 1e-12);
        for l in [1.2, 1.5, 2.0, 3.0, 5.0] {
            assert!(zero_curvature_residual(&m, l, 0, 0.0).unwrap() <= 1e-12);
        }
        assert!(zero_curvature_residual(&m, 0.0, 0, 0.0).is_err());
    }

    #[test]
    fn background_v_is_diagonal_omega() {
        let p = p();
        let lx = lax_matrices([0.5; 4], 1.3, &p).unwrap();
        let (w1, w2) = crate::spectral::omega_pair(1.3, &p).unwrap();
        assert!((lx.v[0][0] - w1).abs() < 1e-12 && (lx.v[1][1] - w2).abs() < 1e-12);
        assert!(lx.v[0][1].abs() < 1e-12 && lx.v[1][0].abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn dual_transcription(s in prop::array::uniform5(-2.0f64..2.0), a in -2.0f64..2.0, b in -2.0f64..-0.1) {
            let p = GardnerParams::new(a, b, -1).unwrap();
            let x = rhs_point(s, &p);
            let y = rhs_expanded(s, &p);
            prop_assert!((x - y).abs() <= 1e-13 * (1.0 + x.abs()) * 10.0);
        }

        #[test]
        fn translation_equivariance(v in prop::collection::vec(-2.0f64..2.0, 12)) {
            let p = p();
            let mut out = vec![0.0; 8];
            rhs(&v, &p, &mut out);
            let mut shifted = vec![0.0; 7];
            rhs(&v[1..], &p, &mut shifted);
            prop_assert_eq!(&out[1..], &shifted[..]);
        }

        #[test]
        fn polarity_mirror(s in prop::array::uniform5(-1.5f64..2.5)) {
            // v = −a/b − u is mapped to −rhs(u)
            let p = p();
            let c = -p.a / p.b;
            let x = rhs_point(s, &p);
            let y = rhs_point(s.map(|v| c - v), &p);
            prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()), "{} {}", x, y);
        }
    }
}
