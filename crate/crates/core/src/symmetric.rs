//! Exact solutions on the symmetric background u → −a/(2b).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::Evaluator;
use crate::params::{GardnerParams, SpectralPoint, SINGULAR_TOL};
use crate::spectral::{self, omega_pair, soliton_velocity, trace_formulas};

/// Interaction terms with |log| beyond this are treated as switched off.
const FAR_LOG: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigen {
    pub lambda: f64,
    pub c0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolitonSpec {
    pub params: GardnerParams,
    pub eigenvalues: Vec<Eigen>,
}

impl SolitonSpec {
    pub fn new(params: GardnerParams, eigenvalues: Vec<Eigen>) -> Result<Self> {
        let spec = SolitonSpec { params, eigenvalues };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.require_symmetric()?;
        if self.eigenvalues.is_empty() {
            return Err(Error::Domain("at least one eigenvalue is needed".into()));
        }
        for (i, e) in self.eigenvalues.iter().enumerate() {
            SpectralPoint::new(e.lambda)?;
            if e.c0 == 0.0 || !e.c0.is_finite() {
                return Err(Error::Domain(format!("norming constant {i} must be non-zero")));
            }
            for f in &self.eigenvalues[..i] {
                if (e.lambda - f.lambda).abs() < SINGULAR_TOL {
                    return Err(Error::SingularPoint(format!(
                        "eigenvalues must be distinct, got {} twice",
                        e.lambda
                    )));
                }
            }
        }
        Ok(())
    }

    fn require_count(&self, j: usize) -> Result<()> {
        if self.eigenvalues.len() != j {
            return Err(Error::Domain(format!(
                "expected {j} eigenvalue(s), got {}",
                self.eigenvalues.len()
            )));
        }
        Ok(())
    }
}

/// Rates of the symmetric family at one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    lambda: f64,
    c0: f64,
    /// ω₂ − ω₁.
    rate: f64,
}

impl Mode {
    fn new(e: &Eigen, p: &GardnerParams) -> Result<Self> {
        let (w1, w2) = omega_pair(e.lambda, p)?;
        Ok(Mode { lambda: e.lambda, c0: e.c0, rate: w2 - w1 })
    }

    /// log|C(t) λ^(−2m)|.
    fn log_k(&self, m: f64, t: f64) -> f64 {
        self.c0.abs().ln() + self.rate * t - 2.0 * m * self.lambda.ln()
    }
}

#[derive(Debug, Clone)]
pub struct OneSoliton {
    spec: SolitonSpec,
    mode: Mode,
}

impl OneSoliton {
    pub fn new(spec: SolitonSpec) -> Result<Self> {
        spec.validate()?;
        spec.require_count(1)?;
        let mode = Mode::new(&spec.eigenvalues[0], &spec.params)?;
        Ok(OneSoliton { spec, mode })
    }

    pub fn velocity(&self) -> f64 {
        self.mode.rate / (2.0 * self.mode.lambda.ln())
    }

    pub fn amplitude(&self) -> f64 {
        spectral::soliton_amplitude(self.mode.lambda, &self.spec.params)
    }
}

impl Evaluator for OneSoliton {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        let GardnerParams { a, b, .. } = self.spec.params;
        let Mode { lambda, c0, rate } = self.mode;
        let l2 = lambda * lambda;
        let p = 2.0 * n as f64 * lambda.ln() - rate * t;
        let arg = p + ((l2 * l2 - 1.0) / (2.0 * c0.abs())).ln();
        let amp = c0.signum() * (-(a * a + 4.0 * b)).sqrt() * (1.0 / l2 - l2) / (4.0 * b);
        Ok(-a / (2.0 * b) + amp / arg.cosh())
    }

    fn params(&self) -> GardnerParams {
        self.spec.params
    }
}

/// Reflectionless J-soliton from the 2J×2J linear system.
#[derive(Debug, Clone)]
pub struct MultiSoliton {
    spec: SolitonSpec,
    modes: Vec<Mode>,
}

impl MultiSoliton {
    pub fn new(spec: SolitonSpec) -> Result<Self> {
        spec.validate()?;
        let modes = spec
            .eigenvalues
            .iter()
            .map(|e| Mode::new(e, &spec.params))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiSoliton { spec, modes })
    }

    pub fn velocities(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.rate / (2.0 * m.lambda.ln())).collect()
    }

    pub fn spec(&self) -> &SolitonSpec {
        &self.spec
    }
}

impl Evaluator for MultiSoliton {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        let GardnerParams { a, b, .. } = self.spec.params;
        let bg = -a / (2.0 * b);
        let j = self.modes.len();
        let m = (n + 1) as f64;
        let logs: Vec<f64> = self.modes.iter().map(|md| md.log_k(m, t)).collect();
        if logs.iter().all(|l| l.abs() > FAR_LOG) {
            return Ok(bg);
        }
        // K_j = C_j λ_j^(−2m), K̄_j = C̄_j λ̄_j^(2m) with C̄_j = λ_j^(−2) C_j
        let k: Vec<f64> = self.modes.iter().zip(&logs).map(|(md, l)| md.c0.signum() * l.exp()).collect();
        let kb: Vec<f64> =
            self.modes.iter().zip(&k).map(|(md, kk)| kk / (md.lambda * md.lambda)).collect();
        let mut mat = Matrix::zeros(2 * j);
        let mut rhs = vec![0.0; 2 * j];
        for i in 0..j {
            let li = self.modes[i].lambda;
            let lbi = 1.0 / li;
            mat.set(i, i, 1.0);
            mat.set(j + i, j + i, 1.0);
            rhs[i] = 1.0;
            for q in 0..j {
                let lq = self.modes[q].lambda;
                let lbq = 1.0 / lq;
                let cx = k[q] * (1.0 / (lbi - lq) - 1.0 / (lbi + lq));
                mat.set(i, j + q, -cx);
                let cy = kb[q] * (1.0 / (li - lbq) + 1.0 / (li + lbq));
                mat.set(j + i, q, -cy);
            }
        }
        let x = mat.solve_equilibrated(&rhs)?;
        let sum: f64 = (0..j).map(|q| kb[q] * self.modes[q].lambda.powi(2) * x[q]).sum();
        let u = (-(a * a + 4.0 * b)).sqrt() / (2.0 * b) * (-2.0 * sum) + bg;
        if !u.is_finite() {
            return Err(Error::NonFinite { last_good_t: t });
        }
        Ok(u)
    }

    fn params(&self) -> GardnerParams {
        self.spec.params
    }
}

/// Closed-form two-soliton solution u = −a/(2b) + √(−(a²+4b))/(2b)·f/g.
#[derive(Debug, Clone)]
pub struct TwoSoliton {
    spec: SolitonSpec,
    modes: [Mode; 2],
    f_terms: [(i32, i32, f64); 4],
    g_terms: [(i32, i32, f64); 5],
}

impl TwoSoliton {
    pub fn new(spec: SolitonSpec) -> Result<Self> {
        spec.validate()?;
        spec.require_count(2)?;
        let p = spec.params;
        let modes = [Mode::new(&spec.eigenvalues[0], &p)?, Mode::new(&spec.eigenvalues[1], &p)?];
        let l1 = modes[0].lambda.powi(2);
        let l2 = modes[1].lambda.powi(2);
        let (d, s, e1, e2) = (l1 - l2, l1 * l2 - 1.0, l1 * l1 - 1.0, l2 * l2 - 1.0);
        let pre = -2.0 * s * s;
        let f_terms = [
            (1, 0, pre * 4.0 * l1 * d * d * e2 * e2),
            (-1, 0, pre * l1 * e1 * e1 * s * s * e2 * e2),
            (0, 1, pre * e1 * e1 * l2 * 4.0 * d * d),
            (0, -1, pre * e1 * e1 * l2 * s * s * e2 * e2),
        ];
        let g_terms = [
            (0, 0, l1 * l2 * 8.0 * e1 * e1 * s * s * e2 * e2),
            (-1, 1, l1 * l2 * e1 * e1 * s.powi(4) * 4.0),
            (-1, -1, l1 * l2 * e1 * e1 * s.powi(4) * e2 * e2),
            (1, 1, l1 * l2 * 16.0 * d.powi(4)),
            (1, -1, l1 * l2 * 4.0 * s.powi(4) * e2 * e2),
        ];
        Ok(TwoSoliton { spec, modes, f_terms, g_terms })
    }

    pub fn velocities(&self) -> [f64; 2] {
        [0, 1].map(|i| self.modes[i].rate / (2.0 * self.modes[i].lambda.ln()))
    }
}

impl Evaluator for TwoSoliton {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        let GardnerParams { a, b, .. } = self.spec.params;
        // z_i = C_i(0) e^(−p_i); keep log|z_i| and the sign separately
        let lz = self.modes.map(|m| m.c0.abs().ln() - (2.0 * n as f64 * m.lambda.ln() - m.rate * t));
        let sz = self.modes.map(|m| m.c0.signum());
        let expo = |i: i32, j: i32| i as f64 * lz[0] + j as f64 * lz[1];
        let top = self
            .f_terms
            .iter()
            .chain(&self.g_terms)
            .map(|&(i, j, _)| expo(i, j))
            .fold(0.0, f64::max);
        let sum = |terms: &[(i32, i32, f64)]| -> f64 {
            terms
                .iter()
                .map(|&(i, j, c)| c * sz[0].powi(i) * sz[1].powi(j) * (expo(i, j) - top).exp())
                .sum()
        };
        let f = sum(&self.f_terms);
        let g = sum(&self.g_terms);
        if g == 0.0 {
            return Err(Error::SingularSystem { size: 1, pivot_ratio: 0.0 });
        }
        Ok(-a / (2.0 * b) + (-(a * a + 4.0 * b)).sqrt() / (2.0 * b) * f / g)
    }

    fn params(&self) -> GardnerParams {
        self.spec.params
    }
}

/// Asymptotic phases of one soliton in a two-soliton collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub lambda: f64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    /// Change of the centre n − V t from t → −∞ to t → +∞.
    pub shift: f64,
}

/// ξ_{j±} and the induced lattice shifts.
///
/// The centre sits where p_j + ξ = 0, i.e. n = V_j t − ξ/(2 log λ_j). The faster
/// soliton carries ξ₋ before the collision and ξ₊ after it; the slower one the reverse.
pub fn phase_shifts(spec: &SolitonSpec) -> Result<[PhaseShift; 2]> {
    spec.validate()?;
    spec.require_count(2)?;
    let [e1, e2] = [spec.eigenvalues[0], spec.eigenvalues[1]];
    let (l1, l2) = (e1.lambda.powi(2), e2.lambda.powi(2));
    if (l1 - l2).abs() < SINGULAR_TOL {
        return Err(Error::SingularPoint("phase shift diverges for equal eigenvalues".into()));
    }
    let jump = 2.0 * ((l1 * l2 - 1.0) / (l1 - l2)).abs().ln();
    let v = [
        soliton_velocity(e1.lambda, &spec.params)?,
        soliton_velocity(e2.lambda, &spec.params)?,
    ];
    let one = |e: Eigen, dir: f64| {
        let l = e.lambda;
        let xi_plus = ((l.powi(4) - 1.0) / (2.0 * e.c0.abs())).ln();
        PhaseShift { lambda: l, xi_plus, xi_minus: xi_plus + jump, shift: dir * jump / (2.0 * l.ln()) }
    };
    let dir = (v[0] - v[1]).signum();
    Ok([one(e1, dir), one(e2, -dir)])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublePoleSpec {
    pub params: GardnerParams,
    pub lambda1: f64,
    pub b1_0: f64,
    pub d1_0: f64,
}

impl DoublePoleSpec {
    pub fn validate(&self) -> Result<()> {
        self.params.require_symmetric()?;
        SpectralPoint::new(self.lambda1)?;
        if self.b1_0 == 0.0 || !self.b1_0.is_finite() || !self.d1_0.is_finite() {
            return Err(Error::Domain("b1(0) must be non-zero and d1(0) finite".into()));
        }
        Ok(())
    }
}

/// Two-order pole solution from the 4×4 reflectionless system.
#[derive(Debug, Clone)]
pub struct DoublePole {
    spec: DoublePoleSpec,
    rate: f64,
    drate: f64,
    a2: f64,
    g: f64,
}

impl DoublePole {
    pub fn new(spec: DoublePoleSpec) -> Result<Self> {
        spec.validate()?;
        let (w1, w2) = omega_pair(spec.lambda1, &spec.params)?;
        let (d1, d2) = spectral::omega_derivatives(spec.lambda1, &spec.params)?;
        let tr = trace_formulas(spec.lambda1)?;
        Ok(DoublePole { spec, rate: w2 - w1, drate: d2 - d1, a2: tr.a2, g: tr.a3 / (3.0 * tr.a2) })
    }

    /// Asymptotic speed of both waves.
    pub fn velocity(&self) -> f64 {
        self.rate / (2.0 * self.spec.lambda1.ln())
    }

    pub fn amplitude(&self) -> f64 {
        spectral::soliton_amplitude(self.spec.lambda1, &self.spec.params)
    }
}

impl Evaluator for DoublePole {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        let GardnerParams { a, b, .. } = self.spec.params;
        let bg = -a / (2.0 * b);
        let l = self.spec.lambda1;
        let lb = 1.0 / l;
        let m = (n + 1) as f64;
        // F = 2 b(t)/a'' and K = F λ^(−2m), kept in log form
        let b0 = self.spec.b1_0;
        let log_k = (2.0 * b0.abs() / self.a2).ln() + self.rate * t - 2.0 * m * l.ln();
        if log_k.abs() > FAR_LOG {
            return Ok(bg);
        }
        let k = b0.signum() * log_k.exp();
        // F̄ = −λ̄⁴F, so K̄ = F̄ λ̄^(2m) = −λ̄⁴ K
        let kb = -lb.powi(4) * k;
        let dd = self.spec.d1_0 / b0 + t * self.drate;
        let ddb = -l * l * dd;
        let gb = -2.0 * l - l * l * self.g;
        let s = -2.0 * m / l + dd - self.g;
        let sb = 2.0 * m / lb + ddb - gb;
        let (p, q) = (lb - l, lb + l);
        let (pp, qq) = (l - lb, l + lb);
        let mat = Matrix::from_rows([
            [
                1.0,
                0.0,
                -k * (s * (1.0 / p - 1.0 / q) + 1.0 / (p * p) + 1.0 / (q * q)),
                -k * (1.0 / p - 1.0 / q),
            ],
            [
                0.0,
                1.0,
                -k * (s * (-1.0 / (p * p) + 1.0 / (q * q)) - 2.0 / p.powi(3) - 2.0 / q.powi(3)),
                -k * (-1.0 / (p * p) + 1.0 / (q * q)),
            ],
            [
                -kb * (sb * (1.0 / pp + 1.0 / qq) + 1.0 / (pp * pp) - 1.0 / (qq * qq)),
                -kb * (1.0 / pp + 1.0 / qq),
                1.0,
                0.0,
            ],
            [
                -kb * (sb * (-1.0 / (pp * pp) - 1.0 / (qq * qq)) - 2.0 / pp.powi(3)
                    + 2.0 / qq.powi(3)),
                -kb * (-1.0 / (pp * pp) - 1.0 / (qq * qq)),
                0.0,
                1.0,
            ],
        ]);
        let x = mat.solve_equilibrated(&[1.0, 0.0, 0.0, 0.0])?;
        let p2 = kb * x[0];
        let p1 = kb * (x[1] + sb * x[0]);
        let u = bg
            + (-(a * a + 4.0 * b)).sqrt() / (2.0 * b)
                * (-2.0 * lb.powi(-2) * p1 + 4.0 * lb.powi(-3) * p2);
        if !u.is_finite() {
            return Err(Error::NonFinite { last_good_t: t });
        }
        Ok(u)
    }

    fn params(&self) -> GardnerParams {
        self.spec.params
    }
}
