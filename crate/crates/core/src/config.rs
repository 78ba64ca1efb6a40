//! Run configuration shared by the command-line tools.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{time_grid, ConstantField, Family, SolutionModel};
use crate::params::GardnerParams;
use crate::steplike::{Kink, KinkSpec, Radical, StepBoundary};
use crate::symmetric::{DoublePole, DoublePoleSpec, Eigen, MultiSoliton, OneSoliton, SolitonSpec, TwoSoliton};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub n_lo: i64,
    pub n_hi: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window { n_lo: -30, n_hi: 30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    /// 0 or 1 gives a single snapshot at t0.
    pub samples: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { t0: 0.0, t1: 0.0, samples: 1 }
    }
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        time_grid(self.t0, self.t1, self.samples.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoublePoleConfig {
    pub lambda1: f64,
    pub b1_0: f64,
    pub d1_0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KinkConfig {
    pub c0: f64,
    pub c1_0: f64,
    /// Defaults to (1 − c₀)/r.
    #[serde(default)]
    pub zeta_bar1: Option<f64>,
    /// Defaults to −sign(C₁(0)), the regular pairing.
    #[serde(default)]
    pub sign_plus: Option<i32>,
    /// Defaults to −sign_plus.
    #[serde(default)]
    pub sign_minus: Option<i32>,
    #[serde(default)]
    pub radical: Radical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Time step of the finite-difference derivative.
    pub h: f64,
    pub lambdas: Vec<f64>,
    /// Also integrate from t0 to t1 and compare with the exact field.
    pub integrate: bool,
    pub residual_tol: f64,
    pub lax_tol: f64,
    pub evolution_tol: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig {
            h: 1e-4,
            lambdas: vec![1.2, 1.5, 2.0, 3.0, 5.0],
            integrate: false,
            residual_tol: 1e-6,
            lax_tol: 1e-8,
            evolution_tol: 1e-4,
        }
    }
}

/// Uniform grid over the (a, b) plane: [lo, hi, count] per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub a: (f64, f64, usize),
    pub b: (f64, f64, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    /// Trajectories run over [−t_span, t_span].
    pub t_span: f64,
    pub samples: usize,
    pub half_width: i64,
    pub interaction_distance: f64,
    pub min_separation: f64,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig { t_span: 15.0, samples: 1501, half_width: 80, interaction_distance: 5.0, min_separation: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    pub params: GardnerParams,
    #[serde(default)]
    pub eigenvalues: Vec<Eigen>,
    #[serde(default)]
    pub double_pole: Option<DoublePoleConfig>,
    #[serde(default)]
    pub kink: Option<KinkConfig>,
    #[serde(default)]
    pub window: Window,
    #[serde(default)]
    pub times: TimeGrid,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub measure: MeasureConfig,
}

fn default_dt() -> f64 {
    1e-4
}

impl RunConfig {
    /// Checks that do not need a model.
    pub fn check(&self) -> Result<()> {
        self.params.check()?;
        if self.window.n_hi < self.window.n_lo {
            return Err(Error::Domain("window must satisfy n_lo <= n_hi".into()));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.times.t0.is_finite() || !self.times.t1.is_finite() {
            return Err(Error::Domain("times must be finite".into()));
        }
        Ok(())
    }

    pub fn soliton_spec(&self) -> Result<SolitonSpec> {
        SolitonSpec::new(self.params, self.eigenvalues.clone())
    }

    pub fn kink_spec(&self) -> Result<KinkSpec> {
        let k = self.kink.ok_or_else(|| Error::Domain("family kink needs a \"kink\" section".into()))?;
        let regular = StepBoundary::regular_for(k.c0, k.c1_0);
        let sign_plus = k.sign_plus.unwrap_or(regular.sign_plus);
        let boundary = StepBoundary { c0: k.c0, sign_plus, sign_minus: k.sign_minus.unwrap_or(-sign_plus) };
        let zeta_bar1 = match k.zeta_bar1 {
            Some(z) => z,
            None => KinkSpec::default_zeta_bar(k.c0)?,
        };
        Ok(KinkSpec { params: self.params, boundary, zeta_bar1, c1_0: k.c1_0, radical: k.radical })
    }

    pub fn build_model(&self) -> Result<SolutionModel> {
        self.check()?;
        Ok(match self.family {
            Family::Background => {
                SolutionModel::Background(ConstantField { params: self.params, value: self.params.background() })
            }
            Family::OneSoliton => SolutionModel::OneSoliton(OneSoliton::new(self.soliton_spec()?)?),
            Family::MultiSoliton => SolutionModel::MultiSoliton(MultiSoliton::new(self.soliton_spec()?)?),
            Family::TwoSoliton => SolutionModel::TwoSoliton(TwoSoliton::new(self.soliton_spec()?)?),
            Family::DoublePole => {
                let d = self
                    .double_pole
                    .ok_or_else(|| Error::Domain("family double_pole needs a \"double_pole\" section".into()))?;
                SolutionModel::DoublePole(DoublePole::new(DoublePoleSpec {
                    params: self.params,
                    lambda1: d.lambda1,
                    b1_0: d.b1_0,
                    d1_0: d.d1_0,
                })?)
            }
            Family::Kink => SolutionModel::Kink(Kink::new(self.kink_spec()?)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Evaluator;

    #[test]
    fn minimal_config_and_defaults() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"family":"one_soliton","params":{"a":1,"b":-1,"sigma":-1},
                "eigenvalues":[{"lambda":2.718281828459045,"c0":1}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.window, Window { n_lo: -30, n_hi: 30 });
        assert_eq!(cfg.times.times(), vec![0.0]);
        let m = cfg.build_model().unwrap();
        assert!((m.u(0, 0.0).unwrap() - 0.5).abs() > 0.1);
    }

    #[test]
    fn round_trip() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"family":"kink","params":{"a":1,"b":1,"sigma":1},
                "kink":{"c0":0.7,"c1_0":0.5},"times":{"t0":-1,"t1":1,"samples":3},"dt":0.1}"#,
        )
        .unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        let spec = cfg.kink_spec().unwrap();
        assert_eq!((spec.boundary.sign_plus, spec.boundary.sign_minus), (-1, 1));
    }

    #[test]
    fn regime_error_surfaces() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"family":"one_soliton","params":{"a":1,"b":-1,"sigma":1},
                "eigenvalues":[{"lambda":2,"c0":1}]}"#,
        )
        .unwrap();
        assert_eq!(cfg.build_model().unwrap_err().code(), "REGIME");
        let bad = serde_json::from_str::<RunConfig>(r#"{"family":"one_soliton","params":{"a":1,"b":-1,"sigma":-1},"typo":1}"#);
        assert!(bad.is_err());
    }
}
