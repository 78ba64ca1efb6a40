//! Common interface over the exact solution families.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::params::GardnerParams;
use crate::steplike::Kink;
use crate::symmetric::{DoublePole, MultiSoliton, OneSoliton, TwoSoliton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Background,
    OneSoliton,
    MultiSoliton,
    TwoSoliton,
    DoublePole,
    Kink,
}

/// Anything that can be sampled as u(n, t).
pub trait Evaluator {
    fn u(&self, n: i64, t: f64) -> Result<f64>;
    fn params(&self) -> GardnerParams;
}

/// Summary carried next to sampled data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub family: Family,
    pub params: GardnerParams,
    /// Far-field levels (n → −∞, n → +∞).
    pub background: (f64, f64),
    /// Analytic velocity of each coherent structure.
    pub velocities: Vec<f64>,
}

/// A constant field, a fixed point of the lattice flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantField {
    pub params: GardnerParams,
    pub value: f64,
}

impl Evaluator for ConstantField {
    fn u(&self, _n: i64, _t: f64) -> Result<f64> {
        Ok(self.value)
    }

    fn params(&self) -> GardnerParams {
        self.params
    }
}

#[derive(Debug, Clone)]
pub enum SolutionModel {
    Background(ConstantField),
    OneSoliton(OneSoliton),
    MultiSoliton(MultiSoliton),
    TwoSoliton(TwoSoliton),
    DoublePole(DoublePole),
    Kink(Kink),
}

impl SolutionModel {
    pub fn family(&self) -> Family {
        match self {
            SolutionModel::Background(_) => Family::Background,
            SolutionModel::OneSoliton(_) => Family::OneSoliton,
            SolutionModel::MultiSoliton(_) => Family::MultiSoliton,
            SolutionModel::TwoSoliton(_) => Family::TwoSoliton,
            SolutionModel::DoublePole(_) => Family::DoublePole,
            SolutionModel::Kink(_) => Family::Kink,
        }
    }

    fn inner(&self) -> &dyn Evaluator {
        match self {
            SolutionModel::Background(m) => m,
            SolutionModel::OneSoliton(m) => m,
            SolutionModel::MultiSoliton(m) => m,
            SolutionModel::TwoSoliton(m) => m,
            SolutionModel::DoublePole(m) => m,
            SolutionModel::Kink(m) => m,
        }
    }

    pub fn info(&self) -> ModelInfo {
        let params = self.params();
        let bg = params.background();
        let (background, velocities) = match self {
            SolutionModel::Background(m) => ((m.value, m.value), vec![]),
            SolutionModel::OneSoliton(m) => ((bg, bg), vec![m.velocity()]),
            SolutionModel::MultiSoliton(m) => ((bg, bg), m.velocities()),
            SolutionModel::TwoSoliton(m) => ((bg, bg), m.velocities().to_vec()),
            SolutionModel::DoublePole(m) => ((bg, bg), vec![m.velocity()]),
            SolutionModel::Kink(m) => (m.far_field(), vec![m.velocity()]),
        };
        ModelInfo { family: self.family(), params, background, velocities }
    }
}

impl Evaluator for SolutionModel {
    fn u(&self, n: i64, t: f64) -> Result<f64> {
        self.inner().u(n, t)
    }

    fn params(&self) -> GardnerParams {
        self.inner().params()
    }
}

/// Samples over an integer window and a list of times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub n_lo: i64,
    pub n_hi: i64,
    pub times: Vec<f64>,
    /// One row per time, `n_hi - n_lo + 1` values each.
    pub values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.n_lo..=self.n_hi
    }

    pub fn width(&self) -> usize {
        (self.n_hi - self.n_lo + 1) as usize
    }

    /// Evaluates `model` on the window at each time.
    pub fn sample<M: Evaluator + ?Sized>(
        model: &M,
        n_lo: i64,
        n_hi: i64,
        times: &[f64],
    ) -> Result<Trajectory> {
        let mut values = Vec::with_capacity(times.len());
        for &t in times {
            let row = (n_lo..=n_hi).map(|n| model.u(n, t)).collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        Ok(Trajectory { n_lo, n_hi, times: times.to_vec(), values })
    }
}

/// `k` evenly spaced times on [t0, t1]; `k = 1` gives just t0.
pub fn time_grid(t0: f64, t1: f64, k: usize) -> Vec<f64> {
    match k {
        0 => vec![],
        1 => vec![t0],
        _ => (0..k).map(|i| t0 + (t1 - t0) * i as f64 / (k - 1) as f64).collect(),
    }
}
