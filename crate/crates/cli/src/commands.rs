use std::path::Path;

use gardner_core::analysis::{region_label, InteractionContext, MeasureOptions};
use gardner_core::lattice::integrate;
use gardner_core::model::time_grid;
use gardner_core::spectral::{positive_speed_threshold, soliton_amplitude, soliton_velocity};
use gardner_core::{
    classify_collision, measure_interaction, ode_residual, region_map, theta_condition_check,
    zero_curvature_residual, CollisionReport, Evaluator, Family, GardnerParams, Ghosts, LatticeState,
    ModelInfo, RegionLabel, RunConfig, SolitonSpec, Trajectory, TwoSoliton,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{io_err, CliError};
use crate::output::{out_file, write_json, write_trajectory_csv};

#[derive(Serialize)]
struct Sidecar<'a> {
    info: ModelInfo,
    config: &'a RunConfig,
    window: (i64, i64),
    times: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation_from_exact: Option<f64>,
}

pub fn evaluate(cfg: &RunConfig, out: &Path, _jobs: Option<usize>) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    let times = cfg.times.times();
    let tr = Trajectory::sample(&model, cfg.window.n_lo, cfg.window.n_hi, &times)?;
    write_trajectory_csv(&out_file(out, "trajectory.csv"), &tr)?;
    let side = Sidecar {
        info: model.info(),
        config: cfg,
        window: (cfg.window.n_lo, cfg.window.n_hi),
        times: &times,
        dt: None,
        max_deviation_from_exact: None,
    };
    write_json(&out_file(out, "trajectory.json"), &side)
}

#[derive(Serialize)]
struct Check {
    name: String,
    value: f64,
    tolerance: f64,
    pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Serialize)]
struct Validation {
    info: ModelInfo,
    checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta_residual: Option<f64>,
    pass: bool,
}

fn evolve_deviation<M: Evaluator>(model: &M, cfg: &RunConfig) -> Result<(Trajectory, f64), CliError> {
    let times = cfg.times.times();
    let (t0, t1) = (times[0], *times.last().unwrap());
    let st = LatticeState::from_model(model, cfg.window.n_lo, cfg.window.n_hi, t0)?;
    let tr = integrate(&st, t1, cfg.dt, Ghosts::Model(model), &model.params(), times.len())?;
    let mut worst: f64 = 0.0;
    for (t, row) in tr.times.iter().zip(&tr.values) {
        for (n, u) in tr.sites().zip(row) {
            worst = worst.max((u - model.u(n, *t)?).abs());
        }
    }
    Ok((tr, worst))
}

pub fn validate(cfg: &RunConfig, out: &Path, _jobs: Option<usize>) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    let v = &cfg.validate;
    let times = cfg.times.times();
    let (lo, hi) = (cfg.window.n_lo, cfg.window.n_hi);
    let mut checks = vec![Check::new("ode_residual", ode_residual(&model, lo, hi, &times, v.h)?, v.residual_tol)];
    for &l in &v.lambdas {
        let mut worst: f64 = 0.0;
        for &t in &times {
            for n in lo..=hi {
                worst = worst.max(zero_curvature_residual(&model, l, n, t)?);
            }
        }
        checks.push(Check::new(format!("zero_curvature(lambda={l})"), worst, v.lax_tol));
    }
    if v.integrate {
        let (_, dev) = evolve_deviation(&model, cfg)?;
        checks.push(Check::new("evolution_vs_exact", dev, v.evolution_tol));
    }
    let theta_residual = match cfg.family {
        Family::Kink => Some(theta_condition_check(&cfg.kink_spec()?)?),
        _ => None,
    };
    let pass = checks.iter().all(|c| c.pass);
    for c in &checks {
        println!("{:<28} {:>10.3e}  (tol {:.0e})  {}", c.name, c.value, c.tolerance, if c.pass { "pass" } else { "FAIL" });
    }
    write_json(&out_file(out, "validation.json"), &Validation { info: model.info(), checks, theta_residual, pass })
}

pub fn evolve(cfg: &RunConfig, out: &Path, _jobs: Option<usize>) -> Result<(), CliError> {
    let model = cfg.build_model()?;
    let (tr, dev) = evolve_deviation(&model, cfg)?;
    write_trajectory_csv(&out_file(out, "evolve.csv"), &tr)?;
    let side = Sidecar {
        info: model.info(),
        config: cfg,
        window: (cfg.window.n_lo, cfg.window.n_hi),
        times: &tr.times,
        dt: Some(cfg.dt),
        max_deviation_from_exact: Some(dev),
    };
    write_json(&out_file(out, "evolve.json"), &side)
}

fn pair(cfg: &RunConfig) -> Result<(f64, f64), CliError> {
    match cfg.eigenvalues.as_slice() {
        [e1, e2] => Ok((e1.lambda, e2.lambda)),
        _ => Err(CliError::Config("classify and sweep need exactly two eigenvalues".into())),
    }
}

#[derive(Serialize)]
struct Classification {
    a: f64,
    b: f64,
    lambda1: f64,
    lambda2: f64,
    q: f64,
    velocities: [f64; 2],
    label: RegionLabel,
}

fn write_region_csv(path: &Path, cells: &[gardner_core::RegionCell]) -> Result<(), CliError> {
    let mut s = String::from("a,b,label\n");
    for c in cells {
        s.push_str(&format!("{:?},{:?},{}\n", c.a, c.b, c.label.as_str()));
    }
    std::fs::write(path, s).map_err(io_err(path))
}

pub fn classify(cfg: &RunConfig, out: &Path, _jobs: Option<usize>) -> Result<(), CliError> {
    let (l1, l2) = pair(cfg)?;
    if let Some(g) = cfg.grid {
        let cells = region_map(g.a, g.b, l1 * l1, l2 * l2)?;
        write_region_csv(&out_file(out, "region_map.csv"), &cells)?;
    }
    let p = cfg.params;
    classify_collision(&p, l1, l2)?;
    let c = Classification {
        a: p.a,
        b: p.b,
        lambda1: l1,
        lambda2: l2,
        q: positive_speed_threshold(&p)?,
        velocities: [soliton_velocity(l1, &p)?, soliton_velocity(l2, &p)?],
        label: region_label(&p, l1, l2)?,
    };
    println!("{}", c.label.as_str());
    write_json(&out_file(out, "classification.json"), &c)
}

#[derive(Serialize)]
struct SweepEntry {
    a: f64,
    b: f64,
    label: RegionLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_span: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    half_width: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<CollisionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

const MAX_T_SPAN: f64 = 2000.0;
const MAX_HALF_WIDTH: i64 = 4000;

/// Two-soliton run at one grid point. The time span and window grow with the
/// velocities so that the waves start and end well separated.
fn measure_point(cfg: &RunConfig, a: f64, b: f64) -> (f64, i64, Result<CollisionReport, gardner_core::Error>) {
    let ms = cfg.measure;
    let p = GardnerParams { a, b, sigma: -1 };
    let m = match SolitonSpec::new(p, cfg.eigenvalues.clone()).and_then(TwoSoliton::new) {
        Ok(m) => m,
        Err(e) => return (ms.t_span, ms.half_width, Err(e)),
    };
    let [v1, v2] = m.velocities();
    let t_span = ((ms.min_separation + 10.0) / (v1 - v2).abs()).max(ms.t_span).min(MAX_T_SPAN);
    let reach = (v1.abs().max(v2.abs()) * t_span + 20.0).ceil() as i64;
    let half_width = reach.max(ms.half_width).min(MAX_HALF_WIDTH);
    let run = || {
        let times = time_grid(-t_span, t_span, ms.samples);
        let tr = Trajectory::sample(&m, -half_width, half_width, &times)?;
        let ctx = InteractionContext {
            background: p.background(),
            single_amplitudes: cfg.eigenvalues.iter().map(|e| soliton_amplitude(e.lambda, &p)).collect(),
            velocities: vec![v1, v2],
            collision_type: classify_collision(&p, cfg.eigenvalues[0].lambda, cfg.eigenvalues[1].lambda).ok(),
        };
        let opts = MeasureOptions {
            interaction_distance: ms.interaction_distance,
            min_separation: ms.min_separation,
            ..MeasureOptions::default()
        };
        measure_interaction(&tr, &ctx, &opts)
    };
    (t_span, half_width, run())
}

pub fn sweep(cfg: &RunConfig, out: &Path, jobs: Option<usize>) -> Result<(), CliError> {
    let (l1, l2) = pair(cfg)?;
    let g = cfg.grid.ok_or_else(|| CliError::Config("sweep needs a \"grid\" section".into()))?;
    let cells = region_map(g.a, g.b, l1 * l1, l2 * l2)?;
    write_region_csv(&out_file(out, "region_map.csv"), &cells)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().map_err(|e| CliError::Config(e.to_string()))?;
    let entries: Vec<SweepEntry> = pool.install(|| {
        cells
            .par_iter()
            .map(|c| {
                let mut e = SweepEntry { a: c.a, b: c.b, label: c.label, t_span: None, half_width: None, report: None, error: None };
                if c.label == RegionLabel::Excluded {
                    return e;
                }
                let (t_span, half_width, r) = measure_point(cfg, c.a, c.b);
                e.t_span = Some(t_span);
                e.half_width = Some(half_width);
                match r {
                    Ok(r) => e.report = Some(r),
                    Err(err) => e.error = Some(err.to_string()),
                }
                e
            })
            .collect()
    });
    write_json(&out_file(out, "sweep.json"), &entries)
}
