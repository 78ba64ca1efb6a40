//! Collision taxonomy, peak tracking and interaction measurements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Trajectory;
use crate::params::{GardnerParams, SINGULAR_TOL};
use crate::spectral::{positive_speed_threshold, soliton_velocity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollisionType {
    HeadOn,
    Overtaking,
    Degenerate,
}

/// Cell label of the (a, b) map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionLabel {
    /// Q > λ₂²: both solitons move right.
    OvertakingRight,
    /// Q < λ₁²: both solitons move left.
    OvertakingLeft,
    HeadOn,
    Degenerate,
    /// a² + 4b ≥ 0.
    Excluded,
}

impl RegionLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionLabel::OvertakingRight => "overtaking_right",
            RegionLabel::OvertakingLeft => "overtaking_left",
            RegionLabel::HeadOn => "head_on",
            RegionLabel::Degenerate => "degenerate",
            RegionLabel::Excluded => "excluded",
        }
    }

    pub fn collision_type(&self) -> Option<CollisionType> {
        match self {
            RegionLabel::OvertakingRight | RegionLabel::OvertakingLeft => Some(CollisionType::Overtaking),
            RegionLabel::HeadOn => Some(CollisionType::HeadOn),
            RegionLabel::Degenerate => Some(CollisionType::Degenerate),
            RegionLabel::Excluded => None,
        }
    }
}

/// Region of (a, b) for the eigenvalue pair, by the Q interval and
/// cross-checked against the signs of the two velocities.
pub fn region_label(p: &GardnerParams, lambda1: f64, lambda2: f64) -> Result<RegionLabel> {
    if p.disc() >= 0.0 {
        return Ok(RegionLabel::Excluded);
    }
    let (l1, l2) = if lambda1 <= lambda2 { (lambda1, lambda2) } else { (lambda2, lambda1) };
    if !(l1 > 1.0) || (l2 - l1).abs() < SINGULAR_TOL {
        return Err(Error::Domain(format!("need distinct eigenvalues > 1, got {lambda1}, {lambda2}")));
    }
    let q = positive_speed_threshold(p)?;
    let (x1, x2) = (l1 * l1, l2 * l2);
    let tol = SINGULAR_TOL * q.abs().max(1.0);
    if (q - x1).abs() <= tol || (q - x2).abs() <= tol {
        return Ok(RegionLabel::Degenerate);
    }
    let label = if x1 < q && q < x2 {
        RegionLabel::HeadOn
    } else if q > x2 {
        RegionLabel::OvertakingRight
    } else {
        RegionLabel::OvertakingLeft
    };
    let v1 = soliton_velocity(l1, p)?;
    let v2 = soliton_velocity(l2, p)?;
    let by_speed = match label {
        RegionLabel::HeadOn => v1 > 0.0 && v2 < 0.0,
        RegionLabel::OvertakingRight => v1 > 0.0 && v2 > 0.0,
        _ => v1 < 0.0 && v2 < 0.0,
    };
    if !by_speed {
        return Err(Error::Analysis(format!(
            "Q interval says {} but velocities are {v1} and {v2} (a = {}, b = {})",
            label.as_str(),
            p.a,
            p.b
        )));
    }
    Ok(label)
}

pub fn classify_collision(p: &GardnerParams, lambda1: f64, lambda2: f64) -> Result<CollisionType> {
    p.require_symmetric()?;
    let label = region_label(p, lambda1, lambda2)?;
    Ok(label.collision_type().expect("symmetric regime is never excluded"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub a: f64,
    pub b: f64,
    pub label: RegionLabel,
}

/// Labels a uniform `na × nb` grid over [a0, a1] × [b0, b1], row-major in a.
pub fn region_map(
    a_range: (f64, f64, usize),
    b_range: (f64, f64, usize),
    lambda1_sq: f64,
    lambda2_sq: f64,
) -> Result<Vec<RegionCell>> {
    let axis = |(lo, hi, k): (f64, f64, usize)| crate::model::time_grid(lo, hi, k);
    let (l1, l2) = (lambda1_sq.sqrt(), lambda2_sq.sqrt());
    let mut cells = Vec::new();
    for a in axis(a_range) {
        for b in axis(b_range) {
            let label = if b == 0.0 {
                RegionLabel::Excluded
            } else {
                region_label(&GardnerParams { a, b, sigma: -1 }, l1, l2)?
            };
            cells.push(RegionCell { a, b, label });
        }
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub position: f64,
    /// |u − background| at the refined peak.
    pub amplitude: f64,
    pub polarity: i32,
}

/// Sub-site peak from three samples of the excursion y around a local extremum.
///
/// A sech profile is fitted exactly when the samples allow it; otherwise a parabola.
pub fn refine_peak(ym: f64, y0: f64, yp: f64) -> (f64, f64) {
    if ym * y0 > 0.0 && yp * y0 > 0.0 {
        let (fm, f0, fp) = (1.0 / ym.abs(), 1.0 / y0.abs(), 1.0 / yp.abs());
        let ck = (fp + fm) / (2.0 * f0);
        if ck > 1.0 + 1e-12 {
            let k = ck.acosh();
            let th = -(fp - fm) / (2.0 * f0 * k.sinh());
            if th.abs() < 1.0 {
                let d = th.atanh() / k;
                if d.abs() <= 1.0 {
                    return (d, y0.signum() * (k * d).cosh() / f0);
                }
            }
        }
    }
    let den = ym - 2.0 * y0 + yp;
    if den == 0.0 {
        return (0.0, y0);
    }
    let d = ((ym - yp) / (2.0 * den)).clamp(-1.0, 1.0);
    (d, y0 - 0.25 * (ym - yp) * d)
}

/// Peaks of one profile whose excursion exceeds `floor`.
pub fn find_peaks(row: &[f64], n_lo: i64, background: f64, floor: f64) -> Vec<Peak> {
    let y: Vec<f64> = row.iter().map(|u| u - background).collect();
    let mut out = Vec::new();
    for i in 1..y.len().saturating_sub(1) {
        let (a, c, d) = (y[i - 1], y[i], y[i + 1]);
        if c.abs() < floor || c == 0.0 {
            continue;
        }
        let s = c.signum();
        if s * c > s * a && s * c >= s * d {
            let (off, amp) = refine_peak(a, c, d);
            out.push(Peak {
                position: n_lo as f64 + i as f64 + off,
                amplitude: amp.abs(),
                polarity: s as i32,
            });
        }
    }
    out
}

/// Peaks per time slice; the floor is `floor_frac` of the largest excursion.
pub fn track_peaks(tr: &Trajectory, background: f64, floor_frac: f64) -> Vec<Vec<Peak>> {
    let top = max_excursion(tr.values.iter().flatten(), background);
    if top == 0.0 {
        return vec![Vec::new(); tr.times.len()];
    }
    tr.values.iter().map(|row| find_peaks(row, tr.n_lo, background, floor_frac * top)).collect()
}

fn max_excursion<'a>(vals: impl Iterator<Item = &'a f64>, background: f64) -> f64 {
    vals.map(|u| (u - background).abs()).fold(0.0, f64::max)
}

/// Least-squares slope of peak position against time for a single tracked peak.
pub fn tracked_velocity(tr: &Trajectory, background: f64) -> Result<f64> {
    let peaks = track_peaks(tr, background, 0.05);
    let pts: Vec<(f64, f64)> = tr
        .times
        .iter()
        .zip(&peaks)
        .filter_map(|(&t, ps)| {
            ps.iter().max_by(|a, b| a.amplitude.total_cmp(&b.amplitude)).map(|p| (t, p.position))
        })
        .collect();
    if pts.len() < 2 {
        return Err(Error::Analysis("need a peak in at least two time slices".into()));
    }
    let m = pts.len() as f64;
    let (st, sx) = pts.iter().fold((0.0, 0.0), |(a, b), (t, x)| (a + t, b + x));
    let (mt, mx) = (st / m, sx / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(n, d), (t, x)| (n + (t - mt) * (x - mx), d + (t - mt) * (t - mt)));
    if den == 0.0 {
        return Err(Error::Analysis("time slices coincide".into()));
    }
    Ok(num / den)
}

/// What the analysis needs to know about the solution behind a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionContext {
    pub background: f64,
    /// Analytic one-soliton amplitudes of the colliding waves.
    pub single_amplitudes: Vec<f64>,
    /// Analytic velocities, in the same order as the amplitudes.
    pub velocities: Vec<f64>,
    pub collision_type: Option<CollisionType>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    /// Peaks closer than this (in sites) count as interacting.
    pub interaction_distance: f64,
    /// Required separation at both ends of the trajectory.
    pub min_separation: f64,
    pub floor_frac: f64,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { interaction_distance: 5.0, min_separation: 20.0, floor_frac: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub collision_type: Option<CollisionType>,
    pub velocities: Vec<f64>,
    /// Refined amplitudes at the first slice, sorted ascending.
    pub amplitudes_pre: Vec<f64>,
    /// Refined amplitudes at the last slice, sorted ascending.
    pub amplitudes_post: Vec<f64>,
    pub amplitude_drift: f64,
    pub elastic: bool,
    /// Interaction window [t_start, t_end].
    pub interaction: (f64, f64),
    pub collision_time: f64,
    /// Largest |u − background| at the collision time.
    pub excursion_at_collision: f64,
    /// Largest |u − background| over the interaction window.
    pub max_excursion: f64,
    /// max_excursion over the largest one-soliton amplitude.
    pub amplification: f64,
    /// Largest |u| over the interaction window divided by |background|.
    pub background_ratio: f64,
    /// Change of n − V t between the first and last slice, per soliton.
    pub measured_shifts: Vec<f64>,
}

fn dominant_pair(ps: &[Peak]) -> Option<(Peak, Peak)> {
    let mut v = ps.to_vec();
    v.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    (v.len() >= 2).then(|| (v[0], v[1]))
}


/// Fills a [`CollisionReport`] from a densely sampled two-wave trajectory.
pub fn measure_interaction(
    tr: &Trajectory,
    ctx: &InteractionContext,
    opts: &MeasureOptions,
) -> Result<CollisionReport> {
    if tr.times.len() < 3 {
        return Err(Error::Analysis("need at least three time slices".into()));
    }
    if ctx.single_amplitudes.is_empty() {
        return Err(Error::Analysis("no reference amplitude supplied".into()));
    }
    let bg = ctx.background;
    let peaks = track_peaks(tr, bg, opts.floor_frac);
    let seps: Vec<f64> = peaks
        .iter()
        .map(|ps| dominant_pair(ps).map_or(0.0, |(a, b)| (a.position - b.position).abs()))
        .collect();
    let last = tr.times.len() - 1;
    for (i, when) in [(0, "start"), (last, "end")] {
        if seps[i] < opts.min_separation {
            return Err(Error::Analysis(format!(
                "waves only {:.2} sites apart at the {when} (t = {}); need {}",
                seps[i], tr.times[i], opts.min_separation
            )));
        }
    }
    let inside: Vec<usize> = (0..tr.times.len()).filter(|&i| seps[i] <= opts.interaction_distance).collect();
    let (first, final_) = match (inside.first(), inside.last()) {
        (Some(&f), Some(&l)) => (f, l),
        _ => return Err(Error::Analysis("the waves never come within the interaction distance".into())),
    };
    // the field only lives on sites; sub-site fits are not trusted while waves overlap
    let ex: Vec<f64> = tr.values.iter().map(|row| max_excursion(row.iter(), bg)).collect();
    let max_excursion = inside.iter().map(|&i| ex[i]).fold(0.0, f64::max);
    let max_abs = inside
        .iter()
        .flat_map(|&i| tr.values[i].iter())
        .map(|u| u.abs())
        .fold(0.0, f64::max);
    // collision moment: closest approach, middle of a merged stretch
    let best = inside.iter().map(|&i| seps[i]).fold(f64::INFINITY, f64::min);
    let ties: Vec<usize> = inside.iter().copied().filter(|&i| seps[i] <= best + 1e-12).collect();
    let ic = ties[ties.len() / 2];

    let pair_at = |i: usize| {
        let (a, b) = dominant_pair(&peaks[i]).expect("separated slices carry two peaks");
        if a.amplitude <= b.amplitude { [a, b] } else { [b, a] }
    };
    let pre = pair_at(0);
    let post = pair_at(last);
    let drift = pre
        .iter()
        .zip(&post)
        .map(|(a, b)| (a.amplitude - b.amplitude).abs())
        .fold(0.0, f64::max);

    let mut measured_shifts = Vec::new();
    if ctx.velocities.len() == 2 && ctx.single_amplitudes.len() == 2 {
        // pair each analytic soliton with the tracked peak of nearest amplitude
        let order: Vec<usize> = if ctx.single_amplitudes[0] <= ctx.single_amplitudes[1] { vec![0, 1] } else { vec![1, 0] };
        let (t0, t1) = (tr.times[0], tr.times[last]);
        let mut shifts = vec![0.0; 2];
        for (slot, &j) in order.iter().enumerate() {
            let v = ctx.velocities[j];
            shifts[j] = (post[slot].position - v * t1) - (pre[slot].position - v * t0);
        }
        measured_shifts = shifts;
    }
    let single = ctx.single_amplitudes.iter().copied().fold(0.0, f64::max);
    Ok(CollisionReport {
        collision_type: ctx.collision_type,
        velocities: ctx.velocities.clone(),
        amplitudes_pre: pre.iter().map(|p| p.amplitude).collect(),
        amplitudes_post: post.iter().map(|p| p.amplitude).collect(),
        amplitude_drift: drift,
        elastic: drift <= 1e-3,
        interaction: (tr.times[first], tr.times[final_]),
        collision_time: tr.times[ic],
        excursion_at_collision: ex[ic],
        max_excursion,
        amplification: max_excursion / single,
        background_ratio: if bg != 0.0 { max_abs / bg.abs() } else { f64::INFINITY },
        measured_shifts,
    })
}
