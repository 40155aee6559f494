//! Information-geometric complexity from Fubini–Study volumes on the
//! Bloch sphere.
//!
//! The instantaneous volume is the FS area of the rectangle spanned by the
//! anchored intervals `[θ(t_A), θ(t)] × [φ(t_A), φ(t)]`. When either angle
//! does not move the rectangle collapses and the FS length of the remaining
//! side is used instead.

use crate::error::{Error, Result};
use crate::geometry;
use crate::propagator::{Trajectory, TrajectorySample};
use crate::quad;

/// Angle spans below this are treated as degenerate.
pub const DEGENERATE_SPAN: f64 = 1e-9;
/// Convergence threshold for successive accessed-volume estimates.
pub const ACCESSED_TOL: f64 = 1e-8;
/// Largest grid tried while refining the accessed volume.
pub const MAX_NODES: usize = 1 << 20;

/// Bounding box of the visited angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleRange {
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
}

impl AngleRange {
    pub fn contains(&self, theta: f64, phi: f64, tol: f64) -> bool {
        theta >= self.theta_min - tol
            && theta <= self.theta_max + tol
            && phi >= self.phi_min - tol
            && phi <= self.phi_max + tol
    }
}

/// Volumes and the derived complexity of one trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeReport {
    /// `V(t)` on the trajectory grid.
    pub v_of_t: Vec<f64>,
    /// Time average `V̄`.
    pub accessed: f64,
    /// `V_max`.
    pub accessible: f64,
    pub range: AngleRange,
    /// `C = (V_max − V̄)/V_max`.
    pub complexity: f64,
    /// `L_C = s·√(V_max/V̄)`; `None` when `V̄ = 0`.
    pub length_scale: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Degeneracy {
    None,
    /// Azimuth frozen: meridian arc length `½|Δθ|`.
    Azimuth,
    /// Polar angle frozen: latitude arc length `½ sin θ |Δφ|`.
    Polar,
}

fn spans(samples: &[TrajectorySample]) -> (f64, f64) {
    let (mut tlo, mut thi, mut plo, mut phi) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for s in samples {
        tlo = tlo.min(s.angles.theta);
        thi = thi.max(s.angles.theta);
        plo = plo.min(s.angles.phi);
        phi = phi.max(s.angles.phi);
    }
    (thi - tlo, phi - plo)
}

fn degeneracy(samples: &[TrajectorySample]) -> Degeneracy {
    let (dt, dp) = spans(samples);
    if dp < DEGENERATE_SPAN {
        Degeneracy::Azimuth
    } else if dt < DEGENERATE_SPAN {
        Degeneracy::Polar
    } else {
        Degeneracy::None
    }
}

fn volume_at(samples: &[TrajectorySample], i: usize, deg: Degeneracy) -> f64 {
    let a = samples[0].angles;
    let b = samples[i].angles;
    match deg {
        Degeneracy::Azimuth => 0.5 * (b.theta - a.theta).abs(),
        Degeneracy::Polar => 0.5 * a.theta.sin() * (b.phi - a.phi).abs(),
        Degeneracy::None => 0.25 * ((a.theta.cos() - b.theta.cos()) * (b.phi - a.phi)).abs(),
    }
}

/// `V(t_i) = |(cos θ(t_A) − cos θ(t_i))(φ(t_i) − φ(t_A))|/4`, with the
/// degenerate-side rules when a whole angle never moves.
pub fn instantaneous_volume(traj: &Trajectory, t_index: usize) -> Result<f64> {
    let s = traj.samples();
    if t_index >= s.len() {
        return Err(Error::InvalidArgument(format!(
            "sample index {t_index} out of range"
        )));
    }
    Ok(volume_at(s, t_index, degeneracy(s)))
}

/// `V(t)` at every sample.
pub fn volume_series(traj: &Trajectory) -> Vec<f64> {
    let s = traj.samples();
    let deg = degeneracy(s);
    (0..s.len()).map(|i| volume_at(s, i, deg)).collect()
}

fn accessed_on_grid(traj: &Trajectory) -> f64 {
    let v = volume_series(traj);
    let span = traj.t_b() - traj.t_a();
    let h = span / (v.len() - 1) as f64;
    quad::simpson_uniform(&v, h) / span
}

/// `V̄ = (t_B − t_A)⁻¹ ∫ V dt`, refining the grid fourfold until two
/// successive estimates agree to [`ACCESSED_TOL`].
pub fn accessed_volume(traj: &Trajectory) -> Result<f64> {
    if traj.len() < 3 {
        return Err(Error::InvalidArgument(
            "accessed volume needs at least 3 samples".into(),
        ));
    }
    let mut est = accessed_on_grid(traj);
    let mut n = traj.len();
    let mut change = f64::NAN;
    loop {
        let next_n = 4 * (n - 1) + 1;
        if next_n > MAX_NODES + 1 {
            return Err(Error::QuadratureNonConvergence { estimate: change });
        }
        let next = accessed_on_grid(&traj.resample(next_n)?);
        change = (next - est).abs();
        if change < ACCESSED_TOL {
            return Ok(next);
        }
        est = next;
        n = next_n;
    }
}

/// Extremum of a sampled function. Every interior local extremum is refined
/// by a parabola through its neighbours, so a peak between grid points wins
/// over an endpoint sample of nearly the same height.
pub fn refined_extremum(y: &[f64], want_max: bool) -> f64 {
    let better = |a: f64, b: f64| if want_max { a > b } else { a < b };
    let pick = |a: f64, b: f64| if better(b, a) { b } else { a };
    let (Some(&first), Some(&last)) = (y.first(), y.last()) else {
        return f64::NAN;
    };
    let mut best = pick(first, last);
    for w in y.windows(3) {
        let (l, m, r) = (w[0], w[1], w[2]);
        if better(l, m) || better(r, m) {
            continue;
        }
        best = pick(best, m);
        let curv = l - 2.0 * m + r;
        if curv == 0.0 {
            continue;
        }
        let off = 0.5 * (l - r) / curv;
        if off.abs() <= 1.0 {
            best = pick(best, m - 0.25 * (l - r) * off);
        }
    }
    best
}

/// Angle bounding box with quadratically refined interior extrema.
pub fn angle_range(traj: &Trajectory) -> AngleRange {
    let th: Vec<f64> = traj.samples().iter().map(|s| s.angles.theta).collect();
    let ph: Vec<f64> = traj.samples().iter().map(|s| s.angles.phi).collect();
    AngleRange {
        theta_min: refined_extremum(&th, false).max(0.0),
        theta_max: refined_extremum(&th, true).min(std::f64::consts::PI),
        phi_min: refined_extremum(&ph, false),
        phi_max: refined_extremum(&ph, true),
    }
}

/// `V_max = (cos θ_min − cos θ_max)(φ_max − φ_min)/4`, or the FS length
/// of the moving side when one angle is frozen.
pub fn accessible_volume(traj: &Trajectory) -> f64 {
    let r = angle_range(traj);
    accessible_from_range(
        &r,
        degeneracy(traj.samples()),
        traj.samples()[0].angles.theta,
    )
}

fn accessible_from_range(r: &AngleRange, deg: Degeneracy, theta_a: f64) -> f64 {
    match deg {
        Degeneracy::Azimuth => 0.5 * (r.theta_max - r.theta_min),
        Degeneracy::Polar => 0.5 * theta_a.sin() * (r.phi_max - r.phi_min),
        Degeneracy::None => {
            0.25 * (r.theta_min.cos() - r.theta_max.cos()) * (r.phi_max - r.phi_min)
        }
    }
}

fn ratio(v_max: f64, v_bar: f64) -> Result<f64> {
    if !(v_max > 1e-14) {
        return Err(Error::NoAccessibleRegion);
    }
    Ok(((v_max - v_bar) / v_max).clamp(0.0, 1.0))
}

/// `C = (V_max − V̄)/V_max`.
pub fn ig_complexity(traj: &Trajectory) -> Result<f64> {
    let v_max = accessible_volume(traj);
    if !(v_max > 1e-14) {
        return Err(Error::NoAccessibleRegion);
    }
    ratio(v_max, accessed_volume(traj)?)
}

/// `L_C = s·√(V_max/V̄)` with `s` the FS path length.
pub fn complexity_length_scale(traj: &Trajectory) -> Result<f64> {
    let v_bar = accessed_volume(traj)?;
    length_scale_from(geometry::path_length(traj)?, accessible_volume(traj), v_bar)
}

fn length_scale_from(s: f64, v_max: f64, v_bar: f64) -> Result<f64> {
    if !(v_bar > 0.0) {
        return Err(Error::ZeroAccessedVolume);
    }
    Ok(s * (v_max / v_bar).sqrt())
}

/// All volume quantities in one pass.
pub fn volume_report(traj: &Trajectory) -> Result<VolumeReport> {
    let v_of_t = volume_series(traj);
    let accessed = accessed_volume(traj)?;
    let range = angle_range(traj);
    let accessible = accessible_from_range(
        &range,
        degeneracy(traj.samples()),
        traj.samples()[0].angles.theta,
    );
    let complexity = ratio(accessible, accessed)?;
    let length_scale = match length_scale_from(geometry::path_length(traj)?, accessible, accessed) {
        Ok(l) => Some(l),
        Err(Error::ZeroAccessedVolume) => None,
        Err(e) => return Err(e),
    };
    Ok(VolumeReport {
        v_of_t,
        accessed,
        accessible,
        range,
        complexity,
        length_scale,
    })
}
