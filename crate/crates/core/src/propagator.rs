//! State propagation: closed forms where the field class admits one,
//! time-ordered midpoint-exponential stepping otherwise.

use crate::error::{Error, Result};
use crate::hamiltonian::{
    self, parametric_reference_amplitudes, uzdin_phase_between, FieldConfiguration, ScalarFn,
};
use crate::linalg::{Matrix2, Vec3};
use crate::qstate::{wrap_pi, BlochVector, PureQubitState, SphericalAngles, POLE_EPS};
use crate::quad;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest step count tried before giving up on the drift tolerance.
pub const MAX_STEPS: usize = 1 << 22;
pub const MIN_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Product of exact 2×2 exponentials of `H` at each step midpoint.
    #[default]
    MidpointExponential,
    /// Classical RK4 on the amplitudes, renormalized after every step.
    Rk4Renormalized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub step_count: usize,
    pub method: Method,
    /// Allowed norm drift `|‖ψ‖ − 1|` (RK4: summed per-step drift before renormalizing).
    pub tolerance: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            step_count: 2048,
            method: Method::MidpointExponential,
            tolerance: 1e-10,
        }
    }
}

impl IntegratorOptions {
    pub fn new(step_count: usize, method: Method, tolerance: f64) -> Result<Self> {
        if step_count < MIN_STEPS {
            return Err(Error::InvalidArgument(format!(
                "step_count must be >= {MIN_STEPS}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(Self {
            step_count,
            method,
            tolerance,
        })
    }
}

/// `e^{−ih0t}[cos(ht)I − i sin(ht) n·σ]` applied to `psi0`.
pub fn evolve_stationary(
    config: &FieldConfiguration,
    psi0: &PureQubitState,
    t: f64,
) -> Result<PureQubitState> {
    match config {
        FieldConfiguration::Constant { h0, h } => {
            config.field_at(t)?;
            psi0.apply(&Matrix2::evolution(*h0, *h, t))
        }
        _ => Err(Error::InvalidArgument(
            "evolve_stationary needs a constant field".into(),
        )),
    }
}

/// Propagator of a field whose Hamiltonians commute at all times: the
/// exponential of the integrated field. Refuses fields that fail the
/// sampled commutator check.
pub fn evolve_commuting(
    config: &FieldConfiguration,
    psi0: &PureQubitState,
    t: f64,
) -> Result<PureQubitState> {
    config.check_commuting(0.0, t)?;
    psi0.apply(&commuting_propagator(config, 0.0, t)?)
}

fn commuting_propagator(config: &FieldConfiguration, t0: f64, t1: f64) -> Result<Matrix2> {
    const TOL: f64 = 1e-12;
    let (phase, angle) = match config {
        FieldConfiguration::Constant { h0, h } => (h0 * (t1 - t0), *h * (t1 - t0)),
        FieldConfiguration::ScaledDirection {
            amplitude,
            direction,
            h0,
        } => {
            let a = quad::adaptive_simpson(|s| amplitude.value(s), t0, t1, TOL)?;
            (integrate_scalar(h0, t0, t1)?, *direction * a)
        }
        _ => {
            let comp = |k: usize| {
                quad::adaptive_simpson(
                    |s| {
                        config
                            .field_at(s)
                            .map(|(_, h)| h.to_array()[k])
                            .unwrap_or(f64::NAN)
                    },
                    t0,
                    t1,
                    TOL,
                )
            };
            let p = quad::adaptive_simpson(
                |s| config.field_at(s).map(|(h0, _)| h0).unwrap_or(f64::NAN),
                t0,
                t1,
                TOL,
            )?;
            (p, Vec3::new(comp(0)?, comp(1)?, comp(2)?))
        }
    };
    if !(phase.is_finite() && angle.norm().is_finite()) {
        return Err(Error::NonFiniteField { t: t1 });
    }
    Ok(Matrix2::evolution(phase, angle, 1.0))
}

fn integrate_scalar(f: &ScalarFn, t0: f64, t1: f64) -> Result<f64> {
    match f {
        ScalarFn::Constant(c) => Ok(c * (t1 - t0)),
        _ => quad::adaptive_simpson(|s| f.value(s), t0, t1, 1e-12),
    }
}

/// Time-ordered evolution from `t0` to `t1`. The step count is doubled
/// until the norm drift is within `opts.tolerance`, up to [`MAX_STEPS`].
pub fn evolve_ordered(
    config: &FieldConfiguration,
    psi0: &PureQubitState,
    t0: f64,
    t1: f64,
    opts: &IntegratorOptions,
) -> Result<PureQubitState> {
    let out = ordered_path(config, psi0, &[t0, t1], opts)?;
    Ok(out[1])
}

/// Time-ordered evolution through the increasing grid `times`, returning
/// the state at each grid point. Each interval gets
/// `max(1, ceil(step_count / intervals))` substeps.
pub fn ordered_path(
    config: &FieldConfiguration,
    psi0: &PureQubitState,
    times: &[f64],
    opts: &IntegratorOptions,
) -> Result<Vec<PureQubitState>> {
    if opts.step_count < MIN_STEPS {
        return Err(Error::InvalidArgument(format!(
            "step_count must be >= {MIN_STEPS}"
        )));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("times must be finite".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "evolution end time precedes start time".into(),
        ));
    }
    if times.len() < 2 {
        return Ok(times.iter().map(|_| *psi0).collect());
    }
    let intervals = times.len() - 1;
    let mut steps = opts.step_count;
    loop {
        let per = steps.div_ceil(intervals).max(1);
        let (raw, residual) = integrate_grid(config, psi0.amplitudes(), times, per, opts.method)?;
        if residual <= opts.tolerance {
            return raw
                .into_iter()
                .map(|v| PureQubitState::normalize(v[0], v[1]))
                .collect();
        }
        if steps >= MAX_STEPS {
            return Err(Error::IntegrationTolerance { residual });
        }
        steps = (steps * 2).min(MAX_STEPS);
    }
}

type Amps = [Complex64; 2];

fn integrate_grid(
    config: &FieldConfiguration,
    start: Amps,
    times: &[f64],
    per: usize,
    method: Method,
) -> Result<(Vec<Amps>, f64)> {
    let mut out = Vec::with_capacity(times.len());
    let mut v = start;
    let mut residual = 0.0f64;
    out.push(v);
    for w in times.windows(2) {
        let dt = (w[1] - w[0]) / per as f64;
        for k in 0..per {
            let ta = w[0] + k as f64 * dt;
            match method {
                Method::MidpointExponential => {
                    let (h0, h) = config.field_at(ta + 0.5 * dt)?;
                    v = Matrix2::evolution(h0, h, dt).apply(v);
                }
                Method::Rk4Renormalized => {
                    v = rk4_step(config, v, ta, dt)?;
                    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
                    residual += (n - 1.0).abs();
                    v = [v[0] / n, v[1] / n];
                }
            }
        }
        if method == Method::MidpointExponential {
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            residual = residual.max((n - 1.0).abs());
        }
        out.push(v);
    }
    Ok((out, residual))
}

fn rk4_step(config: &FieldConfiguration, v: Amps, t: f64, dt: f64) -> Result<Amps> {
    let f = |s: f64, x: Amps| -> Result<Amps> { schrodinger_rhs(config, s, x) };
    let add = |x: Amps, k: Amps, c: f64| [x[0] + k[0] * c, x[1] + k[1] * c];
    let k1 = f(t, v)?;
    let k2 = f(t + 0.5 * dt, add(v, k1, 0.5 * dt))?;
    let k3 = f(t + 0.5 * dt, add(v, k2, 0.5 * dt))?;
    let k4 = f(t + dt, add(v, k3, dt))?;
    Ok([
        v[0] + (k1[0] + k2[0] * 2.0 + k3[0] * 2.0 + k4[0]) * (dt / 6.0),
        v[1] + (k1[1] + k2[1] * 2.0 + k3[1] * 2.0 + k4[1]) * (dt / 6.0),
    ])
}

/// `dψ/dt = −i H(t) ψ`.
pub fn schrodinger_rhs(config: &FieldConfiguration, t: f64, v: Amps) -> Result<Amps> {
    let (h0, h) = config.field_at(t)?;
    let hv = Matrix2::from_field(h0, h).apply(v);
    let mi = Complex64::new(0.0, -1.0);
    Ok([hv[0] * mi, hv[1] * mi])
}

/// Closed-form state of `|0⟩` under the rotating field
/// `(ω/2)(cos νt σx + sin νt σy)`, with `Ω = √(ω² + ν²)`.
pub fn rotating_field_state(omega: f64, nu: f64, t: f64) -> PureQubitState {
    let big = omega.hypot(nu);
    if big == 0.0 {
        return PureQubitState::zero();
    }
    let (s, c) = (0.5 * big * t).sin_cos();
    let c0 = Complex64::new(c, nu / big * s) * Complex64::from_polar(1.0, -0.5 * nu * t);
    let c1 = Complex64::new(0.0, -omega / big * s) * Complex64::from_polar(1.0, 0.5 * nu * t);
    PureQubitState::normalize(c0, c1).expect("closed form has unit norm")
}

/// Rotating-field propagator from `t0` to `t1`: go to the co-rotating
/// frame, apply the constant frame Hamiltonian `(ωσx − νσz)/2`, return.
pub fn rotating_field_propagator(omega: f64, nu: f64, t0: f64, t1: f64) -> Matrix2 {
    let frame = |t: f64| Matrix2::evolution(0.0, Vec3::new(0.0, 0.0, 0.5 * nu), t);
    let h_rf = Vec3::new(0.5 * omega, 0.0, -0.5 * nu);
    frame(t1) * Matrix2::evolution(0.0, h_rf, t1 - t0) * frame(t0).dagger()
}

/// Exact propagator of the parametric family from `t0` to `t1`.
///
/// The parallel-transported orbit `m(t) = e^{−iφ(t)}(cos α|0⟩ + e^{iβ} sin α|1⟩)`
/// solves the Schrödinger equation. The field is traceless, so the
/// propagator lies in SU(2) and commutes with `J: (c0, c1) ↦ (−c1*, c0*)`;
/// hence `U = |m(t1)⟩⟨m(t0)| + |Jm(t1)⟩⟨Jm(t0)|` for any initial state.
pub fn parametric_propagator(
    alpha: &ScalarFn,
    beta: &ScalarFn,
    t0: f64,
    t1: f64,
) -> Result<Matrix2> {
    let dphi = uzdin_phase_between(alpha, beta, t0, t1)?;
    Ok(parametric_propagator_with_phase(alpha, beta, t0, t1, dphi))
}

/// Which propagator produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagatorKind {
    Stationary,
    Commuting,
    RotatingClosedForm,
    ParametricClosedForm,
    Ordered,
}

/// Propagator selection for trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed form when the field class has one.
    #[default]
    Best,
    /// Always time-ordered numerical integration.
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: PureQubitState,
    pub bloch: BlochVector,
    /// θ and unwrapped φ; at a pole φ is the one-sided limit along the path.
    pub angles: SphericalAngles,
    pub delta_e: f64,
    /// `dψ/dt = −iHψ`.
    pub tangent: [Complex64; 2],
}

#[derive(Debug, Clone)]
struct Source {
    config: FieldConfiguration,
    psi0: PureQubitState,
    t0: f64,
    t1: f64,
    opts: IntegratorOptions,
    route: Route,
    basis: Option<Matrix2>,
}

/// Uniformly sampled evolution `t ↦ |ψ(t)⟩` on `[t_A, t_B]`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
    kind: PropagatorKind,
    source: Source,
}

/// Samples `n` uniform times on `[t0, t1]` with the best available propagator.
pub fn trajectory(
    config: &FieldConfiguration,
    psi0: &PureQubitState,
    t0: f64,
    t1: f64,
    n: usize,
) -> Result<Trajectory> {
    Trajectory::build(
        config,
        psi0,
        t0,
        t1,
        n,
        IntegratorOptions::default(),
        Route::Best,
    )
}

impl Trajectory {
    /// `t1 == t0` yields a single sample; otherwise `n ≥ 2` and `t1 > t0`.
    pub fn build(
        config: &FieldConfiguration,
        psi0: &PureQubitState,
        t0: f64,
        t1: f64,
        n: usize,
        opts: IntegratorOptions,
        route: Route,
    ) -> Result<Trajectory> {
        let source = Source {
            config: config.clone(),
            psi0: *psi0,
            t0,
            t1,
            opts,
            route,
            basis: None,
        };
        Self::from_source(source, n)
    }

    fn from_source(src: Source, n: usize) -> Result<Trajectory> {
        let (t0, t1) = (src.t0, src.t1);
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidArgument(
                "trajectory bounds must be finite".into(),
            ));
        }
        if t1 < t0 {
            return Err(Error::InvalidArgument("t1 must not precede t0".into()));
        }
        let times: Vec<f64> = if t1 == t0 {
            vec![t0]
        } else {
            if n < 2 {
                return Err(Error::InvalidArgument(
                    "a trajectory needs at least 2 samples".into(),
                ));
            }
            let dt = (t1 - t0) / (n - 1) as f64;
            (0..n)
                .map(|i| if i + 1 == n { t1 } else { t0 + i as f64 * dt })
                .collect()
        };
        let (kind, states) = propagate_grid(&src, &times)?;
        let mut samples = Vec::with_capacity(times.len());
        for (&t, state) in times.iter().zip(states) {
            samples.push(make_sample(&src.config, t, state)?);
        }
        if let Some(b) = &src.basis {
            let bd = b.dagger();
            for s in samples.iter_mut() {
                s.state = s.state.in_basis(b)?;
                s.tangent = bd.apply(s.tangent);
                s.bloch = s.state.to_bloch();
                s.angles = s.state.to_angles();
            }
        }
        fix_pole_azimuths(&mut samples);
        unwrap_azimuth(&mut samples);
        Ok(Trajectory {
            samples,
            kind,
            source: src,
        })
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn t_a(&self) -> f64 {
        self.source.t0
    }

    pub fn t_b(&self) -> f64 {
        self.source.t1
    }

    pub fn config(&self) -> &FieldConfiguration {
        &self.source.config
    }

    /// Initial state in the computational basis.
    pub fn psi0(&self) -> &PureQubitState {
        &self.source.psi0
    }

    pub fn options(&self) -> &IntegratorOptions {
        &self.source.opts
    }

    pub fn propagator_kind(&self) -> PropagatorKind {
        self.kind
    }

    /// Basis the samples are expressed in, if not the computational one.
    pub fn basis(&self) -> Option<&Matrix2> {
        self.source.basis.as_ref()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Same evolution sampled at `n` uniform times.
    pub fn resample(&self, n: usize) -> Result<Trajectory> {
        Self::from_source(self.source.clone(), n)
    }

    /// Same evolution with states expressed in the orthonormal basis formed
    /// by the columns of `basis`.
    pub fn in_basis(&self, basis: &Matrix2) -> Result<Trajectory> {
        if basis.unitarity_defect() > 1e-9 {
            return Err(Error::NotUnitary {
                deviation: basis.unitarity_defect(),
            });
        }
        let mut src = self.source.clone();
        src.basis = Some(match src.basis {
            Some(b) => b * *basis,
            None => *basis,
        });
        Self::from_source(src, self.samples.len())
    }

    /// Max over samples of `|‖ψ‖ − 1|`.
    pub fn max_norm_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.state.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn propagate_grid(src: &Source, times: &[f64]) -> Result<(PropagatorKind, Vec<PureQubitState>)> {
    let cfg = &src.config;
    let psi0 = &src.psi0;
    let t0 = src.t0;
    if src.route == Route::Numeric {
        return Ok((
            PropagatorKind::Ordered,
            ordered_path(cfg, psi0, times, &src.opts)?,
        ));
    }
    let apply_all = |f: &dyn Fn(f64) -> Result<Matrix2>| -> Result<Vec<PureQubitState>> {
        times.iter().map(|&t| psi0.apply(&f(t)?)).collect()
    };
    match cfg {
        FieldConfiguration::Constant { h0, h } => Ok((
            PropagatorKind::Stationary,
            // Rejects fields whose norm overflows before any sample is built.
            cfg.field_at(t0)
                .and_then(|_| apply_all(&|t| Ok(Matrix2::evolution(*h0, *h, t - t0))))?,
        )),
        FieldConfiguration::ScaledDirection { .. } => {
            cfg.check_commuting(t0, src.t1)?;
            // Accumulate interval integrals so each sample costs one panel.
            let mut out = Vec::with_capacity(times.len());
            let mut u = Matrix2::identity();
            let mut prev = t0;
            for &t in times {
                u = commuting_propagator(cfg, prev, t)? * u;
                prev = t;
                out.push(psi0.apply(&u)?);
            }
            Ok((PropagatorKind::Commuting, out))
        }
        FieldConfiguration::RotatingXY { omega, nu } => Ok((
            PropagatorKind::RotatingClosedForm,
            apply_all(&|t| Ok(rotating_field_propagator(*omega, *nu, t0, t)))?,
        )),
        FieldConfiguration::Parametric { alpha, beta } => {
            let mut out = Vec::with_capacity(times.len());
            // Phase accumulated interval by interval.
            let mut phase = 0.0;
            let mut prev = t0;
            for &t in times {
                phase += uzdin_phase_between(alpha, beta, prev, t)?;
                prev = t;
                let u = parametric_propagator_with_phase(alpha, beta, t0, t, phase);
                out.push(psi0.apply(&u)?);
            }
            Ok((PropagatorKind::ParametricClosedForm, out))
        }
        FieldConfiguration::Custom(_) => Ok((
            PropagatorKind::Ordered,
            ordered_path(cfg, psi0, times, &src.opts)?,
        )),
    }
}

fn parametric_propagator_with_phase(
    alpha: &ScalarFn,
    beta: &ScalarFn,
    t0: f64,
    t1: f64,
    dphi: f64,
) -> Matrix2 {
    let m0 = parametric_reference_amplitudes(alpha.value(t0), beta.value(t0));
    let r1 = parametric_reference_amplitudes(alpha.value(t1), beta.value(t1));
    let p = Complex64::from_polar(1.0, -dphi);
    let m1 = [r1[0] * p, r1[1] * p];
    let n0 = [-m0[1].conj(), m0[0].conj()];
    let n1 = [-m1[1].conj(), m1[0].conj()];
    let mut u = Matrix2::zero();
    for r in 0..2 {
        for c in 0..2 {
            u.m[r][c] = m1[r] * m0[c].conj() + n1[r] * n0[c].conj();
        }
    }
    u
}

fn make_sample(
    config: &FieldConfiguration,
    t: f64,
    state: PureQubitState,
) -> Result<TrajectorySample> {
    let (h0, h) = config.field_at(t)?;
    let bloch = state.to_bloch();
    let delta_e = match config {
        FieldConfiguration::Parametric { alpha, beta } => {
            hamiltonian::parametric_energy_uncertainty(alpha, beta, t)
        }
        _ => hamiltonian::energy_uncertainty(&bloch, h),
    };
    let hv = Matrix2::from_field(h0, h).apply(state.amplitudes());
    let mi = Complex64::new(0.0, -1.0);
    Ok(TrajectorySample {
        t,
        state,
        bloch,
        angles: state.to_angles(),
        delta_e,
        tangent: [hv[0] * mi, hv[1] * mi],
    })
}

/// Replaces the pole convention φ = 0 by the one-sided limit of the
/// azimuth along the path, read off the tangent `ψ̇`. Near `|0⟩` the path
/// leaves along `c1 ≈ δt·ψ̇₁`; near `|1⟩` along `c0 ≈ δt·ψ̇₀`. The last
/// sample uses the left limit. A vanishing tangent component copies the
/// azimuth of the nearest non-pole sample.
fn fix_pole_azimuths(samples: &mut [TrajectorySample]) {
    let n = samples.len();
    let is_pole = |s: &TrajectorySample| s.state.c0().norm().min(s.state.c1().norm()) < POLE_EPS;
    let mut unresolved = Vec::new();
    for i in 0..n {
        let s = &samples[i];
        if !is_pole(s) {
            continue;
        }
        let sign = if i + 1 == n && n > 1 { -1.0 } else { 1.0 };
        let (c0, c1) = (s.state.c0(), s.state.c1());
        let phi = if c1.norm() < c0.norm() {
            let d = s.tangent[1] * sign;
            (d.norm() > POLE_EPS).then(|| wrap_pi(d.arg() - c0.arg()))
        } else {
            let d = s.tangent[0] * sign;
            (d.norm() > POLE_EPS).then(|| wrap_pi(c1.arg() - d.arg()))
        };
        match phi {
            Some(p) => samples[i].angles.phi = p,
            None => unresolved.push(i),
        }
    }
    for i in unresolved {
        let nearest = (1..n).find_map(|d| {
            [i.checked_sub(d), (i + d < n).then_some(i + d)]
                .into_iter()
                .flatten()
                .find(|&j| !is_pole(&samples[j]))
        });
        if let Some(j) = nearest {
            samples[i].angles.phi = samples[j].angles.phi;
        }
    }
}

/// Adds multiples of 2π so that adjacent azimuths differ by at most π.
fn unwrap_azimuth(samples: &mut [TrajectorySample]) {
    for i in 1..samples.len() {
        let prev = samples[i - 1].angles.phi;
        let mut p = samples[i].angles.phi;
        let k = ((p - prev) / (2.0 * PI)).round();
        p -= k * 2.0 * PI;
        samples[i].angles.phi = p;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn fidelity_error(a: &PureQubitState, b: &PureQubitState) -> f64 {
        1.0 - a.overlap(b).norm_sqr()
    }

    #[test]
    fn overflowing_field_norm_is_rejected() {
        let cfg = FieldConfiguration::Constant {
            h0: 0.0,
            h: Vec3::new(1e308, 1e308, 0.0),
        };
        let psi = PureQubitState::zero();
        assert!(matches!(
            evolve_stationary(&cfg, &psi, 1.0),
            Err(Error::NonFiniteField { .. })
        ));
        assert!(matches!(
            evolve_commuting(&cfg, &psi, 1.0),
            Err(Error::NonFiniteField { .. })
        ));
    }

    fn geo_v_a(w: f64) -> FieldConfiguration {
        FieldConfiguration::Constant {
            h0: 0.0,
            h: Vec3::new(0.0, w / 6f64.sqrt(), 0.0),
        }
    }

    fn nongeo_v_b(w: f64) -> FieldConfiguration {
        let k = 0.5 * w / 3f64.sqrt();
        FieldConfiguration::Constant {
            h0: 0.0,
            h: Vec3::new(k, k, k),
        }
    }

    #[test]
    fn stationary_examples() {
        let w = 1.4;
        let z = PureQubitState::zero();
        let tf = PI * 6f64.sqrt() / (4.0 * w);
        let s = evolve_stationary(&geo_v_a(w), &z, tf).unwrap();
        assert!((s.c0() - PureQubitState::plus().c0()).norm() < 1e-15);
        assert!((s.c1() - PureQubitState::plus().c1()).norm() < 1e-15);
        assert_eq!(evolve_stationary(&nongeo_v_b(w), &z, 0.0).unwrap(), z);
        let s = evolve_stationary(&nongeo_v_b(w), &z, 2.0 * PI / (3.0 * w)).unwrap();
        assert!(s.phase_equivalent(&PureQubitState::plus(), 1e-9));
    }

    #[test]
    fn commuting_examples() {
        let (w0, b0) = (0.9, FRAC_PI_4);
        let cfg = FieldConfiguration::scaled_direction(
            ScalarFn::Linear {
                c0: 0.0,
                c1: 2.0 * w0 * w0,
            },
            Vec3::new(-b0.sin(), b0.cos(), 0.0),
            ScalarFn::Constant(0.0),
        )
        .unwrap();
        for &t in &[0.3, 1.0, 1.3] {
            let s = evolve_commuting(&cfg, &PureQubitState::zero(), t).unwrap();
            let a = s.to_angles();
            assert!((a.theta - 2.0 * w0 * w0 * t * t).abs() < 1e-10);
        }
        let c = geo_v_a(1.0);
        let psi = PureQubitState::from_angles(1.0, 0.3).unwrap();
        let a = evolve_commuting(&c, &psi, 2.2).unwrap();
        let b = evolve_stationary(&c, &psi, 2.2).unwrap();
        assert!((a.c0() - b.c0()).norm() + (a.c1() - b.c1()).norm() < 1e-12);
        let zero = FieldConfiguration::Constant {
            h0: 0.0,
            h: Vec3::ZERO,
        };
        assert_eq!(evolve_commuting(&zero, &psi, 5.0).unwrap(), psi);
        let r = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        assert!(matches!(
            evolve_commuting(&r, &psi, 1.0),
            Err(Error::NonCommuting { .. })
        ));
    }

    #[test]
    fn ordered_matches_closed_forms() {
        let opts = IntegratorOptions::default();
        let psi = PureQubitState::from_angles(0.8, -0.4).unwrap();
        let c = nongeo_v_b(1.3);
        let a = evolve_ordered(&c, &psi, 0.0, 3.0, &opts).unwrap();
        let b = evolve_stationary(&c, &psi, 3.0).unwrap();
        assert!((a.c0() - b.c0()).norm() + (a.c1() - b.c1()).norm() < 1e-10);
        assert_eq!(evolve_ordered(&c, &psi, 1.0, 1.0, &opts).unwrap(), psi);
        assert!(evolve_ordered(&c, &psi, 1.0, 0.5, &opts).is_err());
    }

    #[test]
    fn rotating_closed_form_examples() {
        assert_eq!(rotating_field_state(1.0, 1.0, 0.0), PureQubitState::zero());
        let w = 2.0;
        let s = rotating_field_state(w, 0.0, PI / w);
        assert!((s.c1() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        // General frame form reproduces the |0⟩ formula.
        for &t in &[0.0, 0.7, 3.1, 6.0] {
            let u = rotating_field_propagator(1.0, 0.6, 0.0, t);
            let a = PureQubitState::zero().apply(&u).unwrap();
            let b = rotating_field_state(1.0, 0.6, t);
            assert!((a.c0() - b.c0()).norm() + (a.c1() - b.c1()).norm() < 1e-14);
        }
    }

    #[test]
    fn rotating_state_against_fine_integration() {
        let cfg = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        let t = PI / 2f64.sqrt();
        let opts = IntegratorOptions {
            step_count: 1 << 16,
            ..Default::default()
        };
        let num = evolve_ordered(&cfg, &PureQubitState::zero(), 0.0, t, &opts).unwrap();
        let exact = rotating_field_state(1.0, 1.0, t);
        assert!(fidelity_error(&num, &exact) < 1e-15);
        // Population of |0⟩: 1 − (1/2) sin²(Ωt/2) with Ω = √2.
        let p0 = 1.0 - 0.5 * (2f64.sqrt() * t / 2.0).sin().powi(2);
        assert!((exact.c0().norm_sqr() - p0).abs() < 1e-14);
        assert!((exact.c0().norm_sqr() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn parametric_closed_form_matches_ordered_for_any_state() {
        let cfg = FieldConfiguration::Parametric {
            alpha: ScalarFn::Quadratic {
                c0: 0.3,
                c1: 0.5,
                c2: 0.2,
            },
            beta: ScalarFn::Linear { c0: 0.1, c1: 1.3 },
        };
        let FieldConfiguration::Parametric { alpha, beta } = &cfg else {
            unreachable!()
        };
        let psi = PureQubitState::from_angles(2.0, 1.1).unwrap();
        let u = parametric_propagator(alpha, beta, 0.4, 2.5).unwrap();
        assert!(u.unitarity_defect() < 1e-14);
        let a = psi.apply(&u).unwrap();
        let opts = IntegratorOptions {
            step_count: 1 << 15,
            ..Default::default()
        };
        let b = evolve_ordered(&cfg, &psi, 0.4, 2.5, &opts).unwrap();
        assert!((a.c0() - b.c0()).norm() + (a.c1() - b.c1()).norm() < 1e-8);
    }

    #[test]
    fn composition_and_unitarity() {
        let c = nongeo_v_b(0.7);
        let psi = PureQubitState::from_angles(1.2, 2.0).unwrap();
        let direct = evolve_stationary(&c, &psi, 2.5).unwrap();
        let mid = evolve_stationary(&c, &psi, 1.1).unwrap();
        let two = mid
            .apply(&Matrix2::evolution(
                0.0,
                Vec3::new(0.7, 0.7, 0.7) * (0.5 / 3f64.sqrt()),
                1.4,
            ))
            .unwrap();
        assert!((direct.c0() - two.c0()).norm() + (direct.c1() - two.c1()).norm() < 1e-12);

        let r = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        let opts = IntegratorOptions::default();
        let d = evolve_ordered(&r, &psi, 0.0, 4.0, &opts).unwrap();
        let m = evolve_ordered(&r, &psi, 0.0, 1.5, &opts).unwrap();
        let e = evolve_ordered(&r, &m, 1.5, 4.0, &opts).unwrap();
        // Second-order stepping leaves O(Δt²) ≈ 1e-6 amplitude error, so
        // composition is compared in fidelity.
        assert!(fidelity_error(&d, &e) < 1e-8);
    }

    #[test]
    fn rk4_method_agrees() {
        let r = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        let opts = IntegratorOptions::new(4096, Method::Rk4Renormalized, 1e-8).unwrap();
        let s = evolve_ordered(&r, &PureQubitState::zero(), 0.0, 2.0 * PI, &opts).unwrap();
        assert!(fidelity_error(&s, &rotating_field_state(1.0, 1.0, 2.0 * PI)) < 1e-12);
    }

    #[test]
    fn unreachable_tolerance_reports_residual() {
        let r = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        let opts = IntegratorOptions {
            step_count: MAX_STEPS,
            method: Method::Rk4Renormalized,
            tolerance: 1e-300,
        };
        match evolve_ordered(&r, &PureQubitState::zero(), 0.0, 0.01, &opts) {
            Err(Error::IntegrationTolerance { residual }) => assert!(residual > 0.0),
            other => panic!("{other:?}"),
        }
        assert!(IntegratorOptions::new(8, Method::MidpointExponential, 1e-10).is_err());
    }

    #[test]
    fn trajectory_examples() {
        let w = 1.0;
        let tf = PI * 6f64.sqrt() / 4.0;
        let tr = trajectory(&geo_v_a(w), &PureQubitState::zero(), 0.0, tf, 9).unwrap();
        for s in tr.samples() {
            assert!((s.angles.theta - 2.0 * w * s.t / 6f64.sqrt()).abs() < 1e-14);
            assert!(s.angles.phi.abs() < 1e-14);
        }
        let two = trajectory(&geo_v_a(w), &PureQubitState::zero(), 0.0, tf, 2).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two.samples()[1].t, tf);

        let (w0, n0, b0) = (1.0, 1.0, FRAC_PI_4);
        let cfg = FieldConfiguration::Parametric {
            alpha: ScalarFn::Linear { c0: 0.0, c1: w0 },
            beta: ScalarFn::Linear { c0: b0, c1: n0 },
        };
        let tr = trajectory(&cfg, &PureQubitState::zero(), 0.0, PI / 2.0, 65).unwrap();
        for s in &tr.samples()[..64] {
            assert!((s.angles.theta - 2.0 * w0 * s.t).abs() < 1e-12);
            assert!(
                (s.angles.phi - (b0 + n0 * s.t)).abs() < 1e-9,
                "{} {}",
                s.t,
                s.angles.phi
            );
        }
        let single = trajectory(&cfg, &PureQubitState::zero(), 1.0, 1.0, 10).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn stationary_nongeodesic_leaves_pole_along_minus_quarter_pi() {
        let tr = trajectory(
            &nongeo_v_b(1.0),
            &PureQubitState::zero(),
            0.0,
            2.0 * PI / 3.0,
            33,
        )
        .unwrap();
        assert!((tr.samples()[0].angles.phi + FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn numeric_route_matches_closed_form_route() {
        let cfg = FieldConfiguration::RotatingXY {
            omega: 1.0,
            nu: 1.0,
        };
        let z = PureQubitState::zero();
        let opts = IntegratorOptions::default();
        let a = Trajectory::build(&cfg, &z, 0.0, 2.0 * PI, 257, opts, Route::Best).unwrap();
        let b = Trajectory::build(&cfg, &z, 0.0, 2.0 * PI, 257, opts, Route::Numeric).unwrap();
        assert_eq!(b.propagator_kind(), PropagatorKind::Ordered);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!(fidelity_error(&x.state, &y.state) < 1e-10);
        }
    }
}
