//! The five reference evolutions and their end-to-end complexity reports.
//!
//! Every scenario starts from `|0⟩` at `t = 0`. Defaults are
//! `ω = ω₀ = ν₀ = ν = 1` and `β₀ = π/4`.

mod verify;

pub use verify::{
    sigma_x_krylov_basis, sigma_x_trajectory, verify_all, Comparison, TolerancePolicy,
    VerificationRow, VerificationTable,
};

use crate::error::{Error, Result};
use crate::geometry;
use crate::hamiltonian::{FieldConfiguration, ScalarFn};
use crate::igc;
use crate::krylov::{self, KrylovSource, SpreadWeights, AVERAGE_NODES};
use crate::linalg::Vec3;
use crate::propagator::{IntegratorOptions, PropagatorKind, Route, Trajectory};
use crate::qstate::PureQubitState;
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

/// Agreement required between the Lanczos and Bloch routes to `K(t)`.
pub const ROUTE_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioName {
    StationaryGeodesic,
    StationaryNongeodesic,
    NonstationaryGeodesic,
    NonstationaryNongeodesic,
    RotatingField,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 5] = [
        ScenarioName::StationaryGeodesic,
        ScenarioName::StationaryNongeodesic,
        ScenarioName::NonstationaryGeodesic,
        ScenarioName::NonstationaryNongeodesic,
        ScenarioName::RotatingField,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioName::StationaryGeodesic => "stationary-geodesic",
            ScenarioName::StationaryNongeodesic => "stationary-nongeodesic",
            ScenarioName::NonstationaryGeodesic => "nonstationary-geodesic",
            ScenarioName::NonstationaryNongeodesic => "nonstationary-nongeodesic",
            ScenarioName::RotatingField => "rotating-field",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScenarioName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scenario '{s}'")))
    }
}

/// Tunable scenario parameters. `t_f = None` uses the scenario's own final time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub omega: f64,
    pub omega0: f64,
    pub nu0: f64,
    pub beta0: f64,
    pub nu: f64,
    pub t_f: Option<f64>,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            omega: 1.0,
            omega0: 1.0,
            nu0: 1.0,
            beta0: FRAC_PI_4,
            nu: 1.0,
            t_f: None,
        }
    }
}

impl ScenarioParams {
    pub const NAMES: [&'static str; 6] = ["omega", "omega0", "nu0", "beta0", "nu", "t_f"];

    /// Sets a parameter by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} must be finite")));
        }
        match name {
            "omega" => self.omega = value,
            "omega0" => self.omega0 = value,
            "nu0" => self.nu0 = value,
            "beta0" => self.beta0 = value,
            "nu" => self.nu = value,
            "t_f" => self.t_f = Some(value),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown parameter '{name}'"
                )))
            }
        }
        Ok(())
    }
}

/// A fully specified scenario.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: ScenarioName,
    pub config: FieldConfiguration,
    pub psi0: PureQubitState,
    pub t_i: f64,
    pub t_f: f64,
    /// The parameters that enter this scenario.
    pub parameters: BTreeMap<String, f64>,
}

impl ScenarioSpec {
    pub fn new(name: ScenarioName, p: &ScenarioParams) -> Result<Self> {
        let positive = |label: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(Error::InvalidArgument(format!("{label} must be positive")))
            }
        };
        let mut parameters = BTreeMap::new();
        let (config, t_f) = match name {
            ScenarioName::StationaryGeodesic => {
                let w = positive("omega", p.omega)?;
                parameters.insert("omega".into(), w);
                (
                    FieldConfiguration::Constant {
                        h0: 0.0,
                        h: Vec3::new(0.0, w / 6f64.sqrt(), 0.0),
                    },
                    PI * 6f64.sqrt() / (4.0 * w),
                )
            }
            ScenarioName::StationaryNongeodesic => {
                let w = positive("omega", p.omega)?;
                parameters.insert("omega".into(), w);
                let k = 0.5 * w / 3f64.sqrt();
                (
                    FieldConfiguration::Constant {
                        h0: 0.0,
                        h: Vec3::new(k, k, k),
                    },
                    2.0 * PI / (3.0 * w),
                )
            }
            ScenarioName::NonstationaryGeodesic => {
                let w0 = positive("omega0", p.omega0)?;
                parameters.insert("omega0".into(), w0);
                parameters.insert("beta0".into(), p.beta0);
                (
                    FieldConfiguration::Parametric {
                        alpha: ScalarFn::Linear { c0: 0.0, c1: w0 },
                        beta: ScalarFn::Constant(p.beta0),
                    },
                    PI / (2.0 * w0),
                )
            }
            ScenarioName::NonstationaryNongeodesic => {
                let w0 = positive("omega0", p.omega0)?;
                parameters.insert("omega0".into(), w0);
                parameters.insert("nu0".into(), p.nu0);
                parameters.insert("beta0".into(), p.beta0);
                (
                    FieldConfiguration::Parametric {
                        alpha: ScalarFn::Linear { c0: 0.0, c1: w0 },
                        beta: ScalarFn::Linear {
                            c0: p.beta0,
                            c1: p.nu0,
                        },
                    },
                    PI / (2.0 * w0),
                )
            }
            ScenarioName::RotatingField => {
                parameters.insert("omega".into(), p.omega);
                parameters.insert("nu".into(), p.nu);
                if p.omega == 0.0 && p.nu == 0.0 {
                    return Err(Error::InvalidArgument(
                        "omega and nu cannot both vanish".into(),
                    ));
                }
                (
                    FieldConfiguration::RotatingXY {
                        omega: p.omega,
                        nu: p.nu,
                    },
                    2.0 * PI,
                )
            }
        };
        let t_f = match p.t_f {
            Some(t) => positive("t_f", t)?,
            None => t_f,
        };
        parameters.insert("t_f".into(), t_f);
        Ok(Self {
            name,
            config,
            psi0: PureQubitState::zero(),
            t_i: 0.0,
            t_f,
            parameters,
        })
    }
}

/// Sampling and propagator choices for [`run_scenario`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub samples: usize,
    pub route: Route,
    pub integrator: IntegratorOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            samples: 2049,
            route: Route::Best,
            integrator: IntegratorOptions::default(),
        }
    }
}

/// An analytic value the report can be compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub quantity: &'static str,
    pub value: f64,
}

/// All complexity measures for one evolution.
#[derive(Debug, Clone)]
pub struct ComplexityReport {
    pub scenario: String,
    pub parameters: BTreeMap<String, f64>,
    pub trajectory: Trajectory,
    /// `K(t)` by the Lanczos route.
    pub k_series: Vec<f64>,
    /// Largest gap between the Lanczos and Bloch routes to `K(t)`.
    pub k_route_gap: f64,
    pub v_series: Vec<f64>,
    /// `κ²(t)`, `None` where undefined.
    pub kappa_sq: Vec<Option<f64>>,
    pub avg_k: f64,
    /// Closed-form `⟨K⟩` when the field is constant.
    pub avg_k_closed_form: Option<f64>,
    pub sup_k: f64,
    pub v_bar: f64,
    pub v_max: f64,
    pub c_igc: f64,
    pub eta_ge: f64,
    pub s: f64,
    pub s0: f64,
    pub l_c: Option<f64>,
    pub propagator: PropagatorKind,
    pub expected: Vec<Expectation>,
    /// Why the volume scalars are undefined, when they are.
    pub igc_error: Option<String>,
}

impl ComplexityReport {
    pub fn kappa_sq_t0(&self) -> Option<f64> {
        self.kappa_sq.first().copied().flatten()
    }

    pub fn expected(&self, quantity: &str) -> Option<f64> {
        self.expected
            .iter()
            .find(|e| e.quantity == quantity)
            .map(|e| e.value)
    }
}

/// Builds the trajectory and evaluates every measure. `K(t)` is computed
/// both from the Lanczos basis and from the Bloch vectors; the two must
/// agree to [`ROUTE_AGREEMENT`].
pub fn run_scenario(spec: &ScenarioSpec, opts: &RunOptions) -> Result<ComplexityReport> {
    let traj = Trajectory::build(
        &spec.config,
        &spec.psi0,
        spec.t_i,
        spec.t_f,
        opts.samples,
        opts.integrator,
        opts.route,
    )?;
    let mut report = analyze(&traj)?;
    report.scenario = spec.name.to_string();
    report.parameters = spec.parameters.clone();
    report.expected = expectations(spec);
    Ok(report)
}

/// Complexity report for an arbitrary trajectory.
pub fn analyze(traj: &Trajectory) -> Result<ComplexityReport> {
    let (k_series, k_route_gap) = krylov_series(traj)?;
    let samples = traj.samples();
    let single = samples.len() < 2;

    let (avg_k, avg_k_closed_form) = if single {
        (0.0, None)
    } else {
        average_k(traj, &k_series)?
    };
    let sup_k = igc::refined_extremum(&k_series, true);
    let s = geometry::path_length(traj)?;
    let s0 = geometry::geodesic_distance(&samples[0].state, &samples[samples.len() - 1].state);
    let eta_ge = geometry::efficiency_from(s0, s)?;
    let kappa_sq = geometry::curvature_series(traj)?;
    let mut igc_error = None;
    let (v_series, v_bar, v_max, c_igc, l_c) = if single {
        igc_error = Some(Error::NoAccessibleRegion.to_string());
        (vec![0.0], 0.0, 0.0, f64::NAN, None)
    } else {
        match igc::volume_report(traj) {
            Ok(r) => (
                r.v_of_t,
                r.accessed,
                r.accessible,
                r.complexity,
                r.length_scale,
            ),
            // No motion, or a volume series too rough to average (typically a
            // jump of φ by π where the path crosses a pole). The series is
            // still reported; the scalars are left undefined.
            Err(e @ (Error::NoAccessibleRegion | Error::QuadratureNonConvergence { .. })) => {
                igc_error = Some(e.to_string());
                let v_bar = if matches!(e, Error::NoAccessibleRegion) {
                    0.0
                } else {
                    f64::NAN
                };
                (
                    igc::volume_series(traj),
                    v_bar,
                    igc::accessible_volume(traj),
                    f64::NAN,
                    None,
                )
            }
            Err(e) => return Err(e),
        }
    };
    Ok(ComplexityReport {
        scenario: "custom".into(),
        parameters: BTreeMap::new(),
        trajectory: traj.clone(),
        k_series,
        k_route_gap,
        v_series,
        kappa_sq,
        avg_k,
        avg_k_closed_form,
        sup_k,
        v_bar,
        v_max,
        c_igc,
        eta_ge,
        s,
        s0,
        l_c,
        propagator: traj.propagator_kind(),
        expected: Vec::new(),
        igc_error,
    })
}

/// `K(t)` from the Krylov basis of `H` at the first sample time where the
/// initial state is not an eigenstate, checked against `(1 − a₀·a_t)/2`.
pub fn krylov_series(traj: &Trajectory) -> Result<(Vec<f64>, f64)> {
    let samples = traj.samples();
    let psi0 = samples[0].state;
    let mut basis = None;
    for s in samples {
        let mut h = *traj.config().matrix_at(s.t)?.matrix();
        if let Some(b) = traj.basis() {
            h = b.dagger() * h * *b;
        }
        let kb = krylov::qubit_basis(&h, &psi0)?;
        let full = kb.dimension() == 2;
        if basis.is_none() || full {
            basis = Some(kb);
        }
        if full {
            break;
        }
    }
    let basis = basis.expect("trajectory has at least one sample");
    let a0 = samples[0].bloch;
    let mut gap = 0.0f64;
    let mut ks = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        // The first sample is ψ₀ = |K₀⟩ itself; rounding in ⟨K₁|K₀⟩ would leave ~1e-33.
        let k = if i == 0 {
            0.0
        } else {
            krylov::spread_complexity(&s.state.amplitudes(), &basis, &SpreadWeights::Linear)?
        };
        gap = gap.max((k - krylov::krylov_from_bloch(&a0, &s.bloch)).abs());
        ks.push(k);
    }
    if gap > ROUTE_AGREEMENT {
        return Err(Error::Inconsistent(format!(
            "Lanczos and Bloch routes to K differ by {gap:e}"
        )));
    }
    Ok((ks, gap))
}

/// Simpson average of the Lanczos-route `K(t)` on at least
/// [`AVERAGE_NODES`] nodes, plus the closed form for constant fields.
fn average_k(traj: &Trajectory, k_series: &[f64]) -> Result<(f64, Option<f64>)> {
    let (t_a, t_b) = (traj.t_a(), traj.t_b());
    let quadrature = if k_series.len() >= AVERAGE_NODES {
        krylov::time_averaged_krylov(&KrylovSource::Sampled(k_series), t_a, t_b)?.quadrature
    } else {
        let (fine, _) = krylov_series(&traj.resample(AVERAGE_NODES)?)?;
        krylov::time_averaged_krylov(&KrylovSource::Sampled(&fine), t_a, t_b)?.quadrature
    };
    let closed_form = match traj.config() {
        FieldConfiguration::Constant { h, .. } if traj.basis().is_none() => match h.normalized() {
            Some(n) => {
                let a0 = traj.psi0().to_bloch();
                krylov::time_averaged_krylov(
                    &KrylovSource::Stationary { a0, n, h: h.norm() },
                    t_a,
                    t_b,
                )?
                .closed_form
            }
            None => Some(0.0),
        },
        _ => None,
    };
    Ok((quadrature, closed_form))
}

/// Analytic values known for each scenario.
pub fn expectations(spec: &ScenarioSpec) -> Vec<Expectation> {
    let p = |k: &str| spec.parameters.get(k).copied().unwrap_or(f64::NAN);
    let e = |quantity, value| Expectation { quantity, value };
    match spec.name {
        ScenarioName::StationaryGeodesic => vec![
            e("avg_k", 0.5 - 1.0 / PI),
            e("c_igc", 0.5),
            e("eta_ge", 1.0),
            e("kappa_sq", 0.0),
            e("v_bar", PI / 8.0),
            e("v_max", FRAC_PI_4),
            e("s", PI / 2.0),
            e("s0", PI / 2.0),
            e("l_c", PI / 2.0 * 2f64.sqrt()),
        ],
        ScenarioName::StationaryNongeodesic => vec![
            e("avg_k", 1.0 / 3.0 - 3f64.sqrt() / (4.0 * PI)),
            e("v_max", PI / 16.0),
            e("eta_ge", 3.0 * 6f64.sqrt() / 8.0),
            e("kappa_sq", 2.0),
            e("s0", PI / 2.0),
        ],
        ScenarioName::NonstationaryGeodesic => vec![
            e("avg_k", 0.5),
            e("c_igc", 0.5),
            e("eta_ge", 1.0),
            e("kappa_sq", 0.0),
            e("v_max", PI / 2.0),
            e("s", PI),
            e("s0", PI),
            e("l_c", PI * 2f64.sqrt()),
        ],
        ScenarioName::NonstationaryNongeodesic => {
            let r = p("nu0") / p("omega0");
            vec![
                e("avg_k", 0.5),
                e("c_igc", (3.0 * PI * PI - 4.0) / (4.0 * PI * PI)),
                e("v_bar", (1.0 / (4.0 * PI) + PI / 16.0) * r),
                e("v_max", FRAC_PI_4 * r),
                e("kappa_sq_t0", 4.0 * r * r),
                e("s0", PI),
            ]
        }
        ScenarioName::RotatingField => {
            let (w, n) = (p("omega"), p("nu"));
            vec![e("sup_k", w * w / (w * w + n * n))]
        }
    }
}
