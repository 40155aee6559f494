//! Magnetic-field classes for `H(t) = h0(t)·I + h(t)·σ` (ℏ = 1).
//!
//! The parametric family is specified by two angle functions `α(t)`, `β(t)`;
//! its field is the unique traceless Hamiltonian whose parallel-transported
//! orbit passes through `cos α|0⟩ + e^{iβ} sin α|1⟩`.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, Vec3};
use crate::qstate::BlochVector;
use crate::quad;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Step for central differences of user callables.
pub const FD_STEP: f64 = 1e-6;
/// Absolute tolerance on sampled commutators `[H(tᵢ), H(tⱼ)]`.
pub const COMMUTATOR_TOL: f64 = 1e-10;
const COMMUTATOR_PAIRS: usize = 20;
const COMMUTATOR_SEED: u64 = 0x5eed_c0de;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type FieldFn = Arc<dyn Fn(f64) -> (f64, Vec3) + Send + Sync>;
type FrameFn = Arc<dyn Fn(f64) -> Matrix2 + Send + Sync>;

/// A real function of time with first and second derivatives.
#[derive(Clone)]
pub enum ScalarFn {
    Constant(f64),
    /// `c0 + c1·t`
    Linear {
        c0: f64,
        c1: f64,
    },
    /// `c0 + c1·t + c2·t²`
    Quadratic {
        c0: f64,
        c1: f64,
        c2: f64,
    },
    /// User callable. When `derivative` is absent, central differences at
    /// [`FD_STEP`] are used; an analytic derivative always wins.
    Custom {
        f: RealFn,
        derivative: Option<RealFn>,
    },
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Constant(c) => write!(f, "Constant({c})"),
            ScalarFn::Linear { c0, c1 } => write!(f, "Linear({c0} + {c1} t)"),
            ScalarFn::Quadratic { c0, c1, c2 } => write!(f, "Quadratic({c0} + {c1} t + {c2} t^2)"),
            ScalarFn::Custom { derivative, .. } => {
                write!(f, "Custom(analytic derivative: {})", derivative.is_some())
            }
        }
    }
}

impl ScalarFn {
    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFn::Custom {
            f: Arc::new(f),
            derivative: None,
        }
    }

    pub fn custom_with_derivative<F, D>(f: F, d: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFn::Custom {
            f: Arc::new(f),
            derivative: Some(Arc::new(d)),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Constant(c) => *c,
            ScalarFn::Linear { c0, c1 } => c0 + c1 * t,
            ScalarFn::Quadratic { c0, c1, c2 } => c0 + t * (c1 + c2 * t),
            ScalarFn::Custom { f, .. } => f(t),
        }
    }

    pub fn d1(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Constant(_) => 0.0,
            ScalarFn::Linear { c1, .. } => *c1,
            ScalarFn::Quadratic { c1, c2, .. } => c1 + 2.0 * c2 * t,
            ScalarFn::Custom { f, derivative } => match derivative {
                Some(d) => d(t),
                None => (f(t + FD_STEP) - f(t - FD_STEP)) / (2.0 * FD_STEP),
            },
        }
    }

    pub fn d2(&self, t: f64) -> f64 {
        match self {
            ScalarFn::Constant(_) | ScalarFn::Linear { .. } => 0.0,
            ScalarFn::Quadratic { c2, .. } => 2.0 * c2,
            ScalarFn::Custom { f, derivative } => match derivative {
                Some(d) => (d(t + FD_STEP) - d(t - FD_STEP)) / (2.0 * FD_STEP),
                None => {
                    // A wider step keeps the second difference above roundoff.
                    let h = 1e-4;
                    (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
                }
            },
        }
    }
}

/// Serializable presets for [`ScalarFn`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarPreset {
    Constant { value: f64 },
    Linear { c0: f64, c1: f64 },
    Quadratic { c0: f64, c1: f64, c2: f64 },
}

impl From<ScalarPreset> for ScalarFn {
    fn from(p: ScalarPreset) -> Self {
        match p {
            ScalarPreset::Constant { value } => ScalarFn::Constant(value),
            ScalarPreset::Linear { c0, c1 } => ScalarFn::Linear { c0, c1 },
            ScalarPreset::Quadratic { c0, c1, c2 } => ScalarFn::Quadratic { c0, c1, c2 },
        }
    }
}

impl TryFrom<&ScalarFn> for ScalarPreset {
    type Error = Error;
    fn try_from(f: &ScalarFn) -> Result<Self> {
        Ok(match f {
            ScalarFn::Constant(value) => ScalarPreset::Constant { value: *value },
            ScalarFn::Linear { c0, c1 } => ScalarPreset::Linear { c0: *c0, c1: *c1 },
            ScalarFn::Quadratic { c0, c1, c2 } => ScalarPreset::Quadratic {
                c0: *c0,
                c1: *c1,
                c2: *c2,
            },
            ScalarFn::Custom { .. } => {
                return Err(Error::InvalidArgument(
                    "custom functions are not serializable".into(),
                ))
            }
        })
    }
}

/// Field class selecting `h0(t)` and `h(t)`.
#[derive(Clone)]
pub enum FieldConfiguration {
    /// Time-independent `h0`, `h`.
    Constant { h0: f64, h: Vec3 },
    /// `h(t) = amplitude(t)·n̂` with fixed unit `n̂`; commuting at all times.
    ScaledDirection {
        amplitude: ScalarFn,
        direction: Vec3,
        h0: ScalarFn,
    },
    /// `h(t) = (ω/2)(cos νt, sin νt, 0)`, `h0 = 0`.
    RotatingXY { omega: f64, nu: f64 },
    /// Traceless field generated by the angle functions `α(t)`, `β(t)`.
    Parametric { alpha: ScalarFn, beta: ScalarFn },
    /// User callable returning `(h0, h)`; must be safe for concurrent calls.
    Custom(FieldFn),
}

impl fmt::Debug for FieldConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfiguration::Constant { h0, h } => f
                .debug_struct("Constant")
                .field("h0", h0)
                .field("h", h)
                .finish(),
            FieldConfiguration::ScaledDirection {
                amplitude,
                direction,
                h0,
            } => f
                .debug_struct("ScaledDirection")
                .field("amplitude", amplitude)
                .field("direction", direction)
                .field("h0", h0)
                .finish(),
            FieldConfiguration::RotatingXY { omega, nu } => f
                .debug_struct("RotatingXY")
                .field("omega", omega)
                .field("nu", nu)
                .finish(),
            FieldConfiguration::Parametric { alpha, beta } => f
                .debug_struct("Parametric")
                .field("alpha", alpha)
                .field("beta", beta)
                .finish(),
            FieldConfiguration::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// JSON form of [`FieldConfiguration`] (custom callables excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant {
        #[serde(default)]
        h0: f64,
        h: [f64; 3],
    },
    ScaledDirection {
        amplitude: ScalarPreset,
        direction: [f64; 3],
        #[serde(default = "zero_preset")]
        h0: ScalarPreset,
    },
    RotatingXy {
        omega: f64,
        nu: f64,
    },
    Parametric {
        alpha: ScalarPreset,
        beta: ScalarPreset,
    },
}

fn zero_preset() -> ScalarPreset {
    ScalarPreset::Constant { value: 0.0 }
}

impl TryFrom<FieldSpec> for FieldConfiguration {
    type Error = Error;
    fn try_from(s: FieldSpec) -> Result<Self> {
        let cfg = match s {
            FieldSpec::Constant { h0, h } => FieldConfiguration::Constant {
                h0,
                h: Vec3::from_array(h),
            },
            FieldSpec::ScaledDirection {
                amplitude,
                direction,
                h0,
            } => FieldConfiguration::scaled_direction(
                amplitude.into(),
                Vec3::from_array(direction),
                h0.into(),
            )?,
            FieldSpec::RotatingXy { omega, nu } => FieldConfiguration::RotatingXY { omega, nu },
            FieldSpec::Parametric { alpha, beta } => FieldConfiguration::Parametric {
                alpha: alpha.into(),
                beta: beta.into(),
            },
        };
        cfg.validate_parameters()?;
        Ok(cfg)
    }
}

impl TryFrom<&FieldConfiguration> for FieldSpec {
    type Error = Error;
    fn try_from(c: &FieldConfiguration) -> Result<Self> {
        Ok(match c {
            FieldConfiguration::Constant { h0, h } => FieldSpec::Constant {
                h0: *h0,
                h: h.to_array(),
            },
            FieldConfiguration::ScaledDirection {
                amplitude,
                direction,
                h0,
            } => FieldSpec::ScaledDirection {
                amplitude: amplitude.try_into()?,
                direction: direction.to_array(),
                h0: h0.try_into()?,
            },
            FieldConfiguration::RotatingXY { omega, nu } => FieldSpec::RotatingXy {
                omega: *omega,
                nu: *nu,
            },
            FieldConfiguration::Parametric { alpha, beta } => FieldSpec::Parametric {
                alpha: alpha.try_into()?,
                beta: beta.try_into()?,
            },
            FieldConfiguration::Custom(_) => {
                return Err(Error::InvalidArgument(
                    "custom fields are not serializable".into(),
                ))
            }
        })
    }
}

/// A 2×2 matrix that equals its conjugate transpose to 1e-12 (relative to
/// its largest entry).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2(Matrix2);

impl HermitianMatrix2 {
    pub const TOL: f64 = 1e-12;

    pub fn new(m: Matrix2) -> Result<Self> {
        Self::with_tolerance(m, Self::TOL)
    }

    /// Validates at `tol` (scaled by the largest entry) and symmetrizes.
    pub fn with_tolerance(m: Matrix2, tol: f64) -> Result<Self> {
        let dev = m.hermiticity_defect();
        if !dev.is_finite() || dev > tol * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(Self((m + m.dagger()).scale_real(0.5)))
    }

    pub fn from_field(h0: f64, h: Vec3) -> Self {
        Self(Matrix2::from_field(h0, h))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    /// `(h0, h)` with `H = h0·I + h·σ`.
    pub fn field(&self) -> (f64, Vec3) {
        self.0.field_components()
    }
}

/// Description of a frame unitary `U_RF(t)`.
#[derive(Clone)]
pub enum FrameGenerator {
    Identity,
    /// `U_RF(t) = exp(−i G t)`.
    Exponential(HermitianMatrix2),
    /// Arbitrary unitary-valued callable, differentiated numerically.
    Custom(FrameFn),
}

impl FrameGenerator {
    /// The frame `e^{−iνtσz/2}` that co-rotates with an xy-rotating field.
    pub fn z_rotation(nu: f64) -> Self {
        FrameGenerator::Exponential(HermitianMatrix2::from_field(
            0.0,
            Vec3::new(0.0, 0.0, 0.5 * nu),
        ))
    }

    pub fn unitary(&self, t: f64) -> Matrix2 {
        match self {
            FrameGenerator::Identity => Matrix2::identity(),
            FrameGenerator::Exponential(g) => {
                let (g0, gv) = g.field();
                Matrix2::evolution(g0, gv, t)
            }
            FrameGenerator::Custom(f) => f(t),
        }
    }
}

impl FieldConfiguration {
    /// Scaled-direction field; `direction` is normalized, zero is rejected.
    pub fn scaled_direction(amplitude: ScalarFn, direction: Vec3, h0: ScalarFn) -> Result<Self> {
        let direction = direction.normalized().ok_or_else(|| {
            Error::InvalidArgument("direction must be a nonzero finite vector".into())
        })?;
        Ok(FieldConfiguration::ScaledDirection {
            amplitude,
            direction,
            h0,
        })
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> (f64, Vec3) + Send + Sync + 'static,
    {
        FieldConfiguration::Custom(Arc::new(f))
    }

    /// Parses the JSON config form.
    pub fn from_json(text: &str) -> std::result::Result<Self, ConfigError> {
        let spec: FieldSpec = serde_json::from_str(text).map_err(ConfigError::Parse)?;
        FieldConfiguration::try_from(spec).map_err(ConfigError::Invalid)
    }

    pub fn to_json(&self) -> Result<String> {
        let spec = FieldSpec::try_from(self)?;
        serde_json::to_string(&spec).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    fn validate_parameters(&self) -> Result<()> {
        let ok = match self {
            FieldConfiguration::Constant { h0, h } => h0.is_finite() && h.is_finite(),
            FieldConfiguration::RotatingXY { omega, nu } => omega.is_finite() && nu.is_finite(),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "field parameters must be finite".into(),
            ))
        }
    }

    /// Short snake-case name of the field class.
    pub fn kind_name(&self) -> &'static str {
        match self {
            FieldConfiguration::Constant { .. } => "constant",
            FieldConfiguration::ScaledDirection { .. } => "scaled_direction",
            FieldConfiguration::RotatingXY { .. } => "rotating_xy",
            FieldConfiguration::Parametric { .. } => "parametric",
            FieldConfiguration::Custom(_) => "custom",
        }
    }

    /// `(h0(t), h(t))`.
    pub fn field_at(&self, t: f64) -> Result<(f64, Vec3)> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("time {t} is not finite")));
        }
        let (h0, h) = match self {
            FieldConfiguration::Constant { h0, h } => (*h0, *h),
            FieldConfiguration::ScaledDirection {
                amplitude,
                direction,
                h0,
            } => (h0.value(t), *direction * amplitude.value(t)),
            FieldConfiguration::RotatingXY { omega, nu } => {
                let (s, c) = (nu * t).sin_cos();
                (0.0, Vec3::new(0.5 * omega * c, 0.5 * omega * s, 0.0))
            }
            FieldConfiguration::Parametric { alpha, beta } => (
                0.0,
                parametric_field(alpha.value(t), alpha.d1(t), beta.value(t), beta.d1(t)),
            ),
            FieldConfiguration::Custom(f) => f(t),
        };
        // The norm is checked too: finite components can still overflow |h|.
        if !(h0.is_finite() && h.norm().is_finite()) {
            return Err(Error::NonFiniteField { t });
        }
        Ok((h0, h))
    }

    /// `dh/dt`: analytic for the built-in classes, a five-point stencil for
    /// custom callables.
    pub fn field_derivative_at(&self, t: f64) -> Result<Vec3> {
        let d = match self {
            FieldConfiguration::Constant { .. } => Vec3::ZERO,
            FieldConfiguration::ScaledDirection {
                amplitude,
                direction,
                ..
            } => *direction * amplitude.d1(t),
            FieldConfiguration::RotatingXY { omega, nu } => {
                let (s, c) = (nu * t).sin_cos();
                Vec3::new(-0.5 * omega * nu * s, 0.5 * omega * nu * c, 0.0)
            }
            FieldConfiguration::Parametric { alpha, beta } => parametric_field_derivative(
                [alpha.value(t), alpha.d1(t), alpha.d2(t)],
                [beta.value(t), beta.d1(t), beta.d2(t)],
            ),
            FieldConfiguration::Custom(_) => {
                let h = 1e-3;
                let f = |s: f64| self.field_at(s).map(|(_, v)| v);
                (f(t - 2.0 * h)? - f(t + 2.0 * h)? + (f(t + h)? - f(t - h)?) * 8.0)
                    * (1.0 / (12.0 * h))
            }
        };
        if !d.is_finite() {
            return Err(Error::NonFiniteField { t });
        }
        Ok(d)
    }

    pub fn matrix_at(&self, t: f64) -> Result<HermitianMatrix2> {
        let (h0, h) = self.field_at(t)?;
        Ok(HermitianMatrix2::from_field(h0, h))
    }

    /// True if the field direction is fixed by construction.
    pub fn is_stationary(&self) -> bool {
        matches!(self, FieldConfiguration::Constant { .. })
    }

    /// Samples 20 seeded random pairs in `[t0, t1]` and checks that the
    /// Hamiltonians commute to [`COMMUTATOR_TOL`].
    pub fn check_commuting(&self, t0: f64, t1: f64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(COMMUTATOR_SEED);
        let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        let mut worst = 0.0f64;
        for _ in 0..COMMUTATOR_PAIRS {
            let (ti, tj) = if hi > lo {
                (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
            } else {
                (lo, lo)
            };
            let hi_m = self.matrix_at(ti)?;
            let hj_m = self.matrix_at(tj)?;
            worst = worst.max(hi_m.matrix().commutator(hj_m.matrix()).max_abs());
        }
        if worst > COMMUTATOR_TOL {
            return Err(Error::NonCommuting { residual: worst });
        }
        Ok(())
    }
}

/// Error from [`FieldConfiguration::from_json`].
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// serde_json messages end with "at line L column C".
    #[error("config parse error: {0}")]
    Parse(serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(Error),
}

/// Field of the parametric family at given `α, α̇, β, β̇`.
pub fn parametric_field(alpha: f64, alpha_dot: f64, beta: f64, beta_dot: f64) -> Vec3 {
    let (s2, c2) = (2.0 * alpha).sin_cos();
    let (sb, cb) = beta.sin_cos();
    let p = 0.5 * beta_dot * c2 * s2;
    Vec3::new(
        -p * cb - alpha_dot * sb,
        -p * sb + alpha_dot * cb,
        0.5 * beta_dot * s2 * s2,
    )
}

/// Time derivative of [`parametric_field`] given `[α, α̇, α̈]`, `[β, β̇, β̈]`.
pub fn parametric_field_derivative(a: [f64; 3], b: [f64; 3]) -> Vec3 {
    let [al, ad, add] = a;
    let [be, bd, bdd] = b;
    let p = 0.5 * (4.0 * al).sin();
    let c4 = (4.0 * al).cos();
    let s2 = (2.0 * al).sin();
    let (sb, cb) = be.sin_cos();
    Vec3::new(
        -0.5 * bdd * p * cb - bd * ad * c4 * cb + 0.5 * bd * bd * p * sb - add * sb - ad * bd * cb,
        -0.5 * bdd * p * sb - bd * ad * c4 * sb - 0.5 * bd * bd * p * cb + add * cb - ad * bd * sb,
        0.5 * bdd * s2 * s2 + 2.0 * ad * bd * p,
    )
}

/// Reference state `cos α|0⟩ + e^{iβ} sin α|1⟩` of the parametric family.
pub fn parametric_reference_amplitudes(alpha: f64, beta: f64) -> [Complex64; 2] {
    [
        Complex64::new(alpha.cos(), 0.0),
        Complex64::from_polar(alpha.sin(), beta),
    ]
}

/// Geometric phase `φ(t) = ∫₀ᵗ β̇ sin²α dt′` that makes the parametric
/// reference state parallel-transported (adaptive quadrature, tol 1e-10).
pub fn uzdin_phase(alpha: &ScalarFn, beta: &ScalarFn, t: f64) -> Result<f64> {
    uzdin_phase_between(alpha, beta, 0.0, t)
}

/// `∫_{t0}^{t1} β̇ sin²α dt`.
pub fn uzdin_phase_between(alpha: &ScalarFn, beta: &ScalarFn, t0: f64, t1: f64) -> Result<f64> {
    match beta {
        ScalarFn::Constant(_) => return Ok(0.0),
        ScalarFn::Linear { c1, .. } if *c1 == 0.0 => return Ok(0.0),
        _ => {}
    }
    quad::adaptive_simpson(|s| beta.d1(s) * alpha.value(s).sin().powi(2), t0, t1, 1e-10)
}

/// `H_RF = U† H U − i U† dU/dt` for the frame `U = U_RF(t)`.
pub fn rotating_frame_transform(
    config: &FieldConfiguration,
    frame: &FrameGenerator,
    t: f64,
) -> Result<HermitianMatrix2> {
    let h = *config.matrix_at(t)?.matrix();
    match frame {
        FrameGenerator::Identity => HermitianMatrix2::new(h),
        FrameGenerator::Exponential(g) => {
            // U̇ = −iGU and [G, U] = 0, so −iU†U̇ = −G.
            let u = frame.unitary(t);
            HermitianMatrix2::with_tolerance(u.dagger() * h * u - *g.matrix(), 1e-9)
        }
        FrameGenerator::Custom(f) => {
            let u = f(t);
            let dev = u.unitarity_defect();
            if !(dev <= 1e-9) {
                return Err(Error::NotUnitary { deviation: dev });
            }
            let du = (f(t + FD_STEP) - f(t - FD_STEP)).scale_real(0.5 / FD_STEP);
            let ud = u.dagger();
            let m = ud * h * u - (ud * du).scale(Complex64::new(0.0, 1.0));
            HermitianMatrix2::with_tolerance(m, 1e-9)
        }
    }
}

/// `ΔE = √(h² − (a·h)²)`.
pub fn energy_uncertainty(a: &BlochVector, h: Vec3) -> f64 {
    let ah = a.vec().dot(h);
    (h.norm_sq() - ah * ah).max(0.0).sqrt()
}

/// `ΔE² = α̇² + β̇² sin²(2α)/4` for the parametric family.
pub fn parametric_energy_uncertainty(alpha: &ScalarFn, beta: &ScalarFn, t: f64) -> f64 {
    let ad = alpha.d1(t);
    let bd = beta.d1(t);
    (ad * ad + 0.25 * bd * bd * (2.0 * alpha.value(t)).sin().powi(2)).sqrt()
}
