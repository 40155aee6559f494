//! Pure qubit states, Bloch vectors and spherical angles.
//!
//! The azimuth is extracted with the two-argument arctangent of each
//! amplitude so that every quadrant is handled. At the poles the azimuth is
//! undefined and is reported as 0.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, Vec3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Accepted deviation of `‖ψ‖²` from one before renormalizing.
pub const RENORMALIZE_BAND: f64 = 1e-9;
/// Below this modulus an amplitude is treated as zero for the azimuth.
pub const POLE_EPS: f64 = 1e-12;

/// `c0|0⟩ + c1|1⟩` with unit norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureQubitState {
    c0: Complex64,
    c1: Complex64,
}

/// Polar angle θ ∈ [0, π] and (possibly unwrapped) azimuth φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAngles {
    pub theta: f64,
    pub phi: f64,
}

/// Unit Bloch vector `a` with `ρ = (I + a·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vec3);

impl PureQubitState {
    /// Builds a state, renormalizing inputs within [`RENORMALIZE_BAND`] of
    /// unit norm and rejecting anything further away.
    pub fn new(c0: Complex64, c1: Complex64) -> Result<Self> {
        let n2 = c0.norm_sqr() + c1.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > RENORMALIZE_BAND {
            return Err(Error::NotNormalized { norm: n2.sqrt() });
        }
        let s = 1.0 / n2.sqrt();
        Ok(Self {
            c0: c0 * s,
            c1: c1 * s,
        })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalize(c0: Complex64, c1: Complex64) -> Result<Self> {
        let n = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self {
            c0: c0 / n,
            c1: c1 / n,
        })
    }

    pub fn from_amplitudes(v: [Complex64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }

    pub fn zero() -> Self {
        Self {
            c0: Complex64::new(1.0, 0.0),
            c1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            c0: Complex64::new(0.0, 0.0),
            c1: Complex64::new(1.0, 0.0),
        }
    }

    /// `(|0⟩ + |1⟩)/√2`.
    pub fn plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            c0: Complex64::new(s, 0.0),
            c1: Complex64::new(s, 0.0),
        }
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        [self.c0, self.c1]
    }

    pub fn norm(&self) -> f64 {
        (self.c0.norm_sqr() + self.c1.norm_sqr()).sqrt()
    }

    /// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
    pub fn from_angles(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta = {theta} outside [0, pi]"
            )));
        }
        let half = 0.5 * theta;
        Ok(Self {
            c0: Complex64::new(half.cos(), 0.0),
            c1: Complex64::from_polar(half.sin(), phi),
        })
    }

    /// θ = 2·atan2(|c1|, |c0|), φ = arg c1 − arg c0 in (−π, π], φ = 0 at the poles.
    pub fn to_angles(&self) -> SphericalAngles {
        let (r0, r1) = (self.c0.norm(), self.c1.norm());
        let theta = 2.0 * r1.atan2(r0);
        let phi = if r0.min(r1) < POLE_EPS {
            0.0
        } else {
            wrap_pi(self.c1.arg() - self.c0.arg())
        };
        SphericalAngles { theta, phi }
    }

    pub fn to_bloch(&self) -> BlochVector {
        let p = self.c0.conj() * self.c1;
        BlochVector(Vec3::new(
            2.0 * p.re,
            2.0 * p.im,
            self.c0.norm_sqr() - self.c1.norm_sqr(),
        ))
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureQubitState) -> Complex64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    /// True iff `1 − |⟨a|b⟩|² ≤ tol`.
    pub fn phase_equivalent(&self, other: &PureQubitState, tol: f64) -> bool {
        1.0 - self.overlap(other).norm_sqr() <= tol
    }

    /// Applies a unitary, renormalizing away roundoff.
    pub fn apply(&self, u: &Matrix2) -> Result<Self> {
        Self::from_amplitudes(u.apply(self.amplitudes()))
    }

    /// Global phase multiplication.
    pub fn with_phase(&self, phase: f64) -> Self {
        let p = Complex64::from_polar(1.0, phase);
        Self {
            c0: self.c0 * p,
            c1: self.c1 * p,
        }
    }

    /// Components in the orthonormal basis given by the columns of `basis`
    /// (`ψ' = B†ψ`).
    pub fn in_basis(&self, basis: &Matrix2) -> Result<Self> {
        if basis.unitarity_defect() > 1e-9 {
            return Err(Error::NotUnitary {
                deviation: basis.unitarity_defect(),
            });
        }
        Self::from_amplitudes(basis.dagger().apply(self.amplitudes()))
    }
}

impl BlochVector {
    /// Accepts vectors within 1e-9 of unit length and rescales them to unit length.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vec3(Vec3::new(x, y, z))
    }

    pub fn from_vec3(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > RENORMALIZE_BAND {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self(v * (1.0 / n)))
    }

    /// `(sin θ cos φ, sin θ sin φ, cos θ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self(Vec3::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ))
    }

    pub fn vec(&self) -> Vec3 {
        self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn dot(&self, o: &BlochVector) -> f64 {
        self.0.dot(o.0)
    }

    /// A state with this Bloch vector (zero azimuth-phase convention on `c0`).
    pub fn to_state(&self) -> PureQubitState {
        let v = self.0;
        let theta = v.z.clamp(-1.0, 1.0).acos();
        let phi = if v.x.hypot(v.y) < POLE_EPS {
            0.0
        } else {
            v.y.atan2(v.x)
        };
        PureQubitState::from_angles(theta, phi).expect("theta from acos lies in [0, pi]")
    }
}

impl From<BlochVector> for Vec3 {
    fn from(b: BlochVector) -> Vec3 {
        b.0
    }
}

/// Reduces an angle to (−π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x % two_pi;
    if y <= -PI {
        y += two_pi;
    } else if y > PI {
        y -= two_pi;
    }
    y
}
