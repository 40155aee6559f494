//! Small fixed-size linear algebra: real 3-vectors and complex 2×2 matrices.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real 3-vector (Bloch vectors, magnetic fields, rotation axes).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector along `self`, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 1e-300 && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn max_abs_diff(self, o: Vec3) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Complex 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m: [[Complex64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self {
            m: [[m00, m01], [m10, m11]],
        }
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn sigma_x() -> Self {
        Self::new(ZERO, ONE, ONE, ZERO)
    }

    pub const fn sigma_y() -> Self {
        Self::new(ZERO, Complex64::new(0.0, -1.0), I, ZERO)
    }

    pub const fn sigma_z() -> Self {
        Self::new(ONE, ZERO, ZERO, Complex64::new(-1.0, 0.0))
    }

    /// Pauli matrix by index 0 → σx, 1 → σy, 2 → σz.
    pub fn pauli(k: usize) -> Self {
        match k {
            0 => Self::sigma_x(),
            1 => Self::sigma_y(),
            2 => Self::sigma_z(),
            _ => panic!("Pauli index out of range: {k}"),
        }
    }

    /// `h0·I + h·σ`.
    pub fn from_field(h0: f64, h: Vec3) -> Self {
        Self::new(
            Complex64::new(h0 + h.z, 0.0),
            Complex64::new(h.x, -h.y),
            Complex64::new(h.x, h.y),
            Complex64::new(h0 - h.z, 0.0),
        )
    }

    /// Inverse of [`Matrix2::from_field`] on the Hermitian part: `(h0, h)`.
    pub fn field_components(&self) -> (f64, Vec3) {
        let m = &self.m;
        let h0 = 0.5 * (m[0][0].re + m[1][1].re);
        let hz = 0.5 * (m[0][0].re - m[1][1].re);
        let hx = 0.5 * (m[0][1].re + m[1][0].re);
        let hy = 0.5 * (m[1][0].im - m[0][1].im);
        (h0, Vec3::new(hx, hy, hz))
    }

    /// Closed-form `exp(−i (h0·I + h·σ) τ)`.
    ///
    /// Uses `sin(|h|τ)/|h|` in sinc form so that a vanishing field is exact.
    pub fn evolution(h0: f64, h: Vec3, tau: f64) -> Self {
        let hn = h.norm();
        let theta = hn * tau;
        let c = theta.cos();
        // sin(hτ)/h, expanded near zero
        let s_over_h = if theta.abs() < 1e-4 {
            tau * (1.0 - theta * theta / 6.0 + theta.powi(4) / 120.0)
        } else {
            theta.sin() / hn
        };
        let phase = Complex64::from_polar(1.0, -h0 * tau);
        let (nx, ny, nz) = (h.x * s_over_h, h.y * s_over_h, h.z * s_over_h);
        Self::new(
            Complex64::new(c, -nz),
            Complex64::new(-ny, -nx),
            Complex64::new(ny, -nx),
            Complex64::new(c, nz),
        )
        .scale(phase)
    }

    pub fn dagger(&self) -> Self {
        let m = &self.m;
        Self::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry distance from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }

    /// Max-entry distance of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self.dagger() * *self - Matrix2::identity()).max_abs()
    }

    pub fn commutator(&self, o: &Matrix2) -> Matrix2 {
        *self * *o - *o * *self
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, o: Matrix2) -> Matrix2 {
        let a = &self.m;
        let b = &o.m;
        let mut r = [[ZERO; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Matrix2 { m: r }
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, o: Matrix2) -> Matrix2 {
        let mut r = self.m;
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] += o.m[i][j];
            }
        }
        Matrix2 { m: r }
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, o: Matrix2) -> Matrix2 {
        self + o.scale_real(-1.0)
    }
}
