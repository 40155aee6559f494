//! Geodesic distance, path length, geodesic efficiency, the curvature
//! coefficient, Fubini–Study and Wigner–Yanase metrics, and the
//! SU(2) → SO(3) correspondence.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, Vec3};
use crate::propagator::Trajectory;
use crate::qstate::{BlochVector, PureQubitState};
use crate::quad;
use num_complex::Complex64;

/// Below this value of `h² − (a·h)²` the state is treated as stationary.
pub const CURVATURE_DENOM_MIN: f64 = 1e-14;
/// Stencil step for metric derivatives.
pub const METRIC_STEP: f64 = 1e-5;

/// `s₀ = 2 arccos|⟨A|B⟩|`.
pub fn geodesic_distance(a: &PureQubitState, b: &PureQubitState) -> f64 {
    2.0 * a.overlap(b).norm().clamp(0.0, 1.0).acos()
}

/// `s = 2∫ΔE dt` by composite Simpson on the sample grid.
pub fn path_length(traj: &Trajectory) -> Result<f64> {
    let s = traj.samples();
    if s.iter().any(|x| !x.delta_e.is_finite()) {
        return Err(Error::MissingEnergyUncertainty);
    }
    if s.len() < 2 {
        return Ok(0.0);
    }
    let h = (traj.t_b() - traj.t_a()) / (s.len() - 1) as f64;
    let de: Vec<f64> = s.iter().map(|x| x.delta_e).collect();
    Ok(2.0 * quad::simpson_uniform(&de, h))
}

/// `η = s₀/s` clamped to `[0, 1]`.
pub fn geodesic_efficiency(traj: &Trajectory) -> Result<f64> {
    let s = path_length(traj)?;
    let samples = traj.samples();
    let s0 = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => geodesic_distance(&a.state, &b.state),
        _ => 0.0,
    };
    efficiency_from(s0, s)
}

pub(crate) fn efficiency_from(s0: f64, s: f64) -> Result<f64> {
    if s <= 0.0 {
        return if s0 < 1e-12 {
            Ok(1.0)
        } else {
            Err(Error::ZeroPathLength)
        };
    }
    Ok((s0 / s).clamp(0.0, 1.0))
}

/// Squared curvature of the projected trajectory at a point, given the
/// Bloch vector `a`, the field `h` and its time derivative `ḣ`.
///
/// With `D = h² − (a·h)²`:
/// `κ² = 4(a·h)²/D + [h²ḣ² − (h·ḣ)² − |(a·ḣ)h − (a·h)ḣ|²]/D³ + 4(a·h)(a·(h×ḣ))/D²`.
/// Tiny negative roundoff is clamped to zero.
pub fn curvature_coefficient(a: &BlochVector, h: Vec3, hdot: Vec3) -> Result<f64> {
    let a = a.vec();
    let ah = a.dot(h);
    let d = h.norm_sq() - ah * ah;
    if !(d > CURVATURE_DENOM_MIN) {
        return Err(Error::CurvatureUndefined);
    }
    let ahd = a.dot(hdot);
    let w = h * ahd - hdot * ah;
    let t1 = 4.0 * ah * ah / d;
    let t2 = (h.norm_sq() * hdot.norm_sq() - h.dot(hdot).powi(2) - w.norm_sq()) / (d * d * d);
    let t3 = 4.0 * ah * a.dot(h.cross(hdot)) / (d * d);
    let k = t1 + t2 + t3;
    if (-1e-12..0.0).contains(&k) {
        return Ok(0.0);
    }
    Ok(k)
}

/// `κ²(t)` at each sample; `None` where the state is (numerically) an
/// eigenstate of `H(t)`.
pub fn curvature_series(traj: &Trajectory) -> Result<Vec<Option<f64>>> {
    let cfg = traj.config();
    traj.samples()
        .iter()
        .map(|s| {
            let (_, h) = cfg.field_at(s.t)?;
            let hd = cfg.field_derivative_at(s.t)?;
            // Fields live in the computational basis.
            let bloch = match traj.basis() {
                Some(b) => s.state.apply(b)?.to_bloch(),
                None => s.bloch,
            };
            match curvature_coefficient(&bloch, h, hd) {
                Ok(k) => Ok(Some(k)),
                Err(Error::CurvatureUndefined) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Symmetric 2×2 real metric tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor2 {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
}

impl MetricTensor2 {
    pub fn scale(&self, s: f64) -> Self {
        Self {
            g11: self.g11 * s,
            g12: self.g12 * s,
            g22: self.g22 * s,
        }
    }

    pub fn max_abs_diff(&self, o: &MetricTensor2) -> f64 {
        (self.g11 - o.g11)
            .abs()
            .max((self.g12 - o.g12).abs())
            .max((self.g22 - o.g22).abs())
    }

    /// Positive semidefinite to `tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.g11 >= -tol && self.g22 >= -tol && self.g11 * self.g22 - self.g12 * self.g12 >= -tol
    }
}

type Amps = [Complex64; 2];

/// Fubini–Study and Wigner–Yanase metrics of a two-parameter pure-state
/// family at `xi`, differentiated with five-point stencils.
///
/// `g_FS = Re[⟨∂ψ|∂ψ⟩ − ⟨∂ψ|ψ⟩⟨ψ|∂ψ⟩]`. The Wigner–Yanase tensor is returned
/// in the state-expectation form `4·Re⟨ψ|∂ₐρ ∂_bρ|ψ⟩`, which equals `4·g_FS`.
/// See [`wy_metric_full_trace`] for the Hilbert–Schmidt trace form.
pub fn fs_and_wy_metrics<F>(family: F, xi: [f64; 2]) -> Result<(MetricTensor2, MetricTensor2)>
where
    F: Fn([f64; 2]) -> Amps,
{
    let (psi, d) = family_derivatives(&family, xi)?;
    let fs =
        |a: usize, b: usize| (inner(&d[a], &d[b]) - inner(&d[a], &psi) * inner(&psi, &d[b])).re;
    let g_fs = MetricTensor2 {
        g11: fs(0, 0),
        g12: 0.5 * (fs(0, 1) + fs(1, 0)),
        g22: fs(1, 1),
    };
    let drho = [rho_derivative(&psi, &d[0]), rho_derivative(&psi, &d[1])];
    let wy = |a: usize, b: usize| {
        let v = (drho[a] * drho[b]).apply(psi);
        4.0 * inner(&psi, &v).re
    };
    let g_wy = MetricTensor2 {
        g11: wy(0, 0),
        g12: 0.5 * (wy(0, 1) + wy(1, 0)),
        g22: wy(1, 1),
    };
    Ok((g_fs, g_wy))
}

/// `4·tr[∂ₐρ ∂_bρ]` with the full Hilbert–Schmidt trace. On pure states
/// this is `8·g_FS`, twice the state-expectation form.
pub fn wy_metric_full_trace<F>(family: F, xi: [f64; 2]) -> Result<MetricTensor2>
where
    F: Fn([f64; 2]) -> Amps,
{
    let (psi, d) = family_derivatives(&family, xi)?;
    let drho = [rho_derivative(&psi, &d[0]), rho_derivative(&psi, &d[1])];
    let g = |a: usize, b: usize| 4.0 * (drho[a] * drho[b]).trace().re;
    Ok(MetricTensor2 {
        g11: g(0, 0),
        g12: 0.5 * (g(0, 1) + g(1, 0)),
        g22: g(1, 1),
    })
}

fn inner(a: &Amps, b: &Amps) -> Complex64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

fn rho_derivative(psi: &Amps, d: &Amps) -> Matrix2 {
    let mut m = Matrix2::zero();
    for r in 0..2 {
        for c in 0..2 {
            m.m[r][c] = d[r] * psi[c].conj() + psi[r] * d[c].conj();
        }
    }
    m
}

fn family_derivatives<F>(family: &F, xi: [f64; 2]) -> Result<(Amps, [Amps; 2])>
where
    F: Fn([f64; 2]) -> Amps,
{
    let h = METRIC_STEP;
    let eval = |p: [f64; 2]| -> Result<Amps> {
        let v = family(p);
        let n2 = v[0].norm_sqr() + v[1].norm_sqr();
        if !((n2 - 1.0).abs() <= 1e-8) {
            return Err(Error::NotNormalized { norm: n2.sqrt() });
        }
        Ok(v)
    };
    let psi = eval(xi)?;
    let mut d = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (k, dk) in d.iter_mut().enumerate() {
        let at = |s: f64| {
            let mut p = xi;
            p[k] += s;
            eval(p)
        };
        let (m2, m1, p1, p2) = (at(-2.0 * h)?, at(-h)?, at(h)?, at(2.0 * h)?);
        for i in 0..2 {
            dk[i] = (m2[i] - p2[i] + (p1[i] - m1[i]) * 8.0) / (12.0 * h);
        }
    }
    Ok((psi, d))
}

/// Proper rotation matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix3 {
    pub m: [[f64; 3]; 3],
}

impl RotationMatrix3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Rotation by `angle` about the unit axis `n`.
    pub fn from_axis_angle(n: Vec3, angle: f64) -> Result<Self> {
        check_unit_axis(n)?;
        let mut m = [[0.0; 3]; 3];
        for (j, e) in [
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
        ]
        .into_iter()
        .enumerate()
        {
            let col = rodrigues(n, angle, e).to_array();
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        Ok(Self { m })
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn mul(&self, o: &RotationMatrix3) -> RotationMatrix3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        RotationMatrix3 { m: r }
    }

    pub fn transpose(&self) -> RotationMatrix3 {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.m[j][i];
            }
        }
        RotationMatrix3 { m: r }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn max_abs_diff(&self, o: &RotationMatrix3) -> f64 {
        (0..9)
            .map(|k| (self.m[k / 3][k % 3] - o.m[k / 3][k % 3]).abs())
            .fold(0.0, f64::max)
    }

    /// Max-entry distance of `RᵀR` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        self.transpose()
            .mul(self)
            .max_abs_diff(&RotationMatrix3::identity())
    }
}

fn check_unit_axis(n: Vec3) -> Result<()> {
    if !((n.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "rotation axis has norm {}",
            n.norm()
        )));
    }
    Ok(())
}

fn rodrigues(n: Vec3, angle: f64, a0: Vec3) -> Vec3 {
    let (s, c) = angle.sin_cos();
    let na = n.cross(a0);
    a0 + na * s + n.cross(na) * (1.0 - c)
}

/// `a = a₀ + sin θ (n×a₀) + (1 − cos θ) n×(n×a₀)`.
pub fn rodrigues_rotate(n: Vec3, angle: f64, a0: &BlochVector) -> Result<BlochVector> {
    check_unit_axis(n)?;
    BlochVector::from_vec3(rodrigues(n, angle, a0.vec()))
}

/// Rotation induced by a qubit unitary: `R_ij = ½ tr(σᵢ U σⱼ U†)`, after
/// normalizing `det U = 1`.
pub fn su2_to_so3(u: &Matrix2) -> Result<RotationMatrix3> {
    let dev = u.unitarity_defect();
    if !(dev <= 1e-10) {
        return Err(Error::NotUnitary { deviation: dev });
    }
    let u = u.scale(Complex64::new(1.0, 0.0) / u.det().sqrt());
    let ud = u.dagger();
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = 0.5 * (Matrix2::pauli(i) * u * Matrix2::pauli(j) * ud).trace().re;
        }
    }
    Ok(RotationMatrix3 { m })
}
