//! Krylov basis by Lanczos recursion, spread complexity, and the qubit
//! closed forms of the spread complexity.

use crate::error::{Error, Result};
use crate::linalg::{Matrix2, Vec3};
use crate::qstate::{BlochVector, PureQubitState};
use crate::quad;
use num_complex::Complex64;

/// Lanczos stops once the residual norm drops below this.
pub const LANCZOS_BREAKDOWN: f64 = 1e-10;
/// Probability outside the Krylov subspace tolerated by [`spread_complexity`].
pub const LEAKAGE_TOL: f64 = 1e-6;
/// Minimum node count for averaging a callable `K(t)`.
pub const AVERAGE_NODES: usize = 4097;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {dim}x{dim} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_matrix2(m: &Matrix2) -> Self {
        Self {
            dim: 2,
            data: m.m.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| {
                self.data[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Max-entry distance from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                d = d.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        d
    }
}

/// Orthonormal Krylov vectors with the Lanczos coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct KrylovBasis {
    pub vectors: Vec<Vec<Complex64>>,
    /// `aₙ = ⟨Kₙ|H|Kₙ⟩`.
    pub a_coeffs: Vec<f64>,
    /// `b₀ = 0`, `bₙ = ⟨Kₙ|H|K_{n−1}⟩ > 0` for `1 ≤ n < dimension`.
    pub b_coeffs: Vec<f64>,
    /// Norm of the last residual, below [`LANCZOS_BREAKDOWN`] or the
    /// leftover when the full space is exhausted.
    pub residual: f64,
}

impl KrylovBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// `bₙ`, zero past the effective dimension.
    pub fn b(&self, n: usize) -> f64 {
        self.b_coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// `|⟨Kₙ|ψ⟩|²` for every basis vector.
    pub fn probabilities(&self, psi: &[Complex64]) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|k| inner(k, psi).norm_sqr())
            .collect()
    }
}

/// Cost weights `cₙ` of the spread complexity.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SpreadWeights {
    /// `cₙ = n`.
    #[default]
    Linear,
    /// Explicit nonnegative, nondecreasing weights.
    Custom(Vec<f64>),
}

impl SpreadWeights {
    pub fn custom(c: Vec<f64>) -> Result<Self> {
        if c.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || c.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidArgument(
                "weights must be nonnegative and nondecreasing".into(),
            ));
        }
        Ok(SpreadWeights::Custom(c))
    }

    pub fn weight(&self, n: usize) -> Result<f64> {
        match self {
            SpreadWeights::Linear => Ok(n as f64),
            SpreadWeights::Custom(c) => c
                .get(n)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("no weight for Krylov index {n}"))),
        }
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Lanczos recursion `|A_{n+1}⟩ = (H − aₙ)|Kₙ⟩ − bₙ|K_{n−1}⟩`,
/// `b_{n+1} = ‖A_{n+1}‖`, with full reorthogonalization at every step.
pub fn lanczos(h: &CMatrix, psi0: &[Complex64]) -> Result<KrylovBasis> {
    let d = h.dim();
    if psi0.len() != d {
        return Err(Error::InvalidArgument(
            "initial vector dimension mismatch".into(),
        ));
    }
    let scale = h.data.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = h.hermiticity_defect();
    if !(dev <= 1e-10 * scale) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let n0 = norm(psi0);
    if !((n0 - 1.0).abs() <= 1e-9) {
        return Err(Error::NotNormalized { norm: n0 });
    }
    let mut vectors: Vec<Vec<Complex64>> = vec![psi0.iter().map(|z| z / n0).collect()];
    let mut a = Vec::new();
    let mut b = vec![0.0];
    let residual;
    loop {
        let n = vectors.len() - 1;
        let k = &vectors[n];
        let w = h.mul_vec(k);
        let an = inner(k, &w).re;
        a.push(an);
        let mut r: Vec<Complex64> = w.iter().zip(k).map(|(x, y)| x - y * an).collect();
        if n > 0 {
            let bn = b[n];
            for (x, y) in r.iter_mut().zip(&vectors[n - 1]) {
                *x -= y * bn;
            }
        }
        // Two Gram–Schmidt passes against every previous vector.
        for _ in 0..2 {
            for q in &vectors {
                let c = inner(q, &r);
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= y * c;
                }
            }
        }
        let bn1 = norm(&r);
        if bn1 < LANCZOS_BREAKDOWN || vectors.len() == d {
            residual = bn1;
            break;
        }
        b.push(bn1);
        vectors.push(r.iter().map(|z| z / bn1).collect());
    }
    Ok(KrylovBasis {
        vectors,
        a_coeffs: a,
        b_coeffs: b,
        residual,
    })
}

/// Spread cost `C_B = Σ cₙ |⟨Bₙ|ψ⟩|²` in an arbitrary ordered orthonormal
/// basis. The Krylov basis minimizes this near `t = 0`.
pub fn basis_cost(
    psi: &[Complex64],
    basis: &[Vec<Complex64>],
    weights: &SpreadWeights,
) -> Result<f64> {
    for (i, u) in basis.iter().enumerate() {
        if u.len() != psi.len() {
            return Err(Error::InvalidArgument(
                "basis vector dimension mismatch".into(),
            ));
        }
        for (j, v) in basis.iter().enumerate().take(i + 1) {
            let want = if i == j { 1.0 } else { 0.0 };
            if (inner(u, v) - Complex64::new(want, 0.0)).norm() > 1e-10 {
                return Err(Error::InvalidArgument("basis is not orthonormal".into()));
            }
        }
    }
    let mut c = 0.0;
    for (n, b) in basis.iter().enumerate() {
        c += weights.weight(n)? * inner(b, psi).norm_sqr();
    }
    Ok(c)
}

/// `K = Σ cₙ |⟨Kₙ|ψ_t⟩|²`; fails when more than [`LEAKAGE_TOL`] of the
/// probability lies outside the Krylov subspace.
pub fn spread_complexity(
    psi_t: &[Complex64],
    basis: &KrylovBasis,
    weights: &SpreadWeights,
) -> Result<f64> {
    let p = basis.probabilities(psi_t);
    let total: f64 = p.iter().sum();
    let nrm = norm(psi_t).powi(2);
    let leakage = (nrm - total).abs().max((nrm - 1.0).abs());
    if !(leakage <= LEAKAGE_TOL) {
        return Err(Error::KrylovLeakage { leakage });
    }
    let mut k = 0.0;
    for (n, pn) in p.iter().enumerate() {
        k += weights.weight(n)? * pn;
    }
    Ok(k)
}

/// Krylov basis of a qubit Hamiltonian and initial state.
pub fn qubit_basis(h: &Matrix2, psi0: &PureQubitState) -> Result<KrylovBasis> {
    lanczos(&CMatrix::from_matrix2(h), &psi0.amplitudes())
}

/// `K(t) = sin²(ht)(1 − (n·a₀)²)` for a constant field `h·n`.
pub fn krylov_qubit_stationary(a0: &BlochVector, n: Vec3, h: f64, t: f64) -> f64 {
    let na = n.dot(a0.vec());
    (h * t).sin().powi(2) * (1.0 - na * na).max(0.0)
}

/// `K = (1 − a₀·a_t)/2`.
pub fn krylov_from_bloch(a0: &BlochVector, at: &BlochVector) -> f64 {
    (0.5 * (1.0 - a0.dot(at))).clamp(0.0, 1.0)
}

/// `K = ω²/Ω² · sin²(Ωt/2)` with `Ω = √(ω² + ν²)`.
pub fn rotating_field_krylov(omega: f64, nu: f64, t: f64) -> f64 {
    let big2 = omega * omega + nu * nu;
    if big2 == 0.0 {
        return 0.0;
    }
    omega * omega / big2 * (0.5 * big2.sqrt() * t).sin().powi(2)
}

/// What to average.
pub enum KrylovSource<'a> {
    /// Uniform samples covering `[t_i, t_f]` end to end.
    Sampled(&'a [f64]),
    /// A callable, evaluated on [`AVERAGE_NODES`] nodes.
    Function(&'a dyn Fn(f64) -> f64),
    /// Constant field `h·n` acting on `a₀` from `t_i`.
    Stationary { a0: BlochVector, n: Vec3, h: f64 },
}

/// Time average of `K(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedKrylov {
    /// Composite Simpson estimate.
    pub quadrature: f64,
    /// `(1 − (n·a₀)²)(1/2 − sin(2hT)/(4hT))` when the source is stationary.
    pub closed_form: Option<f64>,
}

impl AveragedKrylov {
    /// The closed form when available, otherwise the quadrature.
    pub fn value(&self) -> f64 {
        self.closed_form.unwrap_or(self.quadrature)
    }
}

/// `⟨K⟩ = (t_f − t_i)⁻¹ ∫ K dt`. Stationary sources are cross-checked
/// against the closed form to 1e-9.
pub fn time_averaged_krylov(
    source: &KrylovSource<'_>,
    t_i: f64,
    t_f: f64,
) -> Result<AveragedKrylov> {
    if !(t_f > t_i) {
        return Err(Error::InvalidArgument("t_f must exceed t_i".into()));
    }
    let span = t_f - t_i;
    match source {
        KrylovSource::Sampled(y) => {
            if y.len() < 2 {
                return Err(Error::InvalidArgument("need at least 2 samples".into()));
            }
            let h = span / (y.len() - 1) as f64;
            Ok(AveragedKrylov {
                quadrature: quad::simpson_uniform(y, h) / span,
                closed_form: None,
            })
        }
        KrylovSource::Function(f) => Ok(AveragedKrylov {
            quadrature: quad::simpson_fn(f, t_i, t_f, AVERAGE_NODES) / span,
            closed_form: None,
        }),
        KrylovSource::Stationary { a0, n, h } => {
            let q = quad::simpson_fn(
                |t| krylov_qubit_stationary(a0, *n, *h, t - t_i),
                t_i,
                t_f,
                AVERAGE_NODES,
            ) / span;
            let na = n.dot(a0.vec());
            let amp = (1.0 - na * na).max(0.0);
            let x = 2.0 * h * span;
            let mean_sin2 = if x.abs() < 1e-8 {
                0.0
            } else {
                0.5 - x.sin() / (2.0 * x)
            };
            let closed = amp * mean_sin2;
            if (q - closed).abs() > 1e-9 {
                return Err(Error::Inconsistent(format!(
                    "averaged K: quadrature {q} vs closed form {closed}"
                )));
            }
            Ok(AveragedKrylov {
                quadrature: q,
                closed_form: Some(closed),
            })
        }
    }
}
