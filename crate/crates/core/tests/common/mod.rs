//! Test-side oracles written without the library: dense 2×2 and 3×3
//! exponentials by Taylor series, composite Simpson, and a few closed forms.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];
pub type M3 = [[f64; 3]; 3];

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

/// `exp(A)` by scaling, a 30-term Taylor sum, and squaring.
pub fn expm2(a: &M2) -> M2 {
    let norm: f64 = a.iter().flatten().map(|z| z.norm()).sum();
    let k = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let s = 0.5f64.powi(k);
    let a: M2 = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * s));
    let mut out: M2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut term = out;
    for n in 1..30 {
        term = mul2(&term, &a);
        term = std::array::from_fn(|i| std::array::from_fn(|j| term[i][j] / n as f64));
        out = std::array::from_fn(|i| std::array::from_fn(|j| out[i][j] + term[i][j]));
    }
    for _ in 0..k {
        out = mul2(&out, &out);
    }
    out
}

/// `h0 I + h·σ`.
pub fn hamiltonian(h0: f64, h: [f64; 3]) -> M2 {
    [
        [c(h0 + h[2], 0.0), c(h[0], -h[1])],
        [c(h[0], h[1]), c(h0 - h[2], 0.0)],
    ]
}

/// `exp(−i H t)`.
pub fn propagator(h: &M2, t: f64) -> M2 {
    let a: M2 = std::array::from_fn(|i| std::array::from_fn(|j| h[i][j] * c(0.0, -t)));
    expm2(&a)
}

pub fn apply(u: &M2, v: [C; 2]) -> [C; 2] {
    [
        u[0][0] * v[0] + u[0][1] * v[1],
        u[1][0] * v[0] + u[1][1] * v[1],
    ]
}

pub fn evolve_constant(h0: f64, h: [f64; 3], psi: [C; 2], t: f64) -> [C; 2] {
    apply(&propagator(&hamiltonian(h0, h), t), psi)
}

pub fn inner(a: [C; 2], b: [C; 2]) -> C {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn bloch(v: [C; 2]) -> [f64; 3] {
    let r = v[0].conj() * v[1];
    [2.0 * r.re, 2.0 * r.im, v[0].norm_sqr() - v[1].norm_sqr()]
}

/// `(θ, φ)` with `φ = arg c1 − arg c0` reduced to `(−π, π]`.
pub fn angles(v: [C; 2]) -> (f64, f64) {
    let theta = 2.0 * v[1].norm().atan2(v[0].norm());
    let mut phi = v[1].arg() - v[0].arg();
    while phi <= -std::f64::consts::PI {
        phi += 2.0 * std::f64::consts::PI;
    }
    while phi > std::f64::consts::PI {
        phi -= 2.0 * std::f64::consts::PI;
    }
    (theta, phi)
}

/// Composite Simpson with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Real `exp(A)` by scaling, Taylor and squaring.
pub fn expm3(a: &M3) -> M3 {
    let norm: f64 = a.iter().flatten().map(|x| x.abs()).sum();
    let k = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let s = 0.5f64.powi(k);
    let mul = |x: &M3, y: &M3| -> M3 {
        std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|l| x[i][l] * y[l][j]).sum()))
    };
    let a: M3 = std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] * s));
    let mut out: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut term = out;
    for n in 1..30 {
        term = mul(&term, &a);
        term = std::array::from_fn(|i| std::array::from_fn(|j| term[i][j] / n as f64));
        out = std::array::from_fn(|i| std::array::from_fn(|j| out[i][j] + term[i][j]));
    }
    for _ in 0..k {
        out = mul(&out, &out);
    }
    out
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `4κ_g²` of a curve on the unit sphere, from 5-point derivatives of
/// `a(t)`. The Fubini–Study sphere has radius 1/2, hence the factor 4.
pub fn sphere_curvature_sq(a: impl Fn(f64) -> [f64; 3], t: f64, h: f64) -> f64 {
    let p: Vec<[f64; 3]> = (-2..=2).map(|k| a(t + k as f64 * h)).collect();
    let d1: [f64; 3] =
        std::array::from_fn(|i| (p[0][i] - 8.0 * p[1][i] + 8.0 * p[3][i] - p[4][i]) / (12.0 * h));
    let d2: [f64; 3] = std::array::from_fn(|i| {
        (-p[0][i] + 16.0 * p[1][i] - 30.0 * p[2][i] + 16.0 * p[3][i] - p[4][i]) / (12.0 * h * h)
    });
    let speed = dot(d1, d1).sqrt();
    let kg = dot(p[2], cross(d1, d2)) / speed.powi(3);
    4.0 * kg * kg
}

/// State of `|0⟩` under `(ω/2)(cos νt σx + sin νt σy)`, built as
/// `e^{−iνtσz/2} e^{−i(ωσx − νσz)t/2}|0⟩`.
pub fn rotating_state(omega: f64, nu: f64, t: f64) -> [C; 2] {
    let frame = propagator(&hamiltonian(0.0, [0.0, 0.0, 0.5 * nu]), t);
    let body = propagator(&hamiltonian(0.0, [0.5 * omega, 0.0, -0.5 * nu]), t);
    apply(&mul2(&frame, &body), [c(1.0, 0.0), c(0.0, 0.0)])
}
