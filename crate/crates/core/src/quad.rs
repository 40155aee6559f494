//! Quadrature: adaptive Simpson on callables and composite Simpson on
//! uniformly spaced samples.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;
/// Integrand evaluations allowed per call before giving up.
const MAX_EVALS: usize = 1 << 22;

/// Adaptive Simpson with Richardson correction, absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(
            "integration bounds must be finite".into(),
        ));
    }
    // Pre-split so that periodic integrands cannot fool the first estimate.
    const PIECES: usize = 8;
    let h = (b - a) / PIECES as f64;
    let mut total = 0.0;
    let mut worst = 0.0f64;
    for k in 0..PIECES {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == PIECES { b } else { lo + h };
        let fa = f(lo);
        let fm = f(0.5 * (lo + hi));
        let fb = f(hi);
        let whole = simpson(lo, hi, fa, fm, fb);
        let mut st = State {
            unresolved: 0.0,
            budget: MAX_EVALS / PIECES,
        };
        total += recurse(
            &f,
            lo,
            hi,
            fa,
            fm,
            fb,
            whole,
            tol / PIECES as f64,
            MAX_DEPTH,
            &mut st,
        );
        worst = worst.max(st.unresolved);
    }
    if !total.is_finite() {
        return Err(Error::QuadratureNonConvergence { estimate: f64::NAN });
    }
    if worst > 0.0 {
        return Err(Error::QuadratureNonConvergence { estimate: worst });
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

struct State {
    /// Largest error estimate left on an interval that was not refined further.
    unresolved: f64,
    /// Remaining integrand evaluations.
    budget: usize,
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    st: &mut State,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || !delta.is_finite() {
        return left + right + delta / 15.0;
    }
    // Each child evaluates two new points.
    if depth == 0 || st.budget < 4 {
        st.unresolved = st.unresolved.max(delta.abs() / 15.0);
        return left + right + delta / 15.0;
    }
    st.budget -= 4;
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, st)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, st)
}

/// Composite Simpson on `n` uniformly spaced samples with spacing `h`.
///
/// An even number of intervals uses the plain 1-4-2-4-1 rule. An odd count
/// closes with a Simpson 3/8 panel on the last three intervals. Two samples
/// fall back to the trapezoid rule.
pub fn simpson_uniform(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (y[0] + y[1]),
        3 => h / 3.0 * (y[0] + 4.0 * y[1] + y[2]),
        4 => 3.0 * h / 8.0 * (y[0] + 3.0 * y[1] + 3.0 * y[2] + y[3]),
        _ => {
            let intervals = n - 1;
            if intervals.is_multiple_of(2) {
                simpson_even(y, h)
            } else {
                let k = n - 3;
                simpson_even(&y[..k], h) + simpson_uniform(&y[k - 1..], h)
            }
        }
    }
}

fn simpson_even(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    let mut s = y[0] + y[n - 1];
    for (i, v) in y.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// Composite Simpson of `f` on `[a, b]` with `nodes` equally spaced nodes.
pub fn simpson_fn<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let nodes = nodes.max(2);
    let h = (b - a) / (nodes - 1) as f64;
    let y: Vec<f64> = (0..nodes).map(|i| f(a + i as f64 * h)).collect();
    simpson_uniform(&y, h)
}
