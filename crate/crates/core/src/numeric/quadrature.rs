//! Adaptive Gauss–Legendre quadrature for smooth integrands.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;
const MAX_DEPTH: u32 = 40;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

/// Legendre nodes by Newton iteration on P_n from the Chebyshev guess.
fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        Rule { nodes, weights }
    })
}

/// Panel estimate and the integral of |f| (sets the rounding-noise floor).
fn panel<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let r = rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let (mut s, mut a) = (0.0, 0.0);
    for (&x, &w) in r.nodes.iter().zip(r.weights.iter()) {
        let v = w * f(mid + half * x);
        s += v;
        a += v.abs();
    }
    (s * half, a * half)
}

/// Integrates `f` over `[lo, hi]` to absolute tolerance `tol` by recursive
/// bisection. The interval is pre-split into `initial_panels` equal pieces.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let n = initial_panels.max(1);
    let h = (hi - lo) / n as f64;
    let per_panel = tol / n as f64;
    let mut total = 0.0;
    for k in 0..n {
        let a = lo + k as f64 * h;
        let b = if k + 1 == n { hi } else { a + h };
        let (whole, _) = panel(&f, a, b);
        total += refine(&f, a, b, whole, per_panel, 0)?;
    }
    Ok(total)
}

fn refine<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let (left, left_abs) = panel(f, lo, mid);
    let (right, right_abs) = panel(f, mid, hi);
    let split = left + right;
    if !split.is_finite() {
        return Err(Error::Quadrature { lo, hi });
    }
    let noise = 64.0 * f64::EPSILON * (left_abs + right_abs);
    if (split - whole).abs() <= tol.max(noise) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Quadrature { lo, hi });
    }
    Ok(refine(f, lo, mid, left, 0.5 * tol, depth + 1)? + refine(f, mid, hi, right, 0.5 * tol, depth + 1)?)
}
