//! Sign decision for `Q(t)` on `t ≥ 0` by root isolation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::GaussPoly;
use crate::numeric::compensated::horner;

/// A point where the polynomial is below `-ε_abs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeWitness {
    /// Location in `t = r²`.
    pub t: f64,
    /// Location in `r`.
    pub r: f64,
    /// `Q(t)`.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nonnegativity {
    pub nonneg: bool,
    pub witness: Option<NegativeWitness>,
}

/// Real parts of the roots of `p` (ascending coefficients, nonzero leading term).
fn root_real_parts(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return Vec::new();
    }
    let n = p.len() - 1;
    let lead = p[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -p[i] / lead;
    }
    m.complex_eigenvalues().iter().map(|z| z.re).filter(|x| x.is_finite()).collect()
}

fn derivative(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

/// Decides `Q(t) ≥ -ε_abs` for all `t ≥ 0`, `ε_abs = 1e-12·max|p_k|`.
///
/// Interior minima of `Q` sit at real roots of `Q'`; every root of `Q` and
/// `Q'` (by real part, so near-double roots are not lost to a realness
/// threshold), the midpoints between them and the origin are inspected, and
/// the leading coefficient settles the behaviour at infinity.
pub fn poly_nonneg(p: &[f64]) -> Nonnegativity {
    let mut p = p.to_vec();
    while p.last() == Some(&0.0) {
        p.pop();
    }
    if p.is_empty() {
        return Nonnegativity { nonneg: true, witness: None };
    }
    let eps = 1e-12 * p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let witness = |t: f64| NegativeWitness { t, r: t.sqrt(), value: horner(&p, t) };
    if p[0] < -eps {
        return Nonnegativity { nonneg: false, witness: Some(witness(0.0)) };
    }
    let n = p.len() - 1;
    let mut cand: Vec<f64> = root_real_parts(&p)
        .into_iter()
        .chain(root_real_parts(&derivative(&p)))
        .filter(|&t| t > 0.0)
        .collect();
    cand.push(0.0);
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    let mids: Vec<f64> = cand.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    cand.extend(mids);

    let worst = cand
        .iter()
        .map(|&t| (t, horner(&p, t)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidate list contains the origin");
    if worst.1 < -eps {
        return Nonnegativity { nonneg: false, witness: Some(witness(worst.0)) };
    }
    if n > 0 && p[n] < 0.0 {
        // negative at infinity: walk outward past the last critical point
        let mut t = cand.iter().fold(1.0f64, |m, &x| m.max(x)) * 2.0;
        while horner(&p, t) >= -eps && t.is_finite() {
            t *= 2.0;
        }
        return Nonnegativity { nonneg: false, witness: Some(witness(t)) };
    }
    Nonnegativity { nonneg: true, witness: None }
}

/// Whether `f(r) ≥ 0` for all real `r` (the Gaussian factor is positive).
pub fn is_nonneg(f: &GaussPoly) -> Nonnegativity {
    poly_nonneg(f.coeffs())
}
