//! Bochner matrix tests on equidistant samples: `T_n(r) = [ψ(|i−j| r)]`
//! must be positive semidefinite for every spacing `r`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::GaussPoly;
use crate::criteria::{AssociateSet, TestVerdict, Witness};
use crate::error::{Error, Result};
use crate::numeric::RGrid;

/// `λ_min < −EPS_DETECT·|ψ(0)|` counts as a violation.
pub const EPS_DETECT: f64 = 1e-10;

const JACOBI_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        let scale = rows.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                if (rows[i][j] - rows[j][i]).abs() > 1e-14 * scale {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { n, a: rows.concat() })
    }

    /// Symmetric Toeplitz matrix from its first row.
    pub fn toeplitz(first_row: &[f64]) -> Self {
        let n = first_row.len();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = first_row[i.abs_diff(j)];
            }
        }
        Self { n, a }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    /// All eigenvalues, ascending, by cyclic Jacobi rotations in row order
    /// until the off-diagonal norm drops below `1e-13·‖M‖_F`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = self.a.clone();
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * n + j] * a[i * n + j])
                .sum::<f64>()
                .sqrt();
            if off <= JACOBI_TOL * norm {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Smallest eigenvalue.
pub fn min_eigenvalue(m: &SymmetricMatrix) -> f64 {
    m.eigenvalues()[0]
}

/// `T_n(r)` with entries `f(|i−j| r)`.
pub fn toeplitz_matrix(f: &GaussPoly, n: usize, r: f64) -> Result<SymmetricMatrix> {
    if n < 2 {
        return Err(Error::ToeplitzOrder(n));
    }
    let row: Vec<f64> = (0..n).map(|k| f.eval(k as f64 * r)).collect();
    Ok(SymmetricMatrix::toeplitz(&row))
}

/// λ_min curve of one order over an r-grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzScan {
    pub order: usize,
    pub r_grid: RGrid,
    pub min_eig: Vec<(f64, f64)>,
    pub first_violation: Option<f64>,
    /// Least-squares slope of `ln det T_n` against `ln r` on the five smallest grid points.
    pub det_small_r_exponent: Option<f64>,
}

fn threshold(f: &GaussPoly) -> f64 {
    -EPS_DETECT * f.at_origin().abs()
}

pub fn toeplitz_scan(f: &GaussPoly, n: usize, grid: &RGrid) -> Result<ToeplitzScan> {
    grid.require_positive()?;
    let eps = threshold(f);
    let mut min_eig = Vec::with_capacity(grid.len());
    for r in grid.points() {
        min_eig.push((r, min_eigenvalue(&toeplitz_matrix(f, n, r)?)));
    }
    let first_violation = min_eig.iter().find(|(_, l)| *l < eps).map(|(r, _)| *r);
    let det_small_r_exponent = det_exponent(f, n, grid);
    Ok(ToeplitzScan { order: n, r_grid: *grid, min_eig, first_violation, det_small_r_exponent })
}

/// Whether `T + shift·I` admits a Cholesky factorization.
fn cholesky_ok(m: &SymmetricMatrix, shift: f64) -> bool {
    let n = m.n;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = m.a[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) {
            return false;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = m.a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    true
}

/// First grid point with `λ_min(T_n(r)) < −ε`, and that eigenvalue. Stops there.
///
/// A Cholesky factorization of `T + 0.999ε·I` clears most points cheaply;
/// the eigenvalue decides the rest.
pub fn first_violation(f: &GaussPoly, n: usize, grid: &RGrid) -> Result<Option<(f64, f64)>> {
    grid.require_positive()?;
    let eps = threshold(f);
    for r in grid.points() {
        let m = toeplitz_matrix(f, n, r)?;
        if cholesky_ok(&m, -0.999 * eps) {
            continue;
        }
        let l = min_eigenvalue(&m);
        if l < eps {
            return Ok(Some((r, l)));
        }
    }
    Ok(None)
}

/// Order-`n` test over every associate, in set order; the witness is the
/// first associate found violating and its first violating `r`.
pub fn toeplitz_suite(set: &AssociateSet, n: usize, grid: &RGrid) -> Result<TestVerdict> {
    let mut cost = 0u64;
    for (tag, g) in set.entries() {
        let hit = first_violation(g, n, grid)?;
        cost += n as u64 * hit.map_or(grid.len(), |(r, _)| (((r - grid.start) / grid.step).round() as usize) + 1) as u64;
        if let Some((r, l)) = hit {
            return Ok(TestVerdict::detected(format!("toeplitz({n})"), Witness { tag: *tag, r, margin: l }, cost));
        }
    }
    Ok(TestVerdict::clean(format!("toeplitz({n})"), cost))
}

/// `(k−l)^{2m}` differences: `E_ij(m) = Σ_{k≤i, l≤j} (−1)^{i−k+j−l} C(i,k) C(j,l) (k−l)^{2m}`,
/// exact in `i128`. `None` on overflow.
fn difference_moment(i: usize, j: usize, m: u32) -> Option<i128> {
    let binom = |n: usize, k: usize| -> i128 { (0..k).fold(1i128, |acc, t| acc * (n - t) as i128 / (t + 1) as i128) };
    let mut s: i128 = 0;
    for k in 0..=i {
        for l in 0..=j {
            let sign = if (i - k + j - l).is_multiple_of(2) { 1 } else { -1 };
            let d = (k as i128 - l as i128).checked_pow(2 * m)?;
            let term = binom(i, k).checked_mul(binom(j, l))?.checked_mul(d)?;
            s = s.checked_add(sign * term)?;
        }
    }
    Some(s)
}

/// `ln |det T_n(r)|` for small `r` without underflow. With `L` the
/// finite-difference matrix (`det L = 1`), `L T Lᵀ` has entries of order
/// `r^{i+j}`; dividing them out leaves `det T = r^{n(n−1)} det D'`.
pub fn log_det_small_r(f: &GaussPoly, n: usize, r: f64) -> f64 {
    const EXTRA: usize = 14;
    let terms = n + EXTRA;
    let c = f.taylor_coeffs(terms);
    let mut d = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let lowest = (i + j).div_ceil(2);
            let mut s = 0.0;
            for (m, cm) in c.iter().enumerate().skip(lowest) {
                let Some(e) = difference_moment(i, j, m as u32) else { break };
                s += cm * e as f64 * r.powi((2 * m - i - j) as i32);
            }
            d[(i, j)] = s;
        }
    }
    (n * (n - 1)) as f64 * r.ln() + d.determinant().abs().ln()
}

fn det_exponent(f: &GaussPoly, n: usize, grid: &RGrid) -> Option<f64> {
    if grid.len() < 5 || grid.start <= 0.0 {
        return None;
    }
    let pts: Vec<(f64, f64)> = grid.points().take(5).map(|r| (r.ln(), log_det_small_r(f, n, r))).collect();
    if pts.iter().any(|(_, y)| !y.is_finite()) {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 5.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 5.0;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}
