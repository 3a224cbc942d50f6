//! Transform eigenbasis: even Hermite functions in 1D, Laguerre functions in 2D.

use serde::{Deserialize, Serialize};

use super::{Dim, GaussPoly};
use crate::error::{Error, Result};
use crate::numeric::{binomial, factorial};

/// Number of basis functions supported per dimension.
pub const BASIS_SIZE: usize = 5;

/// Coefficients of the `index`-th basis function's polynomial in `t = r²`
/// (width is always 1/2).
///
/// 1D: `ξ_{2j}(r) = (2^n n! √π)^{-1/2} H_n(r) e^{-r²/2}` with `n = 2j`.
/// 2D: `√2 L_j(x²) e^{-x²/2}`.
pub fn basis_polynomial(dim: Dim, index: usize) -> Result<Vec<f64>> {
    if index >= BASIS_SIZE {
        return Err(Error::BasisIndex { index, max: BASIS_SIZE - 1 });
    }
    Ok(match dim {
        Dim::One => {
            let n = 2 * index;
            let h = hermite_coeffs(n);
            let norm = (2f64.powi(n as i32) * factorial(n) * std::f64::consts::PI.sqrt()).sqrt().recip();
            h.iter().step_by(2).map(|c| c * norm).collect()
        }
        Dim::Two => {
            let j = index;
            (0..=j)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    std::f64::consts::SQRT_2 * sign * binomial(j, k) / factorial(k)
                })
                .collect()
        }
    })
}

/// Physicists' Hermite polynomial coefficients in ascending powers of `r`.
fn hermite_coeffs(n: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for m in 1..n {
        // H_{m+1} = 2r H_m - 2m H_{m-1}
        let mut next = vec![0.0; m + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += 2.0 * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= 2.0 * m as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

pub fn basis_function(dim: Dim, index: usize) -> Result<GaussPoly> {
    Ok(GaussPoly::from_parts(dim, 0.5, basis_polynomial(dim, index)?))
}

/// Coefficient vector over the transform eigenbasis of one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisMix {
    pub dim: Dim,
    pub c: Vec<f64>,
    pub normalized: bool,
}

impl BasisMix {
    pub fn new(dim: Dim, c: Vec<f64>) -> Result<Self> {
        if c.len() > BASIS_SIZE {
            return Err(Error::MixTooLong { len: c.len(), max: BASIS_SIZE });
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        if c.iter().all(|&x| x == 0.0) {
            return Err(Error::ZeroMix);
        }
        let norm2: f64 = c.iter().map(|x| x * x).sum();
        let normalized = (norm2 - 1.0).abs() < 1e-12;
        Ok(Self { dim, c, normalized })
    }

    /// Rescales to unit Euclidean norm.
    pub fn normalize(mut self) -> Self {
        let norm = self.c.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut self.c {
            *x /= norm;
        }
        self.normalized = true;
        self
    }

    /// Expands a width-1/2 function of degree below [`BASIS_SIZE`] over the
    /// basis. Each basis polynomial has exact degree equal to its index, so
    /// the triangular system is solved from the top coefficient down.
    pub fn from_function(f: &GaussPoly) -> Result<Self> {
        if f.width() != 0.5 {
            return Err(Error::NotEigenWidth(f.width()));
        }
        if f.is_zero() {
            return Err(Error::ZeroMix);
        }
        let n = f.coeffs().len();
        if n > BASIS_SIZE {
            return Err(Error::MixTooLong { len: n, max: BASIS_SIZE });
        }
        let mut rest = f.coeffs().to_vec();
        let mut c = vec![0.0; n];
        for j in (0..n).rev() {
            let b = basis_polynomial(f.dim(), j)?;
            c[j] = rest[j] / b[j];
            for (k, bk) in b.iter().enumerate() {
                rest[k] -= c[j] * bk;
            }
        }
        Self::new(f.dim(), c)
    }

    /// Transform eigenvalue of each basis index: `(-1)^j`.
    pub fn eigenvalue(index: usize) -> f64 {
        if index.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

/// Exact linear combination `Σ c_j·basis_j`, width 1/2.
pub fn mix(m: &BasisMix) -> Result<GaussPoly> {
    if m.c.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroMix);
    }
    let mut p = vec![0.0; m.c.len()];
    for (j, &cj) in m.c.iter().enumerate() {
        for (k, bk) in basis_polynomial(m.dim, j)?.iter().enumerate() {
            p[k] += cj * bk;
        }
    }
    Ok(GaussPoly::from_parts(m.dim, 0.5, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quadrature::integrate;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn first_basis_functions() {
        let x0 = basis_function(Dim::One, 0).unwrap();
        assert_relative_eq!(x0.coeffs()[0], PI.powf(-0.25), max_relative = 1e-15);
        let x2 = basis_function(Dim::One, 1).unwrap();
        let k = PI.powf(-0.25) / SQRT_2;
        assert_relative_eq!(x2.coeffs()[0], -k, max_relative = 1e-15);
        assert_relative_eq!(x2.coeffs()[1], 2.0 * k, max_relative = 1e-15);
        let l0 = basis_function(Dim::Two, 0).unwrap();
        assert_eq!(l0.coeffs(), &[SQRT_2]);
        let l1 = basis_function(Dim::Two, 1).unwrap();
        assert_relative_eq!(l1.coeffs()[1], -SQRT_2);
        assert!(basis_function(Dim::One, BASIS_SIZE).is_err());
    }

    #[test]
    fn orthonormal_under_dimension_measure() {
        for dim in [Dim::One, Dim::Two] {
            for i in 0..BASIS_SIZE {
                for j in 0..BASIS_SIZE {
                    let fi = basis_function(dim, i).unwrap();
                    let fj = basis_function(dim, j).unwrap();
                    let ip = integrate(
                        |r| {
                            let w = if dim == Dim::One { 2.0 } else { r };
                            w * fi.eval(r) * fj.eval(r)
                        },
                        0.0,
                        20.0,
                        1e-14,
                        8,
                    )
                    .unwrap();
                    // 1D functions are even: ∫_R = 2∫_0^∞
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12, "dim {dim} ({i},{j}) -> {ip}");
                }
            }
        }
    }

    #[test]
    fn mix_identity_and_grid_example() {
        let m = BasisMix::new(Dim::One, vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(mix(&m).unwrap(), basis_function(Dim::One, 0).unwrap());
        assert!(BasisMix::new(Dim::One, vec![0.0, 0.0]).is_err());
        let (al, be) = (0.3f64, 1.1f64);
        let m = BasisMix::new(Dim::One, vec![al.cos(), al.sin() * be.cos(), al.sin() * be.sin()]).unwrap();
        assert!(m.normalized);
        let f = mix(&m).unwrap();
        let r = 0.8;
        let direct: f64 = (0..3).map(|j| m.c[j] * basis_function(Dim::One, j).unwrap().eval(r)).sum();
        assert_relative_eq!(f.eval(r), direct, max_relative = 1e-14);
    }

    #[test]
    fn decomposition_round_trip() {
        for dim in [Dim::One, Dim::Two] {
            let m = BasisMix::new(dim, vec![0.2, -0.5, 0.1, 0.7, -0.3]).unwrap();
            let back = BasisMix::from_function(&mix(&m).unwrap()).unwrap();
            for (x, y) in m.c.iter().zip(&back.c) {
                assert_relative_eq!(x, y, epsilon = 1e-13);
            }
        }
    }
}
