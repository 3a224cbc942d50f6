//! Closed-form transforms, sign-weighted even derivatives and Gaussian smoothing.

use super::basis::BasisMix;
use super::{mix, Dim, GaussPoly};
use crate::error::{Error, Result};
use crate::numeric::{binomial, compensated};

/// Default highest derivative order in associate families.
pub const DEFAULT_QMAX: usize = 4;

/// Hard cap on `q`; beyond it coefficients overflow for typical widths.
const MAX_Q: usize = 16;

/// Exact transform: cosine transform `√(2/π)∫₀^∞ cos(sr) f(r) dr` in 1D,
/// Hankel transform `∫₀^∞ x J₀(kx) f(x) dx` in 2D. Both are involutions and
/// map width `a` to `1/(4a)`.
pub fn exact_transform(f: &GaussPoly) -> GaussPoly {
    let a = f.width();
    let c = 0.25 / a;
    let p = f.coeffs();
    // Entries factor as (integer)·u^k·v^j·w; for a = 1/2 every factor is exact.
    let (u, v, w) = match f.dim() {
        // (2k)! / ((k−j)! (2j)!) · (1/4a)^k (1/a)^j / √(2a)
        Dim::One => (c, 1.0 / a, 1.0 / (2.0 * a).sqrt()),
        // k!/j! · C(k,j) · (1/a)^k (1/4a)^j / (2a)
        Dim::Two => (1.0 / a, c, 0.5 / a),
    };
    let out = (0..p.len())
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let terms = (j..p.len()).map(|k| {
                let integer = match f.dim() {
                    Dim::One => binomial(2 * k, 2 * j) * falling(2 * k - 2 * j, k - j),
                    Dim::Two => falling(k, k - j) * binomial(k, j),
                };
                (p[k], integer * u.powi(k as i32) * v.powi(j as i32))
            });
            sign * w * compensated::dot(terms)
        })
        .collect();
    GaussPoly::from_parts(f.dim(), c, out)
}

/// `n (n−1) ⋯ (n−m+1)`, i.e. `n!/(n−m)!`.
fn falling(n: usize, m: usize) -> f64 {
    ((n - m + 1)..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Transform of a width-1/2 function through its basis expansion: each basis
/// coefficient picks up the eigenvalue `(-1)^j`.
pub fn eigen_transform(f: &GaussPoly) -> Result<GaussPoly> {
    let mut m = BasisMix::from_function(f)?;
    for (j, c) in m.c.iter_mut().enumerate() {
        *c *= BasisMix::eigenvalue(j);
    }
    mix(&m)
}

/// `d/dt` acting on `e^{-at} P(t)`: returns `P' - aP`.
fn d_t(p: &[f64], a: f64) -> Vec<f64> {
    (0..p.len())
        .map(|k| p.get(k + 1).map_or(0.0, |c| (k + 1) as f64 * c) - a * p[k])
        .collect()
}

/// `(−d²/dr²)` in 1D or `−(1/x)(d/dx)(x d/dx)` in 2D, on `e^{-at}P(t)`, `t = r²`.
///
/// With `D = d/dt`: `d²/dr² = 2D + 4tD²` and the radial Laplacian is `4D + 4tD²`.
pub(crate) fn neg_laplacian(f: &GaussPoly) -> GaussPoly {
    let a = f.width();
    let p = f.coeffs();
    if p.is_empty() {
        return f.clone();
    }
    let d1 = d_t(p, a);
    let d2 = d_t(&d1, a);
    let lin = match f.dim() {
        Dim::One => 2.0,
        Dim::Two => 4.0,
    };
    let mut out = vec![0.0; p.len() + 1];
    for (k, v) in d1.iter().enumerate() {
        out[k] -= lin * v;
    }
    for (k, v) in d2.iter().enumerate() {
        out[k + 1] -= 4.0 * v;
    }
    GaussPoly::from_parts(f.dim(), a, out)
}

/// Sign-weighted even derivative `ψ_{2q}`: `(−d²/dr²)^q` in 1D, `𝒪^q` in 2D.
/// Its transform is `s^{2q}` times the transform of `f`.
pub fn derivative_2q(f: &GaussPoly, q: usize) -> Result<GaussPoly> {
    if q > MAX_Q {
        return Err(Error::DerivativeOrder { q, max: MAX_Q });
    }
    let mut g = f.clone();
    for _ in 0..q {
        g = neg_laplacian(&g);
    }
    Ok(g)
}

/// `ψ_b`: the function whose transform is `e^{-s²/(2b²)}` times that of `f`.
/// Done in transform space, where the multiplier only widens the Gaussian.
pub fn convolve_gauss(f: &GaussPoly, b: f64) -> Result<GaussPoly> {
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::InvalidConvolutionWidth(b));
    }
    let phi = exact_transform(f);
    let widened = GaussPoly::from_parts(f.dim(), phi.width() + 0.5 / (b * b), phi.coeffs().to_vec());
    Ok(exact_transform(&widened))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_function, BasisMix, BASIS_SIZE};
    use crate::numeric::factorial;
    use crate::numeric::quadrature::integrate;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn footnote_psi() -> GaussPoly {
        GaussPoly::new(Dim::One, 0.5, vec![0.718081, -0.064879, -0.0685793, 0.0269736, 0.00119983]).unwrap()
    }

    fn assert_coeffs_close(x: &GaussPoly, y: &GaussPoly, rel: f64) {
        assert_coeffs_close_to(x, y, rel * x.max_abs_coeff().max(y.max_abs_coeff()));
    }

    fn assert_coeffs_close_to(x: &GaussPoly, y: &GaussPoly, tol: f64) {
        assert_relative_eq!(x.width(), y.width(), max_relative = 1e-15);
        let n = x.coeffs().len().max(y.coeffs().len());
        for k in 0..n {
            let a = x.coeffs().get(k).copied().unwrap_or(0.0);
            let b = y.coeffs().get(k).copied().unwrap_or(0.0);
            assert!((a - b).abs() <= tol, "coefficient {k}: {a} vs {b} (tolerance {tol})");
        }
    }

    #[test]
    fn unit_gaussian_is_self_dual() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        assert_coeffs_close(&exact_transform(&g), &g, 1e-15);
        let g2 = basis_function(Dim::Two, 0).unwrap();
        assert_coeffs_close(&exact_transform(&g2), &g2, 1e-15);
    }

    #[test]
    fn footnote_transform() {
        let phi = exact_transform(&footnote_psi());
        let expect = [0.97805, -1.24138, 0.587989, -0.0605688, 0.00119983];
        for (x, e) in phi.coeffs().iter().zip(expect) {
            assert!((x - e).abs() < 1e-5, "{x} vs {e}");
        }
    }

    #[test]
    fn basis_eigenvalues_both_dims() {
        for dim in [Dim::One, Dim::Two] {
            for j in 0..BASIS_SIZE {
                let f = basis_function(dim, j).unwrap();
                let expect = f.scale(BasisMix::eigenvalue(j));
                assert_coeffs_close(&exact_transform(&f), &expect, 1e-13);
                assert_coeffs_close(&eigen_transform(&f).unwrap(), &expect, 1e-13);
            }
        }
    }

    #[test]
    fn eigen_shortcut_requires_half_width() {
        let f = GaussPoly::new(Dim::One, 1.0, vec![1.0]).unwrap();
        assert!(eigen_transform(&f).is_err());
    }

    #[test]
    fn transform_matches_quadrature_general_width() {
        let f = GaussPoly::new(Dim::One, 0.7, vec![0.3, -1.1, 0.4]).unwrap();
        let phi = exact_transform(&f);
        for s in [0.0, 0.9, 2.3] {
            let q = integrate(|r| (s * r).cos() * f.eval(r), 0.0, 15.0, 1e-14, 16).unwrap() * (2.0 / PI).sqrt();
            assert_relative_eq!(phi.eval(s), q, epsilon = 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_gaussian() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        let d = derivative_2q(&g, 1).unwrap();
        assert_eq!(d.coeffs(), &[1.0, -1.0]);
        assert_eq!(derivative_2q(&g, 0).unwrap(), g);
        let g2 = basis_function(Dim::Two, 0).unwrap();
        let l = derivative_2q(&g2, 1).unwrap();
        assert_relative_eq!(l.coeffs()[0], 2.0 * std::f64::consts::SQRT_2);
        assert_relative_eq!(l.coeffs()[1], -std::f64::consts::SQRT_2);
    }

    #[test]
    fn derivative_commutes_with_transform() {
        for dim in [Dim::One, Dim::Two] {
            for j in 0..BASIS_SIZE {
                let f = basis_function(dim, j).unwrap();
                let phi = exact_transform(&f);
                for q in 0..=4 {
                    let d = derivative_2q(&f, q).unwrap();
                    let lhs = exact_transform(&d);
                    let mut shifted = vec![0.0; q];
                    shifted.extend_from_slice(phi.coeffs());
                    let rhs = GaussPoly::from_parts(dim, phi.width(), shifted);
                    // cancellation is relative to the (much larger) derivative coefficients
                    assert_coeffs_close_to(&lhs, &rhs, 1e-12 * d.max_abs_coeff());
                }
            }
        }
    }

    #[test]
    fn gaussian_convolution_closed_form() {
        let x0 = basis_function(Dim::One, 0).unwrap();
        let fb = convolve_gauss(&x0, 1.0).unwrap();
        assert_relative_eq!(fb.width(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(fb.coeffs()[0], PI.powf(-0.25) / 2f64.sqrt(), max_relative = 1e-14);
        assert!(convolve_gauss(&x0, 0.0).is_err());
        assert!(convolve_gauss(&x0, f64::NAN).is_err());
    }

    #[test]
    fn wide_kernel_recovers_function() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        let fb = convolve_gauss(&g, 100.0).unwrap();
        let sup = (0..=500).map(|i| i as f64 * 0.01).map(|r| (fb.eval(r) - g.eval(r)).abs()).fold(0.0, f64::max);
        assert!(sup < 1e-3);
    }

    #[test]
    fn convolution_against_real_space_integral() {
        // ψ_b(r) = (b/√(2π)) ∫ e^{-b²(r-r')²/2} ψ(r') dr'
        let mixes = [vec![0.4, -0.3, 0.8, 0.1, -0.3], vec![0.9, 0.1, -0.2, 0.3, 0.2], vec![0.1, 0.6, 0.5, -0.5, 0.3]];
        for c in mixes {
            let f = mix(&BasisMix::new(Dim::One, c).unwrap().normalize()).unwrap();
            let b = 1.0;
            let fb = convolve_gauss(&f, b).unwrap();
            for r in [0.0, 0.7, 1.5, 3.0, 5.0] {
                let q = integrate(
                    |u| (-(b * b) * (r - u) * (r - u) / 2.0).exp() * f.eval(u),
                    -20.0,
                    20.0,
                    1e-14,
                    32,
                )
                .unwrap()
                    * b
                    / (2.0 * PI).sqrt();
                assert!((q - fb.eval(r)).abs() < 1e-8, "r={r}: {q} vs {}", fb.eval(r));
            }
        }
    }

    fn mix_strategy(dim: Dim) -> impl Strategy<Value = GaussPoly> {
        proptest::collection::vec(-1.0f64..1.0, BASIS_SIZE)
            .prop_filter("nonzero", |c| c.iter().any(|x| x.abs() > 1e-3))
            .prop_map(move |c| mix(&BasisMix::new(dim, c).unwrap().normalize()).unwrap())
    }

    /// `∫ f² dμ` in closed form: ∫₀^∞ t^m e^{-2at} with dr (1D) or x dx (2D).
    fn l2_norm_sq(f: &GaussPoly) -> f64 {
        let p = f.coeffs();
        let a2 = 2.0 * f.width();
        let mut s = 0.0;
        for (i, pi) in p.iter().enumerate() {
            for (j, pj) in p.iter().enumerate() {
                let m = i + j;
                s += pi
                    * pj
                    * match f.dim() {
                        // ∫₀^∞ r^{2m} e^{-a2 r²} dr = Γ(m+½)/(2 a2^{m+½})
                        Dim::One => crate::numeric::gamma_half_integer(m) / (2.0 * a2.powf(m as f64 + 0.5)),
                        // ∫₀^∞ x^{2m+1} e^{-a2 x²} dx = m!/(2 a2^{m+1})
                        Dim::Two => factorial(m) / (2.0 * a2.powi(m as i32 + 1)),
                    };
            }
        }
        s
    }

    proptest! {
        #[test]
        fn involution(f in prop_oneof![mix_strategy(Dim::One), mix_strategy(Dim::Two)], a in 0.1f64..3.0) {
            let g = GaussPoly::new(f.dim(), a, f.coeffs().to_vec()).unwrap();
            for h in [f, g] {
                let back = exact_transform(&exact_transform(&h));
                prop_assert!((back.width() - h.width()).abs() <= 1e-15 * h.width());
                // compare in the dilation-invariant variable a·r², i.e. p_k / a^k
                let a = h.width();
                let unit = |p: &[f64]| p.iter().enumerate().map(|(k, c)| c / a.powi(k as i32)).collect::<Vec<_>>();
                let (x, y) = (unit(back.coeffs()), unit(h.coeffs()));
                let scale = y.iter().fold(0.0f64, |m, c| m.max(c.abs()));
                for (x, y) in x.iter().zip(&y) {
                    prop_assert!((x - y).abs() <= 1e-12 * scale);
                }
            }
        }

        #[test]
        fn parseval(f in prop_oneof![mix_strategy(Dim::One), mix_strategy(Dim::Two)], a in 0.2f64..2.0) {
            let g = GaussPoly::new(f.dim(), a, f.coeffs().to_vec()).unwrap();
            let lhs = l2_norm_sq(&g);
            let rhs = l2_norm_sq(&exact_transform(&g));
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs());
        }

        #[test]
        fn convolution_multiplier(f in mix_strategy(Dim::One), b in 0.2f64..5.0) {
            let phi = exact_transform(&f);
            let phib = exact_transform(&convolve_gauss(&f, b).unwrap());
            for i in 0..=100 {
                let s = i as f64 * 0.1;
                let expect = (-s * s / (2.0 * b * b)).exp() * phi.eval(s);
                // relative to the coefficient scale, so zeros of φ do not blow up the ratio
                let qmax = phi.max_abs_coeff();
                let terms: f64 = (0..phi.coeffs().len()).map(|k| qmax * s.powi(2 * k as i32)).sum();
                let scale = terms * (-(phi.width() + 0.5 / (b * b)) * s * s).exp();
                prop_assert!((phib.eval(s) - expect).abs() <= 1e-12 * expect.abs().max(scale) + f64::MIN_POSITIVE);
            }
        }
    }
}
