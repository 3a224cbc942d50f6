//! Dimension-2 kernels: `J₀`, `I₀`, the Hankel transform, the radial
//! Laplacian and Gaussian smoothing in the Fourier-Bessel picture.

use serde::{Deserialize, Serialize};

use crate::algebra::{convolve_gauss, exact_transform, Dim, GaussPoly};
use crate::error::Result;
use crate::numeric::compensated::{two_prod, DoubleDouble};
use crate::numeric::LN_MAX;

/// Series below this argument, asymptotic expansion above.
const SPLIT: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselKind {
    J0,
    I0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselMethod {
    Series,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselEval {
    pub kind: BesselKind,
    pub argument: f64,
    pub value: f64,
    pub method: BesselMethod,
}

impl BesselEval {
    pub fn new(kind: BesselKind, x: f64) -> Self {
        let method = if x.abs() < SPLIT { BesselMethod::Series } else { BesselMethod::Asymptotic };
        let value = match kind {
            BesselKind::J0 => bessel_j0(x),
            BesselKind::I0 => bessel_i0(x),
        };
        Self { kind, argument: x, value, method }
    }
}

/// Coefficients `a_k = ((2k−1)!!)² / (k! 8^k)` of the large-argument
/// expansions of `J₀` and `I₀`, up to the smallest term at `x`.
fn asymptotic_terms(x: f64, alternate: bool) -> impl Iterator<Item = (usize, f64)> {
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    (0..).map_while(move |k: usize| {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= odd * odd / (k as f64 * 8.0 * x);
        }
        if a.abs() >= last || a.abs() < 1e-18 {
            return None;
        }
        last = a.abs();
        let sign = if alternate && (k / 2) % 2 == 1 { -1.0 } else { 1.0 };
        Some((k, sign * a))
    })
}

/// `J₀(x)`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < SPLIT {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

/// The alternating series in double-double: terms reach ~1e5 near the split
/// while the result is ~1e-2.
fn j0_series(x: f64) -> f64 {
    let (h, l) = two_prod(x, x);
    let q = DoubleDouble { hi: h * 0.25, lo: l * 0.25 }.neg();
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = term;
    for k in 1..80 {
        let kk = (k * k) as f64;
        term = term.mul(q).div_f64(kk);
        sum = sum.add(term);
        if term.hi.abs() < 1e-34 * sum.hi.abs().max(1e-300) {
            break;
        }
    }
    sum.to_f64()
}

/// `√(2/πx) [P cos χ + Q sin χ]`, `χ = x − π/4`, `Q = 1/(8x) − …`.
fn j0_asymptotic(x: f64) -> f64 {
    let (mut p, mut q) = (0.0, 0.0);
    for (k, a) in asymptotic_terms(x, true) {
        if k % 2 == 0 {
            p += a;
        } else {
            q += a;
        }
    }
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() + q * chi.sin())
}

/// `e^{-|x|} I₀(x)`, finite for every finite `x`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x < SPLIT {
        series_i0(x) * (-x).exp()
    } else {
        let s: f64 = asymptotic_terms(x, false).map(|(_, a)| a).sum();
        s / (2.0 * std::f64::consts::PI * x).sqrt()
    }
}

/// `I₀(x) = J₀(ix)`, saturating to `+∞` beyond the exponent range.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x < SPLIT {
        return series_i0(x);
    }
    let log = x + bessel_i0_scaled(x).ln();
    if log > LN_MAX {
        f64::INFINITY
    } else {
        bessel_i0_scaled(x) * x.exp()
    }
}

fn series_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..100 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `∫₀^∞ x J₀(kx) f(x) dx` in closed form.
pub fn hankel_transform(f: &GaussPoly) -> Result<GaussPoly> {
    f.require_dim(Dim::Two)?;
    Ok(exact_transform(f))
}

/// `𝒪 = −(1/x) d/dx (x d/dx)`, a `k²` multiplier in transform space.
pub fn radial_laplacian(f: &GaussPoly) -> Result<GaussPoly> {
    f.require_dim(Dim::Two)?;
    Ok(crate::algebra::neg_laplacian(f))
}

/// The function whose Hankel transform is `e^{-k²/(2b²)}` times that of `f`.
pub fn convolve_gauss_2d(f: &GaussPoly, b: f64) -> Result<GaussPoly> {
    f.require_dim(Dim::Two)?;
    convolve_gauss(f, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_function, mix, BasisMix, BASIS_SIZE};
    use crate::numeric::quadrature::integrate;
    use approx::assert_relative_eq;

    // reference values at 30 digits
    const J0_REF: [(f64, f64); 9] = [
        (0.5, 0.938_469_807_240_812_9),
        (1.0, 0.765_197_686_557_966_6),
        (5.0, -0.177_596_771_314_338_3),
        (10.0, -0.245_935_764_451_348_34),
        (14.9, 0.006_391_544_890_852_906_8),
        (15.1, -0.034_561_851_455_564_956),
        (20.0, 0.167_024_664_340_583_15),
        (40.0, 0.007_366_890_584_237_29),
        (100.0, 0.019_985_850_304_223_122),
    ];
    const I0_REF: [(f64, f64); 8] = [
        (0.5, 1.063_483_370_741_323_5),
        (1.0, 1.266_065_877_752_008_4),
        (5.0, 27.239_871_823_604_447),
        (10.0, 2_815.716_628_466_254_4),
        (14.9, 308_375.578_687_439_2),
        (15.1, 374_103.411_190_409),
        (20.0, 43_558_282.559_553_53),
        (100.0, 1.073_751_707_131_073_8e42),
    ];

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert_eq!(bessel_i0(0.0), 1.0);
    }

    #[test]
    fn j0_reference() {
        for (x, v) in J0_REF {
            assert_relative_eq!(bessel_j0(x), v, max_relative = 1e-12);
        }
    }

    #[test]
    fn i0_reference() {
        for (x, v) in I0_REF {
            assert_relative_eq!(bessel_i0(x), v, max_relative = 1e-12);
        }
        assert_relative_eq!(bessel_i0_scaled(40.0), 0.063_278_279_875_235_33, max_relative = 1e-12);
    }

    #[test]
    fn i0_overflow_sentinel_and_monotone() {
        assert_eq!(bessel_i0(800.0), f64::INFINITY);
        assert!(bessel_i0_scaled(800.0).is_finite());
        let mut prev = 0.0;
        for i in 0..=3000 {
            let v = bessel_i0(i as f64 * 0.01);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn i0_series_interval_bound() {
        // partial sums bracket I₀(1): S_n < I₀(1) < S_n + 2·t_{n+1}
        let mut t = 1.0;
        let mut s = 1.0;
        for k in 1..12 {
            t *= 0.25 / (k * k) as f64;
            s += t;
        }
        let next = t * 0.25 / 144.0;
        let v = bessel_i0(1.0);
        assert!(v >= s - 1e-16 && v <= s + 2.0 * next + 1e-16);
        assert!((v - 1.266066).abs() < 1e-6);
    }

    #[test]
    fn first_zero_of_j0() {
        let (mut lo, mut hi) = (2.0, 3.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if bessel_j0(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_773).abs() < 1e-9);
    }

    #[test]
    fn branches_agree_near_split() {
        for x in [14.0, 15.0, 16.0] {
            let (s, a) = (j0_series(x), j0_asymptotic(x));
            assert!((s - a).abs() < 1e-13, "x={x}: {s} vs {a}");
        }
        assert_relative_eq!(bessel_i0_scaled(SPLIT - 1e-12), bessel_i0_scaled(SPLIT), max_relative = 1e-12);
    }

    #[test]
    fn hankel_sign_pattern() {
        for j in 0..BASIS_SIZE {
            let f = basis_function(Dim::Two, j).unwrap();
            let phi = hankel_transform(&f).unwrap();
            let sign = BasisMix::eigenvalue(j);
            for (x, y) in phi.coeffs().iter().zip(f.coeffs()) {
                assert!((x - sign * y).abs() < 1e-13 * f.max_abs_coeff());
            }
        }
        assert!(hankel_transform(&GaussPoly::unit_gaussian(Dim::One)).is_err());
    }

    #[test]
    fn hankel_against_quadrature() {
        let f = mix(&BasisMix::new(Dim::Two, vec![0.3, -0.2, 0.5, 0.1, -0.4]).unwrap()).unwrap();
        let phi = hankel_transform(&f).unwrap();
        for k in [0.0, 0.8, 2.1] {
            let q = integrate(|x| x * bessel_j0(k * x) * f.eval(x), 0.0, 20.0, 1e-14, 16).unwrap();
            assert!((q - phi.eval(k)).abs() < 1e-11);
        }
    }

    #[test]
    fn laplacian_examples() {
        let g = basis_function(Dim::Two, 0).unwrap();
        let l = radial_laplacian(&g).unwrap();
        let s2 = std::f64::consts::SQRT_2;
        assert_relative_eq!(l.coeffs()[0], 2.0 * s2);
        assert_relative_eq!(l.coeffs()[1], -s2);
        for j in 0..BASIS_SIZE {
            let f = basis_function(Dim::Two, j).unwrap();
            let lhs = hankel_transform(&radial_laplacian(&f).unwrap()).unwrap();
            let phi = hankel_transform(&f).unwrap();
            for (k, c) in lhs.coeffs().iter().enumerate() {
                let expect = if k == 0 { 0.0 } else { phi.coeffs()[k - 1] };
                assert!((c - expect).abs() < 1e-12 * lhs.max_abs_coeff());
            }
        }
    }

    #[test]
    fn laplacian_matches_finite_difference() {
        let f = mix(&BasisMix::new(Dim::Two, vec![0.3, -0.2, 0.5, 0.1, -0.4]).unwrap()).unwrap();
        let l = radial_laplacian(&f).unwrap();
        let h = 1e-4;
        for x in [0.5, 1.3, 2.2] {
            let d2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
            let d1 = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((l.eval(x) + d2 + d1 / x).abs() < 1e-6);
        }
    }

    #[test]
    fn convolution_2d_closed_form_and_limit() {
        let g = basis_function(Dim::Two, 0).unwrap();
        let gb = convolve_gauss_2d(&g, 1.0).unwrap();
        // transform √2 e^{-k²} → back: √2/2 · e^{-x²/4}
        assert_relative_eq!(gb.width(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(gb.coeffs()[0], std::f64::consts::SQRT_2 / 2.0, max_relative = 1e-14);
        let wide = convolve_gauss_2d(&g, 100.0).unwrap();
        for i in 0..=500 {
            let x = i as f64 * 0.01;
            assert!((wide.eval(x) - g.eval(x)).abs() < 1e-3);
        }
    }

    #[test]
    fn convolution_2d_against_real_space_kernel() {
        // ψ_b(x) = b² ∫ x' I₀(b² x x') e^{-b²(x²+x'²)/2} ψ(x') dx', I₀ scaled to avoid overflow
        let mixes = [vec![0.4, -0.3, 0.8, 0.1, -0.3], vec![0.9, 0.1, -0.2, 0.3, 0.2], vec![0.1, 0.6, 0.5, -0.5, 0.3]];
        for c in mixes {
            let f = mix(&BasisMix::new(Dim::Two, c).unwrap().normalize()).unwrap();
            let b = 1.0;
            let fb = convolve_gauss_2d(&f, b).unwrap();
            for x in [0.0, 0.6, 1.7, 3.2, 5.0] {
                let q = integrate(
                    |u| {
                        let z = b * b * x * u;
                        b * b * u * bessel_i0_scaled(z) * (-(b * b) * (x - u) * (x - u) / 2.0).exp() * f.eval(u)
                    },
                    0.0,
                    25.0,
                    1e-14,
                    32,
                )
                .unwrap();
                assert!((q - fb.eval(x)).abs() < 1e-7, "x={x}: {q} vs {}", fb.eval(x));
            }
        }
    }
}
