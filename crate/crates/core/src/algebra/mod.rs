//! Exact algebra of even Gaussian-polynomial functions `e^{-a r²} Q(r²)`.
//!
//! Every operation the positivity criteria need (cosine or Hankel transform,
//! sign-weighted even derivatives, Gaussian smoothing in transform space and
//! continuation off the real axis) maps this family into itself, so the
//! criteria never see quadrature error from the function representation.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{compensated, LN_MAX};

mod basis;
mod nonneg;
mod radial;
mod transform;

pub(crate) use transform::neg_laplacian;

pub use basis::{basis_function, basis_polynomial, mix, BasisMix, BASIS_SIZE};
pub use nonneg::{is_nonneg, poly_nonneg, NegativeWitness, Nonnegativity};
pub use radial::{GaussSum, RadialFunction};
pub use transform::{convolve_gauss, derivative_2q, eigen_transform, exact_transform, DEFAULT_QMAX};

/// Ambient dimension of the transform: 1 for the Fourier-cosine pair,
/// 2 for the radial Fourier-Bessel pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Dim {
    One,
    Two,
}

impl TryFrom<u8> for Dim {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            other => Err(format!("dimension must be 1 or 2, got {other}")),
        }
    }
}

impl From<Dim> for u8 {
    fn from(d: Dim) -> u8 {
        match d {
            Dim::One => 1,
            Dim::Two => 2,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

/// Points `root·r` on the rays through the first four eighth roots of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EighthRoot {
    /// 1
    One,
    /// ω = e^{iπ/4}
    Omega,
    /// ω² = i
    I,
    /// ω³ = ω·i
    OmegaI,
}

impl EighthRoot {
    pub const ALL: [EighthRoot; 4] = [EighthRoot::One, EighthRoot::Omega, EighthRoot::I, EighthRoot::OmegaI];

    /// The root itself as a complex number.
    pub fn value(self) -> Complex64 {
        Complex64::from_polar(1.0, self.power() as f64 * std::f64::consts::FRAC_PI_4)
    }

    /// Exponent `k` in `ω^k`.
    pub fn power(self) -> u32 {
        match self {
            EighthRoot::One => 0,
            EighthRoot::Omega => 1,
            EighthRoot::I => 2,
            EighthRoot::OmegaI => 3,
        }
    }

    /// `root²`, i.e. `i^k`, exactly.
    fn square(self) -> Complex64 {
        match self {
            EighthRoot::One => Complex64::new(1.0, 0.0),
            EighthRoot::Omega => Complex64::new(0.0, 1.0),
            EighthRoot::I => Complex64::new(-1.0, 0.0),
            EighthRoot::OmegaI => Complex64::new(0.0, -1.0),
        }
    }
}

/// `e^{-a r²} Σ_k p_k r^{2k}` in dimension 1 or 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGaussPoly", into = "RawGaussPoly")]
pub struct GaussPoly {
    dim: Dim,
    a: f64,
    p: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawGaussPoly {
    dim: Dim,
    a: f64,
    p: Vec<f64>,
}

impl TryFrom<RawGaussPoly> for GaussPoly {
    type Error = Error;

    fn try_from(raw: RawGaussPoly) -> Result<Self> {
        GaussPoly::new(raw.dim, raw.a, raw.p)
    }
}

impl From<GaussPoly> for RawGaussPoly {
    fn from(g: GaussPoly) -> Self {
        RawGaussPoly { dim: g.dim, a: g.a, p: g.p }
    }
}

impl GaussPoly {
    /// Builds `e^{-a r²} Σ p_k r^{2k}`. Trailing zero coefficients are dropped;
    /// an empty or all-zero `p` is the zero function.
    pub fn new(dim: Dim, a: f64, p: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidWidth(a));
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self::from_parts(dim, a, p))
    }

    pub(crate) fn from_parts(dim: Dim, a: f64, mut p: Vec<f64>) -> Self {
        while p.last() == Some(&0.0) {
            p.pop();
        }
        Self { dim, a, p }
    }

    /// The plain Gaussian `e^{-r²/2}`, its own transform in 1D.
    pub fn unit_gaussian(dim: Dim) -> Self {
        Self::from_parts(dim, 0.5, vec![1.0])
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Gaussian width `a`.
    pub fn width(&self) -> f64 {
        self.a
    }

    /// Coefficients of `Q` in powers of `t = r²`.
    pub fn coeffs(&self) -> &[f64] {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_empty()
    }

    /// Degree of `Q` in `t`; zero for the zero function.
    pub fn degree(&self) -> usize {
        self.p.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.p.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// `f(0) = p_0`.
    pub fn at_origin(&self) -> f64 {
        self.p.first().copied().unwrap_or(0.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::from_parts(self.dim, self.a, self.p.iter().map(|x| x * c).collect())
    }

    /// Sum of two functions sharing dimension and width.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        if self.a != other.a {
            return Err(Error::WidthMismatch(self.a, other.a));
        }
        let n = self.p.len().max(other.p.len());
        let p = (0..n)
            .map(|k| self.p.get(k).copied().unwrap_or(0.0) + other.p.get(k).copied().unwrap_or(0.0))
            .collect();
        Ok(Self::from_parts(self.dim, self.a, p))
    }

    /// `Q(t)` alone.
    pub fn poly_at(&self, t: f64) -> f64 {
        compensated::horner(&self.p, t)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let t = r * r;
        (-self.a * t).exp() * self.poly_at(t)
    }

    /// `f(ir) = e^{+a r²} Q(-r²)`. Saturates to `±∞` (sign of `Q`) once the
    /// exponential leaves the representable range.
    pub fn eval_imag(&self, r: f64) -> f64 {
        let t = r * r;
        let q = self.poly_at(-t);
        let e = self.a * t;
        if e > LN_MAX {
            return if q > 0.0 {
                f64::INFINITY
            } else if q < 0.0 {
                f64::NEG_INFINITY
            } else {
                0.0
            };
        }
        e.exp() * q
    }

    /// `f(root·r)` in complex arithmetic.
    pub fn eval_complex_ray(&self, r: f64, root: EighthRoot) -> Complex64 {
        match root {
            EighthRoot::One => Complex64::new(self.eval(r), 0.0),
            EighthRoot::I => Complex64::new(self.eval_imag(r), 0.0),
            EighthRoot::Omega | EighthRoot::OmegaI => {
                let z2 = root.square() * (r * r);
                let mut q = Complex64::new(0.0, 0.0);
                for &c in self.p.iter().rev() {
                    q = q * z2 + c;
                }
                (-self.a * z2).exp() * q
            }
        }
    }

    /// `[f(0) - f(r)] / r²` without cancellation near the origin.
    pub fn origin_deficit_over_r2(&self, r: f64) -> f64 {
        let t = r * r;
        let p0 = self.at_origin();
        let p1 = self.p.get(1).copied().unwrap_or(0.0);
        if t == 0.0 {
            return self.a * p0 - p1;
        }
        let tail = if self.p.len() > 1 { compensated::horner(&self.p[1..], t) } else { 0.0 };
        p0 * (-(-self.a * t).exp_m1() / t) - (-self.a * t).exp() * tail
    }

    /// Bound on `max_r |f(r)|` from the individual terms' maxima.
    pub fn envelope_scale(&self) -> f64 {
        self.p
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 {
                    c.abs()
                } else {
                    let t = k as f64 / self.a;
                    c.abs() * (k as f64 * (t.ln() - 1.0)).exp()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Radius beyond which `|f| < rel·envelope_scale`, at least `max(10, √(40/a))`.
    pub fn decay_radius(&self, rel: f64) -> f64 {
        let scale = self.envelope_scale();
        let mut r = (40.0 / self.a).sqrt().max(10.0);
        if scale == 0.0 {
            return r;
        }
        let bound = |r: f64| {
            let t = r * r;
            self.p
                .iter()
                .enumerate()
                .map(|(k, c)| c.abs() * (k as f64 * t.ln() - self.a * t).exp())
                .sum::<f64>()
        };
        let min_t = self.degree() as f64 / self.a;
        for _ in 0..500 {
            if r * r > min_t && bound(r) < rel * scale {
                break;
            }
            r *= 1.1;
        }
        r
    }

    /// Taylor coefficients `c_m` of `f(r) = Σ c_m r^{2m}`, `m < terms`.
    pub fn taylor_coeffs(&self, terms: usize) -> Vec<f64> {
        // e^{-at} = Σ (-a)^j t^j / j!
        let mut exp_series = Vec::with_capacity(terms);
        let mut e = 1.0;
        for j in 0..terms {
            if j > 0 {
                e *= -self.a / j as f64;
            }
            exp_series.push(e);
        }
        (0..terms)
            .map(|m| {
                compensated::sum(
                    self.p.iter().take(m + 1).enumerate().map(|(k, &pk)| pk * exp_series[m - k]),
                )
            })
            .collect()
    }

    pub(crate) fn require_dim(&self, dim: Dim) -> Result<()> {
        if self.dim == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: dim, found: self.dim })
        }
    }
}

impl fmt::Display for GaussPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(-{} r^2)·(", self.a)?;
        if self.p.is_empty() {
            write!(f, "0")?;
        }
        for (k, c) in self.p.iter().enumerate() {
            if k > 0 {
                write!(f, " {} ", if *c < 0.0 { '-' } else { '+' })?;
                write!(f, "{} r^{}", c.abs(), 2 * k)?;
            } else {
                write!(f, "{c}")?;
            }
        }
        write!(f, ") [dim {}]", self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn footnote_psi() -> GaussPoly {
        GaussPoly::new(Dim::One, 0.5, vec![0.718081, -0.064879, -0.0685793, 0.0269736, 0.00119983]).unwrap()
    }

    #[test]
    fn construction_validates_and_trims() {
        assert!(GaussPoly::new(Dim::One, 0.0, vec![1.0]).is_err());
        assert!(GaussPoly::new(Dim::One, 1.0, vec![f64::NAN]).is_err());
        let g = GaussPoly::new(Dim::One, 1.0, vec![1.0, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(g.coeffs(), &[1.0, 2.0]);
        assert!(GaussPoly::new(Dim::Two, 1.0, vec![0.0]).unwrap().is_zero());
    }

    #[test]
    fn eval_examples() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        assert_relative_eq!(g.eval(1.0), (-0.5f64).exp(), max_relative = 1e-15);
        assert_relative_eq!(footnote_psi().eval(0.0), 0.718081, epsilon = 1e-12);
    }

    #[test]
    fn eval_imag_examples() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        for r in [0.0, 0.5, 2.0, 5.0] {
            assert_relative_eq!(g.eval_imag(r), (r * r / 2.0).exp(), max_relative = 1e-14);
        }
        let f = footnote_psi();
        assert_eq!(f.eval_imag(0.0), f.eval(0.0));
    }

    #[test]
    fn eval_imag_saturates() {
        let g = GaussPoly::new(Dim::One, 0.5, vec![1.0, -1.0]).unwrap();
        assert_eq!(g.eval_imag(100.0), f64::INFINITY);
        assert_eq!(g.scale(-1.0).eval_imag(100.0), f64::NEG_INFINITY);
    }

    #[test]
    fn complex_ray_consistency() {
        let f = footnote_psi();
        for r in [0.0, 0.7, 1.9] {
            let one = f.eval_complex_ray(r, EighthRoot::One);
            assert_eq!(one.re, f.eval(r));
            let i = f.eval_complex_ray(r, EighthRoot::I);
            assert_eq!(i.re, f.eval_imag(r));
            assert_eq!(i.im, 0.0);
            // generic path agrees with the real shortcuts
            let z = EighthRoot::I.value() * r;
            let direct = (-f.a * z * z).exp() * {
                let mut q = Complex64::new(0.0, 0.0);
                for &c in f.p.iter().rev() {
                    q = q * z * z + c;
                }
                q
            };
            assert_relative_eq!(direct.re, i.re, max_relative = 1e-12, epsilon = 1e-14);
        }
    }

    #[test]
    fn four_ray_sum_is_real_for_unit_gaussian() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        let s: Complex64 = EighthRoot::ALL.iter().map(|&w| g.eval_complex_ray(1.0, w)).sum();
        assert!(s.im.abs() <= 1e-10 * s.re.abs());
    }

    #[test]
    fn origin_deficit_matches_naive_away_from_zero() {
        let f = footnote_psi();
        for r in [0.3, 1.0, 2.5] {
            let naive = (f.eval(0.0) - f.eval(r)) / (r * r);
            assert_relative_eq!(f.origin_deficit_over_r2(r), naive, max_relative = 1e-12);
        }
        // limit is -f''(0)/2 = a p0 - p1
        assert_relative_eq!(f.origin_deficit_over_r2(0.0), 0.5 * 0.718081 + 0.064879, epsilon = 1e-15);
        assert_relative_eq!(f.origin_deficit_over_r2(1e-9), f.origin_deficit_over_r2(0.0), max_relative = 1e-12);
    }

    #[test]
    fn taylor_coefficients_of_gaussian() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        let c = g.taylor_coeffs(4);
        assert_relative_eq!(c[0], 1.0);
        assert_relative_eq!(c[1], -0.5);
        assert_relative_eq!(c[2], 0.125);
        assert_relative_eq!(c[3], -1.0 / 48.0);
    }

    #[test]
    fn decay_radius_covers_high_degree() {
        let f = GaussPoly::new(Dim::One, 1.0 / 52.0, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1e-12]).unwrap();
        let r = f.decay_radius(1e-14);
        assert!(f.eval(r).abs() < 1e-14 * f.envelope_scale());
    }

    #[test]
    fn deserialization_validates() {
        let raw: RawGaussPoly = GaussPoly::unit_gaussian(Dim::Two).into();
        assert!(GaussPoly::try_from(raw).is_ok());
        let bad = RawGaussPoly { dim: Dim::One, a: -1.0, p: vec![1.0] };
        assert!(GaussPoly::try_from(bad).is_err());
    }
}
