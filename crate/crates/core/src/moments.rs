//! Moments of the transform computed without the transform.
//!
//! `μ₀ = ∫ φ dμ` and the even moments follow from `ψ_{2q}(0)`; the first odd
//! moment from the r-space integral `∫₀^∞ [ψ(0) − ψ(r)]/r² dr`. Closed forms
//! over the exact transform serve as an independent oracle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{derivative_2q, Dim, GaussPoly, RadialFunction};
use crate::error::Result;
use crate::numeric::quadrature::integrate;
use crate::numeric::{factorial, gamma_half_integer};

/// Relative size below which the integrand tail is dropped.
const TAIL_REL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    RSpaceFormula,
    ClosedForm,
    QuadratureOnPhi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mu0: f64,
    pub mu1: f64,
    /// `μ₁/μ₀`: `⟨s⟩` in 1D, `⟨k⟩` in 2D.
    pub mean_s: f64,
    pub method: MomentMethod,
}

impl MomentReport {
    /// A negative first moment already proves the transform is not nonnegative.
    pub fn negative_mu1(&self) -> bool {
        self.mu1 < 0.0
    }
}

fn mu0_factor(dim: Dim) -> f64 {
    match dim {
        Dim::One => (PI / 2.0).sqrt(),
        Dim::Two => 1.0,
    }
}

/// `∫ φ dμ`: `√(π/2) ψ(0)` in 1D, `ψ(0)` in 2D.
pub fn mu0<F: RadialFunction + ?Sized>(f: &F) -> f64 {
    mu0_factor(f.dim()) * f.at_origin()
}

/// First odd moment from `∫₀^∞ [ψ(0) − ψ(r)]/r² dr`, times `√(2/π)` in 1D.
///
/// Integrated on `[0, R]` with `R ≥ max(10, √(40/a))` grown until the function
/// is below `1e-14` of its envelope; beyond `R` only `ψ(0)/R` remains.
pub fn mu1_r_space<F: RadialFunction + ?Sized>(f: &F) -> Result<f64> {
    let big_r = f.decay_radius(TAIL_REL);
    let scale = f.at_origin().abs().max(f.envelope_scale());
    let panels = (big_r / 2.0).ceil().max(4.0) as usize;
    let body = integrate(|r| f.origin_deficit_over_r2(r), 0.0, big_r, 1e-15 * scale, panels)?;
    let total = body + f.at_origin() / big_r;
    Ok(match f.dim() {
        Dim::One => (2.0 / PI).sqrt() * total,
        Dim::Two => total,
    })
}

/// First odd moment from the exact transform, term by term:
/// `∫₀^∞ s^{2k+1} e^{-cs²} ds = k!/(2c^{k+1})` (1D),
/// `∫₀^∞ k^{2m+2} e^{-ck²} dk = Γ(m+3/2)/(2c^{m+3/2})` (2D).
pub fn mu1_closed_form<F: RadialFunction + ?Sized>(f: &F) -> f64 {
    let dim = f.dim();
    f.transform_terms()
        .iter()
        .map(|phi| {
            let c = phi.width();
            phi.coeffs()
                .iter()
                .enumerate()
                .map(|(k, q)| match dim {
                    Dim::One => q * factorial(k) / (2.0 * c.powi(k as i32 + 1)),
                    Dim::Two => q * gamma_half_integer(k + 1) / (2.0 * c.powf(k as f64 + 1.5)),
                })
                .sum::<f64>()
        })
        .sum()
}

/// First odd moment by numerical quadrature of the exact transform.
pub fn mu1_quadrature_on_phi<F: RadialFunction + ?Sized>(f: &F) -> Result<f64> {
    let mut total = 0.0;
    for phi in f.transform_terms() {
        let hi = phi.decay_radius(TAIL_REL);
        let weight = |s: f64| match f.dim() {
            Dim::One => s,
            Dim::Two => s * s,
        };
        let scale = phi.envelope_scale().max(f64::MIN_POSITIVE);
        total += integrate(|s| weight(s) * phi.eval(s), 0.0, hi, 1e-15 * scale, 16)?;
    }
    Ok(total)
}

/// Even moment `∫ s^{2q} φ dμ = (μ₀ factor)·ψ_{2q}(0)`.
pub fn mu_even(f: &GaussPoly, q: usize) -> Result<f64> {
    Ok(mu0_factor(f.dim()) * derivative_2q(f, q)?.at_origin())
}

/// Even moment from the exact transform:
/// `Σ q_k Γ(k+q+½)/(2c^{k+q+½})` (1D), `Σ q_m (m+q)!/(2c^{m+q+1})` (2D).
pub fn mu_even_closed_form(f: &GaussPoly, q: usize) -> f64 {
    let phi = crate::algebra::exact_transform(f);
    let c = phi.width();
    phi.coeffs()
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let m = k + q;
            match f.dim() {
                Dim::One => p * gamma_half_integer(m) / (2.0 * c.powf(m as f64 + 0.5)),
                Dim::Two => p * factorial(m) / (2.0 * c.powi(m as i32 + 1)),
            }
        })
        .sum()
}

/// `μ₀`, `μ₁` and `⟨s⟩` by the chosen method.
pub fn moment_report<F: RadialFunction + ?Sized>(f: &F, method: MomentMethod) -> Result<MomentReport> {
    let mu0 = mu0(f);
    let mu1 = match method {
        MomentMethod::RSpaceFormula => mu1_r_space(f)?,
        MomentMethod::ClosedForm => mu1_closed_form(f),
        MomentMethod::QuadratureOnPhi => mu1_quadrature_on_phi(f)?,
    };
    Ok(MomentReport { mu0, mu1, mean_s: mu1 / mu0, method })
}

/// `⟨s⟩` per associate through the r-space formula. A quadrature failure is
/// kept on its own entry.
pub fn mean_s_per_associate(
    set: &crate::criteria::AssociateSet,
) -> Vec<(crate::criteria::AssociateTag, Result<MomentReport>)> {
    set.entries()
        .iter()
        .map(|(tag, g)| (*tag, moment_report(g, MomentMethod::RSpaceFormula)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_function, convolve_gauss, mix, BasisMix, GaussSum};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn footnote_psi() -> GaussPoly {
        GaussPoly::new(Dim::One, 0.5, vec![0.718081, -0.064879, -0.0685793, 0.0269736, 0.00119983]).unwrap()
    }

    #[test]
    fn unit_gaussian_moments() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        assert_relative_eq!(mu1_r_space(&g).unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(mu1_closed_form(&g), 1.0, max_relative = 1e-14);
        assert_relative_eq!(mu_even(&g, 0).unwrap(), (PI / 2.0).sqrt());
        assert_relative_eq!(mu_even(&g, 1).unwrap(), (PI / 2.0).sqrt());
        let r = moment_report(&g, MomentMethod::RSpaceFormula).unwrap();
        assert_relative_eq!(r.mean_s, (2.0 / PI).sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn footnote_mean() {
        let r = moment_report(&footnote_psi(), MomentMethod::RSpaceFormula).unwrap();
        assert!((r.mean_s - 0.836263).abs() < 1e-4, "{}", r.mean_s);
        let c = mu1_closed_form(&footnote_psi());
        assert!((r.mu1 - c).abs() <= 1e-8 * c.abs());
    }

    #[test]
    fn xi2_has_negative_first_moment() {
        let x2 = basis_function(Dim::One, 1).unwrap();
        assert!(mu1_closed_form(&x2) < 0.0);
        assert!(mu1_r_space(&x2).unwrap() < 0.0);
    }

    #[test]
    fn two_d_gaussian() {
        let g = basis_function(Dim::Two, 0).unwrap();
        assert_relative_eq!(mu1_closed_form(&g), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(mu1_r_space(&g).unwrap(), PI.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(mu0(&g), std::f64::consts::SQRT_2);
    }

    #[test]
    fn three_methods_agree() {
        let f = mix(&BasisMix::new(Dim::One, vec![0.5, -0.1, 0.3, 0.2, 0.05]).unwrap()).unwrap();
        for h in [f.clone(), convolve_gauss(&f, 0.2).unwrap()] {
            let a = moment_report(&h, MomentMethod::RSpaceFormula).unwrap().mu1;
            let b = moment_report(&h, MomentMethod::ClosedForm).unwrap().mu1;
            let c = moment_report(&h, MomentMethod::QuadratureOnPhi).unwrap().mu1;
            assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()));
            assert!((c - b).abs() <= 1e-8 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn formula_parallelism_between_dimensions() {
        // identical coefficient vectors: the 1D value is √(2/π) times the 2D value
        for p in [vec![1.0], vec![0.3, -0.2, 0.05], vec![0.7, 0.1, -0.1, 0.01]] {
            let f1 = GaussPoly::new(Dim::One, 0.6, p.clone()).unwrap();
            let f2 = GaussPoly::new(Dim::Two, 0.6, p).unwrap();
            let (m1, m2) = (mu1_r_space(&f1).unwrap(), mu1_r_space(&f2).unwrap());
            assert_relative_eq!(m1, (2.0 / PI).sqrt() * m2, max_relative = 1e-13);
        }
    }

    #[test]
    fn complement_by_linearity() {
        let f = footnote_psi();
        let fb = convolve_gauss(&f, 1.0).unwrap();
        let c = GaussSum::complement(&f, &[(0.5, &fb)]).unwrap();
        let expect = mu1_closed_form(&f) - 0.5 * mu1_closed_form(&fb);
        assert_relative_eq!(mu1_closed_form(&c), expect, max_relative = 1e-13);
        assert!((mu1_r_space(&c).unwrap() - expect).abs() <= 1e-8 * (1.0 + expect.abs()));
    }

    proptest! {
        #[test]
        fn r_space_matches_closed_form(
            c in proptest::collection::vec(-1.0f64..1.0, 5),
            two_d in any::<bool>(),
            b in prop_oneof![Just(None), (0.2f64..5.0).prop_map(Some)],
        ) {
            prop_assume!(c.iter().any(|x| x.abs() > 1e-3));
            let dim = if two_d { Dim::Two } else { Dim::One };
            let mut f = mix(&BasisMix::new(dim, c).unwrap().normalize()).unwrap();
            if let Some(b) = b {
                f = convolve_gauss(&f, b).unwrap();
            }
            for q in 0..=4 {
                let g = derivative_2q(&f, q).unwrap();
                let (x, y) = (mu1_r_space(&g).unwrap(), mu1_closed_form(&g));
                prop_assert!((x - y).abs() <= 1e-8 * (1.0 + y.abs()), "q={} {} vs {}", q, x, y);
                let (e, ec) = (mu_even(&f, q).unwrap(), mu_even_closed_form(&f, q));
                prop_assert!((e - ec).abs() <= 1e-10 * ec.abs().max(derivative_2q(&f, q).unwrap().max_abs_coeff()));
            }
        }
    }
}
