//! Jensen-type lower bounds on the analytic continuation `ψ(ir)`.
//!
//! If `φ ≥ 0`, `ψ(ir)/ψ(0)` is the average of `cosh(sr)` (1D) or `I₀(kx)`
//! (2D) under the probability density `φ/μ₀`, so convexity gives
//! `ψ(ir) ≥ ψ(0)·cosh(⟨s⟩ r)` and its relatives below.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{convolve_gauss, Dim, EighthRoot, GaussPoly, GaussSum, RadialFunction};
use crate::bessel::bessel_i0;
use crate::criteria::{AssociateSet, TestVerdict, Witness};
use crate::error::{Error, Result};
use crate::moments::{moment_report, MomentMethod};
use crate::numeric::RGrid;

/// A margin below `−EPS_REL·max(1, |ψ(ir)|)` is a violation.
pub const EPS_REL: f64 = 1e-9;

/// Allowed imaginary part of a root-of-unity combination, relative to its terms.
pub const RESIDUE_REL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    Cosh,
    I0,
    /// `ψ(r) + ψ(ir) ≥ ψ(0)[cos σr + cosh σr]`
    Sum4,
    /// `ψ(r) − ψ(ir) ≤ ψ(0)[cos σr − cosh σr]`
    Diff4,
    /// The four eighth-root combinations, `k = 1..=4`.
    Omega8(u8),
    Multicomponent,
}

impl std::fmt::Display for BoundId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundId::Cosh => write!(f, "cosh"),
            BoundId::I0 => write!(f, "i0"),
            BoundId::Sum4 => write!(f, "sum4"),
            BoundId::Diff4 => write!(f, "diff4"),
            BoundId::Omega8(k) => write!(f, "omega8_{k}"),
            BoundId::Multicomponent => write!(f, "multicomponent"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_id: BoundId,
    /// `(r, lhs − rhs)` oriented so that a valid bound has a nonnegative margin.
    pub margin_curve: Vec<(f64, f64)>,
    pub first_violation: Option<f64>,
    pub mean_s_used: Vec<f64>,
    /// Some component had a negative first moment (multicomponent bound only).
    pub negative_mu1: bool,
}

impl BoundReport {
    pub fn detected(&self) -> bool {
        self.first_violation.is_some() || self.negative_mu1
    }

    /// Margin at the first violation, if any.
    pub fn violation_margin(&self) -> Option<f64> {
        let r = self.first_violation?;
        self.margin_curve.iter().find(|(x, _)| *x == r).map(|(_, m)| *m)
    }
}

/// `lhs − rhs` with the saturation conventions of `eval_imag`: an infinite
/// side dominates a finite one, and two infinities of one sign compare equal.
fn margin(lhs: f64, rhs: f64) -> f64 {
    let m = lhs - rhs;
    if m.is_nan() {
        0.0
    } else {
        m
    }
}

fn violates(margin: f64, scale: f64) -> bool {
    let tol = if scale.is_finite() { EPS_REL * scale.abs().max(1.0) } else { 0.0 };
    margin < -tol
}

/// Builds a report from `(r, margin, scale)` triples.
fn report(bound_id: BoundId, rows: Vec<(f64, f64, f64)>, mean_s_used: Vec<f64>) -> BoundReport {
    let first_violation = rows.iter().find(|(_, m, s)| violates(*m, *s)).map(|(r, _, _)| *r);
    BoundReport {
        bound_id,
        margin_curve: rows.into_iter().map(|(r, m, _)| (r, m)).collect(),
        first_violation,
        mean_s_used,
        negative_mu1: false,
    }
}

fn require_dim<F: RadialFunction + ?Sized>(f: &F, dim: Dim, id: BoundId) -> Result<()> {
    if f.dim() == dim {
        Ok(())
    } else {
        Err(Error::CriterionDimension { criterion: id.to_string(), dim: f.dim() })
    }
}

/// `ψ(ir) − ψ(0)·cosh(σr)`.
pub fn cosh_bound<F: RadialFunction + ?Sized>(f: &F, mean_s: f64, grid: &RGrid) -> Result<BoundReport> {
    require_dim(f, Dim::One, BoundId::Cosh)?;
    grid.validate()?;
    let p0 = f.at_origin();
    let rows = grid
        .points()
        .map(|r| {
            let lhs = f.eval_imag(r);
            (r, margin(lhs, p0 * (mean_s * r).cosh()), lhs)
        })
        .collect();
    Ok(report(BoundId::Cosh, rows, vec![mean_s]))
}

/// `ψ(ix) − ψ(0)·I₀(σx)`.
pub fn i0_bound<F: RadialFunction + ?Sized>(f: &F, mean_k: f64, grid: &RGrid) -> Result<BoundReport> {
    require_dim(f, Dim::Two, BoundId::I0)?;
    grid.validate()?;
    let p0 = f.at_origin();
    let rows = grid
        .points()
        .map(|x| {
            let lhs = f.eval_imag(x);
            (x, margin(lhs, p0 * bessel_i0(mean_k * x)), lhs)
        })
        .collect();
    Ok(report(BoundId::I0, rows, vec![mean_k]))
}

/// The Jensen bound of the function's own dimension.
pub fn jensen_bound<F: RadialFunction + ?Sized>(f: &F, mean_s: f64, grid: &RGrid) -> Result<BoundReport> {
    match f.dim() {
        Dim::One => cosh_bound(f, mean_s, grid),
        Dim::Two => i0_bound(f, mean_s, grid),
    }
}

/// The convex/concave pair `cos x ± cosh x`, both sides scaled by `ψ(0)`.
pub fn cosh_cos_bounds(f: &GaussPoly, mean_s: f64, grid: &RGrid) -> Result<(BoundReport, BoundReport)> {
    require_dim(f, Dim::One, BoundId::Sum4)?;
    grid.validate()?;
    let p0 = f.at_origin();
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    for r in grid.points() {
        let (re, im) = (f.eval(r), f.eval_imag(r));
        let (c, ch) = ((mean_s * r).cos(), (mean_s * r).cosh());
        plus.push((r, margin(re + im, p0 * (c + ch)), im));
        minus.push((r, margin(p0 * (c - ch), re - im), im));
    }
    Ok((report(BoundId::Sum4, plus, vec![mean_s]), report(BoundId::Diff4, minus, vec![mean_s])))
}

/// Coefficients `(c₀, c₁, c₂, c₃)` of `Σ c_k g(ω^k x)` and whether the
/// combination of `cos` is convex (`≥` bound) or concave (`≤` bound).
const OMEGA8_COMBOS: [([Complex64; 4], bool); 4] = {
    const P: Complex64 = Complex64::new(1.0, 0.0);
    const M: Complex64 = Complex64::new(-1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);
    const MI: Complex64 = Complex64::new(0.0, -1.0);
    [([P, P, P, P], true), ([P, M, P, M], true), ([P, MI, M, I], false), ([P, I, M, MI], false)]
};

/// The four eighth-root-of-unity inequalities.
pub fn omega8_bounds(f: &GaussPoly, mean_s: f64, grid: &RGrid) -> Result<[BoundReport; 4]> {
    require_dim(f, Dim::One, BoundId::Omega8(1))?;
    grid.validate()?;
    let p0 = f.at_origin();
    let mut rows: [Vec<(f64, f64, f64)>; 4] = Default::default();
    for r in grid.points() {
        let psi: Vec<Complex64> = EighthRoot::ALL.iter().map(|&w| f.eval_complex_ray(r, w)).collect();
        let cosines: Vec<Complex64> = EighthRoot::ALL.iter().map(|&w| (w.value() * (mean_s * r)).cos() * p0).collect();
        let im_scale = f.eval_imag(r);
        for (k, (coef, convex)) in OMEGA8_COMBOS.iter().enumerate() {
            let lhs: Complex64 = coef.iter().zip(&psi).map(|(c, v)| c * v).sum();
            let rhs: Complex64 = coef.iter().zip(&cosines).map(|(c, v)| c * v).sum();
            let terms: f64 = psi.iter().chain(&cosines).map(|z| z.norm()).sum();
            if terms.is_finite() {
                for z in [lhs, rhs] {
                    if z.im.abs() > RESIDUE_REL * terms.max(f64::MIN_POSITIVE) {
                        return Err(Error::ImaginaryResidue { r, residue: z.im.abs() / terms });
                    }
                }
            }
            let m = if *convex { margin(lhs.re, rhs.re) } else { margin(rhs.re, lhs.re) };
            rows[k].push((r, m, im_scale));
        }
    }
    let [a, b, c, d] = rows;
    Ok([
        report(BoundId::Omega8(1), a, vec![mean_s]),
        report(BoundId::Omega8(2), b, vec![mean_s]),
        report(BoundId::Omega8(3), c, vec![mean_s]),
        report(BoundId::Omega8(4), d, vec![mean_s]),
    ])
}

/// `ψ(ir) ≥ Σ wᵢ ψ_{bᵢ}(0) cosh(⟨s⟩_{bᵢ} r) + ψ_c(0) cosh(⟨s⟩_c r)` with the
/// complement `ψ_c = ψ − Σ wᵢ ψ_{bᵢ}`; each `⟨s⟩` from the r-space formula.
pub fn multicomponent_bound(f: &GaussPoly, widths: &[f64], weights: &[f64], grid: &RGrid) -> Result<BoundReport> {
    require_dim(f, Dim::One, BoundId::Multicomponent)?;
    grid.validate()?;
    let wsum: f64 = weights.iter().sum();
    if widths.len() != weights.len() || weights.iter().any(|&w| !(w > 0.0)) || wsum > 1.0 + 1e-15 {
        return Err(Error::InvalidWeights);
    }
    let parts: Vec<GaussPoly> = widths.iter().map(|&b| convolve_gauss(f, b)).collect::<Result<_>>()?;
    let refs: Vec<(f64, &GaussPoly)> = weights.iter().copied().zip(&parts).collect();
    let complement = GaussSum::complement(f, &refs)?;

    let mut components: Vec<(f64, f64)> = Vec::with_capacity(parts.len() + 1);
    let mut negative = false;
    for (w, g) in &refs {
        let m = moment_report(*g, MomentMethod::RSpaceFormula)?;
        negative |= m.negative_mu1();
        components.push((w * g.at_origin(), m.mean_s));
    }
    let mc = moment_report(&complement, MomentMethod::RSpaceFormula)?;
    negative |= mc.negative_mu1();
    components.push((complement.at_origin(), mc.mean_s));
    let mean_s_used = components.iter().map(|c| c.1).collect();
    if negative {
        return Ok(BoundReport {
            bound_id: BoundId::Multicomponent,
            margin_curve: Vec::new(),
            first_violation: None,
            mean_s_used,
            negative_mu1: true,
        });
    }
    let rows = grid
        .points()
        .map(|r| {
            let lhs = f.eval_imag(r);
            let rhs: f64 = components.iter().map(|(a, s)| a * (s * r).cosh()).sum();
            (r, margin(lhs, rhs), lhs)
        })
        .collect();
    Ok(report(BoundId::Multicomponent, rows, mean_s_used))
}

/// The dimension's Jensen bound on every associate, `⟨s⟩` from the r-space
/// formula. The bound is evaluated even when `⟨s⟩ < 0`; the negative moment is
/// a separate criterion. The witness is the first violating associate.
pub fn analytic_suite(set: &AssociateSet, grid: &RGrid) -> Result<TestVerdict> {
    let id = match set.dim() {
        Dim::One => "cosh",
        Dim::Two => "i0",
    };
    let mut cost = 0u64;
    for (tag, g) in set.entries() {
        let m = moment_report(g, MomentMethod::RSpaceFormula)?;
        let rep = jensen_bound(g, m.mean_s, grid)?;
        cost += rep.margin_curve.len() as u64;
        if let Some(r) = rep.first_violation {
            let margin = rep.violation_margin().unwrap_or(f64::NEG_INFINITY);
            return Ok(TestVerdict::detected(id, Witness { tag: *tag, r, margin }, cost));
        }
    }
    Ok(TestVerdict::clean(id, cost))
}
