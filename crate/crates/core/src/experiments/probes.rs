//! Single-function, single-associate checks returning an optional witness.

use crate::algebra::{exact_transform, is_nonneg, GaussPoly};
use crate::analytic::{cosh_cos_bounds, jensen_bound, BoundReport};
use crate::criteria::{maximality_grid, maximality_test, AssociateTag, Witness};
use crate::error::Result;
use crate::moments::{moment_report, MomentMethod, MomentReport};
use crate::numeric::RGrid;
use crate::toeplitz::first_violation;

pub(crate) fn ground_truth(f: &GaussPoly) -> bool {
    is_nonneg(&exact_transform(f)).nonneg
}

/// `g(0) > 0` and no point of the maximality grid above `g(0)`.
pub(crate) fn positive_max(g: &GaussPoly, tag: AssociateTag, points: usize) -> Result<Option<Witness>> {
    let g0 = g.at_origin();
    if !(g0 > 0.0) {
        return Ok(Some(Witness { tag, r: 0.0, margin: g0 }));
    }
    let v = maximality_test(g, &maximality_grid(g, points))?;
    Ok(v.witness.map(|w| Witness { tag, ..w }))
}

pub(crate) fn toeplitz(g: &GaussPoly, tag: AssociateTag, n: usize, grid: &RGrid) -> Result<Option<Witness>> {
    Ok(first_violation(g, n, grid)?.map(|(r, margin)| Witness { tag, r, margin }))
}

fn bound_hit(rep: &BoundReport, tag: AssociateTag) -> Option<Witness> {
    let r = rep.first_violation?;
    Some(Witness { tag, r, margin: rep.violation_margin().unwrap_or(f64::NEG_INFINITY) })
}

/// Cosh (1D) or `I₀` (2D) bound with `⟨s⟩` from the r-space formula; the
/// moments come back for reuse.
pub(crate) fn jensen(g: &GaussPoly, tag: AssociateTag, grid: &RGrid) -> Result<(Option<Witness>, MomentReport)> {
    let m = moment_report(g, MomentMethod::RSpaceFormula)?;
    let rep = jensen_bound(g, m.mean_s, grid)?;
    Ok((bound_hit(&rep, tag), m))
}

/// Negative first moment, with the checklist's tolerance.
pub(crate) fn moment_sign(m: &MomentReport, tag: AssociateTag) -> Option<Witness> {
    (m.mu1 < -1e-10 * m.mu0.abs()).then_some(Witness { tag, r: 0.0, margin: m.mu1 })
}

pub(crate) fn cosh_cos(g: &GaussPoly, tag: AssociateTag, mean_s: f64, grid: &RGrid) -> Result<Option<Witness>> {
    let (plus, minus) = cosh_cos_bounds(g, mean_s, grid)?;
    Ok(bound_hit(&plus, tag).or_else(|| bound_hit(&minus, tag)))
}
