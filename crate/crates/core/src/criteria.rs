//! The necessary-condition checklist: associate families and uniform verdicts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{convolve_gauss, derivative_2q, Dim, GaussPoly, DEFAULT_QMAX};
use crate::analytic::{cosh_cos_bounds, jensen_bound, multicomponent_bound, omega8_bounds, BoundReport};
use crate::error::{Error, Result};
use crate::moments::{moment_report, mu_even, MomentMethod};
use crate::numeric::RGrid;
use crate::toeplitz::toeplitz_suite;

/// Which positivity-preserving image of `ψ` an associate is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociateTag {
    Base,
    D2q(u8),
    Conv(f64),
    ConvD2q(f64, u8),
}

impl fmt::Display for AssociateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssociateTag::Base => write!(f, "base"),
            AssociateTag::D2q(q) => write!(f, "d2q({q})"),
            AssociateTag::Conv(b) => write!(f, "conv({b})"),
            AssociateTag::ConvD2q(b, q) => write!(f, "conv_d2q({b},{q})"),
        }
    }
}

impl AssociateTag {
    /// Derivative order `q` (0 for `ψ` and `ψ_b`).
    pub fn q(&self) -> u8 {
        match self {
            AssociateTag::Base | AssociateTag::Conv(_) => 0,
            AssociateTag::D2q(q) | AssociateTag::ConvD2q(_, q) => *q,
        }
    }

    /// Convolution width, if any.
    pub fn b(&self) -> Option<f64> {
        match self {
            AssociateTag::Conv(b) | AssociateTag::ConvD2q(b, _) => Some(*b),
            _ => None,
        }
    }
}

/// `{ψ, ψ_{2q}, ψ_b, ψ_{b,2q}}`: images of one `ψ` whose transforms are
/// nonnegative whenever `φ` is.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociateSet {
    entries: Vec<(AssociateTag, GaussPoly)>,
    widths: Vec<f64>,
    qmax: usize,
}

impl AssociateSet {
    pub fn entries(&self) -> &[(AssociateTag, GaussPoly)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> Dim {
        self.entries[0].1.dim()
    }

    pub fn base(&self) -> &GaussPoly {
        &self.entries[0].1
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    pub fn get(&self, tag: AssociateTag) -> Option<&GaussPoly> {
        self.entries.iter().find(|(t, _)| *t == tag).map(|(_, g)| g)
    }

    /// The entries whose tag satisfies `keep`, in the original order.
    pub fn subset(&self, keep: impl Fn(&AssociateTag) -> bool) -> AssociateSet {
        AssociateSet {
            entries: self.entries.iter().filter(|(t, _)| keep(t)).cloned().collect(),
            widths: self.widths.clone(),
            qmax: self.qmax,
        }
    }

    /// Wraps explicitly given functions (for ad-hoc families).
    pub fn from_entries(entries: Vec<(AssociateTag, GaussPoly)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidGrid("associate set is empty".into()));
        }
        let widths = entries.iter().filter_map(|(t, _)| t.b()).fold(Vec::new(), |mut v, b| {
            if !v.contains(&b) {
                v.push(b);
            }
            v
        });
        let qmax = entries.iter().map(|(t, _)| t.q() as usize).max().unwrap_or(0);
        Ok(Self { entries, widths, qmax })
    }
}

/// `ψ`, its derivatives up to `qmax`, and for each width `b` the smoothed
/// `ψ_b` with its derivatives: `(1 + qmax)(1 + #widths)` entries.
pub fn build_associates(f: &GaussPoly, widths: &[f64], qmax: usize) -> Result<AssociateSet> {
    let mut entries = vec![(AssociateTag::Base, f.clone())];
    let mut g = f.clone();
    for q in 1..=qmax {
        g = derivative_2q(&g, 1)?;
        entries.push((AssociateTag::D2q(q as u8), g.clone()));
    }
    for &b in widths {
        let fb = convolve_gauss(f, b)?;
        entries.push((AssociateTag::Conv(b), fb.clone()));
        let mut g = fb;
        for q in 1..=qmax {
            g = derivative_2q(&g, 1)?;
            entries.push((AssociateTag::ConvD2q(b, q as u8), g.clone()));
        }
    }
    Ok(AssociateSet { entries, widths: widths.to_vec(), qmax })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub tag: AssociateTag,
    pub r: f64,
    /// Signed amount by which the condition fails (negative).
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestVerdict {
    pub criterion: String,
    pub detected: bool,
    pub witness: Option<Witness>,
    /// Function evaluations (or scanned points) spent.
    pub cost: u64,
}

impl TestVerdict {
    pub fn detected(criterion: impl Into<String>, witness: Witness, cost: u64) -> Self {
        Self { criterion: criterion.into(), detected: true, witness: Some(witness), cost }
    }

    pub fn clean(criterion: impl Into<String>, cost: u64) -> Self {
        Self { criterion: criterion.into(), detected: false, witness: None, cost }
    }
}

/// The checklist items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Every associate peaks at the origin.
    Maximality,
    /// `ψ_{2q}(0) > 0` for `q ≤ qmax`.
    EvenMoments,
    /// `μ₁ ≥ 0` for every associate.
    OddMomentSign,
    /// Order-`n` Toeplitz spectra.
    Toeplitz(usize),
    /// 1D Jensen bound.
    Cosh,
    /// 2D Jensen bound.
    I0,
    /// The `cos ± cosh` pair.
    CoshCos,
    /// The four eighth-root combinations.
    Omega8,
    /// Split into smoothed components plus complement.
    Multicomponent,
}

impl Criterion {
    /// Position in the cheap-to-expensive execution order.
    fn rank(&self) -> usize {
        match self {
            Criterion::Maximality => 0,
            Criterion::EvenMoments => 1,
            Criterion::OddMomentSign => 2,
            Criterion::Toeplitz(n) => 10 + n,
            Criterion::Cosh | Criterion::I0 => 100,
            Criterion::CoshCos => 101,
            Criterion::Omega8 => 102,
            Criterion::Multicomponent => 103,
        }
    }

    pub fn id(&self) -> String {
        self.to_string()
    }

    /// The analytic bounds available in a dimension plus the dimension-free items.
    pub fn defaults_for(dim: Dim, orders: &[usize]) -> Vec<Criterion> {
        let mut v = vec![Criterion::Maximality, Criterion::EvenMoments, Criterion::OddMomentSign];
        v.extend(orders.iter().map(|&n| Criterion::Toeplitz(n)));
        match dim {
            Dim::One => v.extend([Criterion::Cosh, Criterion::CoshCos, Criterion::Omega8, Criterion::Multicomponent]),
            Dim::Two => v.push(Criterion::I0),
        }
        v
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Maximality => write!(f, "maximality"),
            Criterion::EvenMoments => write!(f, "even_moments"),
            Criterion::OddMomentSign => write!(f, "odd_moment_sign"),
            Criterion::Toeplitz(n) => write!(f, "toeplitz({n})"),
            Criterion::Cosh => write!(f, "cosh"),
            Criterion::I0 => write!(f, "i0"),
            Criterion::CoshCos => write!(f, "cosh_cos"),
            Criterion::Omega8 => write!(f, "omega8"),
            Criterion::Multicomponent => write!(f, "multicomponent"),
        }
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if let Some(n) = s.strip_prefix("toeplitz(").and_then(|r| r.strip_suffix(')')) {
            let n: usize = n.parse().map_err(|_| format!("bad Toeplitz order in {s:?}"))?;
            return Ok(Criterion::Toeplitz(n));
        }
        Ok(match s {
            "maximality" => Criterion::Maximality,
            "even_moments" => Criterion::EvenMoments,
            "odd_moment_sign" => Criterion::OddMomentSign,
            "cosh" => Criterion::Cosh,
            "i0" => Criterion::I0,
            "cosh_cos" => Criterion::CoshCos,
            "omega8" => Criterion::Omega8,
            "multicomponent" => Criterion::Multicomponent,
            other => return Err(format!("unknown criterion {other:?}")),
        })
    }
}

/// Points in the default maximality scan.
pub const MAXIMALITY_POINTS: usize = 6000;

/// `MAXIMALITY_POINTS` equidistant points on `(0, √(40/a)]`.
pub fn maximality_grid(f: &GaussPoly, points: usize) -> RGrid {
    let r_max = (40.0 / f.width()).sqrt();
    let step = r_max / points as f64;
    RGrid { start: step, stop: r_max, step }
}

/// Detects `f(r) > f(0) + 1e-12·|f(0)|` on the grid; the worst grid point is
/// refined by golden-section search on its two neighbouring cells.
pub fn maximality_test(f: &GaussPoly, grid: &RGrid) -> Result<TestVerdict> {
    grid.require_positive()?;
    let f0 = f.at_origin();
    let eps = 1e-12 * f0.abs();
    let (mut worst_r, mut worst) = (grid.start, f64::NEG_INFINITY);
    for r in grid.points() {
        let v = f.eval(r);
        if v > worst {
            worst = v;
            worst_r = r;
        }
    }
    let mut cost = grid.len() as u64;
    let (lo, hi) = ((worst_r - grid.step).max(0.0), worst_r + grid.step);
    let (r_ref, v_ref, evals) = golden_max(|r| f.eval(r), lo, hi, 60);
    cost += evals;
    let (r, v) = if v_ref > worst { (r_ref, v_ref) } else { (worst_r, worst) };
    if v > f0 + eps {
        Ok(TestVerdict::detected("maximality", Witness { tag: AssociateTag::Base, r, margin: f0 - v }, cost))
    } else {
        Ok(TestVerdict::clean("maximality", cost))
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64, u64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let (r, v) = if fc > fd { (c, fc) } else { (d, fd) };
    (r, v, iters as u64 + 2)
}

/// Settings shared by every criterion of one checklist run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecklistParams {
    /// Convolution widths `b` of the associate family.
    pub widths: Vec<f64>,
    pub qmax: usize,
    pub toeplitz_grid: RGrid,
    pub imaginary_grid: RGrid,
    pub maximality_points: usize,
    /// Kernel widths and weights of the multicomponent bound.
    pub multicomponent_widths: Vec<f64>,
    pub multicomponent_weights: Vec<f64>,
    /// Stop after the first detection.
    pub early_exit: bool,
}

impl Default for ChecklistParams {
    fn default() -> Self {
        Self {
            widths: vec![1.0],
            qmax: DEFAULT_QMAX,
            toeplitz_grid: RGrid::toeplitz_default(),
            imaginary_grid: RGrid::imaginary_default(),
            maximality_points: MAXIMALITY_POINTS,
            multicomponent_widths: vec![1.0, 2.0],
            multicomponent_weights: vec![0.5, 0.5],
            early_exit: false,
        }
    }
}

fn first_bound_hit<'a>(
    id: &str,
    reports: impl IntoIterator<Item = (AssociateTag, &'a BoundReport)>,
    cost: &mut u64,
) -> Option<TestVerdict> {
    for (tag, rep) in reports {
        *cost += rep.margin_curve.len() as u64;
        if rep.negative_mu1 {
            return Some(TestVerdict::detected(id, Witness { tag, r: 0.0, margin: f64::NEG_INFINITY }, *cost));
        }
        if let Some(r) = rep.first_violation {
            let margin = rep.violation_margin().unwrap_or(f64::NEG_INFINITY);
            return Some(TestVerdict::detected(id, Witness { tag, r, margin }, *cost));
        }
    }
    None
}

/// Runs one criterion over every associate.
pub fn run_criterion(set: &AssociateSet, criterion: Criterion, params: &ChecklistParams) -> Result<TestVerdict> {
    let id = criterion.id();
    let dim = set.dim();
    let wrong_dim = || Error::CriterionDimension { criterion: id.clone(), dim };
    let mut cost = 0u64;
    match criterion {
        Criterion::Maximality => {
            for (tag, g) in set.entries() {
                let mut v = maximality_test(g, &maximality_grid(g, params.maximality_points))?;
                cost += v.cost;
                if let Some(w) = v.witness.as_mut() {
                    w.tag = *tag;
                    v.cost = cost;
                    return Ok(v);
                }
            }
            Ok(TestVerdict::clean(id, cost))
        }
        Criterion::EvenMoments => {
            for (tag, g) in set.entries().iter().filter(|(t, _)| t.q() == 0) {
                for q in 0..=set.qmax() {
                    let m = mu_even(g, q)?;
                    cost += 1;
                    if m <= 0.0 {
                        let tag = match tag {
                            AssociateTag::Conv(b) if q > 0 => AssociateTag::ConvD2q(*b, q as u8),
                            AssociateTag::Base if q > 0 => AssociateTag::D2q(q as u8),
                            t => *t,
                        };
                        return Ok(TestVerdict::detected(id, Witness { tag, r: 0.0, margin: m }, cost));
                    }
                }
            }
            Ok(TestVerdict::clean(id, cost))
        }
        Criterion::OddMomentSign => {
            for (tag, g) in set.entries() {
                let m = moment_report(g, MomentMethod::RSpaceFormula)?;
                cost += 1;
                if m.mu1 < -1e-10 * m.mu0.abs() {
                    return Ok(TestVerdict::detected(id, Witness { tag: *tag, r: 0.0, margin: m.mu1 }, cost));
                }
            }
            Ok(TestVerdict::clean(id, cost))
        }
        Criterion::Toeplitz(n) => toeplitz_suite(set, n, &params.toeplitz_grid),
        Criterion::Cosh | Criterion::I0 => {
            let expected = if criterion == Criterion::Cosh { Dim::One } else { Dim::Two };
            if dim != expected {
                return Err(wrong_dim());
            }
            for (tag, g) in set.entries() {
                let m = moment_report(g, MomentMethod::RSpaceFormula)?;
                let rep = jensen_bound(g, m.mean_s, &params.imaginary_grid)?;
                if let Some(v) = first_bound_hit(&id, [(*tag, &rep)], &mut cost) {
                    return Ok(v);
                }
            }
            Ok(TestVerdict::clean(id, cost))
        }
        Criterion::CoshCos | Criterion::Omega8 | Criterion::Multicomponent => {
            if dim != Dim::One {
                return Err(wrong_dim());
            }
            for (tag, g) in set.entries() {
                let reports: Vec<BoundReport> = match criterion {
                    Criterion::CoshCos => {
                        let s = moment_report(g, MomentMethod::RSpaceFormula)?.mean_s;
                        let (a, b) = cosh_cos_bounds(g, s, &params.imaginary_grid)?;
                        vec![a, b]
                    }
                    Criterion::Omega8 => {
                        let s = moment_report(g, MomentMethod::RSpaceFormula)?.mean_s;
                        omega8_bounds(g, s, &params.imaginary_grid)?.to_vec()
                    }
                    _ => vec![multicomponent_bound(
                        g,
                        &params.multicomponent_widths,
                        &params.multicomponent_weights,
                        &params.imaginary_grid,
                    )?],
                };
                if let Some(v) = first_bound_hit(&id, reports.iter().map(|r| (*tag, r)), &mut cost) {
                    return Ok(v);
                }
            }
            Ok(TestVerdict::clean(id, cost))
        }
    }
}

/// Runs the selected criteria on the associates of `f` in cheap-to-expensive
/// order. By default every criterion runs (full tally); with
/// `params.early_exit` the list ends at the first detection.
pub fn run_checklist(f: &GaussPoly, selection: &[Criterion], params: &ChecklistParams) -> Result<Vec<TestVerdict>> {
    let set = build_associates(f, &params.widths, params.qmax)?;
    run_checklist_on(&set, selection, params)
}

/// [`run_checklist`] on a prebuilt associate family.
pub fn run_checklist_on(set: &AssociateSet, selection: &[Criterion], params: &ChecklistParams) -> Result<Vec<TestVerdict>> {
    let mut order: Vec<Criterion> = selection.to_vec();
    order.sort_by_key(Criterion::rank);
    order.dedup();
    let mut out = Vec::with_capacity(order.len());
    for c in order {
        let v = run_criterion(set, c, params)?;
        let stop = v.detected && params.early_exit;
        out.push(v);
        if stop {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{basis_function, exact_transform, is_nonneg, mix, BasisMix};

    fn footnote_psi() -> GaussPoly {
        GaussPoly::new(Dim::One, 0.5, vec![0.718081, -0.064879, -0.0685793, 0.0269736, 0.00119983]).unwrap()
    }

    #[test]
    fn associate_family_sizes() {
        let f = footnote_psi();
        let set = build_associates(&f, &[1.0], 4).unwrap();
        assert_eq!(set.len(), 10);
        assert_eq!(set.entries()[5].0, AssociateTag::Conv(1.0));
        assert_eq!(set.entries()[9].0.to_string(), "conv_d2q(1,4)");
        let only = build_associates(&f, &[], 0).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only.entries()[0].0, AssociateTag::Base);
    }

    #[test]
    fn associates_of_positive_transform_stay_positive() {
        // even-index basis functions are self-dual, so φ = ψ here
        let f = mix(&BasisMix::new(Dim::One, vec![1.0, 0.0, 0.1]).unwrap()).unwrap();
        assert!(is_nonneg(&exact_transform(&f)).nonneg);
        for (tag, g) in build_associates(&f, &[0.5, 2.0], 4).unwrap().entries() {
            assert!(is_nonneg(&exact_transform(g)).nonneg, "{tag}");
        }
    }

    #[test]
    fn maximality_examples() {
        let g = GaussPoly::unit_gaussian(Dim::One);
        assert!(!maximality_test(&g, &maximality_grid(&g, MAXIMALITY_POINTS)).unwrap().detected);
        let x2 = basis_function(Dim::One, 1).unwrap();
        let v = maximality_test(&x2, &maximality_grid(&x2, MAXIMALITY_POINTS)).unwrap();
        assert!(v.detected);
        // maximum of e^{-t/2}(2t−1) at t = 5/2
        let w = v.witness.unwrap();
        assert!((w.r - 2.5f64.sqrt()).abs() < 1e-6, "{}", w.r);
    }

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::defaults_for(Dim::One, &[3, 5]).into_iter().chain([Criterion::I0]) {
            assert_eq!(c.to_string().parse::<Criterion>().unwrap(), c);
        }
        assert!("toeplitz(x)".parse::<Criterion>().is_err());
        assert!("nope".parse::<Criterion>().is_err());
    }

    #[test]
    fn gaussian_all_clean() {
        for dim in [Dim::One, Dim::Two] {
            let g = basis_function(dim, 0).unwrap();
            let sel = Criterion::defaults_for(dim, &[3, 5, 8]);
            let verdicts = run_checklist(&g, &sel, &ChecklistParams::default()).unwrap();
            assert_eq!(verdicts.len(), sel.len());
            assert!(verdicts.iter().all(|v| !v.detected), "{verdicts:?}");
        }
    }

    #[test]
    fn footnote_checklist() {
        let params = ChecklistParams { widths: vec![], qmax: 0, ..Default::default() };
        let sel = [Criterion::Toeplitz(4), Criterion::Cosh, Criterion::Toeplitz(3)];
        let v = run_checklist(&footnote_psi(), &sel, &params).unwrap();
        let ids: Vec<&str> = v.iter().map(|v| v.criterion.as_str()).collect();
        assert_eq!(ids, ["toeplitz(3)", "toeplitz(4)", "cosh"]);
        assert!(!v[0].detected);
        assert!(v[1].detected && v[2].detected);
        let early = run_checklist(&footnote_psi(), &sel, &ChecklistParams { early_exit: true, ..params }).unwrap();
        assert_eq!(early.len(), 2);
    }

    #[test]
    fn dimension_checks() {
        let g = basis_function(Dim::Two, 0).unwrap();
        let set = build_associates(&g, &[], 0).unwrap();
        assert!(run_criterion(&set, Criterion::Cosh, &ChecklistParams::default()).is_err());
        assert!(run_criterion(&set, Criterion::Omega8, &ChecklistParams::default()).is_err());
    }

    #[test]
    fn convolution_path_equivalence() {
        // ψ_b from convolve_gauss versus the inverse transform of e^{-s²/2b²}φ built by hand
        let f = mix(&BasisMix::new(Dim::One, vec![0.6, 0.2, -0.5, 0.4, 0.3]).unwrap().normalize()).unwrap();
        let b = 0.5;
        let phi = exact_transform(&f);
        let widened = GaussPoly::new(Dim::One, phi.width() + 0.5 / (b * b), phi.coeffs().to_vec()).unwrap();
        let by_hand = exact_transform(&widened);
        let params = ChecklistParams { widths: vec![], ..Default::default() };
        let sel = Criterion::defaults_for(Dim::One, &[3, 5]);
        let a = run_checklist(&convolve_gauss(&f, b).unwrap(), &sel, &params).unwrap();
        let c = run_checklist(&by_hand, &sel, &params).unwrap();
        let flags = |v: &[TestVerdict]| v.iter().map(|x| x.detected).collect::<Vec<_>>();
        assert_eq!(flags(&a), flags(&c));
    }
}
