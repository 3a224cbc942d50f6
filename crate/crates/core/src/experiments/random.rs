//! Random five-component populations.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probes;
use super::{first_hit, CensusRow, ExperimentStats};
use crate::algebra::{is_nonneg, mix, BasisMix, Dim, GaussPoly, BASIS_SIZE, DEFAULT_QMAX};
use crate::criteria::{build_associates, maximality_test, maximality_grid, AssociateTag, Witness, MAXIMALITY_POINTS};
use crate::error::{Error, Result};
use crate::numeric::RGrid;

/// Candidates drawn and screened per batch.
const CHUNK: usize = 4096;

/// Distribution of the unit coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampler {
    /// Normalized independent standard normal deviates.
    UniformSphere,
    /// Uniform hyperspherical angles: `θ₁ ∈ [0, π/2)`, `θ₂, θ₃ ∈ [0, π)`,
    /// `θ₄ ∈ [0, 2π)`, extending the three-component grid parametrization.
    HyperAngles,
}

impl Sampler {
    fn draw(self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Sampler::UniformSphere => loop {
                let v: Vec<f64> = (0..BASIS_SIZE).map(|_| rng.sample(StandardNormal)).collect();
                let norm = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
                if norm > 1e-300 {
                    break v.into_iter().map(|x| x / norm).collect();
                }
            },
            Sampler::HyperAngles => {
                let t = [
                    rng.random::<f64>() * PI / 2.0,
                    rng.random::<f64>() * PI,
                    rng.random::<f64>() * PI,
                    rng.random::<f64>() * 2.0 * PI,
                ];
                let mut c = Vec::with_capacity(BASIS_SIZE);
                let mut s = 1.0;
                for th in t {
                    c.push(s * th.cos());
                    s *= th.sin();
                }
                c.push(s);
                c
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    /// Number of φ-negative functions to collect.
    pub negatives: usize,
    /// Hard limit on candidates drawn.
    pub max_draws: usize,
    pub seed: u64,
    pub sampler: Sampler,
    /// Convolution width of the ten-associate family.
    pub b: f64,
    /// Widths of the order-3 sensitivity sweep.
    pub b_sweep: Vec<f64>,
    /// Toeplitz orders of the screened (ψ alone) campaigns.
    pub orders: Vec<usize>,
    pub toeplitz_grid: RGrid,
    pub imaginary_grid: RGrid,
    pub maximality_points: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self {
            negatives: 1000,
            max_draws: 100_000_000,
            seed: 1,
            sampler: Sampler::UniformSphere,
            b: 1.0,
            b_sweep: vec![0.2, 0.5, 1.0, 2.0, 5.0],
            orders: vec![5, 8, 9, 10],
            toeplitz_grid: RGrid::toeplitz_default(),
            imaginary_grid: RGrid::imaginary_default(),
            maximality_points: MAXIMALITY_POINTS,
        }
    }
}

impl RandomConfig {
    pub fn validate(&self) -> Result<()> {
        if self.negatives == 0 {
            return Err(Error::InvalidConfig("need at least one φ-negative sample".into()));
        }
        if self.max_draws == 0 {
            return Err(Error::InvalidConfig("max_draws must be positive".into()));
        }
        if let Some(b) = std::iter::once(&self.b).chain(&self.b_sweep).find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::InvalidConvolutionWidth(*b));
        }
        if let Some(&n) = self.orders.iter().find(|&&n| n < 2) {
            return Err(Error::ToeplitzOrder(n));
        }
        if self.maximality_points == 0 {
            return Err(Error::InvalidConfig("maximality scan needs at least one point".into()));
        }
        self.toeplitz_grid.require_positive()?;
        self.imaginary_grid.validate()
    }
}

/// Draws candidates in fixed-size batches, keeps those passing `screen`, and
/// stops at the draw that completes `cfg.negatives` φ-negative functions.
/// The outcome depends only on the seed, never on the batch size or thread count.
fn collect<S, E>(cfg: &RandomConfig, screen: S, evaluate: E) -> Result<(usize, Vec<CensusRow>)>
where
    S: Fn(&[f64]) -> Result<Option<(GaussPoly, bool)>> + Sync,
    E: Fn(&GaussPoly) -> Result<Vec<Option<Witness>>> + Sync,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut draws, mut negatives) = (0usize, 0usize);
    let mut rows = Vec::new();
    while negatives < cfg.negatives && draws < cfg.max_draws {
        let batch: Vec<Vec<f64>> = (0..CHUNK.min(cfg.max_draws - draws)).map(|_| cfg.sampler.draw(&mut rng)).collect();
        let screened: Vec<Option<(GaussPoly, bool)>> = batch.par_iter().map(|c| screen(c)).collect::<Result<_>>()?;
        let mut kept = Vec::new();
        for (c, s) in batch.into_iter().zip(screened) {
            draws += 1;
            if let Some((psi, positive)) = s {
                negatives += usize::from(!positive);
                kept.push((draws - 1, c, psi, positive));
            }
            if negatives == cfg.negatives {
                break;
            }
        }
        let mut evaluated: Vec<CensusRow> = kept
            .into_par_iter()
            .map(|(index, coefficients, psi, positive)| {
                Ok(CensusRow { index, coefficients, ground_truth_positive: positive, verdicts: evaluate(&psi)? })
            })
            .collect::<Result<_>>()?;
        rows.append(&mut evaluated);
    }
    Ok((draws, rows))
}

fn nonneg_screen(dim: Dim, c: &[f64]) -> Result<Option<(GaussPoly, bool)>> {
    let psi = mix(&BasisMix::new(dim, c.to_vec())?)?;
    if !is_nonneg(&psi).nonneg {
        return Ok(None);
    }
    let positive = probes::ground_truth(&psi);
    Ok(Some((psi, positive)))
}

/// Names of the one-dimensional ten-associate campaign columns.
fn columns_1d(cfg: &RandomConfig) -> Vec<String> {
    let mut cols: Vec<String> = [
        "t3_all",
        "cosh_all",
        "t3_all|cosh_all",
        "t5_psi",
        "t5_psi_psi2",
        "t5_psi_psib",
        "t5_psi_psi2_psib_psib2",
        "t5_all",
        "t5_all|cosh_all",
        "cosh_cos_all",
    ]
    .map(String::from)
    .to_vec();
    cols.extend(cfg.b_sweep.iter().map(|b| format!("t3_all[b={b}]")));
    cols
}

/// The one-dimensional campaign with ten associates
/// `{ψ, ψ₂, …, ψ₈, ψ_b, ψ_{b2}, …, ψ_{b8}}`.
///
/// Columns: order-3 Toeplitz and cosh over all ten and their union; order 5
/// over `{ψ}`, `{ψ, ψ₂}`, `{ψ, ψ_b}`, `{ψ, ψ₂, ψ_b, ψ_{b2}}` and all ten;
/// order 5 united with cosh; the cosh±cos pair over all ten; order 3 over
/// all ten for each width of the sweep. Rebels are the misses of
/// `t3_all|cosh_all`.
pub fn random_census_1d(cfg: &RandomConfig) -> Result<ExperimentStats> {
    cfg.validate()?;
    let evaluate = |psi: &GaussPoly| -> Result<Vec<Option<Witness>>> {
        let set = build_associates(psi, &[cfg.b], DEFAULT_QMAX)?;
        let tg = &cfg.toeplitz_grid;
        let mut t3 = Vec::with_capacity(set.len());
        let mut t5 = Vec::with_capacity(set.len());
        let mut cosh = Vec::with_capacity(set.len());
        let mut cc = Vec::with_capacity(set.len());
        for (tag, g) in set.entries() {
            t3.push(probes::toeplitz(g, *tag, 3, tg)?);
            t5.push(probes::toeplitz(g, *tag, 5, tg)?);
            let (hit, m) = probes::jensen(g, *tag, &cfg.imaginary_grid)?;
            cosh.push(hit);
            cc.push(probes::cosh_cos(g, *tag, m.mean_s, &cfg.imaginary_grid)?);
        }
        let is = |t: &AssociateTag, want: &[AssociateTag]| want.contains(t);
        let pick = |hits: &[Option<Witness>], want: &[AssociateTag]| {
            first_hit(set.entries().iter().zip(hits).filter(|((t, _), _)| is(t, want)).map(|(_, h)| h))
        };
        let (base, d2, conv, conv2) =
            (AssociateTag::Base, AssociateTag::D2q(1), AssociateTag::Conv(cfg.b), AssociateTag::ConvD2q(cfg.b, 1));
        let t3_all = first_hit(&t3);
        let cosh_all = first_hit(&cosh);
        let t5_all = first_hit(&t5);
        let mut out = vec![
            t3_all,
            cosh_all,
            first_hit([&t3_all, &cosh_all]),
            pick(&t5, &[base]),
            pick(&t5, &[base, d2]),
            pick(&t5, &[base, conv]),
            pick(&t5, &[base, d2, conv, conv2]),
            t5_all,
            first_hit([&t5_all, &cosh_all]),
            first_hit(&cc),
        ];
        let unsmoothed = first_hit(set.entries().iter().zip(&t3).filter(|((t, _), _)| t.b().is_none()).map(|(_, h)| h));
        for &b in &cfg.b_sweep {
            if b == cfg.b {
                out.push(t3_all);
                continue;
            }
            let hit = match unsmoothed {
                Some(w) => Some(w),
                None => {
                    let smoothed = build_associates(psi, &[b], DEFAULT_QMAX)?;
                    let mut found = None;
                    for (tag, g) in smoothed.entries().iter().filter(|(t, _)| t.b().is_some()) {
                        found = probes::toeplitz(g, *tag, 3, tg)?;
                        if found.is_some() {
                            break;
                        }
                    }
                    found
                }
            };
            out.push(hit);
        }
        Ok(out)
    };
    let (draws, rows) = collect(cfg, |c| nonneg_screen(Dim::One, c), evaluate)?;
    Ok(ExperimentStats::tally("random1d", Dim::One, draws, columns_1d(cfg), rows, "t3_all|cosh_all"))
}

/// Both dimensions of the screened comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonStats {
    pub two_d: ExperimentStats,
    pub one_d: ExperimentStats,
}

/// Population of `ψ ≥ 0` with the maximum at the origin; Toeplitz at each
/// configured order and the dimension's Jensen bound (cosh or `I₀`) on `ψ`
/// alone, plus the union of the highest order with the bound. Rebels are the
/// misses of the highest order.
pub fn screened_census(dim: Dim, cfg: &RandomConfig) -> Result<ExperimentStats> {
    cfg.validate()?;
    if cfg.orders.is_empty() {
        return Err(Error::InvalidConfig("no Toeplitz orders selected".into()));
    }
    let bound = match dim {
        Dim::One => "cosh_psi",
        Dim::Two => "i0_psi",
    };
    let top = *cfg.orders.iter().max().expect("nonempty");
    let mut cols: Vec<String> = cfg.orders.iter().map(|n| format!("t{n}_psi")).collect();
    cols.push(bound.to_string());
    cols.push(format!("t{top}_psi|{bound}"));
    let screen = |c: &[f64]| -> Result<Option<(GaussPoly, bool)>> {
        let Some((psi, positive)) = nonneg_screen(dim, c)? else {
            return Ok(None);
        };
        let peak = maximality_test(&psi, &maximality_grid(&psi, cfg.maximality_points))?;
        Ok((!peak.detected).then_some((psi, positive)))
    };
    let evaluate = |psi: &GaussPoly| -> Result<Vec<Option<Witness>>> {
        let mut out = Vec::with_capacity(cfg.orders.len() + 2);
        let mut top_hit = None;
        for &n in &cfg.orders {
            let hit = probes::toeplitz(psi, AssociateTag::Base, n, &cfg.toeplitz_grid)?;
            if n == top {
                top_hit = hit;
            }
            out.push(hit);
        }
        let jensen = probes::jensen(psi, AssociateTag::Base, &cfg.imaginary_grid)?.0;
        out.push(jensen);
        out.push(first_hit([&top_hit, &jensen]));
        Ok(out)
    };
    let (draws, rows) = collect(cfg, screen, evaluate)?;
    let name = match dim {
        Dim::One => "random2d_1d_comparison",
        Dim::Two => "random2d",
    };
    let rule = format!("t{top}_psi");
    Ok(ExperimentStats::tally(name, dim, draws, cols, rows, &rule))
}

/// The two-dimensional screened campaign and its one-dimensional
/// counterpart on the same seed.
pub fn random_census_2d(cfg: &RandomConfig) -> Result<ComparisonStats> {
    Ok(ComparisonStats { two_d: screened_census(Dim::Two, cfg)?, one_d: screened_census(Dim::One, cfg)? })
}
