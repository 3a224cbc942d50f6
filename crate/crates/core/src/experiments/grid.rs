//! Deterministic census over the three-component sphere
//! `(cos α, sin α cos β, sin α sin β)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probes;
use super::{first_hit, CensusRow, ExperimentStats};
use crate::algebra::{convolve_gauss, derivative_2q, is_nonneg, mix, BasisMix, Dim, GaussPoly};
use crate::criteria::{AssociateTag, Witness, MAXIMALITY_POINTS};
use crate::error::{Error, Result};
use crate::numeric::RGrid;

/// Where grid angles sit inside each `π/90 × π/45` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridPlacement {
    /// `α = (k + ½)·Δα`, `β = (j + ½)·Δβ`.
    CellCentred,
    /// `α = k·Δα`, `β = j·Δβ`; the pole `α = 0` repeats once per `β`.
    Vertex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCensusConfig {
    /// Number of `α` steps on `[0, π/2)`.
    pub alpha_steps: usize,
    /// Number of `β` steps on `[0, 2π)`.
    pub beta_steps: usize,
    pub placement: GridPlacement,
    /// Convolution widths `b` of the smoothed suites.
    pub widths: Vec<f64>,
    pub maximality_points: usize,
    pub imaginary_grid: RGrid,
}

impl Default for GridCensusConfig {
    fn default() -> Self {
        Self {
            alpha_steps: 45,
            beta_steps: 90,
            placement: GridPlacement::CellCentred,
            widths: vec![2.0, 1.0, 0.5],
            maximality_points: MAXIMALITY_POINTS,
            imaginary_grid: RGrid::imaginary_default(),
        }
    }
}

impl GridCensusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_steps == 0 || self.beta_steps == 0 {
            return Err(Error::InvalidConfig("grid needs at least one step in each angle".into()));
        }
        if self.maximality_points == 0 {
            return Err(Error::InvalidConfig("maximality scan needs at least one point".into()));
        }
        if let Some(b) = self.widths.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::InvalidConvolutionWidth(*b));
        }
        self.imaginary_grid.validate()
    }

    /// Column names, in table order.
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = ["max_psi", "max_psi2", "double_max"].map(String::from).to_vec();
        for b in &self.widths {
            cols.push(format!("conv_suite[b={b}]"));
            cols.push(format!("cosh_psi_b2[b={b}]"));
            cols.push(format!("cosh_psi_b4[b={b}]"));
            cols.push(format!("cosh_psi_b2|cosh_psi_b4[b={b}]"));
        }
        cols.push("any_smoothed".into());
        cols
    }
}

/// Census of every grid point with `ψ ≥ 0`.
///
/// Columns per function:
/// - `max_psi`, `max_psi2`: `ψ(0) > 0` resp. `ψ₂(0) > 0` with the maximum at the origin;
///   `double_max` is their union and defines the rebels.
/// - `conv_suite[b]`: eight conditions at once: positive maxima of `ψ_b` and
///   `ψ_{b2}`, positive first moments of both, and the cosh bounds on `ψ_b`,
///   `ψ_{b2}`, `ψ` and `ψ₂`.
/// - `cosh_psi_b2[b]`, `cosh_psi_b4[b]` and their union.
/// - `any_smoothed`: union of all smoothed columns over every `b`.
pub fn grid_census_3param(cfg: &GridCensusConfig) -> Result<ExperimentStats> {
    cfg.validate()?;
    let offset = match cfg.placement {
        GridPlacement::CellCentred => 0.5,
        GridPlacement::Vertex => 0.0,
    };
    let d_alpha = PI / 2.0 / cfg.alpha_steps as f64;
    let d_beta = 2.0 * PI / cfg.beta_steps as f64;
    let candidates: Vec<(usize, Vec<f64>)> = (0..cfg.alpha_steps)
        .flat_map(|k| (0..cfg.beta_steps).map(move |j| (k, j)))
        .map(|(k, j)| {
            let (a, b) = ((k as f64 + offset) * d_alpha, (j as f64 + offset) * d_beta);
            (k * cfg.beta_steps + j, vec![a.cos(), a.sin() * b.cos(), a.sin() * b.sin()])
        })
        .collect();
    let rows: Vec<CensusRow> = candidates
        .into_par_iter()
        .map(|(index, c)| -> Result<Option<CensusRow>> {
            let psi = mix(&BasisMix::new(Dim::One, c.clone())?)?;
            if !is_nonneg(&psi).nonneg {
                return Ok(None);
            }
            let verdicts = evaluate(&psi, cfg)?;
            Ok(Some(CensusRow { index, coefficients: c, ground_truth_positive: probes::ground_truth(&psi), verdicts }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(ExperimentStats::tally("grid3", Dim::One, cfg.alpha_steps * cfg.beta_steps, cfg.columns(), rows, "double_max"))
}

fn evaluate(psi: &GaussPoly, cfg: &GridCensusConfig) -> Result<Vec<Option<Witness>>> {
    let grid = &cfg.imaginary_grid;
    let pts = cfg.maximality_points;
    let psi2 = derivative_2q(psi, 1)?;
    let max_psi = probes::positive_max(psi, AssociateTag::Base, pts)?;
    let max_psi2 = probes::positive_max(&psi2, AssociateTag::D2q(1), pts)?;
    let cosh_psi = probes::jensen(psi, AssociateTag::Base, grid)?.0;
    let cosh_psi2 = probes::jensen(&psi2, AssociateTag::D2q(1), grid)?.0;

    let mut out = vec![max_psi, max_psi2, first_hit([&max_psi, &max_psi2])];
    let mut smoothed = Vec::new();
    for &b in &cfg.widths {
        let psi_b = convolve_gauss(psi, b)?;
        let psi_b2 = derivative_2q(&psi_b, 1)?;
        let psi_b4 = derivative_2q(&psi_b2, 1)?;
        let (t_b, t_b2, t_b4) = (AssociateTag::Conv(b), AssociateTag::ConvD2q(b, 1), AssociateTag::ConvD2q(b, 2));
        let (cosh_b, m_b) = probes::jensen(&psi_b, t_b, grid)?;
        let (cosh_b2, m_b2) = probes::jensen(&psi_b2, t_b2, grid)?;
        let cosh_b4 = probes::jensen(&psi_b4, t_b4, grid)?.0;
        let suite = first_hit([
            &probes::positive_max(&psi_b, t_b, pts)?,
            &probes::positive_max(&psi_b2, t_b2, pts)?,
            &probes::moment_sign(&m_b, t_b),
            &probes::moment_sign(&m_b2, t_b2),
            &cosh_b,
            &cosh_b2,
            &cosh_psi,
            &cosh_psi2,
        ]);
        let pair = first_hit([&cosh_b2, &cosh_b4]);
        smoothed.extend([suite, cosh_b2, cosh_b4, pair]);
        out.extend([suite, cosh_b2, cosh_b4, pair]);
    }
    out.push(first_hit(&smoothed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_align_with_verdicts() {
        let cfg = GridCensusConfig { alpha_steps: 3, beta_steps: 4, ..Default::default() };
        let stats = grid_census_3param(&cfg).unwrap();
        assert_eq!(stats.draws, 12);
        assert!(stats.population >= 1);
        for row in &stats.rows {
            assert_eq!(row.verdicts.len(), stats.criteria.len());
            let norm: f64 = row.coefficients.iter().map(|c| c * c).sum();
            assert!((norm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn vertex_grid_repeats_the_pole() {
        let cfg = GridCensusConfig { alpha_steps: 2, beta_steps: 3, placement: GridPlacement::Vertex, ..Default::default() };
        let stats = grid_census_3param(&cfg).unwrap();
        let poles = stats.rows.iter().filter(|r| r.coefficients[0] == 1.0).count();
        assert_eq!(poles, 3);
    }

    #[test]
    fn rejects_bad_widths() {
        let cfg = GridCensusConfig { widths: vec![0.0], ..Default::default() };
        assert!(grid_census_3param(&cfg).is_err());
    }
}
