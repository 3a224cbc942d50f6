//! The serializable description of one run.

use std::path::PathBuf;

use posfourier::algebra::{mix, BasisMix, BASIS_SIZE};
use posfourier::criteria::{ChecklistParams, Criterion};
use posfourier::experiments::{GridCensusConfig, GridPlacement, RandomConfig, Sampler};
use posfourier::numeric::RGrid;
use posfourier::{Dim, Error, GaussPoly, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Analyze,
    Grid3,
    Random1d,
    Random2d,
    Fig1,
}

/// Everything a run depends on. Serialized into `summary.json`; replaying it
/// with `--config` reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub dim: u8,
    /// Basis coefficients (`analyze`).
    pub coeffs: Option<Vec<f64>>,
    /// Raw polynomial coefficients in `r²` (`analyze`), used instead of `coeffs`.
    pub poly: Option<Vec<f64>>,
    /// Gaussian width `a` for `poly`.
    pub a: f64,
    /// Criteria for `analyze`; empty means every criterion of the dimension.
    pub criteria: Vec<String>,
    pub b: Vec<f64>,
    pub orders: Vec<usize>,
    pub seed: u64,
    /// φ-negative functions to collect (random campaigns).
    pub n: usize,
    pub max_draws: usize,
    pub sampler: Sampler,
    pub placement: GridPlacement,
    pub toeplitz_grid: RGrid,
    pub imaginary_grid: RGrid,
    pub out: PathBuf,
    pub threads: Option<usize>,
}

impl RunConfig {
    /// Defaults of one command.
    pub fn defaults(command: Command) -> Self {
        let (b, orders) = match command {
            Command::Grid3 => (vec![2.0, 1.0, 0.5], vec![3, 5]),
            Command::Random2d => (vec![1.0], vec![5, 8, 9, 10]),
            Command::Random1d => (vec![1.0], vec![3, 5]),
            Command::Fig1 => (vec![1.0], vec![3, 4]),
            Command::Analyze => (vec![1.0], vec![3, 5]),
        };
        Self {
            command,
            dim: 1,
            coeffs: None,
            poly: None,
            a: 0.5,
            criteria: Vec::new(),
            b,
            orders,
            seed: 1,
            n: 1000,
            max_draws: RandomConfig::default().max_draws,
            sampler: Sampler::UniformSphere,
            placement: GridPlacement::CellCentred,
            toeplitz_grid: RGrid::toeplitz_default(),
            imaginary_grid: RGrid::imaginary_default(),
            out: PathBuf::from("out"),
            threads: None,
        }
    }

    pub fn dimension(&self) -> Result<Dim> {
        Dim::try_from(self.dim).map_err(Error::InvalidConfig)
    }

    pub fn validate(&self) -> Result<()> {
        self.dimension()?;
        if let Some(b) = self.b.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
            return Err(Error::InvalidConvolutionWidth(*b));
        }
        if self.b.is_empty() {
            return Err(Error::InvalidConfig("at least one convolution width b is required".into()));
        }
        if let Some(&n) = self.orders.iter().find(|&&n| !(2..=16).contains(&n)) {
            return Err(Error::InvalidConfig(format!("Toeplitz order {n} outside 2..=16")));
        }
        self.toeplitz_grid.require_positive()?;
        self.imaginary_grid.validate()?;
        if self.toeplitz_grid.is_empty() || self.imaginary_grid.is_empty() {
            return Err(Error::InvalidGrid("empty grid".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("thread count must be positive".into()));
        }
        match self.command {
            Command::Analyze => {
                self.function()?;
                self.selection()?;
            }
            Command::Random1d | Command::Random2d => {
                if self.n == 0 {
                    return Err(Error::InvalidConfig("--n must be at least 1".into()));
                }
                if self.command == Command::Random2d && self.orders.is_empty() {
                    return Err(Error::InvalidConfig("no Toeplitz orders selected".into()));
                }
            }
            Command::Grid3 | Command::Fig1 => {}
        }
        Ok(())
    }

    /// The function to analyze.
    pub fn function(&self) -> Result<GaussPoly> {
        let dim = self.dimension()?;
        match (&self.coeffs, &self.poly) {
            (Some(_), Some(_)) => Err(Error::InvalidConfig("give either --coeffs or --poly, not both".into())),
            (None, None) => Err(Error::InvalidConfig("analyze needs --coeffs or --poly".into())),
            (Some(c), None) => {
                if c.len() > BASIS_SIZE {
                    return Err(Error::MixTooLong { len: c.len(), max: BASIS_SIZE });
                }
                mix(&BasisMix::new(dim, c.clone())?)
            }
            (None, Some(p)) => {
                if p.iter().all(|&x| x == 0.0) {
                    return Err(Error::ZeroMix);
                }
                GaussPoly::new(dim, self.a, p.clone())
            }
        }
    }

    /// Criteria of `analyze`, validated against the dimension.
    pub fn selection(&self) -> Result<Vec<Criterion>> {
        let dim = self.dimension()?;
        if self.criteria.is_empty() {
            return Ok(Criterion::defaults_for(dim, &self.orders));
        }
        let mut out = Vec::new();
        for name in &self.criteria {
            let c: Criterion = name.parse().map_err(Error::InvalidConfig)?;
            let one_d_only = matches!(c, Criterion::Cosh | Criterion::CoshCos | Criterion::Omega8 | Criterion::Multicomponent);
            if (one_d_only && dim == Dim::Two) || (c == Criterion::I0 && dim == Dim::One) {
                return Err(Error::CriterionDimension { criterion: c.to_string(), dim });
            }
            if let Criterion::Toeplitz(n) = c {
                if !(2..=16).contains(&n) {
                    return Err(Error::InvalidConfig(format!("Toeplitz order {n} outside 2..=16")));
                }
            }
            out.push(c);
        }
        Ok(out)
    }

    pub fn checklist_params(&self) -> ChecklistParams {
        ChecklistParams {
            widths: self.b.clone(),
            toeplitz_grid: self.toeplitz_grid,
            imaginary_grid: self.imaginary_grid,
            ..ChecklistParams::default()
        }
    }

    pub fn grid_config(&self) -> GridCensusConfig {
        GridCensusConfig {
            placement: self.placement,
            widths: self.b.clone(),
            imaginary_grid: self.imaginary_grid,
            ..GridCensusConfig::default()
        }
    }

    pub fn random_config(&self) -> RandomConfig {
        RandomConfig {
            negatives: self.n,
            max_draws: self.max_draws,
            seed: self.seed,
            sampler: self.sampler,
            b: self.b[0],
            orders: self.orders.clone(),
            toeplitz_grid: self.toeplitz_grid,
            imaginary_grid: self.imaginary_grid,
            ..RandomConfig::default()
        }
    }
}
