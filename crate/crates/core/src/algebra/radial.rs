//! Common interface over single Gaussian-polynomials and sums of them with
//! different widths (needed for complement functions `ψ − Σ wᵢ ψ_{bᵢ}`).

use serde::{Deserialize, Serialize};

use super::{exact_transform, Dim, GaussPoly};
use crate::error::{Error, Result};

/// An even real function known in closed form, continuable off the real axis.
pub trait RadialFunction: Sync {
    fn dim(&self) -> Dim;
    fn eval(&self, r: f64) -> f64;
    /// `f(ir)`, saturating to `±∞`.
    fn eval_imag(&self, r: f64) -> f64;
    fn at_origin(&self) -> f64;
    /// `[f(0) − f(r)]/r²`, regular at 0.
    fn origin_deficit_over_r2(&self, r: f64) -> f64;
    /// Upper estimate of `max |f|`.
    fn envelope_scale(&self) -> f64;
    /// Radius beyond which `|f| < rel·envelope_scale`.
    fn decay_radius(&self, rel: f64) -> f64;
    /// Closed-form transform, term by term.
    fn transform_terms(&self) -> Vec<GaussPoly>;
}

impl RadialFunction for GaussPoly {
    fn dim(&self) -> Dim {
        GaussPoly::dim(self)
    }
    fn eval(&self, r: f64) -> f64 {
        GaussPoly::eval(self, r)
    }
    fn eval_imag(&self, r: f64) -> f64 {
        GaussPoly::eval_imag(self, r)
    }
    fn at_origin(&self) -> f64 {
        GaussPoly::at_origin(self)
    }
    fn origin_deficit_over_r2(&self, r: f64) -> f64 {
        GaussPoly::origin_deficit_over_r2(self, r)
    }
    fn envelope_scale(&self) -> f64 {
        GaussPoly::envelope_scale(self)
    }
    fn decay_radius(&self, rel: f64) -> f64 {
        GaussPoly::decay_radius(self, rel)
    }
    fn transform_terms(&self) -> Vec<GaussPoly> {
        vec![exact_transform(self)]
    }
}

/// `Σ_i f_i` with possibly different widths, all in one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussSum {
    terms: Vec<GaussPoly>,
}

impl GaussSum {
    pub fn new(terms: Vec<GaussPoly>) -> Result<Self> {
        if let Some(first) = terms.first() {
            for t in &terms[1..] {
                if t.dim() != first.dim() {
                    return Err(Error::DimensionMismatch { expected: first.dim(), found: t.dim() });
                }
            }
        }
        Ok(Self { terms })
    }

    /// `f − Σ wᵢ gᵢ`.
    pub fn complement(f: &GaussPoly, parts: &[(f64, &GaussPoly)]) -> Result<Self> {
        let mut terms = vec![f.clone()];
        terms.extend(parts.iter().map(|(w, g)| g.scale(-w)));
        Self::new(terms)
    }

    pub fn terms(&self) -> &[GaussPoly] {
        &self.terms
    }
}

impl RadialFunction for GaussSum {
    fn dim(&self) -> Dim {
        self.terms.first().map_or(Dim::One, GaussPoly::dim)
    }
    fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r)).sum()
    }
    fn eval_imag(&self, r: f64) -> f64 {
        // the widest-growing term dominates once anything saturates
        let vals: Vec<f64> = self.terms.iter().map(|t| t.eval_imag(r)).collect();
        if vals.iter().any(|v| v.is_infinite()) {
            let widest = self
                .terms
                .iter()
                .zip(&vals)
                .filter(|(t, _)| !t.is_zero())
                .max_by(|x, y| x.0.width().total_cmp(&y.0.width()))
                .map(|(_, v)| *v)
                .unwrap_or(0.0);
            if widest.is_infinite() {
                return widest;
            }
        }
        vals.iter().sum()
    }
    fn at_origin(&self) -> f64 {
        self.terms.iter().map(GaussPoly::at_origin).sum()
    }
    fn origin_deficit_over_r2(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.origin_deficit_over_r2(r)).sum()
    }
    fn envelope_scale(&self) -> f64 {
        self.terms.iter().map(GaussPoly::envelope_scale).sum()
    }
    fn decay_radius(&self, rel: f64) -> f64 {
        let scale = self.envelope_scale();
        self.terms
            .iter()
            .map(|t| {
                let own = t.envelope_scale();
                if own == 0.0 {
                    0.0
                } else {
                    t.decay_radius((rel * scale / own).min(1.0))
                }
            })
            .fold(0.0, f64::max)
    }
    fn transform_terms(&self) -> Vec<GaussPoly> {
        self.terms.iter().map(exact_transform).collect()
    }
}
