use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equidistant abscissa grid `start, start + step, …` up to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let grid = Self { start, stop, step };
        grid.validate()?;
        Ok(grid)
    }

    /// Real-axis scan used by the Toeplitz tests: 0.025, 0.05, …, 3.5.
    pub fn toeplitz_default() -> Self {
        Self { start: 0.025, stop: 3.5, step: 0.025 }
    }

    /// Imaginary-axis scan used by the Jensen bounds: 0, 0.01, …, 6.
    pub fn imaginary_default() -> Self {
        Self { start: 0.0, stop: 6.0, step: 0.01 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.start.is_finite()
            && self.stop.is_finite()
            && self.step.is_finite()
            && self.step > 0.0
            && self.start >= 0.0
            && self.stop >= self.start;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "start={}, stop={}, step={}",
                self.start, self.stop, self.step
            )))
        }
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }

    /// Requires every point to be strictly positive.
    pub fn require_positive(&self) -> Result<()> {
        self.validate()?;
        if self.start > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidGrid("grid must start above zero".into()))
        }
    }
}
