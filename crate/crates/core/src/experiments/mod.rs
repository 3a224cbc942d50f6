//! Census campaigns over populations of basis mixes.
//!
//! Ground truth always comes from `is_nonneg` on the exact transform; the
//! detection columns come from the criteria alone. Every function of a
//! population gets the same criterion chain, so positives double as a
//! soundness check.

mod figure;
mod grid;
mod probes;
mod random;

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::algebra::Dim;
use crate::criteria::Witness;
use crate::error::Result;

pub use figure::{figure1_case, figure1_case_with, footnote_psi, Figure1Report, FOOTNOTE_COEFFS};
pub use grid::{grid_census_3param, GridCensusConfig, GridPlacement};
pub use random::{random_census_1d, random_census_2d, screened_census, ComparisonStats, RandomConfig, Sampler};

/// One function of a census.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    /// Grid position or draw number.
    pub index: usize,
    pub coefficients: Vec<f64>,
    pub ground_truth_positive: bool,
    /// One entry per column of [`ExperimentStats::criteria`]; `Some` is a detection.
    pub verdicts: Vec<Option<Witness>>,
}

/// Counts of one campaign. `detections` is over the φ-negative functions,
/// `rebel_detections` over the rebels, `false_detections` over the positives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub campaign: String,
    pub dim: Dim,
    /// Candidates generated before screening.
    pub draws: usize,
    /// Candidates that passed the screen (`ψ ≥ 0`, plus any extra screen).
    pub population: usize,
    pub both_positive: usize,
    pub phi_negative: usize,
    /// Column whose misses among the φ-negative functions are the rebels.
    pub rebel_rule: String,
    pub rebels: usize,
    pub criteria: Vec<String>,
    pub detections: BTreeMap<String, usize>,
    pub rebel_detections: BTreeMap<String, usize>,
    pub false_detections: BTreeMap<String, usize>,
    #[serde(skip)]
    pub rows: Vec<CensusRow>,
}

impl ExperimentStats {
    pub(crate) fn tally(
        campaign: &str,
        dim: Dim,
        draws: usize,
        criteria: Vec<String>,
        rows: Vec<CensusRow>,
        rebel_rule: &str,
    ) -> Self {
        let rule = criteria.iter().position(|c| c == rebel_rule).expect("rebel rule is a column");
        let is_rebel = |row: &CensusRow| !row.ground_truth_positive && row.verdicts[rule].is_none();
        let mut detections = BTreeMap::new();
        let mut rebel_detections = BTreeMap::new();
        let mut false_detections = BTreeMap::new();
        for (k, name) in criteria.iter().enumerate() {
            let hit = |row: &&CensusRow| row.verdicts[k].is_some();
            detections.insert(name.clone(), rows.iter().filter(|r| !r.ground_truth_positive).filter(hit).count());
            rebel_detections.insert(name.clone(), rows.iter().filter(|r| is_rebel(r)).filter(hit).count());
            false_detections.insert(name.clone(), rows.iter().filter(|r| r.ground_truth_positive).filter(hit).count());
        }
        let both_positive = rows.iter().filter(|r| r.ground_truth_positive).count();
        Self {
            campaign: campaign.to_string(),
            dim,
            draws,
            population: rows.len(),
            both_positive,
            phi_negative: rows.len() - both_positive,
            rebel_rule: rebel_rule.to_string(),
            rebels: rows.iter().filter(|r| is_rebel(r)).count(),
            criteria,
            detections,
            rebel_detections,
            false_detections,
            rows,
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.criteria.iter().position(|c| c == name)
    }

    /// Detections of `name` among the φ-negative functions.
    pub fn count(&self, name: &str) -> usize {
        self.detections.get(name).copied().unwrap_or(0)
    }

    /// `count(name) / phi_negative`.
    pub fn rate(&self, name: &str) -> f64 {
        self.count(name) as f64 / self.phi_negative.max(1) as f64
    }

    /// φ-negative functions detected by `a` but not by `b`.
    pub fn only(&self, a: &str, b: &str) -> usize {
        let (ia, ib) = (self.column(a), self.column(b));
        match (ia, ib) {
            (Some(ia), Some(ib)) => self
                .rows
                .iter()
                .filter(|r| !r.ground_truth_positive && r.verdicts[ia].is_some() && r.verdicts[ib].is_none())
                .count(),
            _ => 0,
        }
    }

    /// φ-negative functions detected by `a` or `b`.
    pub fn union(&self, a: &str, b: &str) -> usize {
        match (self.column(a), self.column(b)) {
            (Some(ia), Some(ib)) => self
                .rows
                .iter()
                .filter(|r| !r.ground_truth_positive && (r.verdicts[ia].is_some() || r.verdicts[ib].is_some()))
                .count(),
            _ => 0,
        }
    }

    /// Total detections among ground-truth positives over every column.
    pub fn total_false_detections(&self) -> usize {
        self.false_detections.values().sum()
    }

    /// Census table: `index, c0..c{m-1}, ground_truth_positive`, then per
    /// criterion a boolean column and a `<name>_witness` column holding
    /// `tag@r:margin` (empty when undetected).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let width = self.rows.iter().map(|r| r.coefficients.len()).max().unwrap_or(0);
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["index".to_string()];
        header.extend((0..width).map(|k| format!("c{k}")));
        header.push("ground_truth_positive".into());
        for c in &self.criteria {
            header.push(c.clone());
            header.push(format!("{c}_witness"));
        }
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec = vec![row.index.to_string()];
            rec.extend((0..width).map(|k| row.coefficients.get(k).map_or(String::new(), |c| c.to_string())));
            rec.push(row.ground_truth_positive.to_string());
            for v in &row.verdicts {
                rec.push(v.is_some().to_string());
                rec.push(v.map_or(String::new(), |w| format!("{}@{}:{}", w.tag, w.r, w.margin)));
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// First detection among the inputs, in order.
pub(crate) fn first_hit<'a>(hits: impl IntoIterator<Item = &'a Option<Witness>>) -> Option<Witness> {
    hits.into_iter().find_map(|h| *h)
}
