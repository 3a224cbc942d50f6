//! The worked example: a positive `ψ` whose transform dips below zero.

use serde::{Deserialize, Serialize};

use crate::algebra::{exact_transform, is_nonneg, Dim, GaussPoly, NegativeWitness};
use crate::analytic::{cosh_bound, BoundReport};
use crate::error::Result;
use crate::moments::{moment_report, MomentMethod, MomentReport};
use crate::numeric::RGrid;
use crate::toeplitz::{toeplitz_scan, ToeplitzScan};

/// `ψ(r) = e^{−r²/2}·Σ p_k r^{2k}`.
pub const FOOTNOTE_COEFFS: [f64; 5] = [0.718081, -0.064879, -0.0685793, 0.0269736, 0.00119983];

pub fn footnote_psi() -> GaussPoly {
    GaussPoly::new(Dim::One, 0.5, FOOTNOTE_COEFFS.to_vec()).expect("valid constant")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Report {
    pub psi: GaussPoly,
    pub phi: GaussPoly,
    pub psi_nonneg: bool,
    pub phi_negative_witness: Option<NegativeWitness>,
    pub moments: MomentReport,
    pub cosh: BoundReport,
    /// Orders 3 and 4.
    pub toeplitz: Vec<ToeplitzScan>,
}

impl Figure1Report {
    pub fn phi_at_origin(&self) -> f64 {
        self.phi.at_origin()
    }
}

/// The example on the default grids.
pub fn figure1_case() -> Result<Figure1Report> {
    figure1_case_with(&RGrid::toeplitz_default(), &RGrid::imaginary_default())
}

pub fn figure1_case_with(toeplitz_grid: &RGrid, imaginary_grid: &RGrid) -> Result<Figure1Report> {
    let psi = footnote_psi();
    let phi = exact_transform(&psi);
    let moments = moment_report(&psi, MomentMethod::RSpaceFormula)?;
    Ok(Figure1Report {
        psi_nonneg: is_nonneg(&psi).nonneg,
        phi_negative_witness: is_nonneg(&phi).witness,
        cosh: cosh_bound(&psi, moments.mean_s, imaginary_grid)?,
        toeplitz: vec![toeplitz_scan(&psi, 3, toeplitz_grid)?, toeplitz_scan(&psi, 4, toeplitz_grid)?],
        moments,
        phi,
        psi,
    })
}
