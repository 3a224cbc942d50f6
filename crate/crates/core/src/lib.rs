//! Necessary conditions for the positivity of Fourier-cosine (1D) and
//! Fourier-Bessel (2D) transforms of Gaussian-polynomial functions.
//!
//! A function `ψ(r) = e^{-a r²} Q(r²)` is represented exactly by
//! [`algebra::GaussPoly`]. Two families of tests detect that its transform
//! `φ` takes negative values without computing `φ`:
//!
//! * [`toeplitz`]: Bochner's theorem requires every equidistant Toeplitz
//!   matrix `[ψ(|i−j| r)]` to be positive semidefinite.
//! * [`analytic`]: Jensen's inequality bounds `ψ(ir)` from below by
//!   `ψ(0) cosh(⟨s⟩ r)` (1D) or `ψ(0) I₀(⟨k⟩ x)` (2D).
//!
//! Both are applied to positivity-preserving images of `ψ` (derivatives and
//! Gaussian smoothings, see [`criteria`]). [`experiments`] runs census
//! campaigns whose ground truth comes from the exact transform.

pub mod algebra;
pub mod analytic;
pub mod bessel;
pub mod criteria;
pub mod error;
pub mod experiments;
pub mod moments;
pub mod numeric;
pub mod toeplitz;

pub use algebra::{Dim, GaussPoly};
pub use error::{Error, Result};
