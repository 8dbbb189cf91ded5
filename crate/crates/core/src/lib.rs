//! Quantum and classical excitation trapping on a finite chain with
//! algebraically decaying couplings `R^-nu`.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`] builds the chain operators (trap-free Hamiltonian, trap
//!   operator, non-Hermitian Hamiltonian, classical transfer matrix and the
//!   long-range correction operators).
//! - [`spectral`] diagonalises them: complex-symmetric eigendecomposition with
//!   biorthogonal (bilinear) normalisation, and the real symmetric case.
//! - [`dynamics`] evaluates transition probabilities and mean survival curves
//!   from spectra, with an independent matrix-exponential oracle in [`expm`].
//! - [`perturbation`] holds the closed-form nearest-neighbour spectrum and the
//!   first-order expressions for decay rates and eigenstate overlaps.
//! - [`analysis`] fits power laws in log-log space and locates curve crossings.
//! - [`bessel`] provides the exponentially scaled `I0` used by the continuum
//!   survival curve.

pub mod analysis;
pub mod bessel;
pub mod dynamics;
mod error;
pub mod expm;
pub mod model;
pub mod perturbation;
pub mod spectral;

pub use error::{Error, Result};
pub use model::{ChainConfig, DenseOperator, Exponent, OperatorKind};
pub use num_complex::Complex64;

pub use analysis::PowerLawFit;
pub use dynamics::{DecayCurve, CurveLabel, Spacing, TimeGrid};
pub use perturbation::{GammaSeries, GammaSource, NniAnalytic};
pub use spectral::{ClassicalSpectrum, Ordering, QuantumSpectrum};
