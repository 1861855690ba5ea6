//! Interpolation error of Gaussian-process regression on regular grids when
//! the covariance used for prediction differs from the true one.
//!
//! - [`spectral`]: covariance families, spectral densities and aliased sums.
//! - [`theory`]: error functionals on infinite grids, closed forms and bounds.
//! - [`simulate`]: finite-sample Monte Carlo kriging on `[0, 1]`.
//! - [`stats`]: Wilcoxon signed-rank test and summary statistics.
//! - [`expcli`]: experiment presets, config files and result emission.

pub mod error;
pub mod expcli;
pub mod simulate;
pub mod spectral;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use spectral::{CovarianceModel, Family, GridDesign, Profile};
