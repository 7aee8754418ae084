//! Monte Carlo engine: heavy-tailed data, sample correlation matrices and
//! their spectra.

mod eigen;
mod matrix;
mod sampling;
mod spectrum;

pub use eigen::{eigen_sym, eigenvalues_sym, Eigen};
pub use matrix::{correlation_matrix, normalized_rows, Matrix};
pub use sampling::{replicate_rng, sample_matrix, sample_matrix_with, Distribution};
pub use spectrum::{
    empirical_moments, esd_histogram, scaled_fourth_moment, simulate_replicate, summarize,
    summarize_moments, Histogram, SimulationConfig, SpectralSample, Summary,
};
