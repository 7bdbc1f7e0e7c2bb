//! Conditional scalar-fluctuation density of `S_k`: coefficients,
//! derivatives, log-moments by quadrature, exact sampling and the
//! log-concavity checks.

mod alpha;
mod checks;
mod direct;
mod quadrature;
mod sampler;

pub use alpha::{
    alpha_coefficients, log_moments, phi, phi_double_prime, phi_prime, radial_exponent,
    AlphaCoefficients,
};
pub use checks::{
    logconcavity_check, norm_direction_selftest, LogConcavityReport, NormDirectionReport,
    GRID_POINTS,
};
pub use direct::phi_direct;
pub use quadrature::{
    gauss_kronrod15, integrate_adaptive, log_moments_of, LogDensity, LogMoments, DEFAULT_CUTOFF,
};
pub use sampler::{density_table, sample_density, DensityTable};
