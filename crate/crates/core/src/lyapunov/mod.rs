//! Companion-matrix cocycles over circle rotations, Lyapunov spectra, the
//! Lyapunov entropy formula, Herman's lower bound and a random product experiment.
//!
//! Randomness: every sampled quantity uses `ChaCha8Rng::seed_from_u64(seed)`
//! with `set_stream(index)`, where `index` is the trial number or, for
//! spectra, `zeta_index · n_samples + sample`.

mod cocycle;
mod herman;
mod randprod;
mod spectrum;

pub use cocycle::{monicize, CompanionCocycle};
pub use herman::{herman_lower_bound, spectral_radius_at_zero, HermanBound};
pub use randprod::{
    random_product_experiment, random_product_value, RandomProductReport, RandomProductTrial,
};
pub use spectrum::{
    entropy_via_lyapunov, kronecker_thetas, lyapunov_spectrum, lyapunov_spectrum_stream,
    near_rational, stream_rng, LyapunovConfig, LyapunovSpectrum, RATIONAL_DENOMINATOR_LIMIT,
};
