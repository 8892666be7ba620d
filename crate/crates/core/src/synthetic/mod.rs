//! Synthetic populations with a two-band spectrum, Gaussian data drawn from
//! them, and the Bartlett sampler for the standard singular Wishart factor.

mod population;
mod rng;
mod sampling;

pub use population::{
    build_population, lambda_max_for_cond, PopulationModel, SpectrumSpec, SMALL_BAND_HIGH,
    SMALL_BAND_LOW,
};
pub use rng::{mix_seed, RngStream};
pub use sampling::{chi_square, sample_bartlett_factor, sample_data};
