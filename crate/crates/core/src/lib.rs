//! Secrecy-rate regions for the two-way wiretap channel and a simulator of
//! randomized scheduling against an energy-classifying eavesdropper.
//!
//! The region computations are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`. The near-field simulator is
//! `f64` only.

pub mod error;
pub mod fullduplex;
pub mod halfduplex;
pub mod info;
pub mod nearfield;
pub mod region;
pub mod scalar;

pub use error::{Error, Result};
pub use fullduplex::{
    backward_key_rates, backward_key_region, fg_bounds, fg_jam_one_region, fg_no_prefix_region,
    fg_region, fm_bounds, fm_corner_points, fm_no_prefix_region, fm_region, he_yener_rates,
    he_yener_region,
};
pub use halfduplex::{
    hd_deterministic_bounds, hd_deterministic_region, hg_bounds, hg_eve_information, hg_region,
    hm_bounds, hm_region,
};
pub use info::{binary_entropy, bsc_compose, gamma_rate, gaussian_cdf, mixture_diff_entropy};
pub use region::{boundary_samples, contains, convex_hull, pentagon, union_region};
pub use scalar::Real;

pub type Probability = info::Probability<f64>;
pub type BitRate = info::BitRate<f64>;
pub type RatePoint = region::RatePoint<f64>;
pub type RateBounds = region::RateBounds<f64>;
pub type RateRegion = region::RateRegion<f64>;
pub type ModuloChannel = fullduplex::ModuloChannel<f64>;
pub type ModuloPrefix = fullduplex::ModuloPrefix<f64>;
pub type GaussianChannel = fullduplex::GaussianChannel<f64>;
pub type PowerSplit = fullduplex::PowerSplit<f64>;
pub type SchedulingProbs = halfduplex::SchedulingProbs<f64>;
pub type DeterministicShares = halfduplex::DeterministicShares<f64>;
pub type HalfDuplexModuloParams = halfduplex::HalfDuplexModuloParams<f64>;
pub type HalfDuplexGaussianParams = halfduplex::HalfDuplexGaussianParams<f64>;
pub type GaussianMixture1D = info::GaussianMixture1D<f64>;
pub type MixtureSpec = info::MixtureSpec<f64>;
