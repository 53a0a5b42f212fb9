//! Near-field randomized scheduling against an energy-classifying
//! eavesdropper: geometry, power randomization, classifier simulation and
//! the resulting secrecy rates.
//!
//! Everything here works in `f64`.

pub mod classifier;
pub mod geometry;
pub mod optimize;
pub mod policy;
pub mod rates;
pub mod stats;

pub use classifier::{train_classifier, ClassifierVariant, EnergyClassifier, Mode, PowerSupport};
pub use geometry::{eve_received_power, place_eve, theta_grid, Event, GeometryConfig};
pub use optimize::{
    optimize_tdm, optimize_twoway, OptimizedRates, TdmScenario, ThetaPoint, TwoWayScenario,
};
pub use policy::{PowerLaw, PowerPolicy};
pub use rates::{asymptotic_rmax, main_channel_rate, rate_tdm, rate_twoway, SecrecyRateReport};
pub use stats::{
    estimate_stats_tdm, estimate_stats_twoway, simulate, ClassificationTally, TdmClassifierStats,
    TwoWayClassifierStats,
};
