//! Numerical model of a long-distance two-photon Bell experiment in which one
//! absorber moves fast enough that the two detection events swap their time
//! ordering between inertial frames.
//!
//! The crate is organised around the pieces of that experiment:
//!
//! - [`relativity`]: boosts of detection-time differences between the
//!   laboratory frame and the moving-absorber frame, and classification of the
//!   joint time ordering of the two measurements.
//! - [`quantum`]: minimal two-qubit state/projector calculus and the Franson
//!   interferometer probability law.
//! - [`collapse`]: the rival test theory in which outcome probabilities depend
//!   on the frame-dependent ordering of the measurements (flat correlations in
//!   the before-before case, a cubic correlation law in the after-after case).
//! - [`fiber`]: Sellmeier group delay of the two telecom links, photon-pair
//!   dispersion cancellation around the zero-dispersion wavelength, and the
//!   temporal-spread statistics that set the timing resolution.
//! - [`config`] / [`experiment`] / [`fit`]: a seeded Monte Carlo engine for the
//!   phase-scan measurement campaign, fringe-visibility fitting, drop
//!   detection, and the lower bound on the speed of quantum information.

pub mod collapse;
pub mod config;
pub mod constants;
pub mod experiment;
pub mod fiber;
pub mod fit;
pub mod quadrature;
pub mod quantum;
pub mod relativity;

pub use num_complex::Complex64;

pub use collapse::{
    correlation, outcome_table, prob_after_after, prob_before_before, prob_ordered,
};
pub use config::{ExperimentConfig, Model, Schedule};
pub use experiment::{simulate_scan, speed_bound, ScanBin, SpeedBound, UncertaintyBudget};
pub use fiber::{FiberLink, SellmeierCoefficients, SpectralFilter, SpreadStats};
pub use fit::{detect_visibility_drop, fit_visibility, DropVerdict, VisibilityFit};
pub use quantum::{
    franson_effective_state, franson_probs, franson_projector, InterferometerSettings,
    OutcomeTable, Projector, PureTwoQubitState, Subsystem,
};
pub use relativity::{DetectionGeometry, OrderingClass};
