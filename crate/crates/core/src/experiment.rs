//! Monte Carlo engine for the phase-scan measurement campaign, plus the
//! lower bound on the speed of quantum information.
//!
//! Each 100 s bin is simulated from its own random stream derived from
//! (seed, bin index), so a scan is bit-reproducible regardless of how the
//! bins are scheduled across threads. Within a bin, every candidate pair
//! gets a chromatic arrival-time offset sampled from the filtered pair
//! spectrum and an optional detector-jitter offset; the pair's time ordering
//! is classified relativistically and the model's outcome rule decides the
//! coincidence probability.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use thiserror::Error;

use crate::collapse::outcome_table;
use crate::config::{ConfigError, ExperimentConfig, Model};
use crate::constants::{mm_to_ps, SPEED_OF_LIGHT};
use crate::fiber::{pair_delay_difference, spread_stats, FiberError};
use crate::quantum::{franson_effective_state, franson_projector, Subsystem};
use crate::relativity::{DetectionGeometry, OrderingClass};

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("{name} must be positive, got {value}")]
    NonpositiveInput { name: &'static str, value: f64 },
}

/// One time bin of a simulated scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanBin {
    /// Bin-centre time since the start of the scan, hours.
    pub t_hours: f64,
    /// Lab-frame δt = t_B - t_A at the bin centre, ps.
    pub dt_lab_ps: f64,
    /// The same difference in the moving absorber's frame, ps.
    pub dt_moving_ps: f64,
    /// Ordering class at the bin centre, zero temporal spread.
    pub ordering: OrderingClass,
    /// Registered A₋B₋ coincidences, genuine plus accidental.
    pub coincidences: u64,
    /// Expectation of the accidental contribution.
    pub accidentals_expected: f64,
}

/// Simulate the full scan described by `config`.
pub fn simulate_scan(config: &ExperimentConfig) -> Result<Vec<ScanBin>, ExperimentError> {
    config.validate()?;
    let pump = config.pump_wavelength_nm();
    let center = config.filter.center_nm;
    let dt_center_ps = pair_delay_difference(&config.link_a, &config.link_b, pump, center)?;
    // Both photons traverse the filter, so the pair spectrum is the product
    // of two transmissions: a Gaussian narrower by √2.
    let pair_sigma_nm = config.filter.sigma_nm() / std::f64::consts::SQRT_2;
    // Sampled wavelengths must stay above the pump for the conjugate to exist.
    let max_detuning_nm = (8.0 * pair_sigma_nm).min(center - pump - 1.0).max(0.0);
    let jitter_dt_sigma_s = std::f64::consts::SQRT_2 * config.detector_jitter_sigma_s;

    let state = franson_effective_state();
    let expected_pairs = config.pair_rate_per_s * config.acceptance * config.bin_seconds;
    let accidentals_expected = config.accidentals_per_bin();

    let bins: Vec<ScanBin> = (0..config.bin_count())
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
            rng.set_stream(index as u64);

            let t_hours = (index as f64 + 0.5) * config.bin_seconds / 3600.0;
            let dt_lab_ps = mm_to_ps(config.drift_mm.value_at(t_hours));
            let geometry_center = geometry(config, dt_lab_ps * 1e-12);
            let dt_moving_ps = geometry_center.boost_time_difference(true) * 1e12;

            let delta_a = config.delta_a_rad;
            let delta_b = config.delta_b_at(t_hours);
            let p = franson_projector(Subsystem::Alice, delta_a);
            let q = franson_projector(Subsystem::Bob, delta_b);
            let e_qm = outcome_table(&state, &p, &q, OrderingClass::Simultaneous).correlation();
            let e_bb = outcome_table(&state, &p, &q, OrderingClass::BeforeBefore).correlation();
            let e_aa = outcome_table(&state, &p, &q, OrderingClass::AfterAfter).correlation();

            let candidates = if expected_pairs > 0.0 {
                Poisson::new(expected_pairs)
                    .expect("valid pair mean")
                    .sample(&mut rng) as u64
            } else {
                0
            };

            let lambda_noise = Normal::new(0.0, pair_sigma_nm).expect("valid filter sigma");
            let mut genuine = 0u64;
            for _ in 0..candidates {
                // Chromatic offset from the sampled signal wavelength.
                let d = lambda_noise
                    .sample(&mut rng)
                    .clamp(-max_detuning_nm, max_detuning_nm);
                let chromatic_ps =
                    pair_delay_difference(&config.link_a, &config.link_b, pump, center + d)
                        .expect("wavelength stays above the pump")
                        - dt_center_ps;
                let mut dt_pair_s = (dt_lab_ps + chromatic_ps) * 1e-12;
                if jitter_dt_sigma_s > 0.0 {
                    dt_pair_s += Normal::new(0.0, jitter_dt_sigma_s)
                        .expect("valid jitter sigma")
                        .sample(&mut rng);
                }

                let class = geometry(config, dt_pair_s).classify_ordering();
                let e = match config.model {
                    Model::Qm => e_qm,
                    Model::TestTheory => match class {
                        OrderingClass::BeforeBefore => e_bb,
                        OrderingClass::AfterAfter => e_aa,
                        _ => e_qm,
                    },
                };
                let prob = (0.25 * (1.0 + config.intrinsic_visibility * e)).clamp(0.0, 1.0);
                if rng.random::<f64>() < prob {
                    genuine += 1;
                }
            }

            let accidentals = if accidentals_expected > 0.0 {
                Poisson::new(accidentals_expected)
                    .expect("valid accidental mean")
                    .sample(&mut rng) as u64
            } else {
                0
            };

            ScanBin {
                t_hours,
                dt_lab_ps,
                dt_moving_ps,
                ordering: geometry_center.classify_ordering(),
                coincidences: genuine + accidentals,
                accidentals_expected,
            }
        })
        .collect();

    Ok(bins)
}

fn geometry(config: &ExperimentConfig, dt_s: f64) -> DetectionGeometry {
    DetectionGeometry::new(
        config.separation_km * 1e3,
        dt_s,
        config.wheel_speed_mps,
        0.0,
    )
    .expect("validated scan geometry")
}

/// Contributions to the effective uncertainty on the timing of the two
/// measurements; the bound uses the largest one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyBudget {
    /// Scan resolution: the smallest δt over which a vanished fringe would
    /// still be noticed.
    pub fringe_resolution_s: f64,
    /// Chromatic spread Δτ of the photon pairs over the two links.
    pub dispersion_spread_s: f64,
    /// Uncertainty in the moment of the irreversible transition inside one
    /// detector (zero for black absorbers).
    pub jitter_s: f64,
}

impl UncertaintyBudget {
    pub fn total_s(&self) -> f64 {
        self.fringe_resolution_s
            .max(self.dispersion_spread_s)
            .max(self.jitter_s)
    }
}

/// Evaluate the timing-uncertainty budget of a configuration.
pub fn effective_time_uncertainty(
    config: &ExperimentConfig,
) -> Result<UncertaintyBudget, ExperimentError> {
    let stats = spread_stats(
        &config.link_a,
        &config.link_b,
        &config.filter,
        config.pump_wavelength_nm(),
    )?;
    Ok(UncertaintyBudget {
        fringe_resolution_s: config.fringe_resolution_ps * 1e-12,
        dispersion_spread_s: stats.delta_tau_ps * 1e-12,
        jitter_s: config.detector_jitter_sigma_s,
    })
}

/// Lower bound on the speed of the hypothetical influence between the two
/// measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedBound {
    pub meters_per_second: f64,
    pub multiple_of_c: f64,
}

/// separation / uncertainty, also expressed as a multiple of c.
pub fn speed_bound(
    separation_km: f64,
    effective_time_uncertainty_s: f64,
) -> Result<SpeedBound, ExperimentError> {
    if separation_km.is_nan() || separation_km <= 0.0 {
        return Err(ExperimentError::NonpositiveInput {
            name: "separation_km",
            value: separation_km,
        });
    }
    if effective_time_uncertainty_s.is_nan() || effective_time_uncertainty_s <= 0.0 {
        return Err(ExperimentError::NonpositiveInput {
            name: "effective_time_uncertainty_s",
            value: effective_time_uncertainty_s,
        });
    }
    let mps = separation_km * 1e3 / effective_time_uncertainty_s;
    Ok(SpeedBound {
        meters_per_second: mps,
        multiple_of_c: mps / SPEED_OF_LIGHT,
    })
}
