//! Scenario configuration for the scan simulation: links, filter, wheel,
//! detector rates, drift and phase schedules, and the physical model under
//! test. `ExperimentConfig::paper_1999()` carries the published campaign
//! parameters and is the source of every default.

use thiserror::Error;

use crate::constants::{ps_to_mm, SPEED_OF_LIGHT};
use crate::fiber::{default_tau0_ps_per_km, FiberError, FiberLink, SpectralFilter};

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid config field {field}: {reason}")]
    InvalidField { field: &'static str, reason: String },
    #[error("schedule {name} must contain at least two points in increasing time order")]
    MalformedSchedule { name: &'static str },
    #[error("schedule {name} ends at {ends_h} h but the scan lasts {scan_h} h")]
    ScheduleTooShort {
        name: &'static str,
        ends_h: f64,
        scan_h: f64,
    },
    #[error(transparent)]
    Fiber(#[from] FiberError),
}

/// Which probability rules drive the simulated coincidences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Standard quantum mechanics for every pair.
    Qm,
    /// The ordering-dependent test theory: flat before-before outcomes,
    /// cubic after-after correlations, QM otherwise.
    TestTheory,
}

impl Model {
    pub fn label(self) -> &'static str {
        match self {
            Model::Qm => "qm",
            Model::TestTheory => "test-theory",
        }
    }
}

/// Piecewise-linear schedule of a quantity against time in hours.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    points: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn new(points: Vec<(f64, f64)>, name: &'static str) -> Result<Self, ConfigError> {
        if points.len() < 2
            || points.windows(2).any(|w| w[1].0 <= w[0].0)
            || points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite())
        {
            return Err(ConfigError::MalformedSchedule { name });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn start_hours(&self) -> f64 {
        self.points[0].0
    }

    pub fn end_hours(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }

    /// Linear interpolation; clamps outside the covered range.
    pub fn value_at(&self, t_hours: f64) -> f64 {
        if t_hours <= self.points[0].0 {
            return self.points[0].1;
        }
        for w in self.points.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if t_hours <= t1 {
                return v0 + (v1 - v0) * (t_hours - t0) / (t1 - t0);
            }
        }
        self.points[self.points.len() - 1].1
    }
}

/// Full description of one measurement campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub link_a: FiberLink,
    pub link_b: FiberLink,
    pub filter: SpectralFilter,
    /// Bee-line Alice–Bob separation, km (enters the relativistic window).
    pub separation_km: f64,
    /// Signed tangential speed of the wheel absorber, m/s; positive recedes.
    pub wheel_speed_mps: f64,
    /// Photon pairs per second reaching the analyzers.
    pub pair_rate_per_s: f64,
    /// Franson central-peak post-selection acceptance folded into rates.
    pub acceptance: f64,
    pub singles_rate_a_per_s: f64,
    pub singles_rate_b_per_s: f64,
    pub dark_rate_a_per_s: f64,
    pub dark_rate_b_per_s: f64,
    pub coincidence_window_s: f64,
    /// Per-detector timing jitter (standard deviation), seconds; zero for
    /// black-surface absorbers, ~1.3e-10 for photon counters.
    pub detector_jitter_sigma_s: f64,
    /// Fringe contrast of the apparatus itself.
    pub intrinsic_visibility: f64,
    /// Uncorrelated background coincidences, counts per 100 s.
    pub accidental_rate_per_100s: f64,
    /// Smallest δt at which a vanished fringe would still be noticed, ps.
    pub fringe_resolution_ps: f64,
    /// Path-length difference (link A minus link B) in mm against hours.
    pub drift_mm: Schedule,
    /// Interferometer-B temperature in °C against hours.
    pub temperature_c: Schedule,
    /// Phase picked up per °C of interferometer-B temperature, rad.
    pub phase_rad_per_c: f64,
    /// Fixed analyzer phase at Alice, rad.
    pub delta_a_rad: f64,
    pub scan_hours: f64,
    pub bin_seconds: f64,
    pub model: Model,
    pub rng_seed: u64,
}

impl ExperimentConfig {
    /// The 1999 Geneva campaign defaults: 10.6 km bee-line, equalized
    /// ~10 km links with λ₀ = 1313.0/1313.3 nm, 10 nm filter centred
    /// 0.5 nm above the mean zero-dispersion wavelength (the conservative
    /// pump-tuning error), 105 m/s wheel, 3 genuine coincidences per
    /// second, 237 accidentals per 100 s, 83% intrinsic visibility, 6 h
    /// scan in 100 s bins with the phase swept ~10·2π by the 30.5→37.5 °C
    /// temperature ramp while δt drifts from +8 ps to -8 ps.
    pub fn paper_1999() -> Self {
        let tau0 = default_tau0_ps_per_km();
        let drift_amplitude_mm = ps_to_mm(8.0);
        Self {
            link_a: FiberLink::new(10.03, 1313.0, 0.08, tau0).expect("preset link A"),
            link_b: FiberLink::new(10.03, 1313.3, 0.08, tau0).expect("preset link B"),
            filter: SpectralFilter::new(1313.65, 10.0).expect("preset filter"),
            separation_km: 10.6,
            wheel_speed_mps: 105.0,
            pair_rate_per_s: 48.0,
            acceptance: 0.25,
            singles_rate_a_per_s: 2000.0,
            singles_rate_b_per_s: 2000.0,
            dark_rate_a_per_s: 11_250.0,
            dark_rate_b_per_s: 11_250.0,
            coincidence_window_s: 1.35e-8,
            detector_jitter_sigma_s: 0.0,
            intrinsic_visibility: 0.83,
            accidental_rate_per_100s: 237.0,
            fringe_resolution_ps: 1.5,
            drift_mm: Schedule::new(
                vec![(0.0, drift_amplitude_mm), (6.0, -drift_amplitude_mm)],
                "drift_mm",
            )
            .expect("preset drift"),
            temperature_c: Schedule::new(vec![(0.0, 30.5), (6.0, 37.5)], "temperature_c")
                .expect("preset temperature"),
            phase_rad_per_c: 8.98,
            delta_a_rad: 0.0,
            scan_hours: 6.0,
            bin_seconds: 100.0,
            model: Model::Qm,
            rng_seed: 1999,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = |field: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::InvalidField {
                    field,
                    reason: format!("must be positive, got {v}"),
                })
            }
        };
        let nonnegative = |field: &'static str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::InvalidField {
                    field,
                    reason: format!("must be nonnegative, got {v}"),
                })
            }
        };
        self.link_a.validate()?;
        self.link_b.validate()?;
        self.filter.validate()?;
        positive("separation_km", self.separation_km)?;
        positive("scan_hours", self.scan_hours)?;
        positive("bin_seconds", self.bin_seconds)?;
        positive("fringe_resolution_ps", self.fringe_resolution_ps)?;
        nonnegative("pair_rate_per_s", self.pair_rate_per_s)?;
        nonnegative("singles_rate_a_per_s", self.singles_rate_a_per_s)?;
        nonnegative("singles_rate_b_per_s", self.singles_rate_b_per_s)?;
        nonnegative("dark_rate_a_per_s", self.dark_rate_a_per_s)?;
        nonnegative("dark_rate_b_per_s", self.dark_rate_b_per_s)?;
        nonnegative("coincidence_window_s", self.coincidence_window_s)?;
        nonnegative("detector_jitter_sigma_s", self.detector_jitter_sigma_s)?;
        nonnegative("accidental_rate_per_100s", self.accidental_rate_per_100s)?;
        if !(0.0..=1.0).contains(&self.intrinsic_visibility) {
            return Err(ConfigError::InvalidField {
                field: "intrinsic_visibility",
                reason: format!("must lie in [0, 1], got {}", self.intrinsic_visibility),
            });
        }
        if !(0.0..=1.0).contains(&self.acceptance) || self.acceptance == 0.0 {
            return Err(ConfigError::InvalidField {
                field: "acceptance",
                reason: format!("must lie in (0, 1], got {}", self.acceptance),
            });
        }
        if self.wheel_speed_mps.abs() >= SPEED_OF_LIGHT || !self.wheel_speed_mps.is_finite() {
            return Err(ConfigError::InvalidField {
                field: "wheel_speed_mps",
                reason: format!("must be slower than light, got {}", self.wheel_speed_mps),
            });
        }
        for (name, schedule) in [
            ("drift_mm", &self.drift_mm),
            ("temperature_c", &self.temperature_c),
        ] {
            if schedule.end_hours() + 1e-9 < self.scan_hours {
                return Err(ConfigError::ScheduleTooShort {
                    name,
                    ends_h: schedule.end_hours(),
                    scan_h: self.scan_hours,
                });
            }
        }
        Ok(())
    }

    /// Pump wavelength implied by the filter centre (degenerate pairs at
    /// the centre).
    pub fn pump_wavelength_nm(&self) -> f64 {
        self.filter.center_nm / 2.0
    }

    /// Number of bins in the scan.
    pub fn bin_count(&self) -> usize {
        (self.scan_hours * 3600.0 / self.bin_seconds).round() as usize
    }

    /// Expected accidental coincidences per bin.
    pub fn accidentals_per_bin(&self) -> f64 {
        self.accidental_rate_per_100s * self.bin_seconds / 100.0
    }

    /// Accidental rate implied by the singles and the coincidence window,
    /// counts per 100 s; a cross-check against `accidental_rate_per_100s`.
    pub fn accidentals_from_singles_per_100s(&self) -> f64 {
        (self.singles_rate_a_per_s + self.dark_rate_a_per_s)
            * (self.singles_rate_b_per_s + self.dark_rate_b_per_s)
            * self.coincidence_window_s
            * 100.0
    }

    /// Analyzer phase at Bob at scan time `t_hours`.
    pub fn delta_b_at(&self, t_hours: f64) -> f64 {
        self.phase_rad_per_c * self.temperature_c.value_at(t_hours)
    }
}
