//! Chromatic dispersion of the two telecom links and its cancellation for
//! energy-correlated photon pairs.
//!
//! Group delay follows the Sellmeier form τ(λ) = aλ² + bλ⁻² + c, rewritten
//! around the zero-dispersion wavelength as
//! τ(λ) = τ₀ + (S₀/8)(λ - λ₀²/λ)² ≈ τ₀ + (S₀/2)(λ - λ₀)².
//!
//! Because the pump fixes ω_s + ω_i, a signal photon detuned to one side of
//! the degenerate wavelength pairs with an idler detuned to the other side;
//! with the pump tuned to the mean zero-dispersion wavelength the quadratic
//! delay cancels between the two links and only small residuals remain.
//!
//! Spread statistics weight the pair delay difference δt(λ) by the spectral
//! density of pairs transmitted through the bandpass filter. The filter sits
//! after the source, so both photons of a pair traverse it and the pair
//! density is the product of the transmission at the signal and idler
//! wavelengths.

use thiserror::Error;

use crate::constants::{fwhm_to_sigma, ps_to_mm, FIBER_GROUP_INDEX, SPEED_OF_LIGHT};
use crate::quadrature::gauss_legendre;

/// Group delay per kilometre of standard fiber at the zero-dispersion
/// wavelength, ps/km (group index 1.468).
pub fn default_tau0_ps_per_km() -> f64 {
    FIBER_GROUP_INDEX / SPEED_OF_LIGHT * 1e15
}

#[derive(Debug, Error, PartialEq)]
pub enum FiberError {
    #[error("invalid fiber link: {reason}")]
    InvalidLink { reason: String },
    #[error("Sellmeier coefficients require a > 0 and b > 0, got a = {a}, b = {b}")]
    NonpositiveCoefficient { a: f64, b: f64 },
    #[error("invalid spectral filter: {reason}")]
    InvalidFilter { reason: String },
    #[error("signal wavelength {signal_nm} nm must lie above the pump {pump_nm} nm")]
    SignalNotAbovePump { pump_nm: f64, signal_nm: f64 },
}

/// One fiber link, described by its length and dispersion parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberLink {
    pub length_km: f64,
    /// Zero-dispersion wavelength λ₀, nm.
    pub lambda0_nm: f64,
    /// Dispersion slope S₀ at λ₀, ps/(nm²·km).
    pub slope_s0: f64,
    /// Group delay at λ₀, ps/km.
    pub tau0_ps_per_km: f64,
}

impl FiberLink {
    pub fn new(
        length_km: f64,
        lambda0_nm: f64,
        slope_s0: f64,
        tau0_ps_per_km: f64,
    ) -> Result<Self, FiberError> {
        let link = Self {
            length_km,
            lambda0_nm,
            slope_s0,
            tau0_ps_per_km,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<(), FiberError> {
        let fail = |reason: String| Err(FiberError::InvalidLink { reason });
        if !(self.length_km.is_finite() && self.lambda0_nm.is_finite() && self.slope_s0.is_finite())
        {
            return fail("non-finite parameter".into());
        }
        if self.length_km <= 0.0 {
            return fail(format!(
                "length must be positive, got {} km",
                self.length_km
            ));
        }
        if !(1200.0 < self.lambda0_nm && self.lambda0_nm < 1400.0) {
            return fail(format!(
                "zero-dispersion wavelength {} nm outside the supported (1200, 1400) nm",
                self.lambda0_nm
            ));
        }
        if self.slope_s0 <= 0.0 {
            return fail(format!(
                "dispersion slope must be positive, got {}",
                self.slope_s0
            ));
        }
        Ok(())
    }

    /// Group delay in ps/km at wavelength `lambda_nm`.
    ///
    /// The exact form keeps the full (λ - λ₀²/λ)² dependence; the
    /// approximation replaces it with the quadratic (λ - λ₀)².
    pub fn group_delay(&self, lambda_nm: f64, exact: bool) -> f64 {
        assert!(lambda_nm > 0.0, "wavelength must be positive");
        let curvature = if exact {
            let u = lambda_nm - self.lambda0_nm * self.lambda0_nm / lambda_nm;
            self.slope_s0 / 8.0 * u * u
        } else {
            let d = lambda_nm - self.lambda0_nm;
            self.slope_s0 / 2.0 * d * d
        };
        self.tau0_ps_per_km + curvature
    }

    /// Dispersion coefficient D = dτ/dλ in ps/(nm·km); zero at λ₀.
    pub fn dispersion_coefficient(&self, lambda_nm: f64, exact: bool) -> f64 {
        assert!(lambda_nm > 0.0, "wavelength must be positive");
        if exact {
            let r = self.lambda0_nm / lambda_nm;
            let u = lambda_nm - self.lambda0_nm * self.lambda0_nm / lambda_nm;
            self.slope_s0 / 4.0 * u * (1.0 + r * r)
        } else {
            self.slope_s0 * (lambda_nm - self.lambda0_nm)
        }
    }

    /// Sellmeier coefficients equivalent to this link's (λ₀, S₀, τ₀).
    pub fn sellmeier(&self) -> SellmeierCoefficients {
        let a = self.slope_s0 / 8.0;
        let b = a * self.lambda0_nm.powi(4);
        let c = self.tau0_ps_per_km - self.slope_s0 / 4.0 * self.lambda0_nm * self.lambda0_nm;
        SellmeierCoefficients { a, b, c }
    }

    /// Build a link from raw Sellmeier coefficients.
    pub fn from_sellmeier(
        length_km: f64,
        coeffs: SellmeierCoefficients,
    ) -> Result<Self, FiberError> {
        let (lambda0_nm, slope_s0) = coeffs.zero_dispersion()?;
        let tau0 = coeffs.c + slope_s0 / 4.0 * lambda0_nm * lambda0_nm;
        Self::new(length_km, lambda0_nm, slope_s0, tau0)
    }
}

/// Coefficients of τ(λ) = aλ² + bλ⁻² + c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellmeierCoefficients {
    /// ps/(nm²·km)
    pub a: f64,
    /// ps·nm²/km
    pub b: f64,
    /// ps/km
    pub c: f64,
}

impl SellmeierCoefficients {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, FiberError> {
        if a <= 0.0 || b <= 0.0 {
            return Err(FiberError::NonpositiveCoefficient { a, b });
        }
        Ok(Self { a, b, c })
    }

    /// (λ₀, S₀) with λ₀ = (b/a)^¼ and S₀ = 8a.
    pub fn zero_dispersion(&self) -> Result<(f64, f64), FiberError> {
        if self.a <= 0.0 || self.b <= 0.0 {
            return Err(FiberError::NonpositiveCoefficient {
                a: self.a,
                b: self.b,
            });
        }
        Ok(((self.b / self.a).powf(0.25), 8.0 * self.a))
    }
}

/// Bandpass filter inserted after the photon-pair source, Gaussian
/// transmission with the given centre (the degenerate wavelength 2λ_p)
/// and FWHM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFilter {
    pub center_nm: f64,
    pub fwhm_nm: f64,
}

impl SpectralFilter {
    pub fn new(center_nm: f64, fwhm_nm: f64) -> Result<Self, FiberError> {
        let filter = Self { center_nm, fwhm_nm };
        filter.validate()?;
        Ok(filter)
    }

    pub fn validate(&self) -> Result<(), FiberError> {
        if !(self.center_nm.is_finite() && self.fwhm_nm.is_finite())
            || self.center_nm <= 0.0
            || self.fwhm_nm <= 0.0
        {
            return Err(FiberError::InvalidFilter {
                reason: format!(
                    "centre {} nm / FWHM {} nm must be positive",
                    self.center_nm, self.fwhm_nm
                ),
            });
        }
        Ok(())
    }

    /// Single-photon transmission standard deviation, FWHM/2.3548.
    pub fn sigma_nm(&self) -> f64 {
        fwhm_to_sigma(self.fwhm_nm)
    }

    /// Transmission at one wavelength (peak 1 at the centre).
    pub fn transmission(&self, lambda_nm: f64) -> f64 {
        let d = (lambda_nm - self.center_nm) / self.sigma_nm();
        (-0.5 * d * d).exp()
    }

    /// Unnormalized spectral density of transmitted pairs as a function of
    /// the signal wavelength: both photons pass the filter, so the density
    /// is the product of the transmission at the signal and at the
    /// energy-conjugate idler wavelength.
    pub fn pair_density(&self, pump_nm: f64, signal_nm: f64) -> f64 {
        match conjugate_wavelength(pump_nm, signal_nm) {
            Ok(idler) => self.transmission(signal_nm) * self.transmission(idler),
            Err(_) => 0.0,
        }
    }
}

/// Temporal spread figures of merit for the pair delay difference δt(λ):
/// Δτ is twice the density-weighted standard deviation, Δτ_max the full
/// range of δt over the central ±2σ of the transmitted pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadStats {
    pub delta_tau_ps: f64,
    pub delta_tau_max_ps: f64,
    /// True when both links are 1 km, i.e. the figures read as ps/km.
    pub per_km: bool,
}

/// Idler wavelength conjugate to a signal photon under ω_p = ω_s + ω_i:
/// 1/λ_i = 1/λ_p - 1/λ_s.
pub fn conjugate_wavelength(pump_nm: f64, signal_nm: f64) -> Result<f64, FiberError> {
    if signal_nm <= pump_nm {
        return Err(FiberError::SignalNotAbovePump { pump_nm, signal_nm });
    }
    Ok(1.0 / (1.0 / pump_nm - 1.0 / signal_nm))
}

/// Delay difference δt(λ) in ps between a signal photon at `signal_nm`
/// travelling link A and its conjugate idler travelling link B.
pub fn pair_delay_difference(
    link_a: &FiberLink,
    link_b: &FiberLink,
    pump_nm: f64,
    signal_nm: f64,
) -> Result<f64, FiberError> {
    let idler = conjugate_wavelength(pump_nm, signal_nm)?;
    Ok(link_a.length_km * link_a.group_delay(signal_nm, true)
        - link_b.length_km * link_b.group_delay(idler, true))
}

/// Spread statistics with the default 201-node quadrature.
pub fn spread_stats(
    link_a: &FiberLink,
    link_b: &FiberLink,
    filter: &SpectralFilter,
    pump_nm: f64,
) -> Result<SpreadStats, FiberError> {
    spread_stats_with_nodes(link_a, link_b, filter, pump_nm, 201)
}

/// Spread statistics with an explicit Gauss–Legendre node count; results
/// are stable to better than 1% under node doubling.
pub fn spread_stats_with_nodes(
    link_a: &FiberLink,
    link_b: &FiberLink,
    filter: &SpectralFilter,
    pump_nm: f64,
    nodes: usize,
) -> Result<SpreadStats, FiberError> {
    assert!(nodes >= 3, "need at least 3 quadrature nodes");
    let sigma = filter.sigma_nm();
    let lo = filter.center_nm - 4.0 * sigma;
    let hi = filter.center_nm + 4.0 * sigma;
    let mid = 0.5 * (lo + hi);
    let halfwidth = 0.5 * (hi - lo);

    let mut weight_sum = 0.0;
    let mut lambda_mean = 0.0;
    let mut dt_mean = 0.0;
    let mut samples = Vec::with_capacity(nodes);
    for (x, w) in gauss_legendre(nodes) {
        let lambda = mid + halfwidth * x;
        let rho = w * filter.pair_density(pump_nm, lambda);
        let dt = pair_delay_difference(link_a, link_b, pump_nm, lambda)?;
        weight_sum += rho;
        lambda_mean += rho * lambda;
        dt_mean += rho * dt;
        samples.push((lambda, rho, dt));
    }
    if weight_sum <= 0.0 {
        return Err(FiberError::InvalidFilter {
            reason: "filter transmits no pairs over the quadrature window".into(),
        });
    }
    lambda_mean /= weight_sum;
    dt_mean /= weight_sum;

    let mut lambda_var = 0.0;
    let mut dt_var = 0.0;
    for &(lambda, rho, dt) in &samples {
        lambda_var += rho * (lambda - lambda_mean) * (lambda - lambda_mean);
        dt_var += rho * (dt - dt_mean) * (dt - dt_mean);
    }
    lambda_var /= weight_sum;
    dt_var /= weight_sum;
    let pair_sigma = lambda_var.sqrt();

    // Full range of δt over the central ±2σ of the pair distribution,
    // scanned on a fixed uniform grid.
    let scan_lo = filter.center_nm - 2.0 * pair_sigma;
    let scan_hi = filter.center_nm + 2.0 * pair_sigma;
    let scan_points = 4 * nodes + 1;
    let mut dt_min = f64::INFINITY;
    let mut dt_max = f64::NEG_INFINITY;
    for i in 0..scan_points {
        let lambda = scan_lo + (scan_hi - scan_lo) * i as f64 / (scan_points - 1) as f64;
        let dt = pair_delay_difference(link_a, link_b, pump_nm, lambda)?;
        dt_min = dt_min.min(dt);
        dt_max = dt_max.max(dt);
    }

    Ok(SpreadStats {
        delta_tau_ps: 2.0 * dt_var.sqrt(),
        delta_tau_max_ps: dt_max - dt_min,
        per_km: link_a.length_km == 1.0 && link_b.length_km == 1.0,
    })
}

/// Pump wavelength giving 2λ_p = (λ₀^A + λ₀^B)/2.
pub fn optimal_pump(link_a: &FiberLink, link_b: &FiberLink) -> f64 {
    (link_a.lambda0_nm + link_b.lambda0_nm) / 4.0
}

/// Result of balancing the two links' group delays at a reference
/// wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqualizationReport {
    /// Length to add to link A (negative = shorten), km.
    pub delta_length_a_km: f64,
    /// Current delay imbalance l_A·τ_A - l_B·τ_B, ps.
    pub imbalance_ps: f64,
    /// The same imbalance expressed in mm of fiber.
    pub imbalance_mm: f64,
}

/// Length adjustment of link A that equalizes the two links' total group
/// delays at `lambda_ref_nm`, plus the present imbalance in ps and in mm.
pub fn equalize_lengths(
    link_a: &FiberLink,
    link_b: &FiberLink,
    lambda_ref_nm: f64,
) -> EqualizationReport {
    let tau_a = link_a.group_delay(lambda_ref_nm, true);
    let tau_b = link_b.group_delay(lambda_ref_nm, true);
    let imbalance_ps = link_a.length_km * tau_a - link_b.length_km * tau_b;
    EqualizationReport {
        delta_length_a_km: -imbalance_ps / tau_a,
        imbalance_ps,
        imbalance_mm: ps_to_mm(imbalance_ps),
    }
}
