//! Physical constants and unit conversions shared across the crate.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Group index of standard single-mode fiber near 1310 nm, used for the
/// millimetre-of-fiber to picosecond conversions.
pub const FIBER_GROUP_INDEX: f64 = 1.468;

/// Delay accumulated per millimetre of fiber, in ps (about 4.897 ps/mm).
pub fn ps_per_mm() -> f64 {
    FIBER_GROUP_INDEX / SPEED_OF_LIGHT * 1e9
}

/// Convert a fiber path-length difference in mm to a delay in ps.
pub fn mm_to_ps(mm: f64) -> f64 {
    mm * ps_per_mm()
}

/// Convert a delay in ps to the equivalent fiber path length in mm.
pub fn ps_to_mm(ps: f64) -> f64 {
    ps / ps_per_mm()
}

/// Ratio between the FWHM and the standard deviation of a Gaussian,
/// 2·sqrt(2·ln 2) ≈ 2.3548.
pub fn fwhm_to_sigma(fwhm: f64) -> f64 {
    fwhm / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt())
}
