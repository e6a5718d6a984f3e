//! Byte-stable number formatting for reports and CSV output.
//!
//! All floating-point values are printed in scientific notation with nine
//! significant digits, a '.' decimal separator and '\n' line endings, so
//! identical runs produce identical bytes on every platform.

/// Nine-significant-digit scientific representation.
pub fn sig9(value: f64) -> String {
    if value == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{value:.8e}")
}
