//! Least-squares fringe fitting: global visibility estimation and
//! sliding-window drop detection.
//!
//! The model is R₀(1 + V cos(ωx + φ)) over bin index x. The fringe
//! frequency is seeded from the dominant discrete-frequency component and
//! refined by a golden-section search on the profiled sum of squares; the
//! amplitude and offset then come from a linear solve, with statistical
//! errors from the fit covariance.

use thiserror::Error;

use crate::experiment::ScanBin;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {need} bins in the fit window, got {have}")]
    TooFewBins { have: usize, need: usize },
    #[error("no fringe detectable: {reason}")]
    NoFringe { reason: String },
    #[error("fit window {start}..{end} is out of range for {len} bins")]
    BadWindow {
        start: usize,
        end: usize,
        len: usize,
    },
}

const MIN_FIT_BINS: usize = 8;

/// Result of a fringe fit on (accidental-subtracted) bin counts.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityFit {
    pub visibility: f64,
    pub visibility_err: f64,
    /// Fitted mean rate R₀, counts per bin.
    pub mean_rate: f64,
    /// Phase of the cosine at the first bin of the window, rad.
    pub phase_offset: f64,
    pub fringe_period_bins: f64,
    /// Fitted bin range, half-open.
    pub window: (usize, usize),
    pub residual_rms: f64,
    /// Whether the selected frequency stands clearly above the noise floor.
    /// When it does not, `visibility_err` includes the expected amplitude of
    /// the largest pure-noise component, so that a fit to featureless data
    /// stays consistent with zero.
    pub fringe_significant: bool,
}

/// Fit the coincidence fringes of a scan after subtracting the expected
/// accidentals per bin. `window` is a half-open bin range; `None` fits the
/// whole scan.
pub fn fit_visibility(
    bins: &[ScanBin],
    accidentals_per_bin: f64,
    window: Option<(usize, usize)>,
) -> Result<VisibilityFit, FitError> {
    let (start, end) = resolve_window(bins.len(), window)?;
    let series: Vec<f64> = bins[start..end]
        .iter()
        .map(|b| b.coincidences as f64 - accidentals_per_bin)
        .collect();
    let mut fit = fit_visibility_series(&series)?;
    fit.window = (start, end);
    Ok(fit)
}

/// Core fit on a real-valued, already background-subtracted series.
pub fn fit_visibility_series(series: &[f64]) -> Result<VisibilityFit, FitError> {
    let n = series.len();
    if n < MIN_FIT_BINS {
        return Err(FitError::TooFewBins {
            have: n,
            need: MIN_FIT_BINS,
        });
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    if mean.is_nan() || mean <= 0.0 {
        return Err(FitError::NoFringe {
            reason: format!("mean rate {mean:.3} per bin is not positive"),
        });
    }
    let variance = series.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / nf;
    if variance == 0.0 {
        // A perfectly constant series carries no fringe at all.
        return Ok(VisibilityFit {
            visibility: 0.0,
            visibility_err: 0.0,
            mean_rate: mean,
            phase_offset: 0.0,
            fringe_period_bins: f64::INFINITY,
            window: (0, n),
            residual_rms: 0.0,
            fringe_significant: false,
        });
    }

    // Seed the frequency from the strongest discrete component.
    let mut powers = Vec::with_capacity(n / 2);
    let mut best_k = 1usize;
    let mut best_power = f64::NEG_INFINITY;
    for k in 1..=n / 2 {
        let omega = 2.0 * std::f64::consts::PI * k as f64 / nf;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, y) in series.iter().enumerate() {
            let arg = omega * i as f64;
            re += (y - mean) * arg.cos();
            im += (y - mean) * arg.sin();
        }
        let power = re * re + im * im;
        powers.push(power);
        if power > best_power {
            best_power = power;
            best_k = k;
        }
    }
    powers.sort_by(f64::total_cmp);
    let median_power = powers[powers.len() / 2];
    // For white noise the maximum of n/2 exponential powers sits around
    // ln(n/2)/ln 2 medians; a clear fringe towers far above that.
    let fringe_significant = best_power > 20.0 * median_power.max(f64::MIN_POSITIVE);

    let lo = (2.0 * std::f64::consts::PI * (best_k as f64 - 1.0) / nf).max(1e-4);
    let hi =
        (2.0 * std::f64::consts::PI * (best_k as f64 + 1.0) / nf).min(std::f64::consts::PI - 1e-9);
    let omega = golden_section(|w| sse_at(series, w).0, lo, hi);

    let (sse, c, a, b, inv_diag) = {
        let (sse, params) = sse_at(series, omega);
        (sse, params.0, params.1, params.2, params.3)
    };
    if c.is_nan() || c <= 0.0 {
        return Err(FitError::NoFringe {
            reason: format!("fitted offset {c:.3} is not positive"),
        });
    }
    let amplitude = a.hypot(b);
    let visibility = amplitude / c;
    let phase_offset = (-b).atan2(a);

    let dof = (n.saturating_sub(4)).max(1) as f64;
    let sigma_sq = sse / dof;
    let (var_c, var_a, var_b) = (
        sigma_sq * inv_diag[0],
        sigma_sq * inv_diag[1],
        sigma_sq * inv_diag[2],
    );
    let var_amp = if amplitude > 0.0 {
        (a * a * var_a + b * b * var_b) / (amplitude * amplitude)
    } else {
        var_a.max(var_b)
    };
    let mut visibility_err = (var_amp / (c * c) + amplitude * amplitude / c.powi(4) * var_c).sqrt();
    if !fringe_significant {
        // Picking the largest of ~n/2 noise components biases the amplitude
        // upward by about 2σ√(ln(n/2)/n); fold that floor into the error.
        let noise_floor = 2.0 * sigma_sq.sqrt() * ((nf / 2.0).ln().max(1.0) / nf).sqrt() / c;
        visibility_err = visibility_err.max(noise_floor);
    }

    Ok(VisibilityFit {
        visibility,
        visibility_err,
        mean_rate: c,
        phase_offset,
        fringe_period_bins: 2.0 * std::f64::consts::PI / omega,
        window: (0, n),
        residual_rms: (sse / nf).sqrt(),
        fringe_significant,
    })
}

/// Profiled SSE at a trial frequency: solves the linear subproblem
/// y = C + A cos(ωx) + B sin(ωx) and returns the residual sum of squares,
/// the parameters, and the diagonal of (XᵀX)⁻¹ for error propagation.
#[allow(clippy::type_complexity)]
fn sse_at(series: &[f64], omega: f64) -> (f64, (f64, f64, f64, [f64; 3])) {
    let n = series.len() as f64;
    let (mut sc, mut ss, mut scc, mut sss, mut scs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut syc, mut sys) = (0.0, 0.0, 0.0);
    for (i, y) in series.iter().enumerate() {
        let arg = omega * i as f64;
        let (s, c) = arg.sin_cos();
        sc += c;
        ss += s;
        scc += c * c;
        sss += s * s;
        scs += c * s;
        sy += y;
        syc += y * c;
        sys += y * s;
    }
    let m = [[n, sc, ss], [sc, scc, scs], [ss, scs, sss]];
    let rhs = [sy, syc, sys];
    let (sol, inv_diag) = solve3(m, rhs);
    let (c0, a, b) = (sol[0], sol[1], sol[2]);
    let mut sse = 0.0;
    for (i, y) in series.iter().enumerate() {
        let arg = omega * i as f64;
        let r = y - (c0 + a * arg.cos() + b * arg.sin());
        sse += r * r;
    }
    (sse, (c0, a, b, inv_diag))
}

/// Solve a symmetric 3×3 system, also returning the diagonal of the
/// inverse matrix.
#[allow(clippy::needless_range_loop)]
fn solve3(m: [[f64; 3]; 3], rhs: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-12 {
        return ([0.0; 3], [f64::INFINITY; 3]);
    }
    let cof = |r: usize, c: usize| -> f64 {
        let (r1, r2) = match r {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c1, c2) = match c {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
        if (r + c).is_multiple_of(2) {
            minor
        } else {
            -minor
        }
    };
    let mut inv = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            inv[r][c] = cof(c, r) / det;
        }
    }
    let mut sol = [0.0; 3];
    for r in 0..3 {
        sol[r] = (0..3).map(|c| inv[r][c] * rhs[c]).sum();
    }
    (sol, [inv[0][0], inv[1][1], inv[2][2]])
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn resolve_window(len: usize, window: Option<(usize, usize)>) -> Result<(usize, usize), FitError> {
    let (start, end) = window.unwrap_or((0, len));
    if start >= end || end > len {
        return Err(FitError::BadWindow { start, end, len });
    }
    Ok((start, end))
}

/// Visibility of one sliding window, fitted with the global fringe
/// frequency and phase held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowVisibility {
    pub start_bin: usize,
    pub end_bin: usize,
    /// Signed amplitude relative to the global fringe phase, divided by the
    /// window's mean rate.
    pub visibility: f64,
    pub visibility_err: f64,
    pub dt_min_ps: f64,
    pub dt_max_ps: f64,
    pub flagged: bool,
}

/// Verdict of the sliding-window search for visibility drops.
#[derive(Debug, Clone, PartialEq)]
pub struct DropVerdict {
    pub global: VisibilityFit,
    pub windows: Vec<WindowVisibility>,
    pub window_bins: usize,
}

impl DropVerdict {
    pub fn flagged(&self) -> impl Iterator<Item = &WindowVisibility> {
        self.windows.iter().filter(|w| w.flagged)
    }

    pub fn any_flagged(&self) -> bool {
        self.windows.iter().any(|w| w.flagged)
    }
}

/// Slide a `window_bins`-wide window over the scan and flag every window
/// whose visibility falls below (global visibility - 3 × window error).
pub fn detect_visibility_drop(
    bins: &[ScanBin],
    accidentals_per_bin: f64,
    window_bins: usize,
) -> Result<DropVerdict, FitError> {
    if window_bins < MIN_FIT_BINS || bins.len() < 3 * window_bins {
        return Err(FitError::TooFewBins {
            have: bins.len(),
            need: 3 * window_bins.max(MIN_FIT_BINS),
        });
    }
    let global = fit_visibility(bins, accidentals_per_bin, None)?;
    let omega = 2.0 * std::f64::consts::PI / global.fringe_period_bins;
    let stride = (window_bins / 4).max(1);

    let mut windows = Vec::new();
    let mut start = 0;
    loop {
        let end = start + window_bins;
        if end > bins.len() {
            break;
        }
        let w = if global.fringe_period_bins.is_finite() {
            window_fit(
                bins,
                accidentals_per_bin,
                start,
                end,
                omega,
                global.phase_offset,
            )
        } else {
            // Constant global series: no fringe anywhere, nothing to drop from.
            let mut w = window_stub(bins, start, end);
            w.visibility = 0.0;
            w
        };
        let flagged = w.visibility < global.visibility - 3.0 * w.visibility_err
            && w.visibility_err.is_finite();
        windows.push(WindowVisibility { flagged, ..w });
        if end == bins.len() {
            break;
        }
        start += stride;
    }

    Ok(DropVerdict {
        global,
        windows,
        window_bins,
    })
}

fn window_stub(bins: &[ScanBin], start: usize, end: usize) -> WindowVisibility {
    let dt_min = bins[start..end]
        .iter()
        .map(|b| b.dt_lab_ps)
        .fold(f64::INFINITY, f64::min);
    let dt_max = bins[start..end]
        .iter()
        .map(|b| b.dt_lab_ps)
        .fold(f64::NEG_INFINITY, f64::max);
    WindowVisibility {
        start_bin: start,
        end_bin: end,
        visibility: 0.0,
        visibility_err: 0.0,
        dt_min_ps: dt_min,
        dt_max_ps: dt_max,
        flagged: false,
    }
}

/// Two-parameter linear fit y = C + D·cos(ωx + φ) with the fringe shape
/// fixed; x is the global bin index so the phase stays continuous.
fn window_fit(
    bins: &[ScanBin],
    accidentals_per_bin: f64,
    start: usize,
    end: usize,
    omega: f64,
    phase: f64,
) -> WindowVisibility {
    let n = (end - start) as f64;
    let (mut su, mut suu, mut sy, mut syu) = (0.0, 0.0, 0.0, 0.0);
    for (i, bin) in bins[start..end].iter().enumerate() {
        let u = (omega * (start + i) as f64 + phase).cos();
        let y = bin.coincidences as f64 - accidentals_per_bin;
        su += u;
        suu += u * u;
        sy += y;
        syu += y * u;
    }
    let det = n * suu - su * su;
    let mut w = window_stub(bins, start, end);
    if det.abs() < 1e-9 {
        w.visibility_err = f64::INFINITY;
        return w;
    }
    let c = (suu * sy - su * syu) / det;
    let d = (n * syu - su * sy) / det;
    let mut sse = 0.0;
    for (i, bin) in bins[start..end].iter().enumerate() {
        let u = (omega * (start + i) as f64 + phase).cos();
        let y = bin.coincidences as f64 - accidentals_per_bin;
        let r = y - c - d * u;
        sse += r * r;
    }
    let sigma_sq = sse / (n - 2.0);
    let var_c = sigma_sq * suu / det;
    let var_d = sigma_sq * n / det;
    if c > 0.0 {
        w.visibility = d / c;
        w.visibility_err = (var_d / (c * c) + d * d * var_c / c.powi(4)).sqrt();
    } else {
        w.visibility = 0.0;
        w.visibility_err = f64::INFINITY;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relativity::OrderingClass;

    fn synthetic_bins(values: &[f64], accidentals: f64) -> Vec<ScanBin> {
        values
            .iter()
            .enumerate()
            .map(|(i, &v)| ScanBin {
                t_hours: i as f64 / 36.0,
                dt_lab_ps: 8.0 - i as f64 * 0.074,
                dt_moving_ps: 0.0,
                ordering: OrderingClass::BeforeAfter,
                coincidences: (v + accidentals).round() as u64,
                accidentals_expected: accidentals,
            })
            .collect()
    }

    #[test]
    fn noiseless_series_recovered_to_1e6() {
        let omega = 2.0 * std::f64::consts::PI / 21.6;
        let series: Vec<f64> = (0..216)
            .map(|i| 100.0 * (1.0 + 0.8 * (omega * i as f64 + 0.7).cos()))
            .collect();
        let fit = fit_visibility_series(&series).unwrap();
        assert!(
            (fit.visibility - 0.8).abs() < 1e-6,
            "visibility {}",
            fit.visibility
        );
        assert!((fit.mean_rate - 100.0).abs() < 1e-4);
        assert!((fit.fringe_period_bins - 21.6).abs() < 1e-3);
        let phase_err = (fit.phase_offset - 0.7).rem_euclid(2.0 * std::f64::consts::PI);
        let wrapped = phase_err.min(2.0 * std::f64::consts::PI - phase_err);
        assert!(wrapped < 1e-4, "phase error {wrapped}");
    }

    #[test]
    fn accidental_subtraction_path() {
        let omega = 2.0 * std::f64::consts::PI / 20.0;
        let values: Vec<f64> = (0..200)
            .map(|i| 1000.0 * (1.0 + 0.5 * (omega * i as f64).cos()))
            .collect();
        let bins = synthetic_bins(&values, 237.0);
        let fit = fit_visibility(&bins, 237.0, None).unwrap();
        // Counts are rounded to integers, so recovery is only count-level.
        assert!(
            (fit.visibility - 0.5).abs() < 0.01,
            "visibility {}",
            fit.visibility
        );
    }

    #[test]
    fn all_zero_counts_fail_gracefully() {
        let bins = synthetic_bins(&vec![0.0; 100], 0.0);
        match fit_visibility(&bins, 0.0, None) {
            Err(FitError::NoFringe { .. }) => {}
            other => panic!("expected NoFringe, got {other:?}"),
        }
    }

    #[test]
    fn constant_series_has_zero_visibility() {
        let fit = fit_visibility_series(&vec![500.0; 100]).unwrap();
        assert_eq!(fit.visibility, 0.0);
        assert!(fit.fringe_period_bins.is_infinite());
    }

    #[test]
    fn too_few_bins_rejected() {
        assert!(matches!(
            fit_visibility_series(&[1.0, 2.0, 3.0]),
            Err(FitError::TooFewBins { .. })
        ));
    }

    #[test]
    fn bad_window_rejected() {
        let bins = synthetic_bins(&vec![10.0; 50], 0.0);
        assert!(matches!(
            fit_visibility(&bins, 0.0, Some((40, 30))),
            Err(FitError::BadWindow { .. })
        ));
        assert!(matches!(
            fit_visibility(&bins, 0.0, Some((0, 51))),
            Err(FitError::BadWindow { .. })
        ));
    }

    #[test]
    fn drop_detector_finds_suppressed_stretch() {
        // Fringes everywhere except a flat stretch in the middle third.
        let omega = 2.0 * std::f64::consts::PI / 24.0;
        let values: Vec<f64> = (0..216)
            .map(|i| {
                let modulated = if (72..144).contains(&i) { 0.0 } else { 0.8 };
                2000.0 * (1.0 + modulated * (omega * i as f64).cos())
            })
            .collect();
        let bins = synthetic_bins(&values, 0.0);
        let verdict = detect_visibility_drop(&bins, 0.0, 36).unwrap();
        assert!(verdict.any_flagged());
        // Windows fully inside the flat stretch must be flagged.
        for w in &verdict.windows {
            if w.start_bin >= 78 && w.end_bin <= 138 {
                assert!(
                    w.flagged,
                    "window {}..{} not flagged",
                    w.start_bin, w.end_bin
                );
                assert!(w.visibility.abs() < 0.1);
            }
        }
        // Windows fully outside must not be.
        for w in &verdict.windows {
            if w.end_bin <= 66 || w.start_bin >= 150 {
                assert!(!w.flagged, "window {}..{} flagged", w.start_bin, w.end_bin);
            }
        }
    }

    #[test]
    fn constant_input_flags_nothing() {
        let bins = synthetic_bins(&vec![300.0; 144], 0.0);
        let verdict = detect_visibility_drop(&bins, 0.0, 36).unwrap();
        assert!(!verdict.any_flagged());
        assert_eq!(verdict.global.visibility, 0.0);
    }

    #[test]
    fn drop_detector_needs_three_windows() {
        let bins = synthetic_bins(&vec![300.0; 80], 0.0);
        assert!(matches!(
            detect_visibility_drop(&bins, 0.0, 36),
            Err(FitError::TooFewBins { .. })
        ));
    }

    #[test]
    fn window_dt_ranges_are_reported() {
        let omega = 2.0 * std::f64::consts::PI / 24.0;
        let values: Vec<f64> = (0..216)
            .map(|i| 500.0 * (1.0 + 0.8 * (omega * i as f64).cos()))
            .collect();
        let bins = synthetic_bins(&values, 0.0);
        let verdict = detect_visibility_drop(&bins, 0.0, 36).unwrap();
        let w = &verdict.windows[0];
        assert!(w.dt_max_ps <= 8.0 && w.dt_min_ps < w.dt_max_ps);
    }
}
