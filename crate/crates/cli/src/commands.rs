//! Implementations of the CLI subcommands, kept separate from argument
//! parsing so tests can drive them directly. All output is deterministic
//! for a given configuration and seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use relbell_core::collapse::{
    correlation, correlation_sigma_expansion, outcome_table, prob_before_before, prob_ordered,
    singlet_after_after_correlation,
};
use relbell_core::config::ExperimentConfig;
use relbell_core::experiment::{
    effective_time_uncertainty, simulate_scan, speed_bound, ExperimentError, ScanBin,
};
use relbell_core::fiber::{spread_stats, FiberError, FiberLink, SpectralFilter};
use relbell_core::fit::{detect_visibility_drop, fit_visibility};
use relbell_core::quantum::{Projector, PureTwoQubitState, Subsystem};
use relbell_core::relativity::OrderingClass;

use crate::text::sig9;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error("scan CSV line {line}: {message}")]
    InputCsv { line: usize, message: String },
}

/// Default Δτ sweep grid: five degenerate wavelengths around λ₀ by three
/// filter bandwidths, per km of fiber.
pub const TABLE1_TWO_LAMBDA_P: [f64; 5] = [1309.0, 1309.5, 1310.0, 1310.5, 1311.0];
pub const TABLE1_FWHM: [f64; 3] = [10.0, 40.0, 70.0];

/// Sweep the (2λ_p, Δλ) grid over 1 km of matched fiber (λ₀ = 1310 nm) and
/// emit one CSV row per cell.
pub fn cmd_table1(two_lambda_p: &[f64], fwhm: &[f64]) -> Result<String, CommandError> {
    let link = FiberLink::new(1.0, 1310.0, 0.08, 0.0)?;
    let mut csv =
        String::from("two_lambda_p_nm,fwhm_nm,delta_tau_ps_per_km,delta_tau_max_ps_per_km\n");
    for &center in two_lambda_p {
        for &width in fwhm {
            let filter = SpectralFilter::new(center, width)?;
            let stats = spread_stats(&link, &link, &filter, center / 2.0)?;
            csv.push_str(&format!(
                "{},{},{},{}\n",
                sig9(center),
                sig9(width),
                sig9(stats.delta_tau_ps),
                sig9(stats.delta_tau_max_ps)
            ));
        }
    }
    Ok(csv)
}

/// Scan simulation output: the per-bin CSV and a human-readable summary.
pub struct ScanOutput {
    pub csv: String,
    pub summary: String,
    pub bins: Vec<ScanBin>,
}

pub const SCAN_CSV_HEADER: &str =
    "t_hours,dt_lab_ps,dt_moving_ps,ordering,coincidences,accidentals_expected";

/// Run the scan, fit the fringes, look for visibility drops, and render
/// both the CSV and the summary block.
pub fn cmd_scan(config: &ExperimentConfig, window_bins: usize) -> Result<ScanOutput, CommandError> {
    let bins = simulate_scan(config)?;
    let csv = scan_csv(&bins);
    let summary = scan_summary(config, &bins, window_bins);
    Ok(ScanOutput { csv, summary, bins })
}

pub fn scan_csv(bins: &[ScanBin]) -> String {
    let mut csv = String::from(SCAN_CSV_HEADER);
    csv.push('\n');
    for bin in bins {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig9(bin.t_hours),
            sig9(bin.dt_lab_ps),
            sig9(bin.dt_moving_ps),
            bin.ordering.label(),
            bin.coincidences,
            sig9(bin.accidentals_expected)
        ));
    }
    csv
}

fn scan_summary(config: &ExperimentConfig, bins: &[ScanBin], window_bins: usize) -> String {
    let mut out = String::from("# scan summary\n");
    out.push_str(&format!("model = {}\n", config.model.label()));
    out.push_str(&format!("seed = {}\n", config.rng_seed));
    out.push_str(&format!("bins = {}\n", bins.len()));
    out.push_str(&format!(
        "accidentals_per_bin = {}\n",
        sig9(config.accidentals_per_bin())
    ));
    out.push_str(&visibility_report(
        bins,
        config.accidentals_per_bin(),
        window_bins,
    ));
    out
}

/// Fit + drop-detection report shared by `scan` and `visibility`.
pub fn visibility_report(bins: &[ScanBin], accidentals_per_bin: f64, window_bins: usize) -> String {
    let mut out = String::new();
    match fit_visibility(bins, accidentals_per_bin, None) {
        Ok(fit) => {
            out.push_str(&format!(
                "global_visibility = {} +/- {}\n",
                sig9(fit.visibility),
                sig9(fit.visibility_err)
            ));
            out.push_str(&format!("mean_rate_per_bin = {}\n", sig9(fit.mean_rate)));
            out.push_str(&format!(
                "fringe_period_bins = {}\n",
                sig9(fit.fringe_period_bins)
            ));
        }
        Err(err) => {
            out.push_str(&format!("visibility_fit = failed: {err}\n"));
            return out;
        }
    }
    match detect_visibility_drop(bins, accidentals_per_bin, window_bins) {
        Ok(verdict) => {
            let flagged: Vec<_> = verdict.flagged().collect();
            out.push_str(&format!("window_bins = {window_bins}\n"));
            out.push_str(&format!("flagged_windows = {}\n", flagged.len()));
            for w in flagged {
                out.push_str(&format!(
                    "flagged_window = bins {}..{}, dt_ps [{}, {}], visibility {} +/- {}\n",
                    w.start_bin,
                    w.end_bin,
                    sig9(w.dt_min_ps),
                    sig9(w.dt_max_ps),
                    sig9(w.visibility),
                    sig9(w.visibility_err)
                ));
            }
        }
        Err(err) => {
            out.push_str(&format!("drop_detection = failed: {err}\n"));
        }
    }
    out
}

/// Parse a scan CSV produced by `cmd_scan` back into bins.
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanBin>, CommandError> {
    let mut bins = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || (line == 1 && trimmed == SCAN_CSV_HEADER) {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != 6 {
            return Err(CommandError::InputCsv {
                line,
                message: format!("expected 6 columns, got {}", fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64, CommandError> {
            fields[i].parse().map_err(|e| CommandError::InputCsv {
                line,
                message: format!("column {}: {e}", i + 1),
            })
        };
        let ordering = match fields[3] {
            "before-before" => OrderingClass::BeforeBefore,
            "before-after" => OrderingClass::BeforeAfter,
            "after-before" => OrderingClass::AfterBefore,
            "after-after" => OrderingClass::AfterAfter,
            "simultaneous" => OrderingClass::Simultaneous,
            other => {
                return Err(CommandError::InputCsv {
                    line,
                    message: format!("unknown ordering `{other}`"),
                })
            }
        };
        bins.push(ScanBin {
            t_hours: num(0)?,
            dt_lab_ps: num(1)?,
            dt_moving_ps: num(2)?,
            ordering,
            coincidences: fields[4].parse().map_err(|e| CommandError::InputCsv {
                line,
                message: format!("column 5: {e}"),
            })?,
            accidentals_expected: num(5)?,
        });
    }
    Ok(bins)
}

/// Refit a previously written scan CSV.
pub fn cmd_visibility(csv_text: &str, window_bins: usize) -> Result<String, CommandError> {
    let bins = parse_scan_csv(csv_text)?;
    if bins.is_empty() {
        return Err(CommandError::InputCsv {
            line: 1,
            message: "no data rows".to_string(),
        });
    }
    let accidentals = bins[0].accidentals_expected;
    let mut out = String::from("# visibility refit\n");
    out.push_str(&format!("bins = {}\n", bins.len()));
    out.push_str(&format!("accidentals_per_bin = {}\n", sig9(accidentals)));
    out.push_str(&visibility_report(&bins, accidentals, window_bins));
    Ok(out)
}

/// Report the timing-uncertainty budget and the resulting lower bound on
/// the speed of quantum information.
pub fn cmd_speed_bound(config: &ExperimentConfig) -> Result<String, CommandError> {
    config.validate().map_err(ExperimentError::Config)?;
    let budget = effective_time_uncertainty(config)?;
    let bound = speed_bound(config.separation_km, budget.total_s())?;
    let mut out = String::from("# speed of quantum information, lower bound\n");
    out.push_str(&format!("separation_km = {}\n", sig9(config.separation_km)));
    out.push_str(&format!(
        "fringe_resolution_ps = {}\n",
        sig9(budget.fringe_resolution_s * 1e12)
    ));
    out.push_str(&format!(
        "dispersion_spread_ps = {}\n",
        sig9(budget.dispersion_spread_s * 1e12)
    ));
    out.push_str(&format!(
        "detector_jitter_ps = {}\n",
        sig9(budget.jitter_s * 1e12)
    ));
    out.push_str(&format!(
        "effective_uncertainty_ps = {}\n",
        sig9(budget.total_s() * 1e12)
    ));
    out.push_str(&format!(
        "bound_m_per_s = {}\n",
        sig9(bound.meters_per_second)
    ));
    out.push_str(&format!(
        "bound_multiple_of_c = {}\n",
        sig9(bound.multiple_of_c)
    ));
    Ok(out)
}

/// Outcome of the collapse-model consistency suite.
pub struct CollapseCheck {
    pub report: String,
    pub passed: bool,
}

const CHECK_TOLERANCE: f64 = 1e-10;

/// Run the consistency checks of the ordering-dependent probability rules
/// on `trials` random states and analyzer pairs.
pub fn cmd_collapse_check(trials: u64, seed: u64) -> CollapseCheck {
    let mut out = String::from("# collapse test-theory consistency checks\n");
    out.push_str(&format!("trials = {trials}\nseed = {seed}\n"));

    if trials == 0 {
        out.push_str("warning: zero trials requested, checks pass vacuously\n");
        out.push_str("result: PASS\n");
        return CollapseCheck {
            report: out,
            passed: true,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let singlet = PureTwoQubitState::singlet();
    let mut dev_ordered: f64 = 0.0;
    let mut dev_flatness: f64 = 0.0;
    let mut dev_marginals: f64 = 0.0;
    let mut dev_closed_form: f64 = 0.0;
    let mut min_entry = f64::INFINITY;

    for _ in 0..trials {
        let state = random_state(&mut rng);
        let p = random_projector(&mut rng, Subsystem::Alice);
        let q = random_projector(&mut rng, Subsystem::Bob);

        // Strictly ordered configurations reproduce standard QM.
        let qm = state.joint_prob(&p, &q);
        dev_ordered = dev_ordered
            .max((prob_ordered(&state, &p, &q, OrderingClass::BeforeAfter) - qm).abs())
            .max((prob_ordered(&state, &p, &q, OrderingClass::AfterBefore) - qm).abs());

        // Singlet before-before outcomes are flat at 1/4.
        dev_flatness = dev_flatness.max((prob_before_before(&singlet, &p, &q) - 0.25).abs());

        // One-sided marginals follow the standard law under every rule.
        let p_local = state.local_prob(&p);
        let q_local = state.local_prob(&q);
        for ordering in [
            OrderingClass::BeforeBefore,
            OrderingClass::BeforeAfter,
            OrderingClass::AfterAfter,
            OrderingClass::Simultaneous,
        ] {
            let t = outcome_table(&state, &p, &q, ordering);
            dev_marginals = dev_marginals
                .max((t.p_pp + t.p_pm - p_local).abs())
                .max((t.p_pp + t.p_mp - q_local).abs())
                .max((t.sum() - 1.0).abs());
            if ordering == OrderingClass::AfterAfter {
                min_entry = min_entry.min(t.min_entry());
            }
        }

        // After-after correlation: table route, σ-expansion route and the
        // singlet closed form must coincide.
        let pa = p.bloch();
        let qb = q.bloch();
        let dot = pa[0] * qb[0] + pa[1] * qb[1] + pa[2] * qb[2];
        let closed = singlet_after_after_correlation(dot);
        let via_table = correlation(&singlet, &p, &q, OrderingClass::AfterAfter);
        let via_sigma = correlation_sigma_expansion(&singlet, &p, &q);
        dev_closed_form = dev_closed_form
            .max((via_table - closed).abs())
            .max((via_sigma - closed).abs());
    }

    out.push_str(&format!("max_dev_ordered_vs_qm = {}\n", sig9(dev_ordered)));
    out.push_str(&format!(
        "max_dev_singlet_before_before_flatness = {}\n",
        sig9(dev_flatness)
    ));
    out.push_str(&format!("max_dev_marginals = {}\n", sig9(dev_marginals)));
    out.push_str(&format!(
        "max_dev_after_after_closed_form = {}\n",
        sig9(dev_closed_form)
    ));
    out.push_str(&format!(
        "min_after_after_entry = {} (positivity diagnostic)\n",
        sig9(min_entry)
    ));

    out.push_str("singlet after-after correlation, E = -(a.b)^3:\n");
    for dot in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        out.push_str(&format!(
            "  a.b = {:+.1} -> E = {}\n",
            dot,
            sig9(singlet_after_after_correlation(dot))
        ));
    }

    let passed = dev_ordered < CHECK_TOLERANCE
        && dev_flatness < CHECK_TOLERANCE
        && dev_marginals < CHECK_TOLERANCE
        && dev_closed_form < CHECK_TOLERANCE
        && min_entry > -CHECK_TOLERANCE;
    out.push_str(&format!(
        "result: {} (tolerance {})\n",
        if passed { "PASS" } else { "FAIL" },
        sig9(CHECK_TOLERANCE)
    ));
    CollapseCheck {
        report: out,
        passed,
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> PureTwoQubitState {
    loop {
        let amps = [(); 4].map(|_| {
            relbell_core::Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3 {
            return PureTwoQubitState::normalized(amps).expect("nonzero amplitude vector");
        }
    }
}

fn random_projector(rng: &mut ChaCha8Rng, subsystem: Subsystem) -> Projector {
    loop {
        let v = [(); 3].map(|_| rng.random::<f64>() * 2.0 - 1.0);
        if let Ok(p) = Projector::new(subsystem, v) {
            return p;
        }
    }
}
