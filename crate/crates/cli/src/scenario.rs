//! Scenario file parsing.
//!
//! Scenarios are plain-text documents with `[section]` headers and
//! `key = value` lines; `#` starts a comment. Every field defaults to the
//! paper-1999 preset, units are part of the key names, and unknown sections
//! or keys are rejected with the offending line.
//!
//! Schedules are comma-separated `hours:value` pairs, e.g.
//! `drift_mm = 0:1.63, 6:-1.63`.

use std::path::Path;

use thiserror::Error;

use relbell_core::config::{ConfigError, ExperimentConfig, Model, Schedule};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: unknown key `{key}` in section [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: key `{key}` appears outside any section")]
    KeyOutsideSection { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {message}")]
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Load a scenario file, overlaying it on the paper-1999 preset.
pub fn load_scenario(path: &Path) -> Result<ExperimentConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

/// Parse a scenario document, overlaying it on the paper-1999 preset.
pub fn parse_scenario(text: &str) -> Result<ExperimentConfig, ScenarioError> {
    let mut config = ExperimentConfig::paper_1999();
    let mut section: Option<String> = None;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ScenarioError::Syntax {
                    line,
                    text: content.to_string(),
                })?
                .trim()
                .to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(ScenarioError::UnknownSection { line, name });
            }
            section = Some(name);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ScenarioError::Syntax {
                line,
                text: content.to_string(),
            })?;
        let key = key.trim();
        let value = value.trim();
        let section = section
            .as_deref()
            .ok_or_else(|| ScenarioError::KeyOutsideSection {
                line,
                key: key.to_string(),
            })?;
        apply(&mut config, section, key, value, line)?;
    }

    config.validate()?;
    Ok(config)
}

const SECTIONS: [&str; 7] = [
    "links",
    "filter",
    "wheel",
    "detectors",
    "schedules",
    "model",
    "seed",
];

fn apply(
    config: &mut ExperimentConfig,
    section: &str,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ScenarioError> {
    let unknown = || ScenarioError::UnknownKey {
        line,
        section: section.to_string(),
        key: key.to_string(),
    };
    match section {
        "links" => {
            let slot = match key {
                "a_length_km" => &mut config.link_a.length_km,
                "a_lambda0_nm" => &mut config.link_a.lambda0_nm,
                "a_slope_ps_nm2_km" => &mut config.link_a.slope_s0,
                "a_tau0_ps_km" => &mut config.link_a.tau0_ps_per_km,
                "b_length_km" => &mut config.link_b.length_km,
                "b_lambda0_nm" => &mut config.link_b.lambda0_nm,
                "b_slope_ps_nm2_km" => &mut config.link_b.slope_s0,
                "b_tau0_ps_km" => &mut config.link_b.tau0_ps_per_km,
                _ => return Err(unknown()),
            };
            *slot = number(key, value, line)?;
        }
        "filter" => {
            let slot = match key {
                "center_nm" => &mut config.filter.center_nm,
                "fwhm_nm" => &mut config.filter.fwhm_nm,
                _ => return Err(unknown()),
            };
            *slot = number(key, value, line)?;
        }
        "wheel" => {
            let slot = match key {
                "separation_km" => &mut config.separation_km,
                "speed_m_per_s" => &mut config.wheel_speed_mps,
                _ => return Err(unknown()),
            };
            *slot = number(key, value, line)?;
        }
        "detectors" => {
            let slot = match key {
                "pair_rate_per_s" => &mut config.pair_rate_per_s,
                "acceptance" => &mut config.acceptance,
                "singles_a_per_s" => &mut config.singles_rate_a_per_s,
                "singles_b_per_s" => &mut config.singles_rate_b_per_s,
                "dark_a_per_s" => &mut config.dark_rate_a_per_s,
                "dark_b_per_s" => &mut config.dark_rate_b_per_s,
                "coincidence_window_s" => &mut config.coincidence_window_s,
                "jitter_sigma_s" => &mut config.detector_jitter_sigma_s,
                "intrinsic_visibility" => &mut config.intrinsic_visibility,
                "accidentals_per_100s" => &mut config.accidental_rate_per_100s,
                "fringe_resolution_ps" => &mut config.fringe_resolution_ps,
                _ => return Err(unknown()),
            };
            *slot = number(key, value, line)?;
        }
        "schedules" => match key {
            "scan_hours" => config.scan_hours = number(key, value, line)?,
            "bin_seconds" => config.bin_seconds = number(key, value, line)?,
            "phase_rad_per_c" => config.phase_rad_per_c = number(key, value, line)?,
            "delta_a_rad" => config.delta_a_rad = number(key, value, line)?,
            "drift_mm" => config.drift_mm = schedule("drift_mm", value, line)?,
            "temperature_c" => config.temperature_c = schedule("temperature_c", value, line)?,
            _ => return Err(unknown()),
        },
        "model" => match key {
            "model" => {
                config.model = match value {
                    "qm" => Model::Qm,
                    "test-theory" => Model::TestTheory,
                    other => {
                        return Err(ScenarioError::BadValue {
                            line,
                            key: key.to_string(),
                            message: format!("expected qm or test-theory, got `{other}`"),
                        })
                    }
                }
            }
            _ => return Err(unknown()),
        },
        "seed" => match key {
            "seed" => {
                config.rng_seed = value.parse().map_err(|e| ScenarioError::BadValue {
                    line,
                    key: key.to_string(),
                    message: format!("{e}"),
                })?
            }
            _ => return Err(unknown()),
        },
        _ => unreachable!("sections are validated on entry"),
    }
    Ok(())
}

fn number(key: &str, value: &str, line: usize) -> Result<f64, ScenarioError> {
    value.parse().map_err(|e| ScenarioError::BadValue {
        line,
        key: key.to_string(),
        message: format!("{e}"),
    })
}

fn schedule(key: &'static str, value: &str, line: usize) -> Result<Schedule, ScenarioError> {
    let mut points = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (t, v) = part
            .split_once(':')
            .ok_or_else(|| ScenarioError::BadValue {
                line,
                key: key.to_string(),
                message: format!("expected `hours:value`, got `{part}`"),
            })?;
        let parse = |s: &str| -> Result<f64, ScenarioError> {
            s.trim().parse().map_err(|e| ScenarioError::BadValue {
                line,
                key: key.to_string(),
                message: format!("{e}"),
            })
        };
        points.push((parse(t)?, parse(v)?));
    }
    Schedule::new(points, key).map_err(ScenarioError::Config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_preset() {
        let cfg = parse_scenario("").unwrap();
        assert_eq!(cfg, ExperimentConfig::paper_1999());
    }

    #[test]
    fn overrides_apply() {
        let cfg = parse_scenario(
            "# comment\n\
             [wheel]\n\
             speed_m_per_s = -105.0\n\
             [model]\n\
             model = test-theory\n\
             [seed]\n\
             seed = 42\n\
             [schedules]\n\
             drift_mm = 0:-0.5, 3:0.5, 6:1.0\n",
        )
        .unwrap();
        assert_eq!(cfg.wheel_speed_mps, -105.0);
        assert_eq!(cfg.model, Model::TestTheory);
        assert_eq!(cfg.rng_seed, 42);
        assert_eq!(cfg.drift_mm.points().len(), 3);
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_scenario("[wheel]\nspeed_mph = 3\n").unwrap_err();
        match err {
            ScenarioError::UnknownKey { line, key, section } => {
                assert_eq!(line, 2);
                assert_eq!(key, "speed_mph");
                assert_eq!(section, "wheel");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_section_rejected() {
        assert!(matches!(
            parse_scenario("[engine]\n"),
            Err(ScenarioError::UnknownSection { line: 1, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_scenario("[wheel]\nseparation_km\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Syntax { line: 2, .. }));
    }

    #[test]
    fn values_are_validated() {
        let err = parse_scenario("[detectors]\nintrinsic_visibility = 1.4\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Config(_)));
        let err = parse_scenario("[links]\na_lambda0_nm = 1500\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Config(_)));
    }

    #[test]
    fn key_outside_section_rejected() {
        assert!(matches!(
            parse_scenario("seed = 1\n"),
            Err(ScenarioError::KeyOutsideSection { line: 1, .. })
        ));
    }
}
