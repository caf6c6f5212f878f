//! Scenario configuration: a flat `key = value` file with `#` comments.
//!
//! Keys are the SI and decibel quantities listed in [`KEYS`]; decibel values
//! are converted to linear/SI at parse time so the math core never sees a dB.
//! Unknown keys are errors, absent keys fall back to the documented defaults,
//! and `d_21_m` defaults to `d_12_m` because every symmetric scenario wants
//! a reciprocal inter-user link.

use std::fmt;

use coopnet_core::{Geometry64, RadioParams64, Targets64};

/// Every key the config format accepts.
pub const KEYS: &[&str] = &[
    "f_c_hz",
    "f_s_hz",
    "b_c_hz",
    "b_s_hz",
    "n0_dbm_hz",
    "g_u1_dbi",
    "g_u2_dbi",
    "g_bs_dbi",
    "sigma2_12",
    "sigma2_21",
    "sigma2_1b",
    "sigma2_2b",
    "d_1b_m",
    "d_2b_m",
    "d_12_m",
    "d_21_m",
    "pout_target",
    "rate_bps",
    "intra_exchange_double_rate",
];

/// A fully validated scenario: radio parameters, geometry, targets, and the
/// intra-scheme exchange-rate switch.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScenarioConfig {
    pub radio: RadioParams64,
    pub geo: Geometry64,
    pub tgt: Targets64,
    pub intra_exchange_double_rate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Parse { line: usize, message: String },
    UnknownKey { line: usize, key: String },
    Invalid { key: &'static str, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse { line, message } => {
                write!(f, "config parse error on line {line}: {message}")
            }
            ConfigError::UnknownKey { line, key } => {
                write!(f, "unknown config key `{key}` on line {line}")
            }
            ConfigError::Invalid { key, message } => {
                write!(f, "invalid value for `{key}`: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

fn dbm_per_hz_to_w_per_hz(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

fn w_per_hz_to_dbm_per_hz(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

fn dbi_to_linear(dbi: f64) -> f64 {
    10f64.powf(dbi / 10.0)
}

fn linear_to_dbi(g: f64) -> f64 {
    10.0 * g.log10()
}

#[derive(Default)]
struct RawConfig {
    values: [Option<f64>; 18],
    intra_exchange_double_rate: Option<bool>,
}

/// Parses the `key = value` format. Later occurrences of a key override
/// earlier ones.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut raw = RawConfig::default();
    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.split_once('#') {
            Some((head, _)) => head,
            None => full_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| ConfigError::UnknownKey {
                line: line_no,
                key: key.to_string(),
            })?;
        if key == "intra_exchange_double_rate" {
            raw.intra_exchange_double_rate =
                Some(value.parse::<bool>().map_err(|_| ConfigError::Parse {
                    line: line_no,
                    message: format!("expected `true` or `false`, got `{value}`"),
                })?);
        } else {
            raw.values[slot] = Some(value.parse::<f64>().map_err(|_| ConfigError::Parse {
                line: line_no,
                message: format!("expected a number, got `{value}`"),
            })?);
        }
    }
    build(raw)
}

fn build(raw: RawConfig) -> Result<ScenarioConfig, ConfigError> {
    let key_index = |key: &str| KEYS.iter().position(|k| *k == key).unwrap();
    let get = |key: &str, default: f64| raw.values[key_index(key)].unwrap_or(default);

    let defaults = ScenarioConfig::default();
    let d_12 = get("d_12_m", defaults.geo.d_12);
    let cfg = ScenarioConfig {
        radio: RadioParams64 {
            f_c: get("f_c_hz", defaults.radio.f_c),
            f_s: get("f_s_hz", defaults.radio.f_s),
            b_c: get("b_c_hz", defaults.radio.b_c),
            b_s: get("b_s_hz", defaults.radio.b_s),
            n0: raw.values[key_index("n0_dbm_hz")]
                .map(dbm_per_hz_to_w_per_hz)
                .unwrap_or(defaults.radio.n0),
            g_u1: raw.values[key_index("g_u1_dbi")]
                .map(dbi_to_linear)
                .unwrap_or(defaults.radio.g_u1),
            g_u2: raw.values[key_index("g_u2_dbi")]
                .map(dbi_to_linear)
                .unwrap_or(defaults.radio.g_u2),
            g_bs: raw.values[key_index("g_bs_dbi")]
                .map(dbi_to_linear)
                .unwrap_or(defaults.radio.g_bs),
            sigma2_12: get("sigma2_12", defaults.radio.sigma2_12),
            sigma2_21: get("sigma2_21", defaults.radio.sigma2_21),
            sigma2_1b: get("sigma2_1b", defaults.radio.sigma2_1b),
            sigma2_2b: get("sigma2_2b", defaults.radio.sigma2_2b),
        },
        geo: Geometry64 {
            d_1b: get("d_1b_m", defaults.geo.d_1b),
            d_2b: get("d_2b_m", defaults.geo.d_2b),
            d_12,
            // reciprocal link unless stated otherwise
            d_21: get("d_21_m", d_12),
        },
        tgt: Targets64 {
            p_out: get("pout_target", defaults.tgt.p_out),
            rate: get("rate_bps", defaults.tgt.rate),
        },
        intra_exchange_double_rate: raw
            .intra_exchange_double_rate
            .unwrap_or(defaults.intra_exchange_double_rate),
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &ScenarioConfig) -> Result<(), ConfigError> {
    let positive: [(&'static str, f64); 16] = [
        ("f_c_hz", cfg.radio.f_c),
        ("f_s_hz", cfg.radio.f_s),
        ("b_c_hz", cfg.radio.b_c),
        ("b_s_hz", cfg.radio.b_s),
        ("n0_dbm_hz", cfg.radio.n0),
        ("g_u1_dbi", cfg.radio.g_u1),
        ("g_u2_dbi", cfg.radio.g_u2),
        ("g_bs_dbi", cfg.radio.g_bs),
        ("sigma2_12", cfg.radio.sigma2_12),
        ("sigma2_21", cfg.radio.sigma2_21),
        ("sigma2_1b", cfg.radio.sigma2_1b),
        ("sigma2_2b", cfg.radio.sigma2_2b),
        ("d_1b_m", cfg.geo.d_1b),
        ("d_2b_m", cfg.geo.d_2b),
        ("d_12_m", cfg.geo.d_12),
        ("d_21_m", cfg.geo.d_21),
    ];
    for (key, value) in positive {
        if !(value.is_finite() && value > 0.0) {
            return Err(ConfigError::Invalid {
                key,
                message: format!("must be strictly positive and finite, got {value}"),
            });
        }
    }
    if !(cfg.tgt.p_out > 0.0 && cfg.tgt.p_out < 1.0) {
        return Err(ConfigError::Invalid {
            key: "pout_target",
            message: format!("must lie strictly inside (0, 1), got {}", cfg.tgt.p_out),
        });
    }
    if !(cfg.tgt.rate.is_finite() && cfg.tgt.rate > 0.0) {
        return Err(ConfigError::Invalid {
            key: "rate_bps",
            message: format!("must be strictly positive and finite, got {}", cfg.tgt.rate),
        });
    }
    Ok(())
}

impl ScenarioConfig {
    /// Renders the config in its own file format. Parsing the result yields
    /// this config back (exactly for linear keys; decibel keys round-trip
    /// through the dB conversion, which is exact for 0 dBi / -174 dBm
    /// defaults and accurate to rounding otherwise).
    pub fn to_config_string(&self) -> String {
        format!(
            "f_c_hz = {}\n\
             f_s_hz = {}\n\
             b_c_hz = {}\n\
             b_s_hz = {}\n\
             n0_dbm_hz = {}\n\
             g_u1_dbi = {}\n\
             g_u2_dbi = {}\n\
             g_bs_dbi = {}\n\
             sigma2_12 = {}\n\
             sigma2_21 = {}\n\
             sigma2_1b = {}\n\
             sigma2_2b = {}\n\
             d_1b_m = {}\n\
             d_2b_m = {}\n\
             d_12_m = {}\n\
             d_21_m = {}\n\
             pout_target = {}\n\
             rate_bps = {}\n\
             intra_exchange_double_rate = {}\n",
            self.radio.f_c,
            self.radio.f_s,
            self.radio.b_c,
            self.radio.b_s,
            w_per_hz_to_dbm_per_hz(self.radio.n0),
            linear_to_dbi(self.radio.g_u1),
            linear_to_dbi(self.radio.g_u2),
            linear_to_dbi(self.radio.g_bs),
            self.radio.sigma2_12,
            self.radio.sigma2_21,
            self.radio.sigma2_1b,
            self.radio.sigma2_2b,
            self.geo.d_1b,
            self.geo.d_2b,
            self.geo.d_12,
            self.geo.d_21,
            self.tgt.p_out,
            self.tgt.rate,
            self.intra_exchange_double_rate,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_yields_defaults() {
        assert_eq!(parse_config("").unwrap(), ScenarioConfig::default());
        assert_eq!(
            parse_config("# only a comment\n\n").unwrap(),
            ScenarioConfig::default()
        );
    }

    #[test]
    fn single_override_couples_reciprocal_distance() {
        let cfg = parse_config("d_12_m = 5").unwrap();
        let mut expected = ScenarioConfig::default();
        expected.geo.d_12 = 5.0;
        expected.geo.d_21 = 5.0;
        assert_eq!(cfg, expected);
    }

    #[test]
    fn explicit_d21_decouples() {
        let cfg = parse_config("d_12_m = 5\nd_21_m = 9").unwrap();
        assert_eq!(cfg.geo.d_12, 5.0);
        assert_eq!(cfg.geo.d_21, 9.0);
    }

    #[test]
    fn db_keys_convert_at_the_boundary() {
        let cfg = parse_config("g_u1_dbi = 3\nn0_dbm_hz = -170").unwrap();
        assert!((cfg.radio.g_u1 - 10f64.powf(0.3)).abs() < 1e-15);
        assert!((cfg.radio.n0 - 1e-20).abs() < 1e-32);
    }

    #[test]
    fn out_of_range_target_names_the_key() {
        let err = parse_config("pout_target = 1.5").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                key: "pout_target",
                ..
            }
        ));
        assert!(err.to_string().contains("pout_target"));
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = parse_config("d_12_m = 5\nbogus_key = 1").unwrap_err();
        assert_eq!(
            err,
            ConfigError::UnknownKey {
                line: 2,
                key: "bogus_key".into()
            }
        );
    }

    #[test]
    fn malformed_lines_report_line() {
        let err = parse_config("just words").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
        let err = parse_config("d_12_m = abc").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
    }

    #[test]
    fn comments_and_flag_parse() {
        let cfg =
            parse_config("d_12_m = 7 # close users\nintra_exchange_double_rate = true\n").unwrap();
        assert_eq!(cfg.geo.d_12, 7.0);
        assert!(cfg.intra_exchange_double_rate);
    }

    #[test]
    fn default_round_trips_exactly() {
        let cfg = ScenarioConfig::default();
        assert_eq!(parse_config(&cfg.to_config_string()).unwrap(), cfg);
    }

    #[test]
    fn modified_config_round_trips() {
        let cfg = parse_config(
            "f_c_hz = 9e8\nb_c_hz = 1e6\ng_u1_dbi = 2.5\nsigma2_1b = 0.7\n\
             d_1b_m = 750\npout_target = 0.01\nrate_bps = 2e6\n",
        )
        .unwrap();
        let again = parse_config(&cfg.to_config_string()).unwrap();
        assert!((again.radio.g_u1 / cfg.radio.g_u1 - 1.0).abs() < 1e-12);
        assert_eq!(again.radio.f_c, cfg.radio.f_c);
        assert_eq!(again.geo, cfg.geo);
        assert_eq!(again.tgt, cfg.tgt);
    }
}
