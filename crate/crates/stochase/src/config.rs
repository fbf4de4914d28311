//! Flat key/value sweep configuration files.
//!
//! Format: one `key = value` pair per line; `#` starts a comment; blank
//! lines ignored. Unknown and duplicate keys are errors. Recognized keys:
//!
//! | key               | meaning                                   | default |
//! |-------------------|-------------------------------------------|---------|
//! | family            | `rs` or `bch`                             | required|
//! | n, k              | code length and dimension                 | required|
//! | m                 | field degree override                     | from n  |
//! | primitive_poly    | field polynomial (0x-hex or decimal)      | built-in|
//! | modulation        | `bpsk`, `psk`, `qam`                      | required|
//! | order             | constellation order                       | 2 (bpsk)|
//! | channel           | `awgn` or `rayleigh`                      | required|
//! | decoder           | `hdd`, `s-sca`, `b-sca`, `ssbt-sca`, `s-ca`, `ml-oracle` | required|
//! | tau, theta, beta, lambda, dedup, early_exit | Chase parameters | library defaults |
//! | ebno_start, ebno_stop, ebno_step | sweep grid in dB | stop = start, step 1 |
//! | stop_frame_errors | frame errors per point                    | 100     |
//! | max_frames        | frame cap per point                       | 100000  |
//! | seed              | master seed                               | 1       |

use crate::channel::ChannelKind;
use crate::chase::ChaseConfig;
use crate::codecs::CodeSpec;
use crate::galois::FieldParams;
use crate::modem::{ConstellationSpec, Scheme};
use crate::sim::{DecoderKind, SweepConfig};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, msg: String },
    UnknownKey { line: usize, key: String },
    DuplicateKey { line: usize, key: String },
    MissingKey(&'static str),
    BadValue { key: &'static str, msg: String },
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, msg } => write!(f, "line {line}: {msg}"),
            ConfigError::UnknownKey { line, key } => write!(f, "line {line}: unknown key '{key}'"),
            ConfigError::DuplicateKey { line, key } => {
                write!(f, "line {line}: duplicate key '{key}'")
            }
            ConfigError::MissingKey(key) => write!(f, "missing required key '{key}'"),
            ConfigError::BadValue { key, msg } => write!(f, "key '{key}': {msg}"),
            ConfigError::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

const KNOWN_KEYS: &[&str] = &[
    "family", "n", "k", "m", "primitive_poly", "modulation", "order", "channel", "decoder",
    "tau", "theta", "beta", "lambda", "dedup", "ebno_start", "ebno_stop", "ebno_step",
    "stop_frame_errors", "max_frames", "seed", "early_exit",
];

struct KeyMap(HashMap<String, String>);

impl KeyMap {
    fn take(&mut self, key: &'static str) -> Option<String> {
        self.0.remove(key)
    }

    fn required(&mut self, key: &'static str) -> Result<String, ConfigError> {
        self.take(key).ok_or(ConfigError::MissingKey(key))
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| ConfigError::BadValue { key, msg: format!("'{v}': {e}") }),
        }
    }

    fn parse_or<T: std::str::FromStr>(
        &mut self,
        key: &'static str,
        default: T,
    ) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }
}

fn parse_bool(key: &'static str, v: &str) -> Result<bool, ConfigError> {
    match v {
        "true" | "on" | "1" | "yes" => Ok(true),
        "false" | "off" | "0" | "no" => Ok(false),
        _ => Err(ConfigError::BadValue { key, msg: format!("'{v}' is not a boolean") }),
    }
}

fn parse_int_auto(key: &'static str, v: &str) -> Result<u32, ConfigError> {
    let parsed = if let Some(hex) = v.strip_prefix("0x").or_else(|| v.strip_prefix("0X")) {
        u32::from_str_radix(hex, 16)
    } else {
        v.parse::<u32>()
    };
    parsed.map_err(|e| ConfigError::BadValue { key, msg: format!("'{v}': {e}") })
}

/// Eb/N0 grid start..=stop in fixed steps, computed by index so the point
/// count is stable against accumulation drift.
pub fn ebno_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, ConfigError> {
    if stop < start {
        return Err(ConfigError::Invalid("ebno_stop must be >= ebno_start".into()));
    }
    if stop > start && step <= 0.0 {
        return Err(ConfigError::Invalid("ebno_step must be > 0 for a multi-point sweep".into()));
    }
    if stop == start {
        return Ok(vec![start]);
    }
    let count = ((stop - start) / step).round() as i64;
    let count = if (start + count as f64 * step) > stop + 1e-9 { count - 1 } else { count };
    Ok((0..=count.max(0)).map(|i| start + i as f64 * step).collect())
}

/// Parses the flat key/value text into a full sweep configuration.
pub fn parse_sweep_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut map: HashMap<String, String> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            msg: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line: line_no, key });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax { line: line_no, msg: format!("empty value for '{key}'") });
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(ConfigError::DuplicateKey { line: line_no, key });
        }
    }
    let mut keys = KeyMap(map);

    // Code.
    let family = keys.required("family")?;
    let n: usize = keys.parse("n")?.ok_or(ConfigError::MissingKey("n"))?;
    let k: usize = keys.parse("k")?.ok_or(ConfigError::MissingKey("k"))?;
    let field = match (keys.parse::<u32>("m")?, keys.take("primitive_poly")) {
        (None, None) => None,
        (m, poly) => {
            let m = m.ok_or(ConfigError::MissingKey("m"))?;
            let fp = match poly {
                Some(p) => FieldParams::new(m, parse_int_auto("primitive_poly", &p)?),
                None => FieldParams::with_default_poly(m),
            }
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            Some(fp)
        }
    };
    let code = match (family.as_str(), field) {
        ("rs", None) => CodeSpec::reed_solomon(n, k),
        ("rs", Some(fp)) => CodeSpec::reed_solomon_with_field(n, k, fp),
        ("bch", None) => CodeSpec::bch(n, k),
        ("bch", Some(fp)) => CodeSpec::bch_with_field(n, k, fp),
        _ => {
            return Err(ConfigError::BadValue {
                key: "family",
                msg: format!("'{family}' is not 'rs' or 'bch'"),
            })
        }
    }
    .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    // Modulation.
    let modulation = keys.required("modulation")?;
    let scheme = match modulation.as_str() {
        "bpsk" => Scheme::Bpsk,
        "psk" => Scheme::Psk,
        "qam" => Scheme::Qam,
        _ => {
            return Err(ConfigError::BadValue {
                key: "modulation",
                msg: format!("'{modulation}' is not 'bpsk', 'psk' or 'qam'"),
            })
        }
    };
    let order: usize = keys.parse_or("order", 2)?;
    let modulation = ConstellationSpec::new(scheme, order)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;

    // Channel and decoder.
    let channel = match keys.required("channel")?.as_str() {
        "awgn" => ChannelKind::Awgn,
        "rayleigh" => ChannelKind::Rayleigh,
        other => {
            return Err(ConfigError::BadValue {
                key: "channel",
                msg: format!("'{other}' is not 'awgn' or 'rayleigh'"),
            })
        }
    };
    let decoder = match keys.required("decoder")?.as_str() {
        "hdd" => DecoderKind::Hdd,
        "s-ca" => DecoderKind::SCa,
        "b-sca" => DecoderKind::BSca,
        "ssbt-sca" => DecoderKind::SsbtSca,
        "s-sca" => DecoderKind::SSca,
        "ml-oracle" => DecoderKind::MlOracle,
        other => {
            return Err(ConfigError::BadValue {
                key: "decoder",
                msg: format!(
                    "'{other}' is not one of hdd, s-ca, b-sca, ssbt-sca, s-sca, ml-oracle"
                ),
            })
        }
    };

    // Chase parameters.
    let defaults = ChaseConfig::default();
    let chase = ChaseConfig {
        tau: keys.parse_or("tau", defaults.tau)?,
        theta: keys.parse_or("theta", defaults.theta)?,
        beta: keys.parse_or("beta", defaults.beta)?,
        lambda: keys.parse_or("lambda", defaults.lambda)?,
        dedup: match keys.take("dedup") {
            Some(v) => parse_bool("dedup", &v)?,
            None => defaults.dedup,
        },
        early_exit: match keys.take("early_exit") {
            Some(v) => parse_bool("early_exit", &v)?,
            None => defaults.early_exit,
        },
        ..defaults
    };
    chase.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;

    // Sweep grid and stopping.
    let ebno_start: f64 =
        keys.parse("ebno_start")?.ok_or(ConfigError::MissingKey("ebno_start"))?;
    let ebno_stop: f64 = keys.parse_or("ebno_stop", ebno_start)?;
    let ebno_step: f64 = keys.parse_or("ebno_step", 1.0)?;
    let ebno_points = ebno_grid(ebno_start, ebno_stop, ebno_step)?;

    let cfg = SweepConfig {
        code,
        modulation,
        channel,
        decoder,
        chase,
        ebno_points,
        stop_frame_errors: keys.parse_or("stop_frame_errors", 100)?,
        max_frames: keys.parse_or("max_frames", 100_000)?,
        master_seed: keys.parse_or("seed", 1)?,
    };
    debug_assert!(keys.0.is_empty(), "unconsumed keys: {:?}", keys.0);
    Ok(cfg)
}

// ====================================================================
// tests
// ====================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codecs::CodeFamily;

    const BASE: &str = "\
# demo sweep
family = rs
n = 15
k = 11
modulation = qam
order = 16
channel = awgn
decoder = s-sca
tau = 64
ebno_start = 4
ebno_stop = 6
ebno_step = 0.5
seed = 9
";

    #[test]
    fn parses_complete_config() {
        let cfg = parse_sweep_config(BASE).unwrap();
        assert_eq!(cfg.code.family, CodeFamily::ReedSolomon);
        assert_eq!((cfg.code.n, cfg.code.k, cfg.code.t), (15, 11, 2));
        assert_eq!(cfg.modulation.order, 16);
        assert_eq!(cfg.channel, ChannelKind::Awgn);
        assert_eq!(cfg.decoder, DecoderKind::SSca);
        assert_eq!(cfg.chase.tau, 64);
        assert_eq!(cfg.chase.theta, 0.05); // default preserved
        assert_eq!(cfg.ebno_points, vec![4.0, 4.5, 5.0, 5.5, 6.0]);
        assert_eq!(cfg.stop_frame_errors, 100);
        assert_eq!(cfg.max_frames, 100_000);
        assert_eq!(cfg.master_seed, 9);
    }

    #[test]
    fn single_point_defaults() {
        let text = "\
family = bch
n = 15
k = 7
modulation = bpsk
channel = awgn
decoder = b-sca
ebno_start = 5
";
        let cfg = parse_sweep_config(text).unwrap();
        assert_eq!(cfg.ebno_points, vec![5.0]);
        assert_eq!(cfg.modulation.order, 2);
        assert_eq!((cfg.code.n, cfg.code.k, cfg.code.t), (15, 7, 2));
    }

    #[test]
    fn explicit_field_override() {
        let text = "\
family = rs
n = 15
k = 11
m = 4
primitive_poly = 0x13
modulation = psk
order = 16
channel = rayleigh
decoder = hdd
ebno_start = 10
";
        let cfg = parse_sweep_config(text).unwrap();
        assert_eq!(cfg.code.field.m(), 4);
        assert_eq!(cfg.code.field.poly(), 0x13);
        assert_eq!(cfg.channel, ChannelKind::Rayleigh);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let text = format!("{BASE}bogus_key = 3\n");
        assert!(matches!(
            parse_sweep_config(&text),
            Err(ConfigError::UnknownKey { key, .. }) if key == "bogus_key"
        ));
        let text = format!("{BASE}tau = 32\n");
        assert!(matches!(
            parse_sweep_config(&text),
            Err(ConfigError::DuplicateKey { key, .. }) if key == "tau"
        ));
    }

    #[test]
    fn rejects_missing_and_malformed() {
        assert!(matches!(
            parse_sweep_config("family = rs\n"),
            Err(ConfigError::MissingKey("n"))
        ));
        assert!(matches!(
            parse_sweep_config("family rs\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        let text = BASE.replace("tau = 64", "tau = lots");
        assert!(matches!(parse_sweep_config(&text), Err(ConfigError::BadValue { key: "tau", .. })));
        let text = BASE.replace("decoder = s-sca", "decoder = viterbi");
        assert!(matches!(
            parse_sweep_config(&text),
            Err(ConfigError::BadValue { key: "decoder", .. })
        ));
    }

    #[test]
    fn rejects_invalid_combinations() {
        // Bad code parameters surface as Invalid.
        let text = BASE.replace("n = 15", "n = 16");
        assert!(matches!(parse_sweep_config(&text), Err(ConfigError::Invalid(_))));
        // Chase parameter range checks apply at parse time.
        let text = format!("{BASE}theta = 2.0\n");
        assert!(matches!(parse_sweep_config(&text), Err(ConfigError::Invalid(_))));
        // Grid errors.
        let text = BASE.replace("ebno_stop = 6", "ebno_stop = 3");
        assert!(matches!(parse_sweep_config(&text), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn ebno_grid_counts() {
        assert_eq!(ebno_grid(0.0, 2.0, 0.5).unwrap(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(ebno_grid(3.0, 3.0, 1.0).unwrap(), vec![3.0]);
        // A grid whose span is not an exact multiple of the step stays
        // inside the endpoint.
        let g = ebno_grid(0.0, 1.2, 0.5).unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        // No drift for many repeated additions.
        let g = ebno_grid(0.0, 10.0, 0.1).unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = format!("\n# header\n\n{BASE}\n# trailing\n");
        assert!(parse_sweep_config(&text).is_ok());
    }
}
