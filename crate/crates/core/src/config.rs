//! Run configuration: flat `key = value` text, command-line overrides and
//! an effective-parameter dump that parses back to the same value.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::quadrature::GridOverrides;
use crate::reconstruct::Band;
use crate::specfun::HoConstants;
use crate::systems::{EigenstateSpec, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Every user-settable parameter. `None` grid fields fall back to the
/// oscillator defaults (ΔT = π/16ω, Δx_f = 0.1, ...) or the stationary-system
/// defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// free, circle, hardwall, squarewell or ho.
    pub system: String,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub radius: f64,
    pub width: f64,
    /// k for the line and half-line, ℓ on the circle, n in the well and
    /// the oscillator.
    pub quantum: f64,
    pub t: f64,
    /// Final point for the single-point stages (phasor, window).
    pub x_f: f64,
    pub dp_c: Option<f64>,
    pub p_c_max: Option<f64>,
    pub dx_f: Option<f64>,
    pub x_f_max: Option<f64>,
    pub dt: Option<f64>,
    pub n_t: Option<usize>,
    pub epsilon: Option<f64>,
    pub n_p_min: Option<f64>,
    pub n_p_slope: Option<f64>,
    pub images: Option<u32>,
    /// Reconstruction band; both unset means the full band.
    pub p1: Option<f64>,
    pub p2: Option<f64>,
    pub out: String,
    pub format: Format,
    /// Worker threads; unset uses all hardware threads.
    pub threads: Option<usize>,
    /// Seed for randomized self-checks.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: "ho".into(),
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            radius: 1.0,
            width: PI,
            quantum: 0.0,
            t: 32.0 * PI,
            x_f: 0.0,
            dp_c: None,
            p_c_max: None,
            dx_f: None,
            x_f_max: None,
            dt: None,
            n_t: None,
            epsilon: None,
            n_p_min: None,
            n_p_slope: None,
            images: None,
            p1: None,
            p2: None,
            out: ".".into(),
            format: Format::Csv,
            threads: None,
            seed: 0,
        }
    }
}

/// Reads a number, accepting multiples of π: `pi`, `32pi`, `32*pi`,
/// `pi/16`, `-2*pi/3`.
pub fn parse_number(text: &str) -> Option<f64> {
    let s = text.trim();
    if let Ok(v) = s.parse::<f64>() {
        return Some(v);
    }
    let (coef, rest) = s.split_once("pi")?;
    let coef = coef.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" => 1.0,
        "-" => -1.0,
        _ => coef.parse::<f64>().ok()?,
    };
    let rest = rest.trim();
    let d = if rest.is_empty() {
        1.0
    } else {
        rest.strip_prefix('/')?.trim().parse::<f64>().ok()?
    };
    Some(c * PI / d)
}

fn json_scalar(text: &str) -> Value {
    let s = text.trim();
    if s.eq_ignore_ascii_case("none") || s.eq_ignore_ascii_case("auto") {
        return Value::Null;
    }
    if let Ok(u) = s.parse::<u64>() {
        return Value::Number(u.into());
    }
    if let Some(v) = parse_number(s) {
        if let Some(n) = Number::from_f64(v) {
            return Value::Number(n);
        }
    }
    Value::String(s.to_string())
}

/// Splits `key = value`, trimming both sides.
pub fn split_pair(text: &str) -> Result<(String, String)> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| Error::Usage(format!("expected key=value, got '{text}'")))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// Flat config text: one `key = value` per line, `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(split_pair)
        .collect()
}

impl RunConfig {
    /// Applies overrides in order; later keys win.
    pub fn with_pairs(&self, pairs: &[(String, String)]) -> Result<Self> {
        let Value::Object(mut map) = serde_json::to_value(self).expect("config serializes") else {
            unreachable!()
        };
        for (k, v) in pairs {
            if !map.contains_key(k) {
                return Err(Error::Usage(format!("unknown config key '{k}'")));
            }
            map.insert(k.clone(), json_scalar(v));
        }
        Self::from_map(map)
    }

    fn from_map(map: Map<String, Value>) -> Result<Self> {
        serde_json::from_value(Value::Object(map)).map_err(|e| Error::Usage(format!("bad config value: {e}")))
    }

    /// Reads a config file on top of `self`: flat text, or a JSON manifest
    /// written by an earlier run (its `config` object is used).
    pub fn with_file(&self, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
            let obj = match v.get("config") {
                Some(c) => c.clone(),
                None => v,
            };
            let Value::Object(over) = obj else {
                return Err(Error::Usage(format!("{}: expected a JSON object", path.display())));
            };
            let Value::Object(mut map) = serde_json::to_value(self).expect("config serializes") else {
                unreachable!()
            };
            for (k, v) in over {
                if !map.contains_key(&k) {
                    return Err(Error::Usage(format!("unknown config key '{k}'")));
                }
                map.insert(k, v);
            }
            return Self::from_map(map);
        }
        self.with_pairs(&parse_pairs(&text)?)
    }

    /// Every set parameter as `key = value` lines, sorted by key. Parsing
    /// the dump over the defaults gives back `self`.
    pub fn dump(&self) -> String {
        let Value::Object(map) = serde_json::to_value(self).expect("config serializes") else {
            unreachable!()
        };
        let mut out = String::new();
        for (k, v) in &map {
            match v {
                Value::Null => {}
                Value::String(s) => writeln!(out, "{k} = {s}").unwrap(),
                other => writeln!(out, "{k} = {other}").unwrap(),
            }
        }
        out
    }

    pub fn system_spec(&self) -> Result<SystemSpec> {
        match self.system.as_str() {
            "free" => SystemSpec::free_line(self.hbar, self.mass),
            "circle" => SystemSpec::circle(self.hbar, self.mass, self.radius),
            "hardwall" => SystemSpec::hard_wall(self.hbar, self.mass),
            "squarewell" => SystemSpec::square_well(self.hbar, self.mass, self.width),
            "ho" => SystemSpec::harmonic_oscillator(self.hbar, self.mass, self.omega),
            other => Err(Error::Usage(format!(
                "unknown system '{other}' (free, circle, hardwall, squarewell, ho)"
            ))),
        }
    }

    pub fn state(&self) -> Result<EigenstateSpec> {
        EigenstateSpec::from_number(self.system_spec()?, self.quantum)
    }

    pub fn ho_constants(&self) -> Result<HoConstants> {
        HoConstants::new(self.hbar, self.mass, self.omega)
    }

    pub fn overrides(&self) -> GridOverrides {
        GridOverrides {
            dp_c: self.dp_c,
            p_c_max: self.p_c_max,
            dx_f: self.dx_f,
            x_f_max: self.x_f_max,
            dt: self.dt,
            n_t: self.n_t,
            epsilon: self.epsilon,
            n_p_min: self.n_p_min,
            n_p_slope: self.n_p_slope,
            images: self.images,
        }
    }

    pub fn band(&self) -> Result<Band> {
        match (self.p1, self.p2) {
            (None, None) => Ok(Band::Full),
            (p1, Some(p2)) => Ok(Band::Range(p1.unwrap_or(0.0), p2)),
            (Some(_), None) => Err(Error::Usage("p1 given without p2".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_multiples() {
        assert_eq!(parse_number("32pi"), Some(32.0 * PI));
        assert_eq!(parse_number("32 * pi"), Some(32.0 * PI));
        assert_eq!(parse_number("pi/16"), Some(PI / 16.0));
        assert_eq!(parse_number("-pi"), Some(-PI));
        assert_eq!(parse_number("1e4"), Some(1e4));
        assert_eq!(parse_number("spin"), None);
    }

    #[test]
    fn dump_round_trips() {
        let c = RunConfig::default()
            .with_pairs(&parse_pairs("system = free\nquantum = 1 # k\nt=1e4\ndp_c = 0.001\nthreads = 3\nformat = json").unwrap())
            .unwrap();
        assert_eq!(c.system, "free");
        assert_eq!(c.threads, Some(3));
        let back = RunConfig::default().with_pairs(&parse_pairs(&c.dump()).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.dump(), c.dump());
    }

    #[test]
    fn unknown_keys_and_bad_values_are_usage_errors() {
        let d = RunConfig::default();
        let bad = [("colour".to_string(), "red".to_string())];
        assert!(matches!(d.with_pairs(&bad), Err(Error::Usage(_))));
        let bad = [("t".to_string(), "soon".to_string())];
        assert!(matches!(d.with_pairs(&bad), Err(Error::Usage(_))));
        assert!(split_pair("novalue").is_err());
    }

    #[test]
    fn defaults_describe_the_oscillator_figure() {
        let c = RunConfig::default();
        let s = c.state().unwrap();
        assert_eq!(s.level(), Some(0));
        assert_eq!(c.t, 32.0 * PI);
        assert_eq!(c.band().unwrap(), Band::Full);
        let g = crate::quadrature::GridBundle::for_state(&s, c.t, &c.overrides()).unwrap();
        assert_eq!(g.times.len(), 32);
        assert!((g.x_f.step - 0.1).abs() < 1e-15);
    }
}
