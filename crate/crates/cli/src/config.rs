//! Run configuration: a flat `key = value` file, optionally layered over a
//! named preset and under `--set` overrides.
//!
//! ```text
//! # baseline scenario
//! omega_bar = 4e14
//! radius_m = 1e-6
//! temperature_K = 300
//! temperatures = 0, 100, 1000
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use dressed_atom::dynamics::{
    DEFAULT_DOUBLE_SUM_MODES, DEFAULT_SPAN_FACTOR, DEFAULT_THERMAL_MODES, DEFAULT_TIME_POINTS,
};
use dressed_atom::spectrum::DEFAULT_REGIME_MARGIN;
use dressed_atom::{build_scenario, CavityScenario, ElementMethod, SolveMethod};

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "omega_bar",
    "radius_m",
    "temperature_K",
    "coupling_g",
    "n0_initial",
    "K",
    "L",
    "method",
    "elements",
    "t_max_factor",
    "n_points",
    "temperatures",
    "temperature_range",
    "radii",
    "margin",
];

const PRESET_BASE: &[(&str, &str)] = &[("omega_bar", "4e14"), ("radius_m", "1e-6")];

pub const PRESETS: &[&str] = &["fig2", "fig3", "fig4"];

fn preset_entries(name: &str) -> Option<Vec<(&'static str, &'static str)>> {
    let extra: &[(&str, &str)] = match name {
        "fig2" => &[("temperature_K", "300")],
        "fig3" => &[("temperature_K", "1e5")],
        "fig4" => &[
            ("temperature_K", "0"),
            ("temperatures", "0, 1e2, 3e2, 1e3, 3e3, 1e4, 3e4, 1e5"),
        ],
        _ => return None,
    };
    Some(PRESET_BASE.iter().chain(extra).copied().collect())
}

/// Raw key/value layers before typing.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn from_preset(name: &str) -> Result<Self, CliError> {
        let entries = preset_entries(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset '{name}' (expected one of {})",
                PRESETS.join(", ")
            ))
        })?;
        let mut raw = Self::default();
        for (k, v) in entries {
            raw.values.insert(k.to_string(), v.to_string());
        }
        Ok(raw)
    }

    /// Merges `key = value` lines; later keys win.
    pub fn merge_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{origin}:{}: expected 'key = value'", i + 1))
            })?;
            self.insert(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("{origin}:{}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.merge_text(&text, &path.display().to_string())
    }

    /// Applies one `key=value` override.
    pub fn merge_assignment(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::Config(format!("--set expects key=value, got '{assignment}'"))
        })?;
        self.insert(key.trim(), value.trim())
            .map_err(|e| CliError::Config(format!("--set: {e}")))
    }

    fn insert(&mut self, key: &str, value: &str) -> Result<(), String> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("unknown key '{key}'"));
        }
        if value.is_empty() {
            return Err(format!("empty value for key '{key}'"));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Config(format!("key '{key}': cannot parse '{v}'")))
            })
            .transpose()
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.get(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key '{key}'")))
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        let Some(v) = self.values.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|item| {
                item.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("key '{key}': cannot parse '{item}'")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let temperature_k = self.require("temperature_K")?;
        let temperatures = match (self.list("temperatures")?, self.list("temperature_range")?) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set either 'temperatures' or 'temperature_range', not both".into(),
                ))
            }
            (Some(list), None) => list,
            (None, Some(range)) => expand_range(&range)?,
            (None, None) => vec![temperature_k],
        };
        let config = RunConfig {
            omega_bar: self.require("omega_bar")?,
            radius_m: self.require("radius_m")?,
            temperature_k,
            coupling_g: self.get("coupling_g")?,
            n0_initial: self.get("n0_initial")?.unwrap_or(1.0),
            field_limit: self.get("K")?.unwrap_or(DEFAULT_THERMAL_MODES),
            mode_limit: self.get("L")?.unwrap_or(DEFAULT_DOUBLE_SUM_MODES),
            method: self
                .get::<SolveMethod>("method")?
                .unwrap_or(SolveMethod::Hybrid),
            elements: self
                .get::<ElementMethod>("elements")?
                .unwrap_or(ElementMethod::Approximate),
            t_max_factor: self.get("t_max_factor")?.unwrap_or(DEFAULT_SPAN_FACTOR),
            n_points: self.get("n_points")?.unwrap_or(DEFAULT_TIME_POINTS),
            radii: self.list("radii")?,
            temperatures,
            margin: self.get("margin")?.unwrap_or(DEFAULT_REGIME_MARGIN),
        };
        config.check()?;
        Ok(config)
    }
}

/// `start, stop, count` into an inclusive linear grid.
fn expand_range(range: &[f64]) -> Result<Vec<f64>, CliError> {
    let [start, stop, count] = range else {
        return Err(CliError::Config(
            "temperature_range expects 'start, stop, count'".into(),
        ));
    };
    if count.fract() != 0.0 || *count < 1.0 {
        return Err(CliError::Config(format!(
            "temperature_range count must be a positive integer, got {count}"
        )));
    }
    let n = *count as usize;
    if n == 1 {
        return Ok(vec![*start]);
    }
    let span = stop - start;
    Ok((0..n)
        .map(|i| start + span * i as f64 / (n - 1) as f64)
        .collect())
}

/// Fully resolved, typed configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega_bar: f64,
    pub radius_m: f64,
    pub temperature_k: f64,
    pub coupling_g: Option<f64>,
    pub n0_initial: f64,
    pub field_limit: usize,
    pub mode_limit: usize,
    pub method: SolveMethod,
    pub elements: ElementMethod,
    pub t_max_factor: f64,
    pub n_points: usize,
    pub temperatures: Vec<f64>,
    pub radii: Option<Vec<f64>>,
    pub margin: f64,
}

impl RunConfig {
    fn check(&self) -> Result<(), CliError> {
        if self.temperatures.is_empty() {
            return Err(CliError::Config("temperature list is empty".into()));
        }
        if let Some(t) = self
            .temperatures
            .iter()
            .find(|t| !(**t >= 0.0 && t.is_finite()))
        {
            return Err(CliError::Config(format!("invalid temperature {t}")));
        }
        if let Some(radii) = &self.radii {
            if radii.is_empty() {
                return Err(CliError::Config("radius list is empty".into()));
            }
        }
        if !(self.margin > 0.0 && self.margin.is_finite()) {
            return Err(CliError::Config(format!(
                "margin must be positive, got {}",
                self.margin
            )));
        }
        Ok(())
    }

    pub fn scenario(&self) -> Result<CavityScenario, CliError> {
        Ok(build_scenario(
            self.omega_bar,
            self.radius_m,
            self.temperature_k,
            self.coupling_g,
            Some(self.n0_initial),
        )?)
    }

    /// Every resolved key, sorted, defaults included.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:e}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = vec![
            ("omega_bar", format!("{:e}", self.omega_bar)),
            ("radius_m", format!("{:e}", self.radius_m)),
            ("temperature_K", format!("{:e}", self.temperature_k)),
            (
                "coupling_g",
                self.coupling_g
                    .map_or_else(|| "omega_bar*alpha".to_string(), |g| format!("{g:e}")),
            ),
            ("n0_initial", format!("{:e}", self.n0_initial)),
            ("K", self.field_limit.to_string()),
            ("L", self.mode_limit.to_string()),
            ("method", self.method.to_string()),
            ("elements", self.elements.to_string()),
            ("t_max_factor", format!("{:e}", self.t_max_factor)),
            ("n_points", self.n_points.to_string()),
            ("temperatures", list(&self.temperatures)),
            (
                "radii",
                self.radii
                    .as_deref()
                    .map_or_else(|| "none".to_string(), list),
            ),
            ("margin", format!("{:e}", self.margin)),
        ];
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }

    /// Single `#` comment line recording the resolved configuration.
    pub fn provenance_line(&self, command: &str) -> String {
        let mut line = format!("# dressed-atom {command}");
        for (k, v) in self.entries() {
            let _ = write!(line, " {k}={v}");
        }
        line
    }
}
