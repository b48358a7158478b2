//! Flat `key = value` configuration files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Every key may appear at most once. Lists are comma separated, `grid` is
//! written `NXxNY` or `auto`, and `n_moll` accepts `auto`.

use std::fmt::Write as _;
use std::path::Path;

use crate::constitutive::Profile;
use crate::diagnostics::DiagnosticsOptions;
use crate::error::{Error, Result};
use crate::exponents::temperature_window;
use crate::solver::{Integrator, RunConfig, Scenario};
use crate::truncation::TruncationLevel;

/// A run configuration together with its diagnostics options.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Settings {
    pub run: RunConfig,
    pub diagnostics: DiagnosticsOptions,
}

/// Every accepted key in manifest order.
pub const KEYS: &[&str] = &[
    "scenario",
    "p",
    "nu_lo",
    "nu_hi",
    "kappa_lo",
    "kappa_hi",
    "eps_reg",
    "nu_profile",
    "kappa_profile",
    "k",
    "n",
    "m",
    "lx",
    "grid",
    "mean_flow",
    "alpha",
    "force",
    "t_end",
    "dt",
    "integrator",
    "rtol",
    "atol",
    "output_interval",
    "n_moll",
    "seed",
    "perturbation",
    "pressure",
    "eps_floor",
    "d",
    "theta_base",
    "blob_amp",
    "blob_x",
    "blob_y",
    "blob_width",
    "shear_amp",
    "q",
    "r",
    "tail_levels",
    "test_bank",
    "diag_seed",
];

fn num<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value
        .parse::<T>()
        .map_err(|_| format!("cannot parse `{value}` as a number"))
}

fn boolean(value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, got `{value}`")),
    }
}

fn list(value: &str) -> std::result::Result<Vec<f64>, String> {
    value.split(',').map(|s| num::<f64>(s.trim())).collect()
}

impl Settings {
    /// Defaults for the scenario, with scenario-independent keys untouched.
    pub fn for_scenario(scenario: Scenario) -> Self {
        Self {
            run: RunConfig::for_scenario(scenario),
            ..Self::default()
        }
    }

    /// Assigns one key. The error is a bare reason; callers attach the key.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let r = &mut self.run;
        let err = |e: Error| e.to_string();
        match key {
            "scenario" => r.scenario = value.parse().map_err(err)?,
            "p" => r.params.p = num(value)?,
            "nu_lo" => r.params.nu_lo = num(value)?,
            "nu_hi" => r.params.nu_hi = num(value)?,
            "kappa_lo" => r.params.kappa_lo = num(value)?,
            "kappa_hi" => r.params.kappa_hi = num(value)?,
            "eps_reg" => r.params.eps_reg = num(value)?,
            "nu_profile" => r.params.nu_profile = value.parse::<Profile>().map_err(err)?,
            "kappa_profile" => r.params.kappa_profile = value.parse::<Profile>().map_err(err)?,
            "k" => r.k = TruncationLevel::new(num(value)?).map_err(err)?,
            "n" => r.n = num(value)?,
            "m" => r.m = num(value)?,
            "lx" => r.lx = num(value)?,
            "grid" => {
                r.grid = if value == "auto" {
                    None
                } else {
                    let (a, b) = value
                        .split_once('x')
                        .ok_or_else(|| format!("expected `NXxNY` or `auto`, got `{value}`"))?;
                    Some((num(a.trim())?, num(b.trim())?))
                }
            }
            "mean_flow" => r.mean_flow = boolean(value)?,
            "alpha" => r.alpha = num(value)?,
            "force" => {
                let f = list(value)?;
                if f.len() != 2 {
                    return Err(format!("expected two components, got {}", f.len()));
                }
                r.force = [f[0], f[1]];
            }
            "t_end" => r.t_end = num(value)?,
            "dt" => r.dt = num(value)?,
            "integrator" => r.integrator = value.parse::<Integrator>().map_err(err)?,
            "rtol" => r.rtol = num(value)?,
            "atol" => r.atol = num(value)?,
            "output_interval" => r.output_interval = num(value)?,
            "n_moll" => r.n_moll = if value == "auto" { None } else { Some(num(value)?) },
            "seed" => r.seed = num(value)?,
            "perturbation" => r.perturbation = num(value)?,
            "pressure" => r.pressure = boolean(value)?,
            "eps_floor" => r.eps_floor = num(value)?,
            "d" => r.d = num(value)?,
            "theta_base" => r.theta_base = num(value)?,
            "blob_amp" => r.blob_amp = num(value)?,
            "blob_x" => r.blob_x = num(value)?,
            "blob_y" => r.blob_y = num(value)?,
            "blob_width" => r.blob_width = num(value)?,
            "shear_amp" => r.shear_amp = num(value)?,
            "q" => self.diagnostics.q = num(value)?,
            "r" => self.diagnostics.r = num(value)?,
            "tail_levels" => self.diagnostics.tail_levels = list(value)?,
            "test_bank" => self.diagnostics.bank_size = num(value)?,
            "diag_seed" => self.diagnostics.seed = num(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// Value of a key in the textual form accepted by [`Settings::set`].
    pub fn get(&self, key: &str) -> Option<String> {
        let r = &self.run;
        let d = &self.diagnostics;
        let f = |x: f64| format!("{x:?}");
        let joined = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        Some(match key {
            "scenario" => r.scenario.tag().into(),
            "p" => f(r.params.p),
            "nu_lo" => f(r.params.nu_lo),
            "nu_hi" => f(r.params.nu_hi),
            "kappa_lo" => f(r.params.kappa_lo),
            "kappa_hi" => f(r.params.kappa_hi),
            "eps_reg" => f(r.params.eps_reg),
            "nu_profile" => r.params.nu_profile.tag().into(),
            "kappa_profile" => r.params.kappa_profile.tag().into(),
            "k" => r.k.get().to_string(),
            "n" => r.n.to_string(),
            "m" => r.m.to_string(),
            "lx" => f(r.lx),
            "grid" => match r.grid {
                Some((a, b)) => format!("{a}x{b}"),
                None => "auto".into(),
            },
            "mean_flow" => r.mean_flow.to_string(),
            "alpha" => f(r.alpha),
            "force" => joined(&r.force),
            "t_end" => f(r.t_end),
            "dt" => f(r.dt),
            "integrator" => r.integrator.tag().into(),
            "rtol" => f(r.rtol),
            "atol" => f(r.atol),
            "output_interval" => f(r.output_interval),
            "n_moll" => r.n_moll.map_or("auto".into(), |n| n.to_string()),
            "seed" => r.seed.to_string(),
            "perturbation" => f(r.perturbation),
            "pressure" => r.pressure.to_string(),
            "eps_floor" => f(r.eps_floor),
            "d" => r.d.to_string(),
            "theta_base" => f(r.theta_base),
            "blob_amp" => f(r.blob_amp),
            "blob_x" => f(r.blob_x),
            "blob_y" => f(r.blob_y),
            "blob_width" => f(r.blob_width),
            "shear_amp" => f(r.shear_amp),
            "q" => f(d.q),
            "r" => f(d.r),
            "tail_levels" => joined(&d.tail_levels),
            "test_bank" => d.bank_size.to_string(),
            "diag_seed" => d.seed.to_string(),
            _ => return None,
        })
    }

    /// Range checks across modules.
    pub fn validate(&self) -> Result<()> {
        self.run.validate()?;
        if !(1.0..5.0 / 3.0).contains(&self.diagnostics.q) {
            return Err(Error::param(
                "q",
                "temperature exponent must lie in the open window [1, 5/3)",
            ));
        }
        temperature_window(self.diagnostics.r)?;
        let levels = &self.diagnostics.tail_levels;
        if levels.is_empty() || levels.windows(2).any(|w| w[1] <= w[0]) || levels[0] <= 0.0 {
            return Err(Error::param("tail_levels", "levels must be positive and increasing"));
        }
        Ok(())
    }

    /// Every key in [`KEYS`] order, one assignment per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for key in KEYS {
            let _ = writeln!(s, "{key} = {}", self.get(key).expect("known key"));
        }
        s
    }
}

/// Parses configuration text. A `scenario` line, wherever it appears, selects
/// the base defaults; the remaining keys override them.
pub fn parse_config_str(text: &str) -> Result<Settings> {
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
            line,
            reason: format!("expected `key = value`, got `{content}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::Config {
                line,
                reason: format!("unknown key `{key}`"),
            });
        }
        if pairs.iter().any(|(_, k, _)| k == key) {
            return Err(Error::Config {
                line,
                reason: format!("duplicate key `{key}`"),
            });
        }
        pairs.push((line, key.to_string(), value.to_string()));
    }
    let mut settings = Settings::default();
    if let Some((line, _, v)) = pairs.iter().find(|(_, k, _)| k == "scenario") {
        let scenario = v.parse::<Scenario>().map_err(|e| Error::Config {
            line: *line,
            reason: format!("key `scenario`: {e}"),
        })?;
        settings = Settings::for_scenario(scenario);
    }
    for (line, key, value) in &pairs {
        settings.set(key, value).map_err(|reason| Error::Config {
            line: *line,
            reason: format!("key `{key}`: {reason}"),
        })?;
    }
    settings.validate()?;
    Ok(settings)
}

pub fn parse_config(path: &Path) -> Result<Settings> {
    parse_config_str(&std::fs::read_to_string(path)?)
}
