use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::Settings;
use crate::error::{Error, Result};
use crate::exponents::classify;
use crate::solver::run;

/// One axis of a sweep: a key and the values it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<String>,
}

impl SweepAxis {
    /// Parses `key=v1,v2,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let (key, values) = text
            .split_once('=')
            .ok_or_else(|| Error::param("vary", format!("expected `key=v1,v2,...`, got `{text}`")))?;
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(Error::param("vary", format!("empty value in `{text}`")));
        }
        Ok(Self {
            key: key.trim().to_string(),
            values,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub overrides: Vec<(String, String)>,
    /// Strongest notion of solution available at this `p` in three dimensions.
    pub classification: String,
    /// Summary scalars, or the error that stopped this run.
    pub outcome: std::result::Result<Vec<(String, f64)>, String>,
}

fn product(axes: &[SweepAxis]) -> Vec<Vec<(String, String)>> {
    let mut combos = vec![Vec::new()];
    for axis in axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                axis.values.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((axis.key.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    combos
}

fn run_one(base: &Settings, overrides: &[(String, String)]) -> std::result::Result<Vec<(String, f64)>, String> {
    let mut s = base.clone();
    for (k, v) in overrides {
        s.set(k, v).map_err(|e| format!("key `{k}`: {e}"))?;
    }
    s.validate().map_err(|e| e.to_string())?;
    let (_, traj, report) = run(&s.run, &s.diagnostics).map_err(|e| e.to_string())?;
    let mut out = report.summary();
    let last = traj.last();
    out.push(("t_final".into(), last.state.t));
    Ok(out)
}

/// Runs the Cartesian product of the axes in parallel; failures stay in their row.
pub fn sweep(base: &Settings, axes: &[SweepAxis]) -> Vec<SweepRow> {
    product(axes)
        .into_par_iter()
        .map(|overrides| {
            let mut s = base.clone();
            for (k, v) in &overrides {
                let _ = s.set(k, v);
            }
            let classification = classify(s.run.params.p, 3)
                .map(|c| c.level().to_string())
                .unwrap_or_else(|_| "invalid".into());
            let outcome = run_one(base, &overrides);
            SweepRow {
                overrides,
                classification,
                outcome,
            }
        })
        .collect()
}

/// CSV with the override columns, classification, status and the summary
/// columns of the first successful run.
pub fn sweep_table(rows: &[SweepRow]) -> String {
    let keys: Vec<String> = rows.first().map_or(Vec::new(), |r| r.overrides.iter().map(|(k, _)| k.clone()).collect());
    let summary_keys: Vec<String> = rows
        .iter()
        .find_map(|r| r.outcome.as_ref().ok())
        .map_or(Vec::new(), |s| s.iter().map(|(k, _)| k.clone()).collect());
    let mut out = String::new();
    let mut header = keys.clone();
    header.push("classification".into());
    header.push("status".into());
    header.extend(summary_keys.iter().cloned());
    let _ = writeln!(out, "{}", header.join(","));
    for r in rows {
        let mut cells: Vec<String> = r.overrides.iter().map(|(_, v)| v.clone()).collect();
        cells.push(r.classification.clone());
        match &r.outcome {
            Ok(s) => {
                cells.push("ok".into());
                for k in &summary_keys {
                    let v = s.iter().find(|(sk, _)| sk == k).map_or(f64::NAN, |(_, v)| *v);
                    cells.push(format!("{v:.16e}"));
                }
            }
            Err(e) => {
                cells.push(format!("error: {}", e.replace(',', ";")));
                cells.extend(summary_keys.iter().map(|_| String::new()));
            }
        }
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}
