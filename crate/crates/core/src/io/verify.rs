use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::Settings;
use crate::constitutive::verify_assumptions;
use crate::diagnostics::{random_state, structural_identities, SLACK_TOLERANCE};
use crate::error::Result;
use crate::pressure::{reconstruct_pressure, weak_residual};
use crate::solver::{run, Model};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub bound: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<28} {:>12.4e}  ({})", self.name, self.value, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn at_most(name: &'static str, value: f64, bound: f64) -> Check {
    Check {
        name,
        value,
        bound: format!("<= {bound:e}"),
        passed: value <= bound,
    }
}

fn at_least(name: &'static str, value: f64, bound: f64) -> Check {
    Check {
        name,
        value,
        bound: format!(">= {bound:e}"),
        passed: value >= bound,
    }
}

/// Runs the configuration and checks every invariant that must hold on it.
/// Numerical failures are returned as errors; violated invariants as failed checks.
pub fn verify(settings: &Settings) -> Result<VerifyReport> {
    settings.validate()?;
    let cfg = &settings.run;
    let mut checks = Vec::new();

    let law = verify_assumptions(&cfg.params, 2, 10_000, cfg.seed);
    checks.push(at_most("constitutive_violations", law.violations() as f64, 0.0));

    let model = Model::new(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut pressure_worst: f64 = 0.0;
    for _ in 0..100 {
        let st = random_state(&model, &mut rng);
        worst = worst.max(structural_identities(&model, &st.c, &st.d).max());
        let pi = reconstruct_pressure(&model, &st);
        pressure_worst = pressure_worst.max(weak_residual(&model, &st, &pi));
    }
    checks.push(at_most("structural_identities", worst, 1e-10));
    checks.push(at_most("pressure_weak_residual", pressure_worst, 1e-8));

    let (_, traj, report) = run(cfg, &settings.diagnostics)?;
    checks.push(at_most("energy_residual", report.energy.max_relative, 1e-8));
    let scale = report.rows.iter().map(|r| r.entropy_production.abs()).fold(1.0, f64::max);
    checks.push(at_least(
        "conductive_integrand_min",
        report.entropy.min_conductive_integrand / scale,
        -1e-10,
    ));
    checks.push(at_least(
        "dissipative_integrand_min",
        report.entropy.min_dissipative_integrand / scale,
        -1e-10,
    ));
    checks.push(at_least("tail_monotone", f64::from(u8::from(report.tail.is_monotone())), 1.0));
    checks.push(at_least(
        "tail_vanishes_above_max",
        f64::from(u8::from(report.tail.vanishes_above_max())),
        1.0,
    ));
    let max_theta = report.rows.iter().map(|r| r.max_theta).fold(0.0, f64::max);
    checks.push(at_most("delta_pos_relative", report.delta_pos / max_theta, 1e-6));
    let final_pi = reconstruct_pressure(&model, &traj.last().state);
    checks.push(at_most(
        "pressure_residual_final",
        weak_residual(&model, &traj.last().state, &final_pi),
        1e-8,
    ));
    if let Some(w) = &report.weak {
        checks.push(at_least("entropy_slack_min", w.entropy_min_slack(), SLACK_TOLERANCE));
        checks.push(at_least("internal_slack_min", w.internal_min_slack(), SLACK_TOLERANCE));
    }
    Ok(VerifyReport { checks })
}
