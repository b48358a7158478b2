//! Balances, norm monitors, weak-formulation residuals and empirical
//! inequality checks computed from a trajectory.

mod balance;
mod checks;
mod monitors;
pub mod quadrature;
mod weak;

pub use balance::{energy_balance, entropy_balance, EnergyBalance, EntropyBalance};
pub use checks::{
    initial_attainment, interp_check, korn_check, random_state, random_velocity_samples, structural_identities,
    EmpiricalConstant, InitialAttainment, StructuralIdentities,
};
pub use monitors::{apriori_monitors, monitor_row, tail_check, tail_integral, MonitorRow, MonitorTable, TailTable};
pub use weak::{weak_residuals, WeakResidualReport, SLACK_TOLERANCE};

use crate::discretization::integrate;
use crate::error::Result;
use crate::solver::{Model, RunConfig, Trajectory};

/// Knobs for [`diagnose`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsOptions {
    pub q: f64,
    pub r: f64,
    pub tail_levels: Vec<f64>,
    /// Number of random test functions per weak formulation; 0 skips them.
    pub bank_size: usize,
    pub seed: u64,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        Self {
            q: 1.5,
            r: 1.2,
            tail_levels: vec![1.0, 2.0, 4.0, 8.0],
            bank_size: 50,
            seed: 0,
        }
    }
}

/// One CSV row per output time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub energy: f64,
    pub boundary_dissipation: f64,
    pub energy_residual: f64,
    pub min_theta: f64,
    pub max_theta: f64,
    pub entropy: f64,
    pub entropy_defect: f64,
    /// `∫ κ|∇ϑ|²/(ϑ+ε)² + S:D/(ϑ+ε)` at this time.
    pub entropy_production: f64,
    pub dissipation: f64,
    pub monitors: MonitorRow,
    pub tail: Vec<f64>,
    pub convective_identity: f64,
    pub transport_identity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub options: DiagnosticsOptions,
    pub rows: Vec<DiagnosticsRow>,
    pub energy: EnergyBalance,
    pub entropy: EntropyBalance,
    pub monitors: MonitorTable,
    pub tail: TailTable,
    pub weak: Option<WeakResidualReport>,
    pub attainment: InitialAttainment,
    /// `max(0, −min ϑ)` over all samples.
    pub delta_pos: f64,
}

impl DiagnosticsReport {
    pub fn csv_header(&self) -> String {
        let mut cols: Vec<String> = [
            "t",
            "energy",
            "boundary_dissipation",
            "energy_residual",
            "min_theta",
            "max_theta",
            "entropy",
            "entropy_defect",
            "entropy_production",
            "dissipation",
            "l2_sq",
            "w1p",
            "stress_pconj",
            "v_5p3",
            "theta_q",
            "grad_theta_r",
            "pressure_z",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        cols.extend(self.options.tail_levels.iter().map(|m| format!("tail_{m}")));
        cols.push("convective_identity".into());
        cols.push("transport_identity".into());
        cols.join(",")
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                let m = &r.monitors;
                let mut v = vec![
                    r.t,
                    r.energy,
                    r.boundary_dissipation,
                    r.energy_residual,
                    r.min_theta,
                    r.max_theta,
                    r.entropy,
                    r.entropy_defect,
                    r.entropy_production,
                    r.dissipation,
                    m.l2_sq,
                    m.w1p,
                    m.stress,
                    m.parabolic,
                    m.theta_q,
                    m.grad_theta_r,
                    m.pressure,
                ];
                v.extend(&r.tail);
                v.push(r.convective_identity);
                v.push(r.transport_identity);
                v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",")
            })
            .collect()
    }

    /// Final scalars in a fixed order.
    pub fn summary(&self) -> Vec<(String, f64)> {
        let mut s: Vec<(String, f64)> = vec![
            ("energy_max_relative_residual".into(), self.energy.max_relative),
            ("entropy_max_time_defect".into(), self.entropy.max_abs_time_defect),
            (
                "entropy_consistency_gap".into(),
                *self.entropy.consistency_gap.last().unwrap_or(&0.0),
            ),
            ("min_conductive_integrand".into(), self.entropy.min_conductive_integrand),
            ("min_dissipative_integrand".into(), self.entropy.min_dissipative_integrand),
            ("delta_pos".into(), self.delta_pos),
            ("sup_l2_sq".into(), self.monitors.sup_l2_sq),
            ("int_w1p".into(), self.monitors.int_w1p),
            ("int_stress_pconj".into(), self.monitors.int_stress),
            ("int_v_5p3".into(), self.monitors.int_parabolic),
            ("int_theta_q".into(), self.monitors.int_theta_q),
            ("int_grad_theta_r".into(), self.monitors.int_grad_theta_r),
            ("int_pressure_z".into(), self.monitors.int_pressure),
            ("tail_monotone".into(), f64::from(u8::from(self.tail.is_monotone()))),
            (
                "tail_vanishes_above_max".into(),
                f64::from(u8::from(self.tail.vanishes_above_max())),
            ),
            (
                "initial_distance".into(),
                *self.attainment.distance.first().unwrap_or(&0.0),
            ),
        ];
        if let Some(w) = &self.weak {
            s.push(("momentum_residual_max".into(), w.momentum_max()));
            s.push(("momentum_residual_abs_max".into(), w.momentum_abs_max()));
            s.push(("entropy_min_slack".into(), w.entropy_min_slack()));
            s.push(("internal_min_slack".into(), w.internal_min_slack()));
            s.push(("energy_identity_max".into(), w.energy_identity_max()));
        }
        s
    }
}

/// Computes every diagnostic of a finished run.
pub fn diagnose(config: &RunConfig, model: &Model, traj: &Trajectory, options: &DiagnosticsOptions) -> Result<DiagnosticsReport> {
    let grid = &model.disc.grid;
    let energy = energy_balance(model, traj);
    let entropy = entropy_balance(model, traj, model.eps_floor)?;
    let monitors = apriori_monitors(model, traj, options.q, options.r)?;
    let tail = tail_check(model, traj, &options.tail_levels)?;
    let attainment = initial_attainment(config, model, traj)?;
    let weak = if options.bank_size > 0 && traj.samples.len() > 1 {
        Some(weak_residuals(model, traj, options.bank_size, options.seed)?)
    } else {
        None
    };
    let eps = model.eps_floor;
    let mut rows = Vec::with_capacity(traj.samples.len());
    let mut delta_pos: f64 = 0.0;
    for (i, s) in traj.samples.iter().enumerate() {
        let pw = model.pointwise(&s.state.c, &s.state.d);
        let th = &pw.temp.val;
        let min_theta = th.iter().copied().fold(f64::INFINITY, f64::min);
        let max_theta = th.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        delta_pos = delta_pos.max(-min_theta);
        let inv = th.mapv(|t| 1.0 / (t + eps).max(1e-12));
        let production = integrate(&(&pw.kappa * &pw.temp.gradient_norm_sq() * &inv * &inv + &pw.dissipation * &inv), grid);
        let ids = structural_identities(model, &s.state.c, &s.state.d);
        rows.push(DiagnosticsRow {
            t: s.state.t,
            energy: energy.energy[i],
            boundary_dissipation: s.acc.boundary_dissipation,
            energy_residual: energy.residual[i],
            min_theta,
            max_theta,
            entropy: entropy.entropy[i],
            entropy_defect: entropy.time_defect[i],
            entropy_production: production,
            dissipation: integrate(&pw.dissipation, grid),
            monitors: monitors.rows[i],
            tail: tail.values[i].clone(),
            convective_identity: ids.convective,
            transport_identity: ids.transport,
        });
    }
    Ok(DiagnosticsReport {
        options: options.clone(),
        rows,
        energy,
        entropy,
        monitors,
        tail,
        weak,
        attainment,
        delta_pos,
    })
}
