use crate::discretization::integrate;
use crate::error::{Error, Result};
use crate::solver::{Model, Trajectory};

/// `r(t) = E(t) + boundary accumulator − E(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyBalance {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub residual: Vec<f64>,
    /// `max |r| / E(0)`.
    pub max_relative: f64,
}

pub fn energy_balance(model: &Model, traj: &Trajectory) -> EnergyBalance {
    let first = &traj.first().state;
    let e0 = model.energy(&first.c, &first.d);
    let mut times = Vec::new();
    let mut energy = Vec::new();
    let mut residual = Vec::new();
    for s in &traj.samples {
        let e = model.energy(&s.state.c, &s.state.d);
        times.push(s.state.t);
        energy.push(e);
        residual.push(e + s.acc.boundary_dissipation - e0);
    }
    let max_relative = residual.iter().fold(0.0f64, |m, r| m.max(r.abs())) / e0.abs();
    EnergyBalance {
        times,
        energy,
        residual,
        max_relative,
    }
}

/// Entropy bookkeeping for `∫ ln(ϑ + ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBalance {
    pub eps: f64,
    pub times: Vec<f64>,
    pub entropy: Vec<f64>,
    /// Entropy change minus the time integral of its semi-discrete rate.
    pub time_defect: Vec<f64>,
    /// Semi-discrete rate minus the continuous right side, both time-integrated.
    pub consistency_gap: Vec<f64>,
    /// Smallest nodal value of `κ|∇ϑ|²/(ϑ+ε)²` over nodes with `ϑ > 0`.
    pub min_conductive_integrand: f64,
    /// Smallest nodal value of `S:D/(ϑ+ε)` over nodes with `ϑ > 0`.
    pub min_dissipative_integrand: f64,
    pub max_abs_time_defect: f64,
}

pub fn entropy_balance(model: &Model, traj: &Trajectory, eps: f64) -> Result<EntropyBalance> {
    let grid = &model.disc.grid;
    let mut out = EntropyBalance {
        eps,
        times: Vec::new(),
        entropy: Vec::new(),
        time_defect: Vec::new(),
        consistency_gap: Vec::new(),
        min_conductive_integrand: f64::INFINITY,
        min_dissipative_integrand: f64::INFINITY,
        max_abs_time_defect: 0.0,
    };
    let mut s0 = None;
    for s in &traj.samples {
        let pw = model.pointwise(&s.state.c, &s.state.d);
        let th = &pw.temp.val;
        let min = th.iter().copied().fold(f64::INFINITY, f64::min);
        if min <= -eps {
            return Err(Error::Positivity {
                t: s.state.t,
                min_theta: min,
            });
        }
        let grad2 = pw.temp.gradient_norm_sq();
        for (idx, &t) in th.indexed_iter() {
            if t > 0.0 {
                let inv = 1.0 / (t + eps);
                let cond = pw.kappa[idx] * grad2[idx] * inv * inv;
                let diss = pw.dissipation[idx] * inv;
                out.min_conductive_integrand = out.min_conductive_integrand.min(cond);
                out.min_dissipative_integrand = out.min_dissipative_integrand.min(diss);
            }
        }
        let ent = integrate(&th.mapv(|t| (t + eps).ln()), grid);
        let base = *s0.get_or_insert(ent);
        let defect = ent - base - s.acc.entropy_rate;
        out.times.push(s.state.t);
        out.entropy.push(ent);
        out.time_defect.push(defect);
        out.consistency_gap.push(s.acc.entropy_rate - s.acc.entropy_rhs());
        out.max_abs_time_defect = out.max_abs_time_defect.max(defect.abs());
    }
    Ok(out)
}
