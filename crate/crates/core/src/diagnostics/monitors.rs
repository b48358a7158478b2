use ndarray::Array2;

use crate::discretization::{integrate, lq_power};
use crate::error::{Error, Result};
use crate::exponents::{pressure_exponent, temperature_window};
use crate::pressure::reconstruct_pressure;
use crate::solver::{Model, Trajectory};

use super::quadrature::trapezoid;

/// Instantaneous norm powers at one output time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonitorRow {
    pub t: f64,
    /// `‖v‖₂²`.
    pub l2_sq: f64,
    /// `‖v‖_{1,p}^p`.
    pub w1p: f64,
    /// `‖S‖_{p'}^{p'}`.
    pub stress: f64,
    /// `‖v‖_{5p/3}^{5p/3}`.
    pub parabolic: f64,
    /// `‖ϑ‖_q^q`.
    pub theta_q: f64,
    /// `‖∇ϑ‖_r^r`.
    pub grad_theta_r: f64,
    /// `‖π‖_{z'}^{z'}`.
    pub pressure: f64,
}

/// Sup-in-time and time-integrated monitors.
#[derive(Debug, Clone, PartialEq)]
pub struct MonitorTable {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub z: f64,
    pub rows: Vec<MonitorRow>,
    pub sup_l2_sq: f64,
    pub int_w1p: f64,
    pub int_stress: f64,
    pub int_parabolic: f64,
    pub int_theta_q: f64,
    pub int_grad_theta_r: f64,
    pub int_pressure: f64,
}

pub fn monitor_row(model: &Model, t: f64, c: &[f64], d: &[f64], q: f64, r: f64, z: f64) -> MonitorRow {
    let grid = &model.disc.grid;
    let p = model.params.p;
    let pw = model.pointwise(c, d);
    let vel = &pw.vel;
    let conj = p / (p - 1.0);
    let [s11, s12, s22] = &pw.stress;
    // off-diagonal counted twice in the Frobenius norm
    let s12b = s12 * std::f64::consts::SQRT_2;
    let state = crate::solver::FluidState {
        t,
        c: c.to_vec(),
        d: d.to_vec(),
    };
    let pi = reconstruct_pressure(model, &state).values(model);
    MonitorRow {
        t,
        l2_sq: integrate(&vel.speed_sq(), grid),
        w1p: lq_power(&[&vel.u, &vel.v], grid, p)
            + lq_power(&[&vel.ux, &vel.uy, &vel.vx, &vel.vy], grid, p),
        stress: lq_power(&[s11, &s12b, s22], grid, conj),
        parabolic: lq_power(&[&vel.u, &vel.v], grid, 5.0 * p / 3.0),
        theta_q: lq_power(&[&pw.temp.val], grid, q),
        grad_theta_r: lq_power(&[&pw.temp.dx, &pw.temp.dy], grid, r),
        pressure: lq_power(&[&pi], grid, z),
    }
}

/// Monitors with `q ∈ [1, 5/3)` and `r ∈ [1, 5/4)`.
pub fn apriori_monitors(model: &Model, traj: &Trajectory, q: f64, r: f64) -> Result<MonitorTable> {
    if !(1.0..5.0 / 3.0).contains(&q) {
        return Err(Error::param(
            "q",
            format!("temperature exponent q = {q} outside the open window [1, 5/3)"),
        ));
    }
    temperature_window(r)?;
    let p = model.params.p;
    let z = pressure_exponent(p)?;
    let rows: Vec<MonitorRow> = traj
        .samples
        .iter()
        .map(|s| monitor_row(model, s.state.t, &s.state.c, &s.state.d, q, r, z))
        .collect();
    let times: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let int = |f: fn(&MonitorRow) -> f64| trapezoid(&times, &rows.iter().map(f).collect::<Vec<_>>());
    Ok(MonitorTable {
        p,
        q,
        r,
        z,
        sup_l2_sq: rows.iter().map(|r| r.l2_sq).fold(0.0, f64::max),
        int_w1p: int(|r| r.w1p),
        int_stress: int(|r| r.stress),
        int_parabolic: int(|r| r.parabolic),
        int_theta_q: int(|r| r.theta_q),
        int_grad_theta_r: int(|r| r.grad_theta_r),
        int_pressure: int(|r| r.pressure),
        rows,
    })
}

/// `T(m) = ∫ m|∇ϑ|²/ϑ² χ{ϑ > m}` on one temperature field.
pub fn tail_integral(model: &Model, d: &[f64], level: f64) -> f64 {
    let temp = model.disc.temperature.synthesize(d);
    let grad2 = temp.gradient_norm_sq();
    let mut f = Array2::zeros(temp.val.raw_dim());
    for (idx, &th) in temp.val.indexed_iter() {
        if th > level {
            f[idx] = level * grad2[idx] / (th * th);
        }
    }
    integrate(&f, &model.disc.grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailTable {
    pub levels: Vec<f64>,
    pub times: Vec<f64>,
    /// `values[i][j]` is `T(levels[j])` at `times[i]`.
    pub values: Vec<Vec<f64>>,
    pub max_theta: Vec<f64>,
}

impl TailTable {
    /// Nonincreasing in the level at every time.
    pub fn is_monotone(&self) -> bool {
        self.values.iter().all(|row| row.windows(2).all(|w| w[1] <= w[0]))
    }

    /// `T(m)` integrated over the sampled time interval (trapezoid).
    pub fn space_time(&self) -> Vec<f64> {
        (0..self.levels.len())
            .map(|j| {
                let f: Vec<f64> = self.values.iter().map(|row| row[j]).collect();
                trapezoid(&self.times, &f)
            })
            .collect()
    }

    /// Space-time table nonincreasing in the level.
    pub fn space_time_is_monotone(&self) -> bool {
        self.space_time().windows(2).all(|w| w[1] <= w[0])
    }

    /// Exactly zero for every level above the sampled maximum.
    pub fn vanishes_above_max(&self) -> bool {
        self.values.iter().zip(&self.max_theta).all(|(row, &mx)| {
            row.iter()
                .zip(&self.levels)
                .all(|(&v, &lvl)| lvl <= mx || v == 0.0)
        })
    }
}

pub fn tail_check(model: &Model, traj: &Trajectory, levels: &[f64]) -> Result<TailTable> {
    if levels.windows(2).any(|w| w[1] <= w[0]) || levels.iter().any(|l| !(*l > 0.0)) {
        return Err(Error::param("levels", "tail levels must be positive and increasing"));
    }
    let mut table = TailTable {
        levels: levels.to_vec(),
        times: Vec::new(),
        values: Vec::new(),
        max_theta: Vec::new(),
    };
    for s in &traj.samples {
        let vals = model.disc.temperature.synthesize_values(&s.state.d);
        table.times.push(s.state.t);
        table.max_theta.push(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        table
            .values
            .push(levels.iter().map(|&m| tail_integral(model, &s.state.d, m)).collect());
    }
    Ok(table)
}
