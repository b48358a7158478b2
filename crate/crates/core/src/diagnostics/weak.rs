//! Residuals of the space-time weak formulations evaluated on a trajectory.
//!
//! Test functions are products `θ(t)ψ(x)` with `θ(t) = (1 − t/T)³`, which
//! vanishes to second order at the final time. Time integrals use the sample
//! quadrature of [`time_weights`].

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::{integrate, VelocityForms};
use crate::error::{Error, Result};
use crate::pressure::reconstruct_pressure;
use crate::solver::{Model, Sample, Trajectory};

use super::quadrature::time_weights;

/// Default lower bound accepted for inequality slacks.
pub const SLACK_TOLERANCE: f64 = -1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct WeakResidualReport {
    pub bank_size: usize,
    /// Relative momentum residual per divergence-free test field.
    pub momentum: Vec<f64>,
    /// The same residuals without normalization, for unit-norm coefficients.
    pub momentum_abs: Vec<f64>,
    /// Entropy inequality slack per nonnegative test function.
    pub entropy_slack: Vec<f64>,
    /// Internal-energy inequality slack per nonnegative test function.
    pub internal_slack: Vec<f64>,
    /// Relative residual of the local total-energy identity with pressure.
    pub energy_identity: Vec<f64>,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

impl WeakResidualReport {
    pub fn momentum_max(&self) -> f64 {
        max_of(&self.momentum)
    }

    pub fn momentum_abs_max(&self) -> f64 {
        max_of(&self.momentum_abs)
    }

    pub fn entropy_min_slack(&self) -> f64 {
        min_of(&self.entropy_slack)
    }

    pub fn internal_min_slack(&self) -> f64 {
        min_of(&self.internal_slack)
    }

    pub fn energy_identity_max(&self) -> f64 {
        max_of(&self.energy_identity)
    }

    pub fn inequalities_hold(&self, tol: f64) -> bool {
        self.entropy_min_slack() >= tol && self.internal_min_slack() >= tol
    }
}

fn time_factor(t: f64, t_end: f64) -> (f64, f64) {
    let s = 1.0 - t / t_end;
    (s * s * s, -3.0 * s * s / t_end)
}

fn relative(res: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        res.abs() / scale
    } else {
        res.abs()
    }
}

/// A nonnegative scalar test function on the grid.
struct ScalarTest {
    val: Array2<f64>,
    dx: Array2<f64>,
    dy: Array2<f64>,
    wall: [Array1<f64>; 2],
}

fn scalar_bank(model: &Model, size: usize, rng: &mut ChaCha8Rng) -> Vec<ScalarTest> {
    let tb = &model.disc.temperature;
    (0..size)
        .map(|_| {
            let mut b = vec![0.0; tb.len()];
            for (j, x) in b.iter_mut().enumerate().skip(1) {
                *x = rng.gen_range(-1.0..1.0) / (1.0 + tb.eigenvalue(j));
            }
            let g = tb.synthesize(&b);
            let lo = g.min();
            let span = (g.max() - lo).max(1e-300);
            let wall = tb.wall_trace(&b).map(|w| w.mapv(|v| (v - lo) / span));
            ScalarTest {
                val: g.val.mapv(|v| (v - lo) / span),
                dx: g.dx / span,
                dy: g.dy / span,
                wall,
            }
        })
        .collect()
}

/// Per-sample fields shared by every scalar test function.
struct SampleFields {
    theta: Array2<f64>,
    eta: Array2<f64>,
    /// `ηv − κ∇η`.
    entropy_flux: [Array2<f64>; 2],
    /// `S:D/(ϑ+ε) + κ|∇η|² − ϑ v·f/(ϑ+ε)`.
    entropy_source: Array2<f64>,
    /// `ϑv − κ∇ϑ`.
    heat_flux: [Array2<f64>; 2],
    /// `S:D − ϑ v·f`.
    heat_source: Array2<f64>,
    /// `|v|²/2 + ϑ`.
    energy: Array2<f64>,
    /// `v(|v|²/2 + ϑ + π) − κ∇ϑ − Sv`.
    energy_flux: [Array2<f64>; 2],
    /// `α|v_τ|²` on the walls.
    wall_energy: [Array1<f64>; 2],
}

fn sample_fields(model: &Model, s: &Sample) -> Result<SampleFields> {
    let eps = model.eps_floor;
    let pw = model.pointwise(&s.state.c, &s.state.d);
    let vel = &pw.vel;
    let th = &pw.temp.val;
    let min = th.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= -eps {
        return Err(Error::Positivity {
            t: s.state.t,
            min_theta: min,
        });
    }
    let [f1, f2] = model.force;
    let inv = th.mapv(|t| 1.0 / (t + eps));
    let vf = &vel.u * f1 + &vel.v * f2;
    let eta_x = &pw.temp.dx * &inv;
    let eta_y = &pw.temp.dy * &inv;
    let eta = th.mapv(|t| (t + eps).ln());
    let grad_eta2 = &eta_x * &eta_x + &eta_y * &eta_y;
    let entropy_source = &pw.dissipation * &inv + &pw.kappa * &grad_eta2 - &(th * &vf * &inv);
    let [s11, s12, s22] = &pw.stress;
    let pi = reconstruct_pressure(model, &s.state).values(model);
    let half_speed = vel.speed_sq() * 0.5;
    let head = &half_speed + th + &pi;
    let traces = model.disc.velocity.wall_trace(&s.state.c);
    Ok(SampleFields {
        entropy_flux: [
            &eta * &vel.u - &(&pw.kappa * &eta_x),
            &eta * &vel.v - &(&pw.kappa * &eta_y),
        ],
        entropy_source,
        heat_flux: [
            th * &vel.u - &(&pw.kappa * &pw.temp.dx),
            th * &vel.v - &(&pw.kappa * &pw.temp.dy),
        ],
        heat_source: &pw.dissipation - &(th * &vf),
        energy: &half_speed + th,
        energy_flux: [
            &vel.u * &head - &(&pw.kappa * &pw.temp.dx) - &(s11 * &vel.u + s12 * &vel.v),
            &vel.v * &head - &(&pw.kappa * &pw.temp.dy) - &(s12 * &vel.u + s22 * &vel.v),
        ],
        wall_energy: [
            traces[0].mapv(|u| model.alpha * u * u),
            traces[1].mapv(|u| model.alpha * u * u),
        ],
        theta: th.clone(),
        eta,
    })
}

/// Momentum rows `∫(S − v⊗v):∇w_i − ∫ϑ f·w_i + α∮ v_τ w_i·τ`.
fn momentum_rows(model: &Model, s: &Sample) -> Vec<f64> {
    let pw = model.pointwise(&s.state.c, &s.state.d);
    let vel = &pw.vel;
    let [s11, s12, s22] = &pw.stress;
    let [f1, f2] = model.force;
    let forms = VelocityForms {
        f11: s11 - &(&vel.u * &vel.u),
        f12: s12 - &(&vel.u * &vel.v),
        f21: s12 - &(&vel.v * &vel.u),
        f22: s22 - &(&vel.v * &vel.v),
        g1: &pw.temp.val * (-f1),
        g2: &pw.temp.val * (-f2),
    };
    let vb = &model.disc.velocity;
    let mut rows = vb.analyze(&forms);
    if model.alpha > 0.0 {
        let tr = vb.wall_trace(&s.state.c);
        let wall = vb.analyze_wall(&(&tr[0] * model.alpha), &(&tr[1] * model.alpha));
        for (r, w) in rows.iter_mut().zip(&wall) {
            *r += w;
        }
    }
    rows
}

fn flux_dot(flux: &[Array2<f64>; 2], psi: &ScalarTest, model: &Model) -> f64 {
    integrate(&(&flux[0] * &psi.dx + &flux[1] * &psi.dy), &model.disc.grid)
}

fn wall_dot(h: &[Array1<f64>; 2], psi: &ScalarTest, model: &Model) -> f64 {
    model.disc.grid.wx * ((&h[0] * &psi.wall[0]).sum() + (&h[1] * &psi.wall[1]).sum())
}

/// Signed pieces of one space-time functional, summed into a residual and a
/// scale for normalization.
#[derive(Default, Clone, Copy)]
struct Pieces {
    sum: f64,
    scale: f64,
}

impl Pieces {
    fn add(&mut self, x: f64) {
        self.sum += x;
        self.scale += x.abs();
    }
}

/// Evaluates every weak formulation against `bank_size` random test functions.
///
/// Momentum uses divergence-free in-band fields, so the pressure drops out.
/// The entropy and internal-energy slacks are `LHS − RHS` of the respective
/// inequalities and are absolute, with test functions scaled to `0 ≤ ψ ≤ 1`.
pub fn weak_residuals(model: &Model, traj: &Trajectory, bank_size: usize, seed: u64) -> Result<WeakResidualReport> {
    let times = traj.times();
    let t0 = times[0];
    let t_end = *times.last().expect("nonempty");
    if t_end <= t0 {
        return Err(Error::Domain("weak residuals need a trajectory of positive length".into()));
    }
    let span = t_end - t0;
    let weights = time_weights(&times);
    let theta_t: Vec<(f64, f64)> = times.iter().map(|&t| time_factor(t - t0, span)).collect();
    let grid = &model.disc.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Momentum: residual(a) = a·R is linear in the test coefficients.
    let nv = model.nv();
    let mut lin = vec![0.0; nv];
    let parts = {
        let mut dt_part = vec![0.0; nv];
        let mut flux_part = vec![0.0; nv];
        let mut init_part = vec![0.0; nv];
        for (s, (w, &(th, dth))) in traj.samples.iter().zip(weights.iter().zip(&theta_t)) {
            let rows = momentum_rows(model, s);
            for i in 0..nv {
                dt_part[i] -= w * dth * s.state.c[i];
                flux_part[i] += w * th * rows[i];
            }
        }
        let c0 = &traj.first().state.c;
        for i in 0..nv {
            init_part[i] = -theta_t[0].0 * c0[i];
            lin[i] = dt_part[i] + flux_part[i] + init_part[i];
        }
        [dt_part, flux_part, init_part]
    };
    let (momentum, momentum_abs) = (0..bank_size)
        .map(|_| {
            let a: Vec<f64> = (0..nv).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let dot = |v: &[f64]| v.iter().zip(&a).map(|(x, y)| x * y).sum::<f64>() / norm;
            let [p0, p1, p2] = &parts;
            let res = dot(&lin);
            (relative(res, dot(p0).abs() + dot(p1).abs() + dot(p2).abs()), res.abs())
        })
        .unzip();

    let bank = scalar_bank(model, bank_size, &mut rng);
    let mut entropy = vec![Pieces::default(); bank_size];
    let mut internal = vec![Pieces::default(); bank_size];
    let mut energy = vec![Pieces::default(); bank_size];
    for (idx, (s, (w, &(th, dth)))) in traj.samples.iter().zip(weights.iter().zip(&theta_t)).enumerate() {
        let f = sample_fields(model, s)?;
        for (b, psi) in bank.iter().enumerate() {
            // entropy: −∫∫ηφ_t − ∫∫(ηv − κ∇η)·∇φ − ∫∫ source φ − ∫η₀φ(0) ≥ 0
            let e = &mut entropy[b];
            e.add(-w * dth * integrate(&(&f.eta * &psi.val), grid));
            e.add(-w * th * flux_dot(&f.entropy_flux, psi, model));
            e.add(-w * th * integrate(&(&f.entropy_source * &psi.val), grid));
            // internal energy: −∫∫ϑφ_t − ∫∫(ϑv − κ∇ϑ)·∇φ − ∫∫(S:D − ϑv·f)φ − ∫ϑ₀φ(0) ≥ 0
            let h = &mut internal[b];
            h.add(-w * dth * integrate(&(&f.theta * &psi.val), grid));
            h.add(-w * th * flux_dot(&f.heat_flux, psi, model));
            h.add(-w * th * integrate(&(&f.heat_source * &psi.val), grid));
            // total energy: −∫∫Eφ_t − ∫∫(flux)·∇φ + α∫∮|v|²φ − ∫E₀φ(0) = 0
            let g = &mut energy[b];
            g.add(-w * dth * integrate(&(&f.energy * &psi.val), grid));
            g.add(-w * th * flux_dot(&f.energy_flux, psi, model));
            g.add(w * th * wall_dot(&f.wall_energy, psi, model));
            if idx == 0 {
                e.add(-th * integrate(&(&f.eta * &psi.val), grid));
                h.add(-th * integrate(&(&f.theta * &psi.val), grid));
                g.add(-th * integrate(&(&f.energy * &psi.val), grid));
            }
        }
    }
    Ok(WeakResidualReport {
        bank_size,
        momentum,
        momentum_abs,
        entropy_slack: entropy.iter().map(|p| p.sum).collect(),
        internal_slack: internal.iter().map(|p| p.sum).collect(),
        energy_identity: energy.iter().map(|p| relative(p.sum, p.scale)).collect(),
    })
}
