use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discretization::{integrate, lq_norm, lq_power, w1q_norm, VelocityGrid};
use crate::error::{Error, Result};
use crate::solver::{initial_temperature, initial_velocity, FluidState, Model, RunConfig, Trajectory};

/// Largest observed ratio of an inequality's left side to its right side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalConstant {
    pub max_ratio: f64,
    pub samples: usize,
    pub skipped: usize,
}

fn fold_ratios<I: Iterator<Item = Option<f64>>>(it: I) -> EmpiricalConstant {
    let mut out = EmpiricalConstant {
        max_ratio: 0.0,
        samples: 0,
        skipped: 0,
    };
    for r in it {
        match r {
            Some(r) => {
                out.samples += 1;
                out.max_ratio = out.max_ratio.max(r);
            }
            None => out.skipped += 1,
        }
    }
    out
}

fn is_zero(v: &VelocityGrid) -> bool {
    v.u.iter().chain(&v.v).all(|x| *x == 0.0)
}

/// `‖v‖_{1,p} / (‖D(v)‖_p + ‖v‖₂)`.
pub fn korn_check(samples: &[VelocityGrid], model: &Model, p: f64) -> EmpiricalConstant {
    let grid = &model.disc.grid;
    fold_ratios(samples.iter().map(|v| {
        if is_zero(v) {
            return None;
        }
        let lhs = w1q_norm(&[&v.u, &v.v], &[&v.ux, &v.uy, &v.vx, &v.vy], grid, p);
        let [d11, d12, d22] = v.sym_gradient();
        let d12b = d12 * std::f64::consts::SQRT_2;
        let rhs = lq_norm(&[&d11, &d12b, &d22], grid, p) + lq_norm(&[&v.u, &v.v], grid, 2.0);
        Some(lhs / rhs)
    }))
}

/// `‖u‖_s^s / (‖u‖₂^{2p/d} ‖u‖_{1,p}^p)` with `s = p(d+2)/d`.
pub fn interp_check(samples: &[VelocityGrid], model: &Model, p: f64, d: usize) -> EmpiricalConstant {
    let grid = &model.disc.grid;
    let df = d as f64;
    let s = p * (df + 2.0) / df;
    fold_ratios(samples.iter().map(|v| {
        if is_zero(v) {
            return None;
        }
        let lhs = lq_power(&[&v.u, &v.v], grid, s);
        let l2 = lq_norm(&[&v.u, &v.v], grid, 2.0);
        let w1p = lq_power(&[&v.u, &v.v], grid, p) + lq_power(&[&v.ux, &v.uy, &v.vx, &v.vy], grid, p);
        Some(lhs / (l2.powf(2.0 * p / df) * w1p))
    }))
}

/// Random in-band velocity fields with coefficients decaying like `1/(1+i)`.
pub fn random_velocity_samples(model: &Model, count: usize, seed: u64) -> Vec<VelocityGrid> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = model.nv();
    (0..count)
        .map(|_| {
            let amp: f64 = rng.gen_range(0.1..10.0);
            let c: Vec<f64> = (0..nv)
                .map(|i| amp * rng.gen_range(-1.0..1.0) / (1.0 + i as f64).sqrt())
                .collect();
            model.disc.velocity.synthesize(&c)
        })
        .collect()
}

/// Relative size of the sums that vanish identically in the semi-discrete system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralIdentities {
    /// `Σ c_i ∫ g v⊗v:∇w_i` over `Σ |c_i ∫ g v⊗v:∇w_i|`.
    pub convective: f64,
    /// `Σ d_j ∫ T_k(ϑ)v·∇w_j`, relative.
    pub transport: f64,
    /// Buoyancy work plus the temperature sink, relative.
    pub buoyancy: f64,
}

impl StructuralIdentities {
    pub fn max(&self) -> f64 {
        self.convective.max(self.transport).max(self.buoyancy)
    }
}

fn cancel(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut a) = (0.0, 0.0);
    for t in terms {
        s += t;
        a += t.abs();
    }
    if a > 0.0 {
        s.abs() / a
    } else {
        0.0
    }
}

pub fn structural_identities(model: &Model, c: &[f64], d: &[f64]) -> StructuralIdentities {
    let terms = model.terms(c, d);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).collect::<Vec<_>>();
    // only the constant mode sees the temperature sink in the total energy
    let sink = terms.sink[0] * model.disc.temperature.constant_coefficient();
    StructuralIdentities {
        convective: cancel(dot(c, &terms.convective).into_iter()),
        transport: cancel(dot(d, &terms.transport).into_iter()),
        buoyancy: cancel(dot(c, &terms.buoyancy).into_iter().chain(std::iter::once(sink))),
    }
}

/// A random state whose velocity and temperature stay well below the
/// truncation level, with temperature bounded away from zero.
pub fn random_state(model: &Model, rng: &mut ChaCha8Rng) -> FluidState {
    let nv = model.nv();
    let nt = model.nt();
    let amp: f64 = rng.gen_range(0.1..3.0);
    let c = (0..nv)
        .map(|i| amp * rng.gen_range(-1.0..1.0) / (1.0 + i as f64).sqrt())
        .collect();
    let mut d: Vec<f64> = (0..nt)
        .map(|j| rng.gen_range(-1.0..1.0) / (1.0 + j as f64))
        .collect();
    let tb = &model.disc.temperature;
    let lo = tb.synthesize_values(&d).iter().copied().fold(f64::INFINITY, f64::min);
    d[0] += (1.0 - lo).max(0.0) * tb.constant_coefficient();
    FluidState { t: 0.0, c, d }
}

/// `‖v(t) − v₀‖₂ + ‖ϑ(t) − ϑ₀‖₁` against the unregularized initial data.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialAttainment {
    pub times: Vec<f64>,
    pub distance: Vec<f64>,
}

pub fn initial_attainment(config: &RunConfig, model: &Model, traj: &Trajectory) -> Result<InitialAttainment> {
    let grid = &model.disc.grid;
    let u0 = grid.sample(|x, y| initial_velocity(config, x, y)[0]);
    let v0 = grid.sample(|x, y| initial_velocity(config, x, y)[1]);
    let th0 = grid.sample(|x, y| initial_temperature(config, x, y));
    if th0.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Domain("initial temperature must be positive".into()));
    }
    let mut out = InitialAttainment {
        times: Vec::new(),
        distance: Vec::new(),
    };
    for s in &traj.samples {
        let vel = model.disc.velocity.synthesize(&s.state.c);
        let th = model.disc.temperature.synthesize_values(&s.state.d);
        let du = &vel.u - &u0;
        let dv = &vel.v - &v0;
        let dist = integrate(&(&du * &du + &dv * &dv), grid).sqrt() + integrate(&(&th - &th0).mapv(f64::abs), grid);
        out.times.push(s.state.t);
        out.distance.push(dist);
    }
    Ok(out)
}
