//! Two-level Galerkin approximation of the truncated system and its time
//! integration.

mod config;
mod initial;
pub mod integrators;
mod model;

pub use config::{Integrator, RunConfig, Scenario};
pub use initial::{initial_temperature, initial_velocity, mollify, prepare_initial_data, prepare_with};
pub use model::{Accumulators, Model, Pointwise, Terms, N_ACC};

use integrators::{BackwardEuler, Dopri5, OdeSystem, StepStats};

use crate::diagnostics::{diagnose, DiagnosticsOptions, DiagnosticsReport};
use crate::error::{Error, Result};

/// Galerkin coefficients at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FluidState {
    pub t: f64,
    /// Velocity coefficients.
    pub c: Vec<f64>,
    /// Temperature coefficients.
    pub d: Vec<f64>,
}

impl FluidState {
    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.c.iter().chain(&self.d).all(|x| x.is_finite())
    }
}

/// A stored output time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub state: FluidState,
    pub acc: Accumulators,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has the initial sample")
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.state.t).collect()
    }
}

impl OdeSystem for Model {
    fn len(&self) -> usize {
        self.core_len() + N_ACC
    }

    fn core_len(&self) -> usize {
        Model::core_len(self)
    }

    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
        let (nv, nt) = (self.nv(), self.nt());
        let (c, rest) = y.split_at(nv);
        let (d, _) = rest.split_at(nt);
        let (dc, rest) = dy.split_at_mut(nv);
        let (dd, acc) = rest.split_at_mut(nt);
        Model::rhs(self, c, d, dc, dd, acc)
    }
}

enum Stepper {
    Explicit(Dopri5),
    Implicit(BackwardEuler),
}

impl Stepper {
    fn new(config: &RunConfig) -> Self {
        match config.integrator {
            Integrator::Dopri5 => Stepper::Explicit(Dopri5::adaptive(config.rtol, config.atol, config.dt)),
            Integrator::Dopri5Fixed => Stepper::Explicit(Dopri5::fixed(config.dt)),
            Integrator::BackwardEuler => {
                Stepper::Implicit(BackwardEuler::new(config.dt, config.rtol, config.atol))
            }
        }
    }

    fn advance(&mut self, model: &Model, t: &mut f64, y: &mut Vec<f64>, t_end: f64) -> Result<()> {
        match self {
            Stepper::Explicit(s) => s.advance(model, t, y, t_end),
            Stepper::Implicit(s) => s.advance(model, t, y, t_end),
        }
    }

    fn stats(&self) -> StepStats {
        match self {
            Stepper::Explicit(s) => s.stats,
            Stepper::Implicit(s) => s.stats,
        }
    }
}

fn pack(state: &FluidState) -> Vec<f64> {
    let mut y = Vec::with_capacity(state.c.len() + state.d.len() + N_ACC);
    y.extend_from_slice(&state.c);
    y.extend_from_slice(&state.d);
    y.extend_from_slice(&[0.0; N_ACC]);
    y
}

fn unpack(model: &Model, t: f64, y: &[f64]) -> Sample {
    let (nv, nt) = (model.nv(), model.nt());
    Sample {
        state: FluidState {
            t,
            c: y[..nv].to_vec(),
            d: y[nv..nv + nt].to_vec(),
        },
        acc: Accumulators::from_slice(&y[nv + nt..]),
    }
}

/// Integrates from a given initial state, sampling at the configured output times.
pub fn integrate_from(config: &RunConfig, model: &Model, initial: FluidState) -> Result<Trajectory> {
    if initial.c.len() != model.nv() || initial.d.len() != model.nt() {
        return Err(Error::Domain("initial state does not match the bases".into()));
    }
    let mut y = pack(&initial);
    let mut t = initial.t;
    let mut samples = vec![unpack(model, t, &y)];
    let mut stepper = Stepper::new(config);
    for t_out in config.output_times() {
        stepper.advance(model, &mut t, &mut y, t_out)?;
        samples.push(unpack(model, t, &y));
    }
    Ok(Trajectory {
        samples,
        stats: stepper.stats(),
    })
}

/// Builds the model, prepares the initial data and integrates to `t_end`.
pub fn simulate(config: &RunConfig) -> Result<(Model, Trajectory)> {
    config.validate()?;
    let model = Model::new(config)?;
    let initial = prepare_initial_data(config, &model)?;
    let traj = integrate_from(config, &model, initial)?;
    Ok((model, traj))
}

/// Advances `state` by `config.dt` with the configured integrator. Adaptive
/// integration may take several internal steps to get there.
pub fn step(config: &RunConfig, model: &Model, state: &FluidState) -> Result<FluidState> {
    let mut y = pack(state);
    let mut t = state.t;
    let mut stepper = Stepper::new(config);
    stepper.advance(model, &mut t, &mut y, state.t + config.dt)?;
    let out = unpack(model, t, &y).state;
    if !out.is_finite() {
        return Err(Error::Numerical {
            t,
            reason: "non-finite state after step".into(),
        });
    }
    Ok(out)
}

/// [`simulate`] followed by the full diagnostics suite.
pub fn run(config: &RunConfig, options: &DiagnosticsOptions) -> Result<(Model, Trajectory, DiagnosticsReport)> {
    let (model, traj) = simulate(config)?;
    let report = diagnose(config, &model, &traj, options)?;
    Ok((model, traj, report))
}
