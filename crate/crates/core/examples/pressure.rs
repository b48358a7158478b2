// Reconstructs the hydrostatic pressure of a fluid at rest under gravity.

use nsf_galerkin::pressure::{reconstruct_pressure, weak_residual};
use nsf_galerkin::solver::{FluidState, Model, RunConfig, Scenario};

pub fn run_example() -> (f64, f64) {
    let mut config = RunConfig::for_scenario(Scenario::Steady);
    config.n = 8;
    config.m = 8;
    let model = Model::new(&config).expect("valid config");
    let mut d = vec![0.0; model.nt()];
    d[0] = model.disc.temperature.constant_coefficient();
    let rest = FluidState {
        t: 0.0,
        c: vec![0.0; model.nv()],
        d,
    };
    let pi = reconstruct_pressure(&model, &rest);
    let bottom = model.disc.temperature.eval(pi.coeffs(), 0.0, 0.0);
    let residual = weak_residual(&model, &rest, &pi);
    // cosine series of ½ − y, so the wall value converges slowly to ½
    println!("π(x, 0) = {bottom:.4}, mean = {:.1e}, weak residual = {residual:.1e}", pi.mean(&model));
    (bottom, residual)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
