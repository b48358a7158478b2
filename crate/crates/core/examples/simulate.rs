// Integrates the buoyant-blob scenario and prints energy and temperature range.

use nsf_galerkin::solver::{simulate, RunConfig, Scenario, Trajectory};

pub fn run_example() -> Trajectory {
    let mut config = RunConfig::for_scenario(Scenario::BuoyantBlob);
    config.n = 6;
    config.m = 6;
    config.t_end = 0.1;
    config.output_interval = 0.025;
    let (model, traj) = simulate(&config).expect("blob run");
    for s in &traj.samples {
        let th = model.disc.temperature.synthesize_values(&s.state.d);
        let (lo, hi) = th.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        println!(
            "t = {:.3}  E = {:.12}  ϑ ∈ [{lo:.4}, {hi:.4}]",
            s.state.t,
            model.energy(&s.state.c, &s.state.d)
        );
    }
    traj
}

#[allow(dead_code)]
fn main() {
    run_example();
}
