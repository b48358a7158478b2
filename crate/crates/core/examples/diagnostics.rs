// Full diagnostics of a short shear-decay run: balances, monitors, weak residuals.

use nsf_galerkin::diagnostics::{DiagnosticsOptions, DiagnosticsReport};
use nsf_galerkin::solver::{run, RunConfig, Scenario};

pub fn run_example() -> DiagnosticsReport {
    let mut config = RunConfig::for_scenario(Scenario::ShearDecay);
    config.n = 6;
    config.m = 6;
    config.t_end = 0.2;
    config.output_interval = 0.01;
    let options = DiagnosticsOptions {
        bank_size: 10,
        ..Default::default()
    };
    let (_, _, report) = run(&config, &options).expect("shear-decay run");
    for (key, value) in report.summary() {
        println!("{key:<30} {value:.6e}");
    }
    report
}

#[allow(dead_code)]
fn main() {
    run_example();
}
