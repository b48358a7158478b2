// Parses a configuration, runs a two-point sweep and prints the table.

use nsf_galerkin::io::{parse_config_str, sweep, sweep_table, SweepAxis};

const CONFIG: &str = "\
# small conduction run
scenario = conduction
n = 4
m = 4
t_end = 0.05
output_interval = 0.025
test_bank = 0
";

pub fn run_example() -> String {
    let base = parse_config_str(CONFIG).expect("valid config");
    let axis = SweepAxis::parse("alpha=0,1").expect("valid axis");
    let table = sweep_table(&sweep(&base, &[axis]));
    print!("{table}");
    table
}

#[allow(dead_code)]
fn main() {
    run_example();
}
