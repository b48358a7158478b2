// Builds the velocity and temperature bases and checks orthonormality and
// divergence of a synthesized field.

use nsf_galerkin::discretization::{build_bases, ChannelDomain};

pub fn run_example() -> (f64, f64) {
    let (disc, gram) = build_bases(8, ChannelDomain::new(2.0).expect("lx > 0")).expect("valid mode count");
    let c: Vec<f64> = (0..disc.velocity.len()).map(|i| 1.0 / (1.0 + i as f64)).collect();
    let div = disc.velocity.synthesize(&c).divergence();
    let max_div = div.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    println!(
        "{} velocity / {} temperature modes on {}x{} grid",
        disc.velocity.len(),
        disc.temperature.len(),
        disc.grid.nx,
        disc.grid.ny
    );
    println!("Gram deviation {gram:.2e}, max |div v| {max_div:.2e}");
    (gram, max_div)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
