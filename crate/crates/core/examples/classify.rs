// Which notions of solution exist for a range of growth exponents.

use nsf_galerkin::exponents::{classify, pressure_exponent, RegularityClassification};

pub fn run_example() -> Vec<RegularityClassification> {
    let ladder: Vec<_> = [1.3, 1.7, 2.0, 2.2, 3.0]
        .into_iter()
        .map(|p| classify(p, 3).expect("p > 1"))
        .collect();
    for c in &ladder {
        let z = pressure_exponent(c.p).expect("p > 6/5");
        println!("p = {:<4} {:<25} z' = {z:.4}", c.p, c.level());
    }
    ladder
}

#[allow(dead_code)]
fn main() {
    run_example();
}
