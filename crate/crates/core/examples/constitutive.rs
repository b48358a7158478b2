// Evaluates the power-law stress and checks the structural assumptions by sampling.

use nsf_galerkin::constitutive::{stress, verify_assumptions, AssumptionReport, ConstitutiveParams, SymTensor};

pub fn run_example() -> Vec<(f64, AssumptionReport)> {
    let shear = SymTensor::new2(0.0, 0.5, 0.0);
    let mut reports = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        let params = ConstitutiveParams::power_law(p);
        let s = stress(1.0, &shear, &params).expect("finite input");
        let report = verify_assumptions(&params, 3, 2_000, 1);
        println!("p = {p}: |S(D)| = {:.4}, violations = {}", s.norm(), report.violations());
        reports.push((p, report));
    }
    reports
}

#[allow(dead_code)]
fn main() {
    run_example();
}
