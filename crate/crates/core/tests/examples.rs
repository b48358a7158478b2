mod classify {
    include!("../examples/classify.rs");
}
mod constitutive {
    include!("../examples/constitutive.rs");
}
mod truncation {
    include!("../examples/truncation.rs");
}
mod bases {
    include!("../examples/bases.rs");
}
mod simulate {
    include!("../examples/simulate.rs");
}
mod pressure {
    include!("../examples/pressure.rs");
}
mod diagnostics {
    include!("../examples/diagnostics.rs");
}
mod config {
    include!("../examples/config.rs");
}

#[test]
fn classify_ladder() {
    let levels: Vec<_> = classify::run_example().iter().map(|c| c.level()).collect();
    assert_eq!(
        levels,
        ["weak", "energy-equality", "suitable", "internal-energy-equality", "internal-energy-equality"]
    );
}

#[test]
fn constitutive_assumptions_hold() {
    assert!(constitutive::run_example().iter().all(|(_, r)| r.passed()));
}

#[test]
fn truncation_is_identity_below_k() {
    for (z, t, g) in truncation::run_example() {
        if z <= 4.0 {
            assert_eq!((t, g), (z, 1.0));
        } else {
            assert!(t <= 5.0 && g < 1.0);
        }
    }
}

#[test]
fn bases_are_orthonormal_and_solenoidal() {
    let (gram, div) = bases::run_example();
    assert!(gram <= 1e-12 && div <= 1e-10, "{gram} {div}");
}

#[test]
fn simulate_reports_every_output_time() {
    let traj = simulate::run_example();
    assert_eq!(traj.samples.len(), 5);
}

#[test]
fn pressure_is_hydrostatic() {
    let (bottom, residual) = pressure::run_example();
    assert!((bottom - 0.5).abs() < 0.05, "{bottom}");
    assert!(residual <= 1e-8);
}

#[test]
fn diagnostics_summary_is_complete() {
    let r = diagnostics::run_example();
    assert!(r.energy.max_relative <= 1e-8);
    assert!(r.weak.is_some());
}

#[test]
fn config_sweep_table() {
    let table = config::run_example();
    assert_eq!(table.lines().count(), 3);
    assert!(!table.contains("error"));
}
