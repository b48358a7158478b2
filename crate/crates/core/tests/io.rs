use std::fs;

use nsf_galerkin::io::{
    emit_reports, exit_code, parse_config_str, sweep, sweep_table, RunManifest, Settings, SweepAxis, EXIT_USAGE, KEYS,
};
use nsf_galerkin::solver::{run, Integrator, Scenario};
use nsf_galerkin::Error;
use proptest::prelude::*;

fn small(text: &str) -> Settings {
    parse_config_str(text).unwrap()
}

const TINY: &str = "scenario = buoyant-blob\nn = 4\nm = 4\nt_end = 0.05\noutput_interval = 0.025\ntest_bank = 4\n";

#[test]
fn minimal_config_fills_defaults() {
    let s = small("scenario = steady\n");
    let mut expected = Settings::for_scenario(Scenario::Steady);
    expected.run.scenario = Scenario::Steady;
    assert_eq!(s, expected);
    assert_eq!(s.run.n, 8);
    assert_eq!(s.run.integrator, Integrator::Dopri5);
}

#[test]
fn comments_blank_lines_and_order_are_accepted() {
    let s = small("# header\n\nn = 6   # modes\nscenario = conduction\nforce = 0.5, -2\ngrid = 30x40\n");
    assert_eq!(s.run.scenario, Scenario::Conduction);
    assert_eq!(s.run.n, 6);
    assert_eq!(s.run.force, [0.5, -2.0]);
    assert_eq!(s.run.grid, Some((30, 40)));
}

#[test]
fn inadmissible_exponent_is_rejected_with_the_threshold() {
    let e = parse_config_str("p = 1.1\nd = 3\n").unwrap_err();
    let msg = e.to_string();
    assert!(msg.contains("p > 2d/(d+2)"), "{msg}");
    assert!(msg.contains("1.2"), "{msg}");
    assert_eq!(exit_code(&e), EXIT_USAGE);
}

#[test]
fn malformed_number_names_line_and_key() {
    let e = parse_config_str("scenario = steady\nalpha = fast\n").unwrap_err();
    match e {
        Error::Config { line, reason } => {
            assert_eq!(line, 2);
            assert!(reason.contains("alpha"), "{reason}");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn unknown_and_duplicate_keys_are_rejected() {
    assert!(matches!(parse_config_str("viscosity = 1\n"), Err(Error::Config { line: 1, .. })));
    assert!(matches!(parse_config_str("n = 4\nn = 5\n"), Err(Error::Config { line: 2, .. })));
    assert!(matches!(parse_config_str("just words\n"), Err(Error::Config { line: 1, .. })));
}

#[test]
fn closed_temperature_window_is_rejected() {
    assert!(parse_config_str(&format!("q = {}\n", 5.0 / 3.0)).is_err());
    assert!(parse_config_str("r = 1.25\n").is_err());
}

#[test]
fn every_key_is_readable() {
    let s = Settings::default();
    for k in KEYS {
        assert!(s.get(k).is_some(), "{k}");
    }
}

#[test]
fn identical_runs_write_identical_files() {
    let s = small(TINY);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let (model, traj, report) = run(&s.run, &s.diagnostics).unwrap();
        let manifest = RunManifest::new(&s, &model);
        emit_reports(d.path(), &manifest, &model, &traj, &report, None, true).unwrap();
    }
    let mut names: Vec<_> = fs::read_dir(dirs[0].path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.iter().any(|n| n == "diagnostics.csv"));
    assert!(names.iter().any(|n| n == "fields_0.050000.csv"));
    for n in &names {
        let a = fs::read(dirs[0].path().join(n)).unwrap();
        let b = fs::read(dirs[1].path().join(n)).unwrap();
        assert_eq!(a, b, "{n:?} differs");
    }
    let manifest = fs::read_to_string(dirs[0].path().join("manifest")).unwrap();
    assert_eq!(parse_config_str(&manifest).unwrap(), s);
}

#[test]
fn steady_diagnostics_rows_are_flat() {
    let s = small("scenario = steady\nn = 4\nm = 4\nt_end = 0.3\ntest_bank = 4\n");
    let (_, _, report) = run(&s.run, &s.diagnostics).unwrap();
    let first = &report.rows[0];
    for r in &report.rows {
        assert!((r.energy - first.energy).abs() <= 1e-13 * first.energy);
        assert!((r.entropy - first.entropy).abs() <= 1e-12);
        assert!((r.monitors.pressure - first.monitors.pressure).abs() <= 1e-10);
    }
    let w = report.weak.unwrap();
    assert!(w.momentum_abs_max() <= 1e-12, "{}", w.momentum_abs_max());
}

#[test]
fn nonempty_output_is_refused_without_force() {
    let s = small(TINY);
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("keep"), "x").unwrap();
    let (model, traj, report) = run(&s.run, &s.diagnostics).unwrap();
    let manifest = RunManifest::new(&s, &model);
    let e = emit_reports(dir.path(), &manifest, &model, &traj, &report, None, false).unwrap_err();
    assert!(matches!(e, Error::Io(_)));
    emit_reports(dir.path(), &manifest, &model, &traj, &report, None, true).unwrap();
}

#[test]
fn sweep_isolates_failures_and_classifies() {
    // regularized so the shear-thinning entries are not stiff
    let base = small(&format!("{TINY}eps_reg = 0.01\n"));
    let rows = sweep(&base, &[SweepAxis::parse("p=1.3,1.7,2,2.3").unwrap()]);
    let classes: Vec<&str> = rows.iter().map(|r| r.classification.as_str()).collect();
    assert_eq!(classes, ["weak", "energy-equality", "suitable", "internal-energy-equality"]);
    assert!(rows.iter().all(|r| r.outcome.is_ok()));

    let rows = sweep(&base, &[SweepAxis::parse("n=4,0").unwrap()]);
    assert!(rows[0].outcome.is_ok());
    assert!(rows[1].outcome.is_err());
    let table = sweep_table(&rows);
    assert_eq!(table.lines().count(), 3);
    assert!(table.lines().nth(2).unwrap().contains("error"));
}

#[test]
fn truncation_sweep_agrees_once_inactive() {
    let base = small(TINY);
    let rows = sweep(&base, &[SweepAxis::parse("k=1,4,1000000").unwrap()]);
    let get = |i: usize| rows[i].outcome.as_ref().unwrap().clone();
    let (low, mid, high) = (get(0), get(1), get(2));
    let key = |v: &Vec<(String, f64)>, k: &str| v.iter().find(|(n, _)| n == k).unwrap().1;
    let a = key(&mid, "sup_l2_sq");
    let b = key(&high, "sup_l2_sq");
    assert!((a - b).abs() <= 1e-12 * b.abs());
    assert!((key(&low, "sup_l2_sq") - b).abs() > 1e-6 * b.abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn manifest_round_trips(
        n in 1usize..20,
        alpha in 0.0f64..5.0,
        p in 1.6f64..4.0,
        dt in 1e-5f64..1e-2,
        seed in any::<u64>(),
        fx in -3.0f64..3.0,
    ) {
        let mut s = Settings::for_scenario(Scenario::ShearDecay);
        s.run.n = n;
        s.run.alpha = alpha;
        s.run.params.p = p;
        s.run.dt = dt;
        s.run.seed = seed;
        s.run.force = [fx, -1.0];
        s.run.n_moll = Some(n + 3);
        let parsed = parse_config_str(&s.to_text()).unwrap();
        prop_assert_eq!(parsed, s);
    }
}
