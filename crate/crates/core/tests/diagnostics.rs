use nsf_galerkin::diagnostics::{
    apriori_monitors, energy_balance, entropy_balance, initial_attainment, interp_check, korn_check, random_state,
    random_velocity_samples, structural_identities, tail_check, tail_integral, weak_residuals, DiagnosticsOptions,
};
use nsf_galerkin::solver::{run, simulate, FluidState, Model, RunConfig, Scenario};
use nsf_galerkin::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(scenario: Scenario, n: usize, t_end: f64, every: f64) -> RunConfig {
    let mut c = RunConfig::for_scenario(scenario);
    c.n = n;
    c.m = n;
    c.t_end = t_end;
    c.output_interval = every;
    c
}

#[test]
fn steady_state_balances_vanish() {
    let c = cfg(Scenario::Steady, 6, 0.5, 0.1);
    let (model, traj) = simulate(&c).unwrap();
    let e = energy_balance(&model, &traj);
    assert!(e.max_relative <= 1e-14);
    let s = entropy_balance(&model, &traj, model.eps_floor).unwrap();
    assert!(s.max_abs_time_defect <= 1e-13);
    assert!(s.consistency_gap.iter().all(|g| g.abs() <= 1e-13));
    let t = tail_check(&model, &traj, &[1.0, 2.0, 4.0]).unwrap();
    assert!(t.values.iter().flatten().all(|v| v.abs() <= 1e-12), "{:?}", t.values);
}

#[test]
fn slip_run_balances_with_boundary_dissipation() {
    let mut c = cfg(Scenario::ShearDecay, 6, 0.2, 0.05);
    c.alpha = 1.0;
    let (model, traj) = simulate(&c).unwrap();
    assert!(traj.last().acc.boundary_dissipation > 1e-3);
    let e = energy_balance(&model, &traj);
    assert!(e.max_relative <= 1e-8, "{}", e.max_relative);
}

#[test]
fn negative_temperature_is_reported() {
    let c = cfg(Scenario::Steady, 4, 0.1, 0.1);
    let (model, mut traj) = simulate(&c).unwrap();
    let tb = &model.disc.temperature;
    // ϑ = 1 − 3cos(πy) dips to −2
    traj.samples[1].state.d[tb.index(0, 1)] = -3.0 * (tb.grid().domain.lx / 2.0).sqrt();
    let e = entropy_balance(&model, &traj, model.eps_floor).unwrap_err();
    assert!(matches!(e, Error::Positivity { .. }));
}

#[test]
fn blob_entropy_productions_are_nonnegative() {
    let c = cfg(Scenario::BuoyantBlob, 8, 0.2, 0.05);
    let (model, traj) = simulate(&c).unwrap();
    let s = entropy_balance(&model, &traj, model.eps_floor).unwrap();
    assert!(s.min_conductive_integrand >= 0.0);
    assert!(s.min_dissipative_integrand >= 0.0);
    assert!(traj.last().acc.conductive_production > 0.0);
}

#[test]
fn monitor_window_is_open() {
    let c = cfg(Scenario::Steady, 4, 0.1, 0.1);
    let (model, traj) = simulate(&c).unwrap();
    let e = apriori_monitors(&model, &traj, 5.0 / 3.0, 1.2).unwrap_err();
    assert!(e.to_string().contains("[1, 5/3)"), "{e}");
    assert!(apriori_monitors(&model, &traj, 1.5, 1.25).is_err());
}

#[test]
fn steady_monitors_grow_linearly_in_time() {
    let short = cfg(Scenario::Steady, 4, 0.5, 0.1);
    let long = cfg(Scenario::Steady, 4, 1.0, 0.1);
    let (m1, t1) = simulate(&short).unwrap();
    let (m2, t2) = simulate(&long).unwrap();
    let a = apriori_monitors(&m1, &t1, 1.5, 1.2).unwrap();
    let b = apriori_monitors(&m2, &t2, 1.5, 1.2).unwrap();
    assert!((b.int_theta_q - 2.0 * a.int_theta_q).abs() <= 1e-12 * b.int_theta_q);
    assert!((b.int_pressure - 2.0 * a.int_pressure).abs() <= 1e-10 * b.int_pressure);
    // hydrostatic π = ½ − y with z' = 5/3 for p = 2
    let z: f64 = 8.0 / 3.0;
    let closed = 2.0 * 2.0 * 0.5f64.powf(z) / z;
    assert!((b.int_pressure - closed).abs() <= 2e-2 * closed, "{} vs {closed}", b.int_pressure);
}

#[test]
fn tail_is_zero_above_the_maximum() {
    let c = cfg(Scenario::BuoyantBlob, 8, 0.1, 0.05);
    let (model, traj) = simulate(&c).unwrap();
    let t = tail_check(&model, &traj, &[1.0, 2.0, 4.0, 8.0]).unwrap();
    assert!(t.is_monotone());
    assert!(t.vanishes_above_max());
    assert!(t.values[0][0] > 0.0);
    assert!(tail_check(&model, &traj, &[2.0, 1.0]).is_err());
    let d = &traj.last().state.d;
    assert_eq!(tail_integral(&model, d, 1e3), 0.0);
}

#[test]
fn space_time_tail_rises_for_a_tall_bump() {
    let mut c = cfg(Scenario::BuoyantBlob, 8, 0.01, 0.005);
    c.blob_amp = 50.0;
    let (model, traj) = simulate(&c).unwrap();
    let t = tail_check(&model, &traj, &[1.0, 2.0, 4.0]).unwrap();
    let st = t.space_time();
    // T(m) ≈ 2πm ln²(A/m) increases while m < A/e²
    assert!(st[0] < st[1] && st[1] < st[2], "{st:?}");
    assert!(!t.space_time_is_monotone());
    assert!(t.vanishes_above_max());
}

#[test]
fn steady_momentum_residual_vanishes() {
    let c = cfg(Scenario::Steady, 4, 0.2, 0.05);
    let (model, traj) = simulate(&c).unwrap();
    let w = weak_residuals(&model, &traj, 10, 1).unwrap();
    assert!(w.momentum_abs_max() <= 1e-13);
    assert!(w.entropy_min_slack() >= -1e-9);
    assert!(w.internal_min_slack() >= -1e-9);
}

#[test]
fn momentum_residual_shrinks_with_sampling() {
    let dense = cfg(Scenario::ShearDecay, 6, 0.4, 0.0125);
    let (model, traj) = simulate(&dense).unwrap();
    let mut res = Vec::new();
    for every in [4usize, 2, 1] {
        let mut sub = traj.clone();
        sub.samples = traj.samples.iter().step_by(every).cloned().collect();
        res.push(weak_residuals(&model, &sub, 20, 2).unwrap().momentum_max());
    }
    assert!(res[2] < res[1] && res[1] < res[0], "{res:?}");
}

#[test]
fn korn_and_interpolation_ratios_are_finite_and_stable() {
    let c = cfg(Scenario::Steady, 6, 0.1, 0.1);
    let model = Model::new(&c).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let samples = random_velocity_samples(&model, 1000, 7);
        let early = korn_check(&samples[..100], &model, p);
        let all = korn_check(&samples, &model, p);
        assert!(all.max_ratio.is_finite() && all.max_ratio > 0.0);
        assert!(all.max_ratio <= 10.0 * early.max_ratio);
        let early = interp_check(&samples[..100], &model, p, 2);
        let all = interp_check(&samples, &model, p, 2);
        assert!(all.max_ratio.is_finite() && all.max_ratio <= 10.0 * early.max_ratio);
    }
    // constant field via the mean-flow mode, and the zero field skipped
    let mut e = vec![0.0; model.nv()];
    e[model.disc.velocity.mean_index().unwrap()] = 1.0;
    let constant = model.disc.velocity.synthesize(&e);
    let zero = model.disc.velocity.synthesize(&vec![0.0; model.nv()]);
    let r = interp_check(&[constant.clone(), zero], &model, 2.0, 2);
    assert_eq!((r.samples, r.skipped), (1, 1));
    assert!(r.max_ratio.is_finite() && r.max_ratio > 0.0);
    let k = korn_check(&[constant], &model, 2.0);
    assert!(k.max_ratio.is_finite());
}

#[test]
fn initial_data_is_attained() {
    let c = cfg(Scenario::ShearDecay, 6, 0.02, 0.005);
    let (model, traj) = simulate(&c).unwrap();
    let a = initial_attainment(&c, &model, &traj).unwrap();
    assert!(a.distance[0] <= 1e-12, "{}", a.distance[0]);
    assert!(a.distance.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn full_report_has_fixed_columns() {
    let c = cfg(Scenario::BuoyantBlob, 4, 0.05, 0.025);
    let (_, _, r) = run(&c, &DiagnosticsOptions { bank_size: 3, ..Default::default() }).unwrap();
    let n = r.csv_header().split(',').count();
    assert_eq!(n, 17 + 4 + 2);
    assert!(r.csv_rows().iter().all(|row| row.split(',').count() == n));
    assert!(r.summary().iter().any(|(k, _)| k == "entropy_min_slack"));
}

fn state_strategy() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn galerkin_orthogonality_on_random_states(seed in state_strategy(), alpha in 0.0f64..2.0) {
        let mut c = RunConfig::for_scenario(Scenario::BuoyantBlob);
        c.n = 6;
        c.m = 5;
        c.alpha = alpha;
        let model = Model::new(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st: FluidState = random_state(&model, &mut rng);
        let ids = structural_identities(&model, &st.c, &st.d);
        prop_assert!(ids.max() <= 1e-10, "{:?}", ids);
        let pw = model.pointwise(&st.c, &st.d);
        prop_assert!(pw.dissipation.iter().all(|x| *x >= 0.0));
    }
}
