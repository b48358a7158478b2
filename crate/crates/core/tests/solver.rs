use std::f64::consts::PI;

use nsf_galerkin::discretization::integrate;
use nsf_galerkin::solver::{
    prepare_initial_data, prepare_with, run, simulate, step, FluidState, Integrator, Model, RunConfig, Scenario,
};
use nsf_galerkin::truncation::TruncationLevel;

fn config(scenario: Scenario, n: usize) -> RunConfig {
    let mut c = RunConfig::for_scenario(scenario);
    c.n = n;
    c.m = n;
    c
}

fn rest(model: &Model) -> FluidState {
    let mut d = vec![0.0; model.nt()];
    d[0] = model.disc.temperature.constant_coefficient();
    FluidState {
        t: 0.0,
        c: vec![0.0; model.nv()],
        d,
    }
}

fn rhs(model: &Model, st: &FluidState) -> (Vec<f64>, Vec<f64>) {
    let mut dc = vec![0.0; model.nv()];
    let mut dd = vec![0.0; model.nt()];
    let mut acc = [0.0; 5];
    model.rhs(&st.c, &st.d, &mut dc, &mut dd, &mut acc).unwrap();
    (dc, dd)
}

#[test]
fn rest_state_under_vertical_gravity_is_steady() {
    let model = Model::new(&config(Scenario::Steady, 8)).unwrap();
    let (dc, dd) = rhs(&model, &rest(&model));
    assert!(dc.iter().chain(&dd).all(|x| x.abs() <= 1e-14));
}

#[test]
fn uniform_temperature_has_no_conduction() {
    let model = Model::new(&config(Scenario::Steady, 6)).unwrap();
    let mut st = rest(&model);
    st.c.iter_mut().enumerate().for_each(|(i, c)| *c = 0.1 / (1.0 + i as f64));
    let terms = model.terms(&st.c, &st.d);
    assert!(terms.conduction.iter().all(|x| x.abs() <= 1e-13));
}

#[test]
fn single_shear_mode_decays_at_the_stokes_rate() {
    let mut cfg = config(Scenario::Steady, 6);
    cfg.force = [0.0, 0.0];
    let model = Model::new(&cfg).unwrap();
    let vb = &model.disc.velocity;
    for l in 1..=3 {
        let mut st = rest(&model);
        let i = vb.index(0, l);
        st.c[i] = 1.0;
        let (dc, _) = rhs(&model, &st);
        // ψ = s sin(lπy): ∫|D w|² = l²π²/2 with S = νD
        let rate = (l as f64 * PI).powi(2) / 2.0;
        assert!((dc[i] + rate).abs() <= 1e-10 * rate, "l = {l}: {} vs {}", dc[i], -rate);
        for (j, x) in dc.iter().enumerate() {
            if j != i {
                assert!(x.abs() <= 1e-10, "leak into {j}: {x}");
            }
        }
    }
}

#[test]
fn in_band_initial_velocity_is_reproduced() {
    let cfg = config(Scenario::Steady, 5);
    let model = Model::new(&cfg).unwrap();
    let vb = &model.disc.velocity;
    let target = vb.index(3, 2);
    let mut e = vec![0.0; model.nv()];
    e[target] = 1.0;
    let st = prepare_with(&cfg, &model, |x, y| vb.eval(&e, x, y), |_, _| 1.0).unwrap();
    for (i, c) in st.c.iter().enumerate() {
        let expected = if i == target { 1.0 } else { 0.0 };
        assert!((c - expected).abs() <= 1e-12, "{i}: {c}");
    }
    let th = model.disc.temperature.synthesize_values(&st.d);
    assert!(th.iter().all(|t| (t - 1.0).abs() <= 1e-12));
}

#[test]
fn nonpositive_initial_temperature_is_rejected() {
    let cfg = config(Scenario::Steady, 4);
    let model = Model::new(&cfg).unwrap();
    assert!(prepare_with(&cfg, &model, |_, _| [0.0, 0.0], |_, y| y - 0.5).is_err());
}

#[test]
fn mollified_temperature_converges_to_smooth_data() {
    let theta0 = |_: f64, y: f64| 1.0 + 0.5 * (PI * y).cos();
    let mut errs = Vec::new();
    for moll in [8usize, 16, 32] {
        let mut cfg = config(Scenario::Steady, 12);
        cfg.n_moll = Some(moll);
        let model = Model::new(&cfg).unwrap();
        let st = prepare_with(&cfg, &model, |_, _| [0.0, 0.0], theta0).unwrap();
        let th = model.disc.temperature.synthesize_values(&st.d);
        let exact = model.disc.grid.sample(theta0);
        let diff = &th - &exact;
        errs.push(integrate(&(&diff * &diff), &model.disc.grid).sqrt());
    }
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn step_keeps_the_steady_state() {
    let cfg = config(Scenario::Steady, 6);
    let model = Model::new(&cfg).unwrap();
    let st = rest(&model);
    let next = step(&cfg, &model, &st).unwrap();
    assert!((next.t - cfg.dt).abs() <= 1e-15);
    for (a, b) in st.c.iter().chain(&st.d).zip(next.c.iter().chain(&next.d)) {
        assert!((a - b).abs() <= 1e-14);
    }
}

#[test]
fn step_matches_exponential_decay() {
    let mut cfg = config(Scenario::Steady, 4);
    cfg.force = [0.0, 0.0];
    cfg.integrator = Integrator::Dopri5Fixed;
    let model = Model::new(&cfg).unwrap();
    let i = model.disc.velocity.index(0, 1);
    let lambda = PI * PI / 2.0;
    let mut errs = Vec::new();
    for dt in [0.02, 0.01] {
        cfg.dt = dt;
        let mut st = rest(&model);
        st.c[i] = 1.0;
        let next = step(&cfg, &model, &st).unwrap();
        errs.push((next.c[i] - (-lambda * dt).exp()).abs());
    }
    let slope = (errs[0] / errs[1]).log2();
    assert!(slope > 5.5, "{errs:?} slope {slope}");
}

#[test]
fn energy_drift_per_step_scales_with_order() {
    let mut cfg = config(Scenario::BuoyantBlob, 6);
    cfg.integrator = Integrator::Dopri5Fixed;
    cfg.blob_amp = 50.0;
    let model = Model::new(&cfg).unwrap();
    let mut st = prepare_initial_data(&cfg, &model).unwrap();
    st.c.iter_mut().enumerate().for_each(|(i, c)| *c = 2.0 * ((i as f64) * 0.7).sin() / (1.0 + i as f64));
    let e0 = model.energy(&st.c, &st.d);
    let mut drift = Vec::new();
    for dt in [4e-3, 2e-3] {
        cfg.dt = dt;
        let next = step(&cfg, &model, &st).unwrap();
        drift.push((model.energy(&next.c, &next.d) - e0).abs() / e0);
    }
    // one step of an order-5 method: local error O(Δt⁶)
    let slope = (drift[0] / drift[1]).log2();
    assert!(slope >= 5.5, "{drift:?} slope {slope}");
}

#[test]
fn blob_is_driven_along_the_body_force() {
    let mut cfg = config(Scenario::BuoyantBlob, 8);
    cfg.t_end = 0.05;
    cfg.output_interval = 0.01;
    let (model, traj) = simulate(&cfg).unwrap();
    let s = &traj.samples[1];
    let [_, v] = model.disc.velocity.eval(&s.state.c, cfg.blob_x * cfg.lx, cfg.blob_y);
    // the source ϑf with f = −e₂ pushes warmer fluid down
    assert!(v < 0.0, "vertical velocity {v}");

    let mut half = cfg.clone();
    half.n = 4;
    half.m = 4;
    let (m2, t2) = simulate(&half).unwrap();
    let [_, v2] = m2.disc.velocity.eval(&t2.samples[1].state.c, cfg.blob_x * cfg.lx, cfg.blob_y);
    assert!(v2 < 0.0 && (v - v2).abs() < v.abs(), "{v} vs half resolution {v2}");
}

#[test]
fn small_truncation_changes_the_trajectory() {
    let mut cfg = config(Scenario::BuoyantBlob, 6);
    cfg.t_end = 0.05;
    cfg.output_interval = 0.05;
    let (_, big) = simulate(&cfg).unwrap();
    cfg.k = TruncationLevel::new(1).unwrap();
    let (_, small) = simulate(&cfg).unwrap();
    let a = &big.last().state.c;
    let b = &small.last().state.c;
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    assert!(diff > 1e-6 * a.iter().map(|x| x.abs()).sum::<f64>());
}

#[test]
fn run_returns_one_row_per_output_time() {
    let mut cfg = config(Scenario::ShearDecay, 4);
    cfg.t_end = 0.2;
    cfg.output_interval = 0.05;
    let opts = nsf_galerkin::diagnostics::DiagnosticsOptions {
        bank_size: 4,
        ..Default::default()
    };
    let (_, traj, report) = run(&cfg, &opts).unwrap();
    assert_eq!(traj.samples.len(), 5);
    assert_eq!(report.rows.len(), 5);
    assert!(report.rows.windows(2).all(|w| w[1].monitors.l2_sq < w[0].monitors.l2_sq));
}

#[test]
fn backward_euler_runs_and_conserves_energy_to_first_order() {
    let mut cfg = config(Scenario::ShearDecay, 4);
    cfg.integrator = Integrator::BackwardEuler;
    cfg.t_end = 0.1;
    cfg.output_interval = 0.1;
    let mut res = Vec::new();
    for dt in [0.01, 0.005] {
        cfg.dt = dt;
        let (model, traj) = simulate(&cfg).unwrap();
        let e0 = model.energy(&traj.first().state.c, &traj.first().state.d);
        let l = &traj.last().state;
        res.push((model.energy(&l.c, &l.d) - e0).abs() / e0);
    }
    let slope = (res[0] / res[1]).log2();
    assert!(slope > 0.8, "{res:?}");
}
