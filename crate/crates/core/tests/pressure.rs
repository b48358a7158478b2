use std::f64::consts::PI;

use nsf_galerkin::diagnostics::random_state;
use nsf_galerkin::discretization::{ChannelDomain, Grid};
use nsf_galerkin::pressure::{pressure_norm_monitor, reconstruct_pressure, weak_residual};
use nsf_galerkin::solver::{FluidState, Model, RunConfig, Scenario};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(n: usize, alpha: f64) -> Model {
    let mut cfg = RunConfig::for_scenario(Scenario::Steady);
    cfg.n = n;
    cfg.m = n;
    cfg.alpha = alpha;
    Model::new(&cfg).unwrap()
}

fn rest_state(model: &Model) -> FluidState {
    let mut d = vec![0.0; model.nt()];
    d[0] = model.disc.temperature.constant_coefficient();
    FluidState {
        t: 0.0,
        c: vec![0.0; model.nv()],
        d,
    }
}

#[test]
fn hydrostatic_pressure_matches_affine_profile() {
    let m = model(8, 0.0);
    let pi = reconstruct_pressure(&m, &rest_state(&m));
    let tb = &m.disc.temperature;
    let lx = m.disc.grid.domain.lx;
    for j in 0..tb.len() {
        let (mode, l) = (j / (tb.l_max + 1), j % (tb.l_max + 1));
        // coefficients of ½ − y against cos(lπy)/√(Lx/2)
        let expected = if mode == 0 && l > 0 {
            let lf = l as f64;
            lx * (1.0 - (-1f64).powi(l as i32)) / (lf * lf * PI * PI) / (lx / 2.0).sqrt()
        } else {
            0.0
        };
        assert!((pi.coeffs()[j] - expected).abs() <= 1e-10, "mode {j}: {} vs {expected}", pi.coeffs()[j]);
    }
    assert!(pi.mean(&m).abs() <= 1e-12);
}

#[test]
fn no_force_at_rest_gives_zero_pressure() {
    let mut cfg = RunConfig::for_scenario(Scenario::Steady);
    cfg.force = [0.0, 0.0];
    cfg.n = 6;
    cfg.m = 6;
    let m = Model::new(&cfg).unwrap();
    let pi = reconstruct_pressure(&m, &rest_state(&m));
    assert!(pi.coeffs().iter().all(|x| x.abs() < 1e-15));
}

#[test]
fn weak_identity_holds_on_generic_states() {
    for alpha in [0.0, 0.7] {
        let m = model(8, alpha);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let st = random_state(&m, &mut rng);
            let pi = reconstruct_pressure(&m, &st);
            let res = weak_residual(&m, &st, &pi);
            assert!(res <= 1e-8, "alpha {alpha}: residual {res}");
            let norm = pi.field.l2_norm();
            assert!(pi.mean(&m).abs() <= 1e-12 * norm.max(1.0));
        }
    }
}

#[test]
fn monitor_of_hydrostatic_profile_has_closed_form() {
    let domain = ChannelDomain::new(2.0).unwrap();
    // fine y grid: the integrand is only C^1 at y = 1/2
    let grid = Grid::new(domain, 8, 2000).unwrap();
    let pi = grid.sample(|_, y| 0.5 - y);
    let got = pressure_norm_monitor(&pi, &grid, 2.0).unwrap();
    let z: f64 = 8.0 / 3.0;
    let expected = 2.0 * 2.0 * 0.5f64.powf(z) / z;
    assert!((got - expected).abs() <= 1e-6 * expected, "{got} vs {expected}");
    assert_eq!(pressure_norm_monitor(&grid.zeros(), &grid, 2.0).unwrap(), 0.0);
}

proptest! {
    #[test]
    fn monitor_is_homogeneous(p in 1.3f64..4.0, scale in 0.1f64..10.0) {
        let domain = ChannelDomain::new(2.0).unwrap();
        let grid = Grid::new(domain, 10, 12).unwrap();
        let pi = grid.sample(|x, y| (PI * x).sin() + 0.3 * (2.0 * PI * y).cos());
        let z = nsf_galerkin::exponents::pressure_exponent(p).unwrap();
        let a = pressure_norm_monitor(&pi, &grid, p).unwrap();
        let b = pressure_norm_monitor(&(&pi * scale), &grid, p).unwrap();
        prop_assert!((b - scale.powf(z) * a).abs() <= 1e-12 * b.abs().max(1.0));
    }
}
