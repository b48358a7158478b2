use std::f64::consts::PI;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{RunConfig, Scenario};
use super::model::Model;
use super::FluidState;
use crate::discretization::quadrature::gauss_legendre;
use crate::discretization::Grid;
use crate::error::{Error, Result};

/// Gauss points per direction and per sub-interval for the mollifier integral.
const MOLL_POINTS: usize = 24;

/// Analytic initial velocity of a scenario.
pub fn initial_velocity(config: &RunConfig, _x: f64, y: f64) -> [f64; 2] {
    match config.scenario {
        Scenario::ShearDecay => [config.shear_amp * (PI * y).cos(), 0.0],
        _ => [0.0, 0.0],
    }
}

/// Analytic initial temperature of a scenario.
pub fn initial_temperature(config: &RunConfig, x: f64, y: f64) -> f64 {
    match config.scenario {
        Scenario::Steady | Scenario::ShearDecay => config.theta_base,
        Scenario::Conduction => 1.5 - 0.5 * (2.0 * PI * y).cos(),
        Scenario::BuoyantBlob => {
            let lx = config.lx;
            let mut dx = (x - config.blob_x * lx).rem_euclid(lx);
            if dx > 0.5 * lx {
                dx -= lx;
            }
            let dy = y - config.blob_y;
            let w2 = config.blob_width * config.blob_width;
            config.theta_base + config.blob_amp * (-(dx * dx + dy * dy) / (2.0 * w2)).exp()
        }
    }
}

/// Standard bump `exp(-1/(1-|z|²))` on the unit disc, unnormalized.
fn bump(z2: f64) -> f64 {
    if z2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - z2)).exp()
    }
}

/// Mollifies `η` (extended by zero outside `0 < y < 1`, periodic in x) with
/// the bump of radius `radius`, evaluated at the grid nodes.
///
/// The kernel is normalized by its own discrete integral so constants away
/// from the walls are reproduced to round-off.
pub fn mollify<F: Fn(f64, f64) -> f64>(eta: F, grid: &Grid, radius: f64) -> Array2<f64> {
    let (t, w) = gauss_legendre(MOLL_POINTS);
    // discrete mass of the kernel on [-1, 1]²
    let mut mass = 0.0;
    for (ta, wa) in t.iter().zip(&w) {
        for (tb, wb) in t.iter().zip(&w) {
            mass += wa * wb * bump(ta * ta + tb * tb);
        }
    }
    let lx = grid.domain.lx;
    grid.sample(|x, y| {
        let lo = (y - radius).max(0.0);
        let hi = (y + radius).min(1.0);
        if hi <= lo {
            return 0.0;
        }
        // only the part inside the channel carries η; split at the walls
        let (cy, hy) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut acc = 0.0;
        for (tb, wb) in t.iter().zip(&w) {
            let yy = cy + hy * tb;
            let zy = (yy - y) / radius;
            for (ta, wa) in t.iter().zip(&w) {
                let zx = *ta;
                let k = bump(zx * zx + zy * zy);
                if k > 0.0 {
                    let xx = (x + radius * zx).rem_euclid(lx);
                    acc += wa * wb * k * eta(xx, yy);
                }
            }
        }
        // dz_x dz_y = (dx/r)(dy/r): the y sub-interval has half-length hy/r
        acc * (hy / radius) / mass
    })
}

/// `t = 0` state: `P^n v₀` and `P^m exp(r_{1/n} * ln ϑ₀)`.
pub fn prepare_initial_data(config: &RunConfig, model: &Model) -> Result<FluidState> {
    prepare_with(config, model, |x, y| initial_velocity(config, x, y), |x, y| {
        initial_temperature(config, x, y)
    })
}

/// As [`prepare_initial_data`] with caller-supplied initial fields.
pub fn prepare_with<V, T>(config: &RunConfig, model: &Model, v0: V, theta0: T) -> Result<FluidState>
where
    V: Fn(f64, f64) -> [f64; 2],
    T: Fn(f64, f64) -> f64,
{
    let disc = &model.disc;
    let grid = &disc.grid;
    let th = grid.sample(&theta0);
    if let Some(bad) = th.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!(
            "initial temperature must be positive, found {bad}"
        )));
    }
    let radius = 1.0 / config.mollifier_count() as f64;
    let eta = mollify(|x, y| theta0(x, y).ln(), grid, radius);
    let theta_n = eta.mapv(f64::exp);
    let d = disc.temperature.project(&theta_n);

    let u = grid.sample(|x, y| v0(x, y)[0]);
    let v = grid.sample(|x, y| v0(x, y)[1]);
    let mut c = disc.velocity.project(&u, &v);
    if config.perturbation > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let scale = config.perturbation / (c.len() as f64).sqrt();
        for ci in c.iter_mut() {
            *ci += scale * rng.gen_range(-1.0..1.0);
        }
    }
    Ok(FluidState { t: 0.0, c, d })
}
