//! Spectral bases on the periodic channel `[0, Lx) × (0, 1)`.
//!
//! Velocity modes come from streamfunctions `X_m(x) sin(lπy)` so every
//! combination is divergence-free and tangential at the walls; an optional
//! uniform mean-flow mode completes the space. Temperature modes are
//! `X_m(x) cos(lπy)`, Neumann-compatible and including the constant. Both
//! families are L²-orthonormal. `X_0 = 1`, `X_{2j-1} = cos(k_j x)`,
//! `X_{2j} = sin(k_j x)` with `k_j = 2πj/Lx`.
//!
//! Fields are evaluated on an oversampled tensor grid: uniform in the
//! periodic direction, Gauss–Legendre across the channel.

mod basis;
mod field;
mod norms;
pub mod quadrature;

pub use basis::{
    build_bases, Discretization, TemperatureBasis, TemperatureForms, VelocityBasis, VelocityForms,
};
pub use field::{
    project_temperature, project_velocity, BasisKind, ScalarGrid, SpectralField, VelocityGrid,
};
pub use norms::{integrate, lq_norm, lq_power, w1q_norm};

use ndarray::Array2;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Channel periodic in x with walls at `y = 0` and `y = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDomain {
    pub lx: f64,
}

impl ChannelDomain {
    pub fn new(lx: f64) -> Result<Self> {
        if !(lx > 0.0) || !lx.is_finite() {
            return Err(Error::param("lx", "channel length must be positive"));
        }
        Ok(Self { lx })
    }

    pub fn ly(&self) -> f64 {
        1.0
    }

    pub fn area(&self) -> f64 {
        self.lx
    }

    /// Outward unit normal on the wall `y = wall` (0 or 1).
    pub fn wall_normal(&self, top: bool) -> [f64; 2] {
        if top {
            [0.0, 1.0]
        } else {
            [0.0, -1.0]
        }
    }

    pub fn wavenumber(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.lx
    }
}

impl Default for ChannelDomain {
    fn default() -> Self {
        Self { lx: 2.0 }
    }
}

/// Collocation/quadrature grid.
#[derive(Debug, Clone)]
pub struct Grid {
    pub domain: ChannelDomain,
    pub nx: usize,
    pub ny: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Uniform weight in x.
    pub wx: f64,
    /// Gauss–Legendre weights mapped to `[0, 1]`.
    pub wy: Vec<f64>,
    /// Tensor weights, shape `(nx, ny)`.
    pub weights: Array2<f64>,
}

impl Grid {
    pub fn new(domain: ChannelDomain, nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::param("grid", "need at least 2 nodes per direction"));
        }
        let x: Vec<f64> = (0..nx).map(|i| domain.lx * i as f64 / nx as f64).collect();
        let (t, w) = quadrature::gauss_legendre(ny);
        let y: Vec<f64> = t.iter().map(|t| 0.5 * (t + 1.0)).collect();
        let wy: Vec<f64> = w.iter().map(|w| 0.5 * w).collect();
        let wx = domain.lx / nx as f64;
        let weights = Array2::from_shape_fn((nx, ny), |(_, b)| wx * wy[b]);
        Ok(Self {
            domain,
            nx,
            ny,
            x,
            y,
            wx,
            wy,
            weights,
        })
    }

    /// Default oversampled grid for modes up to `j_max` in x and `l_max` in y.
    ///
    /// `nx = 4 j_max + 2` integrates products of three in-band factors exactly
    /// in the periodic direction; `ny = 4 l_max + 8` Gauss points do the same
    /// to round-off across the channel.
    pub fn for_modes(domain: ChannelDomain, j_max: usize, l_max: usize) -> Result<Self> {
        Self::new(domain, 4 * j_max + 2, 4 * l_max + 8)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn zeros(&self) -> Array2<f64> {
        Array2::zeros((self.nx, self.ny))
    }

    /// Samples a function of `(x, y)` on the grid.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Array2<f64> {
        Array2::from_shape_fn((self.nx, self.ny), |(a, b)| f(self.x[a], self.y[b]))
    }
}

/// Tables of the periodic modes `X_m` and their first two derivatives at the x nodes.
#[derive(Debug, Clone)]
pub(crate) struct XTables {
    pub j_max: usize,
    /// Wavenumber of each mode index.
    pub k: Vec<f64>,
    pub val: Array2<f64>,
    pub d1: Array2<f64>,
    pub d2: Array2<f64>,
}

impl XTables {
    pub fn new(domain: &ChannelDomain, x: &[f64], j_max: usize) -> Self {
        let modes = 2 * j_max + 1;
        let mut k = vec![0.0; modes];
        for j in 1..=j_max {
            k[2 * j - 1] = domain.wavenumber(j);
            k[2 * j] = domain.wavenumber(j);
        }
        let nx = x.len();
        let mut val = Array2::zeros((nx, modes));
        let mut d1 = Array2::zeros((nx, modes));
        let mut d2 = Array2::zeros((nx, modes));
        for (a, &xa) in x.iter().enumerate() {
            val[[a, 0]] = 1.0;
            for j in 1..=j_max {
                let kj = k[2 * j];
                let (s, c) = (kj * xa).sin_cos();
                val[[a, 2 * j - 1]] = c;
                val[[a, 2 * j]] = s;
                d1[[a, 2 * j - 1]] = -kj * s;
                d1[[a, 2 * j]] = kj * c;
                d2[[a, 2 * j - 1]] = -kj * kj * c;
                d2[[a, 2 * j]] = -kj * kj * s;
            }
        }
        Self { j_max, k, val, d1, d2 }
    }

    pub fn modes(&self) -> usize {
        2 * self.j_max + 1
    }

    /// `∫_0^{Lx} X_m² dx`.
    pub fn mass(&self, lx: f64, m: usize) -> f64 {
        if m == 0 {
            lx
        } else {
            0.5 * lx
        }
    }
}

/// Evaluates `X_m(x)` for a single point (used for wall traces and test fields).
pub(crate) fn x_mode(domain: &ChannelDomain, m: usize, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let j = m.div_ceil(2);
    let k = domain.wavenumber(j);
    let (s, c) = (k * x).sin_cos();
    if m % 2 == 1 {
        (c, -k * s)
    } else {
        (s, k * c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_weights_integrate_area() {
        let g = Grid::new(ChannelDomain::new(3.0).unwrap(), 10, 12).unwrap();
        assert!((g.weights.sum() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn x_tables_match_pointwise_modes() {
        let d = ChannelDomain::new(2.0).unwrap();
        let g = Grid::new(d, 18, 4).unwrap();
        let t = XTables::new(&d, &g.x, 4);
        for a in 0..g.nx {
            for m in 0..t.modes() {
                let (v, dv) = x_mode(&d, m, g.x[a]);
                assert!((t.val[[a, m]] - v).abs() < 1e-14);
                assert!((t.d1[[a, m]] - dv).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn bad_domain_rejected() {
        assert!(ChannelDomain::new(0.0).is_err());
        assert!(ChannelDomain::new(f64::NAN).is_err());
    }
}
