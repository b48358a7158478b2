use ndarray::{Array2, Zip};

use super::basis::Discretization;

/// Velocity `(u, v)` and its first derivatives on the grid.
#[derive(Debug, Clone)]
pub struct VelocityGrid {
    pub u: Array2<f64>,
    pub v: Array2<f64>,
    pub ux: Array2<f64>,
    pub uy: Array2<f64>,
    pub vx: Array2<f64>,
    pub vy: Array2<f64>,
}

impl VelocityGrid {
    /// `[D11, D12, D22]` of `D = (∇v + ∇vᵀ)/2`.
    pub fn sym_gradient(&self) -> [Array2<f64>; 3] {
        [
            self.ux.clone(),
            (&self.uy + &self.vx) * 0.5,
            self.vy.clone(),
        ]
    }

    pub fn divergence(&self) -> Array2<f64> {
        &self.ux + &self.vy
    }

    /// `|v|²` pointwise.
    pub fn speed_sq(&self) -> Array2<f64> {
        Zip::from(&self.u).and(&self.v).map_collect(|u, v| u * u + v * v)
    }

    /// `|D|²` pointwise (Frobenius).
    pub fn sym_gradient_norm_sq(&self) -> Array2<f64> {
        Zip::from(&self.ux)
            .and(&self.uy)
            .and(&self.vx)
            .and(&self.vy)
            .map_collect(|&ux, &uy, &vx, &vy| {
                let d12 = 0.5 * (uy + vx);
                ux * ux + 2.0 * d12 * d12 + vy * vy
            })
    }

    /// `|∇v|²` pointwise (Frobenius).
    pub fn gradient_norm_sq(&self) -> Array2<f64> {
        Zip::from(&self.ux)
            .and(&self.uy)
            .and(&self.vx)
            .and(&self.vy)
            .map_collect(|&a, &b, &c, &d| a * a + b * b + c * c + d * d)
    }
}

/// Scalar and its gradient on the grid.
#[derive(Debug, Clone)]
pub struct ScalarGrid {
    pub val: Array2<f64>,
    pub dx: Array2<f64>,
    pub dy: Array2<f64>,
}

impl ScalarGrid {
    pub fn gradient(&self) -> [&Array2<f64>; 2] {
        [&self.dx, &self.dy]
    }

    pub fn gradient_norm_sq(&self) -> Array2<f64> {
        Zip::from(&self.dx)
            .and(&self.dy)
            .map_collect(|a, b| a * a + b * b)
    }

    pub fn min(&self) -> f64 {
        self.val.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.val.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Velocity,
    Temperature,
}

/// Coefficient vector tagged with the basis it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub kind: BasisKind,
    pub coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn velocity(coeffs: Vec<f64>) -> Self {
        Self {
            kind: BasisKind::Velocity,
            coeffs,
        }
    }

    pub fn temperature(coeffs: Vec<f64>) -> Self {
        Self {
            kind: BasisKind::Temperature,
            coeffs,
        }
    }

    /// L² norm; exact because both bases are orthonormal.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn velocity_grid(&self, disc: &Discretization) -> VelocityGrid {
        assert_eq!(self.kind, BasisKind::Velocity);
        disc.velocity.synthesize(&self.coeffs)
    }

    pub fn scalar_grid(&self, disc: &Discretization) -> ScalarGrid {
        assert_eq!(self.kind, BasisKind::Temperature);
        disc.temperature.synthesize(&self.coeffs)
    }
}

/// `P^n` applied to a velocity sampled on the grid.
pub fn project_velocity(u: &Array2<f64>, v: &Array2<f64>, disc: &Discretization) -> SpectralField {
    SpectralField::velocity(disc.velocity.project(u, v))
}

/// `P^m` applied to a scalar sampled on the grid.
pub fn project_temperature(f: &Array2<f64>, disc: &Discretization) -> SpectralField {
    SpectralField::temperature(disc.temperature.project(f))
}
