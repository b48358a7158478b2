use std::f64::consts::PI;

use ndarray::{Array1, Array2, ArrayView2};

use super::field::{ScalarGrid, VelocityGrid};
use super::{ChannelDomain, Grid, XTables};
use crate::error::{Error, Result};

/// Divergence-free, wall-tangential velocity basis.
///
/// Coefficient layout: `c[m * L + (l - 1)]` for `m = 0..2J`, `l = 1..=L`,
/// followed by the mean-flow coefficient when it is enabled.
#[derive(Debug, Clone)]
pub struct VelocityBasis {
    grid: Grid,
    pub j_max: usize,
    pub l_max: usize,
    pub mean_flow: bool,
    xt: XTables,
    ys: Array2<f64>,
    yu: Array2<f64>,
    yuy: Array2<f64>,
    scale: Array2<f64>,
    /// `lπ cos(lπy)` at `y = 0` and `y = 1`.
    wall_yu: [Array1<f64>; 2],
}

/// Neumann-compatible temperature basis, layout `d[m * (L + 1) + l]`, `l = 0..=L`.
/// Index 0 is the constant mode `1/√Lx`.
#[derive(Debug, Clone)]
pub struct TemperatureBasis {
    grid: Grid,
    pub j_max: usize,
    pub l_max: usize,
    xt: XTables,
    yc: Array2<f64>,
    ycd: Array2<f64>,
    ycdd: Array2<f64>,
    scale: Array2<f64>,
}

/// Integrands tested against velocity basis fields, already on the grid.
///
/// Row `i` of [`VelocityBasis::analyze`] is `∫ F:∇w_i + G·w_i` with the
/// convention `(∇w)_ab = ∂_b w_a`. Unused entries may be left as zeros.
#[derive(Debug, Clone)]
pub struct VelocityForms {
    pub f11: Array2<f64>,
    pub f12: Array2<f64>,
    pub f21: Array2<f64>,
    pub f22: Array2<f64>,
    pub g1: Array2<f64>,
    pub g2: Array2<f64>,
}

impl VelocityForms {
    pub fn zeros(grid: &Grid) -> Self {
        let z = grid.zeros();
        Self {
            f11: z.clone(),
            f12: z.clone(),
            f21: z.clone(),
            f22: z.clone(),
            g1: z.clone(),
            g2: z,
        }
    }
}

fn check_modes(j: usize, l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::param("n", "need at least one mode per direction"));
    }
    if (2 * j + 1) * l > 1 << 20 {
        return Err(Error::param("n", "mode count exceeds resource limits"));
    }
    Ok(())
}

fn weighted(f: &Array2<f64>, grid: &Grid) -> Array2<f64> {
    f * &grid.weights
}

impl VelocityBasis {
    pub fn new(grid: &Grid, j_max: usize, l_max: usize, mean_flow: bool) -> Result<Self> {
        check_modes(j_max, l_max)?;
        let xt = XTables::new(&grid.domain, &grid.x, j_max);
        let ny = grid.ny;
        let mut ys = Array2::zeros((ny, l_max));
        let mut yu = Array2::zeros((ny, l_max));
        let mut yuy = Array2::zeros((ny, l_max));
        for (b, &y) in grid.y.iter().enumerate() {
            for l in 1..=l_max {
                let a = l as f64 * PI;
                let (s, c) = (a * y).sin_cos();
                ys[[b, l - 1]] = s;
                yu[[b, l - 1]] = a * c;
                yuy[[b, l - 1]] = -a * a * s;
            }
        }
        let lx = grid.domain.lx;
        let scale = Array2::from_shape_fn((xt.modes(), l_max), |(m, l)| {
            let a = (l + 1) as f64 * PI;
            if m == 0 {
                (2.0 / (lx * a * a)).sqrt()
            } else {
                let k = xt.k[m];
                (4.0 / (lx * (k * k + a * a))).sqrt()
            }
        });
        let wall_yu = [
            Array1::from_shape_fn(l_max, |l| (l + 1) as f64 * PI),
            Array1::from_shape_fn(l_max, |l| {
                let a = (l + 1) as f64 * PI;
                if l % 2 == 0 {
                    -a
                } else {
                    a
                }
            }),
        ];
        Ok(Self {
            grid: grid.clone(),
            j_max,
            l_max,
            mean_flow,
            xt,
            ys,
            yu,
            yuy,
            scale,
            wall_yu,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn x_modes(&self) -> usize {
        self.xt.modes()
    }

    pub fn len(&self) -> usize {
        self.x_modes() * self.l_max + usize::from(self.mean_flow)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index of the streamfunction mode `(m, l)`, `l >= 1`.
    pub fn index(&self, m: usize, l: usize) -> usize {
        m * self.l_max + (l - 1)
    }

    pub fn mean_index(&self) -> Option<usize> {
        self.mean_flow.then(|| self.x_modes() * self.l_max)
    }

    /// Wavenumbers `(k_m, lπ)` of a streamfunction mode index.
    pub fn wavenumbers(&self, i: usize) -> (f64, f64) {
        let m = i / self.l_max;
        let l = i % self.l_max + 1;
        (self.xt.k[m], l as f64 * PI)
    }

    fn amplitudes(&self, c: &[f64]) -> Array2<f64> {
        let n = self.x_modes() * self.l_max;
        let a = ArrayView2::from_shape((self.x_modes(), self.l_max), &c[..n]).expect("layout");
        &a * &self.scale
    }

    fn mean_value(&self, c: &[f64]) -> f64 {
        match self.mean_index() {
            Some(i) => c[i] / self.grid.domain.lx.sqrt(),
            None => 0.0,
        }
    }

    /// Velocity and its gradient on the grid.
    pub fn synthesize(&self, c: &[f64]) -> VelocityGrid {
        assert_eq!(c.len(), self.len());
        let a = self.amplitudes(c);
        let xa = self.xt.val.dot(&a);
        let xda = self.xt.d1.dot(&a);
        let xdda = self.xt.d2.dot(&a);
        let mut u = xa.dot(&self.yu.t());
        let uy = xa.dot(&self.yuy.t());
        let ux = xda.dot(&self.yu.t());
        let v = -xda.dot(&self.ys.t());
        let vx = -xdda.dot(&self.ys.t());
        let vy = -&ux;
        let mean = self.mean_value(c);
        if mean != 0.0 {
            u += mean;
        }
        VelocityGrid { u, v, ux, uy, vx, vy }
    }

    /// Tangential velocity `u(x, 0)` and `u(x, 1)` at the x nodes.
    pub fn wall_trace(&self, c: &[f64]) -> [Array1<f64>; 2] {
        let a = self.amplitudes(c);
        let xa = self.xt.val.dot(&a);
        let mean = self.mean_value(c);
        [xa.dot(&self.wall_yu[0]) + mean, xa.dot(&self.wall_yu[1]) + mean]
    }

    /// Rows `∫ F:∇w_i + G·w_i` for every basis field.
    pub fn analyze(&self, forms: &VelocityForms) -> Vec<f64> {
        let g = &self.grid;
        let f11 = weighted(&forms.f11, g);
        let f12 = weighted(&forms.f12, g);
        let f21 = weighted(&forms.f21, g);
        let f22 = weighted(&forms.f22, g);
        let g1 = weighted(&forms.g1, g);
        let g2 = weighted(&forms.g2, g);

        let bd = (&f11 - &f22).dot(&self.yu) - g2.dot(&self.ys);
        let b0 = f12.dot(&self.yuy) + g1.dot(&self.yu);
        let bdd = f21.dot(&self.ys);
        let r = self.xt.d1.t().dot(&bd) + self.xt.val.t().dot(&b0) - self.xt.d2.t().dot(&bdd);
        let r = r * &self.scale;
        let mut out: Vec<f64> = r.into_iter().collect();
        if self.mean_flow {
            let total = super::quadrature::pairwise_sum(g1.as_slice().expect("contiguous"));
            out.push(total / g.domain.lx.sqrt());
        }
        out
    }

    /// Rows `∮ h w_i·τ` over both walls, for tangential densities `h0` at `y = 0`
    /// and `h1` at `y = 1` sampled at the x nodes.
    pub fn analyze_wall(&self, h0: &Array1<f64>, h1: &Array1<f64>) -> Vec<f64> {
        let wx = self.grid.wx;
        let xh0 = self.xt.val.t().dot(h0) * wx;
        let xh1 = self.xt.val.t().dot(h1) * wx;
        let m = self.x_modes();
        let mut r = Array2::zeros((m, self.l_max));
        for mi in 0..m {
            for l in 0..self.l_max {
                r[[mi, l]] = self.scale[[mi, l]]
                    * (xh0[mi] * self.wall_yu[0][l] + xh1[mi] * self.wall_yu[1][l]);
            }
        }
        let mut out: Vec<f64> = r.into_iter().collect();
        if self.mean_flow {
            let s = h0.sum() + h1.sum();
            out.push(s * wx / self.grid.domain.lx.sqrt());
        }
        out
    }

    /// L²-orthogonal projection of a velocity field sampled on the grid.
    pub fn project(&self, u: &Array2<f64>, v: &Array2<f64>) -> Vec<f64> {
        let mut forms = VelocityForms::zeros(&self.grid);
        forms.g1 = u.clone();
        forms.g2 = v.clone();
        self.analyze(&forms)
    }

    /// Evaluates the velocity at an arbitrary point.
    pub fn eval(&self, c: &[f64], x: f64, y: f64) -> [f64; 2] {
        let mut out = [self.mean_value(c), 0.0];
        for m in 0..self.x_modes() {
            let (xv, xd) = super::x_mode(&self.grid.domain, m, x);
            for l in 1..=self.l_max {
                let i = self.index(m, l);
                let s = self.scale[[m, l - 1]] * c[i];
                let a = l as f64 * PI;
                let (sn, cs) = (a * y).sin_cos();
                out[0] += s * xv * a * cs;
                out[1] -= s * xd * sn;
            }
        }
        out
    }

    /// Maximum deviation of the quadrature Gram matrix from the identity.
    pub fn gram_deviation(&self) -> f64 {
        let n = self.len();
        let mut e = vec![0.0; n];
        let mut worst: f64 = 0.0;
        for i in 0..n {
            e[i] = 1.0;
            let f = self.synthesize(&e);
            let col = self.project(&f.u, &f.v);
            for (j, g) in col.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
            e[i] = 0.0;
        }
        worst
    }
}

/// Integrands tested against temperature basis functions.
///
/// Row `j` of [`TemperatureBasis::analyze`] is
/// `∫ Φ·∇φ_j + Q φ_j + H:∇²φ_j` where `H` is symmetric.
#[derive(Debug, Clone, Default)]
pub struct TemperatureForms {
    pub flux: Option<[Array2<f64>; 2]>,
    pub source: Option<Array2<f64>>,
    /// `[H11, H12, H22]`.
    pub hessian: Option<[Array2<f64>; 3]>,
}

impl TemperatureBasis {
    pub fn new(grid: &Grid, j_max: usize, l_max: usize) -> Result<Self> {
        check_modes(j_max, l_max + 1)?;
        let xt = XTables::new(&grid.domain, &grid.x, j_max);
        let ny = grid.ny;
        let lm = l_max + 1;
        let mut yc = Array2::zeros((ny, lm));
        let mut ycd = Array2::zeros((ny, lm));
        let mut ycdd = Array2::zeros((ny, lm));
        for (b, &y) in grid.y.iter().enumerate() {
            for l in 0..lm {
                let a = l as f64 * PI;
                let (s, c) = (a * y).sin_cos();
                yc[[b, l]] = c;
                ycd[[b, l]] = -a * s;
                ycdd[[b, l]] = -a * a * c;
            }
        }
        let lx = grid.domain.lx;
        let scale = Array2::from_shape_fn((xt.modes(), lm), |(m, l)| {
            let mx = xt.mass(lx, m);
            let my = if l == 0 { 1.0 } else { 0.5 };
            1.0 / (mx * my).sqrt()
        });
        Ok(Self {
            grid: grid.clone(),
            j_max,
            l_max,
            xt,
            yc,
            ycd,
            ycdd,
            scale,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn x_modes(&self) -> usize {
        self.xt.modes()
    }

    pub fn len(&self) -> usize {
        self.x_modes() * (self.l_max + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, m: usize, l: usize) -> usize {
        m * (self.l_max + 1) + l
    }

    /// Eigenvalue of `-Δ` for mode index `j`: `k_m² + l²π²`.
    pub fn eigenvalue(&self, j: usize) -> f64 {
        let m = j / (self.l_max + 1);
        let l = j % (self.l_max + 1);
        let k = self.xt.k[m];
        let a = l as f64 * PI;
        k * k + a * a
    }

    /// Coefficient of the constant function 1.
    pub fn constant_coefficient(&self) -> f64 {
        self.grid.domain.lx.sqrt()
    }

    fn amplitudes(&self, d: &[f64]) -> Array2<f64> {
        let a = ArrayView2::from_shape((self.x_modes(), self.l_max + 1), d).expect("layout");
        &a * &self.scale
    }

    /// Value and gradient on the grid.
    pub fn synthesize(&self, d: &[f64]) -> ScalarGrid {
        assert_eq!(d.len(), self.len());
        let b = self.amplitudes(d);
        let xb = self.xt.val.dot(&b);
        let xdb = self.xt.d1.dot(&b);
        ScalarGrid {
            val: xb.dot(&self.yc.t()),
            dx: xdb.dot(&self.yc.t()),
            dy: xb.dot(&self.ycd.t()),
        }
    }

    /// Second derivatives `[φxx, φxy, φyy]` on the grid.
    pub fn synthesize_hessian(&self, d: &[f64]) -> [Array2<f64>; 3] {
        let b = self.amplitudes(d);
        let xb = self.xt.val.dot(&b);
        let xdb = self.xt.d1.dot(&b);
        let xddb = self.xt.d2.dot(&b);
        [
            xddb.dot(&self.yc.t()),
            xdb.dot(&self.ycd.t()),
            xb.dot(&self.ycdd.t()),
        ]
    }

    /// Values only, skipping derivatives.
    pub fn synthesize_values(&self, d: &[f64]) -> Array2<f64> {
        let b = self.amplitudes(d);
        self.xt.val.dot(&b).dot(&self.yc.t())
    }

    pub fn analyze(&self, forms: &TemperatureForms) -> Vec<f64> {
        let g = &self.grid;
        let (m, lm) = (self.x_modes(), self.l_max + 1);
        let mut b0: Array2<f64> = Array2::zeros((g.nx, lm));
        let mut bd: Array2<f64> = Array2::zeros((g.nx, lm));
        let mut bdd: Array2<f64> = Array2::zeros((g.nx, lm));
        if let Some([p1, p2]) = &forms.flux {
            bd += &weighted(p1, g).dot(&self.yc);
            b0 += &weighted(p2, g).dot(&self.ycd);
        }
        if let Some(q) = &forms.source {
            b0 += &weighted(q, g).dot(&self.yc);
        }
        if let Some([h11, h12, h22]) = &forms.hessian {
            bdd += &weighted(h11, g).dot(&self.yc);
            bd += &(weighted(h12, g) * 2.0).dot(&self.ycd);
            b0 += &weighted(h22, g).dot(&self.ycdd);
        }
        let mut r: Array2<f64> = Array2::zeros((m, lm));
        r += &self.xt.val.t().dot(&b0);
        r += &self.xt.d1.t().dot(&bd);
        r += &self.xt.d2.t().dot(&bdd);
        (r * &self.scale).into_iter().collect()
    }

    /// Values at `y = 0` and `y = 1` on the x nodes.
    pub fn wall_trace(&self, d: &[f64]) -> [Array1<f64>; 2] {
        let xb = self.xt.val.dot(&self.amplitudes(d));
        let sign = Array1::from_shape_fn(self.l_max + 1, |l| if l % 2 == 0 { 1.0 } else { -1.0 });
        [xb.sum_axis(ndarray::Axis(1)), xb.dot(&sign)]
    }

    /// Rows `∮ h ∂_x φ_j` over both walls.
    pub fn analyze_wall_dx(&self, h0: &Array1<f64>, h1: &Array1<f64>) -> Vec<f64> {
        let wx = self.grid.wx;
        let x0 = self.xt.d1.t().dot(h0) * wx;
        let x1 = self.xt.d1.t().dot(h1) * wx;
        let lm = self.l_max + 1;
        let r = Array2::from_shape_fn((self.x_modes(), lm), |(m, l)| {
            let top = if l % 2 == 0 { 1.0 } else { -1.0 };
            self.scale[[m, l]] * (x0[m] + top * x1[m])
        });
        r.into_iter().collect()
    }

    pub fn project(&self, f: &Array2<f64>) -> Vec<f64> {
        self.analyze(&TemperatureForms {
            source: Some(f.clone()),
            ..Default::default()
        })
    }

    pub fn eval(&self, d: &[f64], x: f64, y: f64) -> f64 {
        let mut out = 0.0;
        for m in 0..self.x_modes() {
            let (xv, _) = super::x_mode(&self.grid.domain, m, x);
            for l in 0..=self.l_max {
                out += d[self.index(m, l)] * self.scale[[m, l]] * xv * (l as f64 * PI * y).cos();
            }
        }
        out
    }

    pub fn gram_deviation(&self) -> f64 {
        let n = self.len();
        let mut e = vec![0.0; n];
        let mut worst: f64 = 0.0;
        for i in 0..n {
            e[i] = 1.0;
            let f = self.synthesize_values(&e);
            let col = self.project(&f);
            for (j, g) in col.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
            e[i] = 0.0;
        }
        worst
    }
}

/// Shared grid with both bases.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub grid: Grid,
    pub velocity: VelocityBasis,
    pub temperature: TemperatureBasis,
}

impl Discretization {
    /// `n` and `m` are mode counts per direction for velocity and temperature;
    /// `grid` overrides the default oversampled `(nx, ny)`.
    pub fn new(
        domain: ChannelDomain,
        n: usize,
        m: usize,
        mean_flow: bool,
        grid: Option<(usize, usize)>,
    ) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::param("n", "need at least one mode per direction"));
        }
        let top = n.max(m);
        let grid = match grid {
            Some((nx, ny)) => Grid::new(domain, nx, ny)?,
            None => Grid::for_modes(domain, top, top)?,
        };
        let velocity = VelocityBasis::new(&grid, n, n, mean_flow)?;
        let temperature = TemperatureBasis::new(&grid, m, m)?;
        Ok(Self {
            grid,
            velocity,
            temperature,
        })
    }
}

/// Builds both bases with the same mode count per direction and reports the
/// worst Gram-matrix deviation over the two.
pub fn build_bases(n_modes_per_dir: usize, domain: ChannelDomain) -> Result<(Discretization, f64)> {
    let disc = Discretization::new(domain, n_modes_per_dir, n_modes_per_dir, true, None)?;
    let dev = disc
        .velocity
        .gram_deviation()
        .max(disc.temperature.gram_deviation());
    Ok((disc, dev))
}
