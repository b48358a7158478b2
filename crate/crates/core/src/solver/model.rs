use ndarray::{Array1, Array2, Zip};

use super::config::RunConfig;
use crate::constitutive::ConstitutiveParams;
use crate::discretization::{
    integrate, ChannelDomain, Discretization, ScalarGrid, TemperatureForms, VelocityForms,
    VelocityGrid,
};
use crate::error::{Error, Result};
use crate::truncation::{g_cut, t_cut, TruncationLevel};

/// Number of auxiliary quantities integrated alongside the coefficients.
pub const N_ACC: usize = 5;

/// Integrated auxiliary quantities, all starting at zero.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Accumulators {
    /// `α∫∮ g_k(|v_τ|)|v_τ|²`.
    pub boundary_dissipation: f64,
    /// `∫∫ ∂_tϑ/(ϑ+ε)` for the Galerkin temperature.
    pub entropy_rate: f64,
    /// `∫∫ κ|∇ϑ|²/(ϑ+ε)²`.
    pub conductive_production: f64,
    /// `∫∫ S:D/(ϑ+ε)`.
    pub dissipative_production: f64,
    /// `-∫∫ T_k(ϑ) v·f/(ϑ+ε)`.
    pub buoyancy_entropy: f64,
}

impl Accumulators {
    pub fn from_slice(a: &[f64]) -> Self {
        Self {
            boundary_dissipation: a[0],
            entropy_rate: a[1],
            conductive_production: a[2],
            dissipative_production: a[3],
            buoyancy_entropy: a[4],
        }
    }

    pub fn to_array(self) -> [f64; N_ACC] {
        [
            self.boundary_dissipation,
            self.entropy_rate,
            self.conductive_production,
            self.dissipative_production,
            self.buoyancy_entropy,
        ]
    }

    /// Time integral of the right side of the entropy balance.
    pub fn entropy_rhs(&self) -> f64 {
        self.conductive_production + self.dissipative_production + self.buoyancy_entropy
    }
}

/// Right-hand side split by physical term. Momentum rows refer to the
/// velocity basis, temperature rows to the temperature basis.
#[derive(Debug, Clone)]
pub struct Terms {
    /// `∫ g_k(|v|²) v⊗v : ∇w_i`.
    pub convective: Vec<f64>,
    /// `-∫ S : ∇w_i`.
    pub viscous: Vec<f64>,
    /// `∫ T_k(ϑ⁎) f·w_i`.
    pub buoyancy: Vec<f64>,
    /// `-α∮ g_k(|v_τ|) v_τ w_i·τ`.
    pub wall: Vec<f64>,
    /// `∫ T_k(ϑ) v·∇w_j`.
    pub transport: Vec<f64>,
    /// `-∫ κ∇ϑ·∇w_j`.
    pub conduction: Vec<f64>,
    /// `∫ S:D w_j`.
    pub dissipation: Vec<f64>,
    /// `-∫ T_k(ϑ⁎) v·f w_j`.
    pub sink: Vec<f64>,
}

/// Pointwise quantities shared by the right side and the diagnostics.
#[derive(Debug, Clone)]
pub struct Pointwise {
    pub vel: VelocityGrid,
    pub temp: ScalarGrid,
    /// `[S11, S12, S22]`.
    pub stress: [Array2<f64>; 3],
    /// `S:D`.
    pub dissipation: Array2<f64>,
    /// `g_k(|v|²)`.
    pub g: Array2<f64>,
    /// `T_k(ϑ)`.
    pub t_theta: Array2<f64>,
    /// `T_k(max(ϑ, 0))`.
    pub t_theta_pos: Array2<f64>,
    pub kappa: Array2<f64>,
}

/// The semi-discrete Galerkin system for one configuration.
#[derive(Debug, Clone)]
pub struct Model {
    pub disc: Discretization,
    pub params: ConstitutiveParams,
    pub k: TruncationLevel,
    pub alpha: f64,
    pub force: [f64; 2],
    pub eps_floor: f64,
}

impl Model {
    pub fn new(config: &RunConfig) -> Result<Self> {
        let domain = ChannelDomain::new(config.lx)?;
        let disc = Discretization::new(domain, config.n, config.m, config.mean_flow, config.grid)?;
        Ok(Self {
            disc,
            params: config.params.clone(),
            k: config.k,
            alpha: config.alpha,
            force: config.force,
            eps_floor: config.eps_floor,
        })
    }

    pub fn nv(&self) -> usize {
        self.disc.velocity.len()
    }

    pub fn nt(&self) -> usize {
        self.disc.temperature.len()
    }

    /// Length of the coefficient part `(c, d)`.
    pub fn core_len(&self) -> usize {
        self.nv() + self.nt()
    }

    /// `E = ∫ |v|²/2 + ϑ`, exact in coefficients.
    pub fn energy(&self, c: &[f64], d: &[f64]) -> f64 {
        0.5 * c.iter().map(|x| x * x).sum::<f64>() + self.disc.temperature.constant_coefficient() * d[0]
    }

    pub fn pointwise(&self, c: &[f64], d: &[f64]) -> Pointwise {
        let vel = self.disc.velocity.synthesize(c);
        let temp = self.disc.temperature.synthesize(d);
        let k = self.k.as_f64();
        let params = &self.params;
        let shape = vel.u.raw_dim();
        let mut s11 = Array2::zeros(shape);
        let mut s12 = Array2::zeros(shape);
        let mut s22 = Array2::zeros(shape);
        let mut dissipation = Array2::zeros(shape);
        let mut kappa = Array2::zeros(shape);
        for (idx, &ux) in vel.ux.indexed_iter() {
            let th = temp.val[idx];
            let d12 = 0.5 * (vel.uy[idx] + vel.vx[idx]);
            // vy = -ux exactly
            let dn = 2.0 * ux * ux + 2.0 * d12 * d12;
            let fac = params.viscosity_factor(th, dn);
            s11[idx] = fac * ux;
            s12[idx] = fac * d12;
            s22[idx] = -fac * ux;
            dissipation[idx] = fac * dn;
            kappa[idx] = params.kappa(th);
        }
        let g = Zip::from(&vel.u)
            .and(&vel.v)
            .map_collect(|u, v| g_cut(u * u + v * v, k));
        let t_theta = temp.val.mapv(|th| t_cut(th, k));
        let t_theta_pos = temp.val.mapv(|th| t_cut(th.max(0.0), k));
        Pointwise {
            vel,
            temp,
            stress: [s11, s12, s22],
            dissipation,
            g,
            t_theta,
            t_theta_pos,
            kappa,
        }
    }

    fn wall_density(&self, c: &[f64]) -> ([Array1<f64>; 2], [Array1<f64>; 2]) {
        let k = self.k.as_f64();
        let traces = self.disc.velocity.wall_trace(c);
        let h = [
            traces[0].mapv(|u| -self.alpha * u * g_cut(u.abs(), k)),
            traces[1].mapv(|u| -self.alpha * u * g_cut(u.abs(), k)),
        ];
        (traces, h)
    }

    /// Time derivative of `(c, d)` and the accumulator rates.
    pub fn rhs(&self, c: &[f64], d: &[f64], dc: &mut [f64], dd: &mut [f64], acc: &mut [f64]) -> Result<()> {
        let pw = self.pointwise(c, d);
        let [f1, f2] = self.force;
        let vel = &pw.vel;
        let [s11, s12, s22] = &pw.stress;

        let gu = &pw.g * &vel.u;
        let gv = &pw.g * &vel.v;
        let forms = VelocityForms {
            f11: &gu * &vel.u - s11,
            f12: &gu * &vel.v - s12,
            f21: &gv * &vel.u - s12,
            f22: &gv * &vel.v - s22,
            g1: &pw.t_theta_pos * f1,
            g2: &pw.t_theta_pos * f2,
        };
        let mut rc = self.disc.velocity.analyze(&forms);
        let mut boundary_rate = 0.0;
        if self.alpha > 0.0 {
            let (traces, h) = self.wall_density(c);
            let rw = self.disc.velocity.analyze_wall(&h[0], &h[1]);
            for (r, w) in rc.iter_mut().zip(&rw) {
                *r += w;
            }
            let wx = self.disc.grid.wx;
            boundary_rate = -wx * ((&traces[0] * &h[0]).sum() + (&traces[1] * &h[1]).sum());
        }

        let vf = Zip::from(&vel.u).and(&vel.v).map_collect(|u, v| u * f1 + v * f2);
        let t = &pw.temp;
        let flux = [
            &pw.t_theta * &vel.u - &pw.kappa * &t.dx,
            &pw.t_theta * &vel.v - &pw.kappa * &t.dy,
        ];
        let source = &pw.dissipation - &(&pw.t_theta_pos * &vf);
        let rt = self.disc.temperature.analyze(&TemperatureForms {
            flux: Some(flux),
            source: Some(source),
            hessian: None,
        });

        if rc.iter().chain(&rt).any(|x| !x.is_finite()) {
            return Err(Error::Numerical {
                t: f64::NAN,
                reason: "non-finite right-hand side".into(),
            });
        }
        dc.copy_from_slice(&rc);
        dd.copy_from_slice(&rt);

        let theta_dot = self.disc.temperature.synthesize_values(&rt);
        let eps = self.eps_floor;
        let inv = t.val.mapv(|th| 1.0 / (th + eps).max(1e-12));
        let grad2 = t.gradient_norm_sq();
        let grid = &self.disc.grid;
        acc[0] = boundary_rate;
        acc[1] = integrate(&(&theta_dot * &inv), grid);
        acc[2] = integrate(&(&pw.kappa * &grad2 * &inv * &inv), grid);
        acc[3] = integrate(&(&pw.dissipation * &inv), grid);
        acc[4] = -integrate(&(&pw.t_theta * &vf * &inv), grid);
        Ok(())
    }

    /// Every right-hand-side contribution as separate row vectors.
    pub fn terms(&self, c: &[f64], d: &[f64]) -> Terms {
        let pw = self.pointwise(c, d);
        let grid = &self.disc.grid;
        let vb = &self.disc.velocity;
        let tb = &self.disc.temperature;
        let vel = &pw.vel;
        let [s11, s12, s22] = &pw.stress;
        let [f1, f2] = self.force;

        let gu = &pw.g * &vel.u;
        let gv = &pw.g * &vel.v;
        let mut conv = VelocityForms::zeros(grid);
        conv.f11 = &gu * &vel.u;
        conv.f12 = &gu * &vel.v;
        conv.f21 = &gv * &vel.u;
        conv.f22 = &gv * &vel.v;
        let mut visc = VelocityForms::zeros(grid);
        visc.f11 = -s11;
        visc.f12 = -s12;
        visc.f21 = -s12;
        visc.f22 = -s22;
        let mut buoy = VelocityForms::zeros(grid);
        buoy.g1 = &pw.t_theta_pos * f1;
        buoy.g2 = &pw.t_theta_pos * f2;
        let wall = if self.alpha > 0.0 {
            let (_, h) = self.wall_density(c);
            vb.analyze_wall(&h[0], &h[1])
        } else {
            vec![0.0; vb.len()]
        };

        let t = &pw.temp;
        let vf = Zip::from(&vel.u).and(&vel.v).map_collect(|u, v| u * f1 + v * f2);
        let transport = tb.analyze(&TemperatureForms {
            flux: Some([&pw.t_theta * &vel.u, &pw.t_theta * &vel.v]),
            ..Default::default()
        });
        let conduction = tb.analyze(&TemperatureForms {
            flux: Some([-(&pw.kappa * &t.dx), -(&pw.kappa * &t.dy)]),
            ..Default::default()
        });
        let dissipation = tb.analyze(&TemperatureForms {
            source: Some(pw.dissipation.clone()),
            ..Default::default()
        });
        let sink = tb.analyze(&TemperatureForms {
            source: Some(-(&pw.t_theta_pos * &vf)),
            ..Default::default()
        });
        Terms {
            convective: vb.analyze(&conv),
            viscous: vb.analyze(&visc),
            buoyancy: vb.analyze(&buoy),
            wall,
            transport,
            conduction,
            dissipation,
            sink,
        }
    }
}
