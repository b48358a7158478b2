use std::fmt;
use std::str::FromStr;

use crate::constitutive::ConstitutiveParams;
use crate::error::{Error, Result};
use crate::truncation::TruncationLevel;

/// Initial-data presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `v = 0`, uniform temperature.
    Steady,
    /// `v = 0`, warm Gaussian bump below mid-channel.
    BuoyantBlob,
    /// Single shear mode `u = A cos(πy)`, uniform temperature.
    ShearDecay,
    /// `v = 0`, layered temperature `1.5 - 0.5 cos(2πy)` with values in `[1, 2]`.
    Conduction,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Steady,
        Scenario::BuoyantBlob,
        Scenario::ShearDecay,
        Scenario::Conduction,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scenario::Steady => "steady",
            Scenario::BuoyantBlob => "buoyant-blob",
            Scenario::ShearDecay => "shear-decay",
            Scenario::Conduction => "conduction",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.tag() == s)
            .ok_or_else(|| Error::param("scenario", format!("unknown scenario `{s}`")))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Adaptive embedded 5(4) Dormand–Prince.
    Dopri5,
    /// Same tableau with a fixed step `dt`.
    Dopri5Fixed,
    /// Implicit Euler, damped Newton with Picard fallback.
    BackwardEuler,
}

impl Integrator {
    pub fn tag(self) -> &'static str {
        match self {
            Integrator::Dopri5 => "dopri5",
            Integrator::Dopri5Fixed => "dopri5-fixed",
            Integrator::BackwardEuler => "backward-euler",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Integrator::Dopri5 | Integrator::Dopri5Fixed => 5,
            Integrator::BackwardEuler => 1,
        }
    }
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dopri5" => Ok(Integrator::Dopri5),
            "dopri5-fixed" => Ok(Integrator::Dopri5Fixed),
            "backward-euler" => Ok(Integrator::BackwardEuler),
            other => Err(Error::param("integrator", format!("unknown integrator `{other}`"))),
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub params: ConstitutiveParams,
    pub k: TruncationLevel,
    /// Velocity modes per direction.
    pub n: usize,
    /// Temperature modes per direction.
    pub m: usize,
    pub lx: f64,
    /// Quadrature grid `(nx, ny)`; `None` picks the oversampled default.
    pub grid: Option<(usize, usize)>,
    pub mean_flow: bool,
    pub alpha: f64,
    pub force: [f64; 2],
    pub t_end: f64,
    /// Fixed step, or the first trial step of the adaptive integrator.
    pub dt: f64,
    pub integrator: Integrator,
    pub rtol: f64,
    pub atol: f64,
    pub output_interval: f64,
    /// Mollifier radius is `1/n_moll`; `None` ties it to `n`.
    pub n_moll: Option<usize>,
    pub seed: u64,
    /// Amplitude of a random in-band velocity added to the initial data.
    pub perturbation: f64,
    pub pressure: bool,
    /// Shift `ε` in the entropy `∫ ln(ϑ + ε)`.
    pub eps_floor: f64,
    /// Dimension used for the admissibility check.
    pub d: usize,
    pub theta_base: f64,
    pub blob_amp: f64,
    /// Blob centre as a fraction of `Lx`.
    pub blob_x: f64,
    pub blob_y: f64,
    pub blob_width: f64,
    pub shear_amp: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Steady,
            params: ConstitutiveParams::default(),
            k: TruncationLevel::default(),
            n: 8,
            m: 8,
            lx: 2.0,
            grid: None,
            mean_flow: true,
            alpha: 0.0,
            force: [0.0, -1.0],
            t_end: 1.0,
            dt: 1e-3,
            integrator: Integrator::Dopri5,
            rtol: 1e-8,
            atol: 1e-10,
            output_interval: 0.1,
            n_moll: None,
            seed: 0,
            perturbation: 0.0,
            pressure: false,
            eps_floor: 1e-8,
            d: 2,
            theta_base: 1.0,
            blob_amp: 1.0,
            blob_x: 0.5,
            blob_y: 0.35,
            blob_width: 0.12,
            shear_amp: 1.0,
        }
    }
}

impl RunConfig {
    pub fn for_scenario(scenario: Scenario) -> Self {
        Self {
            scenario,
            ..Self::default()
        }
    }

    pub fn mollifier_count(&self) -> usize {
        self.n_moll.unwrap_or(self.n)
    }

    /// Output times `Δ, 2Δ, …, t_end`, the last one clipped to `t_end`.
    pub fn output_times(&self) -> Vec<f64> {
        let count = (self.t_end / self.output_interval - 1e-9).ceil().max(1.0) as usize;
        (1..=count)
            .map(|i| {
                if i == count {
                    self.t_end
                } else {
                    i as f64 * self.output_interval
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate(self.d)?;
        if self.n == 0 || self.m == 0 {
            return Err(Error::param("n", "mode counts must be >= 1"));
        }
        if let Some((nx, ny)) = self.grid {
            let top = self.n.max(self.m);
            if nx < 2 * top + 2 || ny < top + 2 {
                return Err(Error::param(
                    "grid",
                    format!("grid {nx}x{ny} cannot resolve {top} modes per direction"),
                ));
            }
        }
        let positive = [
            ("lx", self.lx),
            ("t_end", self.t_end),
            ("dt", self.dt),
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("output_interval", self.output_interval),
            ("theta_base", self.theta_base),
            ("blob_width", self.blob_width),
        ];
        for (key, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::param(key, "must be a positive finite number"));
            }
        }
        let nonneg = [
            ("alpha", self.alpha),
            ("perturbation", self.perturbation),
            ("eps_floor", self.eps_floor),
            ("blob_amp", self.blob_amp),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::param(key, "must be a nonnegative finite number"));
            }
        }
        if !self.force.iter().all(|f| f.is_finite()) {
            return Err(Error::param("fx", "body force must be bounded"));
        }
        if !self.shear_amp.is_finite() {
            return Err(Error::param("shear_amp", "must be finite"));
        }
        if !(0.0..=1.0).contains(&self.blob_x) || !(0.0..=1.0).contains(&self.blob_y) {
            return Err(Error::param("blob_x", "blob centre must lie inside the channel"));
        }
        if self.n_moll == Some(0) {
            return Err(Error::param("n_moll", "mollifier count must be >= 1"));
        }
        Ok(())
    }
}
