//! Viscous stress and heat flux laws.
//!
//! The stress follows the regularized power law
//! `S = ν(ϑ) (ε_reg + |D|²)^{(p-2)/2} D`, the heat flux the Fourier law
//! `q = -κ(ϑ) ∇ϑ`. Both temperature profiles are bounded by the configured
//! lower/upper constants, which is what the coercivity and growth checks in
//! [`verify_assumptions`] test against.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Temperature dependence of ν or κ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Identically one.
    Const,
    /// `1 + 1/(1 + ϑ⁺)`, taking values in `(1, 2]` for every temperature.
    RationalBounded,
}

impl Profile {
    #[inline]
    pub fn eval(self, theta: f64) -> f64 {
        match self {
            Profile::Const => 1.0,
            Profile::RationalBounded => 1.0 + 1.0 / (1.0 + theta.max(0.0)),
        }
    }

    /// Closed range the profile takes on `[0, ∞)`.
    pub fn range(self) -> (f64, f64) {
        match self {
            Profile::Const => (1.0, 1.0),
            Profile::RationalBounded => (1.0, 2.0),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Profile::Const => "const",
            Profile::RationalBounded => "rational-bounded",
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "const" => Ok(Profile::Const),
            "rational-bounded" => Ok(Profile::RationalBounded),
            other => Err(Error::Domain(format!(
                "unknown profile `{other}` (expected `const` or `rational-bounded`)"
            ))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstitutiveParams {
    pub p: f64,
    pub nu_lo: f64,
    pub nu_hi: f64,
    pub kappa_lo: f64,
    pub kappa_hi: f64,
    pub eps_reg: f64,
    pub nu_profile: Profile,
    pub kappa_profile: Profile,
}

impl Default for ConstitutiveParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            nu_lo: 1.0,
            nu_hi: 1.0,
            kappa_lo: 1.0,
            kappa_hi: 1.0,
            eps_reg: 0.0,
            nu_profile: Profile::Const,
            kappa_profile: Profile::Const,
        }
    }
}

impl ConstitutiveParams {
    /// Power-law parameters with constant unit profiles.
    pub fn power_law(p: f64) -> Self {
        Self { p, ..Self::default() }
    }

    /// Checks the bounds and the admissibility `p > 2d/(d+2)` for dimension `d`.
    pub fn validate(&self, d: usize) -> Result<()> {
        let finite = [
            self.p,
            self.nu_lo,
            self.nu_hi,
            self.kappa_lo,
            self.kappa_hi,
            self.eps_reg,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("constitutive parameters must be finite".into()));
        }
        if !(self.p > 1.0) {
            return Err(Error::param("p", "growth exponent must exceed 1"));
        }
        if !crate::exponents::galerkin_admissible(self.p, d) {
            return Err(Error::param(
                "p",
                format!(
                    "p = {} is not admissible in dimension {d}: the approximating system requires p > 2d/(d+2) = {}",
                    self.p,
                    2.0 * d as f64 / (d as f64 + 2.0)
                ),
            ));
        }
        if !(self.nu_lo > 0.0 && self.nu_lo <= self.nu_hi) {
            return Err(Error::param("nu_lo", "need 0 < nu_lo <= nu_hi"));
        }
        if !(self.kappa_lo > 0.0 && self.kappa_lo <= self.kappa_hi) {
            return Err(Error::param("kappa_lo", "need 0 < kappa_lo <= kappa_hi"));
        }
        if !(0.0..=1.0).contains(&self.eps_reg) {
            return Err(Error::param("eps_reg", "regularization must lie in [0, 1]"));
        }
        let (a, b) = self.nu_profile.range();
        if a < self.nu_lo || b > self.nu_hi {
            return Err(Error::param(
                "nu_profile",
                format!("profile range [{a}, {b}] leaves [nu_lo, nu_hi]"),
            ));
        }
        let (a, b) = self.kappa_profile.range();
        if a < self.kappa_lo || b > self.kappa_hi {
            return Err(Error::param(
                "kappa_profile",
                format!("profile range [{a}, {b}] leaves [kappa_lo, kappa_hi]"),
            ));
        }
        Ok(())
    }

    #[inline]
    pub fn nu(&self, theta: f64) -> f64 {
        self.nu_profile.eval(theta)
    }

    #[inline]
    pub fn kappa(&self, theta: f64) -> f64 {
        self.kappa_profile.eval(theta)
    }

    /// Scalar viscosity factor `ν(ϑ)(ε_reg + |D|²)^{(p-2)/2}` for a given `|D|²`.
    ///
    /// Returns zero at `|D| = 0` when the factor would be singular
    /// (`p < 2`, `ε_reg = 0`); `S = factor·D` vanishes there either way.
    #[inline]
    pub fn viscosity_factor(&self, theta: f64, d_norm_sq: f64) -> f64 {
        let base = self.eps_reg + d_norm_sq;
        if base == 0.0 {
            return if self.p == 2.0 { self.nu(theta) } else { 0.0 };
        }
        let e = 0.5 * (self.p - 2.0);
        let pow = if e == 0.0 { 1.0 } else { base.powf(e) };
        self.nu(theta) * pow
    }
}

/// Symmetric `d×d` tensor with `d ∈ {2, 3}`, stored as its upper triangle.
///
/// Layout: `[xx, xy, yy]` in 2D, `[xx, xy, xz, yy, yz, zz]` in 3D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor {
    dim: usize,
    upper: [f64; 6],
}

impl SymTensor {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 3, "dimension must be 2 or 3");
        Self { dim, upper: [0.0; 6] }
    }

    pub fn new2(xx: f64, xy: f64, yy: f64) -> Self {
        Self {
            dim: 2,
            upper: [xx, xy, yy, 0.0, 0.0, 0.0],
        }
    }

    pub fn new3(xx: f64, xy: f64, xz: f64, yy: f64, yz: f64, zz: f64) -> Self {
        Self {
            dim: 3,
            upper: [xx, xy, xz, yy, yz, zz],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            t.set(i, i, 1.0);
        }
        t
    }

    /// Symmetric part of an arbitrary `d×d` matrix.
    pub fn sym_part(m: &[[f64; 3]; 3], dim: usize) -> Self {
        let mut t = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                t.set(i, j, 0.5 * (m[i][j] + m[j][i]));
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        match (self.dim, i, j) {
            (2, 0, 0) => 0,
            (2, 0, 1) => 1,
            (2, 1, 1) => 2,
            (3, 0, 0) => 0,
            (3, 0, 1) => 1,
            (3, 0, 2) => 2,
            (3, 1, 1) => 3,
            (3, 1, 2) => 4,
            (3, 2, 2) => 5,
            _ => panic!("index ({i}, {j}) out of range for dimension {}", self.dim),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.slot(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        self.upper[s] = v;
    }

    /// Frobenius inner product `A:B`.
    pub fn ddot(&self, other: &SymTensor) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += self.get(i, j) * other.get(i, j);
            }
        }
        acc
    }

    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        let mut out = *self;
        out.upper.iter_mut().for_each(|v| *v *= a);
        out
    }

    pub fn sub(&self, other: &SymTensor) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for (o, b) in out.upper.iter_mut().zip(other.upper.iter()) {
            *o -= b;
        }
        out
    }

    /// `Q A Qᵀ` using the leading `d×d` block of `q`.
    pub fn conjugate(&self, q: &[[f64; 3]; 3]) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in i..d {
                let mut acc = 0.0;
                for a in 0..d {
                    for b in 0..d {
                        acc += q[i][a] * self.get(a, b) * q[j][b];
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|v| v.is_finite())
    }
}

fn check_finite_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("non-finite temperature {theta}")));
    }
    if theta < 0.0 {
        return Err(Error::Domain(format!("negative temperature {theta}")));
    }
    Ok(())
}

/// Viscous stress `S(ϑ, D)`.
pub fn stress(theta: f64, d: &SymTensor, params: &ConstitutiveParams) -> Result<SymTensor> {
    check_finite_theta(theta)?;
    if !d.is_finite() {
        return Err(Error::Domain("non-finite strain-rate tensor".into()));
    }
    let n2 = d.ddot(d);
    if n2 == 0.0 {
        return Ok(SymTensor::zeros(d.dim()));
    }
    Ok(d.scale(params.viscosity_factor(theta, n2)))
}

/// Fourier heat flux `q = -κ(ϑ)∇ϑ`.
pub fn heat_flux(theta: f64, grad_theta: &[f64], params: &ConstitutiveParams) -> Result<Vec<f64>> {
    check_finite_theta(theta)?;
    if grad_theta.iter().any(|g| !g.is_finite()) {
        return Err(Error::Domain("non-finite temperature gradient".into()));
    }
    let kappa = params.kappa(theta);
    Ok(grad_theta.iter().map(|g| -kappa * g).collect())
}

/// One sampled check of the structural stress assumptions.
#[derive(Debug, Clone, Copy)]
pub struct AssumptionSample {
    pub theta: f64,
    /// `(S(D₁) − S(D₂)):(D₁ − D₂)`.
    pub monotonicity: f64,
    /// `S(D₁):D₁ − ν̲|D₁|^p + ν̄`.
    pub coercivity_slack: f64,
    /// `ν̄(1 + |D₁|)^{p-1} − |S(D₁)|`.
    pub growth_slack: f64,
    /// Scale used for the relative tolerance, `(1 + |D₁| + |D₂|)^p`.
    pub scale: f64,
}

#[derive(Debug, Clone, Default)]
pub struct AssumptionReport {
    pub samples: usize,
    pub monotonicity_violations: usize,
    pub coercivity_violations: usize,
    pub growth_violations: usize,
    pub worst_monotonicity: f64,
    pub worst_coercivity: f64,
    pub worst_growth: f64,
}

impl AssumptionReport {
    pub fn violations(&self) -> usize {
        self.monotonicity_violations + self.coercivity_violations + self.growth_violations
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

/// Relative tolerance used for every slack in [`verify_assumptions`].
pub const ASSUMPTION_TOL: f64 = 1e-12;

/// Evaluates the three slacks for a given pair of tensors and a stress law.
pub fn assumption_sample<F>(theta: f64, d1: &SymTensor, d2: &SymTensor, params: &ConstitutiveParams, law: F) -> AssumptionSample
where
    F: Fn(f64, &SymTensor) -> SymTensor,
{
    let s1 = law(theta, d1);
    let s2 = law(theta, d2);
    let n1 = d1.norm();
    let n2 = d2.norm();
    AssumptionSample {
        theta,
        monotonicity: s1.sub(&s2).ddot(&d1.sub(d2)),
        coercivity_slack: s1.ddot(d1) - params.nu_lo * n1.powf(params.p) + params.nu_hi,
        growth_slack: params.nu_hi * (1.0 + n1).powf(params.p - 1.0) - s1.norm(),
        scale: (1.0 + n1 + n2).powf(params.p),
    }
}

/// Samples random `(ϑ, D₁, D₂)` and checks monotonicity, coercivity and growth
/// of an arbitrary stress law against the bounds in `params`.
pub fn verify_law<F>(params: &ConstitutiveParams, dim: usize, sample_count: usize, seed: u64, law: F) -> AssumptionReport
where
    F: Fn(f64, &SymTensor) -> SymTensor,
{
    assert!(sample_count >= 1, "need at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AssumptionReport {
        samples: sample_count,
        ..Default::default()
    };
    for i in 0..sample_count {
        let theta = 10f64.powf(rng.gen_range(-3.0..3.0));
        let d1 = random_tensor(&mut rng, dim);
        // every tenth pair shares D₁ = D₂ so the zero-product branch is exercised
        let d2 = if i % 10 == 0 { d1 } else { random_tensor(&mut rng, dim) };
        let s = assumption_sample(theta, &d1, &d2, params, &law);
        let tol = ASSUMPTION_TOL * s.scale;
        if s.monotonicity < -tol {
            report.monotonicity_violations += 1;
        }
        if s.coercivity_slack < -tol {
            report.coercivity_violations += 1;
        }
        if s.growth_slack < -tol {
            report.growth_violations += 1;
        }
        report.worst_monotonicity = report.worst_monotonicity.min(s.monotonicity / s.scale);
        report.worst_coercivity = report.worst_coercivity.min(s.coercivity_slack / s.scale);
        report.worst_growth = report.worst_growth.min(s.growth_slack / s.scale);
    }
    report
}

/// Runs [`verify_law`] on the configured power law.
pub fn verify_assumptions(params: &ConstitutiveParams, dim: usize, sample_count: usize, seed: u64) -> AssumptionReport {
    verify_law(params, dim, sample_count, seed, |theta, d| {
        stress(theta, d, params).expect("sampled inputs are finite and nonnegative")
    })
}

fn random_tensor<R: Rng>(rng: &mut R, dim: usize) -> SymTensor {
    // log-uniform magnitude so both the small-|D| and large-|D| regimes are hit
    let mag = 10f64.powf(rng.gen_range(-4.0..2.0));
    let mut t = SymTensor::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            t.set(i, j, rng.gen_range(-1.0..1.0));
        }
    }
    let n = t.norm();
    if n == 0.0 {
        return t;
    }
    t.scale(mag / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(p: f64) -> ConstitutiveParams {
        ConstitutiveParams::power_law(p)
    }

    #[test]
    fn zero_strain_gives_zero_stress() {
        for p in [1.3, 2.0, 3.0] {
            let s = stress(1.0, &SymTensor::zeros(2), &unit(p)).unwrap();
            assert_eq!(s, SymTensor::zeros(2));
        }
    }

    #[test]
    fn linear_case_is_identity_map() {
        let s = stress(1.0, &SymTensor::identity(2), &unit(2.0)).unwrap();
        assert_eq!(s, SymTensor::identity(2));
    }

    #[test]
    fn cubic_case_matches_scalar_evaluation() {
        let d = SymTensor::new2(1.0, 0.0, -1.0);
        let s = stress(1.0, &d, &unit(3.0)).unwrap();
        // independent scalar route: |D| = sqrt(1 + 1), S = |D|^{p-2} D
        let norm = (1.0f64 * 1.0 + 1.0 * 1.0).sqrt();
        assert!((s.get(0, 0) - norm).abs() < 1e-15);
        assert!((s.get(1, 1) + norm).abs() < 1e-15);
        let sd = s.ddot(&d);
        assert!((sd - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!(sd >= norm.powi(3) - 1.0);
    }

    #[test]
    fn heat_flux_examples() {
        let p = ConstitutiveParams::default();
        assert_eq!(heat_flux(1.0, &[0.0, 0.0], &p).unwrap(), vec![-0.0, -0.0]);
        assert_eq!(heat_flux(1.0, &[1.0, 0.0], &p).unwrap(), vec![-1.0, -0.0]);
        let q = ConstitutiveParams {
            kappa_profile: Profile::RationalBounded,
            kappa_hi: 2.0,
            ..Default::default()
        };
        let flux = heat_flux(4.0, &[0.0, 2.0], &q).unwrap();
        assert!((flux[1] + 2.4).abs() < 1e-15);
        assert_eq!(flux[0], 0.0);
    }

    #[test]
    fn nonfinite_and_negative_inputs_rejected() {
        let p = unit(2.0);
        assert!(stress(f64::NAN, &SymTensor::identity(2), &p).is_err());
        assert!(stress(-1.0, &SymTensor::identity(2), &p).is_err());
        assert!(stress(1.0, &SymTensor::new2(f64::INFINITY, 0.0, 0.0), &p).is_err());
        assert!(heat_flux(1.0, &[f64::NAN, 0.0], &p).is_err());
    }

    #[test]
    fn prototype_passes_assumption_suite() {
        for p in [1.5, 2.0, 3.0] {
            let r = verify_assumptions(&unit(p), 3, 10_000, 1);
            assert!(r.passed(), "p = {p}: {r:?}");
        }
    }

    #[test]
    fn equal_tensors_give_zero_monotonicity() {
        let p = unit(1.7);
        let d = SymTensor::new2(0.3, -0.2, 0.9);
        let s = assumption_sample(1.0, &d, &d, &p, |t, d| stress(t, d, &p).unwrap());
        assert_eq!(s.monotonicity, 0.0);
    }

    #[test]
    fn broken_law_is_flagged() {
        let p = unit(2.0);
        let r = verify_law(&p, 2, 1000, 3, |_, d| d.scale(-1.0));
        assert!(r.coercivity_violations > 0);
    }

    #[test]
    fn profile_validation() {
        let mut p = ConstitutiveParams {
            kappa_profile: Profile::RationalBounded,
            ..Default::default()
        };
        assert!(p.validate(2).is_err());
        p.kappa_hi = 2.0;
        assert!(p.validate(2).is_ok());
        assert!(unit(1.1).validate(3).is_err());
        assert!(unit(1.1).validate(2).is_ok());
    }
}
