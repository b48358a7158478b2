//! Exponent bookkeeping for power-law fluids: admissibility, the regularity
//! ladder at 6/5, 8/5, 9/5 and 11/5, the pressure exponent, temperature
//! integrability windows and the convective integrability condition.

use std::fmt;

use crate::error::{Error, Result};

/// `p > 2d/(d+2)`, the condition under which the truncated Galerkin system is solvable.
pub fn galerkin_admissible(p: f64, d: usize) -> bool {
    let d = d as f64;
    p > 2.0 * d / (d + 2.0)
}

/// Which notions of solution are available for a given `p`.
///
/// Flags after `admissible` are only defined in three dimensions and are
/// `None` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityClassification {
    pub p: f64,
    pub d: usize,
    pub admissible: bool,
    pub energy_equality: Option<bool>,
    pub suitable: Option<bool>,
    pub internal_energy_equality: Option<bool>,
}

pub fn classify(p: f64, d: usize) -> Result<RegularityClassification> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::param("p", "growth exponent must be a finite number > 1"));
    }
    if d != 2 && d != 3 {
        return Err(Error::param("d", "dimension must be 2 or 3"));
    }
    if d != 3 {
        return Ok(RegularityClassification {
            p,
            d,
            admissible: galerkin_admissible(p, d),
            energy_equality: None,
            suitable: None,
            internal_energy_equality: None,
        });
    }
    Ok(RegularityClassification {
        p,
        d,
        admissible: p > 6.0 / 5.0,
        energy_equality: Some(p > 8.0 / 5.0),
        suitable: Some(p > 9.0 / 5.0),
        internal_energy_equality: Some(p >= 11.0 / 5.0),
    })
}

impl RegularityClassification {
    /// Every later flag implies the earlier ones.
    pub fn is_nested(&self) -> bool {
        let e = self.energy_equality.unwrap_or(false);
        let s = self.suitable.unwrap_or(false);
        let i = self.internal_energy_equality.unwrap_or(false);
        (!i || s) && (!s || e) && (!e || self.admissible)
    }

    /// Strongest notion available, as a short tag.
    pub fn level(&self) -> &'static str {
        if self.internal_energy_equality == Some(true) {
            "internal-energy-equality"
        } else if self.suitable == Some(true) {
            "suitable"
        } else if self.energy_equality == Some(true) {
            "energy-equality"
        } else if self.admissible {
            "weak"
        } else {
            "none"
        }
    }
}

fn flag(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

impl fmt::Display for RegularityClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}, d = {}", self.p, self.d)?;
        writeln!(f, "  weak solution (p > 2d/(d+2))    : {}", if self.admissible { "yes" } else { "no" })?;
        writeln!(f, "  global energy equality (p > 8/5): {}", flag(self.energy_equality))?;
        writeln!(f, "  suitable weak solution (p > 9/5): {}", flag(self.suitable))?;
        write!(f, "  entropy/internal energy equality (p >= 11/5): {}", flag(self.internal_energy_equality))
    }
}

/// Pressure integrability exponent `z' = min{p', 5p/6, 5/3}` for `p > 6/5`.
pub fn pressure_exponent(p: f64) -> Result<f64> {
    if !(p > 6.0 / 5.0) || !p.is_finite() {
        return Err(Error::param("p", "pressure exponent needs p > 6/5"));
    }
    let conj = p / (p - 1.0);
    Ok(conj.min(5.0 * p / 6.0).min(5.0 / 3.0))
}

/// Temperature integrability pair `(q, σ)` attached to a gradient exponent `r`.
///
/// `q = (5-r)/(3(2-r))`, `σ = 1 - (5-4r)/(3r)`, defined for `1 <= r < 5/4`.
pub fn temperature_window(r: f64) -> Result<(f64, f64)> {
    if !(1.0..1.25).contains(&r) {
        return Err(Error::param(
            "r",
            format!("gradient exponent r = {r} outside the window [1, 5/4)"),
        ));
    }
    let q = (5.0 - r) / (3.0 * (2.0 - r));
    let sigma = 1.0 - (5.0 - 4.0 * r) / (3.0 * r);
    Ok((q, sigma))
}

/// Left side of the convective integrability condition,
/// `3ε/(5p-6) + 3(2+2ε-σ)/(4σ)`.
pub fn convective_lhs(p: f64, eps: f64, sigma: f64) -> f64 {
    3.0 * eps / (5.0 * p - 6.0) + 3.0 * (2.0 + 2.0 * eps - sigma) / (4.0 * sigma)
}

/// Largest ε for which some σ ∈ (0, 1) makes [`convective_lhs`] at most one.
///
/// The left side is strictly decreasing in σ, so feasibility is decided by the
/// limit σ → 1, which gives `ε (3/(5p-6) + 3/2) <= 1/4`.
pub fn convective_threshold(p: f64) -> f64 {
    0.25 / (3.0 / (5.0 * p - 6.0) + 1.5)
}

/// The threshold `(5p-6)/12` quoted alongside the condition, which neglects
/// the `2ε` inside the second fraction.
pub fn quoted_convective_threshold(p: f64) -> f64 {
    (5.0 * p - 6.0) / 12.0
}

/// Finds σ ∈ (0, 1) with `convective_lhs(p, eps, σ) <= 1`, or `None`.
///
/// The left side decreases monotonically in σ, so the minimiser over the open
/// interval sits at its right end. The returned σ is the smallest feasible
/// value pushed half-way towards 1, which keeps it strictly inside the
/// interval with some margin.
pub fn convective_integrability(p: f64, eps: f64) -> Result<Option<f64>> {
    if !(p > 6.0 / 5.0) {
        return Err(Error::param("p", "convective condition needs p > 6/5"));
    }
    if !(eps > 0.0) {
        return Err(Error::param("eps", "ε must be positive"));
    }
    // σ_min solves lhs = 1: 3(2+2ε)/(4σ) = 1 + 3/4 - 3ε/(5p-6)
    let budget = 1.75 - 3.0 * eps / (5.0 * p - 6.0);
    if budget <= 0.0 {
        return Ok(None);
    }
    let sigma_min = 0.75 * (2.0 + 2.0 * eps) / budget;
    if sigma_min >= 1.0 {
        return Ok(None);
    }
    let sigma = 0.5 * (sigma_min + 1.0);
    debug_assert!(convective_lhs(p, eps, sigma) <= 1.0 + 1e-12);
    Ok(Some(sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: dense scan of σ over (0, 1).
    fn scan_feasible(p: f64, eps: f64, points: usize) -> bool {
        (1..points).any(|i| {
            let sigma = i as f64 / points as f64;
            convective_lhs(p, eps, sigma) <= 1.0
        })
    }

    #[test]
    fn classify_examples() {
        let c = classify(2.0, 3).unwrap();
        assert!(c.admissible);
        assert_eq!(c.energy_equality, Some(true));
        assert_eq!(c.suitable, Some(true));
        assert_eq!(c.internal_energy_equality, Some(false));

        let c = classify(11.0 / 5.0, 3).unwrap();
        assert_eq!(c.internal_energy_equality, Some(true));
        assert!(c.is_nested());

        assert!(!classify(6.0 / 5.0, 3).unwrap().admissible);
        assert!(classify(1.0, 3).is_err());
        assert!(classify(0.5, 3).is_err());
    }

    #[test]
    fn classify_two_dimensions_only_reports_admissibility() {
        let c = classify(1.1, 2).unwrap();
        assert!(c.admissible);
        assert_eq!(c.suitable, None);
    }

    #[test]
    fn pressure_exponent_examples() {
        assert!((pressure_exponent(2.0).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        assert!((pressure_exponent(3.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((pressure_exponent(1.3).unwrap() - 13.0 / 12.0).abs() < 1e-15);
        assert!(pressure_exponent(1.2).is_err());
    }

    #[test]
    fn pressure_exponent_caps_exactly_from_two() {
        for i in 0..400 {
            let p = 1.21 + i as f64 * 0.01;
            let z = pressure_exponent(p).unwrap();
            assert!(z > 1.0 && z <= 5.0 / 3.0 + 1e-15);
            assert_eq!(z == 5.0 / 3.0, p >= 2.0 - 1e-12 && p <= 2.5 + 1e-12, "p = {p}");
        }
    }

    #[test]
    fn temperature_window_examples() {
        let (q, s) = temperature_window(1.0).unwrap();
        assert!((q - 4.0 / 3.0).abs() < 1e-15 && (s - 2.0 / 3.0).abs() < 1e-15);
        let (q, s) = temperature_window(1.2).unwrap();
        assert!((q - 3.8 / 2.4).abs() < 1e-14);
        assert!((s - (1.0 - 0.2 / 3.6)).abs() < 1e-14);
        assert!(q < 5.0 / 3.0 && s < 1.0);
        // invert q(r): r = (5 - 6q)/(1 - 3q)
        let r_back = (5.0 - 6.0 * q) / (1.0 - 3.0 * q);
        assert!((r_back - 1.2).abs() < 1e-13);
        assert!(temperature_window(1.25).is_err());
        assert!(temperature_window(0.9).is_err());
    }

    #[test]
    fn convective_examples_against_scan() {
        // p = 2: ε = 0.5 infeasible (scan agrees)
        assert_eq!(convective_integrability(2.0, 0.5).unwrap(), None);
        assert!(!scan_feasible(2.0, 0.5, 10_000));
        // below the derived threshold a σ exists and satisfies the condition
        for p in [1.3, 1.5, 2.0, 2.5, 3.0] {
            let eps = 0.99 * convective_threshold(p);
            let s = convective_integrability(p, eps).unwrap().expect("feasible");
            assert!(s > 0.0 && s < 1.0);
            assert!(convective_lhs(p, eps, s) <= 1.0 + 1e-12);
            assert!(scan_feasible(p, eps, 10_000));
            let eps = 1.01 * convective_threshold(p);
            assert_eq!(convective_integrability(p, eps).unwrap(), None);
            assert!(!scan_feasible(p, eps, 10_000));
        }
    }

    #[test]
    fn galerkin_admissibility() {
        assert!(galerkin_admissible(1.1, 2));
        assert!(!galerkin_admissible(1.1, 3));
        assert!(!galerkin_admissible(1.2, 3));
    }
}
