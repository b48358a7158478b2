//! Time integrators for autonomous systems `y' = F(y)`.
//!
//! The state may carry trailing auxiliary components (running integrals);
//! only the leading `core_len` entries enter error control and the implicit
//! solve.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub trait OdeSystem {
    fn len(&self) -> usize;
    fn core_len(&self) -> usize;
    fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()>;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub evaluations: u64,
    pub newton_iterations: u64,
    pub picard_fallbacks: u64,
}

// Dormand–Prince 5(4)
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn finite_or_fail(t: f64, v: &[f64]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numerical {
            t,
            reason: "step produced non-finite values".into(),
        })
    }
}

fn with_time<T>(t: f64, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Numerical { reason, .. } => Error::Numerical { t, reason },
        other => other,
    })
}

/// Explicit Dormand–Prince pair, adaptive or with fixed steps.
#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// `Some(h)` forces fixed steps of at most `h`.
    pub fixed: Option<f64>,
    pub h: f64,
    pub stats: StepStats,
    k: Vec<Vec<f64>>,
    fsal_valid: bool,
}

impl Dopri5 {
    pub fn adaptive(rtol: f64, atol: f64, h0: f64) -> Self {
        Self {
            rtol,
            atol,
            fixed: None,
            h: h0,
            stats: StepStats::default(),
            k: Vec::new(),
            fsal_valid: false,
        }
    }

    pub fn fixed(h: f64) -> Self {
        Self {
            fixed: Some(h),
            ..Self::adaptive(1.0, 1.0, h)
        }
    }

    /// One trial step of size `h` from `y`; writes the solution into `out`
    /// and returns the scaled error norm.
    fn trial<S: OdeSystem>(&mut self, sys: &S, t: f64, y: &[f64], h: f64, out: &mut [f64]) -> Result<f64> {
        let n = y.len();
        let mut stage = vec![0.0; n];
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, a) in A[s][..s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += a * self.k[j][i];
                    }
                }
                stage[i] = y[i] + h * acc;
            }
            let (_, tail) = self.k.split_at_mut(s);
            with_time(t + C[s] * h, sys.eval(&stage, &mut tail[0]))?;
            self.stats.evaluations += 1;
        }
        // stage 7 is evaluated at the fifth-order solution
        out.copy_from_slice(&stage);
        let core = sys.core_len();
        let mut err = 0.0;
        for i in 0..core {
            let mut e = 0.0;
            for (j, w) in E.iter().enumerate() {
                e += w * self.k[j][i];
            }
            let sc = self.atol + self.rtol * y[i].abs().max(out[i].abs());
            let r = h * e / sc;
            err += r * r;
        }
        Ok((err / core.max(1) as f64).sqrt())
    }

    /// Advances `y` from `t` to exactly `t_end`.
    pub fn advance<S: OdeSystem>(&mut self, sys: &S, t: &mut f64, y: &mut Vec<f64>, t_end: f64) -> Result<()> {
        let n = sys.len();
        if self.k.len() != 7 || self.k[0].len() != n {
            self.k = vec![vec![0.0; n]; 7];
            self.fsal_valid = false;
        }
        if !self.fsal_valid {
            with_time(*t, sys.eval(y, &mut self.k[0]))?;
            self.stats.evaluations += 1;
            self.fsal_valid = true;
        }
        let mut out = vec![0.0; n];
        if let Some(hmax) = self.fixed {
            let span = t_end - *t;
            if span <= 0.0 {
                return Ok(());
            }
            let steps = (span / hmax - 1e-9).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            let t0 = *t;
            for s in 0..steps {
                self.trial(sys, *t, y, h, &mut out)?;
                finite_or_fail(*t, &out)?;
                std::mem::swap(y, &mut out);
                self.k.swap(0, 6);
                *t = if s + 1 == steps { t_end } else { t0 + (s + 1) as f64 * h };
                self.stats.accepted += 1;
            }
            return Ok(());
        }

        while *t < t_end {
            let remaining = t_end - *t;
            let last = self.h >= remaining * (1.0 - 1e-12);
            let h = if last { remaining } else { self.h };
            if h <= 1e-14 * t_end.abs().max(1.0) {
                return Err(Error::StepUnderflow { t: *t, h });
            }
            let err = self.trial(sys, *t, y, h, &mut out);
            let err = match err {
                Ok(e) if out.iter().all(|v| v.is_finite()) && e.is_finite() => e,
                Ok(_) | Err(Error::Numerical { .. }) => {
                    // treat blow-ups inside a trial step as a rejection
                    self.stats.rejected += 1;
                    self.h = 0.25 * h;
                    continue;
                }
                Err(e) => return Err(e),
            };
            let fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
            if err <= 1.0 {
                std::mem::swap(y, &mut out);
                self.k.swap(0, 6);
                *t = if last { t_end } else { *t + h };
                self.stats.accepted += 1;
                // keep the step proposal when the last step was clipped
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
            } else {
                self.stats.rejected += 1;
                self.h = h * fac.min(1.0);
            }
        }
        Ok(())
    }
}

/// Implicit Euler on the core components; auxiliary components are updated
/// with the rate at the new state.
#[derive(Debug, Clone)]
pub struct BackwardEuler {
    pub h: f64,
    pub rtol: f64,
    pub atol: f64,
    pub max_newton: usize,
    pub max_picard: usize,
    pub stats: StepStats,
}

impl BackwardEuler {
    pub fn new(h: f64, rtol: f64, atol: f64) -> Self {
        Self {
            h,
            rtol,
            atol,
            max_newton: 25,
            max_picard: 500,
            stats: StepStats::default(),
        }
    }

    fn converged(&self, dy: &[f64], y: &[f64]) -> bool {
        dy.iter()
            .zip(y)
            .all(|(d, y)| d.abs() <= self.atol + self.rtol * y.abs())
    }

    fn residual<S: OdeSystem>(&mut self, sys: &S, y_old: &[f64], y: &[f64], h: f64, f: &mut [f64]) -> Result<Vec<f64>> {
        sys.eval(y, f)?;
        self.stats.evaluations += 1;
        let core = sys.core_len();
        Ok((0..core).map(|i| y[i] - y_old[i] - h * f[i]).collect())
    }

    fn jacobian<S: OdeSystem>(&mut self, sys: &S, y: &[f64], f0: &[f64], h: f64) -> Result<DMatrix<f64>> {
        let core = sys.core_len();
        let n = sys.len();
        let mut jac = DMatrix::<f64>::identity(core, core);
        let mut yp = y.to_vec();
        let mut fp = vec![0.0; n];
        for j in 0..core {
            let delta = 1e-7 * y[j].abs().max(1e-3);
            yp[j] = y[j] + delta;
            sys.eval(&yp, &mut fp)?;
            self.stats.evaluations += 1;
            for i in 0..core {
                jac[(i, j)] -= h * (fp[i] - f0[i]) / delta;
            }
            yp[j] = y[j];
        }
        Ok(jac)
    }

    fn newton<S: OdeSystem>(&mut self, sys: &S, y_old: &[f64], h: f64) -> Result<Option<Vec<f64>>> {
        let n = sys.len();
        let core = sys.core_len();
        let mut y = y_old.to_vec();
        let mut f = vec![0.0; n];
        let mut r = self.residual(sys, y_old, &y, h, &mut f)?;
        let jac = self.jacobian(sys, &y, &f, h)?;
        let lu = jac.lu();
        for _ in 0..self.max_newton {
            self.stats.newton_iterations += 1;
            let rhs = DVector::from_vec(r.iter().map(|x| -x).collect());
            let Some(delta) = lu.solve(&rhs) else {
                return Ok(None);
            };
            let norm0 = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..10 {
                let mut trial = y.clone();
                for i in 0..core {
                    trial[i] += lambda * delta[i];
                }
                match self.residual(sys, y_old, &trial, h, &mut f) {
                    Ok(rt) => {
                        let norm = rt.iter().map(|x| x * x).sum::<f64>().sqrt();
                        if norm.is_finite() && (norm < norm0 || norm == 0.0) {
                            y = trial;
                            r = rt;
                            accepted = true;
                            break;
                        }
                    }
                    Err(Error::Numerical { .. }) => {}
                    Err(e) => return Err(e),
                }
                lambda *= 0.5;
            }
            let step: Vec<f64> = delta.iter().map(|d| lambda * d).collect();
            if self.converged(&step, &y[..core]) {
                return Ok(Some(y));
            }
            if !accepted {
                return Ok(None);
            }
        }
        Ok(None)
    }

    fn picard<S: OdeSystem>(&mut self, sys: &S, y_old: &[f64], h: f64) -> Result<Option<Vec<f64>>> {
        let n = sys.len();
        let core = sys.core_len();
        let mut y = y_old.to_vec();
        let mut f = vec![0.0; n];
        for _ in 0..self.max_picard {
            sys.eval(&y, &mut f)?;
            self.stats.evaluations += 1;
            let next: Vec<f64> = (0..core).map(|i| y_old[i] + h * f[i]).collect();
            let dy: Vec<f64> = (0..core).map(|i| next[i] - y[i]).collect();
            y[..core].copy_from_slice(&next);
            if self.converged(&dy, &next) {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    fn step<S: OdeSystem>(&mut self, sys: &S, t: f64, y: &mut [f64], h: f64) -> Result<()> {
        let core = sys.core_len();
        let solved = match with_time(t, self.newton(sys, y, h))? {
            Some(v) => v,
            None => {
                self.stats.picard_fallbacks += 1;
                with_time(t, self.picard(sys, y, h))?.ok_or_else(|| Error::Numerical {
                    t,
                    reason: "implicit solve failed (Newton and Picard)".into(),
                })?
            }
        };
        let mut f = vec![0.0; sys.len()];
        with_time(t + h, sys.eval(&solved, &mut f))?;
        self.stats.evaluations += 1;
        y[..core].copy_from_slice(&solved[..core]);
        for i in core..y.len() {
            y[i] += h * f[i];
        }
        finite_or_fail(t + h, y)?;
        self.stats.accepted += 1;
        Ok(())
    }

    pub fn advance<S: OdeSystem>(&mut self, sys: &S, t: &mut f64, y: &mut [f64], t_end: f64) -> Result<()> {
        let span = t_end - *t;
        if span <= 0.0 {
            return Ok(());
        }
        let steps = (span / self.h - 1e-9).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let t0 = *t;
        for s in 0..steps {
            self.step(sys, *t, y, h)?;
            *t = if s + 1 == steps { t_end } else { t0 + (s + 1) as f64 * h };
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// y' = -y with an auxiliary running integral of y.
    struct Decay;

    impl OdeSystem for Decay {
        fn len(&self) -> usize {
            2
        }
        fn core_len(&self) -> usize {
            1
        }
        fn eval(&self, y: &[f64], dy: &mut [f64]) -> Result<()> {
            dy[0] = -y[0];
            dy[1] = y[0];
            Ok(())
        }
    }

    #[test]
    fn adaptive_dopri_matches_exponential() {
        let mut integ = Dopri5::adaptive(1e-10, 1e-12, 0.1);
        let mut y = vec![1.0, 0.0];
        let mut t = 0.0;
        integ.advance(&Decay, &mut t, &mut y, 2.0).unwrap();
        assert_eq!(t, 2.0);
        assert!((y[0] - (-2f64).exp()).abs() < 1e-9);
        assert!((y[1] - (1.0 - (-2f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn fixed_dopri_is_fifth_order() {
        let err = |h: f64| {
            let mut integ = Dopri5::fixed(h);
            let mut y = vec![1.0, 0.0];
            let mut t = 0.0;
            integ.advance(&Decay, &mut t, &mut y, 1.0).unwrap();
            (y[0] - (-1f64).exp()).abs()
        };
        let slope = (err(0.2) / err(0.1)).log2();
        assert!(slope > 4.7, "slope {slope}");
    }

    #[test]
    fn backward_euler_is_first_order() {
        let err = |h: f64| {
            let mut integ = BackwardEuler::new(h, 1e-13, 1e-15);
            let mut y = vec![1.0, 0.0];
            let mut t = 0.0;
            integ.advance(&Decay, &mut t, &mut y, 1.0).unwrap();
            (y[0] - (-1f64).exp()).abs()
        };
        let slope = (err(0.02) / err(0.01)).log2();
        assert!((slope - 1.0).abs() < 0.1, "slope {slope}");
    }
}
