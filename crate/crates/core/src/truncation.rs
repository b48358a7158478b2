//! Cut-off operators of the approximating system.
//!
//! `t_cut` clamps a scalar at level `k`; `g_cut` is a C¹ cut-off equal to one
//! below `k` and zero above `2k`, bridged by the cubic smoothstep
//! `1 - 3s² + 2s³` with `s = (z - k)/k`. Both come with closed-form
//! primitives vanishing at zero, which the energy identities rely on.

use crate::error::{Error, Result};

/// Truncation level `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationLevel(u64);

impl TruncationLevel {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "truncation level must be a natural number >= 1"));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// Clamp `z` to `[-k, k]`.
    #[inline]
    pub fn t_cut(self, z: f64) -> f64 {
        t_cut(z, self.as_f64())
    }

    #[inline]
    pub fn g_cut(self, z: f64) -> f64 {
        g_cut(z, self.as_f64())
    }

    #[inline]
    pub fn t_cut_primitive(self, z: f64) -> f64 {
        t_cut_primitive(z, self.as_f64())
    }

    #[inline]
    pub fn g_cut_primitive(self, z: f64) -> f64 {
        g_cut_primitive(z, self.as_f64())
    }
}

impl Default for TruncationLevel {
    fn default() -> Self {
        Self(1_000_000)
    }
}

#[inline]
pub fn t_cut(z: f64, k: f64) -> f64 {
    z.signum() * z.abs().min(k)
}

/// C¹ cut-off: 1 on `[0, k]`, 0 on `[2k, ∞)`. Negative arguments are treated
/// as lying below `k`.
#[inline]
pub fn g_cut(z: f64, k: f64) -> f64 {
    if z <= k {
        1.0
    } else if z >= 2.0 * k {
        0.0
    } else {
        let s = (z - k) / k;
        1.0 - 3.0 * s * s + 2.0 * s * s * s
    }
}

/// Primitive of `t_cut`, zero at the origin: `z²/2` inside, `k|z| - k²/2` outside.
#[inline]
pub fn t_cut_primitive(z: f64, k: f64) -> f64 {
    let a = z.abs();
    if a <= k {
        0.5 * z * z
    } else {
        k * a - 0.5 * k * k
    }
}

/// Primitive of `g_cut`, zero at the origin. Constant `3k/2` beyond `2k`.
#[inline]
pub fn g_cut_primitive(z: f64, k: f64) -> f64 {
    if z <= k {
        z
    } else if z >= 2.0 * k {
        1.5 * k
    } else {
        let s = (z - k) / k;
        k + k * (s - s * s * s + 0.5 * s * s * s * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_cut_examples() {
        assert_eq!(t_cut(0.5, 2.0), 0.5);
        assert_eq!(t_cut(5.0, 2.0), 2.0);
        assert_eq!(t_cut(-5.0, 2.0), -2.0);
        assert_eq!(t_cut(0.0, 2.0), 0.0);
    }

    #[test]
    fn g_cut_examples() {
        let k = 3.0;
        assert_eq!(g_cut(0.9 * k, k), 1.0);
        assert_eq!(g_cut(2.1 * k, k), 0.0);
        assert!((g_cut(1.5 * k, k) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(t_cut_primitive(5.0, 2.0), 8.0);
        assert_eq!(t_cut_primitive(1.5, 2.0), 1.125);
        assert_eq!(g_cut_primitive(0.7, 2.0), 0.7);
        assert_eq!(t_cut_primitive(0.0, 2.0), 0.0);
        assert_eq!(g_cut_primitive(0.0, 2.0), 0.0);
        // continuity at the breakpoints
        assert!((g_cut_primitive(4.0 - 1e-12, 2.0) - 3.0).abs() < 1e-10);
    }

    #[test]
    fn primitives_differentiate_back() {
        let k = 2.0;
        let h = 1e-5;
        for i in 0..1000 {
            let z = -7.0 + 14.0 * (i as f64 + 0.5) / 1000.0;
            // skip the kinks of t_cut
            if (z.abs() - k).abs() > 2.0 * h {
                let fd = (t_cut_primitive(z + h, k) - t_cut_primitive(z - h, k)) / (2.0 * h);
                assert!((fd - t_cut(z, k)).abs() < 1e-8, "z = {z}");
            }
            let fd = (g_cut_primitive(z + h, k) - g_cut_primitive(z - h, k)) / (2.0 * h);
            assert!((fd - g_cut(z, k)).abs() < 1e-8, "z = {z}");
        }
    }

    #[test]
    fn g_cut_is_c1_at_bridge_ends() {
        let k = 1.0;
        let h = 1e-7;
        for z in [k, 2.0 * k] {
            let left = (g_cut(z, k) - g_cut(z - h, k)) / h;
            let right = (g_cut(z + h, k) - g_cut(z, k)) / h;
            assert!(left.abs() < 1e-6 && right.abs() < 1e-6);
        }
    }

    #[test]
    fn truncation_inactive_for_large_k() {
        let z = 37.25;
        assert_eq!(t_cut(z, 38.0), z);
        assert_eq!(g_cut(z * z, 2000.0), 1.0);
    }

    #[test]
    fn zero_level_rejected() {
        assert!(TruncationLevel::new(0).is_err());
        assert_eq!(TruncationLevel::new(4).unwrap().get(), 4);
    }
}
