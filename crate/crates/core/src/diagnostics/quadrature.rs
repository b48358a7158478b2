//! Time quadrature over output samples.

pub fn trapezoid(t: &[f64], f: &[f64]) -> f64 {
    t.windows(2)
        .zip(f.windows(2))
        .map(|(t, f)| 0.5 * (t[1] - t[0]) * (f[0] + f[1]))
        .sum()
}

/// Quadrature weights on the sample times: composite Simpson when the spacing
/// is uniform (with a 3/8 panel closing an odd interval count), trapezoid
/// otherwise.
pub fn time_weights(t: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let h = t[1] - t[0];
    let uniform = t.windows(2).all(|s| ((s[1] - s[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    let intervals = n - 1;
    if !uniform || intervals < 2 {
        for i in 0..intervals {
            let hi = t[i + 1] - t[i];
            w[i] += 0.5 * hi;
            w[i + 1] += 0.5 * hi;
        }
        return w;
    }
    let simpson_end = if intervals % 2 == 0 { intervals } else { intervals - 3 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if simpson_end < intervals {
        let s = simpson_end;
        for (o, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
            w[s + o] += 3.0 * h / 8.0 * c;
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_quartics() {
        for n in [3usize, 4, 5, 8, 11] {
            let t: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
            let w = time_weights(&t);
            let s: f64 = t.iter().zip(&w).map(|(t, w)| w * t.powi(3)).sum();
            assert!((s - 0.25).abs() < 1e-14, "n = {n}: {s}");
        }
    }
}
