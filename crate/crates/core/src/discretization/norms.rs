use ndarray::{Array2, Zip};

use super::quadrature::pairwise_sum;
use super::Grid;

/// `∫ f` by the grid quadrature, summed pairwise.
pub fn integrate(f: &Array2<f64>, grid: &Grid) -> f64 {
    let prod = Zip::from(f).and(&grid.weights).map_collect(|f, w| f * w);
    match prod.as_slice() {
        Some(s) => pairwise_sum(s),
        None => pairwise_sum(&prod.iter().copied().collect::<Vec<_>>()),
    }
}

fn pointwise_norm(components: &[&Array2<f64>]) -> Array2<f64> {
    let mut acc = Array2::<f64>::zeros(components[0].raw_dim());
    for c in components {
        Zip::from(&mut acc).and(*c).for_each(|a, c| *a += c * c);
    }
    acc.mapv_inplace(f64::sqrt);
    acc
}

/// `∫ |f|^q` with `|·|` the Euclidean norm over the given components.
pub fn lq_power(components: &[&Array2<f64>], grid: &Grid, q: f64) -> f64 {
    let mag = pointwise_norm(components);
    integrate(&mag.mapv(|m| m.powf(q)), grid)
}

/// `‖f‖_q` for `q ∈ [1, ∞]`.
pub fn lq_norm(components: &[&Array2<f64>], grid: &Grid, q: f64) -> f64 {
    assert!(q >= 1.0, "norm exponent must be >= 1");
    if q.is_infinite() {
        return pointwise_norm(components).iter().copied().fold(0.0, f64::max);
    }
    lq_power(components, grid, q).powf(1.0 / q)
}

/// `‖f‖_{1,q} = (‖f‖_q^q + ‖∇f‖_q^q)^{1/q}`; the gradient is passed as its
/// list of partial derivatives over all components.
pub fn w1q_norm(
    components: &[&Array2<f64>],
    gradient: &[&Array2<f64>],
    grid: &Grid,
    q: f64,
) -> f64 {
    if q.is_infinite() {
        return lq_norm(components, grid, q).max(lq_norm(gradient, grid, q));
    }
    (lq_power(components, grid, q) + lq_power(gradient, grid, q)).powf(1.0 / q)
}
