// The cut-off functions used in the approximating system.

use nsf_galerkin::truncation::TruncationLevel;

pub fn run_example() -> Vec<(f64, f64, f64)> {
    let k = TruncationLevel::new(4).expect("k >= 1");
    let rows: Vec<_> = [0.5, 2.0, 4.0, 6.0, 20.0]
        .into_iter()
        .map(|z| (z, k.t_cut(z), k.g_cut(z)))
        .collect();
    for (z, t, g) in &rows {
        println!("z = {z:>5}: T_k = {t:.4}, g_k = {g:.4}");
    }
    rows
}

#[allow(dead_code)]
fn main() {
    run_example();
}
