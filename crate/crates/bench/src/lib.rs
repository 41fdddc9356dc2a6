//! Shared inputs for the benchmarks.

use opo_cli::sweep::grid_points;

/// `n` log-spaced frequencies on `[0.01, 100]` at `σ = 1.1`, `c = 0.2`.
pub fn sweep_points(n: usize) -> Vec<(f64, f64, f64)> {
    let omegas: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / (n - 1) as f64))
        .collect();
    grid_points(&[1.1], &[0.2], &omegas)
}
