//! Sample fractional Brownian motion with both exact samplers, compare a
//! few moments against the closed-form covariance, and export one path as
//! CSV with its reproducibility sidecar.
//!
//! Run with: cargo run --release --example fbm_paths

use fspde::export::export_fbm_path;
use fspde::fbm::{fbm_covariance, CirculantFbmSampler, DenseFbmSampler};
use fspde::grid::TimeGrid;
use fspde::stats::ks_two_sample;

fn main() -> fspde::Result<()> {
    let grid = TimeGrid::new(1.0, 256)?;
    let hurst = 0.75;
    let n_paths = 2000u64;

    let circulant = CirculantFbmSampler::new(grid, hurst)?;
    let dense = DenseFbmSampler::new(grid, hurst)?;

    // Empirical vs exact covariance at a few grid pairs.
    let pairs = [(64usize, 64usize), (64, 192), (128, 256)];
    println!("H = {hurst}, {n_paths} circulant paths on {} steps", grid.n_steps());
    for &(j, k) in &pairs {
        let emp: f64 = (0..n_paths)
            .map(|s| {
                let p = circulant.sample(s);
                p.value(j) * p.value(k)
            })
            .sum::<f64>()
            / n_paths as f64;
        let exact = fbm_covariance(grid.point(j), grid.point(k), hurst)?;
        println!("  cov(B(t_{j}), B(t_{k})):  empirical {emp:+.4}   exact {exact:+.4}");
    }

    // Two-sample agreement of the endpoint marginals.
    let a: Vec<f64> = (0..n_paths).map(|s| circulant.sample(s).value(256)).collect();
    let b: Vec<f64> = (0..n_paths).map(|s| dense.sample(900_000 + s).value(256)).collect();
    let ks = ks_two_sample(&a, &b);
    println!(
        "  KS(circulant, dense) on B(T): statistic {:.4}, 1% threshold {:.4} -> {}",
        ks.statistic,
        ks.threshold(0.01),
        if ks.rejects(0.01) { "rejected" } else { "not rejected" }
    );

    let out = std::path::Path::new("target/example-output/fbm_paths");
    let path = circulant.sample(7);
    export_fbm_path(&path, "circulant", &out.join("path_seed7.csv"))?;
    println!("  wrote {}", out.join("path_seed7.csv").display());
    Ok(())
}
