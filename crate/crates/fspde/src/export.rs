//! Plot-ready artifacts on disk: CSV paths and solution matrices, JSON
//! manifests and reports. Files are written atomically (temp + rename) and
//! contain no timestamps, so a rerun with the same configuration and seed
//! reproduces every byte.

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::fbm::FbmPath;
use crate::fracint::AlphaNorms;
use crate::grid::StateSeries;
use crate::noise::NoiseField;
use crate::solver::{Provenance, SolutionPath};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Write through a sibling temp file and rename into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// CSV with columns t,value.
pub fn path_to_csv(path: &FbmPath) -> String {
    let mut out = String::from("t,value\n");
    let grid = path.grid();
    for k in 0..grid.n_points() {
        let _ = writeln!(out, "{},{}", grid.point(k), path.value(k));
    }
    out
}

/// Reproducibility sidecar for an exported path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathSidecar {
    pub hurst: f64,
    pub seed: u64,
    pub horizon: f64,
    pub n_steps: usize,
    pub sampler: String,
}

pub fn export_fbm_path(path: &FbmPath, sampler: &str, csv_file: &Path) -> Result<()> {
    write_atomic(csv_file, path_to_csv(path).as_bytes())?;
    let sidecar = PathSidecar {
        hurst: path.hurst(),
        seed: path.seed(),
        horizon: path.grid().horizon(),
        n_steps: path.grid().n_steps(),
        sampler: sampler.to_string(),
    };
    write_json(&csv_file.with_extension("json"), &sidecar)
}

/// CSV matrix: rows are time points, columns the spatial grid; the header
/// carries the spatial coordinates.
pub fn series_to_csv(series: &StateSeries) -> String {
    let xg = series.spatial_grid();
    let tg = series.time_grid();
    let mut out = String::from("t");
    for j in 0..xg.n_points() {
        let _ = write!(out, ",{}", xg.point(j));
    }
    out.push('\n');
    for k in 0..tg.n_points() {
        let _ = write!(out, "{}", tg.point(k));
        for j in 0..xg.n_points() {
            let _ = write!(out, ",{}", series.states()[[k, j]]);
        }
        out.push('\n');
    }
    out
}

/// Manifest of one noise-field export (per-mode CSVs live alongside).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseManifest {
    pub hurst: f64,
    pub master_seed: u64,
    pub horizon: f64,
    pub n_steps: usize,
    pub lambdas: Vec<f64>,
    pub mode_seeds: Vec<u64>,
    pub mode_files: Vec<String>,
}

/// Serialize a noise field as a directory of per-mode CSVs plus manifest.
pub fn export_noise_field(noise: &NoiseField, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut mode_files = Vec::new();
    let mut mode_seeds = Vec::new();
    for i in 0..noise.n_modes() {
        let name = format!("mode_{i:04}.csv");
        write_atomic(
            &dir.join(&name),
            path_to_csv(noise.mode_path(i)).as_bytes(),
        )?;
        mode_seeds.push(noise.mode_path(i).seed());
        mode_files.push(name);
    }
    let manifest = NoiseManifest {
        hurst: noise.hurst(),
        master_seed: noise.master_seed(),
        horizon: noise.time_grid().horizon(),
        n_steps: noise.time_grid().n_steps(),
        lambdas: noise.covariance().lambdas(),
        mode_seeds,
        mode_files,
    };
    write_json(&dir.join("manifest.json"), &manifest)
}

/// Summary of one solve inside a run manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSummary {
    pub provenance: Provenance,
    pub file: String,
    pub norms: AlphaNorms,
    pub iterations: usize,
    pub converged: bool,
    pub iterate_distances: Vec<f64>,
}

/// Everything needed to reproduce a simulate run bit-exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub member_seeds: Vec<u64>,
    pub solves: Vec<SolveSummary>,
}

pub fn crate_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// Export one solution path as CSV and return its manifest entry.
pub fn export_solution(path: &SolutionPath, dir: &Path, stem: &str) -> Result<SolveSummary> {
    let file = format!("{stem}.csv");
    write_atomic(&dir.join(&file), series_to_csv(&path.series).as_bytes())?;
    Ok(SolveSummary {
        provenance: path.provenance,
        file,
        norms: path.norms,
        iterations: path.diagnostics.iterations,
        converged: path.diagnostics.converged,
        iterate_distances: path.diagnostics.iterate_distances.clone(),
    })
}

/// A generic labeled report destination helper.
pub fn report_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.json"))
}

/// Plot-ready slice y ↦ G(x,t;y,s) of a kernel, columns y,G.
pub fn kernel_slice_to_csv(
    kernel: &crate::greens::SpectralKernel,
    x: f64,
    t: f64,
    s: f64,
    n_points: usize,
) -> Result<String> {
    let mut out = String::from("y,G\n");
    for j in 0..=n_points {
        let y = j as f64 / n_points as f64;
        let g = kernel.green_eval(x, t, y, s)?;
        let _ = writeln!(out, "{y},{g}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fbm::sample_fbm_circulant;
    use crate::grid::{SpatialGrid, TimeGrid};
    use crate::noise::{build_noise, CovarianceSpec, SpectralBasis};

    #[test]
    fn csv_has_header_and_full_length() {
        let grid = TimeGrid::new(1.0, 16).unwrap();
        let p = sample_fbm_circulant(&grid, 0.75, 1).unwrap();
        let csv = path_to_csv(&p);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines.len(), 18);
        assert!(lines[1].starts_with("0,0"));
    }

    #[test]
    fn series_csv_is_rectangular() {
        let tg = TimeGrid::new(1.0, 4).unwrap();
        let xg = SpatialGrid::new(3).unwrap();
        let s = StateSeries::from_fn(tg, xg, |t, x| t * x);
        let csv = series_to_csv(&s);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        for line in &lines {
            assert_eq!(line.split(',').count(), 5);
        }
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("nested/dir/data.csv");
        write_atomic(&file, b"a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&file).unwrap(), "a,b\n1,2\n");
        assert!(!file.with_extension("tmp").exists());
    }

    #[test]
    fn noise_export_writes_manifest_and_modes() {
        let dir = tempfile::tempdir().unwrap();
        let grid = TimeGrid::new(1.0, 8).unwrap();
        let basis = SpectralBasis::cosine(SpatialGrid::new(8).unwrap(), 3).unwrap();
        let noise = build_noise(
            &CovarianceSpec::power_law(1.0, 3.0, 3),
            &basis,
            &grid,
            0.75,
            9,
        )
        .unwrap();
        export_noise_field(&noise, dir.path()).unwrap();
        let manifest: NoiseManifest = serde_json::from_str(
            &std::fs::read_to_string(dir.path().join("manifest.json")).unwrap(),
        )
        .unwrap();
        assert_eq!(manifest.mode_files.len(), 3);
        assert_eq!(manifest.lambdas.len(), 3);
        for f in &manifest.mode_files {
            assert!(dir.path().join(f).exists());
        }
    }
}
