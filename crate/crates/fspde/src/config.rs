//! Experiment configuration: a JSON-serializable description of one
//! problem instance, its validation against the standing hypotheses, and
//! assembly into solver-ready objects.

use crate::error::{Error, Result};
use crate::greens::{DiffusivitySpec, SpectralKernel, TimeProfile};
use crate::grid::{SpatialGrid, TimeGrid};
use crate::noise::{
    build_noise, check_hypotheses, CovarianceSpec, HypothesisInput, HypothesisReport,
    NoiseField, SpectralBasis, SpectrumRule,
};
use crate::solver::{InitialCondition, NonlinearitySpec, Problem, ScalarFn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Initial-condition description (resolved against the spatial grid at
/// assembly time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialSpec {
    Constant { value: f64 },
    /// Σ amplitude·e_m(x) over the listed (mode, amplitude) pairs; smooth
    /// with zero conormal flux.
    CosineModes { modes: Vec<(usize, f64)> },
}

impl InitialSpec {
    pub fn build(&self, grid: SpatialGrid) -> InitialCondition {
        match self {
            InitialSpec::Constant { value } => InitialCondition::constant(grid, *value),
            InitialSpec::CosineModes { modes } => InitialCondition::cosine_modes(grid, modes),
        }
    }
}

/// Which solver(s) a simulate run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Mild,
    Galerkin,
    Both,
}

fn default_horizon() -> f64 {
    1.0
}
fn default_n_steps() -> usize {
    256
}
fn default_n_x() -> usize {
    256
}
fn default_noise_modes() -> usize {
    16
}
fn default_kernel_modes() -> usize {
    128
}
fn default_hurst() -> f64 {
    0.75
}
fn default_alpha() -> f64 {
    0.3
}
fn default_spectrum() -> SpectrumRule {
    SpectrumRule::PowerLaw { c0: 1.0, p: 3.0 }
}
fn default_diffusivity() -> DiffusivitySpec {
    DiffusivitySpec {
        k0: 0.1,
        profile: TimeProfile::Constant,
        beta: 1.0,
    }
}
fn default_g() -> ScalarFn {
    ScalarFn::zero()
}
fn default_h() -> ScalarFn {
    ScalarFn::Affine {
        intercept: 0.5,
        slope: 0.25,
    }
}
fn default_initial() -> InitialSpec {
    InitialSpec::CosineModes {
        modes: vec![(0, 1.0), (1, 0.3)],
    }
}
fn default_seed() -> u64 {
    1
}
fn default_ensemble() -> usize {
    1
}
fn default_tol() -> f64 {
    1e-6
}
fn default_max_iter() -> usize {
    50
}
fn default_method() -> SolveMethod {
    SolveMethod::Mild
}

/// One experiment: grids, truncations, noise, coefficients, seeds and
/// solver controls. Counts default to powers of two.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_n_steps")]
    pub n_steps: usize,
    #[serde(default = "default_n_x")]
    pub n_x: usize,
    #[serde(default = "default_noise_modes")]
    pub noise_modes: usize,
    #[serde(default = "default_kernel_modes")]
    pub kernel_modes: usize,
    #[serde(default = "default_hurst")]
    pub hurst: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_spectrum")]
    pub spectrum: SpectrumRule,
    #[serde(default = "default_diffusivity")]
    pub diffusivity: DiffusivitySpec,
    #[serde(default = "default_g")]
    pub g: ScalarFn,
    #[serde(default = "default_h")]
    pub h: ScalarFn,
    #[serde(default = "default_initial")]
    pub initial: InitialSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_ensemble")]
    pub ensemble: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_method")]
    pub method: SolveMethod,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization")
    }

    /// SHA-256 of the canonical JSON form; part of every run manifest.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialization");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hex_string(&hasher.finalize())
    }

    pub fn covariance(&self) -> CovarianceSpec {
        CovarianceSpec {
            rule: self.spectrum.clone(),
            n_modes: self.noise_modes,
        }
    }

    pub fn nonlinearity(&self) -> NonlinearitySpec {
        NonlinearitySpec {
            g: self.g.clone(),
            h: self.h.clone(),
        }
    }

    /// Hypothesis report for this configuration (report-only; `validate`
    /// turns failures into errors).
    pub fn hypothesis_report(&self) -> HypothesisReport {
        let cov = self.covariance();
        let nl = self.nonlinearity();
        let (k_lower, k_upper) = self.diffusivity.ellipticity_bounds(self.horizon);
        let lipschitz_verified =
            nl.g.verify_lipschitz(6.0, 2048) && nl.h.verify_lipschitz(6.0, 2048);
        check_hypotheses(&HypothesisInput {
            cov: &cov,
            hurst: self.hurst,
            alpha: self.alpha,
            gamma: nl.gamma(),
            lipschitz_verified,
            k_lower,
            k_upper,
            phi_bounded: true,
            dimension: 1,
        })
    }

    /// Structural and hypothesis validation. The error message names the
    /// violated condition.
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 2 {
            return Err(Error::config("n_steps must be at least 2"));
        }
        if self.kernel_modes < 2 {
            return Err(Error::config("kernel_modes must be at least 2"));
        }
        if self.n_x < 2 * self.kernel_modes {
            return Err(Error::config(format!(
                "n_x = {} cannot resolve kernel_modes = {} (need n_x ≥ 2M)",
                self.n_x, self.kernel_modes
            )));
        }
        if self.noise_modes == 0 || self.noise_modes > self.kernel_modes {
            return Err(Error::config(format!(
                "noise_modes = {} must lie in 1..=kernel_modes = {}",
                self.noise_modes, self.kernel_modes
            )));
        }
        if self.ensemble == 0 {
            return Err(Error::config("ensemble must be at least 1"));
        }
        if !(self.hurst > 0.5 && self.hurst < 1.0) {
            return Err(Error::config(format!(
                "solver-facing configurations need H ∈ (1/2, 1), got {}",
                self.hurst
            )));
        }
        self.diffusivity.validate(self.horizon)?;
        let report = self.hypothesis_report();
        if let Some(failure) = report.failures().first() {
            return Err(Error::config(format!(
                "hypothesis ({}) violated: {}",
                failure.name, failure.detail
            )));
        }
        Ok(())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.horizon, self.n_steps)
    }

    pub fn spatial_grid(&self) -> Result<SpatialGrid> {
        SpatialGrid::new(self.n_x)
    }

    /// Build kernel, noise, nonlinearities and initial condition for one
    /// ensemble member seed.
    pub fn assemble_with_seed(&self, seed: u64) -> Result<Assembled> {
        self.validate()?;
        let tgrid = self.time_grid()?;
        let xgrid = self.spatial_grid()?;
        let basis = SpectralBasis::cosine(xgrid, self.kernel_modes)?;
        let kernel = SpectralKernel::new(self.diffusivity, basis.clone(), self.horizon)?;
        let noise = build_noise(&self.covariance(), &basis, &tgrid, self.hurst, seed)?;
        Ok(Assembled {
            kernel,
            noise,
            nonlinearity: self.nonlinearity(),
            initial: self.initial.build(xgrid),
            alpha: self.alpha,
        })
    }

    pub fn assemble(&self) -> Result<Assembled> {
        self.assemble_with_seed(self.seed)
    }

    /// Seed of the e-th ensemble member.
    pub fn member_seed(&self, member: usize) -> u64 {
        self.seed.wrapping_add(member as u64)
    }

    /// Coarsened configuration for joint-refinement studies: divides the
    /// time steps, the spatial cells and both truncation levels.
    pub fn coarsen(&self, factor: usize) -> Result<ExperimentConfig> {
        if factor == 0
            || self.n_steps % factor != 0
            || self.n_x % factor != 0
            || self.noise_modes % factor != 0
            || self.kernel_modes % factor != 0
        {
            return Err(Error::config(format!(
                "cannot coarsen ({}, {}, {}, {}) by {factor}",
                self.n_steps, self.n_x, self.noise_modes, self.kernel_modes
            )));
        }
        let mut cfg = self.clone();
        cfg.n_steps /= factor;
        cfg.n_x /= factor;
        cfg.noise_modes /= factor;
        cfg.kernel_modes /= factor;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Solver-ready objects assembled from a configuration.
#[derive(Debug, Clone)]
pub struct Assembled {
    pub kernel: SpectralKernel,
    pub noise: NoiseField,
    pub nonlinearity: NonlinearitySpec,
    pub initial: InitialCondition,
    pub alpha: f64,
}

impl Assembled {
    pub fn problem(&self) -> Problem<'_> {
        Problem {
            kernel: &self.kernel,
            noise: &self.noise,
            nonlinearity: &self.nonlinearity,
            initial: &self.initial,
        }
    }

    /// Replace the noise by a restriction of a finer realization so that
    /// refinement levels share one sample path.
    pub fn with_nested_noise(mut self, fine: &NoiseField, factor: usize) -> Result<Assembled> {
        let restricted = fine
            .subsample_time(factor)?
            .truncate_modes(self.noise.n_modes())?
            .with_basis(self.kernel.basis())?;
        self.noise = restricted;
        Ok(self)
    }
}
