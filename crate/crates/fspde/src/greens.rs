//! Parabolic Green's function of ∂_t u = div(k(t)∇u) on (0,1) with conormal
//! (Neumann) boundary conditions, for separable diffusivities k(x,t) = k₀κ(t).
//!
//! In this setting the kernel is exactly representable two ways:
//!
//! * spectrally, G(x,t;y,s) = Σ_m e^{−μ_m(K(t)−K(s))} e_m(x) e_m(y) with
//!   μ_m = (mπ)² and K(t) = ∫₀ᵗ k₀κ;
//! * by the method of images, as the free Gaussian kernel at diffusion time
//!   θ = K(t)−K(s) summed over even reflections of the interval.
//!
//! The evaluator switches to the image sum for small θ where the truncated
//! spectral series rings; the two representations agree to fractions of
//! machine precision on the switch boundary, which is itself a verified
//! invariant. The module also carries numerical witnesses for the
//! heat-kernel estimates the uniqueness and regularity arguments rest on.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::noise::{eigenvalue, SpectralBasis};
use crate::stats::{ols_fit, LinearFit};
use ndarray::Array1;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Positive time profile κ(t) of the diffusivity, with closed-form
/// antiderivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TimeProfile {
    /// κ ≡ 1.
    Constant,
    /// κ(t) = 1 + rate·t.
    Linear { rate: f64 },
    /// κ(t) = 1 + amplitude·cos(angular_frequency·t).
    Cosine { amplitude: f64, angular_frequency: f64 },
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant => 1.0,
            TimeProfile::Linear { rate } => 1.0 + rate * t,
            TimeProfile::Cosine {
                amplitude,
                angular_frequency,
            } => 1.0 + amplitude * (angular_frequency * t).cos(),
        }
    }

    /// ∫₀ᵗ κ(τ) dτ.
    pub fn antiderivative(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant => t,
            TimeProfile::Linear { rate } => t + 0.5 * rate * t * t,
            TimeProfile::Cosine {
                amplitude,
                angular_frequency,
            } => {
                if angular_frequency.abs() < 1e-300 {
                    (1.0 + amplitude) * t
                } else {
                    t + amplitude * (angular_frequency * t).sin() / angular_frequency
                }
            }
        }
    }

    /// Bounds of κ over [0, horizon].
    pub fn bounds(&self, horizon: f64) -> (f64, f64) {
        match self {
            TimeProfile::Constant => (1.0, 1.0),
            TimeProfile::Linear { rate } => {
                let end = 1.0 + rate * horizon;
                (end.min(1.0), end.max(1.0))
            }
            TimeProfile::Cosine { amplitude, .. } => {
                (1.0 - amplitude.abs(), 1.0 + amplitude.abs())
            }
        }
    }
}

/// Separable diffusivity k(x,t) = k₀·κ(t) with its ellipticity bounds.
/// The spatial/temporal smoothness class is recorded as metadata β (any
/// β < 1 for the smooth closed-form profiles used here).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusivitySpec {
    pub k0: f64,
    pub profile: TimeProfile,
    /// Hölder smoothness exponent recorded for reporting; smooth profiles
    /// support any value in (0,1).
    pub beta: f64,
}

impl DiffusivitySpec {
    pub fn constant(k0: f64) -> Self {
        DiffusivitySpec {
            k0,
            profile: TimeProfile::Constant,
            beta: 1.0,
        }
    }

    pub fn validate(&self, horizon: f64) -> Result<()> {
        if !(self.k0 > 0.0 && self.k0.is_finite()) {
            return Err(Error::config(format!(
                "base diffusivity k0 must be positive, got {}",
                self.k0
            )));
        }
        let (lo, _) = self.profile.bounds(horizon);
        if lo <= 0.0 {
            return Err(Error::config(format!(
                "diffusivity profile dips to {lo} on [0, {horizon}]; ellipticity needs a positive lower bound"
            )));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::config(format!(
                "smoothness exponent beta must lie in (0,1], got {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn value(&self, t: f64) -> f64 {
        self.k0 * self.profile.value(t)
    }

    /// Cumulative diffusivity K(t) = ∫₀ᵗ k₀κ.
    pub fn cumulative(&self, t: f64) -> f64 {
        self.k0 * self.profile.antiderivative(t)
    }

    /// Ellipticity bounds (k̲, k̄) over [0, horizon].
    pub fn ellipticity_bounds(&self, horizon: f64) -> (f64, f64) {
        let (lo, hi) = self.profile.bounds(horizon);
        (self.k0 * lo, self.k0 * hi)
    }
}

/// Spectral representation of the Green's function and its evolution
/// operators, truncated to `n_modes` Neumann modes.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    diffusivity: DiffusivitySpec,
    basis: SpectralBasis,
    horizon: f64,
    /// Diffusion-time gap below which the image representation is used:
    /// where e^{−μ_{M−1}θ} ≥ 1e−12 the truncated series still rings.
    tau_switch: f64,
}

impl SpectralKernel {
    /// The basis must resolve the highest mode: n_x ≥ 2·n_modes.
    pub fn new(diffusivity: DiffusivitySpec, basis: SpectralBasis, horizon: f64) -> Result<Self> {
        diffusivity.validate(horizon)?;
        let m = basis.n_modes();
        if m < 2 {
            return Err(Error::config("kernel needs at least 2 modes"));
        }
        if basis.grid().n_cells() < 2 * m {
            return Err(Error::config(format!(
                "spatial grid with {} cells cannot resolve {} kernel modes (need n_x ≥ 2M)",
                basis.grid().n_cells(),
                m
            )));
        }
        let tau_switch = (1e12f64).ln() / eigenvalue(m - 1);
        Ok(SpectralKernel {
            diffusivity,
            basis,
            horizon,
            tau_switch,
        })
    }

    pub fn diffusivity(&self) -> &DiffusivitySpec {
        &self.diffusivity
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn n_modes(&self) -> usize {
        self.basis.n_modes()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn tau_switch(&self) -> f64 {
        self.tau_switch
    }

    /// Diffusion-time gap K(t) − K(s).
    pub fn diffusion_time(&self, t: f64, s: f64) -> f64 {
        self.diffusivity.cumulative(t) - self.diffusivity.cumulative(s)
    }

    /// G(x,t;y,s) for t > s.
    pub fn green_eval(&self, x: f64, t: f64, y: f64, s: f64) -> Result<f64> {
        if t <= s {
            return Err(Error::domain(format!(
                "Green's function needs t > s, got t={t}, s={s}"
            )));
        }
        Ok(self.green_theta(x, y, self.diffusion_time(t, s)))
    }

    /// Kernel at diffusion time θ > 0, choosing the representation by the
    /// size of θ.
    pub fn green_theta(&self, x: f64, y: f64, theta: f64) -> f64 {
        if theta >= self.tau_switch {
            self.green_spectral(x, y, theta)
        } else {
            image_sum(x, y, theta)
        }
    }

    /// Truncated eigenfunction expansion Σ e^{−μ_m θ} e_m(x) e_m(y).
    pub fn green_spectral(&self, x: f64, y: f64, theta: f64) -> f64 {
        let mut acc = 1.0; // m = 0 term
        for m in 1..self.n_modes() {
            let decay = (-eigenvalue(m) * theta).exp();
            if decay < 1e-300 {
                break;
            }
            acc += 2.0
                * decay
                * (m as f64 * std::f64::consts::PI * x).cos()
                * (m as f64 * std::f64::consts::PI * y).cos();
        }
        acc
    }

    /// Method-of-images representation (valid for all θ > 0, efficient for
    /// small θ).
    pub fn green_images(&self, x: f64, y: f64, theta: f64) -> f64 {
        image_sum(x, y, theta)
    }

    /// Decay factors e^{−μ_m θ} for all modes.
    pub fn decay_factors(&self, theta: f64) -> Array1<f64> {
        Array1::from_iter((0..self.n_modes()).map(|m| (-eigenvalue(m) * theta).exp()))
    }

    /// Forward cosine analysis: mode coefficients of a grid function.
    pub fn analyze(&self, v: &GridFunction) -> Array1<f64> {
        let grid = self.basis.grid();
        Array1::from_iter(
            (0..self.n_modes()).map(|m| grid.inner(self.basis.values(m), v.values().view())),
        )
    }

    /// Synthesis back to the grid.
    pub fn synthesize(&self, coeffs: &Array1<f64>) -> GridFunction {
        let grid = self.basis.grid();
        let mut values = Array1::zeros(grid.n_points());
        for m in 0..self.n_modes() {
            if coeffs[m] != 0.0 {
                values.scaled_add(coeffs[m], &self.basis.values(m));
            }
        }
        GridFunction::new(grid, values).expect("synthesis")
    }

    /// Evolution operator U(t,s)v: identity at t = s, mode-space decay by
    /// e^{−μ_m(K(t)−K(s))} for t > s.
    pub fn apply_evolution(&self, v: &GridFunction, t: f64, s: f64) -> Result<GridFunction> {
        if t < s {
            return Err(Error::domain(format!(
                "evolution operator needs t ≥ s, got t={t}, s={s}"
            )));
        }
        if t == s {
            return Ok(v.clone());
        }
        let theta = self.diffusion_time(t, s);
        let mut coeffs = self.analyze(v);
        let decay = self.decay_factors(theta);
        coeffs *= &decay;
        Ok(self.synthesize(&coeffs))
    }
}

/// Free heat kernel Φ_θ(z) = e^{−z²/(4θ)} / √(4πθ) summed over the even
/// reflections z = x∓y−2n of the unit interval.
fn image_sum(x: f64, y: f64, theta: f64) -> f64 {
    let phi = |z: f64| (-z * z / (4.0 * theta)).exp() / (4.0 * std::f64::consts::PI * theta).sqrt();
    // Terms beyond |z| > sqrt(4θ·ln 1e18) are below 1e-18 relative.
    let reach = (4.0 * theta * 1e18f64.ln()).sqrt();
    let n_max = ((reach + 2.0) / 2.0).ceil() as i64;
    let mut acc = 0.0;
    for n in -n_max..=n_max {
        let shift = 2.0 * n as f64;
        acc += phi(x - y - shift) + phi(x + y - shift);
    }
    acc
}

/// Randomized sampling plan for the kernel-estimate checks. Sampled times
/// live on a uniform grid with `n_time` steps so that refining the grid
/// (with the same seed) produces strongly correlated tuple sets.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleSpec {
    pub n_samples: usize,
    pub n_time: usize,
    pub horizon: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn refine(&self, factor: usize) -> SampleSpec {
        SampleSpec {
            n_time: self.n_time * factor,
            ..*self
        }
    }
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            n_samples: 10_000,
            n_time: 256,
            horizon: 1.0,
            seed: 7,
        }
    }
}

/// K strictly decreasing grid times from K continuous draws. The RNG
/// consumption is constant, so sweeps over grids of different resolution
/// driven by the same seed see strongly coupled tuple sets and the sampled
/// maxima vary smoothly under refinement.
fn coupled_times<const K: usize>(rng: &mut ChaCha8Rng, n_time: usize, dt: f64) -> [f64; K] {
    let mut u = [0.0f64; K];
    for v in u.iter_mut() {
        *v = rng.random_range(0.0..1.0);
    }
    u.sort_by(|a, b| b.total_cmp(a));
    let mut idx = [0i64; K];
    for (i, &ui) in u.iter().enumerate() {
        idx[i] = (ui * n_time as f64).round() as i64;
    }
    // Repair snapped collisions to strictly decreasing indices.
    for i in 1..K {
        if idx[i] >= idx[i - 1] {
            idx[i] = idx[i - 1] - 1;
        }
    }
    if idx[K - 1] < 0 {
        let shift = -idx[K - 1];
        for v in idx.iter_mut() {
            *v += shift;
        }
        debug_assert!(idx[0] <= n_time as i64);
    }
    let mut out = [0.0f64; K];
    for (o, &i) in out.iter_mut().zip(idx.iter()) {
        *o = i as f64 * dt;
    }
    out
}

/// Kernel values and increments below this size are indistinguishable from
/// the floating-point cancellation noise of the truncated spectral sum
/// (hundreds of unit-order terms), so the estimate witnesses treat them as
/// zero rather than amplifying noise through near-underflowed bound sides.
pub const KERNEL_NOISE_FLOOR: f64 = 1e-12;

/// Fit of the Gaussian bound |G| ≤ c·(t−s)^{−d/2}·exp(−c′|x−y|²/(t−s)),
/// d = 1, with c′ frozen at 1/(8·k̄).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianBoundReport {
    pub c_fitted: f64,
    pub c_prime: f64,
    pub n_samples: usize,
    /// Fitted constant after refining the sampling grid 2×.
    pub c_refined: f64,
    pub drift: f64,
    /// Violations of the fitted bound when k̄ is doubled inside c′ (looser
    /// exponential); must be zero.
    pub violations_doubled_kbar: usize,
}

/// Sample |G|·(t−s)^{1/2}·exp(+c′|x−y|²/(t−s)) and report its maximum as
/// the fitted constant, plus its stability under sampling refinement.
pub fn check_gaussian_bound(kernel: &SpectralKernel, spec: &SampleSpec) -> GaussianBoundReport {
    let (_, k_upper) = kernel.diffusivity().ellipticity_bounds(spec.horizon);
    let c_prime = 1.0 / (8.0 * k_upper);
    let fit = |s: &SampleSpec| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
        let dt = s.horizon / s.n_time as f64;
        let mut c_max = 0.0f64;
        for _ in 0..s.n_samples {
            let [t, tau] = coupled_times::<2>(&mut rng, s.n_time, dt);
            let x: f64 = rng.random_range(0.0..=1.0);
            let y: f64 = rng.random_range(0.0..=1.0);
            let g = kernel.green_eval(x, t, y, tau).expect("ordered sample");
            if g.abs() < KERNEL_NOISE_FLOOR {
                continue;
            }
            let gap = t - tau;
            let c = g.abs() * gap.sqrt() * (c_prime * (x - y).powi(2) / gap).exp();
            c_max = c_max.max(c);
        }
        c_max
    };
    let c_fitted = fit(spec);
    let c_refined = fit(&spec.refine(2));

    // With the fitted c and a doubled k̄ inside c′ the exponential only
    // loosens, so counting violations of that bound must give zero.
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5bd1e995);
    let dt = spec.horizon / spec.n_time as f64;
    let loose = 1.0 / (16.0 * k_upper);
    let mut violations = 0usize;
    for _ in 0..spec.n_samples {
        let [t, tau] = coupled_times::<2>(&mut rng, spec.n_time, dt);
        let x: f64 = rng.random_range(0.0..=1.0);
        let y: f64 = rng.random_range(0.0..=1.0);
        let g = kernel.green_eval(x, t, y, tau).expect("ordered sample");
        if g.abs() < KERNEL_NOISE_FLOOR {
            continue;
        }
        let gap = t - tau;
        let bound = c_fitted.max(c_refined) * gap.powf(-0.5) * (-loose * (x - y).powi(2) / gap).exp();
        if g.abs() > bound * (1.0 + 1e-12) {
            violations += 1;
        }
    }

    GaussianBoundReport {
        c_fitted,
        c_prime,
        n_samples: spec.n_samples,
        c_refined,
        drift: (c_refined - c_fitted).abs() / c_fitted.max(1e-300),
        violations_doubled_kbar: violations,
    }
}

/// One witnessed inequality: the largest sampled ratio LHS/RHS (with the
/// free interior point instantiated at the midpoint of its interval) and
/// its drift under 2× refinement of the sampling grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioWitness {
    pub name: String,
    pub max_ratio: f64,
    pub max_ratio_refined: f64,
    pub drift: f64,
}

/// Regression of an increment rate on a dyadic gap ladder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub name: String,
    pub fitted: f64,
    pub target: f64,
    /// Two-sided checks require |fitted − target| small; one-sided ones
    /// only fitted ≥ target.
    pub two_sided: bool,
    pub r_squared: f64,
}

impl SlopeCheck {
    pub fn passes(&self, tolerance: f64) -> bool {
        if self.two_sided {
            (self.fitted - self.target).abs() <= tolerance
        } else {
            self.fitted >= self.target - tolerance
        }
    }
}

/// Report for the four first-order kernel inequalities.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub delta: f64,
    pub ratios: Vec<RatioWitness>,
    pub slopes: Vec<SlopeCheck>,
}

impl Lemma1Report {
    pub fn max_drift(&self) -> f64 {
        self.ratios.iter().fold(0.0f64, |a, r| a.max(r.drift))
    }

    pub fn all_bounded(&self) -> bool {
        self.ratios
            .iter()
            .all(|r| r.max_ratio.is_finite() && r.max_ratio_refined.is_finite())
    }
}

struct TupleSampler {
    rng: ChaCha8Rng,
    dt: f64,
    n_time: usize,
}

impl TupleSampler {
    fn new(spec: &SampleSpec) -> Self {
        TupleSampler {
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            dt: spec.horizon / spec.n_time as f64,
            n_time: spec.n_time,
        }
    }

    fn times<const K: usize>(&mut self) -> [f64; K] {
        coupled_times::<K>(&mut self.rng, self.n_time, self.dt)
    }

    fn point_pair(&mut self) -> (f64, f64) {
        (
            self.rng.random_range(0.0..=1.0),
            self.rng.random_range(0.0..=1.0),
        )
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 1.0 / 3.0 && delta < 1.0) {
        return Err(Error::domain(format!(
            "delta must lie in (d/(d+2), 1) = (1/3, 1) for d = 1, got {delta}"
        )));
    }
    Ok(())
}

/// Witness the four increment estimates of the Green's function:
///
/// (i)   |G(x,t;y,τ)−G(x,t;y,σ)| ≤ c(t−τ)^{−δ}(τ−σ)^δ·heat(t−t*)
/// (ii)  |G(x,t;y,τ)−G(x,s;y,τ)| ≤ c(t−s)^δ(s−τ)^{−δ}·heat(τ*−τ)
/// (iii) |G(x,t;y,τ)−G(x,s;y,τ)|^δ ≤ c(t−s)^δ(s−τ)^{−3δ/2+1/2}·heat(τ*−τ)
/// (iv)  |G(x,t;y,τ)−G(x,t;y,σ)|^{1−δ} ≤ c(τ−σ)^{1−δ}(s−τ)^{−3(1−δ)/2}
///
/// with heat(θ) = θ^{−1/2} exp(−c′(x−y)²/θ) and interior points at interval
/// midpoints. Bounded, refinement-stable ratios witness that some constant
/// c realizes each estimate over the sampled domain.
pub fn check_lemma1(
    kernel: &SpectralKernel,
    delta: f64,
    spec: &SampleSpec,
) -> Result<Lemma1Report> {
    check_delta(delta)?;
    let (_, k_upper) = kernel.diffusivity().ellipticity_bounds(spec.horizon);
    let c_prime = 1.0 / (8.0 * k_upper);
    let heat = |gap: f64, x: f64, y: f64| gap.powf(-0.5) * (-c_prime * (x - y).powi(2) / gap).exp();

    let sweep = |s: &SampleSpec| -> [f64; 4] {
        let mut sampler = TupleSampler::new(s);
        let mut maxima = [0.0f64; 4];
        for _ in 0..s.n_samples {
            // (i): t > τ > σ, t* midpoint of (σ, τ).
            {
                let [t, tau, sigma] = sampler.times::<3>();
                let (x, y) = sampler.point_pair();
                let lhs = (kernel.green_eval(x, t, y, tau).unwrap()
                    - kernel.green_eval(x, t, y, sigma).unwrap())
                .abs();
                if lhs >= KERNEL_NOISE_FLOOR {
                    let t_star = 0.5 * (sigma + tau);
                    let rhs = (t - tau).powf(-delta)
                        * (tau - sigma).powf(delta)
                        * heat(t - t_star, x, y);
                    maxima[0] = maxima[0].max(lhs / rhs);
                }
            }
            // (ii) and (iii): t > s > τ, τ* midpoint of (s, t). The
            // δ-powered estimate carries a δ-scaled Gaussian constant:
            // |ΔG|^δ inherits only the fraction δ of the kernel's
            // exponential decay, so a heat factor with the full c′ would
            // out-decay the left side in the far spatial tail.
            {
                let [t, s_mid, tau] = sampler.times::<3>();
                let (x, y) = sampler.point_pair();
                let lhs = (kernel.green_eval(x, t, y, tau).unwrap()
                    - kernel.green_eval(x, s_mid, y, tau).unwrap())
                .abs();
                if lhs >= KERNEL_NOISE_FLOOR {
                    let tau_star = 0.5 * (s_mid + t);
                    let rhs2 = (t - s_mid).powf(delta)
                        * (s_mid - tau).powf(-delta)
                        * heat(tau_star - tau, x, y);
                    maxima[1] = maxima[1].max(lhs / rhs2);
                    let gap = tau_star - tau;
                    let heat_powered =
                        gap.powf(-0.5) * (-delta * c_prime * (x - y).powi(2) / gap).exp();
                    let rhs3 = (t - s_mid).powf(delta)
                        * (s_mid - tau).powf(-1.5 * delta + 0.5)
                        * heat_powered;
                    maxima[2] = maxima[2].max(lhs.powf(delta) / rhs3);
                }
            }
            // (iv): t > s > τ > σ, uniform in t.
            {
                let [t, s_mid, tau, sigma] = sampler.times::<4>();
                let (x, y) = sampler.point_pair();
                let lhs = (kernel.green_eval(x, t, y, tau).unwrap()
                    - kernel.green_eval(x, t, y, sigma).unwrap())
                .abs();
                if lhs >= KERNEL_NOISE_FLOOR {
                    let rhs = (tau - sigma).powf(1.0 - delta)
                        * (s_mid - tau).powf(-1.5 * (1.0 - delta));
                    maxima[3] = maxima[3].max(lhs.powf(1.0 - delta) / rhs);
                }
            }
        }
        maxima
    };

    let coarse = sweep(spec);
    let fine = sweep(&spec.refine(2));
    let names = ["eq14", "eq15", "eq16", "eq17"];
    let ratios = names
        .iter()
        .zip(coarse.iter().zip(fine.iter()))
        .map(|(name, (&a, &b))| RatioWitness {
            name: (*name).to_string(),
            max_ratio: a,
            max_ratio_refined: b,
            drift: (b - a).abs() / a.max(1e-300),
        })
        .collect();

    // Increment-rate regressions on dyadic gap ladders, away from the
    // kernel singularity so the mean-value regime is clean.
    let mut slopes = Vec::new();
    {
        // (ii): raw time increment; rate ≈ 1 ≥ δ (one-sided).
        let (x, y, tau, s_base) = (0.3, 0.55, 0.1 * spec.horizon, 0.5 * spec.horizon);
        let mut lg = Vec::new();
        let mut lv = Vec::new();
        for j in 0..8 {
            let gap = spec.horizon * 0.02 * 0.5f64.powi(j);
            let t = s_base + gap;
            let lhs = (kernel.green_eval(x, t, y, tau)? - kernel.green_eval(x, s_base, y, tau)?)
                .abs();
            lg.push(gap.ln());
            lv.push(lhs.ln());
        }
        let fit = ols_fit(&lg, &lv).unwrap_or(LinearFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: 0.0,
        });
        slopes.push(SlopeCheck {
            name: "eq15-rate".into(),
            fitted: fit.slope,
            target: delta,
            two_sided: false,
            r_squared: fit.r_squared,
        });
        // (iii): δ-powered increment; rate = δ exactly (two-sided).
        slopes.push(SlopeCheck {
            name: "eq16-rate".into(),
            fitted: delta * fit.slope,
            target: delta,
            two_sided: true,
            r_squared: fit.r_squared,
        });
    }
    {
        // (iv): (1−δ)-powered increment in the lower times; rate = 1−δ.
        let (x, y, t) = (0.62, 0.41, spec.horizon);
        let tau = 0.45 * spec.horizon;
        let mut lg = Vec::new();
        let mut lv = Vec::new();
        for j in 0..8 {
            let gap = spec.horizon * 0.02 * 0.5f64.powi(j);
            let sigma = tau - gap;
            let lhs = (kernel.green_eval(x, t, y, tau)? - kernel.green_eval(x, t, y, sigma)?)
                .abs()
                .powf(1.0 - delta);
            lg.push(gap.ln());
            lv.push(lhs.ln());
        }
        let fit = ols_fit(&lg, &lv).unwrap_or(LinearFit {
            slope: f64::NAN,
            intercept: f64::NAN,
            r_squared: 0.0,
        });
        slopes.push(SlopeCheck {
            name: "eq17-rate".into(),
            fitted: fit.slope,
            target: 1.0 - delta,
            two_sided: true,
            r_squared: fit.r_squared,
        });
    }

    Ok(Lemma1Report {
        delta,
        ratios,
        slopes,
    })
}

/// Report for the second-order (double-increment) kernel estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondDifferenceReport {
    pub delta: f64,
    pub witness: RatioWitness,
}

/// Witness the mixed second difference estimate: for t > s > τ > σ,
///
///   |G(x,t;y,τ)−G(x,s;y,τ)−G(x,t;y,σ)+G(x,s;y,σ)|
///     ≤ c(t−s)^δ(s−τ)^{−1}(τ−σ)^{1−δ}·[heat(τ*−τ) + heat(σ*−σ)]
///
/// with τ* = σ* at the midpoint of (s,t).
pub fn check_second_difference(
    kernel: &SpectralKernel,
    delta: f64,
    spec: &SampleSpec,
) -> Result<SecondDifferenceReport> {
    check_delta(delta)?;
    let (_, k_upper) = kernel.diffusivity().ellipticity_bounds(spec.horizon);
    let c_prime = 1.0 / (8.0 * k_upper);
    let heat = |gap: f64, x: f64, y: f64| gap.powf(-0.5) * (-c_prime * (x - y).powi(2) / gap).exp();

    let sweep = |s: &SampleSpec| -> f64 {
        let mut sampler = TupleSampler::new(s);
        let mut max_ratio = 0.0f64;
        for _ in 0..s.n_samples {
            let [t, s_mid, tau, sigma] = sampler.times::<4>();
            let (x, y) = sampler.point_pair();
            let lhs = (kernel.green_eval(x, t, y, tau).unwrap()
                - kernel.green_eval(x, s_mid, y, tau).unwrap()
                - kernel.green_eval(x, t, y, sigma).unwrap()
                + kernel.green_eval(x, s_mid, y, sigma).unwrap())
            .abs();
            if lhs < KERNEL_NOISE_FLOOR {
                continue;
            }
            let star = 0.5 * (s_mid + t);
            let rhs = (t - s_mid).powf(delta)
                * (s_mid - tau).powf(-1.0)
                * (tau - sigma).powf(1.0 - delta)
                * (heat(star - tau, x, y) + heat(star - sigma, x, y));
            max_ratio = max_ratio.max(lhs / rhs);
        }
        max_ratio
    };

    let coarse = sweep(spec);
    let fine = sweep(&spec.refine(2));
    Ok(SecondDifferenceReport {
        delta,
        witness: RatioWitness {
            name: "eq44".into(),
            max_ratio: coarse,
            max_ratio_refined: fine,
            drift: (fine - coarse).abs() / coarse.max(1e-300),
        },
    })
}
