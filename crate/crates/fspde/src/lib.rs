//! fspde — a numerical laboratory for semilinear parabolic SPDEs driven by
//! infinite-dimensional fractional noise on the unit interval.
//!
//! The crate builds, layer by layer, everything needed to solve
//!
//!   du = (div(k ∇u) + g(u)) dt + h(u) W^H(x, dt)
//!
//! with conormal (zero-flux) boundary conditions and to test the structural
//! identities of the underlying theory numerically:
//!
//! * [`fbm`] — exact fractional Brownian motion samplers, the right-sided
//!   Weyl derivative and the Λ_α functional;
//! * [`noise`] — the truncated L²-valued fractional Wiener process
//!   W^H(x,t) = Σ λ_i^{1/2} e_i(x) B_i^H(t) and the random constant r_α^H;
//! * [`greens`] — the spectral Green's function of div(k∇) with Neumann
//!   eigenfunctions, its evolution operators and heat-kernel estimates;
//! * [`fracint`] — pathwise Young integration, the ‖·‖_{α,1} and
//!   ‖·‖_{α,2,T} norms and the fundamental integral bound;
//! * [`solver`] — the mild (Picard) and spectral Galerkin (variational)
//!   solvers and their comparison;
//! * [`analysis`] — Hölder exponents of sample paths and the factorization
//!   identity for the stochastic convolution;
//! * [`cli`] — a configuration-driven experiment runner.
//!
//! Each major capability has a runnable demonstration under `examples/`.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod fbm;
pub mod fracint;
pub mod greens;
pub mod grid;
pub mod noise;
pub mod solver;
pub mod stats;

pub use error::{Error, Result};
pub use grid::{GridFunction, SpatialGrid, StateSeries, TimeGrid};
