//! Pathwise Young integration in the regular regime: the chain rule for
//! ∫ B dB, the fractional norms against their closed forms, and the
//! fundamental bound ‖∫ F dW^H‖₂ ≤ r_α^H · sup_i ‖F e_i‖_{α,1}.
//!
//! Run with: cargo run --release --example young_integration

use fspde::fbm::sample_fbm_circulant;
use fspde::fracint::{
    check_bound_i, norm_alpha_1, norm_alpha_2_t, young_integral_scalar, OperatorPath,
};
use fspde::grid::{GridFunction, SpatialGrid, StateSeries, TimeGrid};
use fspde::noise::{build_noise, CovarianceSpec, SpectralBasis};

fn main() -> fspde::Result<()> {
    let grid = TimeGrid::new(1.0, 2048)?;
    let hurst = 0.75;

    // Young chain rule along one fBm path.
    let b = sample_fbm_circulant(&grid, hurst, 99)?;
    let result = young_integral_scalar(b.as_scalar(), b.as_scalar())?;
    let exact = 0.5 * b.value(2048) * b.value(2048);
    println!("∫ B dB (H = {hurst}):");
    println!("  left-sum refinements: {:?}", result.refinements);
    println!(
        "  value {:+.6} vs B(T)²/2 = {:+.6} (estimate {:.2e})",
        result.value, exact, result.convergence_estimate
    );

    // Norm closed forms on the linear test path u(t) = t·v.
    let xg = SpatialGrid::new(32)?;
    let linear = StateSeries::from_fn(TimeGrid::new(1.0, 512)?, xg, |t, _| t);
    let alpha = 0.25;
    let n1 = norm_alpha_1(&linear, alpha)?;
    let n2 = norm_alpha_2_t(&linear, alpha)?;
    println!("norms of u(t) = t·v at α = {alpha}:");
    println!("  ‖u‖_α,1   = {n1:.6}   (closed form 4/3 = {:.6})", 4.0 / 3.0);
    let closed = (1.0 + 1.0 / ((1.0 - alpha) * (1.0 - alpha) * (3.0 - 2.0 * alpha))).sqrt();
    println!("  ‖u‖_α,2,T = {n2:.6}   (closed form {closed:.6})");

    // The fundamental bound on a nontrivial operator path.
    let tgrid = TimeGrid::new(1.0, 128)?;
    let xgrid = SpatialGrid::new(64)?;
    let basis = SpectralBasis::cosine(xgrid, 4)?;
    let noise = build_noise(&CovarianceSpec::power_law(1.0, 3.0, 4), &basis, &tgrid, hurst, 5)?;
    let operator = OperatorPath::from_fn(tgrid, xgrid, 4, |k, i| {
        let t = tgrid.point(k);
        GridFunction::from_fn(xgrid, |x| (2.0 * t + i as f64).sin() * (1.0 + 0.5 * x))
    })?;
    let report = check_bound_i(&operator, &noise, 0.3)?;
    println!("fundamental bound at α = 0.3:");
    println!(
        "  lhs {:.4e} ≤ rhs {:.4e}  (r_α^H = {:.4}, sup norm {:.4}) -> {}",
        report.lhs,
        report.rhs,
        report.r_alpha_h,
        report.sup_norm_alpha_1,
        if report.passed { "holds" } else { "VIOLATED" }
    );
    Ok(())
}
