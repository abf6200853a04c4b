//! Cross-module operator identities exercised through the quadrature layer
//! (not just in exact coefficient arithmetic).

use std::sync::Arc;

use jacobi_spectral::jacobi::{
    apply_ladder, apply_ladder_adjoint, coefficients, eval_phi, synthesize, JacobiParams,
    SpectralFunction,
};
use jacobi_spectral::multiplier::{apply_multiplier, shifted_neg_power, neg_power};
use jacobi_spectral::quad::{build_quadrature, GridFunction};

/// The operator factors through the ladder: one step down, its adjoint back
/// up, plus the square of the half-sum reproduces the eigenvalue. Checked
/// through the grid, so quadrature, synthesis and both ladder directions all
/// enter the residual.
#[test]
fn eigen_relation_through_quadrature() {
    let quad = Arc::new(build_quadrature(2048).unwrap());
    for (a, b) in [(0.0, 0.0), (0.5, 0.25), (2.0, 0.5)] {
        let base = JacobiParams::new(a, b).unwrap();
        let shift = base.half_sum().powi(2);
        for n in 0..=20usize {
            let grid = GridFunction::from_fn(quad.clone(), |t| eval_phi(base, n, t).unwrap());
            let spectral = coefficients(&grid, base, 24).unwrap();
            let down = apply_ladder(&spectral, 1);
            let down_grid = synthesize(&down, &quad);
            let down_spectral = coefficients(&down_grid, base.shifted(1), 24).unwrap();
            let up = apply_ladder_adjoint(&down_spectral, base, 1).unwrap();
            let up_grid = synthesize(&up, &quad);
            // residual of (D* D + half^2 - lambda_n) phi_n
            let mut worst = 0.0f64;
            for i in 0..quad.len() {
                let lhs = up_grid.values[i].re + shift * grid.values[i].re;
                let rhs = base.lambda(n) * grid.values[i].re;
                worst = worst.max((lhs - rhs).abs());
            }
            // scale-relative: the eigenvalue reaches ~500 at n = 20
            let scale = base.lambda(n).max(1.0);
            assert!(
                worst / scale < 1e-5,
                "({a}, {b}), n = {n}: residual {worst:.3e} (scale {scale:.1})"
            );
        }
    }
}

/// The shifted symbol route to the negative power agrees with the direct
/// spectral definition after a full grid round trip.
#[test]
fn shifted_negative_power_through_grid() {
    let base = JacobiParams::new(0.5, 0.25).unwrap();
    let quad = Arc::new(build_quadrature(1024).unwrap());
    let a = 0.5 * base.lambda(0);
    let gamma = 0.8;
    let f = SpectralFunction::from_real(base, &[1.0, -0.4, 0.2, 0.7]);
    let via_shift = apply_multiplier(&f, &shifted_neg_power(a, gamma)).unwrap();
    let grid = synthesize(&via_shift, &quad);
    let back = coefficients(&grid, base, 8).unwrap();
    let direct = neg_power(&f, gamma).unwrap();
    assert!(back.max_coeff_diff(&direct) < 1e-9);
}

/// Expansions with complex coefficients survive the full round trip.
#[test]
fn complex_round_trip() {
    use num_complex::Complex64;
    let base = JacobiParams::new(0.0, 0.0).unwrap();
    let quad = Arc::new(build_quadrature(512).unwrap());
    let coeffs: Vec<Complex64> = (0..8)
        .map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.3 * n as f64))
        .collect();
    let f = SpectralFunction::new(base, coeffs);
    let back = coefficients(&synthesize(&f, &quad), base, 7).unwrap();
    assert!(back.max_coeff_diff(&f) < 1e-9);
}
