//! Dyadic machinery: the compactly supported bump and its dilates, spectral
//! block projections, square functions in Poisson time, and the dyadic
//! quadratic functional.

use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::jacobi::{phi_table, SpectralFunction};
use crate::quad::{GridFunction, Quadrature};
use crate::smooth::{smooth_step, smooth_step_alt};

/// A smooth bump supported in `[1/2, 2]`, positive on `[3/5, 5/3]`, with the
/// dyadic partition property `a(t) + a(2t) = 1` on `[1/2, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct Bump {
    step: fn(f64) -> f64,
}

impl Bump {
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.5 || t >= 2.0 {
            0.0
        } else if t <= 1.0 {
            (self.step)(2.0 * t - 1.0)
        } else {
            1.0 - (self.step)(t - 1.0)
        }
    }

    /// Widened bump `a(t/2) + a(t) + a(2t)`: supported in `[1/4, 4]` and
    /// identically 1 on `[1/2, 2]`.
    pub fn eval_wide(&self, t: f64) -> f64 {
        self.eval(0.5 * t) + self.eval(t) + self.eval(2.0 * t)
    }
}

/// The canonical bump built from the `exp(-1/x)` step. The partition
/// property holds exactly: for `t` in `[1/2, 1]` both `a(t)` and `a(2t)`
/// evaluate the same step argument `2t - 1`.
pub fn build_bump() -> Bump {
    Bump { step: smooth_step }
}

/// A second admissible bump with a different interior profile, for sampling
/// the construction's independence from the bump choice.
pub fn build_bump_alt() -> Bump {
    Bump {
        step: smooth_step_alt,
    }
}

/// Spectral block projection. `j = 0` is the rank-one bottom-mode projection;
/// `j >= 1` applies the dyadic window `a(lambda_n / 2^{j-1})` coefficientwise.
pub fn phi_block(f: &SpectralFunction, j: usize, bump: &Bump) -> SpectralFunction {
    if j == 0 {
        let c0 = f.coeff(0);
        return SpectralFunction::new(f.params(), vec![c0]);
    }
    phi_block_windowed(f, j, bump)
}

/// Pure windowed block for any `j >= 0`: `c_n -> a(lambda_n / 2^{j-1}) c_n`
/// (at `j = 0` the window argument is `2 lambda_n`). The signed reconstruction
/// identity is exact with this form of the `j = 0` block.
pub fn phi_block_windowed(f: &SpectralFunction, j: usize, bump: &Bump) -> SpectralFunction {
    let scale = 2.0f64.powi(j as i32 - 1);
    let b = *bump;
    f.map_modes(move |_, lambda| Complex64::new(b.eval(lambda / scale), 0.0))
}

/// Log-spaced nodes and trapezoid weights realizing `int_0^inf . dt/t`,
/// adapted to the active spectrum of the functions being measured.
#[derive(Debug, Clone)]
pub struct TimeGrid {
    ts: Vec<f64>,
    weights: Vec<f64>,
    pub t_lo: f64,
    pub t_hi: f64,
    /// recorded bound on the relative tail truncation for the slowest mode
    pub tail_bound: f64,
}

impl TimeGrid {
    /// Grid covering `[1e-8 / sqrt(lambda_max), 50 / sqrt(lambda_min)]` with
    /// `points` trapezoid nodes in log time. The window makes the truncated
    /// head and tail of the square-function integrals negligible for every
    /// eigenvalue between the two extremes.
    pub fn for_spectrum(lambda_min_positive: f64, lambda_max: f64, points: usize) -> TimeGrid {
        assert!(lambda_min_positive > 0.0 && lambda_max >= lambda_min_positive);
        assert!(points >= 16);
        let t_lo = 1e-8 / lambda_max.sqrt();
        let t_hi = 50.0 / lambda_min_positive.sqrt();
        let x_lo = t_lo.ln();
        let x_hi = t_hi.ln();
        let h = (x_hi - x_lo) / (points - 1) as f64;
        let ts: Vec<f64> = (0..points).map(|i| (x_lo + i as f64 * h).exp()).collect();
        let mut weights = vec![h; points];
        weights[0] = 0.5 * h;
        weights[points - 1] = 0.5 * h;
        // tail: e^{-2 t_hi sqrt(lambda_min)} = e^{-100}; head: (t_lo
        // sqrt(lambda_max))^{2 mu} <= (1e-8)^{2 mu} for the smallest mu = 1/2
        let tail_bound = (-2.0 * t_hi * lambda_min_positive.sqrt()).exp() + 1e-8;
        TimeGrid {
            ts,
            weights,
            t_lo,
            t_hi,
            tail_bound,
        }
    }

    /// Default 600-node grid fitted to the active spectrum of `f`; `None`
    /// when no positive eigenvalue is active (the square functions vanish).
    pub fn for_function(f: &SpectralFunction) -> Option<TimeGrid> {
        let lmin = f.min_active_positive_lambda()?;
        let lmax = f.max_active_lambda()?;
        Some(TimeGrid::for_spectrum(lmin, lmax.max(lmin), 600))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.ts
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    /// Grid with half the log step (for convergence diagnostics).
    pub fn refined(&self) -> TimeGrid {
        let points = 2 * self.ts.len() - 1;
        let x_lo = self.t_lo.ln();
        let x_hi = self.t_hi.ln();
        let h = (x_hi - x_lo) / (points - 1) as f64;
        let ts: Vec<f64> = (0..points).map(|i| (x_lo + i as f64 * h).exp()).collect();
        let mut weights = vec![h; points];
        weights[0] = 0.5 * h;
        weights[points - 1] = 0.5 * h;
        TimeGrid {
            ts,
            weights,
            t_lo: self.t_lo,
            t_hi: self.t_hi,
            tail_bound: self.tail_bound,
        }
    }
}

/// Shared square-function evaluator: pointwise
/// `(sum_t w_t |sum_n profile(n, lambda_n, t) c_n phi_n(theta)|^2)^{1/2}`.
fn square_function(
    f: &SpectralFunction,
    tg: &TimeGrid,
    quad: &Arc<Quadrature>,
    profile: impl Fn(usize, f64, f64) -> Complex64,
) -> GridFunction {
    let deg = match f.degree() {
        Some(d) => d,
        None => return GridFunction::zero(quad.clone()),
    };
    let params = f.params();
    let table = phi_table(params, deg, quad.nodes());
    let g = quad.len();
    let mut acc = vec![0.0f64; g];
    let mut slice = vec![Complex64::new(0.0, 0.0); g];
    for (&t, &wt) in tg.nodes().iter().zip(tg.weights()) {
        for v in slice.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        for n in 0..=deg {
            let c = f.coeff(n);
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let a = profile(n, params.lambda(n), t) * c;
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let row = table.row(n);
            for i in 0..g {
                slice[i] += a * row[i];
            }
        }
        for (a, v) in acc.iter_mut().zip(&slice) {
            *a += wt * v.norm_sqr();
        }
    }
    GridFunction::new(
        quad.clone(),
        acc.into_iter()
            .map(|x| Complex64::new(x.sqrt(), 0.0))
            .collect(),
    )
}

/// Square function of integer derivative order `k` and weight `t^{k-gamma}`:
/// pointwise `L^2(dt/t)` norm of `t^{k-gamma} (d/dt)^k` of the Poisson
/// extension. Requires `0 < gamma < k`.
pub fn g_function(
    f: &SpectralFunction,
    gamma: f64,
    k: usize,
    tg: &TimeGrid,
    quad: &Arc<Quadrature>,
) -> Result<GridFunction> {
    if !(gamma > 0.0) || gamma >= k as f64 {
        return Err(Error::GammaOrder { gamma, r: k });
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(square_function(f, tg, quad, |_, lambda, t| {
        if lambda == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(
                sign * t.powf(k as f64 - gamma)
                    * lambda.powf(0.5 * k as f64)
                    * (-t * lambda.sqrt()).exp(),
                0.0,
            )
        }
    }))
}

/// Fractional square function: pointwise `L^2(dt/t)` norm of
/// `t^gamma (d/dt)^gamma` of the Poisson extension. The spectral fractional
/// derivative carries the unit-modulus phase `e^{i pi gamma}` common to all
/// modes, which drops under the modulus.
pub fn g_fractional(
    f: &SpectralFunction,
    gamma: f64,
    tg: &TimeGrid,
    quad: &Arc<Quadrature>,
) -> Result<GridFunction> {
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "square function needs gamma > 0",
        });
    }
    Ok(square_function(f, tg, quad, |_, lambda, t| {
        if lambda == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(
                t.powf(gamma) * lambda.powf(0.5 * gamma) * (-t * lambda.sqrt()).exp(),
                0.0,
            )
        }
    }))
}

/// Fractional square function with the time derivative taken by the defining
/// integral per mode (oracle for the spectral path).
pub fn g_fractional_via_quadrature(
    f: &SpectralFunction,
    gamma: f64,
    tg: &TimeGrid,
    quad: &Arc<Quadrature>,
) -> Result<GridFunction> {
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "square function needs gamma > 0",
        });
    }
    // precompute the modewise profiles on the time grid
    let deg = f.degree().unwrap_or(0);
    let params = f.params();
    let mut profiles = vec![vec![Complex64::new(0.0, 0.0); tg.len()]; deg + 1];
    for (n, row) in profiles.iter_mut().enumerate() {
        if f.coeff(n).norm_sqr() == 0.0 {
            continue;
        }
        let lambda = params.lambda(n);
        for (ti, &t) in tg.nodes().iter().enumerate() {
            let d = crate::semigroup::fractional_dt_scalar_quadrature(lambda.sqrt(), gamma, t)?;
            row[ti] = t.powf(gamma) * d;
        }
    }
    let t_index: std::collections::HashMap<u64, usize> = tg
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &t)| (t.to_bits(), i))
        .collect();
    Ok(square_function(f, tg, quad, move |n, _, t| {
        profiles[n][t_index[&t.to_bits()]]
    }))
}

/// Dyadic quadratic functional `(sum_{j=0}^{j_max} (2^{j gamma}
/// |Phi_j(f)|)^2)^{1/2}` on the grid. `j_max` must put every active
/// eigenvalue strictly below the last window.
pub fn tl_quadratic(
    f: &SpectralFunction,
    gamma: f64,
    j_max: usize,
    quad: &Arc<Quadrature>,
    bump: &Bump,
) -> Result<GridFunction> {
    if let Some(lambda_max) = f.max_active_lambda() {
        let required = 2.0 * lambda_max;
        if 2.0f64.powi(j_max as i32 - 1) <= required {
            return Err(Error::JMaxTooSmall {
                j_max,
                lambda_max,
                required,
            });
        }
    }
    let g = quad.len();
    let mut acc = vec![0.0f64; g];
    for j in 0..=j_max {
        let block = phi_block(f, j, bump);
        if block.is_zero() {
            continue;
        }
        let grid = crate::jacobi::synthesize(&block, quad);
        let w = 2.0f64.powf(j as f64 * gamma);
        for (a, v) in acc.iter_mut().zip(&grid.values) {
            let amp = w * v.norm();
            *a += amp * amp;
        }
    }
    Ok(GridFunction::new(
        quad.clone(),
        acc.into_iter()
            .map(|x| Complex64::new(x.sqrt(), 0.0))
            .collect(),
    ))
}

/// Smallest `j_max` admissible for [`tl_quadratic`] on `f`.
pub fn j_max_for(f: &SpectralFunction) -> usize {
    match f.max_active_lambda() {
        None => 1,
        Some(lmax) => {
            let mut j = 1usize;
            while 2.0f64.powi(j as i32 - 1) <= 2.0 * lmax {
                j += 1;
            }
            j
        }
    }
}

/// Closed-form factor of the single-mode square function with integer order:
/// `g(phi_n) = |phi_n| lambda^{gamma/2} sqrt(Gamma(2(k-gamma))) / 2^{k-gamma}`.
pub fn g_single_mode_factor(lambda: f64, gamma: f64, k: usize) -> f64 {
    let mu = k as f64 - gamma;
    lambda.powf(0.5 * gamma) * gamma_fn(2.0 * mu).sqrt() / 2.0f64.powf(mu)
}

/// Closed-form factor of the single-mode fractional square function:
/// `g(phi_n) = |phi_n| sqrt(Gamma(2 gamma)) / 2^gamma`, independent of the
/// eigenvalue.
pub fn g_fractional_single_mode_factor(gamma: f64) -> f64 {
    gamma_fn(2.0 * gamma).sqrt() / 2.0f64.powf(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{eval_phi, JacobiParams};
    use crate::quad::build_quadrature;
    use approx::assert_abs_diff_eq;

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn bump_support_and_partition() {
        let a = build_bump();
        assert_eq!(a.eval(0.4), 0.0);
        assert_eq!(a.eval(0.5), 0.0);
        assert_eq!(a.eval(2.0), 0.0);
        assert_eq!(a.eval(2.5), 0.0);
        assert_abs_diff_eq!(a.eval(0.75) + a.eval(1.5), 1.0, epsilon = 1e-15);
        for i in 0..=100 {
            let t = 0.5 + 0.5 * i as f64 / 100.0;
            assert!((a.eval(t) + a.eval(2.0 * t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_positive_on_core_interval() {
        for bump in [build_bump(), build_bump_alt()] {
            let mut inf = f64::INFINITY;
            for i in 0..=1000 {
                let t = 0.6 + (5.0 / 3.0 - 0.6) * i as f64 / 1000.0;
                inf = inf.min(bump.eval(t).abs());
            }
            assert!(inf > 0.0, "bump must not vanish on the core interval");
        }
    }

    #[test]
    fn bump_telescoping_partition() {
        let a = build_bump();
        for &s in &[1.0, 3.0, 10.0, 1e3] {
            let mut total = 0.0;
            for j in -10i32..60 {
                total += a.eval(s / 2.0f64.powi(j - 1));
            }
            assert!((total - 1.0).abs() < 1e-12, "partition at s = {s}");
        }
    }

    #[test]
    fn wide_bump_plateau() {
        let a = build_bump();
        for &t in &[0.5, 0.8, 1.0, 1.5, 2.0] {
            assert_abs_diff_eq!(a.eval_wide(t), 1.0, epsilon = 1e-12);
        }
        assert_eq!(a.eval_wide(0.2), 0.0);
        assert_eq!(a.eval_wide(4.1), 0.0);
    }

    #[test]
    fn block_zero_is_bottom_projection() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::from_real(p, &[2.0, 1.0, 0.5]);
        let b0 = phi_block(&f, 0, &build_bump());
        assert_eq!(b0.degree(), Some(0));
        assert_abs_diff_eq!(b0.coeff(0).re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn block_support_arithmetic() {
        let bump = build_bump();
        let p = params(0.5, 0.75);
        let n = 1;
        let lam = p.lambda(n);
        let f = SpectralFunction::mode(p, n, 1.0);
        let mut hit = false;
        for j in 1..12i32 {
            let arg = lam / 2.0f64.powi(j - 1);
            let block = phi_block(&f, j as usize, &bump);
            if (0.6..=(5.0 / 3.0)).contains(&arg) {
                assert!(!block.is_zero(), "window {j} must keep the mode");
                hit = true;
            }
            if arg > 2.0 {
                assert!(block.is_zero(), "window {j} must kill the mode");
            }
        }
        assert!(hit);
    }

    #[test]
    fn reconstruction_from_dyadic_blocks() {
        // summing the windowed blocks over j >= 1 recovers any expansion whose
        // active eigenvalues are >= 1
        let p = params(0.5, 0.5); // lambda_n = (n+1)^2 >= 1
        let bump = build_bump();
        let coeffs: Vec<f64> = (0..=12).map(|n| 1.0 / (1.0 + n as f64)).collect();
        let f = SpectralFunction::from_real(p, &coeffs);
        let mut acc = SpectralFunction::zero(p);
        for j in 1..=12 {
            acc = acc.add(&phi_block(&f, j, &bump));
        }
        assert!(acc.max_coeff_diff(&f) < 1e-12);
    }

    #[test]
    fn time_grid_covers_and_refines() {
        let tg = TimeGrid::for_spectrum(1.0, 100.0, 600);
        assert_eq!(tg.len(), 600);
        assert!(tg.t_lo < 1e-8 && tg.t_hi >= 50.0);
        let fine = tg.refined();
        assert_eq!(fine.len(), 1199);
    }

    #[test]
    fn g_single_mode_closed_form() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(256).unwrap());
        for n in [1usize, 4, 9] {
            let f = SpectralFunction::mode(p, n, 1.0);
            let tg = TimeGrid::for_function(&f).unwrap();
            for (gamma, k) in [(0.5, 1usize), (1.0, 2), (1.5, 2)] {
                let g = g_function(&f, gamma, k, &tg, &quad).unwrap();
                let factor = g_single_mode_factor(p.lambda(n), gamma, k);
                for (i, &theta) in quad.nodes().iter().enumerate() {
                    let expected = factor * eval_phi(p, n, theta).unwrap().abs();
                    assert!(
                        (g.values[i].re - expected).abs() < 1e-6,
                        "n={n} gamma={gamma} k={k}: {} vs {expected}",
                        g.values[i].re
                    );
                }
            }
        }
    }

    #[test]
    fn g_fractional_single_mode_lambda_independent() {
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(128).unwrap());
        let gamma = 0.75;
        let factor = g_fractional_single_mode_factor(gamma);
        for n in [0usize, 3, 7] {
            let f = SpectralFunction::mode(p, n, 1.0);
            let tg = TimeGrid::for_function(&f).unwrap();
            let g = g_fractional(&f, gamma, &tg, &quad).unwrap();
            for (i, &theta) in quad.nodes().iter().enumerate() {
                let expected = factor * eval_phi(p, n, theta).unwrap().abs();
                assert!((g.values[i].re - expected).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn g_of_zero_function() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(64).unwrap());
        let f = SpectralFunction::zero(p);
        let tg = TimeGrid::for_spectrum(1.0, 1.0, 64);
        let g = g_function(&f, 0.5, 1, &tg, &quad).unwrap();
        assert_eq!(g.sup_norm(), 0.0);
    }

    #[test]
    fn g_rejects_bad_orders() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(64).unwrap());
        let f = SpectralFunction::mode(p, 1, 1.0);
        let tg = TimeGrid::for_function(&f).unwrap();
        assert!(g_function(&f, 1.0, 1, &tg, &quad).is_err());
        assert!(g_function(&f, 0.0, 1, &tg, &quad).is_err());
    }

    #[test]
    fn g_isometry_constant() {
        // int g^2 dtheta = Gamma(2 gamma) / 2^{2 gamma} * sum |c_n|^2
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(2048).unwrap());
        let f = SpectralFunction::from_real(p, &[0.0, 1.0, 0.5, 0.25, 0.1]);
        for gamma in [0.5, 1.0, 1.5] {
            let tg = TimeGrid::for_function(&f).unwrap();
            let g = g_fractional(&f, gamma, &tg, &quad).unwrap();
            let ratio = g.l2_norm().powi(2) / f.l2_norm().powi(2);
            let expected = gamma_fn(2.0 * gamma) / 4.0f64.powf(gamma);
            assert!(
                (ratio - expected).abs() < 0.01 * expected,
                "gamma={gamma}: {ratio} vs {expected}"
            );
        }
    }

    #[test]
    fn key_relation_exchanges_orders() {
        // fractional order k - gamma equals integer order k applied to the
        // negative half-power, pointwise
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(512).unwrap());
        let f = SpectralFunction::from_real(p, &[0.3, 1.0, -0.5, 0.25]);
        for (gamma, k) in [(0.5, 1usize), (1.0, 2)] {
            let tg = TimeGrid::for_function(&f).unwrap();
            let lhs = g_fractional(&f, k as f64 - gamma, &tg, &quad).unwrap();
            let shifted = crate::multiplier::neg_power(&f, 0.5 * gamma).unwrap();
            let rhs = g_function(&shifted, gamma, k, &tg, &quad).unwrap();
            assert!(
                lhs.max_abs_diff(&rhs) < 1e-6,
                "gamma={gamma} k={k}: {}",
                lhs.max_abs_diff(&rhs)
            );
        }
    }

    #[test]
    fn time_grid_refinement_stable() {
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(512).unwrap());
        let f = SpectralFunction::from_real(p, &[1.0, 0.5, 0.3, 0.2, 0.1]);
        let tg = TimeGrid::for_function(&f).unwrap();
        let g1 = g_function(&f, 0.5, 1, &tg, &quad).unwrap().l2_norm();
        let g2 = g_function(&f, 0.5, 1, &tg.refined(), &quad)
            .unwrap()
            .l2_norm();
        assert!((g1 - g2).abs() < 1e-7, "{g1} vs {g2}");
    }

    #[test]
    fn spectral_and_quadrature_square_functions_agree() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(128).unwrap());
        let f = SpectralFunction::from_real(p, &[0.5, 1.0, 0.0, -0.5]);
        let gamma = 0.5;
        let tg = TimeGrid::for_spectrum(
            f.min_active_positive_lambda().unwrap(),
            f.max_active_lambda().unwrap(),
            200,
        );
        let a = g_fractional(&f, gamma, &tg, &quad).unwrap();
        let b = g_fractional_via_quadrature(&f, gamma, &tg, &quad).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-5, "{}", a.max_abs_diff(&b));
    }

    #[test]
    fn quadratic_functional_support_counting() {
        let p = params(0.5, 0.75);
        let bump = build_bump();
        let n = 4;
        let f = SpectralFunction::mode(p, n, 1.0);
        // at most two adjacent windows see a single eigenvalue
        let mut hits = 0;
        for j in 1..=14 {
            if !phi_block(&f, j, &bump).is_zero() {
                hits += 1;
            }
        }
        assert!((1..=2).contains(&hits), "window hits = {hits}");
    }

    #[test]
    fn quadratic_functional_scaling_in_gamma() {
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(256).unwrap());
        let bump = build_bump();
        let f = SpectralFunction::mode(p, 3, 1.0);
        let j_max = 8;
        let g1 = tl_quadratic(&f, 1.0, j_max, &quad, &bump).unwrap();
        let g2 = tl_quadratic(&f, 2.0, j_max, &quad, &bump).unwrap();
        // a single eigenvalue lives in at most two windows j and j+1; with
        // one extra power of gamma each block gains 2^j, so the pointwise
        // ratio lies between 2^j and 2^{j+1}
        let lam = p.lambda(3);
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for j in 1..=j_max {
            let arg = lam / 2.0f64.powi(j as i32 - 1);
            if bump.eval(arg) > 0.0 {
                lo = lo.min(2.0f64.powi(j as i32));
                hi = hi.max(2.0f64.powi(j as i32));
            }
        }
        for i in 0..quad.len() {
            if g1.values[i].norm() > 1e-9 {
                let ratio = g2.values[i].norm() / g1.values[i].norm();
                assert!(ratio >= lo - 1e-9 && ratio <= hi + 1e-9);
            }
        }
    }

    #[test]
    fn quadratic_functional_jmax_guard() {
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(64).unwrap());
        let bump = build_bump();
        let f = SpectralFunction::mode(p, 10, 1.0); // lambda = 121
        assert!(matches!(
            tl_quadratic(&f, 1.0, 5, &quad, &bump),
            Err(Error::JMaxTooSmall { .. })
        ));
        assert!(tl_quadratic(&f, 1.0, j_max_for(&f), &quad, &bump).is_ok());
    }

    #[test]
    fn quadratic_functional_brute_force_single_mode() {
        // single mode with lambda >= 1: the functional reduces to the known
        // two-window sum (the rank-one j = 0 block vanishes for n > 0)
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(128).unwrap());
        let bump = build_bump();
        let gamma = 1.0;
        let n = 3;
        let lam = p.lambda(n);
        let f = SpectralFunction::mode(p, n, 1.0);
        let got = tl_quadratic(&f, gamma, 9, &quad, &bump).unwrap();
        for (i, &theta) in quad.nodes().iter().enumerate() {
            let phi = eval_phi(p, n, theta).unwrap();
            let mut sum = 0.0;
            for j in 1..=9usize {
                let a = bump.eval(lam / 2.0f64.powi(j as i32 - 1));
                let term = 2.0f64.powf(j as f64 * gamma) * a * phi;
                sum += term * term;
            }
            assert!((got.values[i].re - sum.sqrt()).abs() < 1e-10);
        }
    }
}
