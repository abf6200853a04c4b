//! The Jacobi trigonometric eigensystem on `(0, pi)`: orthonormal
//! eigenfunctions `phi_n`, eigenvalues `lambda_n = (n + (alpha+beta+1)/2)^2`,
//! expansion coefficients, the first-order derivative ladder and its adjoint,
//! and partial sums.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quad::{GridFunction, Quadrature};

/// The parameter pair `(alpha, beta)`, both `>= -1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    alpha: f64,
    beta: f64,
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= -0.5) || !(beta >= -0.5) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Half-sum `(alpha + beta + 1) / 2`; its square is the bottom eigenvalue.
    pub fn half_sum(&self) -> f64 {
        0.5 * (self.alpha + self.beta + 1.0)
    }

    /// True iff `alpha + beta != -1`, required by the negative powers
    /// (otherwise the bottom eigenvalue vanishes).
    pub fn fractional_ok(&self) -> bool {
        self.alpha + self.beta != -1.0
    }

    pub fn require_fractional_ok(&self) -> Result<()> {
        if self.fractional_ok() {
            Ok(())
        } else {
            Err(Error::FractionalNotOk {
                sum: self.alpha + self.beta,
            })
        }
    }

    /// Eigenvalue `lambda_n = (n + (alpha+beta+1)/2)^2`.
    pub fn lambda(&self, n: usize) -> f64 {
        let s = n as f64 + self.half_sum();
        s * s
    }

    /// Parameters shifted by `ell` in both components (the target system of
    /// the order-`ell` ladder).
    pub fn shifted(&self, ell: usize) -> JacobiParams {
        JacobiParams {
            alpha: self.alpha + ell as f64,
            beta: self.beta + ell as f64,
        }
    }
}

/// One spectral mode: index and eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    pub n: usize,
    pub lambda: f64,
}

/// Closed-form eigenvalue of mode `n`.
pub fn eigenvalue(params: JacobiParams, n: usize) -> SpectralMode {
    SpectralMode {
        n,
        lambda: params.lambda(n),
    }
}

/// Rising factorial `(z)_ell = z (z+1) ... (z+ell-1)`, with `(z)_0 = 1`.
pub fn pochhammer(z: f64, ell: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..ell {
        acc *= z + j as f64;
    }
    acc
}

/// Normalization constant making `phi_n` a unit vector in `L^2(0, pi)`,
/// positive by convention. Closed Gamma-function form; the `n = 0` case is the
/// continuous limit `Gamma(alpha+beta+2)` of `(alpha+beta+1)Gamma(alpha+beta+1)`.
fn norm_constant(params: JacobiParams, n: usize) -> f64 {
    let a = params.alpha;
    let b = params.beta;
    let ln_d2 = if n == 0 {
        ln_gamma(a + b + 2.0) - ln_gamma(a + 1.0) - ln_gamma(b + 1.0)
    } else {
        let nf = n as f64;
        (2.0 * nf + a + b + 1.0).ln() + ln_gamma(nf + 1.0) + ln_gamma(nf + a + b + 1.0)
            - ln_gamma(nf + a + 1.0)
            - ln_gamma(nf + b + 1.0)
    };
    (0.5 * ln_d2).exp()
}

/// Classical Jacobi polynomials `p_0 .. p_nmax` at `x` by the three-term
/// recurrence (stable for `alpha, beta >= -1/2`).
fn jacobi_poly_column(params: JacobiParams, n_max: usize, x: f64, out: &mut [f64]) {
    let a = params.alpha;
    let b = params.beta;
    out[0] = 1.0;
    if n_max == 0 {
        return;
    }
    out[1] = 0.5 * (a + b + 2.0) * x + 0.5 * (a - b);
    for n in 2..=n_max {
        let nf = n as f64;
        let c1 = 2.0 * nf * (nf + a + b) * (2.0 * nf + a + b - 2.0);
        let c2 = 2.0 * nf + a + b - 1.0;
        let c3 = (2.0 * nf + a + b) * (2.0 * nf + a + b - 2.0);
        let c4 = a * a - b * b;
        let c5 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * (2.0 * nf + a + b);
        out[n] = (c2 * (c3 * x + c4) * out[n - 1] - c5 * out[n - 2]) / c1;
    }
}

fn weight_factor(params: JacobiParams, theta: f64) -> f64 {
    let half = 0.5 * theta;
    half.sin().powf(params.alpha + 0.5) * half.cos().powf(params.beta + 0.5)
}

/// Orthonormal eigenfunction `phi_n(theta)` for `theta` in `(0, pi)`.
pub fn eval_phi(params: JacobiParams, n: usize, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::ThetaOutOfDomain { theta });
    }
    let mut col = vec![0.0; n + 1];
    jacobi_poly_column(params, n, theta.cos(), &mut col);
    Ok(norm_constant(params, n) * col[n] * weight_factor(params, theta))
}

/// Table `phi[n][i] = phi_n(theta_i)` for `n <= n_max`, computed in one
/// recurrence sweep per node.
pub fn phi_table(params: JacobiParams, n_max: usize, thetas: &[f64]) -> Array2<f64> {
    let d: Vec<f64> = (0..=n_max).map(|n| norm_constant(params, n)).collect();
    let mut table = Array2::zeros((n_max + 1, thetas.len()));
    let mut col = vec![0.0; n_max + 1];
    for (i, &theta) in thetas.iter().enumerate() {
        jacobi_poly_column(params, n_max, theta.cos(), &mut col);
        let w = weight_factor(params, theta);
        for n in 0..=n_max {
            table[(n, i)] = d[n] * col[n] * w;
        }
    }
    table
}

/// A finite expansion `sum_n c_n phi_n` in the `(alpha, beta)` system.
/// Trailing exact zeros are trimmed so the degree is canonical; addition and
/// scaling act coefficientwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    params: JacobiParams,
    coeffs: Vec<Complex64>,
}

impl SpectralFunction {
    pub fn new(params: JacobiParams, mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Self { params, coeffs }
    }

    pub fn from_real(params: JacobiParams, coeffs: &[f64]) -> Self {
        Self::new(
            params,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn zero(params: JacobiParams) -> Self {
        Self {
            params,
            coeffs: Vec::new(),
        }
    }

    /// Single mode `c * phi_n`.
    pub fn mode(params: JacobiParams, n: usize, c: f64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(c, 0.0);
        Self::new(params, coeffs)
    }

    pub fn params(&self) -> JacobiParams {
        self.params
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Canonical degree (index of the last nonzero coefficient); `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient l2 norm; equals the `L^2(0, pi)` norm by orthonormality.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies `c_n -> m(n, lambda_n) c_n` and returns the result in the same system.
    pub fn map_modes(&self, f: impl Fn(usize, f64) -> Complex64) -> SpectralFunction {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * f(n, self.params.lambda(n)))
            .collect();
        SpectralFunction::new(self.params, coeffs)
    }

    pub fn scale(&self, c: Complex64) -> SpectralFunction {
        SpectralFunction::new(self.params, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> SpectralFunction {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &SpectralFunction) -> SpectralFunction {
        assert_eq!(
            self.params, other.params,
            "spectral functions live in different systems"
        );
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|n| self.coeff(n) + other.coeff(n)).collect();
        SpectralFunction::new(self.params, coeffs)
    }

    pub fn sub(&self, other: &SpectralFunction) -> SpectralFunction {
        self.add(&other.scale_real(-1.0))
    }

    /// Max coefficient deviation from `other` (both padded with zeros).
    pub fn max_coeff_diff(&self, other: &SpectralFunction) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|n| (self.coeff(n) - other.coeff(n)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest eigenvalue carried by a nonzero coefficient.
    pub fn max_active_lambda(&self) -> Option<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, _)| self.params.lambda(n))
            .fold(None, |acc, l| Some(acc.map_or(l, |a: f64| a.max(l))))
    }

    /// Smallest strictly positive eigenvalue carried by a nonzero coefficient.
    pub fn min_active_positive_lambda(&self) -> Option<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(n, c)| c.norm_sqr() > 0.0 && self.params.lambda(*n) > 0.0)
            .map(|(n, _)| self.params.lambda(n))
            .fold(None, |acc, l| Some(acc.map_or(l, |a: f64| a.min(l))))
    }
}

/// Expansion coefficients `c_n = int_0^pi phi_n f dtheta` for `n <= n_max`,
/// by quadrature. Fails if the grid is below the 16-nodes-per-mode floor.
pub fn coefficients(
    f: &GridFunction,
    params: JacobiParams,
    n_max: usize,
) -> Result<SpectralFunction> {
    let required = 16 * n_max;
    if n_max > 0 && f.quad.order() < required {
        return Err(Error::Resolution {
            order: f.quad.order(),
            required,
            n_max,
        });
    }
    let table = phi_table(params, n_max, f.quad.nodes());
    let w = f.quad.weights();
    let coeffs = (0..=n_max)
        .map(|n| {
            f.values
                .iter()
                .enumerate()
                .map(|(i, v)| v * (w[i] * table[(n, i)]))
                .sum()
        })
        .collect();
    Ok(SpectralFunction::new(params, coeffs))
}

/// Pointwise sum `sum_n c_n phi_n(theta_i)` on the grid.
pub fn synthesize(f: &SpectralFunction, quad: &Arc<Quadrature>) -> GridFunction {
    let mut values = vec![Complex64::new(0.0, 0.0); quad.len()];
    if let Some(deg) = f.degree() {
        let table = phi_table(f.params(), deg, quad.nodes());
        for (i, v) in values.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in 0..=deg {
                acc += f.coeff(n) * table[(n, i)];
            }
            *v = acc;
        }
    }
    GridFunction::new(quad.clone(), values)
}

/// Order-`ell` derivative ladder: maps the `(alpha, beta)` expansion into the
/// `(alpha+ell, beta+ell)` system, shifting mode `l` down to `l - ell` with
/// factor `(-1)^ell sqrt((l-ell+1)_ell (l+alpha+beta+1)_ell)`; modes `l < ell`
/// vanish (negative indices are zero by convention).
pub fn apply_ladder(f: &SpectralFunction, ell: usize) -> SpectralFunction {
    if ell == 0 {
        return f.clone();
    }
    let params = f.params();
    let target = params.shifted(ell);
    let deg = match f.degree() {
        Some(d) if d >= ell => d,
        _ => return SpectralFunction::zero(target),
    };
    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    let ab1 = params.alpha() + params.beta() + 1.0;
    let coeffs = (ell..=deg)
        .map(|l| {
            let factor =
                (pochhammer((l - ell) as f64 + 1.0, ell) * pochhammer(l as f64 + ab1, ell)).sqrt();
            f.coeff(l) * (sign * factor)
        })
        .collect();
    SpectralFunction::new(target, coeffs)
}

/// Adjoint of the order-`ell` ladder: maps an `(alpha+ell, beta+ell)` expansion
/// back into `(alpha, beta)`, raising modes. `base` is the target system.
pub fn apply_ladder_adjoint(f: &SpectralFunction, base: JacobiParams, ell: usize) -> Result<SpectralFunction> {
    let expected = base.shifted(ell);
    if (f.params().alpha() - expected.alpha()).abs() > 1e-12
        || (f.params().beta() - expected.beta()).abs() > 1e-12
    {
        return Err(Error::InvalidArgument(format!(
            "ladder adjoint of order {ell} expects the ({}, {}) system, got ({}, {})",
            expected.alpha(),
            expected.beta(),
            f.params().alpha(),
            f.params().beta()
        )));
    }
    let mut g = f.clone();
    // peel one step at a time: D*_{a,b} maps (a+1, b+1) -> (a, b)
    for step in (0..ell).rev() {
        let lower = base.shifted(step);
        let ab1 = lower.alpha() + lower.beta() + 1.0;
        let deg = match g.degree() {
            Some(d) => d,
            None => return Ok(SpectralFunction::zero(base)),
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 2];
        for m in 0..=deg {
            let factor = -((m as f64 + 1.0) * (m as f64 + ab1 + 1.0)).sqrt();
            coeffs[m + 1] = g.coeff(m) * factor;
        }
        g = SpectralFunction::new(lower, coeffs);
    }
    Ok(g)
}

/// First-order Jacobi derivative of grid samples, computed spectrally:
/// project onto the resolvable span, apply the exact ladder, synthesize in the
/// shifted system. Avoids the endpoint blowup of the cot/tan terms.
pub fn apply_d_grid(f: &GridFunction, params: JacobiParams) -> Result<GridFunction> {
    let n_max = f.quad.max_resolvable_mode();
    let spectral = coefficients(f, params, n_max)?;
    let ladder = apply_ladder(&spectral, 1);
    Ok(synthesize(&ladder, &f.quad))
}

/// Pointwise first-order Jacobi derivative of a closure by centered finite
/// differences (`h = pi * 1e-6`) plus the exact cot/tan terms. Diagnostic only.
pub fn d_pointwise(params: JacobiParams, f: impl Fn(f64) -> f64, theta: f64) -> f64 {
    let h = PI * 1e-6;
    let df = (f(theta + h) - f(theta - h)) / (2.0 * h);
    let half = 0.5 * theta;
    df - 0.25 * (2.0 * params.alpha() + 1.0) * (half.cos() / half.sin()) * f(theta)
        + 0.25 * (2.0 * params.beta() + 1.0) * (half.sin() / half.cos()) * f(theta)
}

/// Projection of grid samples onto the first `n + 1` modes.
pub fn partial_sum(f: &GridFunction, params: JacobiParams, n: usize) -> Result<GridFunction> {
    let spectral = coefficients(f, params, n)?;
    Ok(synthesize(&spectral, &f.quad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::build_quadrature;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pochhammer_cases() {
        assert_eq!(pochhammer(5.0, 0), 1.0);
        assert_eq!(pochhammer(3.0, 2), 12.0);
        assert_eq!(pochhammer(0.0, 1), 0.0);
    }

    #[test]
    fn eigenvalue_cases() {
        let cheb = JacobiParams::new(-0.5, -0.5).unwrap();
        assert_abs_diff_eq!(eigenvalue(cheb, 3).lambda, 9.0);
        let half = JacobiParams::new(0.5, 0.5).unwrap();
        assert_abs_diff_eq!(eigenvalue(half, 0).lambda, 1.0);
        let leg = JacobiParams::new(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(eigenvalue(leg, 2).lambda, 6.25);
    }

    #[test]
    fn eigenvalues_strictly_increasing() {
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        for n in 0..50 {
            assert!(p.lambda(n + 1) > p.lambda(n));
        }
    }

    #[test]
    fn params_rejects_out_of_range() {
        assert!(JacobiParams::new(-1.0, 0.0).is_err());
        assert!(JacobiParams::new(0.0, -0.6).is_err());
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn fractional_flag() {
        assert!(!JacobiParams::new(-0.5, -0.5).unwrap().fractional_ok());
        assert!(JacobiParams::new(0.0, 0.0).unwrap().fractional_ok());
    }

    #[test]
    fn eval_phi_domain_error() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        assert!(eval_phi(p, 0, 0.0).is_err());
        assert!(eval_phi(p, 0, PI).is_err());
        assert!(eval_phi(p, 0, -0.1).is_err());
    }

    // values frozen from an independent hypergeometric evaluation with the
    // normalization fixed by numerical quadrature
    #[test]
    fn eval_phi_independent_oracle() {
        let cases = [
            (2.0, 0.5, 5, 1.0, -0.81447344039869761),
            (2.0, 0.5, 0, 2.0, 0.89901997816915002),
            (0.0, 0.0, 7, 0.6, -0.67828763453593418),
            (0.5, 0.5, 3, 2.2, 0.46669639755648814),
        ];
        for (a, b, n, theta, expected) in cases {
            let p = JacobiParams::new(a, b).unwrap();
            let got = eval_phi(p, n, theta).unwrap();
            assert_abs_diff_eq!(got, expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn chebyshev_first_kind_reduction() {
        // alpha = beta = -1/2: phi_0 = 1/sqrt(pi), phi_n = sqrt(2/pi) cos(n theta)
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        let inv_sqrt_pi = 0.56418958354775629;
        assert_abs_diff_eq!(eval_phi(p, 0, PI / 2.0).unwrap(), inv_sqrt_pi, epsilon = 1e-14);
        let c = (2.0 / PI).sqrt();
        for n in 1..=8 {
            for i in 1..20 {
                let theta = PI * i as f64 / 20.0;
                let expected = c * (n as f64 * theta).cos();
                assert_abs_diff_eq!(eval_phi(p, n, theta).unwrap(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn chebyshev_second_kind_reduction() {
        // alpha = beta = 1/2: phi_n = sqrt(2/pi) sin((n+1) theta)
        let p = JacobiParams::new(0.5, 0.5).unwrap();
        let c = (2.0 / PI).sqrt();
        for n in 0..=6 {
            for i in 1..20 {
                let theta = PI * i as f64 / 20.0;
                let expected = c * ((n as f64 + 1.0) * theta).sin();
                assert_abs_diff_eq!(eval_phi(p, n, theta).unwrap(), expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn phi_normalized_by_quadrature() {
        let quad = Arc::new(build_quadrature(2048).unwrap());
        for (a, b) in [(-0.5, -0.5), (0.0, 0.0), (2.0, 0.5)] {
            let p = JacobiParams::new(a, b).unwrap();
            for n in [0, 5] {
                let g = GridFunction::from_fn(quad.clone(), |t| eval_phi(p, n, t).unwrap());
                assert_abs_diff_eq!(g.l2_norm(), 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn coefficients_pick_out_modes() {
        let quad = Arc::new(build_quadrature(2048).unwrap());
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let g = GridFunction::from_fn(quad.clone(), |t| {
            2.0 * eval_phi(p, 1, t).unwrap() + 3.0 * eval_phi(p, 4, t).unwrap()
        });
        let c = coefficients(&g, p, 8).unwrap();
        assert_abs_diff_eq!(c.coeff(1).re, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(c.coeff(4).re, 3.0, epsilon = 1e-9);
        for n in [0, 2, 3, 5, 6, 7, 8] {
            assert!(c.coeff(n).norm() < 1e-9);
        }
    }

    #[test]
    fn coefficients_of_zero() {
        let quad = Arc::new(build_quadrature(256).unwrap());
        let p = JacobiParams::new(0.5, 0.5).unwrap();
        let z = GridFunction::zero(quad);
        let c = coefficients(&z, p, 10).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn coefficients_resolution_floor() {
        let quad = Arc::new(build_quadrature(64).unwrap());
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let g = GridFunction::zero(quad);
        assert!(matches!(
            coefficients(&g, p, 100),
            Err(Error::Resolution { .. })
        ));
    }

    #[test]
    fn synthesize_constant_mode() {
        let quad = Arc::new(build_quadrature(128).unwrap());
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        let f = SpectralFunction::mode(p, 0, 1.0);
        let g = synthesize(&f, &quad);
        let expected = 0.56418958354775629;
        for v in &g.values {
            assert_abs_diff_eq!(v.re, expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn synthesize_zero() {
        let quad = Arc::new(build_quadrature(64).unwrap());
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let g = synthesize(&SpectralFunction::zero(p), &quad);
        assert_eq!(g.sup_norm(), 0.0);
    }

    #[test]
    fn round_trip_span_degree_64() {
        let quad = Arc::new(build_quadrature(2048).unwrap());
        let p = JacobiParams::new(0.5, 0.5).unwrap();
        let coeffs: Vec<f64> = (0..=64).map(|n| 1.0 / (1.0 + n as f64)).collect();
        let f = SpectralFunction::from_real(p, &coeffs);
        let g = synthesize(&f, &quad);
        let back = coefficients(&g, p, 64).unwrap();
        assert!(f.max_coeff_diff(&back) < 1e-9);
    }

    #[test]
    fn ladder_first_mode() {
        // order-1 ladder on phi_1 gives -sqrt(alpha+beta+2) phi_0 in the shifted system
        let p = JacobiParams::new(2.0, 0.5).unwrap();
        let f = SpectralFunction::mode(p, 1, 1.0);
        let d = apply_ladder(&f, 1);
        assert_eq!(d.params(), p.shifted(1));
        assert_abs_diff_eq!(d.coeff(0).re, -2.1213203435596426, epsilon = 1e-14);
        assert_eq!(d.degree(), Some(0));
    }

    #[test]
    fn ladder_annihilates_bottom() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = SpectralFunction::mode(p, 0, 1.0);
        assert!(apply_ladder(&f, 1).is_zero());
        let g = SpectralFunction::mode(p, 1, 1.0);
        assert!(apply_ladder(&g, 2).is_zero());
    }

    #[test]
    fn ladder_matches_finite_differences() {
        // alpha = beta = -1/2 reduces the first-order operator to d/dtheta:
        // phi_1 = sqrt(2/pi) cos(theta) differentiates to -sqrt(2/pi) sin(theta)
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        let quad = Arc::new(build_quadrature(256).unwrap());
        let f = SpectralFunction::mode(p, 1, 1.0);
        let d = synthesize(&apply_ladder(&f, 1), &quad);
        let c = (2.0 / PI).sqrt();
        for (i, &theta) in quad.nodes().iter().enumerate() {
            assert_abs_diff_eq!(d.values[i].re, -c * theta.sin(), epsilon = 1e-10);
            let fd = d_pointwise(p, |t| eval_phi(p, 1, t).unwrap(), theta);
            assert_abs_diff_eq!(d.values[i].re, fd, epsilon = 1e-6);
        }
    }

    #[test]
    fn ladder_adjoint_raises_modes() {
        let base = JacobiParams::new(0.0, 0.0).unwrap();
        let f = SpectralFunction::mode(base.shifted(1), 0, 1.0);
        let raised = apply_ladder_adjoint(&f, base, 1).unwrap();
        // -sqrt((0+1)(0 + alpha+beta+2)) phi_1 = -sqrt(2) phi_1
        assert_abs_diff_eq!(raised.coeff(1).re, -(2.0f64).sqrt(), epsilon = 1e-14);
        assert_eq!(raised.params(), base);
    }

    #[test]
    fn ladder_factorizes_operator() {
        // D* D phi_n = (lambda_n - half_sum^2) phi_n, exactly in the ladder algebra
        let base = JacobiParams::new(1.0, 0.5).unwrap();
        for n in 1..=12 {
            let f = SpectralFunction::mode(base, n, 1.0);
            let df = apply_ladder(&f, 1);
            let ddf = apply_ladder_adjoint(&df, base, 1).unwrap();
            let expected = base.lambda(n) - base.half_sum().powi(2);
            assert_abs_diff_eq!(ddf.coeff(n).re, expected, epsilon = 1e-10 * expected.max(1.0));
        }
    }

    #[test]
    fn d_grid_annihilates_weight_direction() {
        // samples proportional to phi_0 are annihilated by the first-order operator
        let quad = Arc::new(build_quadrature(512).unwrap());
        let p = JacobiParams::new(1.5, 0.5).unwrap();
        let g = GridFunction::from_fn(quad, |t| {
            (0.5 * t).sin().powf(p.alpha() + 0.5) * (0.5 * t).cos().powf(p.beta() + 0.5)
        });
        let d = apply_d_grid(&g, p).unwrap();
        assert!(d.sup_norm() < 1e-8);
    }

    #[test]
    fn d_grid_matches_exact_ladder() {
        // grid differentiation of sampled phi_1 agrees with the synthesized
        // exact ladder image
        let quad = Arc::new(build_quadrature(512).unwrap());
        let p = JacobiParams::new(0.75, 0.25).unwrap();
        let samples = GridFunction::from_fn(quad.clone(), |t| eval_phi(p, 1, t).unwrap());
        let via_grid = apply_d_grid(&samples, p).unwrap();
        let via_ladder = synthesize(&apply_ladder(&SpectralFunction::mode(p, 1, 1.0), 1), &quad);
        assert!(via_grid.max_abs_diff(&via_ladder) < 1e-6);
    }

    #[test]
    fn d_grid_pure_derivative_case() {
        let quad = Arc::new(build_quadrature(512).unwrap());
        let p = JacobiParams::new(-0.5, -0.5).unwrap();
        let g = GridFunction::from_fn(quad.clone(), f64::cos);
        let d = apply_d_grid(&g, p).unwrap();
        for (i, &theta) in quad.nodes().iter().enumerate() {
            assert_abs_diff_eq!(d.values[i].re, -theta.sin(), epsilon = 1e-8);
        }
    }

    #[test]
    fn partial_sum_projects() {
        let quad = Arc::new(build_quadrature(2048).unwrap());
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f2 = GridFunction::from_fn(quad.clone(), |t| eval_phi(p, 2, t).unwrap());
        let s = partial_sum(&f2, p, 5).unwrap();
        assert!(s.max_abs_diff(&f2) < 1e-9);
        let f7 = GridFunction::from_fn(quad.clone(), |t| eval_phi(p, 7, t).unwrap());
        let s = partial_sum(&f7, p, 5).unwrap();
        assert!(s.sup_norm() < 1e-9);
    }

    #[test]
    fn partial_sum_converges_on_smooth_bump() {
        let quad = Arc::new(build_quadrature(2048).unwrap());
        let p = JacobiParams::new(0.5, 0.5).unwrap();
        let bump = GridFunction::from_fn(quad.clone(), |t| {
            crate::smooth::smooth_step((t - 0.5) / 0.9) * crate::smooth::smooth_step((2.9 - t) / 0.9)
        });
        let mut prev = f64::INFINITY;
        for n in [4, 8, 16, 32, 64] {
            let s = partial_sum(&bump, p, n).unwrap();
            let err = s
                .values
                .iter()
                .zip(&bump.values)
                .zip(quad.weights())
                .map(|((a, b), &w)| w * (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err < prev + 1e-12, "L2 error not decreasing at n = {n}");
            prev = err;
        }
        assert!(prev < 1e-4, "final L2 error {prev} too large");
    }

    #[test]
    fn spectral_function_linear_ops_and_canonical_degree() {
        let p = JacobiParams::new(0.0, 0.0).unwrap();
        let f = SpectralFunction::from_real(p, &[1.0, 2.0, 0.0]);
        assert_eq!(f.degree(), Some(1));
        let g = SpectralFunction::from_real(p, &[0.0, -2.0]);
        let sum = f.add(&g);
        assert_eq!(sum.degree(), Some(0));
        assert_abs_diff_eq!(sum.coeff(0).re, 1.0);
        let scaled = f.scale_real(3.0);
        assert_abs_diff_eq!(scaled.coeff(1).re, 6.0);
    }
}
