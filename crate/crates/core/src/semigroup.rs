//! Heat and Poisson semigroups of the Jacobi operator: coefficient actions,
//! kernel matrices, integer and fractional time derivatives, and the
//! subordination bridge from the heat kernel to the Poisson kernel.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::jacobi::{phi_table, JacobiParams, SpectralFunction};
use crate::quad::Quadrature;

/// Public floor for kernel times; below it the series needs too many modes
/// at double precision.
pub const KERNEL_T_MIN: f64 = 1e-3;
/// Hard cap on the number of series modes in kernel assembly.
pub const KERNEL_MAX_MODES: usize = 2000;
/// Internal floor used by the subordination integrand (still within the
/// mode cap).
const SUBORDINATION_U_FLOOR: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Heat,
    Poisson,
}

/// A kernel sampled on the tensor grid `(theta_i, phi_j)` of a quadrature.
#[derive(Debug, Clone)]
pub struct KernelMatrix {
    pub params: JacobiParams,
    pub t: f64,
    pub kind: KernelKind,
    pub values: Array2<f64>,
    /// number of series modes summed (or feeding the subordination integral)
    pub truncation_modes: usize,
    /// recorded bound on the neglected tail of the defining integral/series
    pub tail_bound: f64,
}

impl KernelMatrix {
    pub fn symmetry_deviation(&self) -> f64 {
        let n = self.values.nrows();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                dev = dev.max((self.values[(i, j)] - self.values[(j, i)]).abs());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &KernelMatrix) -> f64 {
        let mut dev = 0.0f64;
        for (a, b) in self.values.iter().zip(other.values.iter()) {
            dev = dev.max((a - b).abs());
        }
        dev
    }
}

/// Heat action: `c_n -> exp(-t lambda_n) c_n`.
pub fn heat_apply(f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "heat action needs t > 0",
        });
    }
    Ok(f.map_modes(|_, lambda| Complex64::new((-t * lambda).exp(), 0.0)))
}

/// Poisson action: `c_n -> exp(-t sqrt(lambda_n)) c_n`.
pub fn poisson_apply(f: &SpectralFunction, t: f64) -> Result<SpectralFunction> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "Poisson action needs t > 0",
        });
    }
    Ok(f.map_modes(|_, lambda| Complex64::new((-t * lambda.sqrt()).exp(), 0.0)))
}

/// `k`-th time derivative of the Poisson extension at time `t`:
/// `c_n -> (-1)^k lambda_n^{k/2} exp(-t sqrt(lambda_n)) c_n`.
pub fn dt_k_poisson(f: &SpectralFunction, t: f64, k: usize) -> Result<SpectralFunction> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "Poisson derivative needs t > 0",
        });
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(f.map_modes(|_, lambda| {
        let r = lambda.sqrt();
        Complex64::new(sign * lambda.powf(k as f64 / 2.0) * (-t * r).exp(), 0.0)
    }))
}

/// Number of modes after which `decay(lambda_n) * max|phi_n|^2 < 1e-14`.
fn truncation_index(
    params: JacobiParams,
    row_max_sq: &[f64],
    decay: impl Fn(f64) -> f64,
) -> Option<usize> {
    for (n, &m2) in row_max_sq.iter().enumerate() {
        let lambda = params.lambda(n);
        if decay(lambda) * m2 < 1e-14 {
            return Some(n);
        }
    }
    None
}

fn row_max_squares(table: &Array2<f64>) -> Vec<f64> {
    (0..table.nrows())
        .map(|n| {
            let m = table.row(n).iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            m * m
        })
        .collect()
}

fn accumulate_rank_one(values: &mut Array2<f64>, row: ndarray::ArrayView1<f64>, wn: f64) {
    let g = values.nrows();
    for i in 0..g {
        let ri = wn * row[i];
        if ri == 0.0 {
            continue;
        }
        for j in 0..g {
            values[(i, j)] += ri * row[j];
        }
    }
}

struct SeriesKernel {
    values: Array2<f64>,
    modes: usize,
}

/// Series assembly for kernels with decay profile `decay(lambda)`, truncated
/// when `decay * max|phi_n|^2 < 1e-14`; the table grows geometrically until
/// the truncation test passes or the cap is hit.
fn series_kernel(
    params: JacobiParams,
    quad: &Quadrature,
    t: f64,
    decay: impl Fn(f64) -> f64,
) -> Result<SeriesKernel> {
    let mut n_cap = 64usize;
    loop {
        let table = phi_table(params, n_cap, quad.nodes());
        let row_max_sq = row_max_squares(&table);
        if let Some(n_trunc) = truncation_index(params, &row_max_sq, &decay) {
            let mut values = Array2::zeros((quad.len(), quad.len()));
            for n in 0..=n_trunc {
                let wn = decay(params.lambda(n));
                if wn != 0.0 {
                    accumulate_rank_one(&mut values, table.row(n), wn);
                }
            }
            return Ok(SeriesKernel {
                values,
                modes: n_trunc + 1,
            });
        }
        if n_cap >= KERNEL_MAX_MODES {
            return Err(Error::KernelTruncation {
                t,
                max_modes: KERNEL_MAX_MODES,
            });
        }
        n_cap = (n_cap * 2).min(KERNEL_MAX_MODES);
    }
}

/// Heat kernel `sum_n exp(-t lambda_n) phi_n(theta) phi_n(phi)` on the grid.
/// Rejects `t` below [`KERNEL_T_MIN`].
pub fn heat_kernel(params: JacobiParams, t: f64, quad: &Quadrature) -> Result<KernelMatrix> {
    if !(t >= KERNEL_T_MIN) {
        return Err(Error::BadTime {
            t,
            reason: "heat kernel needs t >= 1e-3 (series truncation)",
        });
    }
    let sk = series_kernel(params, quad, t, |lambda| (-t * lambda).exp())?;
    Ok(KernelMatrix {
        params,
        t,
        kind: KernelKind::Heat,
        values: sk.values,
        truncation_modes: sk.modes,
        tail_bound: 1e-14,
    })
}

/// Poisson kernel by its own spectral series (reference for the subordinated
/// construction).
pub fn poisson_kernel_series(
    params: JacobiParams,
    t: f64,
    quad: &Quadrature,
) -> Result<KernelMatrix> {
    if !(t >= KERNEL_T_MIN) {
        return Err(Error::BadTime {
            t,
            reason: "Poisson series kernel needs t >= 1e-3",
        });
    }
    let sk = series_kernel(params, quad, t, |lambda| (-t * lambda.sqrt()).exp())?;
    Ok(KernelMatrix {
        params,
        t,
        kind: KernelKind::Poisson,
        values: sk.values,
        truncation_modes: sk.modes,
        tail_bound: 1e-14,
    })
}

/// Poisson kernel through the subordination integral
/// `P_t = t / sqrt(4 pi) int_0^inf exp(-t^2/4u) u^{-3/2} W_u du`,
/// evaluated against heat-kernel values after the substitution `u = t^2/(4v)`:
/// `P_t = pi^{-1/2} int exp(-v) v^{-1/2} W_{t^2/(4v)} dv` on a 400-point
/// composite log grid in `v`. Errors out when the recorded tail bound of the
/// truncated `v`-integral exceeds 1e-10.
pub fn poisson_kernel_subordinated(
    params: JacobiParams,
    t: f64,
    quad: &Quadrature,
) -> Result<KernelMatrix> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "subordination needs t > 0",
        });
    }
    let v_lo = 1e-6 * t * t;
    let v_hi = (1e6 * t * t)
        .min(t * t / (4.0 * SUBORDINATION_U_FLOOR))
        .min(60.0);
    // tail of int_vhi^inf e^{-v} v^{-1/2} |W| dv with |W_u| <= C/sqrt(u), C = 1:
    // substituting back, (2C / (t sqrt(pi))) e^{-vhi}
    let tail = 2.0 / (t * PI.sqrt()) * (-v_hi).exp();
    if tail > 1e-10 {
        return Err(Error::IntegralTail {
            bound: tail,
            allowed: 1e-10,
        });
    }

    // composite Gauss-Legendre in x = ln v, 25 panels x 16 points = 400 nodes
    let (xs, ws) = log_gauss_grid(v_lo.ln(), v_hi.ln(), 25, 16);
    // one phi table shared across all u, sized for the smallest u on the grid
    let u_min = t * t / (4.0 * v_hi);
    let mut n_cap = 64usize;
    let (table, row_max_sq) = loop {
        let table = phi_table(params, n_cap, quad.nodes());
        let row_max_sq = row_max_squares(&table);
        if truncation_index(params, &row_max_sq, |l| (-u_min * l).exp()).is_some()
            || n_cap >= KERNEL_MAX_MODES
        {
            break (table, row_max_sq);
        }
        n_cap = (n_cap * 2).min(KERNEL_MAX_MODES);
    };

    let g = quad.len();
    let mut values = Array2::zeros((g, g));
    let mut max_modes = 0usize;
    for (&x, &w) in xs.iter().zip(&ws) {
        let v = x.exp();
        let u = t * t / (4.0 * v);
        // e^{-v} v^{-1/2} dv = e^{-v} v^{1/2} dx in log coordinates
        let cv = w * (-v).exp() * v.sqrt() / PI.sqrt();
        if cv == 0.0 {
            continue;
        }
        let n_trunc = truncation_index(params, &row_max_sq, |l| (-u * l).exp()).ok_or(
            Error::KernelTruncation {
                t: u,
                max_modes: KERNEL_MAX_MODES,
            },
        )?;
        max_modes = max_modes.max(n_trunc + 1);
        for n in 0..=n_trunc {
            let wn = cv * (-u * params.lambda(n)).exp();
            if wn != 0.0 {
                accumulate_rank_one(&mut values, table.row(n), wn);
            }
        }
    }
    Ok(KernelMatrix {
        params,
        t,
        kind: KernelKind::Poisson,
        values,
        truncation_modes: max_modes,
        tail_bound: tail,
    })
}

/// Composite Gauss–Legendre grid on `[a, b]`.
pub(crate) fn log_gauss_grid(a: f64, b: f64, panels: usize, points: usize) -> (Vec<f64>, Vec<f64>) {
    let q = crate::quad::build_quadrature(points).expect("points >= 2");
    let scale = 1.0 / PI;
    let ref_nodes: Vec<f64> = q.nodes()[..points].iter().map(|&x| x * scale).collect();
    let ref_weights: Vec<f64> = q.weights()[..points].iter().map(|&w| w * scale).collect();
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * points);
    let mut ws = Vec::with_capacity(panels * points);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for (&x, &w) in ref_nodes.iter().zip(&ref_weights) {
            xs.push(lo + width * x);
            ws.push(width * w);
        }
    }
    (xs, ws)
}

/// Spectral fractional time derivative of the Poisson extension:
/// `c_n -> exp(i pi gamma) lambda_n^{gamma/2} exp(-t sqrt(lambda_n)) c_n`.
pub fn fractional_dt_spectral(
    f: &SpectralFunction,
    t: f64,
    gamma: f64,
) -> Result<SpectralFunction> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "fractional derivative needs t > 0",
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "fractional order must be positive",
        });
    }
    let phase = Complex64::new(0.0, PI * gamma).exp();
    Ok(f.map_modes(|_, lambda| {
        if lambda == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            phase * lambda.powf(0.5 * gamma) * (-t * lambda.sqrt()).exp()
        }
    }))
}

/// Fractional derivative of the scalar profile `exp(-a t)` by the defining
/// integral `e^{-i(m-gamma)pi}/Gamma(m-gamma) int_0^inf (d/dt)^m e^{-a(t+s)}
/// s^{m-gamma-1} ds` with `m = ceil(gamma)`; integer orders take the plain
/// derivative. Closed form: `exp(i pi gamma) a^gamma exp(-a t)`.
pub fn fractional_dt_scalar_quadrature(a: f64, gamma: f64, t: f64) -> Result<Complex64> {
    if !(t > 0.0) || !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "scalar fractional derivative needs t > 0 and gamma > 0",
        });
    }
    if !(a > 0.0) {
        // the zero-rate profile is constant in t; every derivative vanishes
        return Ok(Complex64::new(0.0, 0.0));
    }
    if (gamma - gamma.round()).abs() < 1e-12 {
        let k = gamma.round() as usize;
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        return Ok(Complex64::new(
            sign * a.powi(k as i32) * (-a * t).exp(),
            0.0,
        ));
    }
    let m = gamma.ceil() as usize;
    let mu = m as f64 - gamma; // in (0, 1)
    let dm_sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let am = a.powi(m as i32);
    let integrand = |s: f64| dm_sign * am * (-a * (t + s)).exp();

    // s in (0, 1]: remove the s^{mu-1} factor with tau = s^mu
    let q = crate::quad::build_quadrature(64).expect("fixed rule");
    let scale = 1.0 / PI;
    let mut head = 0.0;
    for (&x, &w) in q.nodes().iter().zip(q.weights()) {
        let tau = x * scale;
        let s = tau.powf(1.0 / mu);
        head += w * scale * integrand(s);
    }
    head /= mu;

    // s in (1, S]: log grid, S from the decay of e^{-a(t+s)} s^mu
    let mut s_hi = 1.0f64;
    while (-a * (t + s_hi)).exp() * s_hi.powf(mu) >= 1e-14 && s_hi < 1e8 {
        s_hi *= 2.0;
    }
    let mut tail = 0.0;
    if s_hi > 1.0 {
        let (xs, ws) = log_gauss_grid(0.0f64, s_hi.ln(), 20, 16);
        for (&x, &w) in xs.iter().zip(&ws) {
            let s = x.exp();
            // jacobian s times the weight s^{mu-1}
            tail += w * s.powf(mu) * integrand(s);
        }
    }
    let phase = Complex64::new(0.0, -PI * mu).exp();
    Ok(phase / gamma_fn(mu) * (head + tail))
}

/// Fractional derivative through the defining integral, applied modewise to
/// the Poisson extension of `f` (each mode carries the scalar profile
/// `exp(-t sqrt(lambda_n))`). Mutual oracle for the spectral path.
pub fn fractional_dt_quadrature(
    f: &SpectralFunction,
    t: f64,
    gamma: f64,
) -> Result<SpectralFunction> {
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "fractional derivative needs t > 0",
        });
    }
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "fractional order must be positive",
        });
    }
    let params = f.params();
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (n, &c) in f.coeffs().iter().enumerate() {
        let lambda = params.lambda(n);
        let q = fractional_dt_scalar_quadrature(lambda.sqrt(), gamma, t)?;
        coeffs.push(c * q);
    }
    Ok(SpectralFunction::new(params, coeffs))
}

/// Closed-form Poisson kernel as a double integral against the symmetric
/// product measures with densities `(1-u^2)^{alpha-1/2}`: an independent
/// cross-check route, deliberately restricted to one time and a coarse grid.
/// Needs `alpha, beta > -1/2` (the measures degenerate to point masses at the
/// boundary value).
#[cfg(feature = "closed-kernel")]
pub fn poisson_kernel_closed_form(
    params: JacobiParams,
    t: f64,
    quad: &Quadrature,
    psi_points: usize,
) -> Result<KernelMatrix> {
    use statrs::function::gamma::gamma as gamma_fn;
    let (alpha, beta) = (params.alpha(), params.beta());
    if !(alpha > -0.5 && beta > -0.5) {
        return Err(Error::InvalidArgument(
            "closed-form kernel needs alpha, beta > -1/2".into(),
        ));
    }
    if !(t > 0.0) {
        return Err(Error::BadTime {
            t,
            reason: "closed-form kernel needs t > 0",
        });
    }
    // overall constant: 2^{-alpha-beta-1} / B(alpha+1, beta+1), and the
    // measure normalizations Gamma(a+1) / (sqrt(pi) Gamma(a+1/2))
    let c_ab = 2.0f64.powf(-alpha - beta - 1.0) * gamma_fn(alpha + beta + 2.0)
        / (gamma_fn(alpha + 1.0) * gamma_fn(beta + 1.0));
    let c_pi_a = gamma_fn(alpha + 1.0) / (PI.sqrt() * gamma_fn(alpha + 0.5));
    let c_pi_b = gamma_fn(beta + 1.0) / (PI.sqrt() * gamma_fn(beta + 0.5));
    // substitute u = cos(psi): the density becomes (sin psi)^{2 alpha}
    let rule = crate::quad::build_quadrature(psi_points)?;
    let psi: Vec<(f64, f64, f64)> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &w)| (x.cos(), w * x.sin().powf(2.0 * alpha), w * x.sin().powf(2.0 * beta)))
        .collect();
    let cosh_term = (0.5 * t).cosh() - 1.0;
    let sinh_term = (0.5 * t).sinh();
    let power = alpha + beta + 2.0;
    let g = quad.len();
    let mut values = Array2::zeros((g, g));
    for (i, &ti) in quad.nodes().iter().enumerate() {
        let (si, ci) = ((0.5 * ti).sin(), (0.5 * ti).cos());
        for (j, &tj) in quad.nodes().iter().enumerate() {
            let (sj, cj) = ((0.5 * tj).sin(), (0.5 * tj).cos());
            let ss = si * sj;
            let cc = ci * cj;
            let mut integral = 0.0;
            for &(u, wu, _) in &psi {
                let partial = 1.0 - u * ss;
                let mut inner = 0.0;
                for &(v, _, wv) in &psi {
                    inner += wv / (cosh_term + partial - v * cc).powf(power);
                }
                integral += wu * inner;
            }
            values[(i, j)] = c_ab
                * ss.powf(alpha + 0.5)
                * cc.powf(beta + 0.5)
                * sinh_term
                * c_pi_a
                * c_pi_b
                * integral;
        }
    }
    Ok(KernelMatrix {
        params,
        t,
        kind: KernelKind::Poisson,
        values,
        truncation_modes: 0,
        tail_bound: 0.0,
    })
}

/// Empirical Gaussian-bound sweep for the heat kernel: the smallest `C` with
/// `|W_t(theta, phi)| <= C exp(-c (theta-phi)^2 / t) / sqrt(t)` over the grid,
/// for a fixed decay rate `c`.
pub fn gaussian_bound_constant(
    params: JacobiParams,
    quad: &Quadrature,
    ts: &[f64],
    c: f64,
) -> Result<f64> {
    let mut best = 0.0f64;
    for &t in ts {
        let k = heat_kernel(params, t, quad)?;
        for (i, &ti) in quad.nodes().iter().enumerate() {
            for (j, &tj) in quad.nodes().iter().enumerate() {
                let bound = (-c * (ti - tj) * (ti - tj) / t).exp() / t.sqrt();
                best = best.max(k.values[(i, j)].abs() / bound);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::build_quadrature;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn params(a: f64, b: f64) -> JacobiParams {
        JacobiParams::new(a, b).unwrap()
    }

    #[test]
    fn heat_single_mode() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::mode(p, 3, 1.0);
        let g = heat_apply(&f, 0.5).unwrap();
        assert_abs_diff_eq!(g.coeff(3).re, (-0.5 * p.lambda(3)).exp(), epsilon = 1e-15);
    }

    #[test]
    fn heat_semigroup_law() {
        let p = params(0.5, 0.5);
        let f = SpectralFunction::from_real(p, &[1.0, -0.5, 0.25, 0.7]);
        let a = heat_apply(&heat_apply(&f, 0.3).unwrap(), 0.9).unwrap();
        let b = heat_apply(&f, 1.2).unwrap();
        assert!(a.max_coeff_diff(&b) < 1e-14);
    }

    #[test]
    fn heat_preserves_constants_when_bottom_eigenvalue_vanishes() {
        // alpha = beta = -1/2: lambda_0 = 0, the constant sqrt(pi) phi_0 is fixed
        let p = params(-0.5, -0.5);
        let f = SpectralFunction::mode(p, 0, PI.sqrt());
        let g = heat_apply(&f, 2.0).unwrap();
        assert_abs_diff_eq!(g.coeff(0).re, PI.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn poisson_single_mode_and_law() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::mode(p, 2, 1.0);
        let g = poisson_apply(&f, 0.7).unwrap();
        assert_abs_diff_eq!(
            g.coeff(2).re,
            (-0.7 * p.lambda(2).sqrt()).exp(),
            epsilon = 1e-15
        );
        let h = poisson_apply(&poisson_apply(&f, 0.2).unwrap(), 0.5).unwrap();
        assert!(h.max_coeff_diff(&g) < 1e-14);
    }

    #[test]
    fn dt_k_poisson_cases() {
        let p = params(0.5, 0.5);
        let f = SpectralFunction::from_real(p, &[0.3, 1.0, -2.0]);
        // k = 0 reduces to the Poisson action
        let d0 = dt_k_poisson(&f, 0.4, 0).unwrap();
        assert!(d0.max_coeff_diff(&poisson_apply(&f, 0.4).unwrap()) < 1e-15);
        // k = 2 multiplies by lambda_n e^{-t sqrt(lambda_n)}
        let d2 = dt_k_poisson(&f, 0.4, 2).unwrap();
        let lam = p.lambda(2);
        assert_abs_diff_eq!(
            d2.coeff(2).re,
            -2.0 * lam * (-0.4 * lam.sqrt()).exp(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn dt_poisson_matches_finite_difference() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::from_real(p, &[1.0, 0.5, 0.25]);
        let t = 0.8;
        let h = 1e-4;
        let d1 = dt_k_poisson(&f, t, 1).unwrap();
        let plus = poisson_apply(&f, t + h).unwrap();
        let minus = poisson_apply(&f, t - h).unwrap();
        let fd = plus.sub(&minus).scale_real(1.0 / (2.0 * h));
        assert!(d1.max_coeff_diff(&fd) < 1e-6);
    }

    #[test]
    fn heat_kernel_symmetry_and_spectral_consistency() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(64).unwrap());
        let k = heat_kernel(p, 0.5, &quad).unwrap();
        assert!(k.symmetry_deviation() < 1e-10);
        // int W_t(theta, phi) phi_n(phi) dphi = e^{-t lambda_n} phi_n(theta)
        let table = phi_table(p, 3, quad.nodes());
        for n in [0usize, 3] {
            let expected = (-0.5 * p.lambda(n)).exp();
            for i in 0..quad.len() {
                let mut acc = 0.0;
                for j in 0..quad.len() {
                    acc += quad.weights()[j] * k.values[(i, j)] * table[(n, j)];
                }
                assert_abs_diff_eq!(acc, expected * table[(n, i)], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn heat_kernel_rejects_small_t() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(32).unwrap());
        assert!(heat_kernel(p, 5e-4, &quad).is_err());
    }

    #[test]
    fn gaussian_bound_finite_and_stable() {
        let p = params(0.0, 0.0);
        let c = 0.125;
        let coarse = Arc::new(build_quadrature(24).unwrap());
        let fine = Arc::new(build_quadrature(48).unwrap());
        let ts = [0.01, 0.05, 0.2, 1.0];
        let c1 = gaussian_bound_constant(p, &coarse, &ts, c).unwrap();
        let c2 = gaussian_bound_constant(p, &fine, &ts, c).unwrap();
        assert!(c1.is_finite() && c2.is_finite());
        assert!(
            c2 < 1.5 * c1 + 1.0,
            "constant should be stable: {c1} vs {c2}"
        );
    }

    #[test]
    fn subordination_matches_series_kernel() {
        let quad = Arc::new(build_quadrature(48).unwrap());
        for (a, b) in [(0.0, 0.0), (0.5, 0.5)] {
            let p = params(a, b);
            for t in [0.2, 0.5, 1.0, 2.0] {
                let sub = poisson_kernel_subordinated(p, t, &quad).unwrap();
                let ser = poisson_kernel_series(p, t, &quad).unwrap();
                let dev = sub.max_abs_diff(&ser);
                assert!(dev < 1e-6, "deviation {dev} at t = {t}, ({a}, {b})");
                assert!(sub.symmetry_deviation() < 1e-8);
            }
        }
    }

    #[test]
    fn subordination_large_t_dominated_by_bottom_mode() {
        // the mode gap is sqrt(lambda_1) - sqrt(lambda_0) = 1, so the second
        // term is e^{-t} relative; t = 20 pushes it below 1e-8
        let p = params(0.5, 0.5);
        let quad = Arc::new(build_quadrature(48).unwrap());
        let t = 20.0;
        let sub = poisson_kernel_subordinated(p, t, &quad).unwrap();
        let table = phi_table(p, 0, quad.nodes());
        let amp = (-t * p.lambda(0).sqrt()).exp();
        let mut rel = 0.0f64;
        for i in 0..quad.len() {
            for j in 0..quad.len() {
                let one_term = amp * table[(0, i)] * table[(0, j)];
                if one_term.abs() > 1e-12 {
                    rel = rel.max(((sub.values[(i, j)] - one_term) / one_term).abs());
                }
            }
        }
        assert!(rel < 1e-8, "relative deviation {rel}");
    }

    #[test]
    fn subordination_flags_tiny_t() {
        let p = params(0.0, 0.0);
        let quad = Arc::new(build_quadrature(24).unwrap());
        assert!(matches!(
            poisson_kernel_subordinated(p, 0.02, &quad),
            Err(Error::IntegralTail { .. })
        ));
    }

    #[test]
    fn scalar_fractional_rule() {
        // half-order derivative of e^{-2t} is i sqrt(2) e^{-2t}
        let t = 0.3;
        let got = fractional_dt_scalar_quadrature(2.0, 0.5, t).unwrap();
        let expected = Complex64::new(0.0, (2.0f64).sqrt() * (-2.0 * t).exp());
        assert!(
            (got - expected).norm() < 1e-8,
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn scalar_fractional_sweep() {
        for &a in &[0.5, 2.0, 5.0] {
            for &g in &[0.3, 0.7, 1.5] {
                for &t in &[0.2, 0.6, 1.1] {
                    let got = fractional_dt_scalar_quadrature(a, g, t).unwrap();
                    let expected = Complex64::new(0.0, PI * g).exp() * a.powf(g) * (-a * t).exp();
                    assert!(
                        (got - expected).norm() < 1e-6 * expected.norm().max(1.0),
                        "a={a} gamma={g} t={t}: {got} vs {expected}"
                    );
                }
            }
        }
    }

    #[test]
    fn fractional_integer_order_reduces_to_plain_derivative() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::from_real(p, &[1.0, -0.7, 0.3]);
        let t = 0.5;
        for k in [1usize, 2] {
            let spectral = fractional_dt_spectral(&f, t, k as f64).unwrap();
            let plain = dt_k_poisson(&f, t, k).unwrap();
            assert!(spectral.max_coeff_diff(&plain) < 1e-12);
        }
    }

    #[test]
    fn fractional_paths_agree() {
        let p = params(0.0, 0.0);
        let f = SpectralFunction::mode(p, 3, 1.0);
        let a = fractional_dt_spectral(&f, 0.5, 0.7).unwrap();
        let b = fractional_dt_quadrature(&f, 0.5, 0.7).unwrap();
        assert!(a.max_coeff_diff(&b) < 1e-6);
    }

    #[test]
    fn fractional_composition_law() {
        let p = params(0.5, 0.5);
        let f = SpectralFunction::from_real(p, &[0.2, 1.0, 0.5]);
        let t = 0.9;
        // spectral path: phases and powers multiply exactly, so composing two
        // fractional orders equals one total order on the once-evolved input
        let one =
            fractional_dt_spectral(&fractional_dt_spectral(&f, t, 0.4).unwrap(), t, 0.6).unwrap();
        let total = fractional_dt_spectral(&poisson_apply(&f, t).unwrap(), t, 1.0).unwrap();
        assert!(one.max_coeff_diff(&total) < 1e-12);
        // quadrature path agrees within 1e-6
        let quad_path =
            fractional_dt_quadrature(&fractional_dt_quadrature(&f, t, 0.4).unwrap(), t, 0.6)
                .unwrap();
        assert!(quad_path.max_coeff_diff(&total) < 1e-6);
    }

    #[cfg(feature = "closed-kernel")]
    #[test]
    fn closed_form_kernel_matches_series() {
        let quad = Arc::new(build_quadrature(16).unwrap());
        for (a, b) in [(0.0, 0.0), (0.5, 0.5)] {
            let p = params(a, b);
            let t = 0.5;
            let closed = poisson_kernel_closed_form(p, t, &quad, 512).unwrap();
            let series = poisson_kernel_series(p, t, &quad).unwrap();
            let dev = closed.max_abs_diff(&series);
            assert!(dev < 1e-6, "closed-form deviation {dev} at ({a}, {b})");
        }
    }

    #[test]
    fn fractional_zero_mode_annihilated() {
        let p = params(-0.5, -0.5); // bottom eigenvalue 0
        let f = SpectralFunction::mode(p, 0, 1.0);
        let d = fractional_dt_spectral(&f, 0.5, 0.5).unwrap();
        assert!(d.is_zero());
        let q = fractional_dt_quadrature(&f, 0.5, 0.5).unwrap();
        assert!(q.is_zero());
    }
}
