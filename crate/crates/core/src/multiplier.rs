//! Spectral multipliers of the (optionally shifted) Jacobi operator,
//! fractional powers, higher-order Riesz transforms and their adjoints, and
//! the concrete multiplier library used by the verification harness.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jacobi::{pochhammer, JacobiParams, SpectralFunction};
use crate::paley::Bump;
use crate::smooth::smooth_transition;

/// A scalar symbol `m` on `(0, inf)`, applied coefficientwise at the shifted
/// eigenvalues `lambda_n - a`. The shift must stay below the bottom
/// eigenvalue.
#[derive(Clone)]
pub struct MultiplierSpec {
    pub name: String,
    pub shift: f64,
    eval: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("name", &self.name)
            .field("shift", &self.shift)
            .finish()
    }
}

impl MultiplierSpec {
    pub fn new(
        name: impl Into<String>,
        shift: f64,
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            shift,
            eval: Arc::new(eval),
        }
    }

    pub fn new_real(
        name: impl Into<String>,
        shift: f64,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, shift, move |x| Complex64::new(eval(x), 0.0))
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.eval)(x)
    }

    /// Pointwise product symbol (shifts must agree).
    pub fn product(&self, other: &MultiplierSpec) -> MultiplierSpec {
        assert_eq!(
            self.shift, other.shift,
            "cannot multiply symbols with different shifts"
        );
        let a = self.eval.clone();
        let b = other.eval.clone();
        MultiplierSpec::new(format!("{}*{}", self.name, other.name), self.shift, move |x| {
            a(x) * b(x)
        })
    }
}

/// Applies the multiplier: `c_n -> m(lambda_n - a) c_n`. Errors when the
/// shift is inadmissible or the symbol is unbounded on the active spectrum.
pub fn apply_multiplier(f: &SpectralFunction, m: &MultiplierSpec) -> Result<SpectralFunction> {
    let limit = f.params().half_sum().powi(2);
    if m.shift >= limit {
        return Err(Error::ShiftInadmissible {
            a: m.shift,
            limit,
        });
    }
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (n, &c) in f.coeffs().iter().enumerate() {
        let x = f.params().lambda(n) - m.shift;
        let v = m.eval(x);
        if c.norm_sqr() > 0.0 && !v.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "multiplier '{}' unbounded at shifted eigenvalue {x}",
                m.name
            )));
        }
        coeffs.push(if v.is_finite() { c * v } else { Complex64::new(0.0, 0.0) });
    }
    Ok(SpectralFunction::new(f.params(), coeffs))
}

/// Negative power: `c_n -> lambda_n^{-gamma} c_n`. Needs `alpha + beta != -1`
/// so the bottom eigenvalue is invertible.
pub fn neg_power(f: &SpectralFunction, gamma: f64) -> Result<SpectralFunction> {
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "negative power needs gamma > 0",
        });
    }
    f.params().require_fractional_ok()?;
    Ok(f.map_modes(|_, lambda| Complex64::new(lambda.powf(-gamma), 0.0)))
}

/// Positive power by the spectral shortcut: `c_n -> lambda_n^gamma c_n`
/// (the truncated-integral construction below converges to it).
pub fn pos_power(f: &SpectralFunction, gamma: f64) -> Result<SpectralFunction> {
    if !(gamma > 0.0) {
        return Err(Error::BadGamma {
            gamma,
            reason: "positive power needs gamma > 0",
        });
    }
    Ok(f.map_modes(|_, lambda| {
        if lambda == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(lambda.powf(gamma), 0.0)
        }
    }))
}

/// `int_lo^inf (1 - e^{-u})^r u^{-gamma-1} du` to relative accuracy ~1e-10.
/// The head on `(lo, 1]` removes the `u^{r-gamma-1}` factor by substitution,
/// the window `[1, 40]` is a composite log Gauss rule, and the tail beyond 40
/// is the analytic power integral (the exponential correction there is below
/// 1e-17 relative).
pub fn bracket_integral(lo: f64, gamma: f64, r: usize) -> Result<f64> {
    if !(gamma > 0.0) || gamma >= r as f64 {
        return Err(Error::GammaOrder { gamma, r });
    }
    if lo < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "lower integration limit {lo} must be nonnegative"
        )));
    }
    const CUT: f64 = 40.0;
    if lo >= CUT {
        return Ok(lo.powf(-gamma) / gamma);
    }
    // ((1 - e^{-u}) / u)^r, stable for small u (limit 1 at u = 0, which the
    // substitution below can underflow to)
    let g = move |u: f64| {
        if u == 0.0 {
            1.0
        } else {
            ((-(-u).exp_m1()) / u).powf(r as f64)
        }
    };
    let mut total = 0.0;
    if lo < 1.0 {
        let mu = r as f64 - gamma;
        let q = crate::quad::build_quadrature(64).expect("fixed rule");
        let scale = 1.0 / PI;
        let tau_lo = lo.powf(mu);
        let mut head = 0.0;
        for (&x, &w) in q.nodes().iter().zip(q.weights()) {
            let tau = tau_lo + (1.0 - tau_lo) * x * scale;
            let u = tau.powf(1.0 / mu);
            head += w * scale * (1.0 - tau_lo) * g(u);
        }
        total += head / mu;
    }
    let mid_lo = lo.max(1.0);
    let (xs, ws) = crate::semigroup::log_gauss_grid(mid_lo.ln(), CUT.ln(), 10, 16);
    for (&x, &w) in xs.iter().zip(&ws) {
        let u = x.exp();
        total += w * u * (-(-u).exp_m1()).powf(r as f64) * u.powf(-gamma - 1.0);
    }
    total += CUT.powf(-gamma) / gamma;
    Ok(total)
}

/// Normalizing constant of the truncated-integral power construction:
/// the reciprocal of [`bracket_integral`] from 0.
pub fn c_gamma_r(gamma: f64, r: usize) -> Result<f64> {
    Ok(1.0 / bracket_integral(0.0, gamma, r)?)
}

/// Truncated-integral approximation to the positive power:
/// `c_n -> C_{gamma,r} * (int_{eps lambda_n}^inf (1-e^{-u})^r u^{-gamma-1} du)
/// * lambda_n^gamma * c_n`. Converges to [`pos_power`] as `eps -> 0`.
pub fn i_eps(f: &SpectralFunction, gamma: f64, r: usize, eps: f64) -> Result<SpectralFunction> {
    if !(gamma > 0.0) || gamma >= r as f64 {
        return Err(Error::GammaOrder { gamma, r });
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "truncation eps = {eps} must be positive"
        )));
    }
    let c = c_gamma_r(gamma, r)?;
    let params = f.params();
    let mut coeffs = Vec::with_capacity(f.coeffs().len());
    for (n, &cf) in f.coeffs().iter().enumerate() {
        let lambda = params.lambda(n);
        let factor = if lambda == 0.0 {
            0.0
        } else {
            c * bracket_integral(eps * lambda, gamma, r)? * lambda.powf(gamma)
        };
        coeffs.push(cf * factor);
    }
    Ok(SpectralFunction::new(params, coeffs))
}

/// Richardson extrapolation of [`i_eps`] in the known leading order
/// `eps^{r-gamma}` from the pair `(eps, eps/10)`.
pub fn i_eps_extrapolated(
    f: &SpectralFunction,
    gamma: f64,
    r: usize,
    eps: f64,
) -> Result<SpectralFunction> {
    let coarse = i_eps(f, gamma, r, eps)?;
    let fine = i_eps(f, gamma, r, eps / 10.0)?;
    let q = 0.1f64.powf(r as f64 - gamma);
    // I(eps) = I0 + c eps^{r-gamma}: eliminate the leading term
    Ok(fine.sub(&coarse.scale_real(q)).scale_real(1.0 / (1.0 - q)))
}

/// Higher-order Riesz transform: mode `l` of the `(alpha, beta)` system maps
/// to mode `l - k` of the `(alpha+k, beta+k)` system with factor
/// `(-1)^k sqrt((l-k+1)_k (l+alpha+beta+1)_k / lambda_l^k)`; modes below `k`
/// vanish.
pub fn riesz(f: &SpectralFunction, k: usize) -> Result<SpectralFunction> {
    if k == 0 {
        return Err(Error::InvalidArgument("Riesz order must be >= 1".into()));
    }
    f.params().require_fractional_ok()?;
    let params = f.params();
    let target = params.shifted(k);
    let deg = match f.degree() {
        Some(d) if d >= k => d,
        _ => return Ok(SpectralFunction::zero(target)),
    };
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let ab1 = params.alpha() + params.beta() + 1.0;
    let coeffs = (k..=deg)
        .map(|l| {
            let num = pochhammer((l - k) as f64 + 1.0, k) * pochhammer(l as f64 + ab1, k);
            let factor = sign * (num / params.lambda(l).powi(k as i32)).sqrt();
            f.coeff(l) * factor
        })
        .collect();
    Ok(SpectralFunction::new(target, coeffs))
}

/// Adjoint Riesz transform: takes an `(alpha+k, beta+k)` expansion back to
/// `(alpha, beta)`, raising modes; one first-order step maps mode `m` to
/// `m + 1` with factor `-sqrt((m+1)(m + alpha+beta+2) / lambda_{m+1})`.
pub fn riesz_adjoint(
    f: &SpectralFunction,
    base: JacobiParams,
    k: usize,
) -> Result<SpectralFunction> {
    if k == 0 {
        return Err(Error::InvalidArgument("Riesz order must be >= 1".into()));
    }
    base.require_fractional_ok()?;
    let expected = base.shifted(k);
    if (f.params().alpha() - expected.alpha()).abs() > 1e-12
        || (f.params().beta() - expected.beta()).abs() > 1e-12
    {
        return Err(Error::InvalidArgument(format!(
            "adjoint of order {k} expects the ({}, {}) system, got ({}, {})",
            expected.alpha(),
            expected.beta(),
            f.params().alpha(),
            f.params().beta()
        )));
    }
    let mut g = f.clone();
    for step in (0..k).rev() {
        let lower = base.shifted(step);
        let ab1 = lower.alpha() + lower.beta() + 1.0;
        let deg = match g.degree() {
            Some(d) => d,
            None => return Ok(SpectralFunction::zero(base)),
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 2];
        for m in 0..=deg {
            let mf = m as f64;
            let factor = -((mf + 1.0) * (mf + ab1 + 1.0) / lower.lambda(m + 1)).sqrt();
            coeffs[m + 1] = g.coeff(m) * factor;
        }
        g = SpectralFunction::new(lower, coeffs);
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// multiplier library
// ---------------------------------------------------------------------------

/// Imaginary power symbol `x^{i gamma}` (unit modulus on the spectrum).
pub fn imaginary_power(gamma: f64) -> MultiplierSpec {
    MultiplierSpec::new("imaginary_power", 0.0, move |x| {
        Complex64::new(0.0, gamma * x.ln()).exp()
    })
}

/// Shifted negative-power symbol `(x + a)^{-gamma}` used with shift `a`.
pub fn shifted_neg_power(a: f64, gamma: f64) -> MultiplierSpec {
    MultiplierSpec::new_real("shifted_neg_power", a, move |x| (x + a).powf(-gamma))
}

/// Symbol inverting the double Riesz composition above mode `k`: the rational
/// part `x^k / prod_{j<k}(x - lambda_j)` times a smooth cutoff that vanishes
/// on `[0, lambda_{k-1} + (alpha+beta+1)/8]` and is 1 from
/// `lambda_k - (alpha+beta+1)/8` on. Evaluated at eigenvalues it sits on the
/// plateaus, so the bridge shape never enters.
pub fn riesz_inversion(params: JacobiParams, k: usize) -> Result<MultiplierSpec> {
    if k == 0 {
        return Err(Error::InvalidArgument("Riesz order must be >= 1".into()));
    }
    params.require_fractional_ok()?;
    let delta = (params.alpha() + params.beta() + 1.0) / 8.0;
    let lo = params.lambda(k - 1) + delta;
    let hi = params.lambda(k) - delta;
    let poles: Vec<f64> = (0..k).map(|j| params.lambda(j)).collect();
    Ok(MultiplierSpec::new_real("riesz_inversion", 0.0, move |x| {
        let cutoff = smooth_transition(x, lo, hi);
        if cutoff == 0.0 {
            return 0.0;
        }
        let mut denom = 1.0;
        for &p in &poles {
            denom *= x - p;
        }
        cutoff * x.powi(poles.len() as i32) / denom
    }))
}

/// `(1 - e^{-eps x})^r`.
pub fn y_eps(eps: f64, r: usize) -> MultiplierSpec {
    MultiplierSpec::new_real("Y", 0.0, move |x| {
        (-(-eps * x).exp_m1()).powf(r as f64)
    })
}

/// `(1 - e^{-eps x})^r / (eps x)^{gamma/2}`.
pub fn m_eps(eps: f64, r: usize, gamma: f64) -> MultiplierSpec {
    MultiplierSpec::new_real("Meps", 0.0, move |x| {
        let u = eps * x;
        (-(-u).exp_m1()).powf(r as f64) / u.powf(0.5 * gamma)
    })
}

/// `int_{eps x}^inf (1 - e^{-u})^r u^{-1-gamma} du`.
pub fn h_eps(eps: f64, r: usize, gamma: f64) -> Result<MultiplierSpec> {
    // validate the order pair once up front
    bracket_integral(1.0, gamma, r)?;
    Ok(MultiplierSpec::new_real("Heps", 0.0, move |x| {
        bracket_integral(eps * x, gamma, r).expect("validated order pair")
    }))
}

/// Signed dyadic window sum `sum_j signs[j] 2^{j gamma} (x+1)^{-gamma}
/// a(x / 2^{j-1})` over `j = 0..=ell` (`ell + 1` signs).
pub fn sign_window_sum(gamma: f64, signs: Vec<f64>, bump: Bump) -> MultiplierSpec {
    MultiplierSpec::new_real("meps_ell", 0.0, move |x| {
        let mut acc = 0.0;
        for (j, &s) in signs.iter().enumerate() {
            let scale = 2.0f64.powi(j as i32 - 1);
            acc += s * 2.0f64.powf(j as f64 * gamma) * bump.eval(x / scale);
        }
        acc / (x + 1.0).powf(gamma)
    })
}

/// All-ones dyadic window sum (`M_ell`).
pub fn window_sum(gamma: f64, ell: usize, bump: Bump) -> MultiplierSpec {
    let mut m = sign_window_sum(gamma, vec![1.0; ell + 1], bump);
    m.name = "M_ell".into();
    m
}

/// Cutoff-over-window-sum symbol (`R_ell`): the Lemma-style cutoff that is 0
/// below half the bottom eigenvalue and 1 from the bottom eigenvalue on,
/// divided by the all-ones window sum. Defined where the windows cover the
/// spectrum; evaluates to 0 where the cutoff vanishes.
pub fn window_sum_reciprocal(
    params: JacobiParams,
    gamma: f64,
    ell: usize,
    bump: Bump,
) -> Result<MultiplierSpec> {
    params.require_fractional_ok()?;
    let lambda0 = params.lambda(0);
    let msum = window_sum(gamma, ell, bump);
    Ok(MultiplierSpec::new_real("R_ell", 0.0, move |x| {
        let cutoff = smooth_transition(x, 0.5 * lambda0, lambda0);
        if cutoff == 0.0 {
            return 0.0;
        }
        let denom = msum.eval(x).re;
        if denom == 0.0 {
            0.0
        } else {
            cutoff / denom
        }
    }))
}

/// `(x / (x+1))^gamma`.
pub fn frac_ratio(gamma: f64) -> MultiplierSpec {
    MultiplierSpec::new_real("Rfrac", 0.0, move |x| (x / (x + 1.0)).powf(gamma))
}

/// `((x+1) / x)^gamma` times the bottom-eigenvalue cutoff; inverse of
/// [`frac_ratio`] on the spectrum.
pub fn inverse_frac_ratio(params: JacobiParams, gamma: f64) -> Result<MultiplierSpec> {
    params.require_fractional_ok()?;
    let lambda0 = params.lambda(0);
    Ok(MultiplierSpec::new_real("M_lemma", 0.0, move |x| {
        let cutoff = smooth_transition(x, 0.5 * lambda0, lambda0);
        if cutoff == 0.0 {
            0.0
        } else {
            cutoff * ((x + 1.0) / x).powf(gamma)
        }
    }))
}

/// Cross-check of the double-composition numerator against its eigenvalue
/// product form: `(n-k+1)_k (n+alpha+beta+1)_k = prod_{j<k} (lambda_n -
/// lambda_j)` (the two square-root factorizations of the rising factorials).
/// Returns the worst relative deviation over `k <= k_max`, `n <= n_max`.
pub fn pochhammer_ratio_check(params: JacobiParams, k_max: usize, n_max: usize) -> f64 {
    let ab1 = params.alpha() + params.beta() + 1.0;
    let mut worst = 0.0f64;
    for k in 1..=k_max {
        for n in k..=n_max {
            let a = pochhammer((n - k) as f64 + 1.0, k) * pochhammer(n as f64 + ab1, k);
            let mut b = 1.0;
            for j in 0..k {
                b *= params.lambda(n) - params.lambda(j);
            }
            worst = worst.max((a - b).abs() / b.abs().max(1.0));
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// smoothness diagnostics
// ---------------------------------------------------------------------------

/// Finite-difference weights for the `m`-th derivative at `z` on the stencil
/// `xs` (Fornberg's recursion). Returns weights for orders `0..=m`.
fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Empirical sups of `|x^l d^l m / dx^l|` for `l <= ell_max` over a log grid
/// on `[1e-4, 1e6]`, derivatives by 9-point central differences with relative
/// step 1e-2.
pub fn mihlin_check(m: &MultiplierSpec, ell_max: usize) -> Vec<f64> {
    let grid: Vec<f64> = (0..=240)
        .map(|i| 1e-4 * 10f64.powf(10.0 * i as f64 / 240.0))
        .collect();
    let mut sups = vec![0.0f64; ell_max + 1];
    for &x in &grid {
        let h = 1e-2 * x;
        let xs: Vec<f64> = (-4..=4).map(|j| x + j as f64 * h).collect();
        let vals: Vec<Complex64> = xs.iter().map(|&xx| m.eval(xx)).collect();
        let weights = fd_weights(x, &xs, ell_max.min(8));
        for (ell, sup) in sups.iter_mut().enumerate() {
            let d = if ell == 0 {
                m.eval(x)
            } else {
                let mut acc = Complex64::new(0.0, 0.0);
                for (wi, v) in weights[ell].iter().zip(&vals) {
                    acc += v * *wi;
                }
                acc
            };
            *sup = sup.max(x.powi(ell as i32) * d.norm());
        }
    }
    sups
}
