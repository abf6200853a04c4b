//! The acceptance suite: every criterion the artifact must satisfy, with its
//! tolerance pinned here, runnable as one batch. The CLI selftest and the
//! acceptance test target both drive this module.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jacobi::{
    apply_ladder, coefficients, eval_phi, phi_table, pochhammer, synthesize, JacobiParams,
    SpectralFunction,
};
use crate::multiplier::{
    apply_multiplier, c_gamma_r, neg_power, pochhammer_ratio_check, riesz, riesz_adjoint,
    riesz_inversion,
};
use crate::paley::{
    build_bump, g_fractional, g_function, g_fractional_single_mode_factor, g_single_mode_factor,
    j_max_for, phi_block, phi_block_windowed, TimeGrid,
};
use crate::quad::{build_quadrature, GridFunction};
use crate::semigroup::{
    fractional_dt_quadrature, fractional_dt_scalar_quadrature, fractional_dt_spectral,
    poisson_kernel_series, poisson_kernel_subordinated,
};
use crate::spaces::{verify_theorem1, verify_theorem2, verify_theorem3, HarnessConfig};
use crate::vexp::{
    conjugate_exponent, luxemburg_norm, modular, random_grid_function, ExponentFunction,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CriterionResult {
    pub index: usize,
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CriterionResult {
    fn new(index: usize, name: &str, observed: f64, tolerance: f64, detail: String) -> Self {
        CriterionResult {
            index,
            name: name.to_string(),
            pass: observed <= tolerance,
            observed,
            tolerance,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} [{:2}] {:<28} observed {:.3e}  tolerance {:.3e}  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.index,
            self.name,
            self.observed,
            self.tolerance,
            self.detail
        )
    }
}

/// Suite configuration; `quick` trims orders and suite sizes for a fast smoke
/// run (the full acceptance gate uses the defaults).
#[derive(Debug, Clone)]
pub struct SelfCheckConfig {
    pub quick: bool,
    pub seed: u64,
}

impl Default for SelfCheckConfig {
    fn default() -> Self {
        SelfCheckConfig {
            quick: false,
            seed: 20240901,
        }
    }
}

fn presets() -> Vec<JacobiParams> {
    vec![
        JacobiParams::new(-0.5, -0.5).unwrap(),
        JacobiParams::new(0.0, 0.0).unwrap(),
        JacobiParams::new(0.5, 0.5).unwrap(),
        JacobiParams::new(2.0, 0.5).unwrap(),
    ]
}

/// 1. Orthonormality of the eigenfunctions under the shared grid.
pub fn criterion_orthonormality(cfg: &SelfCheckConfig) -> CriterionResult {
    let order = if cfg.quick { 1024 } else { 4096 };
    let n_max = if cfg.quick { 20 } else { 40 };
    let quad = build_quadrature(order).expect("order");
    let mut worst = 0.0f64;
    for params in presets() {
        let table = phi_table(params, n_max, quad.nodes());
        for n in 0..=n_max {
            for m in n..=n_max {
                let mut acc = 0.0;
                for (i, &w) in quad.weights().iter().enumerate() {
                    acc += w * table[(n, i)] * table[(m, i)];
                }
                let target = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - target).abs());
            }
        }
    }
    CriterionResult::new(
        1,
        "orthonormality",
        worst,
        1e-8,
        format!("n,m <= {n_max}, 4 presets, order {order}"),
    )
}

/// 2. Closed trigonometric forms at the two half-integer presets.
pub fn criterion_closed_forms(_cfg: &SelfCheckConfig) -> CriterionResult {
    let quad = build_quadrature(512).expect("order");
    let c = (2.0 / PI).sqrt();
    let mut worst = 0.0f64;
    let p_minus = JacobiParams::new(-0.5, -0.5).unwrap();
    let p_plus = JacobiParams::new(0.5, 0.5).unwrap();
    for &theta in quad.nodes() {
        let inv_sqrt_pi = 1.0 / PI.sqrt();
        worst = worst.max((eval_phi(p_minus, 0, theta).unwrap() - inv_sqrt_pi).abs());
        for n in 1..=16usize {
            let expected = c * (n as f64 * theta).cos();
            worst = worst.max((eval_phi(p_minus, n, theta).unwrap() - expected).abs());
        }
        for n in 0..=15usize {
            let expected = c * ((n as f64 + 1.0) * theta).sin();
            worst = worst.max((eval_phi(p_plus, n, theta).unwrap() - expected).abs());
        }
    }
    CriterionResult::new(
        2,
        "closed-form-reduction",
        worst,
        1e-10,
        "both half-integer presets, 512 nodes".into(),
    )
}

/// 3. Ladder identity through the quadrature round trip, including the
///    annihilation edge.
pub fn criterion_ladder(cfg: &SelfCheckConfig) -> CriterionResult {
    // the shifted-system weight has a fractional endpoint branch, so the
    // composite rule converges algebraically; 4096 nodes reach 1e-8
    let order = 4096;
    let quad = Arc::new(build_quadrature(order).expect("order"));
    let base = JacobiParams::new(0.5, 0.25).unwrap();
    let l_max = if cfg.quick { 10 } else { 20 };
    let mut worst = 0.0f64;
    for ell in 0..=3usize {
        for l in 0..=l_max {
            // sample the mode, project, ladder, and measure the produced
            // coefficients on the shifted grid against the closed factor;
            // the error is taken relative to the coefficient scale of that
            // (l, ell) pair (the factor grows like l^ell, so an absolute
            // comparison would sit at the f64 conditioning floor)
            let grid = GridFunction::from_fn(quad.clone(), |t| eval_phi(base, l, t).unwrap());
            let spectral = coefficients(&grid, base, l_max).expect("resolution");
            let laddered = apply_ladder(&spectral, ell);
            let resampled = coefficients(&synthesize(&laddered, &quad), base.shifted(ell), l_max)
                .expect("resolution");
            let ab1 = base.alpha() + base.beta() + 1.0;
            let scale = if ell <= l {
                (pochhammer((l - ell) as f64 + 1.0, ell) * pochhammer(l as f64 + ab1, ell))
                    .sqrt()
                    .max(1.0)
            } else {
                1.0
            };
            for m in 0..=l_max {
                let expected = if ell <= l && m == l - ell {
                    let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (pochhammer((l - ell) as f64 + 1.0, ell)
                        * pochhammer(l as f64 + ab1, ell))
                    .sqrt()
                } else {
                    0.0
                };
                worst = worst.max((resampled.coeff(m).re - expected).abs() / scale);
                worst = worst.max(resampled.coeff(m).im.abs() / scale);
            }
        }
    }
    CriterionResult::new(
        3,
        "ladder-identity",
        worst,
        1e-8,
        format!("modes <= {l_max}, orders <= 3, quadrature round trip, scale-relative"),
    )
}

/// 4. Riesz structure: factorization into first-order steps, the double
///    composition coefficients, and the inversion identity.
pub fn criterion_riesz(cfg: &SelfCheckConfig) -> CriterionResult {
    let base = JacobiParams::new(0.25, 0.75).unwrap();
    let ab1 = base.alpha() + base.beta() + 1.0;
    let mut worst_exact = 0.0f64;
    for k in 1..=3usize {
        for l in 0..=12usize {
            let f = SpectralFunction::mode(base, l, 1.0);
            // factorization into first-order transforms
            let direct = riesz(&f, k).unwrap();
            let mut step = f.clone();
            for _ in 0..k {
                step = riesz(&step, 1).unwrap();
            }
            worst_exact = worst_exact.max(direct.max_coeff_diff(&step));
            // adjoint factorization
            let g = SpectralFunction::mode(base.shifted(k), l, 1.0);
            let direct_adj = riesz_adjoint(&g, base, k).unwrap();
            let mut step_adj = g.clone();
            for j in (0..k).rev() {
                step_adj = riesz_adjoint(&step_adj, base.shifted(j), 1).unwrap();
            }
            worst_exact = worst_exact.max(direct_adj.max_coeff_diff(&step_adj));
            // double composition closed coefficients
            let comp = riesz_adjoint(&riesz(&f, k).unwrap(), base, k).unwrap();
            let expected = if l >= k {
                pochhammer((l - k) as f64 + 1.0, k) * pochhammer(l as f64 + ab1, k)
                    / base.lambda(l).powi(k as i32)
            } else {
                0.0
            };
            worst_exact = worst_exact.max((comp.coeff(l).re - expected).abs());
        }
    }
    // sanity for the product form used above
    worst_exact = worst_exact.max(pochhammer_ratio_check(base, 3, 12));

    // inversion identity over a 20-function suite
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst_inv = 0.0f64;
    for k in 1..=3usize {
        let m = riesz_inversion(base, k).unwrap();
        for _ in 0..20 {
            let coeffs: Vec<f64> = (0..=12).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = SpectralFunction::from_real(base, &coeffs);
            let out =
                apply_multiplier(&riesz_adjoint(&riesz(&f, k).unwrap(), base, k).unwrap(), &m)
                    .unwrap();
            let mut truncated = coeffs.clone();
            for c in truncated.iter_mut().take(k) {
                *c = 0.0;
            }
            let expected = SpectralFunction::from_real(base, &truncated);
            worst_inv = worst_inv.max(out.max_coeff_diff(&expected));
        }
    }
    let pass_exact = worst_exact <= 1e-12;
    let mut result = CriterionResult::new(
        4,
        "riesz-structure",
        worst_inv,
        1e-9,
        format!("factorization/composition max dev {worst_exact:.3e} (tol 1e-12)"),
    );
    result.pass = result.pass && pass_exact;
    result
}

/// 5. Subordinated vs series Poisson kernels.
pub fn criterion_subordination(cfg: &SelfCheckConfig) -> CriterionResult {
    let grid = if cfg.quick { 24 } else { 48 };
    let quad = Arc::new(build_quadrature(grid).expect("order"));
    let mut worst = 0.0f64;
    for (a, b) in [(0.0, 0.0), (0.5, 0.5)] {
        let params = JacobiParams::new(a, b).unwrap();
        for t in [0.2, 0.5, 1.0, 2.0] {
            let sub = poisson_kernel_subordinated(params, t, &quad).unwrap();
            let ser = poisson_kernel_series(params, t, &quad).unwrap();
            worst = worst.max(sub.max_abs_diff(&ser));
        }
    }
    CriterionResult::new(
        5,
        "subordination",
        worst,
        1e-6,
        format!("t in {{0.2, 0.5, 1, 2}}, two presets, grid {grid}"),
    )
}

/// 6. Fractional derivative: scalar sweep and path agreement.
pub fn criterion_fractional(_cfg: &SelfCheckConfig) -> CriterionResult {
    let mut worst = 0.0f64;
    for &a in &[0.5, 2.0, 5.0] {
        for &g in &[0.3, 0.7, 1.5] {
            for &t in &[0.2, 0.6, 1.1] {
                let got = fractional_dt_scalar_quadrature(a, g, t).unwrap();
                let expected = Complex64::new(0.0, PI * g).exp() * a.powf(g) * (-a * t).exp();
                worst = worst.max((got - expected).norm() / expected.norm().max(1e-300));
            }
        }
    }
    let params = JacobiParams::new(0.0, 0.0).unwrap();
    for n in 0..=10usize {
        let f = SpectralFunction::mode(params, n, 1.0);
        let s = fractional_dt_spectral(&f, 0.5, 0.7).unwrap();
        let q = fractional_dt_quadrature(&f, 0.5, 0.7).unwrap();
        worst = worst.max(s.max_coeff_diff(&q));
    }
    CriterionResult::new(
        6,
        "fractional-derivative",
        worst,
        1e-6,
        "3x3x3 scalar sweep + modes <= 10 path agreement".into(),
    )
}

/// 7. Square-function isometry constant and single-mode closed forms.
pub fn criterion_g_isometry(cfg: &SelfCheckConfig) -> CriterionResult {
    let order = if cfg.quick { 1024 } else { 2048 };
    let quad = Arc::new(build_quadrature(order).expect("order"));
    let params = JacobiParams::new(0.5, 0.5).unwrap();
    let suite = crate::spaces::TestSuite::build(params, &[16], cfg.seed);
    let mut worst_iso = 0.0f64;
    for gamma in [0.5, 1.0, 1.5] {
        let expected = statrs::function::gamma::gamma(2.0 * gamma) / 4.0f64.powf(gamma);
        for member in &suite.functions {
            let tg = match TimeGrid::for_function(&member.f) {
                Some(tg) => tg,
                None => continue,
            };
            let g = g_fractional(&member.f, gamma, &tg, &quad).unwrap();
            let ratio = g.l2_norm().powi(2) / member.f.l2_norm().powi(2);
            worst_iso = worst_iso.max(((ratio - expected) / expected).abs());
        }
    }
    // single-mode closed forms for the integer-order variant
    let n_max = if cfg.quick { 12 } else { 30 };
    let mut worst_mode = 0.0f64;
    for n in (0..=n_max).step_by(3) {
        let f = SpectralFunction::mode(params, n, 1.0);
        let tg = TimeGrid::for_function(&f).unwrap();
        for (gamma, k) in [(0.5, 1usize), (1.0, 2)] {
            let g = g_function(&f, gamma, k, &tg, &quad).unwrap();
            let factor = g_single_mode_factor(params.lambda(n), gamma, k);
            for (i, &theta) in quad.nodes().iter().enumerate() {
                let expected = factor * eval_phi(params, n, theta).unwrap().abs();
                worst_mode = worst_mode.max((g.values[i].re - expected).abs());
            }
        }
        let gf = g_fractional(&f, 0.75, &TimeGrid::for_function(&f).unwrap(), &quad).unwrap();
        let factor = g_fractional_single_mode_factor(0.75);
        for (i, &theta) in quad.nodes().iter().enumerate() {
            let expected = factor * eval_phi(params, n, theta).unwrap().abs();
            worst_mode = worst_mode.max((gf.values[i].re - expected).abs());
        }
    }
    let pass_modes = worst_mode <= 1e-6;
    let mut result = CriterionResult::new(
        7,
        "g-isometry",
        worst_iso,
        0.01,
        format!("single-mode closed forms max dev {worst_mode:.3e} (tol 1e-6)"),
    );
    result.pass = result.pass && pass_modes;
    result
}

/// 8. Order-exchange relation between the fractional and integer square
///    functions.
pub fn criterion_key_relation(cfg: &SelfCheckConfig) -> CriterionResult {
    let order = if cfg.quick { 512 } else { 1024 };
    let quad = Arc::new(build_quadrature(order).expect("order"));
    let params = JacobiParams::new(0.5, 0.5).unwrap();
    let suite = crate::spaces::TestSuite::build(params, &[16], cfg.seed);
    let mut worst = 0.0f64;
    for (gamma, k) in [(0.5, 1usize), (1.0, 2)] {
        for member in &suite.functions {
            let tg = match TimeGrid::for_function(&member.f) {
                Some(tg) => tg,
                None => continue,
            };
            let lhs = g_fractional(&member.f, k as f64 - gamma, &tg, &quad).unwrap();
            let rhs = g_function(
                &neg_power(&member.f, 0.5 * gamma).unwrap(),
                gamma,
                k,
                &tg,
                &quad,
            )
            .unwrap();
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    CriterionResult::new(
        8,
        "order-exchange",
        worst,
        1e-6,
        "(gamma, k) in {(1/2, 1), (1, 2)} over the suite".into(),
    )
}

/// 9. Fractional-power inversion: exact spectral pair, extrapolated
///    truncation, and the normalizing constants.
pub fn criterion_power_inversion(cfg: &SelfCheckConfig) -> CriterionResult {
    let params = JacobiParams::new(0.5, 0.5).unwrap();
    let report = crate::spaces::verify_theorem_z(params, 0.5, 1, &[8], cfg.seed).unwrap();
    let max_spec = report
        .rows
        .iter()
        .map(|r| r.spectral_residual)
        .fold(0.0f64, f64::max);
    let max_ext = report
        .rows
        .iter()
        .map(|r| r.extrapolated_residual)
        .fold(0.0f64, f64::max);
    let c1 = (c_gamma_r(0.5, 1).unwrap() - 0.28209479177387814).abs();
    let c2 = (c_gamma_r(1.0, 2).unwrap() - 0.7213475204444817).abs();
    let pass_extra = max_spec <= 1e-13 && c1 <= 1e-8 && c2 <= 1e-8;
    let mut result = CriterionResult::new(
        9,
        "power-inversion",
        max_ext,
        1e-4,
        format!("spectral residual {max_spec:.3e}, constant devs {c1:.3e}/{c2:.3e}"),
    );
    result.pass = result.pass && pass_extra;
    result
}

/// 10. Bump conditions, dyadic reconstruction, and the signed reconstruction
///     identity.
pub fn criterion_bump_blocks(cfg: &SelfCheckConfig) -> CriterionResult {
    let bump = build_bump();
    let mut worst = 0.0f64;
    // support
    for &t in &[0.1, 0.49, 0.5, 2.0, 2.5, 10.0] {
        worst = worst.max(bump.eval(t).abs());
    }
    // partition on [1/2, 1]
    for i in 0..=1000 {
        let t = 0.5 + 0.5 * i as f64 / 1000.0;
        worst = worst.max((bump.eval(t) + bump.eval(2.0 * t) - 1.0).abs());
    }
    // positivity on the core interval enters through the detail string
    let mut inf = f64::INFINITY;
    for i in 0..=1000 {
        let t = 0.6 + (5.0 / 3.0 - 0.6) * i as f64 / 1000.0;
        inf = inf.min(bump.eval(t).abs());
    }

    let params = JacobiParams::new(0.5, 0.5).unwrap();
    // reconstruction: active eigenvalues >= 1
    let coeffs: Vec<f64> = (0..=16).map(|n| 1.0 / (1.0 + n as f64)).collect();
    let f = SpectralFunction::from_real(params, &coeffs);
    let mut acc = SpectralFunction::zero(params);
    for j in 1..=j_max_for(&f) {
        acc = acc.add(&phi_block(&f, j, &bump));
    }
    worst = worst.max(acc.max_coeff_diff(&f));

    // signed reconstruction with 10 random sign vectors
    let gamma = 1.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb00);
    let ell = j_max_for(&f) + 1;
    for _ in 0..10 {
        let signs: Vec<f64> = (0..=ell)
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let m = crate::multiplier::sign_window_sum(gamma, signs.clone(), bump);
        let mut lhs = SpectralFunction::zero(params);
        for (j, &s) in signs.iter().enumerate() {
            lhs = lhs.add(
                &phi_block_windowed(&f, j, &bump).scale_real(s * 2.0f64.powf(j as f64 * gamma)),
            );
        }
        let rhs = apply_multiplier(&f, &m)
            .unwrap()
            .map_modes(|_, lambda| Complex64::new((lambda + 1.0).powf(gamma), 0.0));
        worst = worst.max(lhs.max_coeff_diff(&rhs));
    }
    let mut result = CriterionResult::new(
        10,
        "bump-blocks",
        worst,
        1e-12,
        format!("bump infimum on core interval {inf:.3e}"),
    );
    result.pass = result.pass && inf > 0.0;
    result
}

/// 11. Luxemburg layer: constant-exponent reduction, modular at the norm,
///     homogeneity, and the two-sided duality inequality.
pub fn criterion_luxemburg(cfg: &SelfCheckConfig) -> CriterionResult {
    let order = if cfg.quick { 1024 } else { 2048 };
    let quad = Arc::new(build_quadrature(order).expect("order"));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x1e);
    let p2 = ExponentFunction::constant(2.0).unwrap();
    let p25 = ExponentFunction::constant(2.5).unwrap();
    let psin = ExponentFunction::sin_plus_two();
    let mut worst = 0.0f64;
    // constant-exponent reduction over 20 functions
    for _ in 0..20 {
        let f = random_grid_function(&quad, &mut rng);
        for (pe, pv) in [(&p2, 2.0), (&p25, 2.5)] {
            let lux = luxemburg_norm(&f, pe).unwrap();
            let direct = f
                .values
                .iter()
                .zip(f.quad.weights())
                .map(|(v, &w)| w * v.norm().powf(pv))
                .sum::<f64>()
                .powf(1.0 / pv);
            worst = worst.max((lux - direct).abs());
        }
    }
    // modular at the norm (own tolerance 1e-7) and homogeneity
    let mut worst_modular = 0.0f64;
    for _ in 0..10 {
        let f = random_grid_function(&quad, &mut rng);
        let lam = luxemburg_norm(&f, &psin).unwrap();
        if lam > 0.0 {
            worst_modular = worst_modular.max((modular(&f, &psin, lam) - 1.0).abs());
            for c in [0.1, 2.0, 100.0] {
                let scaled = GridFunction::new(
                    quad.clone(),
                    f.values.iter().map(|v| v * c).collect(),
                );
                let got = luxemburg_norm(&scaled, &psin).unwrap();
                worst = worst.max((got - c * lam).abs() / (1.0 + c * lam));
            }
        }
    }
    // Hoelder with constant 2 over 100 pairs
    let mut holder_ok = true;
    let pc = conjugate_exponent(&psin);
    for _ in 0..100 {
        let f = random_grid_function(&quad, &mut rng);
        let g = random_grid_function(&quad, &mut rng);
        let lhs = f.integrate_against(&g).norm();
        let bound = 2.0
            * luxemburg_norm(&f, &psin).unwrap()
            * luxemburg_norm(&g, &pc).unwrap();
        if lhs > bound + 1e-9 {
            holder_ok = false;
        }
    }
    let mut result = CriterionResult::new(
        11,
        "luxemburg-layer",
        worst,
        1e-8,
        format!(
            "modular-at-norm dev {worst_modular:.3e} (tol 1e-7), holder-with-constant-2: {holder_ok}"
        ),
    );
    result.pass = result.pass && holder_ok && worst_modular <= 1e-7;
    result
}

/// 12. Norm-equivalence windows and their stability across suite degree and
///     quadrature order.
pub fn criterion_equivalence_stability(cfg: &SelfCheckConfig) -> Vec<CriterionResult> {
    let params = JacobiParams::new(0.5, 0.5).unwrap();
    let make = |p: ExponentFunction, name: &str| {
        let mut c = HarnessConfig::new(params, p, name);
        c.seed = cfg.seed;
        if cfg.quick {
            c.degrees = vec![8, 16];
            c.orders = vec![1024, 2048];
        }
        c
    };
    let mut out = Vec::new();
    let cases: Vec<(String, crate::error::Result<crate::spaces::TheoremReport>)> = vec![
        (
            "equivalence-sobolev".into(),
            verify_theorem1(&make(ExponentFunction::sin_plus_two(), "sin"), 1),
        ),
        (
            "equivalence-square-fn".into(),
            verify_theorem2(&make(ExponentFunction::constant(2.0).unwrap(), "const:2"), 0.5, 1),
        ),
        (
            "equivalence-blocks".into(),
            verify_theorem3(&make(ExponentFunction::sin_plus_two(), "sin"), 1.0),
        ),
    ];
    for (name, res) in cases {
        match res {
            Ok(report) => {
                let worst_window = report
                    .windows
                    .iter()
                    .map(|w| w.r_max / w.r_min)
                    .fold(0.0f64, f64::max);
                let worst_stab = report
                    .stability
                    .iter()
                    .map(|s| s.rel_change_min.max(s.rel_change_max))
                    .fold(0.0f64, f64::max);
                let mut r = CriterionResult::new(
                    12,
                    &name,
                    worst_window,
                    crate::spaces::RATIO_WINDOW_POLICY,
                    format!(
                        "stability movement {worst_stab:.3e} (tol {}), identities {}",
                        crate::spaces::STABILITY_POLICY,
                        report.identities_pass
                    ),
                );
                r.pass = r.pass
                    && worst_stab < crate::spaces::STABILITY_POLICY
                    && report.identities_pass;
                out.push(r);
            }
            Err(e) => out.push(CriterionResult {
                index: 12,
                name,
                pass: false,
                observed: f64::NAN,
                tolerance: crate::spaces::RATIO_WINDOW_POLICY,
                detail: format!("harness error: {e}"),
            }),
        }
    }
    out
}

/// Runs the whole acceptance suite and returns one result per criterion.
pub fn run_all(cfg: &SelfCheckConfig) -> Vec<CriterionResult> {
    let mut results = vec![
        criterion_orthonormality(cfg),
        criterion_closed_forms(cfg),
        criterion_ladder(cfg),
        criterion_riesz(cfg),
        criterion_subordination(cfg),
        criterion_fractional(cfg),
        criterion_g_isometry(cfg),
        criterion_key_relation(cfg),
        criterion_power_inversion(cfg),
        criterion_bump_blocks(cfg),
        criterion_luxemburg(cfg),
    ];
    results.extend(criterion_equivalence_stability(cfg));
    results
}
