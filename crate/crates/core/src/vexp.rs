//! Variable-exponent Lebesgue machinery on `(0, pi)`: exponent presets,
//! the modular and the Luxemburg norm, conjugate exponents, a log-regularity
//! diagnostic, the centered maximal operator, and weighted norms.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quad::GridFunction;

/// Closed presets for variable exponents, kept declarative so they can be
/// named in configs.
#[derive(Debug, Clone, PartialEq)]
pub enum ExponentKind {
    Constant(f64),
    /// `left` on `(0, split)`, `right` on `(split, pi)`.
    TwoValued { split: f64, left: f64, right: f64 },
    /// `2 + sin(theta)`.
    SinPlusTwo,
    /// `2.5 + theta / pi`.
    LinearRamp,
    /// `2 + 1 / ln(e + 1/theta)`; log-regular but not Lipschitz at 0.
    LogSmoothed,
    /// Pointwise conjugate of another preset.
    Conjugate(Box<ExponentKind>),
}

/// A variable exponent `p(.)` on `(0, pi)` with `1 < p_- <= p(.) <= p_+ < inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFunction {
    kind: ExponentKind,
    p_minus: f64,
    p_plus: f64,
}

fn kind_eval(kind: &ExponentKind, theta: f64) -> f64 {
    match kind {
        ExponentKind::Constant(p) => *p,
        ExponentKind::TwoValued { split, left, right } => {
            if theta < *split {
                *left
            } else {
                *right
            }
        }
        ExponentKind::SinPlusTwo => 2.0 + theta.sin(),
        ExponentKind::LinearRamp => 2.5 + theta / PI,
        ExponentKind::LogSmoothed => 2.0 + 1.0 / (std::f64::consts::E + 1.0 / theta).ln(),
        ExponentKind::Conjugate(inner) => {
            let p = kind_eval(inner, theta);
            p / (p - 1.0)
        }
    }
}

fn kind_range(kind: &ExponentKind) -> (f64, f64) {
    match kind {
        ExponentKind::Constant(p) => (*p, *p),
        ExponentKind::TwoValued { left, right, .. } => (left.min(*right), left.max(*right)),
        ExponentKind::SinPlusTwo => (2.0, 3.0),
        ExponentKind::LinearRamp => (2.5, 3.5),
        ExponentKind::LogSmoothed => (2.0, 2.0 + 1.0 / (std::f64::consts::E + 1.0 / PI).ln()),
        ExponentKind::Conjugate(inner) => {
            let (lo, hi) = kind_range(inner);
            (hi / (hi - 1.0), lo / (lo - 1.0))
        }
    }
}

impl ExponentFunction {
    pub fn new(kind: ExponentKind) -> Result<Self> {
        let (p_minus, p_plus) = kind_range(&kind);
        if !(p_minus > 1.0) || !p_plus.is_finite() {
            return Err(Error::InvalidExponent(format!(
                "exponent range [{p_minus}, {p_plus}] outside (1, inf)"
            )));
        }
        let f = Self {
            kind,
            p_minus,
            p_plus,
        };
        f.validate_range_by_sampling()?;
        Ok(f)
    }

    pub fn constant(p: f64) -> Result<Self> {
        Self::new(ExponentKind::Constant(p))
    }

    pub fn two_valued(split: f64, left: f64, right: f64) -> Result<Self> {
        if !(split > 0.0 && split < PI) {
            return Err(Error::InvalidExponent(format!(
                "two-valued split {split} outside (0, pi)"
            )));
        }
        Self::new(ExponentKind::TwoValued { split, left, right })
    }

    pub fn sin_plus_two() -> Self {
        Self::new(ExponentKind::SinPlusTwo).expect("preset is valid")
    }

    pub fn linear_ramp() -> Self {
        Self::new(ExponentKind::LinearRamp).expect("preset is valid")
    }

    pub fn log_smoothed() -> Self {
        Self::new(ExponentKind::LogSmoothed).expect("preset is valid")
    }

    pub fn eval(&self, theta: f64) -> f64 {
        kind_eval(&self.kind, theta)
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn kind(&self) -> &ExponentKind {
        &self.kind
    }

    pub fn is_constant(&self) -> Option<f64> {
        match &self.kind {
            ExponentKind::Constant(p) => Some(*p),
            ExponentKind::Conjugate(inner) => match inner.as_ref() {
                ExponentKind::Constant(p) => Some(p / (p - 1.0)),
                _ => None,
            },
            _ => None,
        }
    }

    fn validate_range_by_sampling(&self) -> Result<()> {
        let m = 20_000;
        for i in 1..m {
            let theta = PI * i as f64 / m as f64;
            let p = self.eval(theta);
            if p < self.p_minus - 1e-6 || p > self.p_plus + 1e-6 {
                return Err(Error::InvalidExponent(format!(
                    "sampled p({theta}) = {p} outside [{}, {}]",
                    self.p_minus, self.p_plus
                )));
            }
        }
        Ok(())
    }
}

/// Pointwise conjugate exponent: `1/p + 1/p' = 1`.
pub fn conjugate_exponent(p: &ExponentFunction) -> ExponentFunction {
    let kind = match p.kind() {
        // unwrap double conjugation so p'' reduces to p structurally
        ExponentKind::Conjugate(inner) => inner.as_ref().clone(),
        other => ExponentKind::Conjugate(Box::new(other.clone())),
    };
    ExponentFunction::new(kind).expect("conjugate of a valid exponent is valid")
}

/// Value of the modular `int_0^pi (|f| / lambda)^{p(theta)} dtheta`.
pub fn modular(f: &GridFunction, p: &ExponentFunction, lambda: f64) -> f64 {
    assert!(lambda > 0.0, "modular requires lambda > 0");
    f.values
        .iter()
        .zip(f.quad.nodes())
        .zip(f.quad.weights())
        .map(|((v, &theta), &w)| {
            let amp = v.norm();
            if amp == 0.0 {
                0.0
            } else {
                w * (amp / lambda).powf(p.eval(theta))
            }
        })
        .sum()
}

/// Snapshot of a modular evaluation, produced alongside the Luxemburg norm.
#[derive(Debug, Clone, Copy)]
pub struct ModularReport {
    pub lambda: f64,
    pub modular_value: f64,
}

/// Luxemburg norm: the infimum of `lambda > 0` with modular at most 1,
/// located by bisection over the monotone modular. Returns 0 for the zero
/// function; otherwise the returned `lambda` satisfies `modular = 1` within
/// 1e-8.
pub fn luxemburg_norm(f: &GridFunction, p: &ExponentFunction) -> Result<f64> {
    let sup = f.sup_norm();
    if sup == 0.0 {
        return Ok(0.0);
    }
    // heuristic starting brackets from the constant-exponent bounds
    let pm = p.p_minus();
    let mut lo = sup * (PI.powf(-1.0 / pm)).min(1.0) / 10.0;
    let mut hi = sup * (PI.powf(1.0 / pm)).max(1.0) * 10.0;
    // expand if the heuristic fails to bracket (concentrated functions)
    let mut guard = 0;
    while modular(f, p, lo) < 1.0 {
        lo /= 16.0;
        guard += 1;
        if guard > 400 {
            // modular < 1 for arbitrarily small lambda: the infimum is 0
            return Ok(0.0);
        }
    }
    guard = 0;
    while modular(f, p, hi) > 1.0 {
        hi *= 16.0;
        guard += 1;
        if guard > 400 {
            return Err(Error::LuxemburgNoConvergence { lo, hi });
        }
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let m = modular(f, p, mid);
        if (m - 1.0).abs() <= 1e-9 {
            return Ok(mid);
        }
        if m > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= 1e-15 * hi {
            break;
        }
    }
    let m = modular(f, p, mid);
    if (m - 1.0).abs() <= 1e-8 {
        Ok(mid)
    } else {
        Err(Error::LuxemburgNoConvergence { lo, hi })
    }
}

/// Modular value at the computed norm, for duality diagnostics.
pub fn modular_at_norm(f: &GridFunction, p: &ExponentFunction) -> Result<ModularReport> {
    let lambda = luxemburg_norm(f, p)?;
    let modular_value = if lambda > 0.0 { modular(f, p, lambda) } else { 0.0 };
    Ok(ModularReport {
        lambda,
        modular_value,
    })
}

/// Outcome of the empirical log-regularity sweep: the modulus constant if the
/// banded sups stay bounded, or a violation report when they grow with
/// `-log |x - y|`.
#[derive(Debug, Clone)]
pub enum LogHolderReport {
    Bounded {
        constant: f64,
    },
    Violation {
        constant_at_coarse: f64,
        constant_at_fine: f64,
        growth_ratio: f64,
    },
}

/// Empirical sup of `|p(x) - p(y)| * (-log |x - y|)` over sampled pairs with
/// `|x - y| <= 1/2`, banded by pair distance. A bounded sweep is a
/// sufficient-condition certificate only.
pub fn log_holder_check(p: &ExponentFunction, samples: usize) -> LogHolderReport {
    let samples = samples.max(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    // candidate jump locations from a coarse gradient scan, refined by
    // bisection so the straddling pairs below really bracket the steep point
    let scan = 4096;
    let mut jumps: Vec<(f64, f64, f64)> = Vec::new();
    for i in 1..scan {
        let a = PI * i as f64 / scan as f64;
        let b = PI * (i + 1) as f64 / scan as f64;
        let d = (p.eval(b) - p.eval(a)).abs();
        jumps.push((d, a, b));
    }
    jumps.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let centers: Vec<f64> = jumps
        .iter()
        .take(8)
        .map(|&(_, mut a, mut b)| {
            let pa = p.eval(a);
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if (p.eval(mid) - pa).abs() < (p.eval(mid) - p.eval(b)).abs() {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect();

    let bands: Vec<i32> = (2..=40).collect();
    let per_band = (samples / bands.len()).max(50);
    let mut band_sup = vec![0.0f64; bands.len()];
    for (bi, &k) in bands.iter().enumerate() {
        let d = 0.5f64.powi(k);
        let log_factor = -(d.ln());
        let mut sup = 0.0f64;
        // seeded uniform pairs at distance d
        for _ in 0..per_band {
            let x = rng.gen_range(d..PI - d);
            let diff = (p.eval(x + d * 0.5) - p.eval(x - d * 0.5)).abs();
            sup = sup.max(diff * log_factor);
        }
        // pairs straddling the steepest points
        for &c in &centers {
            let (x, y) = (c - 0.5 * d, c + 0.5 * d);
            if x > 0.0 && y < PI {
                let diff = (p.eval(y) - p.eval(x)).abs();
                sup = sup.max(diff * log_factor);
            }
        }
        band_sup[bi] = sup;
    }
    let coarse = band_sup[..4].iter().fold(0.0f64, |a, &b| a.max(b));
    let fine = band_sup[band_sup.len() - 4..]
        .iter()
        .fold(0.0f64, |a, &b| a.max(b));
    let constant = band_sup.iter().fold(0.0f64, |a, &b| a.max(b));
    if fine > 4.0 * coarse.max(1e-12) && fine == constant {
        LogHolderReport::Violation {
            constant_at_coarse: coarse,
            constant_at_fine: fine,
            growth_ratio: fine / coarse.max(1e-300),
        }
    } else {
        LogHolderReport::Bounded { constant }
    }
}

/// Centered Hardy–Littlewood maximal operator, discretized as the sup of
/// quadrature averages of `|f|` over windows `(theta_i - r, theta_i + r)`
/// for a 40-radius geometric ladder from half the minimal node gap to `pi`.
pub fn maximal_operator(f: &GridFunction) -> GridFunction {
    let nodes = f.quad.nodes();
    let weights = f.quad.weights();
    let n = nodes.len();
    // prefix sums over the sorted node order
    let mut pw = vec![0.0; n + 1];
    let mut pwf = vec![0.0; n + 1];
    for i in 0..n {
        pw[i + 1] = pw[i] + weights[i];
        pwf[i + 1] = pwf[i] + weights[i] * f.values[i].norm();
    }
    let min_gap = nodes
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let r0 = 0.5 * min_gap;
    let ratio = (PI / r0).powf(1.0 / 39.0);
    let radii: Vec<f64> = (0..40).map(|k| r0 * ratio.powi(k)).collect();

    let values = (0..n)
        .map(|i| {
            let mut best = 0.0f64;
            for &r in &radii {
                let lo = nodes.partition_point(|&x| x <= nodes[i] - r);
                let hi = nodes.partition_point(|&x| x < nodes[i] + r);
                let mass = pw[hi] - pw[lo];
                if mass > 0.0 {
                    best = best.max((pwf[hi] - pwf[lo]) / mass);
                }
            }
            num_complex::Complex64::new(best, 0.0)
        })
        .collect();
    GridFunction::new(f.quad.clone(), values)
}

/// Weights on `(0, pi)`, positive on every quadrature node.
#[derive(Debug, Clone)]
pub enum Weight {
    Constant(f64),
    /// `|theta - center|^exponent`
    Power { center: f64, exponent: f64 },
    /// values per node of a given grid
    Grid(Vec<f64>),
}

impl Weight {
    pub fn eval(&self, theta: f64, index: usize) -> f64 {
        match self {
            Weight::Constant(c) => *c,
            Weight::Power { center, exponent } => (theta - center).abs().powf(*exponent),
            Weight::Grid(v) => v[index],
        }
    }
}

/// Empirical Muckenhoupt constant: the sup over sampled subintervals `B` of
/// `avg_B(w) * avg_B(w^{-1/(p-1)})^{p-1}`, with quadrature averages on the
/// grid of `f_quad`.
pub fn ap_constant(w: &Weight, p: f64, f_quad: &GridFunction, intervals: usize) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Muckenhoupt sweep needs p > 1, got {p}"
        )));
    }
    let quad = &f_quad.quad;
    let nodes = quad.nodes();
    let weights = quad.weights();
    let n = nodes.len();
    let wv: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(i, &t)| w.eval(t, i))
        .collect();
    let dual: Vec<f64> = wv.iter().map(|&x| x.powf(-1.0 / (p - 1.0))).collect();
    let mut pw = vec![0.0; n + 1];
    let mut pa = vec![0.0; n + 1];
    let mut pb = vec![0.0; n + 1];
    for i in 0..n {
        pw[i + 1] = pw[i] + weights[i];
        pa[i + 1] = pa[i] + weights[i] * wv[i];
        pb[i + 1] = pb[i] + weights[i] * dual[i];
    }
    let scales = 16usize;
    let per_scale = (intervals / scales).max(4);
    let mut sup = 0.0f64;
    for s in 0..scales {
        let len = PI * 0.5f64.powi(s as i32);
        for k in 0..per_scale {
            let start = (PI - len) * k as f64 / per_scale as f64;
            let lo = nodes.partition_point(|&x| x < start);
            let hi = nodes.partition_point(|&x| x < start + len);
            if hi - lo < 2 {
                continue;
            }
            let mass = pw[hi] - pw[lo];
            let avg_w = (pa[hi] - pa[lo]) / mass;
            let avg_dual = (pb[hi] - pb[lo]) / mass;
            sup = sup.max(avg_w * avg_dual.powf(p - 1.0));
        }
    }
    Ok(sup)
}

/// `(int |f|^p w dtheta)^(1/p)`.
pub fn weighted_norm(f: &GridFunction, w: &Weight, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "weighted norm needs p >= 1, got {p}"
        )));
    }
    let total: f64 = f
        .values
        .iter()
        .enumerate()
        .zip(f.quad.weights())
        .map(|((i, v), &qw)| qw * v.norm().powf(p) * w.eval(f.quad.nodes()[i], i))
        .sum();
    Ok(total.powf(1.0 / p))
}

/// Random real-valued test function for the norm-inequality sweeps.
pub fn random_grid_function(
    quad: &std::sync::Arc<crate::quad::Quadrature>,
    rng: &mut impl Rng,
) -> GridFunction {
    let a: f64 = rng.gen_range(0.2..2.0);
    let k1 = rng.gen_range(1..6) as f64;
    let k2 = rng.gen_range(1..9) as f64;
    let b: f64 = rng.gen_range(-1.0..1.0);
    let c: f64 = rng.gen_range(0.0..1.0);
    GridFunction::from_fn(quad.clone(), |t| {
        a * (k1 * t).sin() + b * (k2 * t).cos() + c
    })
}
