//! Composite Gauss–Legendre quadrature on `(0, pi)` and grid-sampled functions.
//!
//! The endpoint factors `(sin theta/2)^(alpha+1/2)`, `(cos theta/2)^(beta+1/2)`
//! are continuous on `[0, pi]` for `alpha, beta >= -1/2`, so no singular weight
//! is needed and one grid can be shared across all parameter pairs.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of Gauss–Legendre points per panel; requested orders round up to a
/// multiple of this (single smaller panel below it).
pub const PANEL_POINTS: usize = 64;

/// Nodes and weights realizing `int_0^pi f(theta) dtheta`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order: usize,
    panels: usize,
}

impl Quadrature {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Largest mode index resolvable on this grid (16 nodes per mode enforced
    /// by the coefficient routines).
    pub fn max_resolvable_mode(&self) -> usize {
        self.order / 16
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_samples(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len(), "sample length mismatch");
        values
            .iter()
            .zip(&self.weights)
            .map(|(&v, &w)| w * v)
            .sum()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' at x
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // odd n: center node is exactly 0
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Builds a composite Gauss–Legendre rule on `(0, pi)` with at least `order`
/// nodes (panels of [`PANEL_POINTS`] points, mapped affinely).
pub fn build_quadrature(order: usize) -> Result<Quadrature> {
    if order < 2 {
        return Err(Error::QuadratureOrder(order));
    }
    let (points, panels) = if order <= PANEL_POINTS {
        (order, 1)
    } else {
        (PANEL_POINTS, order.div_ceil(PANEL_POINTS))
    };
    let (xs, ws) = gauss_legendre_reference(points);
    let width = PI / panels as f64;
    let mut nodes = Vec::with_capacity(points * panels);
    let mut weights = Vec::with_capacity(points * panels);
    for p in 0..panels {
        let a = p as f64 * width;
        let half = 0.5 * width;
        let mid = a + half;
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    let quad = Quadrature {
        order: nodes.len(),
        nodes,
        weights,
        panels,
    };
    debug_assert!((quad.weights.iter().sum::<f64>() - PI).abs() < 1e-12);
    debug_assert!(quad.nodes.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(quad.nodes.iter().all(|&x| x > 0.0 && x < PI));
    Ok(quad)
}

/// Complex samples of a function on a quadrature grid.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub quad: Arc<Quadrature>,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(quad: Arc<Quadrature>, values: Vec<Complex64>) -> Self {
        assert_eq!(
            values.len(),
            quad.len(),
            "grid function length must match the quadrature"
        );
        Self { quad, values }
    }

    pub fn from_fn(quad: Arc<Quadrature>, f: impl Fn(f64) -> f64) -> Self {
        let values = quad
            .nodes()
            .iter()
            .map(|&x| Complex64::new(f(x), 0.0))
            .collect();
        Self { quad, values }
    }

    pub fn from_fn_complex(quad: Arc<Quadrature>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = quad.nodes().iter().map(|&x| f(x)).collect();
        Self { quad, values }
    }

    pub fn zero(quad: Arc<Quadrature>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); quad.len()];
        Self { quad, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(int |f|^2 dtheta)^(1/2)` by quadrature.
    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(self.quad.weights())
            .map(|(v, &w)| w * v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `int f g dtheta` (bilinear, no conjugation).
    pub fn integrate_against(&self, other: &GridFunction) -> Complex64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.quad.weights())
            .map(|((a, b), &w)| w * a * b)
            .sum()
    }

    /// `int f conj(g) dtheta`.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .zip(self.quad.weights())
            .map(|((a, b), &w)| w * a * b.conj())
            .sum()
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_pi() {
        for order in [2, 17, 64, 200, 2048] {
            let q = build_quadrature(order).unwrap();
            assert!((q.weights().iter().sum::<f64>() - PI).abs() < 1e-12);
        }
    }

    #[test]
    fn integrates_sine_exactly() {
        let q = build_quadrature(2048).unwrap();
        assert!((q.integrate(f64::sin) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_constant() {
        let q = build_quadrature(2048).unwrap();
        assert!((q.integrate(|_| 1.0) - PI).abs() < 1e-12);
    }

    #[test]
    fn polynomial_exactness_per_panel() {
        // a 2-point rule on one panel integrates cubics exactly
        let q = build_quadrature(2).unwrap();
        let exact = PI.powi(4) / 4.0;
        assert!((q.integrate(|x| x * x * x) - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn nodes_strictly_increasing_and_interior() {
        let q = build_quadrature(4096).unwrap();
        assert!(q.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(q.nodes().iter().all(|&x| x > 0.0 && x < PI));
    }

    #[test]
    fn rejects_order_below_two() {
        assert!(matches!(build_quadrature(1), Err(Error::QuadratureOrder(1))));
    }
}
