//! Smooth cutoffs built from the standard `exp(-1/x)` mollifier.

/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn sigma(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `exp(-1/x^2)` for `x > 0`, zero otherwise. Used by the alternative bump.
fn sigma_sq(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / (x * x)).exp()
    } else {
        0.0
    }
}

/// Smooth monotone step: exactly 0 for `x <= 0`, exactly 1 for `x >= 1`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let s = sigma(x);
        s / (s + sigma(1.0 - x))
    }
}

/// Second smooth step with a different profile (for bump-independence sampling).
pub fn smooth_step_alt(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let s = sigma_sq(x);
        s / (s + sigma_sq(1.0 - x))
    }
}

/// Step rising smoothly from 0 on `(-inf, lo]` to 1 on `[hi, inf)`.
/// Degenerate windows (`lo >= hi`) fall back to a hard step at `lo`.
pub fn smooth_transition(x: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        smooth_step((x - lo) / (hi - lo))
    } else if x <= lo {
        0.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_endpoints_exact() {
        assert_eq!(smooth_step(0.0), 0.0);
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert_eq!(smooth_step(2.0), 1.0);
    }

    #[test]
    fn step_symmetry() {
        for &x in &[0.1, 0.25, 0.5, 0.9] {
            assert!((smooth_step(x) + smooth_step(1.0 - x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn step_monotone() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let v = smooth_step(i as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
    }
}
