//! Closed-form predictions the simulations are compared against.

use serde::{Deserialize, Serialize};

use crate::dist::solve_mu;
use crate::error::{domain, Result};
use crate::stats::harmonic;

/// Rounds `x` to an integer when it is within floating-point noise of one.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        r
    } else {
        x
    }
}

/// Size of the color palette, `ceil(alpha * n)`.
pub fn color_count(n: usize, alpha: f64) -> usize {
    (snap(alpha * n as f64).ceil() as usize).max(1)
}

/// Length of the initial stretch `5 eps^2 n` of the edge ordering that is
/// excluded from the loss sum.
pub fn loss_prefix(n: usize, epsilon: f64) -> usize {
    snap(5.0 * epsilon * epsilon * n as f64).floor() as usize
}

/// `36 (eps n / i)^2`, the descendant bound for the `i`-th edge (1-based).
pub fn desc_bound(n: usize, epsilon: f64, i: usize) -> f64 {
    36.0 * (epsilon * n as f64 / i as f64).powi(2)
}

/// `3 eps n / sqrt(j)`, the bound on the number of mantle edges with more than `j` descendants.
pub fn dj_bound(n: usize, epsilon: f64, j: u64) -> f64 {
    3.0 * epsilon * n as f64 / (j as f64).sqrt()
}

/// The fixed-constant loss budget `37 eps^2 ln(1/eps) n / alpha`.
pub fn loss_budget(n: usize, epsilon: f64, alpha: f64) -> f64 {
    37.0 * loss_scale(n, epsilon, alpha)
}

/// `eps^2 ln(1/eps) n / alpha`, the natural unit of the loss.
pub fn loss_scale(n: usize, epsilon: f64, alpha: f64) -> f64 {
    epsilon * epsilon * (1.0 / epsilon).ln() * n as f64 / alpha
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheorySummary {
    pub n: usize,
    pub epsilon: f64,
    pub alpha: f64,
    pub mu: f64,
    pub colors: usize,
    /// `(1 - mu / (1 + eps)) n`.
    pub predicted_giant: f64,
    /// `2 eps n`.
    pub first_order_giant: f64,
    /// `2 eps^2 n`.
    pub predicted_core: f64,
    /// `2 eps n / e`.
    pub predicted_leaves: f64,
    /// `2 eps^2 n / (e^2 alpha)`, the heuristic number of leaf edges lost.
    pub predicted_leaf_deletions: f64,
    pub loss_prefix: usize,
    pub edge_count: usize,
    /// `37 eps^2 ln(1/eps) n / alpha`.
    pub loss_budget: f64,
    /// `(36 eps^2 n / alpha) (H_|E| - H_{5 eps^2 n})`.
    pub expected_loss_bound: f64,
}

/// Theory predictions for `(n, eps, alpha)`. Without an observed edge count
/// the expected `(1 + eps) n / 2` is used.
pub fn theory_summary(
    n: usize,
    epsilon: f64,
    alpha: f64,
    observed_edge_count: Option<usize>,
) -> Result<TheorySummary> {
    if n == 0 {
        return domain("n must be positive");
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("alpha must be positive, got {alpha}"));
    }
    let mu = solve_mu(epsilon)?.mu;
    let nf = n as f64;
    let e = std::f64::consts::E;
    let edge_count =
        observed_edge_count.unwrap_or_else(|| ((1.0 + epsilon) * nf / 2.0).round() as usize);
    let prefix = loss_prefix(n, epsilon);
    let hdiff = if edge_count > prefix {
        harmonic(edge_count as u64) - harmonic(prefix as u64)
    } else {
        0.0
    };
    Ok(TheorySummary {
        n,
        epsilon,
        alpha,
        mu,
        colors: color_count(n, alpha),
        predicted_giant: (1.0 - mu / (1.0 + epsilon)) * nf,
        first_order_giant: 2.0 * epsilon * nf,
        predicted_core: 2.0 * epsilon * epsilon * nf,
        predicted_leaves: 2.0 * epsilon * nf / e,
        predicted_leaf_deletions: 2.0 * epsilon * epsilon * nf / (e * e * alpha),
        loss_prefix: prefix,
        edge_count,
        loss_budget: loss_budget(n, epsilon, alpha),
        expected_loss_bound: 36.0 * epsilon * epsilon * nf / alpha * hdiff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_quantities() {
        let t = theory_summary(100_000, 0.1, 1.0, None).unwrap();
        assert!((t.first_order_giant - 20_000.0).abs() < 1e-9);
        assert!((t.predicted_core - 2_000.0).abs() < 1e-9);
        assert!((t.predicted_leaves - 7_357.588_823_428_847).abs() < 1e-6);
        assert_eq!(t.colors, 100_000);
        assert_eq!(t.loss_prefix, 5_000);
        assert_eq!(t.edge_count, 55_000);
    }

    #[test]
    fn invalid_parameters() {
        assert!(theory_summary(100, 0.0, 1.0, None).is_err());
        assert!(theory_summary(100, 0.1, 0.0, None).is_err());
        assert!(theory_summary(0, 0.1, 1.0, None).is_err());
    }

    #[test]
    fn palette_and_prefix_rounding() {
        assert_eq!(color_count(30, 0.1), 3);
        assert_eq!(color_count(10, 0.25), 3);
        assert_eq!(color_count(200_000, 1.0), 200_000);
        assert_eq!(loss_prefix(200_000, 0.1), 10_000);
        assert_eq!(loss_prefix(100, 0.1), 5);
    }

    #[test]
    fn desc_bound_at_prefix_end() {
        let (n, eps) = (200_000, 0.1);
        let i = loss_prefix(n, eps);
        assert!((desc_bound(n, eps, i) - 36.0 / (25.0 * eps * eps)).abs() < 1e-9);
    }

    #[test]
    fn expected_loss_bound_without_room_is_zero() {
        let t = theory_summary(1000, 0.1, 1.0, Some(10)).unwrap();
        assert_eq!(t.expected_loss_bound, 0.0);
    }
}
