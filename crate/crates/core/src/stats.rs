//! Small statistics toolkit: summaries, harmonic numbers and a chi-square
//! goodness-of-fit test for integer-valued samples.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Largest argument for which harmonic numbers are summed term by term.
pub const HARMONIC_EXACT_LIMIT: u64 = 10_000_000;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `H_k = sum_{j=1}^k 1/j`, with `H_0 = 0`.
pub fn harmonic(k: u64) -> f64 {
    if k <= HARMONIC_EXACT_LIMIT {
        // smallest terms first
        (1..=k).rev().map(|j| 1.0 / j as f64).sum()
    } else {
        let x = k as f64;
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x) + 1.0 / (120.0 * x.powi(4))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    /// Mean, sample standard deviation and range. All zero when empty.
    pub fn of(xs: &[f64]) -> Summary {
        if xs.is_empty() {
            return Summary::default();
        }
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Summary {
            count: xs.len(),
            mean,
            std,
            min,
            max,
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.std / (self.count as f64).sqrt()
        }
    }
}

/// Relative deviation `|observed - expected| / expected`.
pub fn rel_err(observed: f64, expected: f64) -> f64 {
    (observed - expected).abs() / expected.abs()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// `(first value in bin, observed, expected)`; the last bin is open-ended.
    pub bins: Vec<(u64, u64, f64)>,
}

impl GofResult {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Pearson chi-square test of integer samples against a pmf supported on
/// `support_start..`.
///
/// Consecutive values are merged until every bin expects at least
/// `min_expected` samples; the remaining tail forms one open-ended bin.
pub fn chi_square_discrete(
    samples: &[u64],
    support_start: u64,
    pmf: impl Fn(u64) -> f64,
    min_expected: f64,
) -> GofResult {
    let total = samples.len() as f64;
    let mut lows: Vec<u64> = Vec::new();
    let mut expected: Vec<f64> = Vec::new();
    let mut cdf = 0.0f64;
    let mut k = support_start;
    let mut open: Option<(u64, f64)> = None;
    loop {
        let rest = (1.0f64 - cdf).max(0.0) * total;
        if rest < 2.0 * min_expected {
            let (lo, acc) = open.unwrap_or((k, 0.0));
            lows.push(lo);
            expected.push(acc + rest);
            break;
        }
        let p = pmf(k);
        cdf += p;
        let (lo, acc) = open.unwrap_or((k, 0.0));
        let acc = acc + p * total;
        if acc >= min_expected {
            lows.push(lo);
            expected.push(acc);
            open = None;
        } else {
            open = Some((lo, acc));
        }
        k += 1;
    }
    if expected.len() > 1 && *expected.last().unwrap() < min_expected {
        let tail = expected.pop().unwrap();
        lows.pop();
        *expected.last_mut().unwrap() += tail;
    }

    let mut observed = vec![0u64; lows.len()];
    for &x in samples {
        let idx = lows.partition_point(|&lo| lo <= x);
        if idx > 0 {
            observed[idx - 1] += 1;
        }
    }
    let statistic: f64 = observed
        .iter()
        .zip(&expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    let dof = lows.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map(|d| d.sf(statistic))
            .unwrap_or(0.0)
    };
    let bins = lows
        .into_iter()
        .zip(observed)
        .zip(expected)
        .map(|((l, o), e)| (l, o, e))
        .collect();
    GofResult {
        statistic,
        dof,
        p_value,
        bins,
    }
}
