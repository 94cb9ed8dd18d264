//! Self-contained verification suites exposed by the command line:
//! the distribution checks and the oracle dominance check.

use crate::dist::{borel_pmf, borel_tails, sample_pgw_size, solve_mu, RngStream};
use crate::experiment::Check;
use crate::oracle::{process_vs_oracle, random_instance, random_rainbow_tree};
use crate::stats::chi_square_discrete;

pub const MU_EPSILONS: [f64; 4] = [0.01, 0.05, 0.1, 0.2];
pub const TAIL_MUS: [f64; 5] = [0.5, 0.8, 0.9, 0.95, 0.99];
pub const TAIL_J_MAX: u64 = 10_000;
pub const GOF_SIGNIFICANCE: f64 = 1e-3;
pub const GOF_MIN_EXPECTED: f64 = 5.0;

/// Largest residual over [`MU_EPSILONS`] and largest `|mu - (1 - eps)| / eps^2`
/// over those with `eps <= 0.05`.
pub fn check_mu_solver() -> Vec<Check> {
    let mut worst_residual = 0.0f64;
    let mut worst_expansion = 0.0f64;
    for eps in MU_EPSILONS {
        match solve_mu(eps) {
            Ok(s) => {
                worst_residual = worst_residual.max(s.residual);
                if eps <= 0.05 {
                    worst_expansion = worst_expansion.max((s.mu - (1.0 - eps)).abs() / (eps * eps));
                }
            }
            Err(_) => worst_residual = f64::INFINITY,
        }
    }
    vec![
        Check {
            name: "mu_residual".into(),
            description: "max |mu e^-mu - (1+eps) e^-(1+eps)| over eps in {0.01, 0.05, 0.1, 0.2}"
                .into(),
            observed: worst_residual,
            threshold: 1e-12,
            passed: worst_residual < 1e-12,
        },
        Check {
            name: "mu_expansion".into(),
            description: "max |mu - (1 - eps)| / eps^2 over eps in {0.01, 0.05}".into(),
            observed: worst_expansion,
            threshold: 2.0,
            passed: worst_expansion <= 2.0,
        },
    ]
}

/// Number of `(mu, j)` pairs violating `P(X > j) < 1 / (sqrt(j) mu)`.
pub fn borel_tail_violations() -> usize {
    let mut bad = 0;
    for mu in TAIL_MUS {
        let tails = borel_tails(mu, TAIL_J_MAX).expect("valid mu");
        bad += (1..=TAIL_J_MAX)
            .filter(|&j| tails[j as usize] >= 1.0 / ((j as f64).sqrt() * mu))
            .count();
    }
    bad
}

pub fn check_borel_tail() -> Check {
    let bad = borel_tail_violations();
    Check {
        name: "borel_tail".into(),
        description: "pairs (mu, j) with P(Borel(mu) > j) >= 1/(sqrt(j) mu), j <= 10^4".into(),
        observed: bad as f64,
        threshold: 0.0,
        passed: bad == 0,
    }
}

/// Chi-square test of `samples` Galton-Watson tree sizes against Borel(mu).
pub fn check_pgw_borel(mu: f64, samples: usize, seed: u64) -> Check {
    let mut rng = RngStream::new(seed, 0);
    let sizes: Vec<u64> = (0..samples)
        .map(|_| sample_pgw_size(mu, &mut rng).unwrap() as u64)
        .collect();
    let gof = chi_square_discrete(&sizes, 1, |k| borel_pmf(mu, k).unwrap(), GOF_MIN_EXPECTED);
    Check {
        name: "pgw_borel_gof".into(),
        description: format!(
            "chi-square p-value of {samples} tree sizes at mu = {mu} against Borel({mu}), {} bins",
            gof.bins.len()
        ),
        observed: gof.p_value,
        threshold: GOF_SIGNIFICANCE,
        passed: gof.passes(GOF_SIGNIFICANCE),
    }
}

/// The full distribution suite.
pub fn distribution_suite(seed: u64) -> Vec<Check> {
    let mut out = check_mu_solver();
    out.push(check_borel_tail());
    out.push(check_pgw_borel(0.9, 100_000, seed));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DominanceTally {
    pub runs: usize,
    pub violations: usize,
    pub tree_instances: usize,
    pub trees_without_equality: usize,
}

/// `instances` random G(10, 12) graphs with 8 colors plus as many random
/// rainbow trees on at most 10 vertices, `runs` process runs each.
pub fn oracle_dominance(instances: usize, runs: usize, seed: u64) -> DominanceTally {
    let mut rng = RngStream::new(seed, 0);
    let mut tally = DominanceTally {
        runs: 0,
        violations: 0,
        tree_instances: 0,
        trees_without_equality: 0,
    };
    for _ in 0..instances {
        let cg = random_instance(10, 12, 8, &mut rng).expect("within bounds");
        let r = process_vs_oracle(&cg, runs, &mut rng);
        tally.runs += r.runs;
        tally.violations += r.violations;
    }
    for i in 0..instances {
        let n = 2 + i % 9;
        let cg = random_rainbow_tree(n, &mut rng).expect("within bounds");
        let r = process_vs_oracle(&cg, runs, &mut rng);
        tally.runs += r.runs;
        tally.violations += r.violations;
        tally.tree_instances += 1;
        if r.equalities == 0 {
            tally.trees_without_equality += 1;
        }
    }
    tally
}

pub fn check_oracle_dominance(instances: usize, runs: usize, seed: u64) -> Vec<Check> {
    let t = oracle_dominance(instances, runs, seed);
    vec![
        Check {
            name: "oracle_dominance".into(),
            description: format!(
                "process runs exceeding the exhaustive maximum ({} runs)",
                t.runs
            ),
            observed: t.violations as f64,
            threshold: 0.0,
            passed: t.violations == 0,
        },
        Check {
            name: "oracle_tree_equality".into(),
            description: format!(
                "rainbow tree instances with no run matching the maximum ({} instances)",
                t.tree_instances
            ),
            observed: t.trees_without_equality as f64,
            threshold: 0.0,
            passed: t.trees_without_equality == 0,
        },
    ]
}

pub fn format_check(c: &Check) -> String {
    format!(
        "[{}] {}: observed {} (threshold {}) - {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.name,
        c.observed,
        c.threshold,
        c.description
    )
}
