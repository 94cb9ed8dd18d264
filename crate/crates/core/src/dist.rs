//! The mu equation, the Borel distribution, elementary samplers and
//! Poisson Galton-Watson trees.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Geometric, Poisson};
use statrs::function::factorial::ln_factorial;

use crate::error::{domain, Error, Result};

/// Seeded random stream identified by `(seed, index)`.
///
/// Backed by ChaCha12 with the stream index selecting an independent
/// keystream, so the output is platform independent.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    index: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RngStream { seed, index, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn index(&self) -> u64 {
        self.index
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Root of `mu * exp(-mu) = (1 + eps) * exp(-(1 + eps))` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuSolution {
    pub epsilon: f64,
    pub mu: f64,
    pub residual: f64,
}

/// Solves for the conjugate parameter mu by bisection on `(0, 1)`.
///
/// `x * exp(-x)` is increasing on `(0, 1)` and `f(0) < 0 < f(1)`, so the
/// bracket always holds.
pub fn solve_mu(epsilon: f64) -> Result<MuSolution> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return domain(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    let c = 1.0 + epsilon;
    let target = c * (-c).exp();
    let f = |x: f64| x * (-x).exp() - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    Ok(MuSolution {
        epsilon,
        mu,
        residual: f(mu).abs(),
    })
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        domain(format!("mu must lie in (0, 1), got {mu}"))
    }
}

/// `ln P(X = k)` for `X ~ Borel(mu)`.
pub fn borel_ln_pmf(mu: f64, k: u64) -> Result<f64> {
    check_mu(mu)?;
    if k < 1 {
        return domain("Borel support starts at k = 1");
    }
    let kf = k as f64;
    Ok(-mu * kf + (kf - 1.0) * (mu * kf).ln() - ln_factorial(k))
}

/// `P(X = k) = exp(-mu k) (mu k)^(k-1) / k!`, evaluated in log space.
pub fn borel_pmf(mu: f64, k: u64) -> Result<f64> {
    borel_ln_pmf(mu, k).map(f64::exp)
}

/// `P(X > j) = 1 - sum_{k <= j} P(X = k)`.
pub fn borel_tail(mu: f64, j: u64) -> Result<f64> {
    if j < 1 {
        return domain("tail index j must be positive");
    }
    Ok(*borel_tails(mu, j)?.last().unwrap())
}

/// `tails[j] = P(X > j)` for `j = 0..=jmax` (so `tails[0] = 1`).
pub fn borel_tails(mu: f64, jmax: u64) -> Result<Vec<f64>> {
    check_mu(mu)?;
    let mut out = Vec::with_capacity(jmax as usize + 1);
    out.push(1.0);
    let mut cdf = 0.0;
    for k in 1..=jmax {
        cdf += borel_pmf(mu, k)?;
        out.push((1.0 - cdf).max(0.0));
    }
    Ok(out)
}

pub fn borel_mean(mu: f64) -> f64 {
    1.0 / (1.0 - mu)
}

pub fn borel_variance(mu: f64) -> f64 {
    mu / (1.0 - mu).powi(3)
}

/// Poisson sampler with a fixed rate; rate zero always yields zero.
#[derive(Debug, Clone, Copy)]
pub struct PoissonSampler {
    inner: Option<Poisson<f64>>,
}

impl PoissonSampler {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return domain(format!(
                "Poisson rate must be finite and >= 0, got {lambda}"
            ));
        }
        if lambda == 0.0 {
            return Ok(PoissonSampler { inner: None });
        }
        Poisson::new(lambda)
            .map(|p| PoissonSampler { inner: Some(p) })
            .map_err(|e| Error::Domain(format!("Poisson({lambda}): {e}")))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.inner {
            Some(p) => p.sample(rng) as u64,
            None => 0,
        }
    }
}

pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<u64> {
    Ok(PoissonSampler::new(lambda)?.sample(rng))
}

/// Geometric sampler on `{1, 2, ...}`: trials up to and including the first success.
#[derive(Debug, Clone, Copy)]
pub struct GeometricSampler {
    inner: Geometric,
}

impl GeometricSampler {
    pub fn new(p_success: f64) -> Result<Self> {
        if !(p_success > 0.0 && p_success <= 1.0) {
            return domain(format!(
                "success probability must lie in (0, 1], got {p_success}"
            ));
        }
        Geometric::new(p_success)
            .map(|inner| GeometricSampler { inner })
            .map_err(|e| Error::Domain(format!("Geometric({p_success}): {e}")))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.inner.sample(rng) + 1
    }
}

pub fn sample_geometric<R: Rng + ?Sized>(p_success: f64, rng: &mut R) -> Result<u64> {
    Ok(GeometricSampler::new(p_success)?.sample(rng))
}

/// Abort threshold for Galton-Watson generation.
pub const PGW_VERTEX_LIMIT: usize = 100_000_000;

/// A rooted tree in breadth-first order: vertex 0 is the root and every
/// parent precedes its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgwTree {
    parent: Vec<Option<usize>>,
    level: Vec<usize>,
}

impl PgwTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn depth(&self) -> usize {
        self.level.last().copied().unwrap_or(0)
    }

    /// `(parent, child)` pairs in creation order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }

    /// Number of vertices in the subtree rooted at each vertex.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut size = vec![1; self.len()];
        for v in (1..self.len()).rev() {
            let p = self.parent[v].unwrap();
            size[p] += size[v];
        }
        size
    }
}

fn grow_pgw<R: Rng + ?Sized>(
    mu: f64,
    limit: usize,
    rng: &mut R,
    mut on_child: impl FnMut(usize, usize),
) -> Result<usize> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return domain(format!("mu must be finite and >= 0, got {mu}"));
    }
    let offspring = PoissonSampler::new(mu)?;
    // Vertices are numbered in creation order, so each level is a
    // contiguous range [start, end).
    let (mut start, mut end) = (0usize, 1usize);
    let mut level = 0;
    while start < end {
        level += 1;
        let mut next = end;
        for v in start..end {
            let k = offspring.sample(rng) as usize;
            if next + k > limit {
                return Err(Error::InvalidMu { mu, limit });
            }
            for _ in 0..k {
                on_child(v, level);
            }
            next += k;
        }
        start = end;
        end = next;
    }
    Ok(end)
}

/// Grows a Poisson(mu) Galton-Watson tree level by level.
pub fn sample_pgw_tree<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> Result<PgwTree> {
    let mut parent = vec![None];
    let mut level = vec![0];
    grow_pgw(mu, PGW_VERTEX_LIMIT, rng, |p, l| {
        parent.push(Some(p));
        level.push(l);
    })?;
    Ok(PgwTree { parent, level })
}

/// Total progeny of a Poisson(mu) Galton-Watson tree. Consumes the random
/// stream exactly as [`sample_pgw_tree`] does.
pub fn sample_pgw_size<R: Rng + ?Sized>(mu: f64, rng: &mut R) -> Result<usize> {
    grow_pgw(mu, PGW_VERTEX_LIMIT, rng, |_, _| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_domain() {
        assert!(solve_mu(0.0).is_err());
        assert!(solve_mu(1.0).is_err());
        assert!(solve_mu(-0.2).is_err());
        assert!(solve_mu(f64::NAN).is_err());
    }

    #[test]
    fn mu_near_zero_epsilon_tends_to_one() {
        let s = solve_mu(1e-6).unwrap();
        assert!(s.mu > 0.999_99 && s.mu < 1.0);
    }

    #[test]
    fn mu_first_order_expansion() {
        for eps in [0.01, 0.02, 0.05] {
            let s = solve_mu(eps).unwrap();
            assert!(
                (s.mu - (1.0 - eps)).abs() <= 2.0 * eps * eps,
                "eps={eps} mu={}",
                s.mu
            );
            assert!(s.residual < 1e-12);
        }
    }

    #[test]
    fn borel_pmf_values() {
        let mu: f64 = 0.37;
        assert!((borel_pmf(mu, 1).unwrap() - (-mu).exp()).abs() < 1e-15);
        // e^{-1} * 1 / 2!
        assert!((borel_pmf(0.5, 2).unwrap() - 0.183_939_720_585_721_2).abs() < 1e-12);
        assert!(borel_pmf(0.5, 0).is_err());
        assert!(borel_pmf(1.0, 3).is_err());
        let big = borel_pmf(0.99, 1_000_000).unwrap();
        assert!(big > 0.0 && big.is_finite());
    }

    #[test]
    fn borel_tail_values() {
        assert_eq!(borel_tails(0.5, 0).unwrap(), vec![1.0]);
        let t1 = borel_tail(0.5, 1).unwrap();
        assert!((t1 - (1.0 - (-0.5f64).exp())).abs() < 1e-15);
        assert!(borel_tail(0.5, 0).is_err());
    }

    #[test]
    fn degenerate_samplers() {
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(sample_poisson(0.0, &mut rng).unwrap(), 0);
            assert_eq!(sample_geometric(1.0, &mut rng).unwrap(), 1);
        }
        assert!(sample_poisson(-1.0, &mut rng).is_err());
        assert!(sample_geometric(0.0, &mut rng).is_err());
        assert!(sample_geometric(1.5, &mut rng).is_err());
    }

    #[test]
    fn pgw_with_zero_rate_is_a_root() {
        let mut rng = RngStream::new(3, 0);
        let t = sample_pgw_tree(0.0, &mut rng).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn pgw_structure_is_consistent() {
        let mut rng = RngStream::new(11, 2);
        for _ in 0..200 {
            let t = sample_pgw_tree(0.9, &mut rng).unwrap();
            for v in 1..t.len() {
                let p = t.parent(v).unwrap();
                assert!(p < v);
                assert_eq!(t.level(v), t.level(p) + 1);
            }
            assert_eq!(t.subtree_sizes()[0], t.len());
            assert_eq!(t.edges().count(), t.len() - 1);
        }
    }

    #[test]
    fn pgw_size_matches_tree() {
        let mut a = RngStream::new(5, 9);
        let mut b = RngStream::new(5, 9);
        for _ in 0..500 {
            assert_eq!(
                sample_pgw_tree(0.8, &mut a).unwrap().len(),
                sample_pgw_size(0.8, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn supercritical_rate_aborts() {
        let mut rng = RngStream::new(0, 0);
        // Survives with probability ~0.94 and is then cut off by the limit.
        let hit = (0..20).any(|_| {
            matches!(
                grow_pgw(3.0, 10_000, &mut rng, |_, _| {}),
                Err(Error::InvalidMu { limit: 10_000, .. })
            )
        });
        assert!(hit);
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        let mut c = RngStream::new(42, 8);
        let xa: Vec<u64> = (0..16).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..16).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..16).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }
}
