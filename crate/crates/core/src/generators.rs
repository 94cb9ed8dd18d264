//! Random graph generators: G(n, p), G(n, m) and the three-stage
//! kernel / subdivision / Galton-Watson model of the giant component.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dist::{sample_pgw_tree, solve_mu, GeometricSampler, PoissonSampler};
use crate::error::{domain, Error, Result};
use crate::graph::Graph;

fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Maps `t` in `0..C(n, 2)` to the pair `(v, w)` with `w < v` in row-major order.
fn pair_from_index(t: u64) -> (usize, usize) {
    let mut v = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0).floor() as u64;
    while v * (v - 1) / 2 > t {
        v -= 1;
    }
    while (v + 1) * v / 2 <= t {
        v += 1;
    }
    let w = t - v * (v - 1) / 2;
    (v as usize, w as usize)
}

/// Erdős–Rényi G(n, p) by geometric skipping over the pair sequence,
/// in expected O(n + m) time.
pub fn gnp<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return domain("n must be positive");
    }
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("p must lie in [0, 1], got {p}"));
    }
    let mut g = Graph::with_capacity(n, (pair_count(n) as f64 * p * 1.1) as usize + 16);
    if p == 0.0 {
        return Ok(g);
    }
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                g.add_edge(w, v);
            }
        }
        return Ok(g);
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w): (usize, i64) = (1, -1);
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            g.add_edge(w as usize, v);
        }
    }
    Ok(g)
}

/// Uniform G(n, m): a partial Fisher–Yates shuffle over the `C(n, 2)` pair
/// indices, with displaced entries kept in a hash map.
pub fn gnm<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Graph> {
    if n == 0 {
        return domain("n must be positive");
    }
    let total = pair_count(n);
    if m as u64 > total {
        return domain(format!("m = {m} exceeds C({n}, 2) = {total}"));
    }
    let mut g = Graph::with_capacity(n, m);
    let mut moved: HashMap<u64, u64> = HashMap::with_capacity(m);
    for i in 0..m as u64 {
        let j = rng.random_range(i..total);
        let at_j = *moved.get(&j).unwrap_or(&j);
        let at_i = *moved.get(&i).unwrap_or(&i);
        moved.insert(j, at_i);
        let (v, w) = pair_from_index(at_j);
        g.add_edge(w, v);
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexRole {
    Kernel,
    Core,
    Mantle,
}

impl VertexRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexRole::Kernel => "kernel",
            VertexRole::Core => "core",
            VertexRole::Mantle => "mantle",
        }
    }
}

/// Output of [`dlp_generate`] with the ground-truth structure of each stage.
#[derive(Debug, Clone)]
pub struct DlpGraph {
    pub graph: Graph,
    pub lambda: f64,
    pub mu: f64,
    /// Kernel vertices are `0..kernel_vertices`.
    pub kernel_vertices: usize,
    /// Kernel degree of each kernel vertex (a self-loop counts twice).
    pub kernel_degrees: Vec<usize>,
    /// One `(kernel u, kernel v, path length)` entry per kernel edge.
    pub kernel_edges: Vec<(usize, usize, usize)>,
    /// Kernel plus subdivision vertices are `0..core_vertices`.
    pub core_vertices: usize,
    /// Core edges are `0..core_edges`; every later edge belongs to a tree.
    pub core_edges: usize,
    pub roles: Vec<VertexRole>,
    /// For every vertex, the core vertex at the root of its tree.
    pub tree_root: Vec<usize>,
    /// Number of parity rejections of the degree vector.
    pub parity_resamples: usize,
}

impl DlpGraph {
    pub fn core_vertex_ids(&self) -> Vec<usize> {
        (0..self.core_vertices).collect()
    }

    pub fn core_edge_ids(&self) -> Vec<usize> {
        (0..self.core_edges).collect()
    }

    pub fn write_labels<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        for (v, role) in self.roles.iter().enumerate() {
            writeln!(out, "{v} {}", role.as_str())?;
        }
        Ok(())
    }
}

/// Draws the giant-component surrogate of G(n, (1 + eps)/n):
///
/// 1. `Lambda ~ N(1 + eps - mu, 1/n)`, `D_u ~ Poisson(Lambda)` for `u < n`,
///    conditioned on `sum D_u 1[D_u >= 3]` even; the kernel is a uniform
///    pairing of the half-edges of the vertices with `D_u >= 3`.
/// 2. Each kernel edge becomes a path with `Geom(1 - mu)` edges.
/// 3. Every core vertex receives an independent Poisson(mu) Galton-Watson tree.
pub fn dlp_generate<R: Rng + ?Sized>(n: usize, epsilon: f64, rng: &mut R) -> Result<DlpGraph> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return domain(format!("epsilon must lie in (0, 0.5), got {epsilon}"));
    }
    if n < 1000 {
        return domain(format!("n must be at least 1000, got {n}"));
    }
    let mu = solve_mu(epsilon)?.mu;
    let normal = Normal::new(1.0 + epsilon - mu, 1.0 / (n as f64).sqrt())
        .map_err(|e| Error::Domain(e.to_string()))?;
    let lambda = loop {
        let l = normal.sample(rng);
        if l > 0.0 {
            break l;
        }
    };

    // Stage 1: degree vector, parity conditioning, configuration pairing.
    let poisson = PoissonSampler::new(lambda)?;
    let mut parity_resamples = 0;
    let kernel_degrees: Vec<usize> = loop {
        let high: Vec<usize> = (0..n)
            .map(|_| poisson.sample(rng) as usize)
            .filter(|&d| d >= 3)
            .collect();
        if high.iter().sum::<usize>() % 2 == 0 {
            break high;
        }
        parity_resamples += 1;
    };
    if kernel_degrees.is_empty() {
        return Err(Error::KernelEmpty);
    }
    let kernel_vertices = kernel_degrees.len();
    let mut half_edges: Vec<usize> = kernel_degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v, d))
        .collect();
    half_edges.shuffle(rng);

    // Stage 2: subdivide.
    let lengths = GeometricSampler::new(1.0 - mu)?;
    let mut graph = Graph::new(kernel_vertices);
    let mut kernel_edges = Vec::with_capacity(half_edges.len() / 2);
    for pair in half_edges.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        let len = lengths.sample(rng) as usize;
        let mut prev = a;
        for _ in 1..len {
            let s = graph.add_vertex();
            graph.add_edge(prev, s);
            prev = s;
        }
        graph.add_edge(prev, b);
        kernel_edges.push((a, b, len));
    }
    let core_vertices = graph.n();
    let core_edges = graph.num_edges();

    // Stage 3: hang a tree on every core vertex.
    let mut roles = vec![VertexRole::Core; core_vertices];
    roles[..kernel_vertices].fill(VertexRole::Kernel);
    let mut tree_root: Vec<usize> = (0..core_vertices).collect();
    let mut ids = Vec::new();
    for r in 0..core_vertices {
        let tree = sample_pgw_tree(mu, rng)?;
        ids.clear();
        ids.push(r);
        for (p, _child) in tree.edges() {
            let v = graph.add_vertex();
            graph.add_edge(ids[p], v);
            ids.push(v);
            roles.push(VertexRole::Mantle);
            tree_root.push(r);
        }
    }

    Ok(DlpGraph {
        graph,
        lambda,
        mu,
        kernel_vertices,
        kernel_degrees,
        kernel_edges,
        core_vertices,
        core_edges,
        roles,
        tree_root,
        parity_resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::RngStream;
    use crate::graph::two_core_all;
    use std::collections::HashSet;

    #[test]
    fn pair_index_roundtrip() {
        let mut t = 0;
        for v in 1..60usize {
            for w in 0..v {
                assert_eq!(pair_from_index(t), (v, w));
                t += 1;
            }
        }
        let big = pair_count(200_000) - 1;
        assert_eq!(pair_from_index(big), (199_999, 199_998));
    }

    #[test]
    fn gnp_extremes() {
        let mut rng = RngStream::new(0, 0);
        assert_eq!(gnp(10, 0.0, &mut rng).unwrap().num_edges(), 0);
        let k = gnp(7, 1.0, &mut rng).unwrap();
        assert_eq!(k.num_edges(), 21);
        let set: HashSet<_> = k
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(set.len(), 21);
        assert!(gnp(5, 1.5, &mut rng).is_err());
    }

    #[test]
    fn gnp_is_simple() {
        let mut rng = RngStream::new(4, 0);
        let g = gnp(500, 0.05, &mut rng).unwrap();
        let set: HashSet<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(set.len(), g.num_edges());
        assert!(g.edges().iter().all(|&(u, v)| u != v));
    }

    #[test]
    fn gnm_extremes() {
        let mut rng = RngStream::new(0, 1);
        assert_eq!(gnm(10, 0, &mut rng).unwrap().num_edges(), 0);
        let k4 = gnm(4, 6, &mut rng).unwrap();
        let set: HashSet<_> = k4
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(set.len(), 6);
        assert!(gnm(4, 7, &mut rng).is_err());
    }

    #[test]
    fn gnm_has_distinct_pairs() {
        let mut rng = RngStream::new(8, 0);
        let g = gnm(300, 2000, &mut rng).unwrap();
        let set: HashSet<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        assert_eq!(set.len(), 2000);
    }

    #[test]
    fn dlp_structure_matches_labels() {
        let mut rng = RngStream::new(21, 0);
        let d = dlp_generate(20_000, 0.2, &mut rng).unwrap();
        assert!(d.kernel_degrees.iter().all(|&k| k >= 3));
        assert_eq!(
            d.kernel_degrees.iter().sum::<usize>(),
            2 * d.kernel_edges.len()
        );
        let total_len: usize = d.kernel_edges.iter().map(|e| e.2).sum();
        assert_eq!(d.core_edges, total_len);
        assert_eq!(
            d.core_vertices,
            d.kernel_vertices + total_len - d.kernel_edges.len()
        );
        let core = two_core_all(&d.graph);
        assert_eq!(core.vertices, d.core_vertex_ids());
        assert_eq!(core.edges, d.core_edge_ids());
        assert_eq!(d.roles.len(), d.graph.n());
        assert_eq!(
            d.graph.num_edges() - d.core_edges,
            d.graph.n() - d.core_vertices
        );
    }

    #[test]
    fn dlp_domain() {
        let mut rng = RngStream::new(0, 0);
        assert!(dlp_generate(500, 0.1, &mut rng).is_err());
        assert!(dlp_generate(5000, 0.6, &mut rng).is_err());
    }

    #[test]
    fn labels_sidecar() {
        let mut rng = RngStream::new(2, 0);
        let d = dlp_generate(20_000, 0.2, &mut rng).unwrap();
        let mut buf = Vec::new();
        d.write_labels(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), d.graph.n());
        assert_eq!(text.lines().next().unwrap(), "0 kernel");
    }
}
