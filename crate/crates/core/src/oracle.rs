//! Exhaustive maximum rainbow tree on small colored graphs, used as ground
//! truth for the coloring process.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::gnm;
use crate::graph::{connected_components, core_mantle_decompose, Graph};
use crate::rainbow::{order_edges, rainbow_giant, run_process, EdgeOrdering};

pub const MAX_VERTICES: usize = 16;
pub const MAX_EDGES: usize = 20;

/// A small graph with every edge colored from `0..palette`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraphSmall {
    graph: Graph,
    colors: Vec<usize>,
    palette: usize,
}

impl ColoredGraphSmall {
    pub fn new(graph: Graph, colors: Vec<usize>) -> Result<Self> {
        let palette = colors.iter().max().map_or(1, |&c| c + 1);
        Self::with_palette(graph, colors, palette)
    }

    pub fn with_palette(graph: Graph, colors: Vec<usize>, palette: usize) -> Result<Self> {
        if graph.n() > MAX_VERTICES || graph.num_edges() > MAX_EDGES {
            return Err(Error::TooLarge {
                vertices: graph.n(),
                edges: graph.num_edges(),
            });
        }
        if colors.len() != graph.num_edges() {
            return Err(Error::Domain(format!(
                "{} colors for {} edges",
                colors.len(),
                graph.num_edges()
            )));
        }
        if colors.iter().any(|&c| c >= palette) {
            return Err(Error::Domain(format!("color outside palette 0..{palette}")));
        }
        Ok(ColoredGraphSmall {
            graph,
            colors,
            palette,
        })
    }

    /// From a colored edge list; every edge must carry a color.
    pub fn from_colored(graph: Graph, colors: &[Option<usize>]) -> Result<Self> {
        let total: Option<Vec<usize>> = colors.iter().copied().collect();
        match total {
            Some(c) => Self::new(graph, c),
            None => Err(Error::Domain(
                "every edge needs a color for the exhaustive search".into(),
            )),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn palette(&self) -> usize {
        self.palette
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowTree {
    /// Number of vertices.
    pub size: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Copy)]
struct SmallDsu {
    parent: [u8; MAX_VERTICES],
    size: [u8; MAX_VERTICES],
}

impl SmallDsu {
    fn new(n: usize) -> Self {
        let mut parent = [0u8; MAX_VERTICES];
        for (i, p) in parent.iter_mut().enumerate().take(n) {
            *p = i as u8;
        }
        SmallDsu {
            parent,
            size: [1; MAX_VERTICES],
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            x = self.parent[x] as usize;
        }
        x
    }
}

struct Search<'a> {
    edges: &'a [(usize, usize)],
    color_bit: Vec<u32>,
    limit: usize,
    best: usize,
    witness: Vec<usize>,
    stack: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, k: usize, dsu: SmallDsu, used: u32) {
        if self.best >= self.limit || k == self.edges.len() {
            return;
        }
        let (u, v) = self.edges[k];
        let (ru, rv) = (dsu.find(u), dsu.find(v));
        if ru != rv && used & self.color_bit[k] == 0 {
            let mut next = dsu;
            let (big, small) = if next.size[ru] >= next.size[rv] {
                (ru, rv)
            } else {
                (rv, ru)
            };
            next.parent[small] = big as u8;
            next.size[big] += next.size[small];
            self.stack.push(k);
            let size = next.size[big] as usize;
            if size > self.best {
                self.best = size;
                self.witness = self
                    .stack
                    .iter()
                    .copied()
                    .filter(|&e| next.find(self.edges[e].0) == big)
                    .collect();
            }
            self.run(k + 1, next, used | self.color_bit[k]);
            self.stack.pop();
        }
        self.run(k + 1, dsu, used);
    }
}

/// Largest rainbow tree by depth-first enumeration of rainbow forests.
///
/// Every rainbow tree is a component of some rainbow forest, so the largest
/// forest component over all rainbow forests is the answer.
pub fn max_rainbow_tree(cg: &ColoredGraphSmall) -> RainbowTree {
    let g = &cg.graph;
    if g.n() == 0 {
        return RainbowTree {
            size: 0,
            edges: Vec::new(),
        };
    }
    let mut distinct: Vec<usize> = cg.colors.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let color_bit = cg
        .colors
        .iter()
        .map(|c| 1u32 << distinct.binary_search(c).unwrap())
        .collect();
    let mut search = Search {
        edges: g.edges(),
        color_bit,
        limit: g.n().min(distinct.len() + 1),
        best: 1,
        witness: Vec::new(),
        stack: Vec::new(),
    };
    search.run(0, SmallDsu::new(g.n()), 0);
    let mut edges = search.witness;
    edges.sort_unstable();
    RainbowTree {
        size: search.best,
        edges,
    }
}

/// Checks that `edges` form a tree (connected, acyclic) whose colors are all distinct.
pub fn is_rainbow_tree(g: &Graph, colors: &[usize], edges: &[usize]) -> bool {
    let mut cs: Vec<usize> = edges.iter().map(|&e| colors[e]).collect();
    cs.sort_unstable();
    if cs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    if edges.is_empty() {
        return true;
    }
    let mut verts: Vec<usize> = edges
        .iter()
        .flat_map(|&e| [g.edge(e).0, g.edge(e).1])
        .collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != edges.len() + 1 {
        return false;
    }
    // BFS over the chosen edges must reach every endpoint.
    let mut seen = vec![false; g.n()];
    seen[verts[0]] = true;
    let mut queue = VecDeque::from([verts[0]]);
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &e in edges {
            let (a, b) = g.edge(e);
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    reached == verts.len()
}

/// Coloring-process ordering for a small instance: core-then-desc on a
/// connected graph with a 2-core, edge-id order otherwise.
pub fn small_instance_ordering(g: &Graph) -> EdgeOrdering {
    let part = connected_components(g);
    if part.count() == 1 {
        if let Ok(cm) = core_mantle_decompose(g, &part, 0) {
            return order_edges(g, &cm);
        }
    }
    EdgeOrdering::from_edges((0..g.num_edges()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub runs: usize,
    /// Maximum rainbow tree under the instance's own coloring.
    pub given_oracle: usize,
    /// Runs whose process result exceeds the maximum under the process's own coloring.
    pub violations: usize,
    /// Runs whose process result equals the maximum under the process's own coloring.
    pub equalities: usize,
    /// Runs whose process result exceeds `given_oracle`; informational.
    pub exceeds_given: usize,
    /// `oracle - process` per run, under the process's coloring.
    pub gaps: Vec<usize>,
}

/// Runs the coloring process `trials` times on the uncolored graph with the
/// instance's palette size. Each run is compared with the exact maximum
/// rainbow tree under the colors that run actually drew.
pub fn process_vs_oracle<R: Rng + ?Sized>(
    cg: &ColoredGraphSmall,
    trials: usize,
    rng: &mut R,
) -> OracleComparison {
    let g = cg.graph();
    let ordering = small_instance_ordering(g);
    let given_oracle = max_rainbow_tree(cg).size;
    let mut out = OracleComparison {
        runs: trials,
        given_oracle,
        violations: 0,
        equalities: 0,
        exceeds_given: 0,
        gaps: Vec::new(),
    };
    for _ in 0..trials {
        let (coloring, _) = run_process(g, &ordering, cg.palette(), rng);
        let got = rainbow_giant(g, &coloring).size;
        let processed: Vec<usize> = ordering.edges().to_vec();
        let sub = Graph::from_edges(g.n(), processed.iter().map(|&e| g.edge(e)).collect())
            .expect("subgraph");
        let drawn = processed
            .iter()
            .map(|&e| coloring.drawn(e).unwrap())
            .collect();
        let realized =
            ColoredGraphSmall::with_palette(sub, drawn, cg.palette()).expect("within bounds");
        let best = max_rainbow_tree(&realized).size;
        if got > best {
            out.violations += 1;
        } else {
            out.gaps.push(best - got);
        }
        if got == best {
            out.equalities += 1;
        }
        if got > given_oracle {
            out.exceeds_given += 1;
        }
    }
    out
}

/// Uniform G(n, m) with colors drawn uniformly from `0..palette`.
pub fn random_instance<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    palette: usize,
    rng: &mut R,
) -> Result<ColoredGraphSmall> {
    let g = gnm(n, m, rng)?;
    let colors = (0..m).map(|_| rng.random_range(0..palette)).collect();
    ColoredGraphSmall::with_palette(g, colors, palette)
}

/// Random recursive tree on `n` vertices with all edge colors distinct.
pub fn random_rainbow_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ColoredGraphSmall> {
    let mut g = Graph::new(n);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    for i in 1..n {
        let j = rng.random_range(0..i);
        g.add_edge(labels[j], labels[i]);
    }
    let mut colors: Vec<usize> = (0..n.saturating_sub(1)).collect();
    colors.shuffle(rng);
    let palette = colors.len().max(1);
    ColoredGraphSmall::with_palette(g, colors, palette)
}
