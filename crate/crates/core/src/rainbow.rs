//! The sequential rainbow colouring process on the giant component.
//!
//! Edges are visited core first, then mantle edges by decreasing `desc`.
//! Each edge draws a uniform color; an edge whose color is already held by
//! an earlier retained edge is deleted. The retained edges are rainbow.

use std::collections::VecDeque;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::components::partition_from_edges;
use crate::graph::{connected_components, CoreMantle, EdgeClass, Graph};
use crate::theory::{desc_bound, dj_bound};

/// The order in which edges are colored, with each edge's `desc` captured
/// from the uncolored graph (zero for core edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrdering {
    edges: Vec<usize>,
    desc: Vec<usize>,
    core_len: usize,
}

impl EdgeOrdering {
    /// Visits `edges` in the given order with every edge treated as core.
    pub fn from_edges(edges: Vec<usize>) -> Self {
        let core_len = edges.len();
        EdgeOrdering {
            desc: vec![0; core_len],
            edges,
            core_len,
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of leading core edges.
    pub fn core_len(&self) -> usize {
        self.core_len
    }

    /// `desc` of the edge at position `pos` (0-based).
    pub fn desc_at(&self, pos: usize) -> usize {
        self.desc[pos]
    }

    pub fn is_mantle_at(&self, pos: usize) -> bool {
        pos >= self.core_len
    }
}

/// Core edges by `(min endpoint, max endpoint, id)`, then mantle edges by
/// `desc` descending with ties broken by id.
pub fn order_edges(g: &Graph, cm: &CoreMantle) -> EdgeOrdering {
    let mut core: Vec<usize> = cm.core_edges().to_vec();
    core.sort_by_key(|&e| {
        let (u, v) = g.edge(e);
        (u.min(v), u.max(v), e)
    });
    let mut mantle: Vec<(usize, usize)> = cm
        .mantle_edges()
        .iter()
        .map(|&e| (cm.desc(e).unwrap(), e))
        .collect();
    mantle.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let core_len = core.len();
    let mut desc = vec![0; core_len];
    desc.extend(mantle.iter().map(|m| m.0));
    core.extend(mantle.iter().map(|m| m.1));
    EdgeOrdering {
        edges: core,
        desc,
        core_len,
    }
}

/// Colors drawn by the process, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    colors: usize,
    drawn: Vec<Option<usize>>,
    kept: Vec<bool>,
}

impl EdgeColoring {
    pub fn colors(&self) -> usize {
        self.colors
    }

    /// Color drawn for `e`, kept or not; `None` if `e` was never processed.
    pub fn drawn(&self, e: usize) -> Option<usize> {
        self.drawn[e]
    }

    pub fn retained_color(&self, e: usize) -> Option<usize> {
        if self.kept[e] {
            self.drawn[e]
        } else {
            None
        }
    }

    pub fn is_retained(&self, e: usize) -> bool {
        self.kept[e]
    }

    pub fn is_deleted(&self, e: usize) -> bool {
        self.drawn[e].is_some() && !self.kept[e]
    }

    pub fn retained_edges(&self) -> Vec<usize> {
        (0..self.kept.len()).filter(|&e| self.kept[e]).collect()
    }

    pub fn deleted_edges(&self) -> Vec<usize> {
        (0..self.kept.len())
            .filter(|&e| self.is_deleted(e))
            .collect()
    }

    /// Per-edge colors for the colored edge-list format (`None` = deleted or unprocessed).
    pub fn output_colors(&self) -> Vec<Option<usize>> {
        (0..self.kept.len())
            .map(|e| self.retained_color(e))
            .collect()
    }

    /// True when no color is held by two retained edges.
    pub fn is_rainbow(&self) -> bool {
        let mut seen = vec![false; self.colors];
        for c in (0..self.kept.len()).filter_map(|e| self.retained_color(e)) {
            if std::mem::replace(&mut seen[c], true) {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// 1-based position in the ordering.
    pub step: usize,
    pub edge: usize,
    pub color: usize,
    pub kept: bool,
    pub desc: usize,
    /// `desc` if the edge was deleted, otherwise 0.
    pub loss: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProcessTrace {
    steps: Vec<Step>,
}

impl ProcessTrace {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn kept(&self) -> usize {
        self.steps.iter().filter(|s| s.kept).count()
    }

    pub fn deleted(&self) -> usize {
        self.steps.len() - self.kept()
    }

    /// Sum of the losses over steps strictly after `prefix`.
    pub fn loss_after(&self, prefix: usize) -> usize {
        self.steps
            .iter()
            .filter(|s| s.step > prefix)
            .map(|s| s.loss)
            .sum()
    }

    pub fn total_loss(&self) -> usize {
        self.loss_after(0)
    }

    /// Running number of deleted edges after each step.
    pub fn running_deleted(&self) -> Vec<usize> {
        self.steps
            .iter()
            .scan(0, |acc, s| {
                *acc += usize::from(!s.kept);
                Some(*acc)
            })
            .collect()
    }

    /// CSV with header `step,edge_id,color,kept,desc,X_i`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "step,edge_id,color,kept,desc,X_i")?;
        for s in &self.steps {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                s.step,
                s.edge,
                s.color,
                u8::from(s.kept),
                s.desc,
                s.loss
            )?;
        }
        Ok(())
    }
}

/// Runs the coloring process over `ordering` with a palette of `colors`.
pub fn run_process<R: Rng + ?Sized>(
    g: &Graph,
    ordering: &EdgeOrdering,
    colors: usize,
    rng: &mut R,
) -> (EdgeColoring, ProcessTrace) {
    assert!(colors >= 1, "palette must be nonempty");
    let mut used = vec![false; colors];
    let mut drawn = vec![None; g.num_edges()];
    let mut kept = vec![false; g.num_edges()];
    let mut steps = Vec::with_capacity(ordering.len());
    for (pos, &e) in ordering.edges().iter().enumerate() {
        let color = rng.random_range(0..colors);
        let keep = !used[color];
        used[color] = true;
        drawn[e] = Some(color);
        kept[e] = keep;
        let desc = ordering.desc_at(pos);
        steps.push(Step {
            step: pos + 1,
            edge: e,
            color,
            kept: keep,
            desc,
            loss: if keep { 0 } else { desc },
        });
    }
    (
        EdgeColoring {
            colors,
            drawn,
            kept,
        },
        ProcessTrace { steps },
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowGiant {
    pub vertices: Vec<usize>,
    pub size: usize,
}

/// Largest component of the retained edges.
pub fn rainbow_giant(g: &Graph, coloring: &EdgeColoring) -> RainbowGiant {
    let part = partition_from_edges(
        g.n(),
        coloring.retained_edges().into_iter().map(|e| g.edge(e)),
    );
    let cid = part.largest();
    RainbowGiant {
        vertices: part.members(cid),
        size: part.largest_size(),
    }
}

/// Breadth-first spanning tree of `vertices` over the retained edges.
pub fn rainbow_spanning_tree(
    g: &Graph,
    vertices: &[usize],
    coloring: &EdgeColoring,
) -> Result<Vec<usize>> {
    let Some(&root) = vertices.iter().min() else {
        return Ok(Vec::new());
    };
    let mut inside = vec![false; g.n()];
    for &v in vertices {
        inside[v] = true;
    }
    let retained: Vec<usize> = coloring
        .retained_edges()
        .into_iter()
        .filter(|&e| {
            let (u, v) = g.edge(e);
            inside[u] && inside[v]
        })
        .collect();
    let sub = Graph::from_edges(g.n(), retained.iter().map(|&e| g.edge(e)).collect())?;
    let adj = sub.adjacency();
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::with_capacity(vertices.len().saturating_sub(1));
    while let Some(v) = queue.pop_front() {
        for &(w, local) in adj.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                tree.push(retained[local]);
                queue.push_back(w);
            }
        }
    }
    if tree.len() + 1 != vertices.len() {
        return Err(Error::NotConnected {
            reached: tree.len() + 1,
            expected: vertices.len(),
        });
    }
    Ok(tree)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescViolation {
    /// 1-based position in the ordering.
    pub position: usize,
    pub edge: usize,
    pub mantle: bool,
    pub desc: usize,
    pub bound: f64,
}

/// Positions `i >= 5 eps^2 n` whose edge is not a mantle edge or has
/// `desc(e_i) > 36 (eps n / i)^2`. `n` is the ambient vertex count.
pub fn measure_desc_bound(ordering: &EdgeOrdering, n: usize, epsilon: f64) -> Vec<DescViolation> {
    let start = (5.0 * epsilon * epsilon * n as f64).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    for i in start..=ordering.len() {
        let pos = i - 1;
        let bound = desc_bound(n, epsilon, i);
        let mantle = ordering.is_mantle_at(pos);
        let desc = ordering.desc_at(pos);
        if !mantle || desc as f64 > bound {
            out.push(DescViolation {
                position: i,
                edge: ordering.edges()[pos],
                mantle,
                desc,
                bound,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DjMeasurement {
    pub j: u64,
    pub count: usize,
    pub bound: f64,
    pub ok: bool,
}

/// `D_j`, the number of mantle edges with more than `j` descendants, against `3 eps n / sqrt(j)`.
pub fn measure_dj(cm: &CoreMantle, j: u64, n: usize, epsilon: f64) -> DjMeasurement {
    let count = cm
        .mantle_edges()
        .iter()
        .filter(|&&e| cm.desc(e).unwrap() as u64 > j)
        .count();
    let bound = dj_bound(n, epsilon, j);
    DjMeasurement {
        j,
        count,
        bound,
        ok: count as f64 <= bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeafLoss {
    pub leaves: usize,
    pub deleted: usize,
    /// Exact expected number of repeats, see [`expected_collisions`].
    pub expected: f64,
}

/// Colors the leaf edges of the component in uniformly random order with
/// `colors` colors and counts the deletions.
pub fn leaf_loss_experiment<R: Rng + ?Sized>(
    g: &Graph,
    cm: &CoreMantle,
    colors: usize,
    rng: &mut R,
) -> LeafLoss {
    let deg = g.degrees();
    let mut leaf_edges: Vec<usize> = cm
        .mantle_edges()
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.edge(e);
            deg[u] == 1 || deg[v] == 1
        })
        .collect();
    leaf_edges.shuffle(rng);
    let ordering = EdgeOrdering::from_edges(leaf_edges);
    let (_, trace) = run_process(g, &ordering, colors, rng);
    LeafLoss {
        leaves: ordering.len(),
        deleted: trace.deleted(),
        expected: expected_collisions(ordering.len(), colors),
    }
}

/// Expected deletions when `items` edges are colored sequentially from
/// `colors` colors: `items - colors (1 - (1 - 1/colors)^items)`.
pub fn expected_collisions(items: usize, colors: usize) -> f64 {
    let c = colors as f64;
    let distinct = c * -((items as f64) * (-1.0 / c).ln_1p()).exp_m1();
    items as f64 - distinct
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Accounting {
    pub giant: usize,
    pub rainbow_giant: usize,
    /// Vertices outside the largest component once only core deletions are applied.
    pub core_loss: usize,
    /// Sum of `desc` over deleted mantle edges.
    pub mantle_loss: usize,
    pub ok: bool,
}

/// Checks `giant - rainbow giant <= core_loss + mantle_loss`.
pub fn disconnection_accounting(
    g: &Graph,
    cm: &CoreMantle,
    coloring: &EdgeColoring,
    trace: &ProcessTrace,
) -> Accounting {
    let giant = cm.component_size();
    let rg = rainbow_giant(g, coloring).size;
    let h_edges = (0..g.num_edges()).filter(|&e| match cm.class(e) {
        EdgeClass::Core => coloring.is_retained(e),
        EdgeClass::Mantle => true,
        EdgeClass::Outside => false,
    });
    let h = partition_from_edges(g.n(), h_edges.map(|e| g.edge(e)));
    let core_loss = giant - h.largest_size();
    let mantle_loss = trace.total_loss();
    Accounting {
        giant,
        rainbow_giant: rg,
        core_loss,
        mantle_loss,
        ok: giant - rg <= core_loss + mantle_loss,
    }
}

/// Replays the deletions one at a time and checks that removing a mantle
/// edge `e` never shrinks the component on its core side by more than `desc(e)`.
pub fn mantle_deletion_locality(g: &Graph, cm: &CoreMantle, trace: &ProcessTrace) -> bool {
    let mut alive: Vec<bool> = (0..g.num_edges())
        .map(|e| cm.class(e) != EdgeClass::Outside)
        .collect();
    let size_from = |alive: &[bool], root: usize| {
        let edges: Vec<(usize, usize)> = (0..g.num_edges())
            .filter(|&e| alive[e])
            .map(|e| g.edge(e))
            .collect();
        let sub = Graph::from_edges(g.n(), edges).expect("subgraph of a valid graph");
        let p = connected_components(&sub);
        p.sizes()[p.component_of(root)]
    };
    for s in trace.steps().iter().filter(|s| !s.kept) {
        if cm.class(s.edge) != EdgeClass::Mantle {
            alive[s.edge] = false;
            continue;
        }
        let child = cm.child_vertex(g, s.edge).expect("mantle edge has a child");
        let (u, v) = g.edge(s.edge);
        let parent = if u == child { v } else { u };
        let before = size_from(&alive, parent);
        alive[s.edge] = false;
        let after = size_from(&alive, parent);
        if before - after > s.desc {
            return false;
        }
    }
    true
}
