use std::collections::VecDeque;

use super::{Adjacency, ComponentPartition, Graph};
use crate::error::{Error, Result};

/// Vertex and edge ids of a 2-core, both sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TwoCore {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Queue-based peeling of vertices with degree at most one, restricted to
/// the vertices for which `in_scope` holds. Returns (vertex alive, edge alive).
fn peel(g: &Graph, adj: &Adjacency, in_scope: impl Fn(usize) -> bool) -> (Vec<bool>, Vec<bool>) {
    let n = g.n();
    let mut alive_v: Vec<bool> = (0..n).map(&in_scope).collect();
    let mut alive_e: Vec<bool> = g.edges().iter().map(|&(u, _)| alive_v[u]).collect();
    let mut deg: Vec<usize> = (0..n)
        .map(|v| if alive_v[v] { adj.degree(v) } else { 0 })
        .collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| alive_v[v] && deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive_v[v] {
            continue;
        }
        alive_v[v] = false;
        for &(w, e) in adj.neighbors(v) {
            if !alive_e[e] {
                continue;
            }
            alive_e[e] = false;
            deg[w] -= 1;
            if alive_v[w] && deg[w] == 1 {
                queue.push_back(w);
            }
        }
    }
    (alive_v, alive_e)
}

fn collect(alive_v: &[bool], alive_e: &[bool]) -> TwoCore {
    TwoCore {
        vertices: (0..alive_v.len()).filter(|&v| alive_v[v]).collect(),
        edges: (0..alive_e.len()).filter(|&e| alive_e[e]).collect(),
    }
}

/// 2-core of component `cid`: the maximal subgraph of minimum degree two.
/// Empty when the component is a tree.
pub fn two_core(g: &Graph, comp: &ComponentPartition, cid: usize) -> TwoCore {
    let adj = g.adjacency();
    let (v, e) = peel(g, &adj, |v| comp.component_of(v) == cid);
    collect(&v, &e)
}

/// 2-core of the whole graph (union over all components).
pub fn two_core_all(g: &Graph) -> TwoCore {
    let adj = g.adjacency();
    let (v, e) = peel(g, &adj, |_| true);
    collect(&v, &e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Outside,
    Core,
    Mantle,
}

/// Core/mantle decomposition of one connected component.
///
/// The mantle edges form a forest; every tree of that forest contains
/// exactly one core vertex, its anchor. For a mantle edge `e`, `desc(e)` is
/// the number of vertices below `e`, i.e. the vertices cut off from the core
/// when `e` is removed.
#[derive(Debug, Clone)]
pub struct CoreMantle {
    component: usize,
    component_size: usize,
    core_vertices: Vec<usize>,
    core_edges: Vec<usize>,
    mantle_edges: Vec<usize>,
    class: Vec<EdgeClass>,
    parent_edge: Vec<Option<usize>>,
    anchor: Vec<Option<usize>>,
    desc: Vec<usize>,
}

impl CoreMantle {
    pub fn component(&self) -> usize {
        self.component
    }

    pub fn component_size(&self) -> usize {
        self.component_size
    }

    pub fn core_vertices(&self) -> &[usize] {
        &self.core_vertices
    }

    pub fn core_edges(&self) -> &[usize] {
        &self.core_edges
    }

    pub fn mantle_edges(&self) -> &[usize] {
        &self.mantle_edges
    }

    pub fn num_edges(&self) -> usize {
        self.core_edges.len() + self.mantle_edges.len()
    }

    pub fn class(&self, e: usize) -> EdgeClass {
        self.class[e]
    }

    pub fn is_core_vertex(&self, v: usize) -> bool {
        self.anchor[v] == Some(v)
    }

    /// Edge joining a mantle vertex to its parent, `None` for core vertices.
    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.parent_edge[v]
    }

    /// The core vertex whose mantle tree contains `v`.
    pub fn anchor(&self, v: usize) -> Option<usize> {
        self.anchor[v]
    }

    pub fn desc(&self, e: usize) -> Option<usize> {
        (self.class[e] == EdgeClass::Mantle).then(|| self.desc[e])
    }

    /// The endpoint of mantle edge `e` farther from the core.
    pub fn child_vertex(&self, g: &Graph, e: usize) -> Option<usize> {
        let (u, v) = g.edge(e);
        if self.parent_edge[u] == Some(e) {
            Some(u)
        } else if self.parent_edge[v] == Some(e) {
            Some(v)
        } else {
            None
        }
    }

    /// Number of mantle vertices hanging (directly or not) below each core vertex.
    pub fn tree_sizes(&self) -> Vec<(usize, usize)> {
        let mut size: std::collections::BTreeMap<usize, usize> =
            self.core_vertices.iter().map(|&r| (r, 0)).collect();
        for (v, a) in self.anchor.iter().enumerate() {
            match a {
                Some(a) if *a != v => *size.get_mut(a).unwrap() += 1,
                _ => {}
            }
        }
        size.into_iter().collect()
    }
}

/// Decomposes component `cid` into its 2-core and the mantle forest,
/// computing `desc` for every mantle edge by accumulating subtree sizes.
pub fn core_mantle_decompose(
    g: &Graph,
    comp: &ComponentPartition,
    cid: usize,
) -> Result<CoreMantle> {
    let adj = g.adjacency();
    let n = g.n();
    let m = g.num_edges();
    let (alive_v, alive_e) = peel(g, &adj, |v| comp.component_of(v) == cid);
    let core = collect(&alive_v, &alive_e);
    if core.vertices.is_empty() {
        return Err(Error::EmptyCore(cid));
    }

    let mut class = vec![EdgeClass::Outside; m];
    for &e in &core.edges {
        class[e] = EdgeClass::Core;
    }
    let mut parent_edge = vec![None; n];
    let mut anchor = vec![None; n];
    let mut order = Vec::new();
    let mut mantle_edges = Vec::new();
    for &r in &core.vertices {
        anchor[r] = Some(r);
    }
    for &r in &core.vertices {
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in adj.neighbors(v) {
                if class[e] != EdgeClass::Outside || parent_edge[v] == Some(e) {
                    continue;
                }
                debug_assert!(anchor[w].is_none(), "mantle is not a forest");
                class[e] = EdgeClass::Mantle;
                mantle_edges.push(e);
                parent_edge[w] = Some(e);
                anchor[w] = Some(r);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    mantle_edges.sort_unstable();

    let mut below = vec![1usize; n];
    let mut desc = vec![0usize; m];
    for &w in order.iter().rev() {
        let e = parent_edge[w].unwrap();
        desc[e] = below[w];
        let (a, b) = g.edge(e);
        let parent = if a == w { b } else { a };
        below[parent] += below[w];
    }

    Ok(CoreMantle {
        component: cid,
        component_size: comp.sizes()[cid],
        core_vertices: core.vertices,
        core_edges: core.edges,
        mantle_edges,
        class,
        parent_edge,
        anchor,
        desc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::connected_components;

    fn pendant_triangle() -> Graph {
        // triangle 0,1,2 with mantle 0-3, 3-4, 3-5
        Graph::from_edges(6, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (3, 5)]).unwrap()
    }

    #[test]
    fn tree_has_empty_core() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let p = connected_components(&g);
        assert_eq!(two_core(&g, &p, 0), TwoCore::default());
        assert_eq!(
            core_mantle_decompose(&g, &p, 0).unwrap_err(),
            Error::EmptyCore(0)
        );
    }

    #[test]
    fn cycle_is_its_own_core() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5)).collect()).unwrap();
        let p = connected_components(&g);
        let c = two_core(&g, &p, 0);
        assert_eq!(c.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(c.edges, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn pendant_path_is_peeled() {
        let g = Graph::from_edges(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)]).unwrap();
        let p = connected_components(&g);
        let c = two_core(&g, &p, 0);
        assert_eq!(c.vertices, vec![0, 1, 2]);
        assert_eq!(c.edges, vec![0, 1, 2]);
    }

    #[test]
    fn self_loop_is_a_core() {
        let g = Graph::from_edges(3, vec![(0, 0), (0, 1), (1, 2)]).unwrap();
        let c = two_core_all(&g);
        assert_eq!(c.vertices, vec![0]);
        assert_eq!(c.edges, vec![0]);
    }

    #[test]
    fn parallel_edges_form_a_core() {
        let g = Graph::from_edges(3, vec![(0, 1), (1, 0), (1, 2)]).unwrap();
        let c = two_core_all(&g);
        assert_eq!(c.vertices, vec![0, 1]);
        assert_eq!(c.edges, vec![0, 1]);
    }

    #[test]
    fn desc_counts_subtrees() {
        let g = pendant_triangle();
        let p = connected_components(&g);
        let cm = core_mantle_decompose(&g, &p, 0).unwrap();
        assert_eq!(cm.core_edges(), &[0, 1, 2]);
        assert_eq!(cm.mantle_edges(), &[3, 4, 5]);
        assert_eq!(cm.desc(3), Some(3));
        assert_eq!(cm.desc(4), Some(1));
        assert_eq!(cm.desc(5), Some(1));
        assert_eq!(cm.desc(0), None);
        assert_eq!(cm.child_vertex(&g, 3), Some(3));
        assert_eq!(cm.anchor(5), Some(0));
        assert_eq!(cm.tree_sizes(), vec![(0, 3), (1, 0), (2, 0)]);
    }

    #[test]
    fn single_pendant_edge() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let p = connected_components(&g);
        let cm = core_mantle_decompose(&g, &p, 0).unwrap();
        assert_eq!(cm.desc(3), Some(1));
    }

    #[test]
    fn other_components_are_outside() {
        let mut g = pendant_triangle();
        let a = g.add_vertex();
        let b = g.add_vertex();
        let e = g.add_edge(a, b);
        let p = connected_components(&g);
        let cm = core_mantle_decompose(&g, &p, p.largest()).unwrap();
        assert_eq!(cm.class(e), EdgeClass::Outside);
        assert_eq!(cm.component_size(), 6);
    }
}
