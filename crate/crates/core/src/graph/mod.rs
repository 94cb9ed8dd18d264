//! Multigraph substrate: edge-list graphs with stable edge ids, connected
//! components, 2-core peeling and the core/mantle decomposition.

pub(crate) mod components;
mod core;
mod io;

pub use self::components::{connected_components, ComponentPartition, UnionFind};
pub use self::core::{
    core_mantle_decompose, two_core, two_core_all, CoreMantle, EdgeClass, TwoCore,
};
pub use self::io::{
    read_colored_edge_list, read_edge_list, write_colored_edge_list, write_edge_list,
};

use crate::error::{Error, Result};

/// Undirected multigraph on vertices `0..n`.
///
/// The edge id of an edge is its index in the edge list and never changes.
/// Self-loops and parallel edges are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn with_capacity(n: usize, m: usize) -> Self {
        Graph {
            n,
            edges: Vec::with_capacity(m),
        }
    }

    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::Domain(format!(
                "edge ({u}, {v}) out of range for n = {n}"
            )));
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Appends an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        assert!(
            u < self.n && v < self.n,
            "edge ({u}, {v}) out of range for n = {}",
            self.n
        );
        self.edges.push((u, v));
        self.edges.len() - 1
    }

    /// Degrees with a self-loop counted twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::new(self)
    }
}

/// Compressed adjacency lists of `(neighbour, edge id)` pairs.
///
/// A self-loop at `v` appears twice in the list of `v`.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    entries: Vec<(usize, usize)>,
}

impl Adjacency {
    fn new(g: &Graph) -> Self {
        let deg = g.degrees();
        let mut offsets = Vec::with_capacity(g.n + 1);
        offsets.push(0);
        for d in &deg {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..g.n].to_vec();
        let mut entries = vec![(0, 0); offsets[g.n]];
        for (e, &(u, v)) in g.edges.iter().enumerate() {
            entries[fill[u]] = (v, e);
            fill[u] += 1;
            entries[fill[v]] = (u, e);
            fill[v] += 1;
        }
        Adjacency { offsets, entries }
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.entries[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_counts_twice() {
        let g = Graph::from_edges(2, vec![(0, 0), (0, 1)]).unwrap();
        assert_eq!(g.degrees(), vec![3, 1]);
        let adj = g.adjacency();
        assert_eq!(adj.degree(0), 3);
        assert_eq!(adj.neighbors(1), &[(0, 1)]);
    }

    #[test]
    fn out_of_range_edge_rejected() {
        assert!(Graph::from_edges(2, vec![(0, 2)]).is_err());
    }
}
