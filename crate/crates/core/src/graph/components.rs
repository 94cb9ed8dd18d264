use super::Graph;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn set_size(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Partition of the vertex set into connected components.
///
/// Component ids are assigned in increasing order of the smallest vertex
/// they contain, so vertex 0 is always in component 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    component: Vec<usize>,
    sizes: Vec<usize>,
    largest: usize,
}

impl ComponentPartition {
    pub fn component_of(&self, v: usize) -> usize {
        self.component[v]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Id of the largest component; ties go to the one with the smallest vertex.
    pub fn largest(&self) -> usize {
        self.largest
    }

    pub fn largest_size(&self) -> usize {
        self.sizes.get(self.largest).copied().unwrap_or(0)
    }

    pub fn members(&self, cid: usize) -> Vec<usize> {
        (0..self.component.len())
            .filter(|&v| self.component[v] == cid)
            .collect()
    }

    /// Edge ids whose endpoints lie in component `cid`.
    pub fn edges_of(&self, g: &Graph, cid: usize) -> Vec<usize> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, _))| self.component[u] == cid)
            .map(|(e, _)| e)
            .collect()
    }
}

pub fn connected_components(g: &Graph) -> ComponentPartition {
    partition_from_edges(g.n(), g.edges().iter().copied())
}

pub(crate) fn partition_from_edges(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> ComponentPartition {
    let mut uf = UnionFind::new(n);
    for (u, v) in edges {
        uf.union(u, v);
    }
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let component: Vec<usize> = (0..n)
        .map(|v| {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = sizes.len();
                sizes.push(0);
            }
            sizes[label[r]] += 1;
            label[r]
        })
        .collect();
    let mut largest = 0;
    for (cid, &s) in sizes.iter().enumerate() {
        if s > sizes[largest] {
            largest = cid;
        }
    }
    ComponentPartition {
        component,
        sizes,
        largest,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_graph_is_all_singletons() {
        let p = connected_components(&Graph::new(4));
        assert_eq!(p.count(), 4);
        assert!(p.sizes().iter().all(|&s| s == 1));
        assert_eq!(p.largest(), 0);
    }

    #[test]
    fn triangle_plus_isolated_vertex() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = connected_components(&g);
        assert_eq!(p.count(), 2);
        assert_eq!(p.members(p.component_of(0)), vec![0, 1, 2]);
        assert_eq!(p.members(p.component_of(3)), vec![3]);
        assert_eq!(p.largest(), p.component_of(0));
        assert_eq!(p.edges_of(&g, p.largest()), vec![0, 1, 2]);
    }

    #[test]
    fn largest_tie_breaks_to_smallest_vertex() {
        let g = Graph::from_edges(4, vec![(2, 3), (0, 1)]).unwrap();
        let p = connected_components(&g);
        assert_eq!(p.largest(), p.component_of(0));
    }

    #[test]
    fn union_find_sizes() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 1));
        assert!(!uf.union(0, 3));
        assert_eq!(uf.set_size(3), 3);
        assert_eq!(uf.set_size(4), 1);
    }
}
