//! Undirected graphs; multigraphs (loops, parallel edges) only where a task
//! asks for them.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Edges with `u <= v`, in input order.
    edges: Vec<(usize, usize)>,
    multigraph: bool,
    /// Adjacency bitsets, one row of 64-bit words per vertex.
    adj: Vec<Vec<u64>>,
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    fn build(n: usize, edges: Vec<(usize, usize)>, multigraph: bool) -> Result<Self> {
        let w = words(n);
        let mut adj = vec![vec![0u64; w]; n];
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u}, {v}) outside {n} vertices")));
            }
            let (u, v) = if u <= v { (u, v) } else { (v, u) };
            if !multigraph {
                if u == v {
                    return Err(Error::Input(format!("loop at vertex {u} in a simple graph")));
                }
                if adj[u][v / 64] >> (v % 64) & 1 == 1 {
                    return Err(Error::Input(format!("repeated edge ({u}, {v}) in a simple graph")));
                }
            }
            adj[u][v / 64] |= 1 << (v % 64);
            adj[v][u / 64] |= 1 << (u % 64);
            norm.push((u, v));
        }
        Ok(Graph {
            n,
            edges: norm,
            multigraph,
            adj,
        })
    }

    /// A simple graph; loops and repeated edges are rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(n, edges, false)
    }

    /// A multigraph; loops and parallel edges are kept.
    pub fn multigraph(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(n, edges, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn adjacency_row(&self, u: usize) -> &[u64] {
        &self.adj[u]
    }

    /// Distinct neighbours other than `v` itself, ascending.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| u != v && self.adjacent(v, u)).collect()
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(|&(u, v)| u == v)
    }

    /// Vertex sets of the connected components, each ascending.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Components of the spanning subgraph `(V, edges)`.
    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Induced subgraph on `vertices` (relabelled `0..len` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Self::build(vertices.len(), edges, self.multigraph).expect("subgraph of a valid graph")
    }

    /// Same edges on `n' >= n` vertices.
    pub fn with_isolated(&self, extra: usize) -> Graph {
        Self::build(self.n + extra, self.edges.clone(), self.multigraph).expect("superset of vertices")
    }

    pub fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::new(n, e).unwrap()
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, Vec::new()).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).unwrap()
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i)).collect()).unwrap()
    }

    pub fn star(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (0, i)).collect()).unwrap()
    }

    /// Erdos-Renyi `G(n, p)`.
    pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    e.push((u, v));
                }
            }
        }
        Graph::new(n, e).unwrap()
    }

    /// Graph whose edge set is given by the bits of `mask` over all pairs
    /// `u < v` in lexicographic order.
    pub fn from_mask(n: usize, mask: u64) -> Graph {
        let mut e = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    e.push((u, v));
                }
                bit += 1;
            }
        }
        Graph::new(n, e).unwrap()
    }

    /// `m` edges drawn uniformly from all vertex pairs including loops.
    pub fn random_multigraph<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
        let e = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        Graph::multigraph(n, e).unwrap()
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
