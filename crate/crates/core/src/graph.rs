//! Undirected simple graphs over dense vertex ids `0..n`.

use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    UnknownVertex { vertex: Vertex, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// Adjacency lists are kept sorted so that edge queries are a binary search
/// and iteration order is deterministic.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.insert_unchecked(v - 1, v);
        }
        g
    }

    /// Cycle on `n >= 3` vertices; smaller `n` degrade to a path.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.insert_unchecked(0, n - 1);
        }
        g
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for v in 1..=leaves {
            g.insert_unchecked(0, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Sorted neighbor list. Panics on an out-of-range vertex.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.insert_unchecked(u, v);
        Ok(())
    }

    /// Returns whether the edge was present.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let i = self.adj[u].binary_search(&v).unwrap();
        self.adj[u].remove(i);
        let j = self.adj[v].binary_search(&u).unwrap();
        self.adj[v].remove(j);
        self.edge_count -= 1;
        true
    }

    fn insert_unchecked(&mut self, u: Vertex, v: Vertex) {
        let i = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(i, v);
        let j = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(j, u);
        self.edge_count += 1;
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    pub fn is_clique(&self, vertices: &[Vertex]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n()
    }

    /// Renames every vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(
            perm.len(),
            self.n(),
            "permutation length must match vertex count"
        );
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.insert_unchecked(perm[u], perm[v]);
        }
        g
    }

    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.insert_unchecked(i, j);
                }
            }
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
