//! Linear orderings, back/forward neighborhoods and simplicial orderings.
//!
//! Throughout the crate an ordering lists vertices from least to greatest.
//! The *parents* of `v` are its neighbors strictly less than `v`, the
//! *children* those strictly greater. An ordering is simplicial when every
//! closed parent set `parents(v) + v` is a clique; a graph admits one exactly
//! when it is chordal.

use std::collections::BTreeSet;

use crate::graph::{Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOrdering {
    order: Vec<Vertex>,
    position: Vec<usize>,
}

impl LinearOrdering {
    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn new(order: Vec<Vertex>) -> Result<Self, GraphError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(GraphError::UnknownVertex { vertex: v, n });
            }
            if position[v] != usize::MAX {
                return Err(GraphError::InvalidParameters(format!(
                    "vertex {v} appears twice in ordering"
                )));
            }
            position[v] = i;
        }
        Ok(LinearOrdering { order, position })
    }

    pub fn identity(n: usize) -> Self {
        LinearOrdering {
            order: (0..n).collect(),
            position: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    pub fn vertex_at(&self, i: usize) -> Vertex {
        self.order[i]
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.order
    }

    pub fn less(&self, x: Vertex, y: Vertex) -> bool {
        self.position[x] < self.position[y]
    }

    pub fn least(&self) -> Option<Vertex> {
        self.order.first().copied()
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        LinearOrdering::new(order).expect("reversal of a permutation is a permutation")
    }
}

/// A graph together with an ordering, with parent sets precomputed.
#[derive(Debug, Clone)]
pub struct OrderedGraph {
    graph: Graph,
    ordering: LinearOrdering,
    /// `parents[v]` sorted ascending in the ordering.
    parents: Vec<Vec<Vertex>>,
}

impl OrderedGraph {
    pub fn new(graph: Graph, ordering: LinearOrdering) -> Result<Self, GraphError> {
        if graph.n() != ordering.len() {
            return Err(GraphError::InvalidParameters(format!(
                "ordering has {} vertices but graph has {}",
                ordering.len(),
                graph.n()
            )));
        }
        let parents = graph
            .vertices()
            .map(|v| {
                let mut ps: Vec<Vertex> = graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| ordering.less(u, v))
                    .collect();
                ps.sort_by_key(|&u| ordering.position(u));
                ps
            })
            .collect();
        Ok(OrderedGraph {
            graph,
            ordering,
            parents,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ordering(&self) -> &LinearOrdering {
        &self.ordering
    }

    /// Back-neighbors of `v`, least first.
    pub fn parents(&self, v: Vertex) -> Result<&[Vertex], GraphError> {
        self.graph.check_vertex(v)?;
        Ok(&self.parents[v])
    }

    /// Forward-neighbors of `v`, least first.
    pub fn children(&self, v: Vertex) -> Result<Vec<Vertex>, GraphError> {
        self.graph.check_vertex(v)?;
        let mut cs: Vec<Vertex> = self
            .graph
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| self.ordering.less(v, u))
            .collect();
        cs.sort_by_key(|&u| self.ordering.position(u));
        Ok(cs)
    }

    /// The least parent of `v`, if any.
    pub fn major_parent(&self, v: Vertex) -> Result<Option<Vertex>, GraphError> {
        Ok(self.parents(v)?.first().copied())
    }

    pub fn max_parents(&self) -> usize {
        self.parents.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_simplicial_ordering(&self) -> bool {
        // For each v, let p be its greatest parent. The ordering is simplicial
        // iff every other parent of v is also a parent of p.
        self.graph.vertices().all(|v| {
            let ps = &self.parents[v];
            match ps.split_last() {
                None => true,
                Some((&p, rest)) => rest.iter().all(|&u| self.graph.has_edge(u, p)),
            }
        })
    }
}

/// Maximum-cardinality search visiting order, ties broken by lowest vertex id.
///
/// Each vertex's previously visited neighbors form a clique iff the graph is
/// chordal, so the visit order is already simplicial in the parents-first
/// convention (it is the reverse of a perfect elimination ordering).
pub fn mcs_ordering(g: &Graph) -> LinearOrdering {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut buckets: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n + 1];
    buckets[0].extend(g.vertices());
    let mut top = 0usize;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        while buckets[top].is_empty() {
            top -= 1;
        }
        let v = buckets[top].pop_first().expect("bucket is nonempty");
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !visited[w] {
                buckets[weight[w]].remove(&w);
                weight[w] += 1;
                buckets[weight[w]].insert(w);
                top = top.max(weight[w]);
            }
        }
    }
    LinearOrdering {
        position: invert(&order),
        order,
    }
}

fn invert(order: &[Vertex]) -> Vec<usize> {
    let mut position = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    position
}

/// A simplicial ordering of `g`, or `None` when `g` is not chordal.
pub fn simplicial_ordering(g: &Graph) -> Option<LinearOrdering> {
    let ordering = mcs_ordering(g);
    let og = OrderedGraph::new(g.clone(), ordering).expect("sizes match");
    og.is_simplicial_ordering().then_some(og.ordering)
}

pub fn is_chordal(g: &Graph) -> bool {
    simplicial_ordering(g).is_some()
}

/// Exact clique number. Linear for chordal graphs, branch and bound otherwise.
pub fn clique_number(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    match simplicial_ordering(g) {
        Some(ordering) => {
            let og = OrderedGraph::new(g.clone(), ordering).expect("sizes match");
            og.max_parents() + 1
        }
        None => maximum_clique(g).len(),
    }
}

/// A maximum clique, found by Bron-Kerbosch with pivoting and a size bound.
pub fn maximum_clique(g: &Graph) -> Vec<Vertex> {
    let mut best = Vec::new();
    let mut current = Vec::new();
    let candidates: Vec<Vertex> = g.vertices().collect();
    extend_clique(g, &mut current, candidates, Vec::new(), &mut best);
    best.sort_unstable();
    best
}

fn extend_clique(
    g: &Graph,
    current: &mut Vec<Vertex>,
    mut candidates: Vec<Vertex>,
    mut excluded: Vec<Vertex>,
    best: &mut Vec<Vertex>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() && current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    if current.len() + candidates.len() <= best.len() {
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .copied()
        .max_by_key(|&u| candidates.iter().filter(|&&w| g.has_edge(u, w)).count())
        .expect("candidates nonempty");
    let branch: Vec<Vertex> = candidates
        .iter()
        .copied()
        .filter(|&v| !g.has_edge(pivot, v))
        .collect();
    for v in branch {
        let next_c: Vec<Vertex> = candidates
            .iter()
            .copied()
            .filter(|&w| g.has_edge(v, w))
            .collect();
        let next_x: Vec<Vertex> = excluded
            .iter()
            .copied()
            .filter(|&w| g.has_edge(v, w))
            .collect();
        current.push(v);
        extend_clique(g, current, next_c, next_x, best);
        current.pop();
        candidates.retain(|&w| w != v);
        excluded.push(v);
    }
}
