//! Seeded generators for k-trees, partial k-trees and sparsified chordal graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, GraphError, Vertex};
use crate::ordering::{clique_number, is_chordal, simplicial_ordering, OrderedGraph};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Builds a k-tree: start from `K_{k+1}` and attach each further vertex to a
/// uniformly chosen existing k-clique. Vertex ids follow creation order, so
/// the identity ordering is simplicial.
pub fn generate_ktree(k: usize, n: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = rng_from_seed(seed);
    ktree_with_rng(k, n, &mut rng)
}

pub fn ktree_with_rng<R: Rng>(k: usize, n: usize, rng: &mut R) -> Result<Graph, GraphError> {
    if k == 0 {
        return Err(GraphError::InvalidParameters("k-tree needs k >= 1".into()));
    }
    if n < k + 1 {
        return Err(GraphError::InvalidParameters(format!(
            "a {k}-tree needs at least {} vertices, got {n}",
            k + 1
        )));
    }
    let mut g = Graph::empty(n);
    for (u, v) in Graph::complete(k + 1).edges() {
        g.add_edge(u, v)?;
    }
    // Every k-subset of the base clique, then k new cliques per attached vertex.
    let mut cliques: Vec<Vec<Vertex>> = (0..=k)
        .map(|skip| (0..=k).filter(|&v| v != skip).collect())
        .collect();
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        for &u in &base {
            g.add_edge(u, v)?;
        }
        for skip in 0..k {
            let mut next: Vec<Vertex> = base
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &u)| u)
                .collect();
            next.push(v);
            cliques.push(next);
        }
    }
    Ok(g)
}

/// A partial k-tree `g` together with the chordal supergraph `h` that certifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialKTreeWitness {
    pub g: Graph,
    pub h: Graph,
    pub k: usize,
}

impl PartialKTreeWitness {
    pub fn validate(&self) -> Result<(), GraphError> {
        if self.g.n() != self.h.n() {
            return Err(GraphError::InvalidParameters(format!(
                "witness vertex sets differ: g has {} vertices, h has {}",
                self.g.n(),
                self.h.n()
            )));
        }
        if let Some((u, v)) = self.g.edges().find(|&(u, v)| !self.h.has_edge(u, v)) {
            return Err(GraphError::InvalidParameters(format!(
                "edge {u}-{v} of g is missing from h"
            )));
        }
        if !is_chordal(&self.h) {
            return Err(GraphError::InvalidParameters("h is not chordal".into()));
        }
        let omega = clique_number(&self.h);
        if omega > self.k + 1 {
            return Err(GraphError::InvalidParameters(format!(
                "h has clique number {omega}, more than k+1 = {}",
                self.k + 1
            )));
        }
        Ok(())
    }
}

/// `h` is the k-tree for `seed`; `g` keeps each edge of `h` with probability
/// `keep_prob`, drawn from an independent stream of the same seed.
pub fn generate_partial_ktree(
    k: usize,
    n: usize,
    keep_prob: f64,
    seed: u64,
) -> Result<PartialKTreeWitness, GraphError> {
    if !(0.0..=1.0).contains(&keep_prob) {
        return Err(GraphError::InvalidParameters(format!(
            "keep probability {keep_prob} outside [0, 1]"
        )));
    }
    let h = generate_ktree(k, n, seed)?;
    let mut rng = rng_from_seed(seed);
    rng.set_stream(1);
    let mut g = Graph::empty(n);
    for (u, v) in h.edges() {
        if rng.gen_bool(keep_prob) {
            g.add_edge(u, v)?;
        }
    }
    Ok(PartialKTreeWitness { g, h, k })
}

/// A uniformly random permutation; vertex `v` is renamed to `perm[v]`.
pub fn random_permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<Vertex> {
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Deletes edges of a chordal graph while keeping it chordal with the same
/// clique number.
///
/// Edges are visited in random order and each is offered for deletion with
/// probability `drop_prob`. An edge `u < v` (in a fixed simplicial ordering)
/// is only removed when no third vertex has both `u` and `v` as parents,
/// which keeps that ordering simplicial. The closed parent set of one vertex
/// with the maximum number of parents is protected so the clique number
/// cannot drop.
pub fn sparsify_chordal<R: Rng>(h: &Graph, drop_prob: f64, rng: &mut R) -> Graph {
    let Some(ordering) = simplicial_ordering(h) else {
        return h.clone();
    };
    if h.n() == 0 {
        return h.clone();
    }
    let og = OrderedGraph::new(h.clone(), ordering.clone()).expect("sizes match");
    let anchor = h
        .vertices()
        .max_by_key(|&v| (og.parents(v).unwrap().len(), std::cmp::Reverse(v)))
        .expect("graph is nonempty");
    let mut protected: Vec<Vertex> = og.parents(anchor).unwrap().to_vec();
    protected.push(anchor);

    let mut g = h.clone();
    let mut edges: Vec<(Vertex, Vertex)> = h.edges().collect();
    edges.shuffle(rng);
    for (u, v) in edges {
        if !rng.gen_bool(drop_prob) {
            continue;
        }
        if protected.contains(&u) && protected.contains(&v) {
            continue;
        }
        let shared_child = g
            .neighbors(u)
            .iter()
            .any(|&w| w != v && g.has_edge(w, v) && ordering.less(u, w) && ordering.less(v, w));
        if !shared_child {
            g.remove_edge(u, v);
        }
    }
    g
}
