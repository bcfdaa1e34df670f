//! Exhaustive catalogs of small graphs, deduplicated up to isomorphism.
//!
//! A graph on n ≤ 8 vertices is encoded as a bitmask over the pairs
//! (u, v), u < v, in lexicographic order. Its canonical form is the least
//! mask over all relabelings.

use std::collections::BTreeMap;

use crate::graph::{Graph, Vertex};
use crate::ordering::is_chordal;

/// Largest vertex count the mask encoding supports.
pub const MAX_CATALOG_N: usize = 8;

fn pairs(n: usize) -> Vec<(Vertex, Vertex)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    for (i, (u, v)) in pairs(n).into_iter().enumerate() {
        idx[u][v] = i;
        idx[v][u] = i;
    }
    idx
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

pub fn to_mask(g: &Graph) -> u64 {
    assert!(
        g.n() <= MAX_CATALOG_N,
        "mask encoding supports at most {MAX_CATALOG_N} vertices"
    );
    let idx = pair_index(g.n());
    g.edges().fold(0u64, |m, (u, v)| m | 1 << idx[u][v])
}

pub fn from_mask(n: usize, mask: u64) -> Graph {
    let edges = pairs(n)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e);
    Graph::from_edges(n, edges).expect("mask pairs are distinct and in range")
}

/// Precomputed relabeling tables for one vertex count.
struct Relabeler {
    /// For each permutation, where each pair index goes.
    maps: Vec<Vec<usize>>,
}

impl Relabeler {
    fn new(n: usize) -> Self {
        let idx = pair_index(n);
        let ps = pairs(n);
        let maps = permutations(n)
            .into_iter()
            .map(|p| ps.iter().map(|&(u, v)| idx[p[u]][p[v]]).collect())
            .collect();
        Relabeler { maps }
    }

    fn canonical(&self, mask: u64) -> u64 {
        self.maps
            .iter()
            .map(|map| {
                let mut out = 0u64;
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    out |= 1 << map[i];
                    m &= m - 1;
                }
                out
            })
            .min()
            .unwrap_or(0)
    }
}

/// Least adjacency mask over all relabelings of `g` (n ≤ 8).
pub fn canonical_form(g: &Graph) -> u64 {
    Relabeler::new(g.n()).canonical(to_mask(g))
}

/// Every labeled graph on `n` vertices (n ≤ 7), in mask order.
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    assert!(n <= 7, "too many labeled graphs on {n} vertices");
    let m = n * n.saturating_sub(1) / 2;
    (0u64..1 << m).map(move |mask| from_mask(n, mask))
}

/// One representative per isomorphism class on `n` vertices, each in its
/// canonical labeling, ordered by canonical mask.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 7, "isomorphism catalog limited to 7 vertices");
    let relabel = Relabeler::new(n);
    let m = n * n.saturating_sub(1) / 2;
    let mut seen: BTreeMap<u64, ()> = BTreeMap::new();
    for mask in 0u64..1 << m {
        seen.entry(relabel.canonical(mask)).or_insert(());
    }
    seen.into_keys().map(|mask| from_mask(n, mask)).collect()
}

/// Connected chordal graphs on 1..=max_n vertices, up to isomorphism.
pub fn connected_chordal_catalog(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(graphs_up_to_iso)
        .filter(|g| g.is_connected() && is_chordal(g))
        .collect()
}
