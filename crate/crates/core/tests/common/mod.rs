//! Slow, direct reference implementations used to cross-check the library.
#![allow(dead_code)]

use cliquegame_core::graph::{Graph, Vertex};
use rand::Rng;

/// All `size`-subsets of `items`.
pub fn subsets<T: Copy>(items: &[T], size: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(
        items: &[T],
        size: usize,
        start: usize,
        cur: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

fn is_clique(g: &Graph, set: &[Vertex]) -> bool {
    set.iter()
        .enumerate()
        .all(|(i, &u)| set[i + 1..].iter().all(|&w| g.has_edge(u, w)))
}

/// Searches every vertex subset of size ≥ 4 for an induced cycle.
pub fn has_induced_long_cycle(g: &Graph) -> bool {
    let n = g.n();
    assert!(n <= 12, "oracle is exponential");
    (0u32..1 << n).filter(|m| m.count_ones() >= 4).any(|m| {
        let vs: Vec<Vertex> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
        let deg = |v: Vertex| vs.iter().filter(|&&w| g.has_edge(v, w)).count();
        if !vs.iter().all(|&v| deg(v) == 2) {
            return false;
        }
        // 2-regular: a single cycle iff connected
        let mut seen = vec![vs[0]];
        let mut stack = vec![vs[0]];
        while let Some(v) = stack.pop() {
            for &w in &vs {
                if g.has_edge(v, w) && !seen.contains(&w) {
                    seen.push(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == vs.len()
    })
}

pub fn brute_is_chordal(g: &Graph) -> bool {
    !has_induced_long_cycle(g)
}

pub fn brute_clique_number(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20, "oracle is exponential");
    (0u32..1 << n)
        .filter(|&m| {
            let vs: Vec<Vertex> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            is_clique(g, &vs)
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Coloring `v` with `color` is illegal iff some k neighbors of `v`, all of
/// that color, form a clique.
pub fn brute_is_legal(g: &Graph, coloring: &[u8], k: usize, v: Vertex, color: u8) -> bool {
    let nbrs: Vec<Vertex> = g.neighbors(v).to_vec();
    !subsets(&nbrs, k)
        .into_iter()
        .any(|s| s.iter().all(|&u| coloring[u] == color) && is_clique(g, &s))
}

pub fn brute_legal_colors(g: &Graph, coloring: &[u8], k: usize, c: usize, v: Vertex) -> Vec<u8> {
    (1..=c as u8)
        .filter(|&a| brute_is_legal(g, coloring, k, v, a))
        .collect()
}

/// No color class contains a (k+1)-clique.
pub fn brute_is_proper(g: &Graph, coloring: &[u8], k: usize) -> bool {
    let vs: Vec<Vertex> = (0..g.n()).filter(|&v| coloring[v] != 0).collect();
    !subsets(&vs, k + 1)
        .into_iter()
        .any(|s| s.iter().all(|&u| coloring[u] == coloring[s[0]]) && is_clique(g, &s))
}

/// Lower neighbors of `v` under `order`, by a direct scan.
pub fn brute_parents(g: &Graph, order: &[Vertex], v: Vertex) -> Vec<Vertex> {
    let pos = |x: Vertex| order.iter().position(|&y| y == x).unwrap();
    let mut ps: Vec<Vertex> = (0..g.n())
        .filter(|&u| g.has_edge(u, v) && pos(u) < pos(v))
        .collect();
    ps.sort_by_key(|&u| pos(u));
    ps
}

/// Every closed parent set induces a clique.
pub fn brute_is_simplicial(g: &Graph, order: &[Vertex]) -> bool {
    (0..g.n()).all(|v| {
        let mut closed = brute_parents(g, order, v);
        closed.push(v);
        is_clique(g, &closed)
    })
}

/// Plain minimax over the full game tree: no memo, no symmetry.
pub fn tree_walk_winner(g: &Graph, k: usize, c: usize) -> bool {
    fn walk(g: &Graph, k: usize, c: usize, col: &mut Vec<u8>, alice: bool) -> bool {
        let open: Vec<Vertex> = (0..g.n()).filter(|&v| col[v] == 0).collect();
        if open.is_empty() {
            return true;
        }
        if open
            .iter()
            .any(|&v| brute_legal_colors(g, col, k, c, v).is_empty())
        {
            return false;
        }
        let mut results = Vec::new();
        for &v in &open {
            for a in brute_legal_colors(g, col, k, c, v) {
                col[v] = a;
                results.push(walk(g, k, c, col, !alice));
                col[v] = 0;
            }
        }
        if alice {
            results.into_iter().any(|w| w)
        } else {
            results.into_iter().all(|w| w)
        }
    }
    walk(g, k, c, &mut vec![0; g.n()], true)
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Winner from an arbitrary position by the same plain minimax.
pub fn tree_walk_from(g: &Graph, k: usize, c: usize, coloring: &[u8]) -> bool {
    fn walk(g: &Graph, k: usize, c: usize, col: &mut Vec<u8>) -> bool {
        let open: Vec<Vertex> = (0..g.n()).filter(|&v| col[v] == 0).collect();
        if open.is_empty() {
            return true;
        }
        if open
            .iter()
            .any(|&v| brute_legal_colors(g, col, k, c, v).is_empty())
        {
            return false;
        }
        let alice = (g.n() - open.len()).is_multiple_of(2);
        for &v in &open {
            for a in brute_legal_colors(g, col, k, c, v) {
                col[v] = a;
                let w = walk(g, k, c, col);
                col[v] = 0;
                if w == alice {
                    return alice;
                }
            }
        }
        !alice
    }
    walk(g, k, c, &mut coloring.to_vec())
}
