//! Legality of a color choice: coloring `v` with `alpha` is legal iff the
//! `alpha`-colored neighbors of `v` contain no k-clique, i.e. no
//! monochromatic (k+1)-clique through `v` would appear.
//!
//! Colorings are slices indexed by vertex with `0` meaning uncolored.

use crate::graph::{Graph, Vertex};

pub type Color = u8;

pub const UNCOLORED: Color = 0;

/// Largest supported number of colors.
pub const MAX_COLORS: usize = Color::MAX as usize;

/// The monochromatic (k+1)-clique that coloring `v` with `color` would
/// complete, sorted, or `None` if the color is legal.
pub fn completed_clique(
    g: &Graph,
    coloring: &[Color],
    k: usize,
    v: Vertex,
    color: Color,
) -> Option<Vec<Vertex>> {
    let same: Vec<Vertex> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| coloring[u] == color)
        .collect();
    let mut acc = Vec::with_capacity(k + 1);
    if find_clique(g, &same, k, &mut acc) {
        acc.push(v);
        acc.sort_unstable();
        Some(acc)
    } else {
        None
    }
}

pub fn is_legal(g: &Graph, coloring: &[Color], k: usize, v: Vertex, color: Color) -> bool {
    completed_clique(g, coloring, k, v, color).is_none()
}

/// Legal colors for uncolored `v`, ascending, among `1..=colors`.
pub fn legal_colors(
    g: &Graph,
    coloring: &[Color],
    k: usize,
    colors: usize,
    v: Vertex,
) -> Vec<Color> {
    let mut by_color: Vec<Vec<Vertex>> = vec![Vec::new(); colors + 1];
    for &u in g.neighbors(v) {
        let c = coloring[u] as usize;
        if c != 0 && c <= colors {
            by_color[c].push(u);
        }
    }
    let mut acc = Vec::with_capacity(k);
    (1..=colors)
        .filter(|&c| {
            acc.clear();
            !find_clique(g, &by_color[c], k, &mut acc)
        })
        .map(|c| c as Color)
        .collect()
}

/// Whether `v` has at least one legal color; short-circuits.
pub fn has_legal_color(g: &Graph, coloring: &[Color], k: usize, colors: usize, v: Vertex) -> bool {
    let mut counts = [0usize; MAX_COLORS + 1];
    let mut blocked_candidates = 0;
    for &u in g.neighbors(v) {
        let c = coloring[u] as usize;
        if c != 0 && c <= colors {
            counts[c] += 1;
            if counts[c] == k {
                blocked_candidates += 1;
            }
        }
    }
    // A color with fewer than k same-colored neighbors is always legal.
    if blocked_candidates < colors {
        return true;
    }
    (1..=colors).any(|c| is_legal(g, coloring, k, v, c as Color))
}

/// Searches `cands` for a clique of size `need`, leaving it in `acc`.
fn find_clique(g: &Graph, cands: &[Vertex], need: usize, acc: &mut Vec<Vertex>) -> bool {
    if need == 0 {
        return true;
    }
    if cands.len() < need {
        return false;
    }
    for (i, &u) in cands.iter().enumerate() {
        if cands.len() - i < need {
            break;
        }
        let next: Vec<Vertex> = cands[i + 1..]
            .iter()
            .copied()
            .filter(|&w| g.has_edge(u, w))
            .collect();
        acc.push(u);
        if find_clique(g, &next, need - 1, acc) {
            return true;
        }
        acc.pop();
    }
    false
}
