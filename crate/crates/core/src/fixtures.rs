//! Hand-built configurations around a vertex `g` sitting in four otherwise
//! disjoint triangles, used to replay the case analysis for k = 2, c = 4.
//!
//! Vertices are labeled a..i as 0..8, so `g` is 6. The outer vertices form
//! the pairs {a,b}, {c,d}, {e,f}, {h,i}.

use crate::graph::{Graph, Vertex};
use crate::ordering::LinearOrdering;
use crate::rules::Color;

pub const A: Vertex = 0;
pub const B: Vertex = 1;
pub const C: Vertex = 2;
pub const D: Vertex = 3;
pub const E: Vertex = 4;
pub const F: Vertex = 5;
pub const G: Vertex = 6;
pub const H: Vertex = 7;
pub const I: Vertex = 8;

pub const LABELS: [char; 9] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i'];

/// The eight neighbors of `g`.
pub const OUTER: [Vertex; 8] = [A, B, C, D, E, F, H, I];

pub const PAIRS: [(Vertex, Vertex); 4] = [(A, B), (C, D), (E, F), (H, I)];

/// Color of an outer vertex in the blocking pattern: 1 on {a,b}, 2 on
/// {c,d}, 3 on {e,f}, 4 on {h,i}.
pub fn pair_color(v: Vertex) -> Color {
    match v {
        A | B => 1,
        C | D => 2,
        E | F => 3,
        H | I => 4,
        _ => panic!("vertex {v} is not an outer vertex"),
    }
}

/// `g` joined to four disjoint edges.
pub fn figure1() -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = OUTER.iter().map(|&v| (G, v)).collect();
    edges.extend(PAIRS);
    Graph::from_edges(9, edges).expect("fixture edges are valid")
}

const FIGURE2_EDGES: [(Vertex, Vertex); 13] = [
    (A, C),
    (A, G),
    (C, G),
    (A, B),
    (B, G),
    (C, D),
    (D, G),
    (E, G),
    (E, F),
    (F, G),
    (G, H),
    (G, I),
    (H, I),
];

/// The case a < c < g: `g`'s two parents lie in different triangles.
pub fn figure2() -> Graph {
    Graph::from_edges(9, FIGURE2_EDGES).expect("fixture edges are valid")
}

fn figure2_plus(extra: [(Vertex, Vertex); 2]) -> Graph {
    Graph::from_edges(9, FIGURE2_EDGES.into_iter().chain(extra)).expect("fixture edges are valid")
}

/// `h` and `e` both have major parent `a`.
pub fn figure3_shared_a() -> Graph {
    figure2_plus([(A, H), (A, E)])
}

/// `h` and `e` both have major parent `c`.
pub fn figure3_shared_c() -> Graph {
    figure2_plus([(C, H), (C, E)])
}

/// `h` has major parent `a`, `e` has major parent `c`.
pub fn figure4() -> Graph {
    figure2_plus([(A, H), (C, E)])
}

/// a < c < g < b < d < e < f < h < i.
pub fn figure_ordering() -> LinearOrdering {
    LinearOrdering::new(vec![A, C, G, B, D, E, F, H, I]).expect("a permutation of 0..9")
}

/// Named fixtures that share [`figure_ordering`].
pub fn ordered_fixtures() -> Vec<(&'static str, Graph)> {
    vec![
        ("figure2", figure2()),
        ("figure3-shared-a", figure3_shared_a()),
        ("figure3-shared-c", figure3_shared_c()),
        ("figure4", figure4()),
    ]
}
