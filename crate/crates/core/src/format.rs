//! JSON graph and witness formats.
//!
//! Graph: `{"n": 4, "edges": [[0, 1], [1, 2]]}` with `u < v` and no
//! duplicates. A witness adds `"h_edges"` and `"k"`. Readers report the
//! offending location (`edges[3]`, or line/column for syntax errors).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::generate::PartialKTreeWitness;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
}

impl FormatError {
    fn invalid(location: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Invalid {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    pub h_edges: Vec<[Vertex; 2]>,
    pub k: usize,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph, FormatError> {
        build_graph(self.n, &self.edges, "edges")
    }
}

impl From<&PartialKTreeWitness> for WitnessJson {
    fn from(w: &PartialKTreeWitness) -> Self {
        WitnessJson {
            n: w.g.n(),
            edges: w.g.edges().map(|(u, v)| [u, v]).collect(),
            h_edges: w.h.edges().map(|(u, v)| [u, v]).collect(),
            k: w.k,
        }
    }
}

impl WitnessJson {
    pub fn to_witness(&self) -> Result<PartialKTreeWitness, FormatError> {
        let g = build_graph(self.n, &self.edges, "edges")?;
        let h = build_graph(self.n, &self.h_edges, "h_edges")?;
        for (i, [u, v]) in self.edges.iter().enumerate() {
            if !h.has_edge(*u, *v) {
                return Err(FormatError::invalid(
                    format!("edges[{i}]"),
                    format!("edge [{u}, {v}] is not an edge of h"),
                ));
            }
        }
        let w = PartialKTreeWitness { g, h, k: self.k };
        w.validate()
            .map_err(|e| FormatError::invalid("h_edges", e.to_string()))?;
        Ok(w)
    }
}

fn build_graph(n: usize, edges: &[[Vertex; 2]], field: &str) -> Result<Graph, FormatError> {
    let mut g = Graph::empty(n);
    for (i, &[u, v]) in edges.iter().enumerate() {
        let loc = || format!("{field}[{i}]");
        if u >= n || v >= n {
            return Err(FormatError::invalid(
                loc(),
                format!("endpoint out of range in [{u}, {v}] for n = {n}"),
            ));
        }
        if u >= v {
            return Err(FormatError::invalid(
                loc(),
                format!("edge [{u}, {v}] must be written with u < v"),
            ));
        }
        if g.has_edge(u, v) {
            return Err(FormatError::invalid(
                loc(),
                format!("duplicate edge [{u}, {v}]"),
            ));
        }
        g.add_edge(u, v).expect("checked above");
    }
    Ok(g)
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    serde_json::from_str::<GraphJson>(text)?.to_graph()
}

pub fn parse_witness(text: &str) -> Result<PartialKTreeWitness, FormatError> {
    serde_json::from_str::<WitnessJson>(text)?.to_witness()
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph serialization cannot fail")
}

pub fn witness_to_json(w: &PartialKTreeWitness) -> String {
    serde_json::to_string(&WitnessJson::from(w)).expect("witness serialization cannot fail")
}

/// Short hex digest of the canonical JSON encoding.
pub fn graph_digest(g: &Graph) -> String {
    digest_str(&graph_to_json(g))
}

pub fn digest_str(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hex::encode(&hash[..8])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::cycle(5);
        let text = graph_to_json(&g);
        assert_eq!(text, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_graph(r#"{"n":3,"edges":[[0,1],[2,1]]}"#).unwrap_err();
        assert_eq!(
            e.to_string(),
            "edges[1]: edge [2, 1] must be written with u < v"
        );
        let e = parse_graph(r#"{"n":3,"edges":[[0,1],[0,1]]}"#).unwrap_err();
        assert!(e.to_string().starts_with("edges[1]: duplicate"));
        let e = parse_graph(r#"{"n":3,"edges":[[0,3]]}"#).unwrap_err();
        assert!(e.to_string().starts_with("edges[0]: endpoint out of range"));
        let e = parse_graph("{\"n\":3,\n\"edges\":[[0,1]").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 2, .. }));
    }

    #[test]
    fn witness_round_trip_and_rejection() {
        let w = crate::generate::generate_partial_ktree(2, 9, 0.5, 1).unwrap();
        let text = witness_to_json(&w);
        assert_eq!(parse_witness(&text).unwrap(), w);

        let bad = r#"{"n":3,"edges":[[0,2]],"h_edges":[[0,1],[1,2]],"k":1}"#;
        let e = parse_witness(bad).unwrap_err();
        assert!(e.to_string().starts_with("edges[0]"));

        let c4 = r#"{"n":4,"edges":[],"h_edges":[[0,1],[0,3],[1,2],[2,3]],"k":1}"#;
        assert!(parse_witness(c4)
            .unwrap_err()
            .to_string()
            .contains("not chordal"));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(graph_digest(&Graph::path(3)), graph_digest(&Graph::path(3)));
        assert_ne!(graph_digest(&Graph::path(3)), graph_digest(&Graph::path(4)));
    }
}
