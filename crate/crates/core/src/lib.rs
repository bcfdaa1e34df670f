//! The k-clique-relaxed graph coloring game.
//!
//! Two players alternately color vertices of a graph with `c` colors so that
//! no color class ever contains a clique on `k + 1` vertices. Alice wins if
//! every vertex gets colored; Bob wins as soon as some uncolored vertex has
//! no legal color left.
//!
//! This crate provides the rules engine, Alice's Activation Strategy and
//! several adversaries for Bob, an exact solver for small graphs, graph
//! generators and the verification suites driven by the `cliquegame` CLI.

pub mod catalog;
pub mod engine;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod graph;
pub mod harness;
pub mod ordering;
pub mod rules;
pub mod solver;
pub mod strategy;

pub use engine::{
    play_game, EngineError, Event, GameConfig, GameState, GameTranscript, Move, Outcome, Player,
    Players, Status, Strategy, StrategyError, TurnPlan,
};
pub use graph::{Graph, GraphError, Vertex};
pub use ordering::{LinearOrdering, OrderedGraph};
pub use rules::Color;
