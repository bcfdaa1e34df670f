//! Rules of the k-clique-relaxed coloring game.
//!
//! Alice moves first and the players alternate coloring vertices so that no
//! color class ever contains a (k+1)-clique of the play graph. Bob wins as
//! soon as some uncolored vertex has no legal color; Alice wins when every
//! vertex is colored.
//!
//! The state also carries Alice's active set. A colored vertex always counts
//! as active: when a move colors an inactive vertex (in practice a Bob move)
//! the vertex becomes active with it, and the move event records that with
//! `activates: true`.

use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{digest_str, FormatError, GraphJson};
use crate::generate::rng_from_seed;
use crate::graph::{Graph, Vertex};
use crate::rules::{self, Color, MAX_COLORS, UNCOLORED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub vertex: Vertex,
    pub color: Color,
}

impl Move {
    pub fn new(vertex: Vertex, color: Color) -> Self {
        Move { vertex, color }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid game configuration: {0}")]
    Config(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    UnknownVertex { vertex: Vertex, n: usize },
    #[error("vertex {0} is already colored")]
    AlreadyColored(Vertex),
    #[error("vertex {0} is already active")]
    AlreadyActive(Vertex),
    #[error("color {color} outside 1..={colors}")]
    ColorOutOfRange { color: Color, colors: usize },
    #[error("coloring {vertex} with {color} completes the monochromatic clique {clique:?}")]
    RuleViolation {
        vertex: Vertex,
        color: Color,
        clique: Vec<Vertex>,
    },
    #[error("it is {expected:?}'s turn, not {got:?}'s")]
    WrongTurn { expected: Player, got: Player },
    #[error("the game is already over")]
    GameOver,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameConfig {
    pub k: usize,
    pub colors: usize,
    pub play_graph: Graph,
    /// Chordal supergraph Alice reasons on; adjudication always uses `play_graph`.
    pub strategy_graph: Option<Graph>,
}

impl GameConfig {
    pub fn new(
        k: usize,
        colors: usize,
        play_graph: Graph,
        strategy_graph: Option<Graph>,
    ) -> Result<Self, EngineError> {
        if k < 1 {
            return Err(EngineError::Config("k must be at least 1".into()));
        }
        if !(1..=MAX_COLORS).contains(&colors) {
            return Err(EngineError::Config(format!(
                "color count must be in 1..={MAX_COLORS}, got {colors}"
            )));
        }
        if let Some(h) = &strategy_graph {
            if h.n() != play_graph.n() {
                return Err(EngineError::Config(format!(
                    "strategy graph has {} vertices but play graph has {}",
                    h.n(),
                    play_graph.n()
                )));
            }
            if let Some((u, v)) = play_graph.edges().find(|&(u, v)| !h.has_edge(u, v)) {
                return Err(EngineError::Config(format!(
                    "play edge {u}-{v} is missing from the strategy graph"
                )));
            }
        }
        Ok(GameConfig {
            k,
            colors,
            play_graph,
            strategy_graph,
        })
    }

    /// The graph Alice plans on.
    pub fn alice_graph(&self) -> &Graph {
        self.strategy_graph.as_ref().unwrap_or(&self.play_graph)
    }

    pub fn n(&self) -> usize {
        self.play_graph.n()
    }

    pub fn to_json(&self) -> ConfigJson {
        let play_graph = GraphJson::from(&self.play_graph);
        let strategy_graph = self.strategy_graph.as_ref().map(GraphJson::from);
        let digest = config_digest(self.k, self.colors, &play_graph, strategy_graph.as_ref());
        ConfigJson {
            k: self.k,
            c: self.colors,
            play_graph,
            strategy_graph,
            digest,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigJson {
    pub k: usize,
    pub c: usize,
    pub play_graph: GraphJson,
    #[serde(default)]
    pub strategy_graph: Option<GraphJson>,
    pub digest: String,
}

fn config_digest(k: usize, c: usize, play: &GraphJson, strategy: Option<&GraphJson>) -> String {
    let body =
        serde_json::json!({ "k": k, "c": c, "play_graph": play, "strategy_graph": strategy });
    digest_str(&body.to_string())
}

impl ConfigJson {
    pub fn to_config(&self) -> Result<GameConfig, TranscriptError> {
        let play = self.play_graph.to_graph()?;
        let strategy = self
            .strategy_graph
            .as_ref()
            .map(GraphJson::to_graph)
            .transpose()?;
        let expected = config_digest(
            self.k,
            self.c,
            &self.play_graph,
            self.strategy_graph.as_ref(),
        );
        if expected != self.digest {
            return Err(TranscriptError::Mismatch(format!(
                "config digest {} does not match contents ({expected})",
                self.digest
            )));
        }
        Ok(GameConfig::new(self.k, self.c, play, strategy)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Status {
    Ongoing,
    AliceWins,
    BobWins { witness: Vertex },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Event {
    /// Alice adds an uncolored vertex to her active set.
    Activate { vertex: Vertex },
    Move {
        player: Player,
        vertex: Vertex,
        color: Color,
        activates: bool,
    },
}

#[derive(Debug, Clone)]
pub struct GameState {
    config: Arc<GameConfig>,
    coloring: Vec<Color>,
    active: Vec<bool>,
    turn: Player,
    colored: usize,
    status: Status,
    events: Vec<Event>,
}

impl GameState {
    pub fn new(config: Arc<GameConfig>) -> Self {
        let n = config.n();
        GameState {
            config,
            coloring: vec![UNCOLORED; n],
            active: vec![false; n],
            turn: Player::Alice,
            colored: 0,
            status: if n == 0 {
                Status::AliceWins
            } else {
                Status::Ongoing
            },
            events: Vec::new(),
        }
    }

    pub fn config(&self) -> &Arc<GameConfig> {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.coloring.len()
    }

    pub fn turn(&self) -> Player {
        self.turn
    }

    /// Raw coloring, `0` for uncolored.
    pub fn coloring(&self) -> &[Color] {
        &self.coloring
    }

    pub fn color_of(&self, v: Vertex) -> Option<Color> {
        match self.coloring[v] {
            UNCOLORED => None,
            c => Some(c),
        }
    }

    pub fn is_colored(&self, v: Vertex) -> bool {
        self.coloring[v] != UNCOLORED
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        self.active[v]
    }

    pub fn active_set(&self) -> &[bool] {
        &self.active
    }

    pub fn colored_count(&self) -> usize {
        self.colored
    }

    pub fn uncolored(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).filter(move |&v| !self.is_colored(v))
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), EngineError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(EngineError::UnknownVertex {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub fn legal_colors(&self, v: Vertex) -> Result<Vec<Color>, EngineError> {
        self.check_vertex(v)?;
        if self.is_colored(v) {
            return Err(EngineError::AlreadyColored(v));
        }
        let cfg = &self.config;
        Ok(rules::legal_colors(
            &cfg.play_graph,
            &self.coloring,
            cfg.k,
            cfg.colors,
            v,
        ))
    }

    fn is_stuck(&self, v: Vertex) -> bool {
        let cfg = &self.config;
        !self.is_colored(v)
            && !rules::has_legal_color(&cfg.play_graph, &self.coloring, cfg.k, cfg.colors, v)
    }

    pub fn status(&self) -> Status {
        self.status
    }

    /// Full scan; the lowest-id stuck vertex is the witness.
    pub fn compute_status(&self) -> Status {
        if self.colored == self.n() {
            return Status::AliceWins;
        }
        match (0..self.n()).find(|&v| self.is_stuck(v)) {
            Some(witness) => Status::BobWins { witness },
            None => Status::Ongoing,
        }
    }

    /// Status after a move on `v`, given the position before it was ongoing:
    /// only neighbors of `v` can have lost colors.
    fn status_after(&self, v: Vertex) -> Status {
        if self.colored == self.n() {
            return Status::AliceWins;
        }
        let status = match self
            .config
            .play_graph
            .neighbors(v)
            .iter()
            .find(|&&u| self.is_stuck(u))
        {
            Some(&witness) => Status::BobWins { witness },
            None => Status::Ongoing,
        };
        debug_assert_eq!(status, self.compute_status());
        status
    }

    fn ensure_ongoing(&self) -> Result<(), EngineError> {
        match self.status {
            Status::Ongoing => Ok(()),
            _ => Err(EngineError::GameOver),
        }
    }

    /// Alice activates an uncolored, inactive vertex during her turn.
    pub fn activate(&mut self, v: Vertex) -> Result<(), EngineError> {
        self.check_vertex(v)?;
        if self.turn != Player::Alice {
            return Err(EngineError::WrongTurn {
                expected: self.turn,
                got: Player::Alice,
            });
        }
        if self.active[v] {
            return Err(EngineError::AlreadyActive(v));
        }
        self.active[v] = true;
        self.events.push(Event::Activate { vertex: v });
        Ok(())
    }

    /// Validates and applies a move, returning the resulting status.
    pub fn apply_move(&mut self, player: Player, m: Move) -> Result<Status, EngineError> {
        if player != self.turn {
            return Err(EngineError::WrongTurn {
                expected: self.turn,
                got: player,
            });
        }
        self.check_vertex(m.vertex)?;
        if self.is_colored(m.vertex) {
            return Err(EngineError::AlreadyColored(m.vertex));
        }
        let cfg = Arc::clone(&self.config);
        if m.color == UNCOLORED || m.color as usize > cfg.colors {
            return Err(EngineError::ColorOutOfRange {
                color: m.color,
                colors: cfg.colors,
            });
        }
        self.ensure_ongoing()?;
        if let Some(clique) =
            rules::completed_clique(&cfg.play_graph, &self.coloring, cfg.k, m.vertex, m.color)
        {
            return Err(EngineError::RuleViolation {
                vertex: m.vertex,
                color: m.color,
                clique,
            });
        }
        let activates = !self.active[m.vertex];
        self.coloring[m.vertex] = m.color;
        self.active[m.vertex] = true;
        self.colored += 1;
        self.turn = player.other();
        self.events.push(Event::Move {
            player,
            vertex: m.vertex,
            color: m.color,
            activates,
        });
        self.status = self.status_after(m.vertex);
        Ok(self.status)
    }
}

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("no legal color for vertex {vertex}")]
    NoLegalColor { vertex: Vertex },
    #[error("no legal move available")]
    NoMove,
    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },
    #[error("{0}")]
    Other(String),
}

/// What a player does on one turn: optional activations, then one move.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnPlan {
    pub activations: Vec<Vertex>,
    pub mv: Move,
}

impl TurnPlan {
    pub fn just(mv: Move) -> Self {
        TurnPlan {
            activations: Vec::new(),
            mv,
        }
    }
}

/// A move-producing agent bound to a single game.
pub trait Strategy: Send {
    fn name(&self) -> String;

    fn plan(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError>;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Outcome {
    Ongoing,
    AliceWins,
    BobWins { witness: Vertex },
    Forfeit { player: Player, diagnostic: String },
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::Ongoing => Outcome::Ongoing,
            Status::AliceWins => Outcome::AliceWins,
            Status::BobWins { witness } => Outcome::BobWins { witness },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Players {
    pub alice: String,
    pub bob: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub config: ConfigJson,
    pub players: Players,
    pub events: Vec<Event>,
    pub outcome: Outcome,
}

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("event {index}: {source}")]
    Event { index: usize, source: EngineError },
    #[error("replay mismatch: {0}")]
    Mismatch(String),
}

impl GameTranscript {
    pub fn from_state(state: &GameState, players: Players, outcome: Outcome) -> Self {
        GameTranscript {
            config: state.config().to_json(),
            players,
            events: state.events().to_vec(),
            outcome,
        }
    }

    pub fn move_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, Event::Move { .. }))
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcript serialization cannot fail")
    }

    /// Replays every event from the initial state and checks the recorded
    /// outcome against the engine's verdict.
    pub fn replay(&self) -> Result<GameState, TranscriptError> {
        let config = Arc::new(self.config.to_config()?);
        let mut state = GameState::new(config);
        for (index, event) in self.events.iter().enumerate() {
            match *event {
                Event::Activate { vertex } => state
                    .activate(vertex)
                    .map_err(|source| TranscriptError::Event { index, source })?,
                Event::Move {
                    player,
                    vertex,
                    color,
                    activates,
                } => {
                    let was_inactive = vertex < state.n() && !state.is_active(vertex);
                    state
                        .apply_move(player, Move::new(vertex, color))
                        .map_err(|source| TranscriptError::Event { index, source })?;
                    if was_inactive != activates {
                        return Err(TranscriptError::Mismatch(format!(
                            "event {index}: activation flag {activates} but vertex {vertex} was {}",
                            if was_inactive { "inactive" } else { "active" }
                        )));
                    }
                }
            }
        }
        let status = state.status();
        let consistent = match &self.outcome {
            Outcome::Forfeit { .. } => status == Status::Ongoing,
            other => *other == Outcome::from(status),
        };
        if !consistent {
            return Err(TranscriptError::Mismatch(format!(
                "recorded outcome {:?} but replay gives {status:?}",
                self.outcome
            )));
        }
        Ok(state)
    }
}

/// Plays a full game. Strategy failures never get silently repaired: an
/// illegal plan is recorded as a forfeit, and Alice reporting a vertex with
/// no legal color is recorded as a Bob win with that witness.
pub fn play_game(
    config: Arc<GameConfig>,
    alice: &mut dyn Strategy,
    bob: &mut dyn Strategy,
    seed: u64,
) -> GameTranscript {
    let players = Players {
        alice: alice.name(),
        bob: bob.name(),
    };
    let mut rng = rng_from_seed(seed);
    let mut state = GameState::new(config);
    let mut status = state.status();
    while status == Status::Ongoing {
        let player = state.turn();
        let strategy: &mut dyn Strategy = match player {
            Player::Alice => &mut *alice,
            Player::Bob => &mut *bob,
        };
        let plan = match strategy.plan(&state, &mut rng) {
            Ok(plan) => plan,
            Err(StrategyError::NoLegalColor { vertex }) if player == Player::Alice => {
                let outcome = Outcome::BobWins { witness: vertex };
                return GameTranscript::from_state(&state, players, outcome);
            }
            Err(e) => {
                let outcome = Outcome::Forfeit {
                    player,
                    diagnostic: e.to_string(),
                };
                return GameTranscript::from_state(&state, players, outcome);
            }
        };
        let applied = plan
            .activations
            .iter()
            .try_for_each(|&v| state.activate(v))
            .and_then(|_| state.apply_move(player, plan.mv));
        match applied {
            Ok(s) => status = s,
            Err(e) => {
                let outcome = Outcome::Forfeit {
                    player,
                    diagnostic: e.to_string(),
                };
                return GameTranscript::from_state(&state, players, outcome);
            }
        }
    }
    GameTranscript::from_state(&state, players, status.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(g: Graph, k: usize, c: usize) -> Arc<GameConfig> {
        Arc::new(GameConfig::new(k, c, g, None).unwrap())
    }

    /// Colors the lowest (vertex, color) legal pair.
    struct Lowest;

    impl Strategy for Lowest {
        fn name(&self) -> String {
            "lowest".into()
        }

        fn plan(&mut self, s: &GameState, _: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
            s.uncolored()
                .find_map(|v| s.legal_colors(v).unwrap().first().map(|&c| Move::new(v, c)))
                .map(TurnPlan::just)
                .ok_or(StrategyError::NoMove)
        }
    }

    struct Cheater;

    impl Strategy for Cheater {
        fn name(&self) -> String {
            "cheater".into()
        }

        fn plan(&mut self, _: &GameState, _: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
            Ok(TurnPlan::just(Move::new(0, 1)))
        }
    }

    #[test]
    fn config_validation() {
        assert!(GameConfig::new(0, 3, Graph::path(2), None).is_err());
        assert!(GameConfig::new(1, 0, Graph::path(2), None).is_err());
        assert!(GameConfig::new(1, 3, Graph::path(3), Some(Graph::empty(3))).is_err());
        assert!(GameConfig::new(1, 3, Graph::path(3), Some(Graph::complete(3))).is_ok());
    }

    #[test]
    fn first_move_on_k2() {
        let mut s = GameState::new(cfg(Graph::path(2), 1, 2));
        assert_eq!(s.status(), Status::Ongoing);
        let st = s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        assert_eq!(st, Status::Ongoing);
        assert_eq!(s.turn(), Player::Bob);
        assert!(s.is_colored(0) && s.is_active(0));
        assert_eq!(s.legal_colors(1).unwrap(), vec![2]);
        assert_eq!(s.legal_colors(0), Err(EngineError::AlreadyColored(0)));
    }

    #[test]
    fn wrong_turn_and_range_errors() {
        let mut s = GameState::new(cfg(Graph::path(2), 1, 2));
        assert!(matches!(
            s.apply_move(Player::Bob, Move::new(0, 1)),
            Err(EngineError::WrongTurn { .. })
        ));
        assert!(matches!(
            s.apply_move(Player::Alice, Move::new(0, 3)),
            Err(EngineError::ColorOutOfRange { .. })
        ));
        assert!(matches!(
            s.apply_move(Player::Alice, Move::new(5, 1)),
            Err(EngineError::UnknownVertex { .. })
        ));
        s.activate(1).unwrap();
        assert_eq!(s.activate(1), Err(EngineError::AlreadyActive(1)));
    }

    #[test]
    fn violation_names_the_clique() {
        let mut s = GameState::new(cfg(Graph::complete(3), 2, 4));
        s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        s.apply_move(Player::Bob, Move::new(1, 1)).unwrap();
        assert_eq!(s.legal_colors(2).unwrap(), vec![2, 3, 4]);
        let err = s.apply_move(Player::Alice, Move::new(2, 1)).unwrap_err();
        assert_eq!(
            err,
            EngineError::RuleViolation {
                vertex: 2,
                color: 1,
                clique: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn single_vertex_one_color() {
        let t = play_game(cfg(Graph::empty(1), 1, 1), &mut Lowest, &mut Lowest, 0);
        assert_eq!(t.outcome, Outcome::AliceWins);
        assert_eq!(t.move_count(), 1);
    }

    #[test]
    fn k2_one_color_bob_wins() {
        let t = play_game(cfg(Graph::path(2), 1, 1), &mut Lowest, &mut Lowest, 0);
        assert_eq!(t.outcome, Outcome::BobWins { witness: 1 });
        assert_eq!(t.move_count(), 1);
    }

    #[test]
    fn empty_graph_is_an_immediate_alice_win() {
        let t = play_game(cfg(Graph::empty(0), 1, 1), &mut Lowest, &mut Lowest, 0);
        assert_eq!(t.outcome, Outcome::AliceWins);
    }

    #[test]
    fn illegal_plan_is_a_forfeit() {
        let t = play_game(cfg(Graph::path(3), 1, 3), &mut Lowest, &mut Cheater, 0);
        assert!(matches!(
            t.outcome,
            Outcome::Forfeit {
                player: Player::Bob,
                ..
            }
        ));
        t.replay().unwrap();
    }

    #[test]
    fn transcript_replays_and_serializes() {
        let t = play_game(cfg(Graph::cycle(5), 1, 3), &mut Lowest, &mut Lowest, 0);
        let state = t.replay().unwrap();
        assert_eq!(Outcome::from(state.status()), t.outcome);
        let text = t.to_json();
        let back: GameTranscript = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        assert!(text.find("\"config\"").unwrap() < text.find("\"events\"").unwrap());
        assert!(text.contains("\"type\": \"move\""));
    }

    #[test]
    fn tampered_transcript_is_rejected() {
        let mut t = play_game(cfg(Graph::path(4), 1, 3), &mut Lowest, &mut Lowest, 0);
        t.outcome = Outcome::BobWins { witness: 0 };
        assert!(matches!(t.replay(), Err(TranscriptError::Mismatch(_))));
        let mut t = play_game(cfg(Graph::path(4), 1, 3), &mut Lowest, &mut Lowest, 0);
        t.config.k = 2;
        assert!(t.replay().is_err());
    }
}
