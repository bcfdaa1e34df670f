use std::collections::BTreeMap;
use std::sync::Arc;

use cliquegame_core::format::{FormatError, GraphJson, WitnessJson};
use cliquegame_core::generate::{generate_ktree, rng_from_seed, sparsify_chordal};
use cliquegame_core::strategy::{ActivationAlice, AliceTurn, ColorPolicy};
use cliquegame_core::{
    Color, EngineError, GameConfig, GameState, GameTranscript, LinearOrdering, Move, Outcome,
    Player, Players, Status, Strategy, Vertex,
};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Random chordal instance: a k-tree on `n` vertices, sparsified.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateParams {
    /// Tree width of the underlying k-tree (clique number is one more).
    pub width: usize,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    /// Probability of dropping each edge, subject to staying chordal.
    #[serde(default)]
    pub sparsify: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub k: usize,
    pub c: usize,
    #[serde(default)]
    pub graph: Option<serde_json::Value>,
    /// A partial k-tree witness: Alice plans on `h_edges`, play uses `edges`.
    #[serde(default)]
    pub witness: Option<serde_json::Value>,
    #[serde(default)]
    pub generate: Option<GenerateParams>,
    /// Alice's vertex ordering, least first; defaults to one computed from
    /// the graph.
    #[serde(default)]
    pub ordering: Option<Vec<Vertex>>,
    #[serde(default)]
    pub color_policy: ColorPolicy,
    /// Seeds Alice's random color policy.
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    pub vertex: Vertex,
    pub color: Color,
    /// Number of moves the client has seen; a mismatch is a conflict.
    #[serde(default)]
    pub expect_moves: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionError {
    Invalid {
        location: Option<String>,
        message: String,
    },
    Illegal(EngineError),
    Stale {
        expected: usize,
        actual: usize,
    },
}

impl From<FormatError> for SessionError {
    fn from(e: FormatError) -> Self {
        let location = match &e {
            FormatError::Invalid { location, .. } => Some(location.clone()),
            FormatError::Syntax { line, column, .. } => {
                Some(format!("line {line}, column {column}"))
            }
        };
        SessionError::Invalid {
            location,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> SessionError {
    SessionError::Invalid {
        location: None,
        message: message.into(),
    }
}

/// Everything the board needs, and nothing that cannot be rebuilt from the
/// transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub k: usize,
    pub c: usize,
    pub graph: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy_graph: Option<GraphJson>,
    /// Alice's vertex ordering, least first.
    pub ordering: Vec<Vertex>,
    pub simplicial: bool,
    pub color_policy: ColorPolicy,
    /// 0 marks an uncolored vertex.
    pub colors: Vec<Color>,
    pub active: Vec<bool>,
    pub turn: Player,
    pub outcome: Outcome,
    pub moves: usize,
    /// Alice's most recent turn, including the vertices she activated.
    pub alice_last_turn: Option<AliceTurnView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliceTurnView {
    pub trigger: Option<Vertex>,
    pub activations: Vec<Vertex>,
    pub vertex: Vertex,
    pub color: Color,
}

impl From<&AliceTurn> for AliceTurnView {
    fn from(t: &AliceTurn) -> Self {
        AliceTurnView {
            trigger: t.trigger,
            activations: t.activations.clone(),
            vertex: t.vertex,
            color: t.color,
        }
    }
}

pub struct Session {
    pub id: String,
    state: GameState,
    alice: ActivationAlice,
    rng: ChaCha8Rng,
    /// Set when Alice could not produce a legal plan.
    forfeit: Option<Outcome>,
}

impl Session {
    pub fn create(id: String, req: CreateRequest) -> Result<Session, SessionError> {
        if req.k < 1 {
            return Err(invalid("k must be at least 1"));
        }
        if req.c < 1 {
            return Err(invalid("c must be at least 1"));
        }
        let sources = [
            req.graph.is_some(),
            req.witness.is_some(),
            req.generate.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(invalid("give exactly one of graph, witness or generate"));
        }
        let (play, strategy) = if let Some(v) = req.graph {
            let g: GraphJson =
                serde_json::from_value(v).map_err(|e| invalid(format!("graph: {e}")))?;
            (g.to_graph()?, None)
        } else if let Some(v) = req.witness {
            let w: WitnessJson =
                serde_json::from_value(v).map_err(|e| invalid(format!("witness: {e}")))?;
            let w = w.to_witness()?;
            w.validate().map_err(|e| invalid(format!("witness: {e}")))?;
            (w.g, Some(w.h))
        } else {
            let p = req.generate.expect("one source is present");
            if p.n > 500 {
                return Err(invalid("generated graphs are limited to 500 vertices"));
            }
            if !(0.0..=1.0).contains(&p.sparsify) {
                return Err(invalid("sparsify must lie in [0, 1]"));
            }
            let h = generate_ktree(p.width, p.n, p.seed)
                .map_err(|e| invalid(format!("generate: {e}")))?;
            (
                sparsify_chordal(&h, p.sparsify, &mut rng_from_seed(p.seed ^ 0x5eed)),
                None,
            )
        };
        let config =
            GameConfig::new(req.k, req.c, play, strategy).map_err(|e| invalid(e.to_string()))?;
        let alice = match req.ordering {
            None => ActivationAlice::new(&config, req.color_policy),
            Some(order) => {
                let order =
                    LinearOrdering::new(order).map_err(|e| invalid(format!("ordering: {e}")))?;
                ActivationAlice::with_ordering(&config, order, req.color_policy)
                    .map_err(|e| invalid(format!("ordering: {e}")))?
            }
        };
        let mut session = Session {
            id,
            state: GameState::new(Arc::new(config)),
            alice,
            rng: rng_from_seed(req.seed),
            forfeit: None,
        };
        session.alice_turn();
        Ok(session)
    }

    fn alice_turn(&mut self) {
        if self.state.status() != Status::Ongoing {
            return;
        }
        let applied = self
            .alice
            .plan(&self.state, &mut self.rng)
            .map_err(|e| e.to_string())
            .and_then(|plan| {
                for &v in &plan.activations {
                    self.state.activate(v).map_err(|e| e.to_string())?;
                }
                self.state
                    .apply_move(Player::Alice, plan.mv)
                    .map_err(|e| e.to_string())
            });
        if let Err(diagnostic) = applied {
            tracing::warn!(session = %self.id, %diagnostic, "alice forfeits");
            self.forfeit = Some(Outcome::Forfeit {
                player: Player::Alice,
                diagnostic,
            });
        }
    }

    pub fn outcome(&self) -> Outcome {
        self.forfeit
            .clone()
            .unwrap_or_else(|| self.state.status().into())
    }

    pub fn moves(&self) -> usize {
        self.state.colored_count()
    }

    /// Applies Bob's move and, if the game goes on, Alice's reply.
    pub fn submit(&mut self, req: &MoveRequest) -> Result<(), SessionError> {
        if let Some(expected) = req.expect_moves {
            if expected != self.moves() {
                return Err(SessionError::Stale {
                    expected,
                    actual: self.moves(),
                });
            }
        }
        if self.outcome() != Outcome::Ongoing {
            return Err(SessionError::Illegal(EngineError::GameOver));
        }
        self.state
            .apply_move(Player::Bob, Move::new(req.vertex, req.color))
            .map_err(SessionError::Illegal)?;
        self.alice_turn();
        Ok(())
    }

    /// Legal colors of every uncolored vertex; an empty list marks a vertex
    /// that can no longer be colored.
    pub fn hints(&self) -> BTreeMap<Vertex, Vec<Color>> {
        self.state
            .uncolored()
            .map(|v| (v, self.state.legal_colors(v).expect("vertex in range")))
            .collect()
    }

    pub fn transcript(&self) -> GameTranscript {
        let players = Players {
            alice: self.alice.name(),
            bob: "human".into(),
        };
        GameTranscript::from_state(&self.state, players, self.outcome())
    }

    pub fn view(&self) -> SessionView {
        let config = self.state.config();
        SessionView {
            id: self.id.clone(),
            k: config.k,
            c: config.colors,
            graph: GraphJson::from(&config.play_graph),
            strategy_graph: config.strategy_graph.as_ref().map(GraphJson::from),
            ordering: self.alice.ordering().as_slice().to_vec(),
            simplicial: self.alice.is_simplicial(),
            color_policy: self.alice.policy(),
            colors: self.state.coloring().to_vec(),
            active: self.state.active_set().to_vec(),
            turn: self.state.turn(),
            outcome: self.outcome(),
            moves: self.moves(),
            alice_last_turn: self.alice.last_turn().map(AliceTurnView::from),
        }
    }
}
