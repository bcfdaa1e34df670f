//! Alice's Activation Strategy.
//!
//! Alice fixes an ordering of her strategy graph. On her first turn she
//! activates and colors the least vertex. After Bob colors `b` she looks at
//! the mother of `b` (the least uncolored vertex of `b`'s closed parent
//! set). If there is none she colors the least uncolored vertex overall.
//! Otherwise she walks the mother chain, activating every inactive vertex she
//! passes, and colors the first vertex that was already active.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ColorPolicy;
use crate::engine::{GameConfig, GameState, Move, Player, Strategy, StrategyError, TurnPlan};
use crate::graph::{GraphError, Vertex};
use crate::ordering::{mcs_ordering, simplicial_ordering, LinearOrdering, OrderedGraph};
use crate::rules::Color;

/// The least uncolored vertex among `x` and its parents, if any.
pub fn mother(
    og: &OrderedGraph,
    state: &GameState,
    x: Vertex,
) -> Result<Option<Vertex>, GraphError> {
    let parents = og.parents(x)?;
    Ok(parents
        .iter()
        .copied()
        .chain(std::iter::once(x))
        .find(|&v| !state.is_colored(v)))
}

/// One Alice turn, kept for inspection (the session view shows it).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AliceTurn {
    /// Bob's vertex that triggered the search, absent on the first turn.
    pub trigger: Option<Vertex>,
    /// Vertices activated this turn, in order.
    pub activations: Vec<Vertex>,
    pub vertex: Vertex,
    pub color: Color,
}

#[derive(Debug, Clone)]
pub struct ActivationAlice {
    ordered: OrderedGraph,
    policy: ColorPolicy,
    simplicial: bool,
    last_turn: Option<AliceTurn>,
}

impl ActivationAlice {
    /// Uses a simplicial ordering of the strategy graph. A non-chordal
    /// strategy graph has none; the maximum-cardinality search order is used
    /// instead and [`is_simplicial`](Self::is_simplicial) reports false.
    pub fn new(config: &GameConfig, policy: ColorPolicy) -> Self {
        let graph = config.alice_graph().clone();
        let (ordering, simplicial) = match simplicial_ordering(&graph) {
            Some(o) => (o, true),
            None => (mcs_ordering(&graph), false),
        };
        let ordered = OrderedGraph::new(graph, ordering).expect("ordering covers the graph");
        ActivationAlice {
            ordered,
            policy,
            simplicial,
            last_turn: None,
        }
    }

    pub fn with_ordering(
        config: &GameConfig,
        ordering: LinearOrdering,
        policy: ColorPolicy,
    ) -> Result<Self, GraphError> {
        let ordered = OrderedGraph::new(config.alice_graph().clone(), ordering)?;
        let simplicial = ordered.is_simplicial_ordering();
        Ok(ActivationAlice {
            ordered,
            policy,
            simplicial,
            last_turn: None,
        })
    }

    pub fn ordered(&self) -> &OrderedGraph {
        &self.ordered
    }

    pub fn ordering(&self) -> &LinearOrdering {
        self.ordered.ordering()
    }

    pub fn policy(&self) -> ColorPolicy {
        self.policy
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn last_turn(&self) -> Option<&AliceTurn> {
        self.last_turn.as_ref()
    }

    fn least_uncolored(&self, state: &GameState) -> Option<Vertex> {
        self.ordering()
            .as_slice()
            .iter()
            .copied()
            .find(|&v| !state.is_colored(v))
    }

    fn color_for(
        &self,
        state: &GameState,
        u: Vertex,
        rng: &mut ChaCha8Rng,
    ) -> Result<Color, StrategyError> {
        let legal = state
            .legal_colors(u)
            .map_err(|e| StrategyError::Other(e.to_string()))?;
        self.policy
            .choose(state, &legal, rng)
            .ok_or(StrategyError::NoLegalColor { vertex: u })
    }

    /// Activate and color the least vertex of the ordering.
    pub fn first_move(
        &self,
        state: &GameState,
        rng: &mut ChaCha8Rng,
    ) -> Result<AliceTurn, StrategyError> {
        let v = self.ordering().least().ok_or(StrategyError::NoMove)?;
        let activations = if state.is_active(v) { vec![] } else { vec![v] };
        let color = self.color_for(state, v, rng)?;
        Ok(AliceTurn {
            trigger: None,
            activations,
            vertex: v,
            color,
        })
    }

    /// Alice's reply after Bob colored `b`.
    pub fn respond(
        &self,
        state: &GameState,
        b: Vertex,
        rng: &mut ChaCha8Rng,
    ) -> Result<AliceTurn, StrategyError> {
        let mut activated: Vec<Vertex> = Vec::new();
        let is_active =
            |v: Vertex, activated: &[Vertex]| state.is_active(v) || activated.contains(&v);
        // Bob's vertex is already active: the engine activates it with his move.
        let mother_of = |x: Vertex| {
            mother(&self.ordered, state, x).map_err(|e| StrategyError::Other(e.to_string()))
        };
        let u = match mother_of(b)? {
            None => {
                let u = self.least_uncolored(state).ok_or(StrategyError::NoMove)?;
                if !is_active(u, &activated) {
                    activated.push(u);
                }
                u
            }
            Some(mut x) => loop {
                if is_active(x, &activated) {
                    break x;
                }
                activated.push(x);
                // x is uncolored, so it is a candidate for its own mother.
                x = mother_of(x)?.expect("an uncolored vertex always has a mother");
            },
        };
        let color = self.color_for(state, u, rng)?;
        Ok(AliceTurn {
            trigger: Some(b),
            activations: activated,
            vertex: u,
            color,
        })
    }

    /// The turn Alice would play in `state`.
    pub fn decide(
        &self,
        state: &GameState,
        rng: &mut ChaCha8Rng,
    ) -> Result<AliceTurn, StrategyError> {
        let last_bob = state.events().iter().rev().find_map(|e| match *e {
            crate::engine::Event::Move {
                player: Player::Bob,
                vertex,
                ..
            } => Some(vertex),
            _ => None,
        });
        match last_bob {
            None => self.first_move(state, rng),
            Some(b) => self.respond(state, b, rng),
        }
    }
}

impl Strategy for ActivationAlice {
    fn name(&self) -> String {
        format!("activation({})", self.policy)
    }

    fn plan(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
        let turn = self.decide(state, rng)?;
        let plan = TurnPlan {
            activations: turn.activations.clone(),
            mv: Move::new(turn.vertex, turn.color),
        };
        self.last_turn = Some(turn);
        Ok(plan)
    }
}
