use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{GameConfig, GameState, Move, Strategy, StrategyError, TurnPlan};
use crate::graph::Vertex;
use crate::rules::{self, Color};
use crate::solver::{SolveError, Solver};

/// Every legal (vertex, color) pair, ordered by vertex then color.
pub(crate) fn legal_moves(state: &GameState) -> Vec<Move> {
    state
        .uncolored()
        .flat_map(|v| {
            state
                .legal_colors(v)
                .unwrap_or_default()
                .into_iter()
                .map(move |c| Move::new(v, c))
        })
        .collect()
}

fn lowest_legal(state: &GameState) -> Result<Move, StrategyError> {
    state
        .uncolored()
        .find_map(|v| {
            state
                .legal_colors(v)
                .ok()?
                .first()
                .map(|&c| Move::new(v, c))
        })
        .ok_or(StrategyError::NoMove)
}

/// Uniform over legal (vertex, color) pairs.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomBob;

impl Strategy for RandomBob {
    fn name(&self) -> String {
        "random".into()
    }

    fn plan(&mut self, state: &GameState, rng: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
        let moves = legal_moves(state);
        if moves.is_empty() {
            return Err(StrategyError::NoMove);
        }
        Ok(TurnPlan::just(moves[rng.gen_range(0..moves.len())]))
    }
}

/// How much a candidate move hurts Alice, compared lexicographically:
/// more vertices left without any legal color, then a smaller remaining
/// palette on the most squeezed neighbor, then more colors removed in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreatScore {
    pub kills: usize,
    /// Fewest legal colors left on a vertex that lost one; `usize::MAX` if none lost any.
    pub tightest: usize,
    pub removed: usize,
}

impl ThreatScore {
    fn key(&self) -> (usize, std::cmp::Reverse<usize>, usize) {
        (self.kills, std::cmp::Reverse(self.tightest), self.removed)
    }
}

/// Greedy adversary that tries to surround a vertex with monochromatic
/// k-cliques in distinct colors.
#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueThreatBob;

impl CliqueThreatBob {
    /// Scores of every legal move, in (vertex, color) order.
    pub fn scores(state: &GameState) -> Vec<(Move, ThreatScore)> {
        let cfg = state.config();
        let g = &cfg.play_graph;
        let before: Vec<Vec<Color>> = (0..state.n())
            .map(|v| {
                if state.is_colored(v) {
                    Vec::new()
                } else {
                    state.legal_colors(v).unwrap()
                }
            })
            .collect();
        let mut coloring = state.coloring().to_vec();
        let mut out = Vec::new();
        for v in state.uncolored() {
            for &alpha in &before[v] {
                coloring[v] = alpha;
                let mut score = ThreatScore {
                    kills: 0,
                    tightest: usize::MAX,
                    removed: 0,
                };
                for &u in g.neighbors(v) {
                    if coloring[u] != rules::UNCOLORED || !before[u].contains(&alpha) {
                        continue;
                    }
                    if !rules::is_legal(g, &coloring, cfg.k, u, alpha) {
                        let left = before[u].len() - 1;
                        score.removed += 1;
                        score.tightest = score.tightest.min(left);
                        if left == 0 {
                            score.kills += 1;
                        }
                    }
                }
                coloring[v] = rules::UNCOLORED;
                out.push((Move::new(v, alpha), score));
            }
        }
        out
    }

    pub fn best(state: &GameState) -> Option<Move> {
        // max_by_key keeps the last maximum; iterate in reverse so ties go to
        // the lowest (vertex, color).
        Self::scores(state)
            .into_iter()
            .rev()
            .max_by_key(|(_, s)| s.key())
            .map(|(m, _)| m)
    }
}

impl Strategy for CliqueThreatBob {
    fn name(&self) -> String {
        "clique-threat".into()
    }

    fn plan(&mut self, state: &GameState, _: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
        Self::best(state)
            .map(TurnPlan::just)
            .ok_or(StrategyError::NoMove)
    }
}

/// Perfect adversary backed by the exact solver: plays the lowest move after
/// which Alice (playing perfectly) loses, or the lowest legal move if none.
#[derive(Debug)]
pub struct MinimaxBob {
    solver: Solver,
}

impl MinimaxBob {
    pub fn new(config: &GameConfig, budget: u64) -> Self {
        MinimaxBob {
            solver: Solver::new(config.play_graph.clone(), config.k, config.colors, budget),
        }
    }

    pub fn choose(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        let mut coloring = state.coloring().to_vec();
        for m in legal_moves(state) {
            coloring[m.vertex] = m.color;
            let alice_wins = self
                .solver
                .alice_wins_from(&coloring)
                .map_err(|e| match e {
                    SolveError::Budget { budget } => StrategyError::Budget { budget },
                    other => StrategyError::Other(other.to_string()),
                })?;
            coloring[m.vertex] = rules::UNCOLORED;
            if !alice_wins {
                return Ok(m);
            }
        }
        lowest_legal(state)
    }
}

impl Strategy for MinimaxBob {
    fn name(&self) -> String {
        "minimax".into()
    }

    fn plan(&mut self, state: &GameState, _: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
        self.choose(state).map(TurnPlan::just)
    }
}

/// Plays the first still-legal move of a fixed script, otherwise the lowest legal move.
#[derive(Debug, Clone)]
pub struct ScriptedBob {
    script: Vec<Move>,
}

impl ScriptedBob {
    pub fn new(script: Vec<Move>) -> Self {
        ScriptedBob { script }
    }

    /// Colors `order` in sequence, each vertex with the color `color_of(v)`.
    pub fn from_order(order: &[Vertex], color_of: impl Fn(Vertex) -> Color) -> Self {
        ScriptedBob {
            script: order.iter().map(|&v| Move::new(v, color_of(v))).collect(),
        }
    }
}

impl Strategy for ScriptedBob {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn plan(&mut self, state: &GameState, _: &mut ChaCha8Rng) -> Result<TurnPlan, StrategyError> {
        let scripted = self.script.iter().copied().find(|m| {
            !state.is_colored(m.vertex)
                && state
                    .legal_colors(m.vertex)
                    .map(|l| l.contains(&m.color))
                    .unwrap_or(false)
        });
        match scripted {
            Some(m) => Ok(TurnPlan::just(m)),
            None => lowest_legal(state).map(TurnPlan::just),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;
    use std::sync::Arc;

    use super::*;
    use crate::engine::{GameConfig, Player, Status};
    use crate::generate::rng_from_seed;
    use crate::graph::Graph;

    fn state(g: Graph, k: usize, c: usize) -> GameState {
        GameState::new(Arc::new(GameConfig::new(k, c, g, None).unwrap()))
    }

    #[test]
    fn random_bob_covers_all_pairs_of_a_fresh_triangle() {
        let s = state(Graph::complete(3), 2, 2);
        assert_eq!(legal_moves(&s).len(), 6);
        let mut rng = rng_from_seed(5);
        let mut counts: HashMap<Move, usize> = HashMap::new();
        let draws = 10_000;
        for _ in 0..draws {
            *counts
                .entry(RandomBob.plan(&s, &mut rng).unwrap().mv)
                .or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        // chi-square with 5 degrees of freedom; 20.5 is the 0.999 quantile
        let expected = draws as f64 / 6.0;
        let chi2: f64 = counts
            .values()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 20.5, "chi-square {chi2}");
    }

    #[test]
    fn random_bob_is_reproducible() {
        let s = state(Graph::path(6), 1, 3);
        let seq = |seed| {
            let mut rng = rng_from_seed(seed);
            (0..20)
                .map(|_| RandomBob.plan(&s, &mut rng).unwrap().mv)
                .collect::<Vec<_>>()
        };
        assert_eq!(seq(3), seq(3));
    }

    #[test]
    fn clique_threat_falls_back_to_lowest_move() {
        let s = state(Graph::empty(3), 1, 2);
        assert_eq!(CliqueThreatBob::best(&s), Some(Move::new(0, 1)));
    }

    #[test]
    fn clique_threat_kills_the_centre_of_a_star() {
        // K_{1,3}, k = 1, c = 2; Alice colored leaf 1 with color 1, so the
        // centre only has color 2 left and coloring any leaf 2 kills it.
        let mut s = state(Graph::star(3), 1, 2);
        s.apply_move(Player::Alice, Move::new(1, 1)).unwrap();
        assert_eq!(CliqueThreatBob::best(&s), Some(Move::new(2, 2)));
        let mut scratch = s.clone();
        assert!(matches!(
            scratch.apply_move(Player::Bob, Move::new(2, 2)).unwrap(),
            Status::BobWins { witness: 0 }
        ));
    }

    #[test]
    fn scripted_bob_skips_illegal_entries() {
        let mut s = state(Graph::path(3), 1, 2);
        s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        let mut bob = ScriptedBob::new(vec![Move::new(0, 2), Move::new(1, 1), Move::new(2, 2)]);
        let plan = bob.plan(&s, &mut rng_from_seed(0)).unwrap();
        assert_eq!(plan.mv, Move::new(2, 2));
        let mut empty = ScriptedBob::new(vec![]);
        assert_eq!(
            empty.plan(&s, &mut rng_from_seed(0)).unwrap().mv,
            Move::new(1, 2)
        );
    }

    #[test]
    fn minimax_takes_an_immediate_kill() {
        // path 0-1-2, k = 1, c = 2: Alice colored 0 with 1; Bob wins by
        // coloring 2 with 2, leaving 1 without colors.
        let mut s = state(Graph::path(3), 1, 2);
        s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        let mut bob = MinimaxBob::new(s.config(), 10_000);
        assert_eq!(bob.choose(&s).unwrap(), Move::new(2, 2));
    }

    #[test]
    fn minimax_plays_lowest_move_when_alice_always_wins() {
        let mut s = state(Graph::path(2), 1, 2);
        s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        let mut bob = MinimaxBob::new(s.config(), 10_000);
        assert_eq!(bob.choose(&s).unwrap(), Move::new(1, 2));
    }

    #[test]
    fn minimax_reports_budget_exhaustion() {
        let s = state(Graph::path(8), 1, 3);
        let mut s = s;
        s.apply_move(Player::Alice, Move::new(0, 1)).unwrap();
        let mut bob = MinimaxBob::new(s.config(), 3);
        assert!(matches!(
            bob.choose(&s),
            Err(StrategyError::Budget { budget: 3 })
        ));
    }
}
