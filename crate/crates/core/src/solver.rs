//! Exact winner determination by memoized game-tree search.
//!
//! Positions are canonicalized under permutations of the color labels: the
//! color classes are sorted by (size, vertex list) and renumbered, so the key
//! is the relabeled coloring. Whose turn it is follows from the number of
//! colored vertices, so the key fixes it too. The search only tries colors
//! already in use plus one fresh color, since all unused colors are
//! interchangeable.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{GameConfig, GameState, Move, Player, Status, Strategy};
use crate::generate::rng_from_seed;
use crate::graph::{Graph, Vertex};
use crate::rules::{self, Color, MAX_COLORS, UNCOLORED};
use crate::strategy::{ActivationAlice, ColorPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },
    #[error("input too large: {0}")]
    InputTooLarge(String),
}

/// Memoized perfect-play search for one (graph, k, c).
#[derive(Debug)]
pub struct Solver {
    graph: Graph,
    k: usize,
    colors: usize,
    budget: u64,
    memo: HashMap<Vec<Color>, bool>,
    nodes: u64,
}

impl Solver {
    pub fn new(graph: Graph, k: usize, colors: usize, budget: u64) -> Self {
        Solver {
            graph,
            k,
            colors,
            budget,
            memo: HashMap::new(),
            nodes: 0,
        }
    }

    /// Positions expanded by the most recent query.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Whether Alice wins the empty board.
    pub fn alice_wins_root(&mut self) -> Result<bool, SolveError> {
        self.alice_wins_from(&vec![UNCOLORED; self.graph.n()])
    }

    /// Whether Alice wins from `coloring` with perfect play on both sides.
    /// Alice is to move iff an even number of vertices is colored. The node
    /// budget applies per query; the memo table persists between queries.
    pub fn alice_wins_from(&mut self, coloring: &[Color]) -> Result<bool, SolveError> {
        if coloring.len() != self.graph.n() {
            return Err(SolveError::InputTooLarge(format!(
                "coloring has {} entries for a graph on {} vertices",
                coloring.len(),
                self.graph.n()
            )));
        }
        if self.colors > MAX_COLORS {
            return Err(SolveError::InputTooLarge(format!("{} colors", self.colors)));
        }
        self.nodes = 0;
        let mut pos = canonicalize(coloring);
        self.search(&mut pos)
    }

    fn search(&mut self, pos: &mut Vec<Color>) -> Result<bool, SolveError> {
        let uncolored: Vec<Vertex> = (0..pos.len()).filter(|&v| pos[v] == UNCOLORED).collect();
        if uncolored.is_empty() {
            return Ok(true);
        }
        let (g, k, c) = (&self.graph, self.k, self.colors);
        if uncolored
            .iter()
            .any(|&v| !rules::has_legal_color(g, pos, k, c, v))
        {
            return Ok(false);
        }
        if let Some(&won) = self.memo.get(pos.as_slice()) {
            return Ok(won);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::Budget {
                budget: self.budget,
            });
        }
        let alice = (pos.len() - uncolored.len()).is_multiple_of(2);
        let used = pos.iter().copied().max().unwrap_or(0) as usize;
        let palette = (used + 1).min(c);
        let mut result = !alice;
        'moves: for &v in &uncolored {
            for color in 1..=palette as Color {
                if !rules::is_legal(&self.graph, pos, k, v, color) {
                    continue;
                }
                let mut child = pos.clone();
                child[v] = color;
                let mut child = canonicalize(&child);
                let won = self.search(&mut child)?;
                if won == alice {
                    result = alice;
                    break 'moves;
                }
            }
        }
        self.memo.insert(pos.clone(), result);
        Ok(result)
    }
}

/// Renumbers color classes by (size, sorted vertex list), smallest first.
pub fn canonicalize(coloring: &[Color]) -> Vec<Color> {
    let mut classes: HashMap<Color, Vec<Vertex>> = HashMap::new();
    for (v, &c) in coloring.iter().enumerate() {
        if c != UNCOLORED {
            classes.entry(c).or_default().push(v);
        }
    }
    let mut classes: Vec<(Color, Vec<Vertex>)> = classes.into_iter().collect();
    classes.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    let mut out = vec![UNCOLORED; coloring.len()];
    for (i, (_, members)) in classes.iter().enumerate() {
        for &v in members {
            out[v] = (i + 1) as Color;
        }
    }
    out
}

pub fn alice_wins(g: &Graph, k: usize, c: usize, budget: u64) -> Result<bool, SolveError> {
    check_params(k, c)?;
    Solver::new(g.clone(), k, c, budget).alice_wins_root()
}

fn check_params(k: usize, c: usize) -> Result<(), SolveError> {
    if k == 0 || c == 0 || c > MAX_COLORS {
        return Err(SolveError::InputTooLarge(format!(
            "unsupported parameters k={k}, c={c}"
        )));
    }
    Ok(())
}

/// Outcome of one color count: a definite answer or an exhausted budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Win,
    Loss,
    Budget,
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Win => s.serialize_bool(true),
            Verdict::Loss => s.serialize_bool(false),
            Verdict::Budget => s.serialize_str("budget"),
        }
    }
}

impl<'de> Deserialize<'de> for Verdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::Bool(true) => Ok(Verdict::Win),
            serde_json::Value::Bool(false) => Ok(Verdict::Loss),
            serde_json::Value::String(s) if s == "budget" => Ok(Verdict::Budget),
            other => Err(serde::de::Error::custom(format!("bad verdict {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorEntry {
    pub c: usize,
    pub alice_wins: Verdict,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: usize,
    pub k: usize,
    pub c_max: usize,
    pub budget: u64,
    pub entries: Vec<ColorEntry>,
    /// Least winning c, provided every smaller c is a definite loss.
    pub chi_game: Option<usize>,
    /// A win followed by a loss at a larger c.
    pub non_monotone: bool,
    pub elapsed_ms: u64,
}

impl SolveReport {
    pub fn verdict(&self, c: usize) -> Option<Verdict> {
        self.entries.iter().find(|e| e.c == c).map(|e| e.alice_wins)
    }

    pub fn total_nodes(&self) -> u64 {
        self.entries.iter().map(|e| e.nodes).sum()
    }
}

/// Solves every c in `1..=c_max` (each with its own memo table, in parallel).
pub fn game_chromatic_number(
    g: &Graph,
    k: usize,
    c_max: usize,
    budget: u64,
) -> Result<SolveReport, SolveError> {
    check_params(k, c_max.max(1))?;
    let start = Instant::now();
    let entries: Vec<ColorEntry> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let mut solver = Solver::new(g.clone(), k, c, budget);
            let alice_wins = match solver.alice_wins_root() {
                Ok(true) => Verdict::Win,
                Ok(false) => Verdict::Loss,
                Err(_) => Verdict::Budget,
            };
            ColorEntry {
                c,
                alice_wins,
                nodes: solver.nodes(),
            }
        })
        .collect();
    let chi_game = entries
        .iter()
        .take_while(|e| e.alice_wins != Verdict::Budget)
        .find(|e| e.alice_wins == Verdict::Win)
        .map(|e| e.c);
    let non_monotone = entries
        .iter()
        .position(|e| e.alice_wins == Verdict::Win)
        .is_some_and(|i| entries[i..].iter().any(|e| e.alice_wins == Verdict::Loss));
    Ok(SolveReport {
        n: g.n(),
        k,
        c_max,
        budget,
        entries,
        chi_game,
        non_monotone,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Unmemoized, uncanonicalized search with its own legality test, kept as an
/// independent check on [`alice_wins`]. Limited to n ≤ 6 and c ≤ 3.
pub fn brute_force_winner(g: &Graph, k: usize, c: usize) -> Result<bool, SolveError> {
    if g.n() > 6 || c > 3 || k == 0 || c == 0 {
        return Err(SolveError::InputTooLarge(format!(
            "brute force supports n <= 6, 1 <= c <= 3 and k >= 1; got n={}, c={c}, k={k}",
            g.n()
        )));
    }
    let mut coloring = vec![0u8; g.n()];
    Ok(brute_walk(g, k, c as Color, &mut coloring, true))
}

fn brute_legal(g: &Graph, coloring: &[Color], k: usize, v: Vertex, color: Color) -> bool {
    let same: Vec<Vertex> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&u| coloring[u] == color)
        .collect();
    // every k-subset of `same`, by bitmask
    (0u32..1 << same.len())
        .filter(|m| m.count_ones() as usize == k)
        .all(|m| {
            let set: Vec<Vertex> = (0..same.len())
                .filter(|&i| m & (1 << i) != 0)
                .map(|i| same[i])
                .collect();
            !g.is_clique(&set)
        })
}

fn brute_walk(g: &Graph, k: usize, c: Color, coloring: &mut Vec<Color>, alice: bool) -> bool {
    let uncolored: Vec<Vertex> = (0..g.n()).filter(|&v| coloring[v] == 0).collect();
    if uncolored.is_empty() {
        return true;
    }
    if uncolored
        .iter()
        .any(|&v| (1..=c).all(|a| !brute_legal(g, coloring, k, v, a)))
    {
        return false;
    }
    for &v in &uncolored {
        for a in 1..=c {
            if !brute_legal(g, coloring, k, v, a) {
                continue;
            }
            coloring[v] = a;
            let won = brute_walk(g, k, c, coloring, !alice);
            coloring[v] = 0;
            if won == alice {
                return alice;
            }
        }
    }
    !alice
}

/// Searches every Bob reply sequence against a deterministic Activation
/// Alice. Returns Bob's moves of a winning line, or `None` if Alice survives
/// all of them.
pub fn refute_activation(
    config: &GameConfig,
    policy: ColorPolicy,
    budget: u64,
) -> Result<Option<Vec<Move>>, SolveError> {
    if !policy.is_deterministic() {
        return Err(SolveError::InputTooLarge(
            "the color policy must be deterministic".into(),
        ));
    }
    let alice = ActivationAlice::new(config, policy);
    let mut search = Refuter {
        alice,
        safe: HashMap::new(),
        nodes: 0,
        budget,
    };
    let mut state = GameState::new(std::sync::Arc::new(config.clone()));
    if state.status() != Status::Ongoing {
        return Ok(None);
    }
    if !search.alice_turn(&mut state) {
        return Ok(Some(Vec::new()));
    }
    let mut line = Vec::new();
    Ok(search.bob_turn(&state, &mut line)?.then_some(line))
}

struct Refuter {
    alice: ActivationAlice,
    safe: HashMap<(Vec<Color>, Vec<bool>), ()>,
    nodes: u64,
    budget: u64,
}

impl Refuter {
    /// Plays Alice's turn; false if that loses.
    fn alice_turn(&mut self, state: &mut GameState) -> bool {
        let mut rng = rng_from_seed(0);
        let Ok(plan) = self.alice.plan(state, &mut rng) else {
            return false;
        };
        for &v in &plan.activations {
            if state.activate(v).is_err() {
                return false;
            }
        }
        !matches!(
            state.apply_move(Player::Alice, plan.mv),
            Err(_) | Ok(Status::BobWins { .. })
        )
    }

    /// Whether Bob, to move, can force a win; the winning line is left in `line`.
    fn bob_turn(&mut self, state: &GameState, line: &mut Vec<Move>) -> Result<bool, SolveError> {
        let key = (state.coloring().to_vec(), state.active_set().to_vec());
        if self.safe.contains_key(&key) {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::Budget {
                budget: self.budget,
            });
        }
        for v in state.uncolored().collect::<Vec<_>>() {
            for color in state.legal_colors(v).unwrap_or_default() {
                let m = Move::new(v, color);
                let mut next = state.clone();
                line.push(m);
                match next.apply_move(Player::Bob, m) {
                    Ok(Status::BobWins { .. }) => return Ok(true),
                    Ok(Status::Ongoing) => {
                        if !self.alice_turn(&mut next) {
                            return Ok(true);
                        }
                        if next.status() == Status::Ongoing && self.bob_turn(&next, line)? {
                            return Ok(true);
                        }
                    }
                    _ => {}
                }
                line.pop();
            }
        }
        self.safe.insert(key, ());
        Ok(false)
    }
}
