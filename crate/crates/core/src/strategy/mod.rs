//! Move-producing agents and the audit of Alice's bookkeeping.

mod activation;
mod bob;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use activation::{mother, ActivationAlice, AliceTurn};
pub use bob::{CliqueThreatBob, MinimaxBob, RandomBob, ScriptedBob, ThreatScore};

use crate::engine::{Event, GameConfig, GameState, GameTranscript, Player, Strategy};
use crate::rules::Color;

/// How Alice picks among the legal colors of the vertex she colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum ColorPolicy {
    #[default]
    LeastIndex,
    GreatestIndex,
    /// The legal color currently used on the fewest vertices.
    LeastUsed,
    Random,
}

impl ColorPolicy {
    pub const ALL: [ColorPolicy; 4] = [
        ColorPolicy::LeastIndex,
        ColorPolicy::GreatestIndex,
        ColorPolicy::LeastUsed,
        ColorPolicy::Random,
    ];

    pub fn choose(self, state: &GameState, legal: &[Color], rng: &mut ChaCha8Rng) -> Option<Color> {
        match self {
            ColorPolicy::LeastIndex => legal.first().copied(),
            ColorPolicy::GreatestIndex => legal.last().copied(),
            ColorPolicy::LeastUsed => legal
                .iter()
                .copied()
                .min_by_key(|&c| state.coloring().iter().filter(|&&x| x == c).count()),
            ColorPolicy::Random => legal.choose(rng).copied(),
        }
    }

    pub fn is_deterministic(self) -> bool {
        self != ColorPolicy::Random
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ColorPolicy::LeastIndex => "least-index",
            ColorPolicy::GreatestIndex => "greatest-index",
            ColorPolicy::LeastUsed => "least-used",
            ColorPolicy::Random => "random",
        }
    }
}

impl fmt::Display for ColorPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ColorPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ColorPolicy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown color policy {s:?}"))
    }
}

impl Serialize for ColorPolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for ColorPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Strategy selection as written in experiment configs, e.g.
/// `{"type": "activation", "color_policy": "least-index"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum AliceSpec {
    Activation {
        #[serde(default)]
        color_policy: ColorPolicy,
    },
}

impl Default for AliceSpec {
    fn default() -> Self {
        AliceSpec::Activation {
            color_policy: ColorPolicy::LeastIndex,
        }
    }
}

impl AliceSpec {
    pub fn build(&self, config: &GameConfig) -> ActivationAlice {
        match *self {
            AliceSpec::Activation { color_policy } => ActivationAlice::new(config, color_policy),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum BobSpec {
    Random,
    CliqueThreat,
    Minimax {
        #[serde(default = "default_budget")]
        budget: u64,
    },
}

pub fn default_budget() -> u64 {
    5_000_000
}

impl BobSpec {
    pub fn build(&self, config: &GameConfig) -> Box<dyn Strategy> {
        match *self {
            BobSpec::Random => Box::new(RandomBob),
            BobSpec::CliqueThreat => Box::new(CliqueThreatBob),
            BobSpec::Minimax { budget } => Box::new(MinimaxBob::new(config, budget)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            BobSpec::Random => "random".into(),
            BobSpec::CliqueThreat => "clique-threat".into(),
            BobSpec::Minimax { .. } => "minimax".into(),
        }
    }
}

impl FromStr for BobSpec {
    type Err = String;

    /// Short names used on the command line: `random`, `clique-threat`, `minimax`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(BobSpec::Random),
            "clique-threat" => Ok(BobSpec::CliqueThreat),
            "minimax" => Ok(BobSpec::Minimax {
                budget: default_budget(),
            }),
            other => Err(format!("unknown bob strategy {other:?}")),
        }
    }
}

/// Checks Alice's bookkeeping over a transcript: every vertex receives at
/// most two Alice actions (one activation, one coloring), she never colors a
/// vertex she has not activated first, and she colors exactly one vertex per
/// turn. `C ⊆ A` holds by construction of the engine.
pub fn audit_transcript(t: &GameTranscript) -> Result<(), String> {
    let n = t.config.play_graph.n;
    let mut actions = vec![0u8; n];
    let mut active = vec![false; n];
    let mut colored = vec![false; n];
    let mut expect = Player::Alice;
    for (i, e) in t.events.iter().enumerate() {
        match *e {
            Event::Activate { vertex } => {
                if active[vertex] {
                    return Err(format!("event {i}: vertex {vertex} activated twice"));
                }
                active[vertex] = true;
                actions[vertex] += 1;
            }
            Event::Move {
                player,
                vertex,
                activates,
                ..
            } => {
                if player != expect {
                    return Err(format!("event {i}: {player:?} moved out of turn"));
                }
                if player == Player::Alice {
                    if activates || !active[vertex] {
                        return Err(format!("event {i}: Alice colored inactive vertex {vertex}"));
                    }
                    actions[vertex] += 1;
                }
                active[vertex] = true;
                colored[vertex] = true;
                expect = player.other();
            }
        }
        if let Some(v) = (0..n).find(|&v| colored[v] && !active[v]) {
            return Err(format!("event {i}: colored vertex {v} is not active"));
        }
        if let Some(v) = (0..n).find(|&v| actions[v] > 2) {
            return Err(format!(
                "event {i}: vertex {v} received {} Alice actions",
                actions[v]
            ));
        }
    }
    Ok(())
}
