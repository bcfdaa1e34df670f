use std::sync::Arc;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentSpec, HarnessError, SuiteParams};
use crate::engine::{play_game, GameConfig, GameTranscript, Outcome, Player};
use crate::format::graph_digest;
use crate::generate::{
    ktree_with_rng, random_permutation, rng_from_seed, sparsify_chordal, PartialKTreeWitness,
};
use crate::graph::Graph;
use crate::ordering::{clique_number, is_chordal};
use crate::strategy::audit_transcript;

/// Seed of instance `index`, drawn from its own ChaCha stream so instances
/// are independent of each other and of scheduling.
pub fn instance_seed(seed: u64, index: usize) -> u64 {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(index as u64 + 1);
    rng.next_u64()
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub index: usize,
    pub seed: u64,
    pub config: GameConfig,
    /// One game seed per Bob strategy of the experiment.
    pub game_seeds: Vec<u64>,
}

/// Builds and re-validates instance `index`.
pub fn generate_instance(
    spec: &ExperimentSpec,
    params: &SuiteParams,
    index: usize,
) -> Result<Instance, HarnessError> {
    let seed = instance_seed(spec.seed, index);
    let mut rng = rng_from_seed(seed);
    let gen_err = |m: String| HarnessError::Generation(format!("instance {index}: {m}"));
    let n = rng.gen_range(spec.n_min..=spec.n_max);
    let tree = ktree_with_rng(params.omega - 1, n, &mut rng).map_err(|e| gen_err(e.to_string()))?;
    let h = tree.relabel(&random_permutation(n, &mut rng));
    let config = if params.partial {
        let keep = rng.gen_range(spec.keep_min..=1.0);
        let mut g = Graph::empty(n);
        for (u, v) in h.edges() {
            if rng.gen_bool(keep) {
                g.add_edge(u, v).map_err(|e| gen_err(e.to_string()))?;
            }
        }
        let witness = PartialKTreeWitness {
            g,
            h,
            k: params.omega - 1,
        };
        witness.validate().map_err(|e| gen_err(e.to_string()))?;
        if clique_number(&witness.h) != params.omega {
            return Err(gen_err("witness clique number is off".into()));
        }
        GameConfig::new(params.k, params.c, witness.g, Some(witness.h))
    } else {
        let drop = rng.gen_range(0.0..=spec.sparsify);
        let g = sparsify_chordal(&h, drop, &mut rng);
        if !is_chordal(&g) || clique_number(&g) != params.omega {
            return Err(gen_err("sparsified graph left the hypothesis class".into()));
        }
        GameConfig::new(params.k, params.c, g, None)
    }
    .map_err(|e| gen_err(e.to_string()))?;
    let game_seeds = spec.bobs.iter().map(|_| rng.next_u64()).collect();
    Ok(Instance {
        index,
        seed,
        config,
        game_seeds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRow {
    pub index: usize,
    pub n: usize,
    pub edges: usize,
    pub graph_digest: String,
    pub seed: u64,
    pub game_seed: u64,
    pub bob: String,
    pub outcome: String,
    pub witness: Option<usize>,
    pub moves: usize,
    pub alice_lost: bool,
    /// Accounting audit failure, if any.
    pub audit: Option<String>,
    pub violation: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteVerdict {
    Pass,
    Fail,
    /// Findings only; the suite carries no guarantee.
    Exempt,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub instances: usize,
    pub games: usize,
    pub alice_wins: usize,
    pub alice_losses: usize,
    /// Games that ended in a forfeit by either side.
    pub unfinished: usize,
    pub audit_failures: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub k: usize,
    pub omega: usize,
    pub c: usize,
    pub partial: bool,
    pub seed: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub alice: String,
    pub bobs: Vec<String>,
    /// Instance counts and the Bob mix are choices of this harness.
    pub sampling: String,
    pub summary: SuiteSummary,
    pub verdict: SuiteVerdict,
    pub rows: Vec<GameRow>,
    /// Full transcripts of the flagged games.
    pub failures: Vec<GameTranscript>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per game, same columns as the JSON rows.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("row serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 output")
    }

    /// 0 for pass or exempt, 1 when a violation was flagged.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            SuiteVerdict::Fail => 1,
            _ => 0,
        }
    }
}

fn outcome_label(o: &Outcome) -> (String, Option<usize>) {
    match o {
        Outcome::Ongoing => ("ongoing".into(), None),
        Outcome::AliceWins => ("alice-wins".into(), None),
        Outcome::BobWins { witness } => ("bob-wins".into(), Some(*witness)),
        Outcome::Forfeit {
            player: Player::Alice,
            ..
        } => ("alice-forfeit".into(), None),
        Outcome::Forfeit {
            player: Player::Bob,
            ..
        } => ("bob-forfeit".into(), None),
    }
}

fn play_instance(
    spec: &ExperimentSpec,
    inst: &Instance,
    exempt: bool,
) -> Vec<(GameRow, Option<GameTranscript>)> {
    let config = Arc::new(inst.config.clone());
    let digest = graph_digest(&config.play_graph);
    spec.bobs
        .iter()
        .zip(&inst.game_seeds)
        .map(|(bob_spec, &game_seed)| {
            let mut alice = spec.alice.build(&config);
            let mut bob = bob_spec.build(&config);
            let t = play_game(Arc::clone(&config), &mut alice, bob.as_mut(), game_seed);
            let audit = audit_transcript(&t).err();
            let (outcome, witness) = outcome_label(&t.outcome);
            let alice_lost = matches!(
                t.outcome,
                Outcome::BobWins { .. }
                    | Outcome::Forfeit {
                        player: Player::Alice,
                        ..
                    }
            );
            let unfinished = !matches!(t.outcome, Outcome::AliceWins | Outcome::BobWins { .. });
            let violation = audit.is_some() || (!exempt && (alice_lost || unfinished));
            let row = GameRow {
                index: inst.index,
                n: config.n(),
                edges: config.play_graph.edge_count(),
                graph_digest: digest.clone(),
                seed: inst.seed,
                game_seed,
                bob: bob_spec.label(),
                outcome,
                witness,
                moves: t.move_count(),
                alice_lost,
                audit,
                violation,
            };
            let keep = violation || (exempt && alice_lost);
            (row, keep.then_some(t))
        })
        .collect()
}

/// Generates every instance (failing before any game if one is invalid),
/// then plays them in parallel. Rows come back in instance order.
pub fn run_suite(spec: &ExperimentSpec) -> Result<SuiteReport, HarnessError> {
    let params = spec.resolve()?;
    let instances: Vec<Instance> = (0..spec.instances)
        .into_par_iter()
        .map(|i| generate_instance(spec, &params, i))
        .collect::<Result<_, _>>()?;
    let exempt = spec.suite.is_exempt();
    let played: Vec<Vec<(GameRow, Option<GameTranscript>)>> = instances
        .par_iter()
        .map(|inst| play_instance(spec, inst, exempt))
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (row, t) in played.into_iter().flatten() {
        rows.push(row);
        failures.extend(t);
    }
    let summary = SuiteSummary {
        instances: spec.instances,
        games: rows.len(),
        alice_wins: rows.iter().filter(|r| r.outcome == "alice-wins").count(),
        alice_losses: rows.iter().filter(|r| r.alice_lost).count(),
        unfinished: rows
            .iter()
            .filter(|r| r.outcome.ends_with("forfeit"))
            .count(),
        audit_failures: rows.iter().filter(|r| r.audit.is_some()).count(),
        violations: rows.iter().filter(|r| r.violation).count(),
    };
    let verdict = if summary.violations > 0 {
        SuiteVerdict::Fail
    } else if exempt {
        SuiteVerdict::Exempt
    } else {
        SuiteVerdict::Pass
    };
    Ok(SuiteReport {
        suite: spec.suite.to_string(),
        k: params.k,
        omega: params.omega,
        c: params.c,
        partial: params.partial,
        seed: spec.seed,
        n_min: spec.n_min,
        n_max: spec.n_max,
        alice: format!("{:?}", spec.alice),
        bobs: spec.bobs.iter().map(|b| b.label()).collect(),
        sampling: format!(
            "{} instances x {} bob strategies, sizes {}..={}; counts and mix chosen by this harness",
            spec.instances,
            spec.bobs.len(),
            spec.n_min,
            spec.n_max
        ),
        summary,
        verdict,
        rows,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Suite;

    fn spec(suite: Suite, k: usize, instances: usize) -> ExperimentSpec {
        let mut s = ExperimentSpec::new(suite);
        s.k = Some(k);
        s.instances = instances;
        s.n_max = 12;
        s
    }

    #[test]
    fn small_theorem_run_passes() {
        let r = run_suite(&spec(Suite::TheoremK3, 2, 20)).unwrap();
        assert_eq!(r.verdict, SuiteVerdict::Pass);
        assert_eq!(r.rows.len(), 40);
        assert!(r.rows.windows(2).all(|w| w[0].index <= w[1].index));
        assert_eq!(r.summary.alice_wins, 40);
    }

    #[test]
    fn reports_are_reproducible() {
        let s = spec(Suite::TheoremK3, 1, 15);
        assert_eq!(
            run_suite(&s).unwrap().to_json(),
            run_suite(&s).unwrap().to_json()
        );
        let mut other = s.clone();
        other.seed = 1;
        assert_ne!(run_suite(&s).unwrap().rows, run_suite(&other).unwrap().rows);
    }

    #[test]
    fn partial_instances_carry_a_witness() {
        let mut s = spec(Suite::CorollaryPartial, 2, 10);
        s.lambda = Some(2);
        s.c = Some(4);
        let params = s.resolve().unwrap();
        for i in 0..10 {
            let inst = generate_instance(&s, &params, i).unwrap();
            let h = inst.config.strategy_graph.as_ref().unwrap();
            assert!(inst.config.play_graph.is_subgraph_of(h));
            assert_eq!(clique_number(h), 3);
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let r = run_suite(&spec(Suite::TheoremK3, 1, 3)).unwrap();
        let text = r.to_csv();
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("index,n,edges,graph_digest,seed"));
        assert_eq!(lines.count(), 6);
    }
}
