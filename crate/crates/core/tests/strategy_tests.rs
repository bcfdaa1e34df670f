mod common;

use std::sync::Arc;

use cliquegame_core::catalog::{connected_chordal_catalog, graphs_up_to_iso, permutations};
use cliquegame_core::fixtures::{self, pair_color, A, B, C, D, E, F, G, H, I, OUTER};
use cliquegame_core::generate::{generate_ktree, rng_from_seed};
use cliquegame_core::ordering::{clique_number, is_chordal, LinearOrdering};
use cliquegame_core::strategy::{
    audit_transcript, mother, ActivationAlice, CliqueThreatBob, ColorPolicy, MinimaxBob, RandomBob,
    ScriptedBob,
};
use cliquegame_core::{
    play_game, Event, GameConfig, GameState, Move, Outcome, Player, Status, Strategy,
};
use rand::Rng;

fn config(g: cliquegame_core::Graph, k: usize, c: usize) -> Arc<GameConfig> {
    Arc::new(GameConfig::new(k, c, g, None).unwrap())
}

#[test]
fn mother_of_b_is_g_once_a_is_colored() {
    let cfg = config(fixtures::figure2(), 2, 4);
    let alice =
        ActivationAlice::with_ordering(&cfg, fixtures::figure_ordering(), ColorPolicy::LeastIndex)
            .unwrap();
    let mut s = GameState::new(cfg);
    assert_eq!(mother(alice.ordered(), &s, B).unwrap(), Some(A));
    s.apply_move(Player::Alice, Move::new(A, 1)).unwrap();
    assert_eq!(mother(alice.ordered(), &s, B).unwrap(), Some(G));
}

#[test]
fn clique_threat_completes_the_fourth_pair() {
    let mut s = GameState::new(config(fixtures::figure1(), 2, 4));
    for (i, &v) in [A, B, C, D, E, F, H].iter().enumerate() {
        let player = if i % 2 == 0 {
            Player::Alice
        } else {
            Player::Bob
        };
        s.apply_move(player, Move::new(v, pair_color(v))).unwrap();
    }
    assert_eq!(s.turn(), Player::Bob);
    assert_eq!(CliqueThreatBob::best(&s), Some(Move::new(I, 4)));
}

#[test]
fn clique_threat_squeezes_the_star_centre() {
    // K_{1,3}, k = 1, c = 2, after Alice colored leaf 1 with color 1
    let mut s = GameState::new(config(cliquegame_core::Graph::star(3), 1, 2));
    s.apply_move(Player::Alice, Move::new(1, 1)).unwrap();
    let g = s.config().play_graph.clone();
    let remaining = |m: Move| {
        let mut col = s.coloring().to_vec();
        col[m.vertex] = m.color;
        if m.vertex == 0 {
            usize::MAX
        } else {
            common::brute_legal_colors(&g, &col, 1, 2, 0).len()
        }
    };
    let options: Vec<Move> = s
        .uncolored()
        .flat_map(|v| {
            common::brute_legal_colors(&g, s.coloring(), 1, 2, v)
                .into_iter()
                .map(move |c| Move::new(v, c))
        })
        .collect();
    let best = options.iter().map(|&m| remaining(m)).min().unwrap();
    let pick = CliqueThreatBob::best(&s).unwrap();
    assert_eq!(remaining(pick), best);
    assert_eq!(pick, Move::new(2, 2));
}

#[test]
fn bob_strategies_only_emit_legal_moves() {
    let mut rng = rng_from_seed(8);
    for seed in 0..100 {
        let k = rng.gen_range(1..4);
        let g = generate_ktree(k, rng.gen_range(k + 1..15), seed).unwrap();
        let cfg = config(g, k, rng.gen_range(1..k + 3));
        for bob in [&mut RandomBob as &mut dyn Strategy, &mut CliqueThreatBob] {
            let t = play_game(Arc::clone(&cfg), &mut RandomBob, bob, seed);
            assert!(
                !matches!(t.outcome, Outcome::Forfeit { .. }),
                "{:?}",
                t.outcome
            );
            t.replay().unwrap();
        }
    }
}

#[test]
fn activation_accounting_holds_on_random_games() {
    let mut rng = rng_from_seed(9);
    for seed in 0..300 {
        let k = rng.gen_range(1..4);
        let g = generate_ktree(k, rng.gen_range(k + 1..25), seed).unwrap();
        let c = rng.gen_range(1..k + 4);
        let cfg = config(g, k, c);
        let policy = ColorPolicy::ALL[seed as usize % 4];
        let mut alice = ActivationAlice::new(&cfg, policy);
        let t = play_game(cfg, &mut alice, &mut RandomBob, seed);
        audit_transcript(&t).unwrap();
        t.replay().unwrap();
    }
}

#[test]
fn audit_rejects_coloring_an_inactive_vertex() {
    let cfg = config(cliquegame_core::Graph::path(3), 1, 3);
    let t = play_game(cfg, &mut RandomBob, &mut RandomBob, 1);
    // RandomBob playing Alice never activates anything first
    assert!(audit_transcript(&t).is_err());
}

#[test]
fn every_policy_wins_small_theorem_instances() {
    for policy in ColorPolicy::ALL {
        for seed in 0..50u64 {
            let k = 1 + (seed % 3) as usize;
            let g = generate_ktree(k, 6 + (seed % 10) as usize, seed).unwrap();
            let cfg = config(g, k, k + 3);
            let mut alice = ActivationAlice::new(&cfg, policy);
            let t = play_game(cfg, &mut alice, &mut CliqueThreatBob, seed);
            assert_eq!(t.outcome, Outcome::AliceWins, "{policy} seed {seed}");
        }
    }
}

/// Alice's activations happen before her move on the same turn, and the
/// vertex she colors is active.
#[test]
fn activation_events_precede_alice_moves() {
    let cfg = config(generate_ktree(2, 18, 4).unwrap(), 2, 5);
    let mut alice = ActivationAlice::new(&cfg, ColorPolicy::LeastIndex);
    let t = play_game(cfg, &mut alice, &mut CliqueThreatBob, 0);
    let mut last_player = None;
    for e in &t.events {
        match e {
            Event::Activate { .. } => assert_ne!(last_player, Some(Player::Alice)),
            Event::Move {
                player, activates, ..
            } => {
                if *player == Player::Alice {
                    assert!(!activates);
                }
                last_player = Some(*player);
            }
        }
    }
}

fn outer_active_when_g_colored(events: &[Event]) -> Option<usize> {
    let mut active = [false; 9];
    for e in events {
        match *e {
            Event::Activate { vertex } => active[vertex] = true,
            Event::Move { vertex, .. } => {
                if vertex == G {
                    return Some(OUTER.iter().filter(|&&v| active[v]).count());
                }
                active[vertex] = true;
            }
        }
    }
    None
}

/// Every order in which Bob could try to build the blocking pattern, on a
/// sample of the 8! orders.
#[test]
fn scripted_bob_cannot_block_g_on_the_figures() {
    let perms = permutations(8);
    for (name, g) in fixtures::ordered_fixtures() {
        let cfg = config(g, 2, 4);
        for p in perms.iter().step_by(97) {
            let order: Vec<usize> = p.iter().map(|&i| OUTER[i]).collect();
            let mut alice = ActivationAlice::with_ordering(
                &cfg,
                fixtures::figure_ordering(),
                ColorPolicy::LeastIndex,
            )
            .unwrap();
            let mut bob = ScriptedBob::from_order(&order, pair_color);
            let t = play_game(Arc::clone(&cfg), &mut alice, &mut bob, 0);
            assert_eq!(t.outcome, Outcome::AliceWins, "{name} {order:?}");
            assert!(
                outer_active_when_g_colored(&t.events).unwrap() < 8,
                "{name} {order:?}"
            );
        }
    }
}

#[test]
fn far_opening_script_colors_a_first() {
    // Bob opens far from g; Alice's answers color a before b is touched.
    let cfg = config(fixtures::figure2(), 2, 4);
    let mut alice =
        ActivationAlice::with_ordering(&cfg, fixtures::figure_ordering(), ColorPolicy::LeastIndex)
            .unwrap();
    let mut bob = ScriptedBob::from_order(&[I, H, F, E, D, C, B, A], pair_color);
    let t = play_game(cfg, &mut alice, &mut bob, 0);
    assert_eq!(t.outcome, Outcome::AliceWins);
    assert!(outer_active_when_g_colored(&t.events).unwrap() < 8);
    assert!(matches!(
        t.events[1],
        Event::Move {
            player: Player::Alice,
            vertex: A,
            ..
        }
    ));
}

/// On every chordal graph with n ≤ 5, k = 1, c = 2 and every reachable
/// position with Bob to move, the minimax choice leads to a Bob win exactly
/// when some move does.
#[test]
fn minimax_agrees_with_the_tree_walk() {
    let mut rng = rng_from_seed(12);
    for g in (1..=5).flat_map(graphs_up_to_iso).filter(is_chordal) {
        for trial in 0..6 {
            let cfg = config(g.clone(), 1, 2);
            let mut s = GameState::new(Arc::clone(&cfg));
            let mut plies = 1 + 2 * (trial % 2);
            while plies > 0 && s.status() == Status::Ongoing {
                let mv = RandomBob.plan(&s, &mut rng).unwrap().mv;
                s.apply_move(s.turn(), mv).unwrap();
                plies -= 1;
            }
            if s.status() != Status::Ongoing || s.turn() != Player::Bob {
                continue;
            }
            let mut bob = MinimaxBob::new(&cfg, 1_000_000);
            let m = bob.choose(&s).unwrap();
            let after = |m: Move| {
                let mut col = s.coloring().to_vec();
                col[m.vertex] = m.color;
                common::tree_walk_from(&g, 1, 2, &col)
            };
            let bob_can_win = s
                .uncolored()
                .flat_map(|v| {
                    s.legal_colors(v)
                        .unwrap()
                        .into_iter()
                        .map(move |c| Move::new(v, c))
                })
                .any(|m| !after(m));
            assert_eq!(!after(m), bob_can_win, "{g:?} {:?}", s.coloring());
        }
    }
}

#[test]
fn activation_alice_beats_minimax_on_small_chordal_graphs() {
    for g in connected_chordal_catalog(5) {
        let omega = clique_number(&g);
        let k = omega - 1;
        if k == 0 {
            continue;
        }
        let cfg = config(g.clone(), k, k + 3);
        let mut alice = ActivationAlice::new(&cfg, ColorPolicy::LeastIndex);
        let mut bob = MinimaxBob::new(&cfg, 1_000_000);
        let t = play_game(cfg, &mut alice, &mut bob, 0);
        assert_eq!(t.outcome, Outcome::AliceWins, "{g:?}");
    }
}

#[test]
fn non_chordal_strategy_graph_still_plays() {
    let cfg = config(cliquegame_core::Graph::cycle(6), 1, 3);
    let mut alice = ActivationAlice::new(&cfg, ColorPolicy::LeastIndex);
    assert!(!alice.is_simplicial());
    let t = play_game(cfg, &mut alice, &mut RandomBob, 5);
    assert!(matches!(
        t.outcome,
        Outcome::AliceWins | Outcome::BobWins { .. }
    ));
    audit_transcript(&t).unwrap();
}

#[test]
fn explicit_ordering_must_cover_the_graph() {
    let cfg = config(cliquegame_core::Graph::path(3), 1, 3);
    assert!(ActivationAlice::with_ordering(
        &cfg,
        LinearOrdering::identity(2),
        ColorPolicy::LeastIndex
    )
    .is_err());
}
