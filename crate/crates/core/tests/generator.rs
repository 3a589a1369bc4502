mod common;

use rayon::prelude::*;
use unaware_core::testkit::{generate, generate_document, GenerationError, GeneratorConfig};

#[test]
fn same_seed_same_game() {
    let cfg = GeneratorConfig { seed: 42, trees: 3, ..GeneratorConfig::default() };
    let (a, _) = generate_document(&cfg).unwrap();
    let (b, _) = generate_document(&cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let (c, _) = generate_document(&GeneratorConfig { seed: 43, ..cfg }).unwrap();
    assert_ne!(a.to_json(), c.to_json());
}

#[test]
fn draws_with_three_trees_validate() {
    let failures: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let cfg = GeneratorConfig { seed, trees: 3, players: 2 + (seed % 2) as usize, ..GeneratorConfig::default() };
            match generate(&cfg) {
                Err(e) => Some(format!("seed {seed}: {e}")),
                Ok(game) => {
                    let report = game.validate();
                    let shape = game.trees.len() == 3 && game.players.len() == cfg.players;
                    let narrow = game.nodes.iter().all(|n| n.moves.iter().all(|m| m.actions.len() <= cfg.max_actions));
                    (!report.is_valid() || !shape || !narrow).then(|| format!("seed {seed}: {:?}", report.properties()))
                }
            }
        })
        .collect();
    assert!(failures.is_empty(), "{failures:?}");
}

#[test]
fn regime_games_stay_in_bounds() {
    for seed in 0..60 {
        let cfg = common::regime(seed);
        let game = generate(&cfg).unwrap();
        assert!((2..=3).contains(&game.players.len()));
        assert!((1..=3).contains(&game.trees.len()));
        let base = game.tree(game.base).nodes.iter().filter(|&&n| game.node(n).is_terminal()).count();
        assert!(base >= 2, "seed {seed}");
    }
}

#[test]
fn bad_configurations_are_refused() {
    for cfg in [
        GeneratorConfig { players: 4, ..GeneratorConfig::default() },
        GeneratorConfig { trees: 0, ..GeneratorConfig::default() },
        GeneratorConfig { payoff_min: 3, payoff_max: 1, ..GeneratorConfig::default() },
    ] {
        assert!(matches!(generate(&cfg), Err(GenerationError::Config(_))), "{cfg:?}");
    }
}
