#![allow(dead_code)]

pub mod claims;
pub mod simplex;
pub mod textbook;
pub mod vertices;

use std::path::PathBuf;

use unaware_core::testkit::GeneratorConfig;
use unaware_core::Game;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> Game {
    Game::parse(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Fixtures that pass validation.
pub const VALID_FIXTURES: &[&str] = &[
    "g1.json",
    "g2.json",
    "centipede.json",
    "chain3.json",
    "matching_pennies.json",
    "nf_filter.json",
    "offpath_tie.json",
    "parallel_sets.json",
    "rising_awareness.json",
    "two_node_set.json",
    "two_stage.json",
    "weak_2x2.json",
];

/// The generated-game regime: 2–3 players, 1–3 trees, at most 3 actions per move.
pub fn regime(seed: u64) -> GeneratorConfig {
    GeneratorConfig { seed, players: 2 + (seed % 2) as usize, trees: 1 + (seed % 3) as usize, ..Default::default() }
}

pub fn single_tree(seed: u64) -> GeneratorConfig {
    GeneratorConfig { seed, players: 2 + (seed % 2) as usize, trees: 1, ..Default::default() }
}
