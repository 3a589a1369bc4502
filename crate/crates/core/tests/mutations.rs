//! Deliberately weakened engines must be caught.

mod common;

use unaware_core::testkit::{cross_check_with, THEOREM_1, THEOREM_2};
use unaware_core::{LevelOptions, Options};

#[test]
fn skipping_propagation_breaks_theorem_1_on_colins_ms() {
    let game = common::fixture("g2.json");
    let report = cross_check_with(&game, Options { propagate: false, ..Options::default() }, LevelOptions::default());
    let check = report.check(THEOREM_1).unwrap();
    assert!(!check.passed);
    let d = check.divergence.as_ref().unwrap();
    assert_eq!((d.level, d.player.as_str()), (1, "Colin"));
    assert_eq!(d.strategy, "MS");
    assert!(d.left && !d.right, "kept by the broken ICSD, removed by EFR");
}

#[test]
fn dropping_the_reflexive_case_breaks_theorem_1() {
    let game = common::fixture("g2.json");
    let report = cross_check_with(&game, Options { reflexive: false, ..Options::default() }, LevelOptions::default());
    assert!(!report.check(THEOREM_1).unwrap().passed);
}

#[test]
fn dropping_positivity_breaks_theorem_2() {
    let game = common::fixture("weak_2x2.json");
    let report = cross_check_with(&game, Options::default(), LevelOptions { positivity: false, ..LevelOptions::default() });
    let check = report.check(THEOREM_2).unwrap();
    assert!(!check.passed);
    let d = check.divergence.as_ref().unwrap();
    assert_eq!((d.level, d.player.as_str(), d.strategy.as_str()), (1, "Ann", "D"));
    assert!(report.check(THEOREM_1).unwrap().passed);
}
