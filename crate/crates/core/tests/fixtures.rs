mod common;

use num_traits::One;
use unaware_core::rationalizability::{
    construct_conditioned_beliefs, expected_payoff_at, is_conditioned, partition_holds, rank_partition, rational_at, BeliefSystem,
    SystemKind,
};
use unaware_core::testkit;
use unaware_core::{
    iterate, iterate_with, levels, rat, BeliefConcept, BeliefWitness, Concept, ExtendedRestriction, Game, NormalForm, Options, PlayerId, Property, Rational,
    TreeId,
};

use common::fixture;
use unaware_core::dominance::strictly_dominated;
use unaware_core::normal_form::Restriction;

fn names(v: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

fn fixed_point(nf: &NormalForm, concept: Concept, player: &str) -> Vec<String> {
    let game = nf.game();
    let p = game.player_by_name(player).unwrap();
    let mut v = nf.universe.render_set(iterate(nf, concept).fixed_point().survivors(p, game.base));
    v.sort();
    v
}

fn belief_fixed_point(nf: &NormalForm, concept: BeliefConcept, player: &str) -> Vec<String> {
    let p = nf.game().player_by_name(player).unwrap();
    let lv = levels(nf, concept);
    let mut v = nf.universe.render_set(lv.survivors(nf, lv.sets.len() - 1, p));
    v.sort();
    v
}

fn tree(game: &Game, name: &str) -> TreeId {
    game.tree_by_name(name).unwrap()
}

#[test]
fn fixtures_validate() {
    for name in common::VALID_FIXTURES {
        let report = fixture(name).validate();
        assert!(report.is_valid(), "{name}: {:?}", report.violations);
    }
}

#[test]
fn imaginary_action_mutation_is_rejected() {
    let report = fixture("g2_i4_mutation.json").validate();
    assert!(report.has(Property::I4), "{:?}", report.properties());
}

#[test]
fn forgetting_an_own_move_is_rejected() {
    let report = fixture("forgetful.json").validate();
    assert!(report.has(Property::I6), "{:?}", report.properties());
}

#[test]
fn chain_partial_games() {
    let game = fixture("chain3.json");
    let (t1, t2, t3) = (tree(&game, "T1"), tree(&game, "T2"), tree(&game, "T3"));
    assert!(game.reaches(t1, t2) && game.reaches(t1, t3) && game.reaches(t2, t3));
    assert!(!game.reaches(t3, t1) && !game.reaches(t2, t1));
    assert!(game.points_to(t1, t2) && game.points_to(t2, t3) && !game.points_to(t1, t3));

    let sub = game.partial_game(t2).unwrap();
    let kept: Vec<&str> = sub.trees.iter().map(|t| t.name.as_str()).collect();
    assert_eq!(kept, ["T2", "T3"]);
    assert!(sub.validate().is_valid());
    let last = game.partial_game(t3).unwrap();
    assert_eq!(last.trees.len(), 1);
    assert!(last.validate().is_valid());
}

#[test]
fn chain_locality() {
    let game = fixture("chain3.json");
    let nf = NormalForm::build(&game);
    let sub = game.partial_game(tree(&game, "T2")).unwrap();
    let sub_nf = NormalForm::build(&sub);
    for concept in [Concept::Icsd, Concept::Icwd, Concept::Ia] {
        let whole = iterate(&nf, concept);
        let part = iterate(&sub_nf, concept);
        for k in 0..whole.levels.len().max(part.levels.len()) {
            for st in sub.tree_ids() {
                let t = tree(&game, &sub.tree(st).name);
                for p in game.player_ids() {
                    let a = nf.universe.render_set(whole.level(k).survivors(p, t));
                    let b = sub_nf.universe.render_set(part.level(k).survivors(p, st));
                    assert_eq!(a, b, "{} level {k} tree {}", concept.name(), sub.tree(st).name);
                }
            }
        }
    }
}

#[test]
fn centipede_stops_at_once() {
    let game = fixture("centipede.json");
    let nf = NormalForm::build(&game);
    for concept in [Concept::Icsd, Concept::Icwd, Concept::Ia] {
        assert_eq!(fixed_point(&nf, concept, "Ann"), names(&["SC", "SS"]), "{}", concept.name());
        assert_eq!(fixed_point(&nf, concept, "Bob"), names(&["S"]));
    }
    for concept in [BeliefConcept::Efr, BeliefConcept::Pr, BeliefConcept::Prr] {
        assert_eq!(belief_fixed_point(&nf, concept, "Ann"), names(&["SC", "SS"]), "{}", concept.name());
        assert_eq!(belief_fixed_point(&nf, concept, "Bob"), names(&["S"]));
    }
}

#[test]
fn admissibility_conditions_only_on_own_normal_forms() {
    let game = fixture("nf_filter.json");
    let nf = NormalForm::build(&game);
    assert_eq!(fixed_point(&nf, Concept::Ia, "P1"), names(&["a", "b"]));
    let unfiltered = iterate_with(&nf, Concept::Ia, Options { restrict_normal_forms: false, ..Options::default() });
    let p1 = game.player_by_name("P1").unwrap();
    assert_eq!(nf.universe.render_set(unfiltered.fixed_point().survivors(p1, game.base)), names(&["b"]));
    assert!(unaware_core::testkit::cross_check(&game).passed());
}

#[test]
fn offpath_tie_separates_strict_from_weak() {
    let game = fixture("offpath_tie.json");
    let nf = NormalForm::build(&game);
    assert_eq!(fixed_point(&nf, Concept::Icsd, "P1"), names(&["In.a", "In.b"]));
    assert_eq!(fixed_point(&nf, Concept::Icwd, "P1"), names(&["In.a"]));
    assert_eq!(fixed_point(&nf, Concept::Ia, "P1"), names(&["In.a"]));
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Efr, "P1"), names(&["In.a", "In.b"]));
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Pr, "P1"), names(&["In.a"]));
}

#[test]
fn parallel_sets_form_the_rank_partition() {
    let game = fixture("parallel_sets.json");
    let nf = NormalForm::build(&game);
    let p1 = game.player_by_name("P1").unwrap();
    let g = rank_partition(&nf, p1, game.base).unwrap();
    assert_eq!(g.len(), 2);
    let all = vec![true; nf.table(game.base).opponent_count(p1)];
    assert_eq!(partition_holds(&nf, p1, game.base, &g, &all), (true, true));
    // P2 has a root set preceding its set after l
    let p2 = game.player_by_name("P2").unwrap();
    assert_eq!(rank_partition(&nf, p2, game.base).unwrap().len(), 1);
}

#[test]
fn belief_over_two_nodes_averages() {
    let game = fixture("two_node_set.json");
    let nf = NormalForm::build(&game);
    let p1 = game.player_by_name("P1").unwrap();
    let h = game.infosets_of(p1)[0];
    let t = game.base;
    let half = rat(1, 2);
    let belief = BeliefWitness {
        player: p1,
        tree: t,
        infoset: Some(h),
        belief: (0..nf.table(t).opponent_count(p1)).map(|o| (o, half.clone())).collect(),
        full_support: true,
    };
    for (s, want) in [("a", 3), ("b", 3)] {
        let s = nf.universe.parse_strategy(p1, t, s).unwrap();
        assert_eq!(expected_payoff_at(&nf, h, s, &belief).unwrap(), rat(want, 1));
        assert!(rational_at(&nf, s, &belief, h).unwrap());
    }
}

fn opponent(nf: &NormalForm, player: PlayerId, other: PlayerId, name: &str) -> usize {
    let game = nf.game();
    let idx = nf.universe.parse_strategy(other, game.base, name).unwrap().index;
    let table = nf.table(game.base);
    (0..table.opponent_count(player)).find(|&o| table.opponent_profile(player, 0, o)[other.0] == idx).unwrap()
}

fn witness(player: PlayerId, tree: TreeId, h: unaware_core::InfoSetId, belief: Vec<(usize, Rational)>) -> BeliefWitness {
    BeliefWitness { player, tree, infoset: Some(h), belief, full_support: false }
}

#[test]
fn conditioning_updates_or_resets() {
    let game = fixture("two_stage.json");
    let nf = NormalForm::build(&game);
    let p1 = game.player_by_name("P1").unwrap();
    let p2 = game.player_by_name("P2").unwrap();
    let t = game.base;
    let hs = game.infosets_of(p1);
    let (root, later) = (hs[0], hs[1]);
    assert!(game.precedes(root, later));
    let o = |s: &str| opponent(&nf, p1, p2, s);
    let half = rat(1, 2);

    // Bayes: half on xu, half on yu at the root; only xu allows the later set
    let system = BeliefSystem {
        player: p1,
        kind: SystemKind::Generalized,
        beliefs: vec![
            (root, witness(p1, t, root, vec![(o("xu"), half.clone()), (o("yu"), half.clone())])),
            (later, witness(p1, t, later, vec![(o("xv"), Rational::one())])),
        ],
    };
    assert!(!is_conditioned(&nf, &system));
    let standard = construct_conditioned_beliefs(&nf, &system).unwrap();
    assert_eq!(standard.kind, SystemKind::Standard);
    assert!(is_conditioned(&nf, &standard));
    assert_eq!(standard.at(later).unwrap().belief, vec![(o("xu"), Rational::one())]);
    assert_eq!(standard.at(root).unwrap(), system.at(root).unwrap());

    // Reset: the root belief gives the later set probability zero
    let system = BeliefSystem {
        player: p1,
        kind: SystemKind::Generalized,
        beliefs: vec![
            (root, witness(p1, t, root, vec![(o("yu"), Rational::one())])),
            (later, witness(p1, t, later, vec![(o("xv"), Rational::one())])),
        ],
    };
    assert!(is_conditioned(&nf, &system));
    let standard = construct_conditioned_beliefs(&nf, &system).unwrap();
    assert_eq!(standard.at(later).unwrap().belief, vec![(o("xv"), Rational::one())]);

    // a belief that excludes its own set is refused
    let bad = BeliefSystem {
        player: p1,
        kind: SystemKind::Generalized,
        beliefs: vec![
            (root, witness(p1, t, root, vec![(o("yu"), Rational::one())])),
            (later, witness(p1, t, later, vec![(o("yv"), Rational::one())])),
        ],
    };
    assert!(construct_conditioned_beliefs(&nf, &bad).is_err());
}

#[test]
fn matching_pennies_keeps_everything() {
    let game = fixture("matching_pennies.json");
    let nf = NormalForm::build(&game);
    for concept in [Concept::Icsd, Concept::Icwd, Concept::Ia] {
        assert_eq!(iterate(&nf, concept).levels.len(), 1);
    }
    for concept in [BeliefConcept::Efr, BeliefConcept::Pr, BeliefConcept::Prr] {
        assert_eq!(levels(&nf, concept).sets.len(), 1);
    }
}

#[test]
fn weak_dominance_without_strict() {
    let game = fixture("weak_2x2.json");
    let nf = NormalForm::build(&game);
    assert_eq!(fixed_point(&nf, Concept::Icsd, "Ann"), names(&["D", "U"]));
    assert_eq!(fixed_point(&nf, Concept::Icwd, "Ann"), names(&["U"]));
    assert_eq!(fixed_point(&nf, Concept::Icwd, "Bob"), names(&["L"]));
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Pr, "Bob"), names(&["L"]));
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Efr, "Bob"), names(&["L", "R"]));
}

#[test]
fn g1_settles_after_one_round() {
    let game = fixture("g1.json");
    let nf = NormalForm::build(&game);
    let trace = iterate(&nf, Concept::Icsd);
    assert_eq!(trace.levels.len(), 2);
    let efr = levels(&nf, BeliefConcept::Efr);
    assert_eq!(efr.sets.len(), 2);
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Efr, "Rowena"), names(&["nMB", "nMS", "nMM", "gBM", "gSM", "gMM"]));
    assert_eq!(belief_fixed_point(&nf, BeliefConcept::Efr, "Colin"), names(&["BM", "SM"]));
    // Colin's B and S after g only fall to conditional dominance
    let colin = game.player_by_name("Colin").unwrap();
    let whole = Restriction::whole(nf.table(game.base), colin, &ExtendedRestriction::full(&nf.universe));
    let level1 = nf.universe.render_set(trace.level(1).survivors(colin, game.base));
    for s in ["BB", "BS", "SB", "SS"] {
        let idx = nf.universe.parse_strategy(colin, game.base, s).unwrap().index;
        assert!(strictly_dominated(&nf, idx, &whole).is_none(), "{s}");
        assert!(!level1.contains(&s.to_string()));
    }
}

#[test]
fn rising_awareness_empties_ia_and_prr() {
    // P2 decides at the root thinking in T1, then again at n1 fully aware.
    // T1's normal form rules out root a, T0's rules out root b.
    let game = fixture("rising_awareness.json");
    assert!(game.awareness_rises());
    let nf = NormalForm::build(&game);
    assert!(fixed_point(&nf, Concept::Ia, "P2").is_empty());
    assert!(belief_fixed_point(&nf, BeliefConcept::Prr, "P2").is_empty());
    for concept in [Concept::Icsd, Concept::Icwd] {
        assert_eq!(fixed_point(&nf, concept, "P2"), names(&["aba", "bba"]));
    }
    for concept in [BeliefConcept::Efr, BeliefConcept::Pr] {
        assert_eq!(belief_fixed_point(&nf, concept, "P2"), names(&["aba", "bba"]));
    }
    let report = unaware_core::testkit::cross_check(&game);
    let passed = |name: &str| report.check(name).unwrap().passed;
    assert!(passed(testkit::THEOREM_1) && passed(testkit::THEOREM_2));
    assert!(!passed(testkit::THEOREM_3));
}
