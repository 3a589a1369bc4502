use clap::ValueEnum;
use serde_json::{json, Value};

use unaware_core::elimination::{Conditioning, Removal};
use unaware_core::{
    format_rational, iterate, levels, BeliefConcept, BeliefWitness, Concept, ExtendedRestriction, Game, NormalForm,
    PartialStrategy, PlayerId, Rational,
};

use crate::{json_line, Format};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConceptArg {
    Icsd,
    Icwd,
    Ia,
    Efr,
    Pr,
    Prr,
}

impl ConceptArg {
    pub fn is_belief(self) -> bool {
        matches!(self, ConceptArg::Efr | ConceptArg::Pr | ConceptArg::Prr)
    }

    fn name(self) -> &'static str {
        match self {
            ConceptArg::Icsd => "icsd",
            ConceptArg::Icwd => "icwd",
            ConceptArg::Ia => "ia",
            ConceptArg::Efr => "efr",
            ConceptArg::Pr => "pr",
            ConceptArg::Prr => "prr",
        }
    }
}

/// One level: the sets and, for k ≥ 1, what left since level k − 1.
struct Level {
    sets: ExtendedRestriction,
    removed: Vec<Value>,
    removed_text: Vec<String>,
}

fn mixture_text(nf: &NormalForm, mixture: &[(PartialStrategy, Rational)]) -> String {
    mixture
        .iter()
        .map(|(s, w)| format!("{} {}", format_rational(w), nf.universe.render(*s)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn removal(nf: &NormalForm, r: &Removal) -> (Value, String) {
    let game = nf.game();
    let u = &nf.universe;
    let (cond_json, cond_text) = match &r.conditioning {
        Conditioning::InfoSet(hs) => {
            let labels: Vec<String> = hs.iter().map(|&h| game.infoset_label(h)).collect();
            let text = format!("given {}", labels.join(" | "));
            (json!({ "infosets": labels }), text)
        }
        Conditioning::NormalForm(t) => {
            let name = &game.tree(*t).name;
            (json!({ "normal_form": name }), format!("in the normal form of {name}"))
        }
    };
    let mode = match r.witness.mode {
        unaware_core::Mode::Strict => "strictly",
        unaware_core::Mode::Weak => "weakly",
    };
    let value = json!({
        "player": game.players[r.strategy.player.0],
        "tree": game.tree(r.strategy.tree).name,
        "strategy": u.render(r.strategy),
        "induced_tree": game.tree(r.induced.tree).name,
        "induced": u.render(r.induced),
        "conditioning": cond_json,
        "mode": format!("{mode} dominated"),
        "mixture": r.witness.mixture.iter().map(|(s, w)| json!({
            "strategy": u.render(*s),
            "weight": format_rational(w),
        })).collect::<Vec<_>>(),
    });
    let text = format!(
        "removed {} {} @ {}: {} @ {} {mode} dominated {cond_text} by {}",
        game.players[r.strategy.player.0],
        u.render(r.strategy),
        game.tree(r.strategy.tree).name,
        u.render(r.induced),
        game.tree(r.induced.tree).name,
        mixture_text(nf, &r.witness.mixture)
    );
    (value, text)
}

fn elimination_levels(nf: &NormalForm, concept: Concept) -> Vec<Level> {
    let trace = iterate(nf, concept);
    trace
        .levels
        .iter()
        .enumerate()
        .map(|(k, sets)| {
            let (removed, removed_text) = if k == 0 { (Vec::new(), Vec::new()) } else { trace.removals[k - 1].iter().map(|r| removal(nf, r)).unzip() };
            Level { sets: sets.clone(), removed, removed_text }
        })
        .collect()
}

fn belief_levels(nf: &NormalForm, concept: BeliefConcept) -> (Vec<Level>, unaware_core::Levels) {
    let game = nf.game();
    let lv = levels(nf, concept);
    let out = (0..lv.sets.len())
        .map(|k| {
            let mut removed = Vec::new();
            let mut removed_text = Vec::new();
            if k > 0 {
                for p in game.player_ids() {
                    for (i, (&before, &now)) in lv.sets[k - 1][p.0].iter().zip(&lv.sets[k][p.0]).enumerate() {
                        if before && !now {
                            let s = nf.universe.strategy(p, game.base, i);
                            let name = nf.universe.render(s);
                            removed.push(json!({
                                "player": game.players[p.0],
                                "tree": game.tree(game.base).name,
                                "strategy": name,
                                "reason": "no justifying belief system",
                            }));
                            removed_text.push(format!("removed {} {name}: no justifying belief system", game.players[p.0]));
                        }
                    }
                }
            }
            Level { sets: lv.induced(nf, k), removed, removed_text }
        })
        .collect();
    (out, lv)
}

/// Other players' parts of an opponents' profile, joined with `/`.
fn opponents_label(nf: &NormalForm, b: &BeliefWitness, o: usize) -> String {
    let table = nf.table(b.tree);
    let profile = table.opponent_profile(b.player, 0, o);
    nf.game()
        .player_ids()
        .filter(|&q| q != b.player)
        .map(|q| nf.universe.render(nf.universe.strategy(q, b.tree, profile[q.0])))
        .collect::<Vec<_>>()
        .join("/")
}

fn witnesses(nf: &NormalForm, lv: &unaware_core::Levels) -> (Vec<Value>, Vec<String>) {
    let game = nf.game();
    let mut values = Vec::new();
    let mut lines = Vec::new();
    for p in game.player_ids() {
        for s in lv.survivors(nf, lv.sets.len() - 1, p) {
            for (h, b) in lv.witnesses_for(nf, s) {
                let belief: Vec<(String, String)> =
                    b.belief.iter().map(|(o, w)| (opponents_label(nf, &b, *o), format_rational(w))).collect();
                values.push(json!({
                    "player": game.players[p.0],
                    "strategy": nf.universe.render(s),
                    "infoset": game.infoset_label(h),
                    "tree": game.tree(b.tree).name,
                    "full_support": b.full_support,
                    "belief": belief.iter().map(|(o, w)| json!({ "opponents": o, "probability": w })).collect::<Vec<_>>(),
                }));
                let dist: Vec<String> = belief.iter().map(|(o, w)| format!("{w} {o}")).collect();
                lines.push(format!(
                    "  {} {} at {}: {}",
                    game.players[p.0],
                    nf.universe.render(s),
                    game.infoset_label(h),
                    dist.join(" + ")
                ));
            }
        }
    }
    (values, lines)
}

fn sets_of(nf: &NormalForm, y: &ExtendedRestriction) -> Vec<(PlayerId, String, Vec<String>)> {
    let game = nf.game();
    let mut out = Vec::new();
    for p in game.player_ids() {
        for t in game.tree_ids() {
            out.push((p, game.tree(t).name.clone(), nf.universe.render_set(y.survivors(p, t))));
        }
    }
    out
}

pub fn run(game: &Game, concept: ConceptArg, trace: bool, witness: bool, format: Format) -> String {
    let nf = NormalForm::build(game);
    let (levels, belief) = match concept {
        ConceptArg::Icsd => (elimination_levels(&nf, Concept::Icsd), None),
        ConceptArg::Icwd => (elimination_levels(&nf, Concept::Icwd), None),
        ConceptArg::Ia => (elimination_levels(&nf, Concept::Ia), None),
        ConceptArg::Efr => {
            let (l, lv) = belief_levels(&nf, BeliefConcept::Efr);
            (l, Some(lv))
        }
        ConceptArg::Pr => {
            let (l, lv) = belief_levels(&nf, BeliefConcept::Pr);
            (l, Some(lv))
        }
        ConceptArg::Prr => {
            let (l, lv) = belief_levels(&nf, BeliefConcept::Prr);
            (l, Some(lv))
        }
    };
    let fixed = levels.len() - 1;
    let (witness_values, witness_lines) = match (&belief, witness) {
        (Some(lv), true) => witnesses(&nf, lv),
        _ => (Vec::new(), Vec::new()),
    };

    match format {
        Format::Json => {
            let lv: Vec<Value> = levels
                .iter()
                .enumerate()
                .map(|(k, l)| {
                    let mut v = json!({
                        "level": k,
                        "survivors": sets_of(&nf, &l.sets).into_iter().map(|(p, t, s)| json!({
                            "player": game.players[p.0],
                            "tree": t,
                            "strategies": s,
                        })).collect::<Vec<_>>(),
                    });
                    if trace && k > 0 {
                        v["removed"] = Value::Array(l.removed.clone());
                    }
                    v
                })
                .collect();
            let mut doc = json!({
                "schema": 1,
                "concept": concept.name(),
                "base_tree": game.tree(game.base).name,
                "levels": lv,
                "fixed_point": fixed,
            });
            if witness {
                doc["witnesses"] = Value::Array(witness_values);
            }
            json_line(&doc)
        }
        Format::Text => {
            let mut out = format!("concept {}\n", concept.name());
            for (k, l) in levels.iter().enumerate() {
                out.push_str(&format!("level {k}\n"));
                if trace {
                    for r in &l.removed_text {
                        out.push_str(&format!("  {r}\n"));
                    }
                }
                for (p, t, s) in sets_of(&nf, &l.sets) {
                    out.push_str(&format!("  {} @ {t}: {{{}}}\n", game.players[p.0], s.join(", ")));
                }
            }
            out.push_str(&format!("fixed point at level {fixed}\n"));
            if witness {
                out.push_str("witnesses\n");
                for w in witness_lines {
                    out.push_str(&w);
                    out.push('\n');
                }
            }
            out
        }
    }
}
