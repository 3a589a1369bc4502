//! Solver for finite dynamic games with unawareness.
//!
//! A game is a forest of subtrees of one base tree; a player's information
//! set may live in a less expressive tree than the node it belongs to. From a
//! forest the crate builds the generalized normal form (one payoff table per
//! tree over partial strategies), runs iterated conditional strict and weak
//! dominance and iterated admissibility, and independently computes
//! extensive-form, prudent and prudent relaxed rationalizability so the two
//! families can be compared level by level.
//!
//! ```
//! use unaware_core::{Game, NormalForm, elimination::{iterate, Concept}};
//!
//! let text = r#"{
//!   "players": ["Row", "Col"],
//!   "base_tree": "T",
//!   "trees": [{"id": "T", "nodes": [
//!     {"id": "r", "actions": {"Row": ["U", "D"], "Col": ["L", "R"]}},
//!     {"id": "ul", "parent": "r", "action_profile": {"Row": "U", "Col": "L"}, "payoffs": {"Row": "2", "Col": "1"}},
//!     {"id": "ur", "parent": "r", "action_profile": {"Row": "U", "Col": "R"}, "payoffs": {"Row": "2", "Col": "0"}},
//!     {"id": "dl", "parent": "r", "action_profile": {"Row": "D", "Col": "L"}, "payoffs": {"Row": "1", "Col": "0"}},
//!     {"id": "dr", "parent": "r", "action_profile": {"Row": "D", "Col": "R"}, "payoffs": {"Row": "0", "Col": "3"}}
//!   ]}],
//!   "infosets": [
//!     {"tree": "T", "node": "r", "player": "Row", "target_tree": "T", "target_nodes": ["r"]},
//!     {"tree": "T", "node": "r", "player": "Col", "target_tree": "T", "target_nodes": ["r"]}
//!   ]
//! }"#;
//! let game = Game::parse(text).unwrap();
//! assert!(game.validate().is_valid());
//! let nf = NormalForm::build(&game);
//! let trace = iterate(&nf, Concept::Icsd);
//! let last = trace.fixed_point();
//! let row = game.player_by_name("Row").unwrap();
//! let col = game.player_by_name("Col").unwrap();
//! assert_eq!(nf.universe.render_set(last.survivors(row, game.base)), vec!["U"]);
//! assert_eq!(nf.universe.render_set(last.survivors(col, game.base)), vec!["L"]);
//! ```

pub mod dominance;
pub mod elimination;
pub mod game;
pub mod lp;
pub mod normal_form;
pub mod rationalizability;
pub mod strategy;
pub mod testkit;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use game::{
    display_label, Game, GameDocument, GameError, InfoSet, InfoSetId, Node, NodeId, ParseError, PlayerId, Property,
    Tree, TreeId, ValidationReport, Violation,
};
pub use dominance::{BeliefWitness, DominanceWitness, Mode};
pub use elimination::{iterate, iterate_with, Concept, Options, Trace};
pub use normal_form::{ExtendedRestriction, NfInfoSet, NormalForm};
pub use rationalizability::{levels, levels_with, BeliefConcept, LevelOptions, Levels, RationalizabilityError};
pub use strategy::{PartialStrategy, Scope, StrategyError, Universe};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q` or `p`; `q` must be nonzero.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
