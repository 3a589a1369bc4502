//! The generalized normal form: one payoff table per tree over that tree's
//! partial strategy profiles, plus the normal-form versions of information sets.

use rayon::prelude::*;

use crate::game::{Game, InfoSetId, NodeId, PlayerId, TreeId};
use crate::strategy::{PartialStrategy, Universe};
use crate::Rational;

/// Payoffs of S^T. Profiles are mixed-radix indices, player 0 most significant.
#[derive(Debug, Clone)]
pub struct PayoffTable {
    pub tree: TreeId,
    pub counts: Vec<usize>,
    strides: Vec<usize>,
    pub outcomes: Vec<NodeId>,
}

impl PayoffTable {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(s, k)| s * k).sum()
    }

    pub fn profile(&self, index: usize) -> Vec<usize> {
        self.strides.iter().zip(&self.counts).map(|(k, c)| index / k % c).collect()
    }

    /// Number of opponents' profiles S_{-i}^T.
    pub fn opponent_count(&self, player: PlayerId) -> usize {
        self.counts.iter().enumerate().filter(|&(j, _)| j != player.0).map(|(_, c)| c).product()
    }

    /// Opponents' profile index (mixed radix over the other players) to a full
    /// profile with `own` in the player's slot.
    pub fn join(&self, player: PlayerId, own: usize, opponents: usize) -> usize {
        let mut rest = opponents;
        let mut idx = 0;
        for j in (0..self.counts.len()).rev() {
            let v = if j == player.0 {
                own
            } else {
                let v = rest % self.counts[j];
                rest /= self.counts[j];
                v
            };
            idx += v * self.strides[j];
        }
        idx
    }

    /// Splits a profile index into the player's strategy and the opponents' index.
    pub fn split(&self, player: PlayerId, index: usize) -> (usize, usize) {
        let profile = self.profile(index);
        let mut opp = 0;
        for (j, &v) in profile.iter().enumerate() {
            if j != player.0 {
                opp = opp * self.counts[j] + v;
            }
        }
        (profile[player.0], opp)
    }

    /// Full profile vector for an opponents' index; the player's slot holds `own`.
    pub fn opponent_profile(&self, player: PlayerId, own: usize, opponents: usize) -> Vec<usize> {
        self.profile(self.join(player, own, opponents))
    }
}

/// S^{T_h}(h) for one or more information sets that induce the same restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfInfoSet {
    pub player: PlayerId,
    pub tree: TreeId,
    /// S_i^{T_h}(h) as a membership mask over S_i^{T_h}.
    pub own: Vec<bool>,
    /// S_{-i}^{T_h}(h) as a mask over opponents' profiles.
    pub opponents: Vec<bool>,
    /// Information sets of the game that produce this set, canonical order.
    pub sources: Vec<InfoSetId>,
    /// Whether membership of full profiles factors as own × opponents.
    pub is_product: bool,
}

#[derive(Debug, Clone)]
pub struct NormalForm<'g> {
    pub universe: Universe<'g>,
    pub tables: Vec<PayoffTable>,
    /// Per information set: mask over the profiles of its tree that allow it.
    allowing: Vec<Vec<bool>>,
    /// 𝒳_i after merging identical sets.
    pub nf_infosets: Vec<Vec<NfInfoSet>>,
}

impl<'g> NormalForm<'g> {
    pub fn build(game: &'g Game) -> NormalForm<'g> {
        let universe = Universe::new(game);
        let tables: Vec<PayoffTable> = game
            .tree_ids()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|t| {
                let counts: Vec<usize> = game.player_ids().map(|p| universe.count(p, t)).collect();
                let mut strides = vec![1; counts.len()];
                for k in (0..counts.len().saturating_sub(1)).rev() {
                    strides[k] = strides[k + 1] * counts[k + 1];
                }
                let total: usize = counts.iter().product();
                let mut table = PayoffTable { tree: t, counts, strides, outcomes: Vec::with_capacity(total) };
                for idx in 0..total {
                    let profile = table.profile(idx);
                    table.outcomes.push(universe.play(t, &profile));
                }
                table
            })
            .collect();

        let allowing: Vec<Vec<bool>> = (0..game.infosets.len())
            .into_par_iter()
            .map(|h| {
                let set = &game.infosets[h];
                let table = &tables[set.tree.0];
                (0..table.len())
                    .map(|idx| {
                        let profile = table.profile(idx);
                        universe.play_path(set.tree, &profile).iter().any(|n| set.nodes.contains(n))
                    })
                    .collect()
            })
            .collect();

        let mut nf_infosets: Vec<Vec<NfInfoSet>> = vec![Vec::new(); game.num_players()];
        for (h, set) in game.infosets.iter().enumerate() {
            let table = &tables[set.tree.0];
            let p = set.player;
            let mut own = vec![false; table.counts[p.0]];
            let mut opponents = vec![false; table.opponent_count(p)];
            for (idx, &a) in allowing[h].iter().enumerate() {
                if a {
                    let (s, o) = table.split(p, idx);
                    own[s] = true;
                    opponents[o] = true;
                }
            }
            let is_product = allowing[h].iter().enumerate().all(|(idx, &a)| {
                let (s, o) = table.split(p, idx);
                a == (own[s] && opponents[o])
            });
            let list = &mut nf_infosets[p.0];
            match list.iter_mut().find(|x| x.tree == set.tree && x.own == own && x.opponents == opponents) {
                Some(x) => x.sources.push(InfoSetId(h)),
                None => list.push(NfInfoSet {
                    player: p,
                    tree: set.tree,
                    own,
                    opponents,
                    sources: vec![InfoSetId(h)],
                    is_product,
                }),
            }
        }
        NormalForm { universe, tables, allowing, nf_infosets }
    }

    pub fn game(&self) -> &'g Game {
        self.universe.game
    }

    pub fn table(&self, t: TreeId) -> &PayoffTable {
        &self.tables[t.0]
    }

    /// u_i^T at a profile index.
    pub fn payoff(&self, t: TreeId, player: PlayerId, index: usize) -> &Rational {
        let z = self.tables[t.0].outcomes[index];
        &self.game().node(z).payoffs.as_ref().expect("terminal payoffs")[player.0]
    }

    /// u_i^T(s_i, s_{-i}) with the opponents given by index.
    pub fn payoff_against(&self, t: TreeId, player: PlayerId, own: usize, opponents: usize) -> &Rational {
        self.payoff(t, player, self.tables[t.0].join(player, own, opponents))
    }

    /// Whether the profile (index into S^{T_h}) allows `h`.
    pub fn allows(&self, h: InfoSetId, index: usize) -> bool {
        self.allowing[h.0][index]
    }

    /// Whether `s` (of the information set's owner, any scope reaching T_h) allows `h`.
    pub fn strategy_allows(&self, s: PartialStrategy, h: InfoSetId) -> bool {
        let set = self.game().infoset(h);
        let own = self.universe.induce_index(s.player, s.tree, set.tree, s.index);
        self.nf_infoset_of(h).own[own]
    }

    /// Whether the opponents' profile (index over S_{-i}^{T_h}) allows `h`.
    pub fn opponents_allow(&self, h: InfoSetId, opponents: usize) -> bool {
        self.nf_infoset_of(h).opponents[opponents]
    }

    /// The normal-form information set S^{T_h}(h).
    pub fn nf_infoset_of(&self, h: InfoSetId) -> &NfInfoSet {
        let p = self.game().infoset(h).player;
        self.nf_infosets[p.0].iter().find(|x| x.sources.contains(&h)).expect("every information set is materialized")
    }

    /// Trees T with S^T ∈ 𝒮_i, i.e. trees holding one of the player's information sets.
    pub fn normal_forms_of(&self, player: PlayerId) -> Vec<TreeId> {
        let mut ts: Vec<TreeId> = self.game().infosets_of(player).iter().map(|&h| self.game().infoset(h).tree).collect();
        ts.sort();
        ts.dedup();
        ts
    }
}

/// One product restriction Y^T per tree, stored as masks [tree][player][strategy].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRestriction {
    pub sets: Vec<Vec<Vec<bool>>>,
}

impl ExtendedRestriction {
    /// 𝐒 itself.
    pub fn full(universe: &Universe) -> ExtendedRestriction {
        let game = universe.game;
        ExtendedRestriction {
            sets: game
                .tree_ids()
                .map(|t| game.player_ids().map(|p| vec![true; universe.count(p, t)]).collect())
                .collect(),
        }
    }

    pub fn contains(&self, s: PartialStrategy) -> bool {
        self.sets[s.tree.0][s.player.0][s.index]
    }

    pub fn remove(&mut self, s: PartialStrategy) {
        self.sets[s.tree.0][s.player.0][s.index] = false;
    }

    /// Y_i^T as partial strategies in canonical order.
    pub fn survivors(&self, player: PlayerId, tree: TreeId) -> Vec<PartialStrategy> {
        self.sets[tree.0][player.0]
            .iter()
            .enumerate()
            .filter(|&(_, &b)| b)
            .map(|(i, _)| PartialStrategy { player, tree, index: i })
            .collect()
    }

    /// Y_{-i}^T as a mask over opponents' profile indices of `table`.
    pub fn opponents_mask(&self, table: &PayoffTable, player: PlayerId) -> Vec<bool> {
        let masks = &self.sets[table.tree.0];
        let mut out = vec![true];
        for (j, mask) in masks.iter().enumerate() {
            if j == player.0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * mask.len());
            for &a in &out {
                for &b in mask {
                    next.push(a && b);
                }
            }
            out = next;
        }
        out
    }

    pub fn is_subset_of(&self, other: &ExtendedRestriction) -> bool {
        self.sets
            .iter()
            .flatten()
            .flatten()
            .zip(other.sets.iter().flatten().flatten())
            .all(|(&a, &b)| !a || b)
    }

    pub fn size(&self) -> usize {
        self.sets.iter().flatten().flatten().filter(|&&b| b).count()
    }
}

/// X ∩ Y^{T'} for one player: index lists of surviving own strategies and opponents' profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub player: PlayerId,
    pub tree: TreeId,
    pub own: Vec<usize>,
    pub opponents: Vec<usize>,
}

impl Restriction {
    /// Componentwise intersection of a mask pair with the extended restriction.
    pub fn intersect(table: &PayoffTable, player: PlayerId, own: &[bool], opponents: &[bool], y: &ExtendedRestriction) -> Restriction {
        let ymask = &y.sets[table.tree.0][player.0];
        let yopp = y.opponents_mask(table, player);
        Restriction {
            player,
            tree: table.tree,
            own: (0..own.len()).filter(|&s| own[s] && ymask[s]).collect(),
            opponents: (0..opponents.len()).filter(|&o| opponents[o] && yopp[o]).collect(),
        }
    }

    /// The whole normal form S^T ∩ Y^T.
    pub fn whole(table: &PayoffTable, player: PlayerId, y: &ExtendedRestriction) -> Restriction {
        let own = vec![true; table.counts[player.0]];
        let opp = vec![true; table.opponent_count(player)];
        Restriction::intersect(table, player, &own, &opp, y)
    }

    pub fn is_empty(&self) -> bool {
        self.own.is_empty() || self.opponents.is_empty()
    }

    /// Payoff matrix rows = own strategies, columns = opponents' profiles.
    pub fn matrix(&self, nf: &NormalForm) -> Vec<Vec<Rational>> {
        self.own
            .iter()
            .map(|&s| self.opponents.iter().map(|&o| nf.payoff_against(self.tree, self.player, s, o).clone()).collect())
            .collect()
    }
}
