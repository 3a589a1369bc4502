//! Partial strategies, induced strategies, replacements and play.
//!
//! A T-partial strategy of player i assigns an action to every information set
//! in H_i^T. Strategies are stored as mixed-radix indices over the canonical
//! order of those information sets, the first set being the most significant
//! digit, so index order is lexicographic order.

use crate::game::{display_label, Game, InfoSetId, NodeId, PlayerId, TreeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialStrategy {
    pub player: PlayerId,
    pub tree: TreeId,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct Scope {
    pub player: PlayerId,
    pub tree: TreeId,
    /// H_i^T in canonical order.
    pub infosets: Vec<InfoSetId>,
    pub radices: Vec<usize>,
    strides: Vec<usize>,
    pub count: usize,
}

impl Scope {
    pub fn position(&self, h: InfoSetId) -> Option<usize> {
        self.infosets.iter().position(|&x| x == h)
    }

    pub fn digit(&self, index: usize, pos: usize) -> usize {
        index / self.strides[pos] % self.radices[pos]
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.infosets.len()).map(|k| self.digit(index, k)).collect()
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("tree {to} is not reachable from tree {from}")]
    NotReachable { from: String, to: String },
    #[error("strategies belong to different players or trees")]
    ScopeMismatch,
    #[error("information set is outside the strategy's partial game")]
    OutOfScope,
    #[error("the opponents' profile does not allow the information set")]
    Excluded,
    #[error("cannot read strategy `{0}`")]
    Unreadable(String),
}

/// Every T-partial strategy space of a forest, with precomputed inductions.
#[derive(Debug, Clone)]
pub struct Universe<'g> {
    pub game: &'g Game,
    scopes: Vec<Vec<Scope>>,
    // induce[tree][tree'][player] = induced index for every index of the tree scope
    induce: Vec<Vec<Vec<Option<Vec<usize>>>>>,
    compact_labels: bool,
}

impl<'g> Universe<'g> {
    pub fn new(game: &'g Game) -> Universe<'g> {
        let scopes: Vec<Vec<Scope>> = game
            .tree_ids()
            .map(|t| {
                game.player_ids()
                    .map(|p| {
                        let infosets = game.infosets_in_partial(p, t);
                        let radices: Vec<usize> = infosets.iter().map(|&h| game.infoset(h).actions.len()).collect();
                        let mut strides = vec![1; radices.len()];
                        for k in (0..radices.len().saturating_sub(1)).rev() {
                            strides[k] = strides[k + 1] * radices[k + 1];
                        }
                        let count = radices.iter().product();
                        Scope { player: p, tree: t, infosets, radices, strides, count }
                    })
                    .collect()
            })
            .collect();
        let nt = game.trees.len();
        let mut induce = vec![vec![vec![None; game.num_players()]; nt]; nt];
        for t in game.tree_ids() {
            for t2 in game.tree_ids() {
                if t != t2 && !game.reaches(t, t2) {
                    continue;
                }
                for p in game.player_ids() {
                    let from = &scopes[t.0][p.0];
                    let to = &scopes[t2.0][p.0];
                    let map: Vec<usize> = to.infosets.iter().map(|&h| from.position(h).expect("partial games nest")).collect();
                    let table = (0..from.count)
                        .map(|idx| {
                            let d = from.digits(idx);
                            to.encode(&map.iter().map(|&k| d[k]).collect::<Vec<_>>())
                        })
                        .collect();
                    induce[t.0][t2.0][p.0] = Some(table);
                }
            }
        }
        let compact_labels = game
            .infosets
            .iter()
            .all(|h| h.actions.iter().all(|a| display_label(a).chars().count() == 1));
        Universe { game, scopes, induce, compact_labels }
    }

    pub fn scope(&self, player: PlayerId, tree: TreeId) -> &Scope {
        &self.scopes[tree.0][player.0]
    }

    pub fn count(&self, player: PlayerId, tree: TreeId) -> usize {
        self.scopes[tree.0][player.0].count
    }

    pub fn strategy(&self, player: PlayerId, tree: TreeId, index: usize) -> PartialStrategy {
        debug_assert!(index < self.count(player, tree));
        PartialStrategy { player, tree, index }
    }

    /// S_i^T in canonical (lexicographic) order.
    pub fn enumerate(&self, player: PlayerId, tree: TreeId) -> Vec<PartialStrategy> {
        (0..self.count(player, tree)).map(|i| self.strategy(player, tree, i)).collect()
    }

    /// 𝐒_i: the union over all trees, tree by tree.
    pub fn all_strategies(&self, player: PlayerId) -> Vec<PartialStrategy> {
        self.game.tree_ids().flat_map(|t| self.enumerate(player, t)).collect()
    }

    /// Full strategies S_i are the base-tree partial strategies.
    pub fn full(&self, player: PlayerId) -> Vec<PartialStrategy> {
        self.enumerate(player, self.game.base)
    }

    /// Index into A_h of the action `s` prescribes at `h`.
    pub fn action_at(&self, s: PartialStrategy, h: InfoSetId) -> Option<usize> {
        let scope = self.scope(s.player, s.tree);
        scope.position(h).map(|k| scope.digit(s.index, k))
    }

    pub fn induce(&self, s: PartialStrategy, to: TreeId) -> Result<PartialStrategy, StrategyError> {
        match &self.induce[s.tree.0][to.0][s.player.0] {
            Some(table) => Ok(PartialStrategy { player: s.player, tree: to, index: table[s.index] }),
            None => Err(StrategyError::NotReachable {
                from: self.game.tree(s.tree).name.clone(),
                to: self.game.tree(to).name.clone(),
            }),
        }
    }

    /// Induced index without the error path; `to` must be `from` or reachable from it.
    pub fn induce_index(&self, player: PlayerId, from: TreeId, to: TreeId, index: usize) -> usize {
        self.induce[from.0][to.0][player.0].as_ref().expect("tree not reachable")[index]
    }

    /// [s̃]: strategies of finer scopes inducing `s`, plus `s` itself.
    pub fn equivalence_class(&self, s: PartialStrategy) -> Vec<PartialStrategy> {
        let mut out = Vec::new();
        for t in self.game.tree_ids() {
            if t != s.tree && !self.game.reaches(t, s.tree) {
                continue;
            }
            for idx in 0..self.count(s.player, t) {
                if self.induce_index(s.player, t, s.tree, idx) == s.index {
                    out.push(self.strategy(s.player, t, idx));
                }
            }
        }
        out
    }

    /// The h-replacement s / s̃^h: `s̃`'s actions at `h` and its successors, `s`'s elsewhere.
    pub fn replace(&self, s: PartialStrategy, with: PartialStrategy, h: InfoSetId) -> Result<PartialStrategy, StrategyError> {
        if s.player != with.player || s.tree != with.tree {
            return Err(StrategyError::ScopeMismatch);
        }
        let scope = self.scope(s.player, s.tree);
        scope.position(h).ok_or(StrategyError::OutOfScope)?;
        let mut digits = scope.digits(s.index);
        for (k, &g) in scope.infosets.iter().enumerate() {
            if g == h || self.game.precedes(h, g) {
                digits[k] = scope.digit(with.index, k);
            }
        }
        Ok(self.strategy(s.player, s.tree, scope.encode(&digits)))
    }

    /// All h-replacements of `s` (distinct, in index order); `s` is among them.
    pub fn replacements(&self, s: PartialStrategy, h: InfoSetId) -> Vec<PartialStrategy> {
        let scope = self.scope(s.player, s.tree);
        let free: Vec<usize> = scope
            .infosets
            .iter()
            .enumerate()
            .filter(|&(_, &g)| g == h || self.game.precedes(h, g))
            .map(|(k, _)| k)
            .collect();
        let base = scope.digits(s.index);
        let total: usize = free.iter().map(|&k| scope.radices[k]).product();
        let mut out = Vec::with_capacity(total);
        for mut code in 0..total {
            let mut d = base.clone();
            for &k in free.iter().rev() {
                d[k] = code % scope.radices[k];
                code /= scope.radices[k];
            }
            out.push(self.strategy(s.player, s.tree, scope.encode(&d)));
        }
        out.sort();
        out
    }

    /// Local action index of `player` at `node` under strategy `index` of scope (`player`, `tree`).
    fn local_action(&self, tree: TreeId, node: NodeId, k: usize, index: usize) -> usize {
        let m = &self.game.node(node).moves[k];
        let scope = self.scope(m.player, tree);
        let pos = scope.position(m.infoset).expect("information set outside partial game");
        m.action_map[scope.digit(index, pos)].expect("imaginary action in a validated game")
    }

    /// Nodes visited by a full profile of `tree`-partial strategies, root first.
    pub fn play_path(&self, tree: TreeId, profile: &[usize]) -> Vec<NodeId> {
        self.path_from(tree, self.game.tree(tree).root, profile)
    }

    fn path_from(&self, tree: TreeId, start: NodeId, profile: &[usize]) -> Vec<NodeId> {
        let mut path = vec![start];
        let mut cur = start;
        loop {
            let node = self.game.node(cur);
            if node.is_terminal() {
                return path;
            }
            let local: Vec<usize> = node
                .moves
                .iter()
                .enumerate()
                .map(|(k, m)| self.local_action(tree, cur, k, profile[m.player.0]))
                .collect();
            cur = node.child(&local);
            path.push(cur);
        }
    }

    /// Terminal node reached in `tree` by a profile of `tree`-partial strategy indices.
    pub fn play(&self, tree: TreeId, profile: &[usize]) -> NodeId {
        *self.play_path(tree, profile).last().unwrap()
    }

    /// Whether a full profile of T_h-partial strategies passes through `h`.
    pub fn profile_allows(&self, h: InfoSetId, profile: &[usize]) -> bool {
        let set = self.game.infoset(h);
        self.play_path(set.tree, profile).iter().any(|n| set.nodes.contains(n))
    }

    /// Whether some opponents' profile completes `s` into a profile allowing `h`.
    pub fn strategy_allows(&self, s: PartialStrategy, h: InfoSetId) -> Result<bool, StrategyError> {
        let t = self.game.infoset(h).tree;
        let own = self.induce(s, t)?;
        let mut found = false;
        self.for_each_profile(t, Some((s.player, own.index)), |profile| {
            found = found || self.profile_allows(h, profile);
        });
        Ok(found)
    }

    /// Whether some strategy of `player` completes the opponents' profile into one allowing `h`.
    /// `profile[player]` is ignored.
    pub fn opponents_allow(&self, player: PlayerId, h: InfoSetId, profile: &[usize]) -> bool {
        let t = self.game.infoset(h).tree;
        let mut p = profile.to_vec();
        (0..self.count(player, t)).any(|i| {
            p[player.0] = i;
            self.profile_allows(h, &p)
        })
    }

    /// Calls `f` for each profile of `tree`, optionally holding one player fixed.
    pub fn for_each_profile(&self, tree: TreeId, fixed: Option<(PlayerId, usize)>, mut f: impl FnMut(&[usize])) {
        let n = self.game.num_players();
        let counts: Vec<usize> = (0..n).map(|p| self.count(PlayerId(p), tree)).collect();
        let mut cur = vec![0; n];
        if let Some((p, i)) = fixed {
            cur[p.0] = i;
        }
        loop {
            f(&cur);
            let mut k = n;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if fixed.is_some_and(|(p, _)| p.0 == k) {
                    continue;
                }
                cur[k] += 1;
                if cur[k] < counts[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// Outcome at `h` when `s_i` is followed at `h` and later, the opponents play
    /// `profile`, and player i's earlier moves are whatever leads to `h`.
    ///
    /// `profile` holds T_h-partial indices; `profile[player]` is replaced by `s_i`
    /// induced to T_h.
    pub fn conditional_play(&self, h: InfoSetId, s: PartialStrategy, profile: &[usize]) -> Result<NodeId, StrategyError> {
        let set = self.game.infoset(h);
        let t = set.tree;
        let own = self.induce(s, t)?;
        let mut p = profile.to_vec();
        p[s.player.0] = own.index;
        let path = self.play_path(t, &p);
        if path.iter().any(|n| set.nodes.contains(n)) {
            return Ok(*path.last().unwrap());
        }
        // s_i leads elsewhere; find the node of h that the opponents' play leads to
        // when player i's moves are free.
        let mut candidates: Vec<(usize, NodeId)> = Vec::new();
        for &n in &set.nodes {
            let route = self.game.path_to(n);
            let mut mismatches = 0;
            let mut consistent = true;
            for w in route.windows(2) {
                let (x, next) = (w[0], w[1]);
                let node = self.game.node(x);
                for (k, m) in node.moves.iter().enumerate() {
                    let taken = self.game.node(next).incoming[k];
                    let prescribed = self.local_action(t, x, k, p[m.player.0]);
                    if m.player == s.player {
                        let own_set = m.infoset;
                        let earlier = own_set == h || self.game.precedes(own_set, h);
                        if prescribed != taken && !earlier {
                            mismatches += 1;
                        }
                    } else if prescribed != taken {
                        consistent = false;
                    }
                }
            }
            if consistent {
                candidates.push((mismatches, n));
            }
        }
        candidates.sort();
        let (_, start) = *candidates.first().ok_or(StrategyError::Excluded)?;
        Ok(*self.path_from(t, start, &p).last().unwrap())
    }

    /// Concatenated display labels in canonical information-set order; `.`-separated
    /// when some label is longer than one character; `-` for the vacuous strategy.
    pub fn render(&self, s: PartialStrategy) -> String {
        let scope = self.scope(s.player, s.tree);
        if scope.infosets.is_empty() {
            return "-".to_string();
        }
        let labels: Vec<&str> = scope
            .infosets
            .iter()
            .enumerate()
            .map(|(k, &h)| display_label(&self.game.infoset(h).actions[scope.digit(s.index, k)]))
            .collect();
        labels.join(if self.compact_labels { "" } else { "." })
    }

    pub fn render_set(&self, set: impl IntoIterator<Item = PartialStrategy>) -> Vec<String> {
        set.into_iter().map(|s| self.render(s)).collect()
    }

    /// Reads a rendered strategy back.
    pub fn parse_strategy(&self, player: PlayerId, tree: TreeId, text: &str) -> Result<PartialStrategy, StrategyError> {
        let matches: Vec<PartialStrategy> =
            self.enumerate(player, tree).into_iter().filter(|&s| self.render(s) == text).collect();
        match matches.as_slice() {
            [s] => Ok(*s),
            _ => Err(StrategyError::Unreadable(text.to_string())),
        }
    }

    /// Number of profiles in S^T.
    pub fn profile_count(&self, tree: TreeId) -> usize {
        self.game.player_ids().map(|p| self.count(p, tree)).product()
    }
}
