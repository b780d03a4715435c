//! Two-hop influence of a seed set and the spread function `σ`.
//!
//! For a user `v` outside the seed set `S`,
//!
//! ```text
//! Inf(S, v) = Σ_{u∈S} Σ_{x ∈ IN(v) ∪ {v}} Inf(u, x) · Inf(x, v)
//! ```
//!
//! with `Inf(v, v) = 1` and `Inf(u, x) = 0` off the edge set; `Inf(S, v) = 1`
//! for `v ∈ S`, and `σ(S) = Σ_v Inf(S, v)`. Expanding the inner sum, seed
//! `u` contributes `2·Inf(u,v)` to each out-neighbor `v` (through `x = u` and
//! `x = v`) plus `Inf(u,x)·Inf(x,v)` along every two-hop path `u → x → v`.
//!
//! Under [`SpreadRule::Capped`] (the default) the sum is clipped at 1, which
//! keeps `σ` monotone and submodular; [`SpreadRule::Literal`] evaluates the
//! sum unclipped, where a heavily influenced non-seed can score above 1 and
//! adding it to `S` can lower `σ`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fusion::EdgeInfluence;
use crate::graph::{EdgeId, SocialGraph, UserId};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SpreadRule {
    /// `Inf(S, v) = min(1, Σ ...)` for `v ∉ S`.
    #[default]
    Capped,
    /// The raw sum.
    Literal,
}

impl SpreadRule {
    #[inline]
    fn apply(self, raw: f64) -> f64 {
        match self {
            SpreadRule::Capped => raw.min(1.0),
            SpreadRule::Literal => raw,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpreadError {
    UnknownUser(UserId),
    AlreadyInSet(UserId),
    InvalidWeight { edge: EdgeId, value: f64 },
    LengthMismatch { edges: usize, weights: usize },
}

impl fmt::Display for SpreadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpreadError::UnknownUser(u) => write!(f, "unknown user {u}"),
            SpreadError::AlreadyInSet(u) => write!(f, "user {u} is already in the seed set"),
            SpreadError::InvalidWeight { edge, value } => {
                write!(f, "edge {} has influence {value} outside [0, 1]", edge.0)
            }
            SpreadError::LengthMismatch { edges, weights } => {
                write!(f, "{weights} influence values for {edges} edges")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpreadError {}

/// Edge influences over a graph, read-only once built.
#[derive(Debug, Clone)]
pub struct InfluenceField<'g> {
    graph: &'g SocialGraph,
    inf: Vec<f64>,
    rule: SpreadRule,
}

impl<'g> InfluenceField<'g> {
    /// `weights[i]` is the influence along `EdgeId(i)`.
    pub fn from_weights(graph: &'g SocialGraph, weights: Vec<f64>) -> Result<Self, SpreadError> {
        if weights.len() != graph.edge_count() {
            return Err(SpreadError::LengthMismatch {
                edges: graph.edge_count(),
                weights: weights.len(),
            });
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(0.0..=1.0).contains(*w))
        {
            return Err(SpreadError::InvalidWeight {
                edge: EdgeId(i as u32),
                value: *w,
            });
        }
        Ok(InfluenceField {
            graph,
            inf: weights,
            rule: SpreadRule::default(),
        })
    }

    pub fn from_fused(
        graph: &'g SocialGraph,
        fused: &[EdgeInfluence],
    ) -> Result<Self, SpreadError> {
        let mut weights = vec![0.0; fused.len()];
        for f in fused {
            match weights.get_mut(f.edge.index()) {
                Some(w) => *w = f.inf,
                None => {
                    return Err(SpreadError::LengthMismatch {
                        edges: graph.edge_count(),
                        weights: fused.len(),
                    })
                }
            }
        }
        Self::from_weights(graph, weights)
    }

    pub fn with_rule(mut self, rule: SpreadRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn rule(&self) -> SpreadRule {
        self.rule
    }

    pub fn graph(&self) -> &'g SocialGraph {
        self.graph
    }

    pub fn weights(&self) -> &[f64] {
        &self.inf
    }

    /// `Inf(u, x)`: 1 on the diagonal, the edge weight on edges, else 0.
    pub fn pair(&self, u: UserId, x: UserId) -> f64 {
        if u == x {
            return 1.0;
        }
        self.graph
            .edge_id(u, x)
            .map_or(0.0, |e| self.inf[e.index()])
    }

    fn check(&self, u: UserId) -> Result<(), SpreadError> {
        if self.graph.contains(u) {
            Ok(())
        } else {
            Err(SpreadError::UnknownUser(u))
        }
    }

    fn membership(&self, seeds: &[UserId]) -> Result<Vec<bool>, SpreadError> {
        let mut member = vec![false; self.graph.user_count()];
        for &s in seeds {
            self.check(s)?;
            member[s.index()] = true;
        }
        Ok(member)
    }

    /// Calls `visit(v, t)` for every path term seed `u` sends to `v ≠ u`.
    /// The same `v` can be visited several times.
    pub fn for_each_contribution(&self, u: UserId, mut visit: impl FnMut(UserId, f64)) {
        let g = self.graph;
        for (eid, e) in g.out_edge_ids(u).zip(g.out_edges(u)) {
            let w_ux = self.inf[eid.index()];
            visit(e.dst, 2.0 * w_ux);
            if w_ux == 0.0 {
                continue;
            }
            for (eid2, e2) in g.out_edge_ids(e.dst).zip(g.out_edges(e.dst)) {
                if e2.dst != u {
                    visit(e2.dst, w_ux * self.inf[eid2.index()]);
                }
            }
        }
    }

    /// `Inf(S, v)`, summing over `IN(v) ∪ {v}` for each seed.
    pub fn influence_on(&self, seeds: &[UserId], v: UserId) -> Result<f64, SpreadError> {
        self.check(v)?;
        for &s in seeds {
            self.check(s)?;
        }
        if seeds.contains(&v) {
            return Ok(1.0);
        }
        let mut seen = vec![false; self.graph.user_count()];
        let mut raw = 0.0;
        for &u in seeds {
            if core::mem::replace(&mut seen[u.index()], true) {
                continue;
            }
            for &eid in self.graph.in_edge_ids(v) {
                let x = self.graph.edge(eid).src;
                raw += self.pair(u, x) * self.inf[eid.index()];
            }
            raw += self.pair(u, v);
        }
        Ok(self.rule.apply(raw))
    }

    /// `σ(S)`. Only users within two hops of `S` can score; the rest are
    /// skipped.
    pub fn sigma(&self, seeds: &[UserId]) -> Result<f64, SpreadError> {
        let member = self.membership(seeds)?;
        let mut acc = vec![0.0; self.graph.user_count()];
        let mut touched = Vec::new();
        let mut seen = vec![false; self.graph.user_count()];
        for &u in seeds {
            if core::mem::replace(&mut seen[u.index()], true) {
                continue;
            }
            self.for_each_contribution(u, |v, t| {
                if !member[v.index()] {
                    if acc[v.index()] == 0.0 {
                        touched.push(v);
                    }
                    acc[v.index()] += t;
                }
            });
        }
        touched.sort_unstable();
        touched.dedup();
        let members = member.iter().filter(|m| **m).count() as f64;
        Ok(members
            + touched
                .iter()
                .map(|v| self.rule.apply(acc[v.index()]))
                .sum::<f64>())
    }

    /// `σ(S ∪ {w}) - σ(S)`.
    pub fn marginal_gain(&self, seeds: &[UserId], w: UserId) -> Result<f64, SpreadError> {
        self.check(w)?;
        let mut state = SpreadState::new(self);
        for &s in seeds {
            if s == w {
                return Err(SpreadError::AlreadyInSet(w));
            }
            state.insert(s)?;
        }
        Ok(state.gain(w))
    }
}

/// Incrementally maintained seed set: the uncapped sum each non-seed
/// receives from the current seeds, and the running `σ`.
#[derive(Debug, Clone)]
pub struct SpreadState<'f, 'g> {
    field: &'f InfluenceField<'g>,
    member: Vec<bool>,
    acc: Vec<f64>,
    seeds: Vec<UserId>,
    sigma: f64,
}

impl<'f, 'g> SpreadState<'f, 'g> {
    pub fn new(field: &'f InfluenceField<'g>) -> Self {
        let n = field.graph.user_count();
        SpreadState {
            field,
            member: vec![false; n],
            acc: vec![0.0; n],
            seeds: Vec::new(),
            sigma: 0.0,
        }
    }

    pub fn field(&self) -> &'f InfluenceField<'g> {
        self.field
    }

    pub fn seeds(&self) -> &[UserId] {
        &self.seeds
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn contains(&self, u: UserId) -> bool {
        self.member.get(u.index()).copied().unwrap_or(false)
    }

    /// Contributions of `w`, merged per target and ordered by target.
    fn merged_contributions(&self, w: UserId) -> Vec<(UserId, f64)> {
        let mut terms = Vec::new();
        self.field
            .for_each_contribution(w, |v, t| terms.push((v, t)));
        terms.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(UserId, f64)> = Vec::with_capacity(terms.len());
        for (v, t) in terms {
            match merged.last_mut() {
                Some((last, sum)) if *last == v => *sum += t,
                _ => merged.push((v, t)),
            }
        }
        merged
    }

    /// Gain of adding `w`, which must not already be a seed.
    pub fn gain(&self, w: UserId) -> f64 {
        debug_assert!(!self.contains(w));
        let rule = self.field.rule;
        let mut gain = 1.0 - rule.apply(self.acc[w.index()]);
        for (v, t) in self.merged_contributions(w) {
            if self.member[v.index()] {
                continue;
            }
            let before = self.acc[v.index()];
            gain += rule.apply(before + t) - rule.apply(before);
        }
        gain
    }

    pub fn try_gain(&self, w: UserId) -> Result<f64, SpreadError> {
        self.field.check(w)?;
        if self.contains(w) {
            return Err(SpreadError::AlreadyInSet(w));
        }
        Ok(self.gain(w))
    }

    /// Adds `w` to the seed set and returns its marginal gain.
    pub fn insert(&mut self, w: UserId) -> Result<f64, SpreadError> {
        let gain = self.try_gain(w)?;
        for (v, t) in self.merged_contributions(w) {
            self.acc[v.index()] += t;
        }
        self.member[w.index()] = true;
        self.seeds.push(w);
        self.sigma += gain;
        Ok(gain)
    }
}
