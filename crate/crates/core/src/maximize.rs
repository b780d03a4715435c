//! Seed selection: CELF lazy greedy, plus plain greedy and exhaustive
//! search used as oracles on small instances.
//!
//! All three break ties the same way: larger gain first, then smaller
//! user id.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::graph::UserId;
use crate::spread::{InfluenceField, SpreadError, SpreadState};

/// Largest number of subsets [`select_exhaustive`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum MaximizeError {
    InvalidK(usize),
    TooLarge { users: usize, k: usize },
    Spread(SpreadError),
}

impl fmt::Display for MaximizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaximizeError::InvalidK(k) => write!(f, "seed count must be at least 1, got {k}"),
            MaximizeError::TooLarge { users, k } => {
                write!(f, "C({users}, {k}) exceeds {EXHAUSTIVE_LIMIT} subsets")
            }
            MaximizeError::Spread(e) => e.fmt(f),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for MaximizeError {}

impl From<SpreadError> for MaximizeError {
    fn from(e: SpreadError) -> Self {
        MaximizeError::Spread(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedSeed {
    /// 1-based.
    pub rank: usize,
    pub user: UserId,
    pub marginal_gain: f64,
    pub cumulative_sigma: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SeedSelection {
    pub seeds: Vec<SelectedSeed>,
}

impl SeedSelection {
    fn from_state(state: &SpreadState<'_, '_>, gains: &[f64]) -> Self {
        let mut cumulative = 0.0;
        let seeds = state
            .seeds()
            .iter()
            .zip(gains)
            .enumerate()
            .map(|(i, (&user, &gain))| {
                cumulative += gain;
                SelectedSeed {
                    rank: i + 1,
                    user,
                    marginal_gain: gain,
                    cumulative_sigma: cumulative,
                }
            })
            .collect();
        SeedSelection { seeds }
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn users(&self) -> Vec<UserId> {
        self.seeds.iter().map(|s| s.user).collect()
    }

    /// Cumulative σ of the whole selection.
    pub fn sigma(&self) -> f64 {
        self.seeds.last().map_or(0.0, |s| s.cumulative_sigma)
    }

    /// The first `r` seeds.
    pub fn truncated(&self, r: usize) -> SeedSelection {
        SeedSelection {
            seeds: self.seeds.iter().take(r).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelectionStats {
    /// Marginal-gain evaluations, including the initial pass.
    pub gain_evaluations: usize,
}

/// Candidate with a possibly stale gain, computed when the seed set had
/// `round` members.
#[derive(Debug, Clone, Copy)]
struct LazyEntry {
    gain: f64,
    user: UserId,
    round: usize,
}

impl PartialEq for LazyEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LazyEntry {}

impl PartialOrd for LazyEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LazyEntry {
    // max-heap: higher gain wins, then lower id
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.user.cmp(&self.user))
    }
}

fn effective_k(field: &InfluenceField<'_>, k: usize) -> Result<usize, MaximizeError> {
    if k == 0 {
        return Err(MaximizeError::InvalidK(k));
    }
    Ok(k.min(field.graph().user_count()))
}

pub fn select_celf(field: &InfluenceField<'_>, k: usize) -> Result<SeedSelection, MaximizeError> {
    select_celf_with(field, k, |state| {
        state
            .field()
            .graph()
            .users()
            .map(|u| state.gain(u))
            .collect()
    })
    .map(|(selection, _)| selection)
}

/// CELF with a caller-supplied initial pass: `initial_gains` must return
/// `σ({u})` for every user, in id order. The lazy rounds run sequentially.
pub fn select_celf_with<F>(
    field: &InfluenceField<'_>,
    k: usize,
    initial_gains: F,
) -> Result<(SeedSelection, SelectionStats), MaximizeError>
where
    F: FnOnce(&SpreadState<'_, '_>) -> Vec<f64>,
{
    let k = effective_k(field, k)?;
    let mut state = SpreadState::new(field);
    let initial = initial_gains(&state);
    assert_eq!(
        initial.len(),
        field.graph().user_count(),
        "one initial gain per user"
    );
    let mut stats = SelectionStats {
        gain_evaluations: initial.len(),
    };

    let mut heap: BinaryHeap<LazyEntry> = initial
        .into_iter()
        .enumerate()
        .map(|(i, gain)| LazyEntry {
            gain,
            user: UserId(i as u32),
            round: 0,
        })
        .collect();

    let mut gains = Vec::with_capacity(k);
    while state.seeds().len() < k {
        let Some(top) = heap.pop() else { break };
        let round = state.seeds().len();
        if top.round == round {
            state.insert(top.user)?;
            gains.push(top.gain);
        } else {
            stats.gain_evaluations += 1;
            heap.push(LazyEntry {
                gain: state.gain(top.user),
                user: top.user,
                round,
            });
        }
    }
    Ok((SeedSelection::from_state(&state, &gains), stats))
}

pub fn select_greedy_naive(
    field: &InfluenceField<'_>,
    k: usize,
) -> Result<SeedSelection, MaximizeError> {
    select_greedy_naive_with_stats(field, k).map(|(s, _)| s)
}

/// `k` rounds, each scanning the gain of every remaining user.
pub fn select_greedy_naive_with_stats(
    field: &InfluenceField<'_>,
    k: usize,
) -> Result<(SeedSelection, SelectionStats), MaximizeError> {
    let k = effective_k(field, k)?;
    let mut state = SpreadState::new(field);
    let mut stats = SelectionStats::default();
    let mut gains = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(f64, UserId)> = None;
        for u in field.graph().users() {
            if state.contains(u) {
                continue;
            }
            let g = state.gain(u);
            stats.gain_evaluations += 1;
            // users are scanned in id order, so ties keep the earlier id
            if best.is_none_or(|(bg, _)| g.total_cmp(&bg) == Ordering::Greater) {
                best = Some((g, u));
            }
        }
        let Some((g, u)) = best else { break };
        state.insert(u)?;
        gains.push(g);
    }
    Ok((SeedSelection::from_state(&state, &gains), stats))
}

fn binomial_capped(n: u64, k: u64, cap: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// True maximizer of `σ` over all subsets of size `min(k, |V|)`; among
/// equal values the lexicographically first id combination wins.
pub fn select_exhaustive(
    field: &InfluenceField<'_>,
    k: usize,
) -> Result<Vec<UserId>, MaximizeError> {
    let n = field.graph().user_count();
    let k = effective_k(field, k)?;
    if binomial_capped(n as u64, k as u64, EXHAUSTIVE_LIMIT).is_none() {
        return Err(MaximizeError::TooLarge { users: n, k });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut combo: Vec<usize> = (0..k).collect();
    let mut current: Vec<UserId> = Vec::with_capacity(k);
    let mut best: Option<(f64, Vec<UserId>)> = None;
    loop {
        current.clear();
        current.extend(combo.iter().map(|&i| UserId(i as u32)));
        let value = field.sigma(&current)?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, current.clone()));
        }
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(best.map(|(_, s)| s).unwrap_or_default());
            }
            i -= 1;
            if combo[i] < n - k + i {
                break;
            }
        }
        combo[i] += 1;
        for j in (i + 1)..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}
