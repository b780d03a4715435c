//! Seeded synthetic Twitter-like datasets.
//!
//! Follows are drawn by preferential attachment on the followee side;
//! mention and retweet volumes are scaled from the follow count with the
//! ratios follows : retweets : mentions = 71027 : 9789 : 20300, and about
//! 251329 / 36274 tweets per user.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{GraphBuilder, SocialGraph, UserActivity};

const MENTIONS_PER_FOLLOW: f64 = 20300.0 / 71027.0;
const RETWEETS_PER_FOLLOW: f64 = 9789.0 / 71027.0;
const TWEETS_PER_USER: f64 = 251329.0 / 36274.0;
/// Probability that a followee is drawn proportionally to its current
/// follower count rather than uniformly.
const ATTACHMENT_BIAS: f64 = 0.8;
/// Share of interactions that happen along an existing follow.
const INTERACTION_ON_FOLLOW: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticParams {
    pub seed: u64,
    pub n_users: usize,
    pub n_edges: usize,
    /// Multiplies mention, retweet and tweet volumes.
    pub activity_intensity: f64,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            seed: 42,
            n_users: 1000,
            n_edges: 2000,
            activity_intensity: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidParameters(String),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidParameters(msg) => write!(f, "invalid synthetic parameters: {msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SynthError {}

/// Raw records in the same shape as the input files.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyntheticDataset {
    /// `(src, dst)`: dst follows src.
    pub follows: Vec<(String, String)>,
    /// `(mentioner, mentioned, count)`.
    pub mentions: Vec<(String, String, u64)>,
    /// `(retweeter, original_author, count)`.
    pub retweets: Vec<(String, String, u64)>,
    /// `(user, tweets, followers)`.
    pub activity: Vec<(String, u64, u64)>,
}

impl SyntheticDataset {
    pub fn total_mentions(&self) -> u64 {
        self.mentions.iter().map(|r| r.2).sum()
    }

    pub fn total_retweets(&self) -> u64 {
        self.retweets.iter().map(|r| r.2).sum()
    }

    pub fn build(&self) -> (SocialGraph, Vec<UserActivity>) {
        let mut b = GraphBuilder::new();
        for (user, tweets, followers) in &self.activity {
            b.add_activity(user, *tweets, *followers);
        }
        for (s, d) in &self.follows {
            b.add_follow_edge(s, d);
        }
        for (actor, target, n) in &self.mentions {
            b.add_mentions(actor, target, *n);
        }
        for (actor, target, n) in &self.retweets {
            b.add_retweets(actor, target, *n);
        }
        b.build()
    }
}

fn pick_distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (u32, u32) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a as u32, b as u32)
}

pub fn generate_synthetic(params: &SyntheticParams) -> Result<SyntheticDataset, SynthError> {
    let SyntheticParams {
        seed,
        n_users: n,
        n_edges: m,
        activity_intensity,
    } = *params;
    if n == 0 {
        return Err(SynthError::InvalidParameters(
            "n_users must be at least 1".into(),
        ));
    }
    let max_edges = (n as u128) * (n as u128 - 1);
    if m as u128 > max_edges {
        return Err(SynthError::InvalidParameters(format!(
            "{m} edges do not fit in a simple directed graph on {n} users"
        )));
    }
    if !(activity_intensity.is_finite() && activity_intensity >= 0.0) {
        return Err(SynthError::InvalidParameters(format!(
            "activity intensity must be a nonnegative number, got {activity_intensity}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Shuffled names so that name order carries no information about the
    // attachment order.
    let width = format!("{}", n.saturating_sub(1)).len();
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let names: Vec<String> = labels.iter().map(|l| format!("u{l:0width$}")).collect();

    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m);
    if (m as u128) * 2 > max_edges {
        // dense: sample without replacement from every ordered pair
        let mut all: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|s| (0..n as u32).filter(move |d| *d != s).map(move |d| (s, d)))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(m);
        edges = all;
    } else {
        let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
        // one entry per follow received, for proportional sampling
        let mut followee_pool: Vec<u32> = Vec::with_capacity(m);
        while edges.len() < m {
            let follower = rng.gen_range(0..n) as u32;
            let followee = if !followee_pool.is_empty() && rng.gen_bool(ATTACHMENT_BIAS) {
                followee_pool[rng.gen_range(0..followee_pool.len())]
            } else {
                rng.gen_range(0..n) as u32
            };
            if followee == follower || !seen.insert((followee, follower)) {
                continue;
            }
            edges.push((followee, follower));
            followee_pool.push(followee);
        }
    }

    let mut followers = alloc::vec![0u64; n];
    for (src, _) in &edges {
        followers[*src as usize] += 1;
    }

    let interactions = |rng: &mut ChaCha8Rng, total: u64| -> BTreeMap<(u32, u32), u64> {
        // keyed (actor, target); the actor is the influenced endpoint
        let mut counts = BTreeMap::new();
        if n < 2 {
            return counts;
        }
        for _ in 0..total {
            let (actor, target) = if !edges.is_empty() && rng.gen_bool(INTERACTION_ON_FOLLOW) {
                let (src, dst) = edges[rng.gen_range(0..edges.len())];
                (dst, src)
            } else {
                pick_distinct_pair(rng, n)
            };
            *counts.entry((actor, target)).or_insert(0u64) += 1;
        }
        counts
    };
    let m_f = m as f64;
    let mention_total = libm::round(m_f * MENTIONS_PER_FOLLOW * activity_intensity) as u64;
    let retweet_total = libm::round(m_f * RETWEETS_PER_FOLLOW * activity_intensity) as u64;
    let mention_counts = interactions(&mut rng, mention_total);
    let retweet_counts = interactions(&mut rng, retweet_total);

    let tweet_cap = libm::ceil(2.0 * TWEETS_PER_USER * activity_intensity) as u64;
    let activity = (0..n)
        .map(|u| {
            let base = if tweet_cap == 0 {
                0
            } else {
                rng.gen_range(0..=tweet_cap)
            };
            // more-followed accounts post a little more
            let tweets =
                base + libm::floor(activity_intensity * libm::sqrt(followers[u] as f64)) as u64;
            (names[u].clone(), tweets, followers[u])
        })
        .collect();

    let name = |i: u32| names[i as usize].clone();
    Ok(SyntheticDataset {
        follows: edges.iter().map(|(s, d)| (name(*s), name(*d))).collect(),
        mentions: mention_counts
            .into_iter()
            .map(|((a, t), c)| (name(a), name(t), c))
            .collect(),
        retweets: retweet_counts
            .into_iter()
            .map(|((a, t), c)| (name(a), name(t), c))
            .collect(),
        activity,
    })
}
