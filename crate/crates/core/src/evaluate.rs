//! Quality of a ranked seed list: accumulated followers, mentions,
//! retweets and tweets of the first `r` seeds, for every `r`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::fusion::{fuse_all, FusionError, ReliabilityConfig};
use crate::graph::{SocialGraph, UserActivity, UserId};
use crate::maximize::{select_celf, MaximizeError, SeedSelection};
use crate::spread::{InfluenceField, SpreadError};

pub const DEFAULT_K: usize = 50;

/// Prefix sums of the four per-user statistics along a ranking.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QualityCurve {
    pub follows: Vec<u64>,
    pub mentions: Vec<u64>,
    pub retweets: Vec<u64>,
    pub tweets: Vec<u64>,
}

impl QualityCurve {
    pub fn len(&self) -> usize {
        self.follows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.follows.is_empty()
    }

    pub fn series(&self) -> [&[u64]; 4] {
        [&self.follows, &self.mentions, &self.retweets, &self.tweets]
    }

    pub fn is_monotone(&self) -> bool {
        self.series()
            .iter()
            .all(|s| s.windows(2).all(|w| w[0] <= w[1]))
    }
}

fn lookup(activity: &[UserActivity], user: UserId) -> Option<&UserActivity> {
    match activity.get(user.index()) {
        Some(a) if a.user == user => Some(a),
        _ => activity.iter().find(|a| a.user == user),
    }
}

/// Users without an activity record count as all zeros.
pub fn quality_curve(selection: &SeedSelection, activity: &[UserActivity]) -> QualityCurve {
    let mut curve = QualityCurve::default();
    let (mut f, mut m, mut r, mut t) = (0u64, 0u64, 0u64, 0u64);
    for seed in &selection.seeds {
        if let Some(a) = lookup(activity, seed.user) {
            f += a.followers;
            m += a.mentions_received;
            r += a.retweets_received;
            t += a.tweets;
        }
        curve.follows.push(f);
        curve.mentions.push(m);
        curve.retweets.push(r);
        curve.tweets.push(t);
    }
    curve
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedConfig {
    pub name: String,
    pub config: ReliabilityConfig,
}

impl NamedConfig {
    pub fn new(name: impl Into<String>, config: ReliabilityConfig) -> Self {
        NamedConfig {
            name: name.into(),
            config,
        }
    }

    /// Fixed α = 0, fixed α = 0.2 and estimated α with λ = 5.
    pub fn default_sweep() -> Vec<NamedConfig> {
        let fixed = |a: f64| ReliabilityConfig::fixed(a).expect("valid alpha");
        alloc::vec![
            NamedConfig::new("fixed:0", fixed(0.0)),
            NamedConfig::new("fixed:0.2", fixed(0.2)),
            NamedConfig::new("estimated", ReliabilityConfig::default()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigRun {
    pub name: String,
    pub config: ReliabilityConfig,
    pub selection: SeedSelection,
    pub curve: QualityCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub k: usize,
    pub runs: Vec<ConfigRun>,
}

impl ComparisonReport {
    pub fn run(&self, name: &str) -> Option<&ConfigRun> {
        self.runs.iter().find(|r| r.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvaluateError {
    EmptySweep,
    InvalidK(usize),
    Fusion {
        config: String,
        source: FusionError,
    },
    Spread {
        config: String,
        source: SpreadError,
    },
    Maximize {
        config: String,
        source: MaximizeError,
    },
}

impl fmt::Display for EvaluateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvaluateError::EmptySweep => write!(f, "no configurations to compare"),
            EvaluateError::InvalidK(k) => write!(f, "seed count must be at least 1, got {k}"),
            EvaluateError::Fusion { config, source } => write!(f, "config `{config}`: {source}"),
            EvaluateError::Spread { config, source } => write!(f, "config `{config}`: {source}"),
            EvaluateError::Maximize { config, source } => write!(f, "config `{config}`: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvaluateError {}

/// Fusion, spread and CELF for one configuration.
pub fn run_config(
    g: &SocialGraph,
    activity: &[UserActivity],
    named: &NamedConfig,
    k: usize,
) -> Result<ConfigRun, EvaluateError> {
    let name = || named.name.to_string();
    let fused = fuse_all(g, &named.config).map_err(|source| EvaluateError::Fusion {
        config: name(),
        source,
    })?;
    let field = InfluenceField::from_fused(g, &fused).map_err(|source| EvaluateError::Spread {
        config: name(),
        source,
    })?;
    let selection = select_celf(&field, k).map_err(|source| EvaluateError::Maximize {
        config: name(),
        source,
    })?;
    let curve = quality_curve(&selection, activity);
    Ok(ConfigRun {
        name: name(),
        config: named.config,
        selection,
        curve,
    })
}

/// Runs every configuration on the same graph, in order.
pub fn compare_configs(
    g: &SocialGraph,
    activity: &[UserActivity],
    configs: &[NamedConfig],
    k: usize,
) -> Result<ComparisonReport, EvaluateError> {
    if configs.is_empty() {
        return Err(EvaluateError::EmptySweep);
    }
    if k == 0 {
        return Err(EvaluateError::InvalidK(k));
    }
    let runs = configs
        .iter()
        .map(|c| run_config(g, activity, c, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComparisonReport { k, runs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::maximize::SelectedSeed;

    fn selection(users: &[u32]) -> SeedSelection {
        SeedSelection {
            seeds: users
                .iter()
                .enumerate()
                .map(|(i, &u)| SelectedSeed {
                    rank: i + 1,
                    user: UserId(u),
                    marginal_gain: 1.0,
                    cumulative_sigma: (i + 1) as f64,
                })
                .collect(),
        }
    }

    fn act(user: u32, tweets: u64, followers: u64, mentions: u64, retweets: u64) -> UserActivity {
        UserActivity {
            user: UserId(user),
            tweets,
            followers,
            mentions_received: mentions,
            retweets_received: retweets,
        }
    }

    #[test]
    fn prefix_sums() {
        let a = [act(0, 0, 10, 0, 0), act(1, 0, 5, 0, 0)];
        let c = quality_curve(&selection(&[0, 1]), &a);
        assert_eq!(c.follows, vec![10, 15]);
        assert!(c.is_monotone());
    }

    #[test]
    fn single_seed_identity() {
        let a = [act(0, 3, 7, 2, 1)];
        let c = quality_curve(&selection(&[0]), &a);
        assert_eq!(c.series(), [&[7u64][..], &[2], &[1], &[3]]);
    }

    #[test]
    fn missing_activity_is_zero() {
        let c = quality_curve(&selection(&[4, 2]), &[]);
        assert_eq!(c.follows, vec![0, 0]);
        assert_eq!(c.tweets, vec![0, 0]);
    }

    #[test]
    fn sweep_errors() {
        let (g, a) = GraphBuilder::new().build();
        assert_eq!(
            compare_configs(&g, &a, &[], 5),
            Err(EvaluateError::EmptySweep)
        );
        assert_eq!(
            compare_configs(&g, &a, &NamedConfig::default_sweep(), 0),
            Err(EvaluateError::InvalidK(0))
        );
    }

    #[test]
    fn fixed_zero_selects_in_id_order() {
        let mut b = GraphBuilder::new();
        b.add_follow_edge("c", "a")
            .add_follow_edge("c", "b")
            .add_follow_edge("b", "d");
        b.add_mentions("a", "c", 4).add_activity("c", 9, 2);
        let (g, a) = b.build();
        let report = compare_configs(&g, &a, &NamedConfig::default_sweep(), 3).unwrap();
        let zero = report.run("fixed:0").unwrap();
        assert_eq!(
            zero.selection.users(),
            vec![UserId(0), UserId(1), UserId(2)]
        );
        assert_eq!(zero.selection.sigma(), 3.0);
        assert_eq!(report.runs.len(), 3);
        assert!(report.runs.iter().all(|r| r.curve.len() == 3));
    }
}
