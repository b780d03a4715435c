//! Evidential influence maximization.
//!
//! Directed edges of a social graph carry several quantitative influence
//! indicators. Each indicator becomes a mass function on the frame
//! `{I, P}` (influence, passivity); indicators are weighted by a
//! reliability estimated from their Jousselme distance to one another,
//! discounted, and fused with Dempster's rule. The mass left on `{I}` is
//! the edge influence, from which a two-hop spread function is built and
//! maximized with CELF.
//!
//! The crate is `no_std` (with `alloc`). File formats, synthetic data and
//! the command line live in the `evinf` crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod belief;
pub mod evaluate;
pub mod fusion;
pub mod graph;
pub mod maximize;
pub mod spread;
pub mod synth;

pub use belief::{
    combine_dempster, discount, jousselme_distance, BeliefError, MassFunction, Reliability, Subset,
};
pub use evaluate::{
    compare_configs, quality_curve, run_config, ComparisonReport, ConfigRun, EvaluateError,
    NamedConfig, QualityCurve,
};
pub use fusion::{
    estimate_reliabilities, fuse_all, fuse_edge, indicator_bba, AlphaMode, EdgeBBASet,
    EdgeInfluence, FusionError, FusionPlan, Granularity, IndicatorRange, NormalizationStats,
    ReliabilityConfig,
};
pub use graph::{
    Edge, EdgeId, GraphBuilder, GraphError, RawIndicatorVector, SocialGraph, UserActivity, UserId,
};
pub use maximize::{
    select_celf, select_celf_with, select_exhaustive, select_greedy_naive,
    select_greedy_naive_with_stats, MaximizeError, SeedSelection, SelectedSeed, SelectionStats,
};
pub use spread::{InfluenceField, SpreadError, SpreadRule, SpreadState};
pub use synth::{generate_synthetic, SynthError, SyntheticDataset, SyntheticParams};
