//! From raw edge indicators to a fused influence mass per edge.
//!
//! Each indicator value is min–max normalized over the whole edge set into
//! a Bayesian mass `m(I) = w'`, `m(P) = 1 - w'`. Within an edge, an
//! indicator's reliability decreases with its mean Jousselme distance to
//! the other indicators, `α = (1 - C^λ)^(1/λ)`. Discounted masses are then
//! folded with Dempster's rule and the edge influence is the fused `m(I)`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::belief::{
    combine_dempster, discount, jousselme_distance, BeliefError, MassFunction, Reliability,
};
use crate::graph::{EdgeId, RawIndicatorVector, SocialGraph, UserId};

pub const DEFAULT_LAMBDA: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// Reliabilities estimated from inter-indicator distances.
    Estimated,
    /// Every indicator on every edge gets the same reliability.
    Fixed(Reliability),
}

/// Where reliabilities are estimated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Granularity {
    /// From the indicator masses of each edge on their own.
    #[default]
    PerEdge,
    /// One reliability per indicator, from its mean distance averaged over all edges.
    GlobalAverage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReliabilityConfig {
    pub mode: AlphaMode,
    pub lambda: f64,
    pub granularity: Granularity,
}

impl ReliabilityConfig {
    pub fn estimated(lambda: f64) -> Result<Self, FusionError> {
        Self::new(AlphaMode::Estimated, lambda)
    }

    pub fn fixed(alpha: f64) -> Result<Self, FusionError> {
        Self::new(AlphaMode::Fixed(Reliability::new(alpha)?), DEFAULT_LAMBDA)
    }

    pub fn new(mode: AlphaMode, lambda: f64) -> Result<Self, FusionError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(FusionError::InvalidLambda(lambda));
        }
        Ok(ReliabilityConfig {
            mode,
            lambda,
            granularity: Granularity::PerEdge,
        })
    }

    pub fn with_granularity(mut self, granularity: Granularity) -> Self {
        self.granularity = granularity;
        self
    }
}

impl Default for ReliabilityConfig {
    fn default() -> Self {
        ReliabilityConfig {
            mode: AlphaMode::Estimated,
            lambda: DEFAULT_LAMBDA,
            granularity: Granularity::PerEdge,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FusionError {
    OutOfRange {
        value: f64,
        min: f64,
        max: f64,
    },
    TooFewIndicators(usize),
    InvalidLambda(f64),
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    Belief(BeliefError),
    /// A failure while fusing the edge `src -> dst`.
    AtEdge {
        src: UserId,
        dst: UserId,
        source: Box<FusionError>,
    },
}

impl fmt::Display for FusionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FusionError::OutOfRange { value, min, max } => {
                write!(f, "indicator value {value} outside [{min}, {max}]")
            }
            FusionError::TooFewIndicators(n) => {
                write!(
                    f,
                    "estimating reliabilities needs at least 2 indicators, got {n}"
                )
            }
            FusionError::InvalidLambda(l) => write!(f, "lambda must be positive, got {l}"),
            FusionError::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} indicator values, found {found}")
            }
            FusionError::Belief(e) => e.fmt(f),
            FusionError::AtEdge { src, dst, source } => write!(f, "edge {src} -> {dst}: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FusionError {}

impl From<BeliefError> for FusionError {
    fn from(e: BeliefError) -> Self {
        FusionError::Belief(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorRange {
    pub min: f64,
    pub max: f64,
}

/// Per-indicator minimum and maximum over the edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationStats {
    pub ranges: Vec<IndicatorRange>,
}

impl NormalizationStats {
    /// With no edges every range collapses to `[0, 0]`.
    pub fn from_indicators(raw: &[RawIndicatorVector], n: usize) -> Result<Self, FusionError> {
        let mut ranges = vec![
            IndicatorRange {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            };
            n
        ];
        for r in raw {
            if r.values.len() != n {
                return Err(FusionError::LengthMismatch {
                    expected: n,
                    found: r.values.len(),
                });
            }
            for (range, w) in ranges.iter_mut().zip(&r.values) {
                range.min = range.min.min(*w);
                range.max = range.max.max(*w);
            }
        }
        if raw.is_empty() {
            ranges.fill(IndicatorRange { min: 0.0, max: 0.0 });
        }
        Ok(NormalizationStats { ranges })
    }

    pub fn indicator_count(&self) -> usize {
        self.ranges.len()
    }
}

/// Min–max mass for one indicator value. A constant indicator
/// (`min == max`) carries no evidence and yields the vacuous mass.
pub fn indicator_bba(w: f64, range: IndicatorRange) -> Result<MassFunction, FusionError> {
    let IndicatorRange { min, max } = range;
    if !(w >= min && w <= max) {
        return Err(FusionError::OutOfRange { value: w, min, max });
    }
    if max == min {
        return Ok(MassFunction::vacuous());
    }
    let span = max - min;
    let influence = (w - min) / span;
    Ok(MassFunction::new(influence, 1.0 - influence, 0.0)?)
}

/// `(1 - c^λ)^(1/λ)`: decreasing in `c` on `[0, 1]`, 1 at 0, 0 at 1.
pub fn reliability_from_distance(c: f64, lambda: f64) -> Reliability {
    let c = c.clamp(0.0, 1.0);
    let alpha = libm::exp(libm::log1p(-libm::pow(c, lambda)) / lambda);
    Reliability::new(alpha.clamp(0.0, 1.0)).expect("clamped into [0, 1]")
}

/// Mean Jousselme distance of each mass to the others (the zero
/// self-distance is part of the sum, the divisor is `n - 1`).
pub fn mean_distances(bbas: &[MassFunction]) -> Result<Vec<f64>, FusionError> {
    let n = bbas.len();
    if n < 2 {
        return Err(FusionError::TooFewIndicators(n));
    }
    let mut sums = vec![0.0; n];
    for j in 0..n {
        for i in (j + 1)..n {
            let d = jousselme_distance(&bbas[j], &bbas[i]);
            sums[j] += d;
            sums[i] += d;
        }
    }
    let denom = (n - 1) as f64;
    Ok(sums.into_iter().map(|s| s / denom).collect())
}

pub fn estimate_reliabilities(
    bbas: &[MassFunction],
    cfg: &ReliabilityConfig,
) -> Result<Vec<Reliability>, FusionError> {
    match cfg.mode {
        AlphaMode::Fixed(alpha) => Ok(vec![alpha; bbas.len()]),
        AlphaMode::Estimated => Ok(mean_distances(bbas)?
            .into_iter()
            .map(|c| reliability_from_distance(c, cfg.lambda))
            .collect()),
    }
}

/// The indicator masses of one edge with their reliabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeBBASet {
    pub edge: EdgeId,
    pub bbas: Vec<MassFunction>,
    pub reliabilities: Vec<Reliability>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInfluence {
    pub edge: EdgeId,
    pub fused: MassFunction,
    pub inf: f64,
}

/// Discounts each mass by its reliability and folds them left to right
/// with Dempster's rule. No indicators means no evidence (vacuous).
pub fn fuse_edge(ebs: &EdgeBBASet) -> Result<EdgeInfluence, FusionError> {
    if ebs.bbas.len() != ebs.reliabilities.len() {
        return Err(FusionError::LengthMismatch {
            expected: ebs.bbas.len(),
            found: ebs.reliabilities.len(),
        });
    }
    let mut fused = MassFunction::vacuous();
    for (m, r) in ebs.bbas.iter().zip(&ebs.reliabilities) {
        fused = combine_dempster(&fused, &discount(m, *r))?;
    }
    Ok(EdgeInfluence {
        edge: ebs.edge,
        fused,
        inf: fused.influence(),
    })
}

/// Everything needed to fuse any single edge independently of the others:
/// raw indicators, normalization ranges and (in global mode) the shared
/// reliabilities. Edges can be fused in any order or concurrently.
#[derive(Debug, Clone)]
pub struct FusionPlan {
    raw: Vec<RawIndicatorVector>,
    endpoints: Vec<(UserId, UserId)>,
    stats: NormalizationStats,
    cfg: ReliabilityConfig,
    global: Option<Vec<Reliability>>,
}

impl FusionPlan {
    pub fn new(g: &SocialGraph, cfg: &ReliabilityConfig) -> Result<Self, FusionError> {
        let endpoints = g.edges().iter().map(|e| (e.src, e.dst)).collect();
        Self::from_raw(
            g.raw_indicators(),
            endpoints,
            crate::graph::INDICATOR_NAMES.len(),
            cfg,
        )
    }

    /// `raw[i]` must describe edge `EdgeId(i)` with endpoints `endpoints[i]`.
    pub fn from_raw(
        raw: Vec<RawIndicatorVector>,
        endpoints: Vec<(UserId, UserId)>,
        n: usize,
        cfg: &ReliabilityConfig,
    ) -> Result<Self, FusionError> {
        if raw.len() != endpoints.len() {
            return Err(FusionError::LengthMismatch {
                expected: raw.len(),
                found: endpoints.len(),
            });
        }
        let stats = NormalizationStats::from_indicators(&raw, n)?;
        let mut plan = FusionPlan {
            raw,
            endpoints,
            stats,
            cfg: *cfg,
            global: None,
        };
        if cfg.mode == AlphaMode::Estimated
            && cfg.granularity == Granularity::GlobalAverage
            && !plan.raw.is_empty()
        {
            let mut totals = vec![0.0; n];
            for e in 0..plan.raw.len() {
                let bbas = plan
                    .bbas(EdgeId(e as u32))
                    .map_err(|err| plan.at_edge(e, err))?;
                let c = mean_distances(&bbas)?;
                for (t, c) in totals.iter_mut().zip(c) {
                    *t += c;
                }
            }
            let edges = plan.raw.len() as f64;
            plan.global = Some(
                totals
                    .into_iter()
                    .map(|t| reliability_from_distance(t / edges, cfg.lambda))
                    .collect(),
            );
        }
        Ok(plan)
    }

    pub fn edge_count(&self) -> usize {
        self.raw.len()
    }

    pub fn stats(&self) -> &NormalizationStats {
        &self.stats
    }

    pub fn config(&self) -> &ReliabilityConfig {
        &self.cfg
    }

    pub fn raw(&self, e: EdgeId) -> &RawIndicatorVector {
        &self.raw[e.index()]
    }

    pub fn endpoints(&self, e: EdgeId) -> (UserId, UserId) {
        self.endpoints[e.index()]
    }

    fn at_edge(&self, e: usize, err: FusionError) -> FusionError {
        let (src, dst) = self.endpoints[e];
        FusionError::AtEdge {
            src,
            dst,
            source: Box::new(err),
        }
    }

    fn bbas(&self, e: EdgeId) -> Result<Vec<MassFunction>, FusionError> {
        self.raw[e.index()]
            .values
            .iter()
            .zip(&self.stats.ranges)
            .map(|(w, range)| indicator_bba(*w, *range))
            .collect()
    }

    pub fn edge_set(&self, e: EdgeId) -> Result<EdgeBBASet, FusionError> {
        let inner = || {
            let bbas = self.bbas(e)?;
            let reliabilities = match &self.global {
                Some(global) => global.clone(),
                None => estimate_reliabilities(&bbas, &self.cfg)?,
            };
            Ok(EdgeBBASet {
                edge: e,
                bbas,
                reliabilities,
            })
        };
        inner().map_err(|err| self.at_edge(e.index(), err))
    }

    pub fn fuse(&self, e: EdgeId) -> Result<EdgeInfluence, FusionError> {
        let set = self.edge_set(e)?;
        fuse_edge(&set).map_err(|err| self.at_edge(e.index(), err))
    }
}

/// Fuses every edge of `g`; the result is indexed by [`EdgeId`].
pub fn fuse_all(
    g: &SocialGraph,
    cfg: &ReliabilityConfig,
) -> Result<Vec<EdgeInfluence>, FusionError> {
    let plan = FusionPlan::new(g, cfg)?;
    (0..plan.edge_count() as u32)
        .map(|e| plan.fuse(EdgeId(e)))
        .collect()
}
