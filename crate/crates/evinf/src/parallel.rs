//! Rayon-backed versions of the embarrassingly parallel stages. Results are
//! identical to the sequential functions in `evinf_core`.

use evinf_core::evaluate::quality_curve;
use evinf_core::maximize::SelectionStats;
use evinf_core::*;
use rayon::prelude::*;

/// [`fuse_all`] with edges fused concurrently.
pub fn fuse_all_par(
    g: &SocialGraph,
    cfg: &ReliabilityConfig,
) -> Result<Vec<EdgeInfluence>, FusionError> {
    let plan = FusionPlan::new(g, cfg)?;
    fuse_plan_par(&plan)
}

pub fn fuse_plan_par(plan: &FusionPlan) -> Result<Vec<EdgeInfluence>, FusionError> {
    (0..plan.edge_count() as u32)
        .into_par_iter()
        .map(|e| plan.fuse(EdgeId(e)))
        .collect()
}

/// [`select_celf`] with the first-round gains evaluated concurrently.
pub fn select_celf_par(
    field: &InfluenceField<'_>,
    k: usize,
) -> Result<(SeedSelection, SelectionStats), MaximizeError> {
    select_celf_with(field, k, |state| {
        let users: Vec<UserId> = state.field().graph().users().collect();
        users.par_iter().map(|&u| state.gain(u)).collect()
    })
}

/// [`run_config`] built on the parallel stages.
pub fn run_config_par(
    g: &SocialGraph,
    activity: &[UserActivity],
    named: &NamedConfig,
    k: usize,
) -> Result<ConfigRun, EvaluateError> {
    let config = || named.name.clone();
    let fused = fuse_all_par(g, &named.config).map_err(|source| EvaluateError::Fusion {
        config: config(),
        source,
    })?;
    let field = InfluenceField::from_fused(g, &fused).map_err(|source| EvaluateError::Spread {
        config: config(),
        source,
    })?;
    let (selection, _) = select_celf_par(&field, k).map_err(|source| EvaluateError::Maximize {
        config: config(),
        source,
    })?;
    let curve = quality_curve(&selection, activity);
    Ok(ConfigRun {
        name: config(),
        config: named.config,
        selection,
        curve,
    })
}

/// [`compare_configs`] with each configuration run on the parallel stages.
pub fn compare_configs_par(
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
        .map(|c| run_config_par(g, activity, c, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComparisonReport { k, runs })
}
