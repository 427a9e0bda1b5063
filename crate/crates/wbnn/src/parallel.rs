//! Multi-threaded runners. Results are identical to the sequential versions
//! in `wbnn_core`, because every task derives its inputs from its own index.

use rayon::prelude::*;
use wbnn_core::density::{self, DensitySampler, RiskSettings, RiskTable};
use wbnn_core::learner::SwarmPlan;
use wbnn_core::{LearnConfig, LearnReport, Result, SampleGrid};

/// One learner per smoothness offset, run concurrently.
pub fn swarm_learn(target: &SampleGrid, base: &LearnConfig, s_offsets: &[f64]) -> Result<Vec<LearnReport>> {
    let plan = SwarmPlan::new(target, base, s_offsets)?;
    (0..plan.members().len())
        .into_par_iter()
        .map(|i| plan.run_member(i, target))
        .collect()
}

/// The risk experiment with replications spread over the thread pool.
pub fn risk_experiment<F>(f_true: F, settings: &RiskSettings) -> Result<RiskTable>
where
    F: Fn(f64) -> f64 + Clone + Sync,
{
    settings.validate()?;
    let sampler = DensitySampler::for_density(f_true.clone(), settings.domain)?;
    let reps = settings.reps;
    let flat: Vec<f64> = (0..settings.n_list.len() * reps)
        .into_par_iter()
        .map(|i| density::replication_ise(&f_true, &sampler, settings, i / reps, i % reps))
        .collect::<Result<_>>()?;
    let ise: Vec<Vec<f64>> = flat.chunks(reps).map(<[f64]>::to_vec).collect();
    Ok(density::summarize(settings, &ise))
}
