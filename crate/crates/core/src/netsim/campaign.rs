use rayon::prelude::*;

use super::aggregate::{aggregate, AlgorithmSummary};
use super::config::NetworkConfig;
use super::deploy::deploy;
use super::evaluate::{
    evaluate_drop_with_links, evaluate_population_direct, user_links, Algorithm, DropMetrics,
};
use crate::error::{Error, Result};
use crate::pairing::UserPopulation;
use crate::rng::{substream, TAG_DEPLOY};

/// Results of every drop for every requested algorithm.
#[derive(Debug, Clone)]
pub struct Campaign {
    pub config: NetworkConfig,
    pub algorithms: Vec<Algorithm>,
    /// Drop-major: `metrics[d * algorithms.len() + a]`.
    pub metrics: Vec<DropMetrics>,
    /// Empty layouts redrawn over the whole campaign.
    pub resamples: u64,
    pub summaries: Vec<AlgorithmSummary>,
}

impl Campaign {
    pub fn summary(&self, algorithm: Algorithm) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == algorithm)
    }

    pub fn metrics_for(&self, algorithm: Algorithm) -> impl Iterator<Item = &DropMetrics> {
        self.metrics
            .iter()
            .filter(move |m| m.algorithm == algorithm)
    }
}

fn check_algorithms(algorithms: &[Algorithm]) -> Result<()> {
    if algorithms.is_empty() {
        return Err(Error::Config("no algorithm selected".into()));
    }
    Ok(())
}

fn assemble(
    config: &NetworkConfig,
    algorithms: &[Algorithm],
    per_drop: Vec<(u32, Vec<DropMetrics>)>,
) -> Campaign {
    let resamples = per_drop.iter().map(|(r, _)| u64::from(*r)).sum();
    let metrics: Vec<DropMetrics> = per_drop.into_iter().flat_map(|(_, m)| m).collect();
    let summaries = aggregate(&metrics);
    Campaign {
        config: *config,
        algorithms: algorithms.to_vec(),
        metrics,
        resamples,
        summaries,
    }
}

/// Runs `config.drops` independent drops in parallel.
///
/// Drop `d` draws its layout from a stream keyed by `(seed, d)` and results
/// are reduced in drop order, so the outcome is the same for any thread count.
pub fn run_campaign(config: &NetworkConfig, algorithms: &[Algorithm]) -> Result<Campaign> {
    config.validate()?;
    check_algorithms(algorithms)?;
    let per_drop = (0..config.drops as u64)
        .into_par_iter()
        .map(|d| {
            let mut rng = substream(config.seed, &[d, TAG_DEPLOY]);
            let drop = deploy(config, &mut rng)?;
            let links = user_links(&drop, config)?;
            let metrics = algorithms
                .iter()
                .map(|&a| evaluate_drop_with_links(&drop, &links, config, a, d))
                .collect::<Result<Vec<_>>>()?;
            Ok((drop.resamples, metrics))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(config, algorithms, per_drop))
}

/// Campaign over a fixed user population served by a single BS; drops differ
/// only in their phase-error realizations.
pub fn run_direct_campaign(
    population: &UserPopulation,
    config: &NetworkConfig,
    algorithms: &[Algorithm],
) -> Result<Campaign> {
    config.validate()?;
    check_algorithms(algorithms)?;
    let per_drop = (0..config.drops as u64)
        .into_par_iter()
        .map(|d| {
            let metrics = algorithms
                .iter()
                .map(|&a| evaluate_population_direct(population, config, a, d))
                .collect::<Result<Vec<_>>>()?;
            Ok((0, metrics))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(config, algorithms, per_drop))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = NetworkConfig {
            area_km2: 0.25,
            user_density: 400.0,
            drops: 6,
            seed: 77,
            ..NetworkConfig::default()
        };
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_campaign(&cfg, &Algorithm::ALL).unwrap());
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_campaign(&cfg, &Algorithm::ALL).unwrap());
        assert_eq!(one.metrics, many.metrics);
        assert_eq!(one.summaries, many.summaries);
    }

    #[test]
    fn empty_algorithm_list_is_rejected() {
        assert!(run_campaign(&NetworkConfig::default(), &[]).is_err());
    }
}
