//! Pilot-count sweep: Kolmogorov-Smirnov distance between the received
//! signal under the ideal channel and under the contaminated estimate,
//! averaged over seeds.

use crate::channel::sample_fading;
use crate::engine::config::{EngineError, ExperimentConfig};
use crate::engine::trial::{task_rng, StreamDomain};
use crate::estimation::{
    assign_pilots, beamformed_signal_power, cdf_discrepancy, estimate_channel,
    sample_channel_vector, ChannelVector,
};
use crate::stats::mean_confidence_interval;
use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

/// Mean discrepancy at one pilot count, with a 95% interval over seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotDiscrepancy {
    pub num_pilots: usize,
    pub ks_mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seeds: u64,
}

/// Number of UEs competing for pilots in one seed's population: the typical
/// UE plus a Poisson draw of the UE field over the serving satellite's
/// footprint. Falls back to the configured count when either the UE density
/// or the footprint is degenerate.
fn copilot_population<R: Rng>(config: &ExperimentConfig, rng: &mut R) -> usize {
    let mean = config.region.ue_density_per_km2 * config.shells[0].footprint_area_km2();
    if mean > 0.0 {
        1 + Poisson::new(mean).expect("positive mean").sample(rng) as usize
    } else {
        config.pilots.num_ues.max(1)
    }
}

/// Sweep the pilot grid. Within a seed the same UE population is reused for
/// every pilot count, pairing the comparison along the grid.
pub fn discrepancy_curve(config: &ExperimentConfig) -> Result<Vec<PilotDiscrepancy>, EngineError> {
    config.validate()?;
    let per_seed: Vec<Vec<f64>> = (0..config.pilot_seeds as u64)
        .into_par_iter()
        .map(|seed| {
            let mut rng = task_rng(config.master_seed, StreamDomain::Estimation, seed);
            let num_ues = copilot_population(config, &mut rng);
            config
                .pilot_grid
                .iter()
                .map(|&num_pilots| {
                    let mut ideal = Vec::with_capacity(config.pilot_samples);
                    let mut estimated = Vec::with_capacity(config.pilot_samples);
                    for _ in 0..config.pilot_samples {
                        let assignment = assign_pilots(num_ues, num_pilots, &mut rng);
                        let channels: Vec<ChannelVector> = (0..num_ues)
                            .map(|_| {
                                let power = sample_fading(config.ntn_link.nakagami_m, &mut rng)
                                    .expect("validated m")
                                    .power_gain;
                                sample_channel_vector(config.pilots.antennas, power, &mut rng)
                            })
                            .collect();
                        let estimates = estimate_channel(
                            &channels,
                            &assignment,
                            config.pilots.pilot_snr_db,
                            &mut rng,
                        )
                        .expect("consistent dimensions");
                        ideal.push(beamformed_signal_power(&channels[0], &channels[0]));
                        estimated.push(beamformed_signal_power(&channels[0], &estimates[0]));
                    }
                    cdf_discrepancy(&ideal, &estimated).expect("non-empty samples")
                })
                .collect()
        })
        .collect();

    Ok(config
        .pilot_grid
        .iter()
        .enumerate()
        .map(|(k, &num_pilots)| {
            let values: Vec<f64> = per_seed.iter().map(|row| row[k]).collect();
            let (ks_mean, ci_low, ci_high) = mean_confidence_interval(&values);
            PilotDiscrepancy {
                num_pilots,
                ks_mean,
                ci_low: ci_low.max(0.0),
                ci_high: ci_high.min(1.0),
                seeds: values.len() as u64,
            }
        })
        .collect())
}
