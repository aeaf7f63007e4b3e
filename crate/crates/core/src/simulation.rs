//! Seeded Monte Carlo estimation of `P{FDP > gamma}`, FDR and k-FWER.
//!
//! Trials are cut into fixed blocks of [`BLOCK`] consecutive indices. Each
//! block is summed sequentially and block totals are combined in index order
//! with Neumaier summation, so a report depends only on the configuration,
//! the seed and the trial count, never on the worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{build, CriticalSequence, Recipe};
use crate::error::{param, Error, Result};
use crate::metrics::{fdp_exceeds, thm32_bound_event};
use crate::params::ControlParams;
use crate::procedures::{rejection_count, Mode};
use crate::rng::trial_rng;
use crate::scenarios::{Sampler, Scenario};

pub const SCHEMA_VERSION: u32 = 1;
pub const BLOCK: u64 = 1024;

pub const FDP_EXCEEDS: &str = "fdp_exceeds_gamma";
pub const FDR: &str = "fdr";
pub const KFWER: &str = "kfwer";
pub const MEAN_REJECTIONS: &str = "mean_rejections";
pub const THM32_BOUND: &str = "thm32_bound";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub scenario: Scenario,
    pub recipe: Recipe,
    /// Only read by [`Recipe::RescaledCustom`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    pub mode: Mode,
    pub params: ControlParams,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    /// `mean + z se`.
    pub fn upper(&self, z: f64) -> f64 {
        self.mean + z * self.se
    }

    pub fn lower(&self, z: f64) -> f64 {
        self.mean - z * self.se
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub schema_version: u32,
    pub trials: u64,
    pub seed: u64,
    pub scenario: Scenario,
    pub recipe: Recipe,
    pub mode: Mode,
    pub params: ControlParams,
    pub d_used: Option<f64>,
    pub estimates: BTreeMap<String, Estimate>,
}

impl SimulationReport {
    pub fn get(&self, metric: &str) -> Option<Estimate> {
        self.estimates.get(metric).copied()
    }
}

/// Compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    exceeds: u64,
    kfwer: u64,
    thm32: u64,
    rejections: u64,
    rejections_sq: u128,
    fdp: Neumaier,
    fdp_sq: Neumaier,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        self.exceeds += other.exceeds;
        self.kfwer += other.kfwer;
        self.thm32 += other.thm32;
        self.rejections += other.rejections;
        self.rejections_sq += other.rejections_sq;
        self.fdp.add(other.fdp.total());
        self.fdp_sq.add(other.fdp_sq.total());
    }
}

fn event(count: u64, n: u64) -> Estimate {
    let p = count as f64 / n as f64;
    Estimate {
        mean: p,
        se: (p * (1.0 - p) / n as f64).sqrt(),
    }
}

fn sample_mean(sum: f64, sum_sq: f64, n: u64) -> Estimate {
    let nf = n as f64;
    let mean = sum / nf;
    let se = if n > 1 {
        let var = ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    } else {
        0.0
    };
    Estimate { mean, se }
}

struct Trial<'a> {
    sampler: Sampler<'a>,
    constants: &'a CriticalSequence,
    mode: Mode,
    params: ControlParams,
    seed: u64,
}

impl Trial<'_> {
    fn block(&self, start: u64, end: u64) -> Tally {
        let mut tally = Tally::default();
        let true_nulls = self.sampler.scenario().true_nulls();
        let mut sorted: Vec<(f64, bool)> = Vec::with_capacity(self.constants.len());
        let mut ordered: Vec<f64> = Vec::with_capacity(self.constants.len());
        let mut true_vals: Vec<f64> = Vec::with_capacity(true_nulls);
        for n in start..end {
            let mut rng = trial_rng(self.seed, n);
            let smp = self.sampler.draw(&mut rng);
            sorted.clear();
            sorted.extend(
                smp.pvalues
                    .values()
                    .iter()
                    .zip(smp.truth.as_slice())
                    .map(|(p, t)| (*p, *t)),
            );
            // Stable: ties stay in input order, matching `procedures`.
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            ordered.clear();
            ordered.extend(sorted.iter().map(|x| x.0));
            let r = rejection_count(&ordered, &self.constants.values, self.mode);
            let false_rej = sorted[..r].iter().filter(|x| x.1).count();
            let f = if r == 0 {
                0.0
            } else {
                false_rej as f64 / r as f64
            };
            tally.fdp.add(f);
            tally.fdp_sq.add(f * f);
            tally.rejections += r as u64;
            tally.rejections_sq += (r as u128) * (r as u128);
            if false_rej >= self.params.k {
                tally.kfwer += 1;
            }
            if let Some(g) = self.params.gamma {
                if fdp_exceeds(false_rej, r, g) {
                    tally.exceeds += 1;
                }
                true_vals.clear();
                true_vals.extend(sorted.iter().filter(|x| x.1).map(|x| x.0));
                if thm32_bound_event(&true_vals, self.params.alpha, g, self.params.s) {
                    tally.thm32 += 1;
                }
            }
        }
        tally
    }
}

/// Run a simulation with explicitly supplied constants.
pub fn run_with_constants(
    scenario: &Scenario,
    constants: &CriticalSequence,
    mode: Mode,
    trials: u64,
    seed: u64,
    workers: Option<usize>,
) -> Result<SimulationReport> {
    if trials == 0 {
        return param("trials must be at least 1");
    }
    let params = constants.params;
    if scenario.s() != params.s || scenario.s() != constants.len() {
        return Err(Error::Param(format!(
            "scenario {} has s = {} but the constants are for s = {}",
            scenario.name(),
            scenario.s(),
            constants.len()
        )));
    }
    let trial = Trial {
        sampler: scenario.sampler()?,
        constants,
        mode,
        params,
        seed,
    };
    let blocks = trials.div_ceil(BLOCK);
    let compute = || -> Vec<Tally> {
        (0..blocks)
            .into_par_iter()
            .map(|b| trial.block(b * BLOCK, ((b + 1) * BLOCK).min(trials)))
            .collect()
    };
    let tallies = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Param(format!("cannot start worker pool: {e}")))?
            .install(compute),
        None => compute(),
    };
    let mut total = Tally::default();
    for t in &tallies {
        total.merge(t);
    }

    let mut estimates = BTreeMap::new();
    if params.gamma.is_some() {
        estimates.insert(FDP_EXCEEDS.to_string(), event(total.exceeds, trials));
        estimates.insert(THM32_BOUND.to_string(), event(total.thm32, trials));
    }
    estimates.insert(
        FDR.to_string(),
        sample_mean(total.fdp.total(), total.fdp_sq.total(), trials),
    );
    estimates.insert(KFWER.to_string(), event(total.kfwer, trials));
    estimates.insert(
        MEAN_REJECTIONS.to_string(),
        sample_mean(total.rejections as f64, total.rejections_sq as f64, trials),
    );
    Ok(SimulationReport {
        schema_version: SCHEMA_VERSION,
        trials,
        seed,
        scenario: scenario.clone(),
        recipe: constants.recipe,
        mode,
        params,
        d_used: constants.d_used,
        estimates,
    })
}

/// Build the constants for `config.recipe` and run.
pub fn run(config: &SimulationConfig) -> Result<SimulationReport> {
    let constants = build(config.recipe, &config.params, config.deltas.as_deref())?;
    run_with_constants(
        &config.scenario,
        &constants,
        config.mode,
        config.trials,
        config.seed,
        config.workers,
    )
}
