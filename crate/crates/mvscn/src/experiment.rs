//! Seeded Monte-Carlo harness for message-error-rate measurements.
//!
//! A trial builds a fresh network, stores a batch of distinct random
//! messages, deletes a fraction of them, optionally stores fresh additions,
//! then queries every retained message once with part of it erased. A query
//! counts as an error unless decoding yields exactly the original message.
//!
//! Reproducibility: trial `t` of a run draws everything from a ChaCha8
//! generator keyed by the master seed with `t` as the stream number, so
//! results are bit-identical no matter how trials are scheduled across
//! threads. Deletion and addition counts use `floor(rate * M)`; the number
//! of erased sub-messages per query is `round(ce * c)`.

use crate::codec::{activation_to_message, erase, local_decode, Retrieved};
use crate::config::NetworkConfig;
use crate::decoding::{Arch, Decoder};
use crate::error::{Error, Result};
use crate::learning;
use crate::message::{Message, PartialMessage};
use crate::weights::WeightMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// How many messages to load into the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Load {
    /// Store exactly this many messages.
    Count(usize),
    /// Store however many messages the density law says will reach this
    /// density.
    DensityTarget(f64),
}

/// Full description of one experiment point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub config: NetworkConfig,
    pub load: Load,
    /// Fraction of sub-messages erased per query (`ce`).
    pub erasure_fraction: f64,
    /// Fraction of the stored batch deleted before querying.
    pub deletion_rate: f64,
    /// Fraction of the batch size stored as fresh messages after deletion.
    pub addition_rate: f64,
    /// Decode iteration cap.
    pub iterations: usize,
    pub arch: Arch,
    /// Independent network instantiations.
    pub trials: usize,
    pub master_seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.erasure_fraction) {
            return Err(Error::InvalidSpec(format!(
                "erasure fraction {} outside [0, 1]",
                self.erasure_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.deletion_rate) {
            return Err(Error::InvalidSpec(format!(
                "deletion rate {} outside [0, 1]",
                self.deletion_rate
            )));
        }
        if !self.addition_rate.is_finite() || self.addition_rate < 0.0 {
            return Err(Error::InvalidSpec(format!(
                "addition rate {} must be finite and >= 0",
                self.addition_rate
            )));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidSpec("iterations must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be >= 1".into()));
        }
        let m = self.resolved_message_count()?;
        let additions = (self.addition_rate * m as f64).floor() as usize;
        let needed = m + additions;
        let space = message_space(&self.config);
        if needed as u128 > space {
            return Err(Error::MessageSpaceExhausted {
                requested: needed,
                space,
            });
        }
        Ok(())
    }

    /// Message count after resolving a density target.
    pub fn resolved_message_count(&self) -> Result<usize> {
        match self.load {
            Load::Count(m) => Ok(m),
            Load::DensityTarget(d) => {
                let m = learning::messages_for_density(d, self.config.cluster_size())?;
                Ok(m as usize)
            }
        }
    }

    pub fn density_target(&self) -> Option<f64> {
        match self.load {
            Load::DensityTarget(d) => Some(d),
            Load::Count(_) => None,
        }
    }

    fn deletion_count_for(&self, m: usize) -> usize {
        (self.deletion_rate * m as f64).floor() as usize
    }

    /// Queries each trial will issue: survivors plus additions.
    pub fn queries_per_trial(&self) -> Result<usize> {
        let m = self.resolved_message_count()?;
        Ok(m.saturating_sub(self.deletion_count_for(m))
            + (self.addition_rate * m as f64).floor() as usize)
    }

    /// Trial count needed to pool at least `min_queries` queries.
    pub fn trials_for_queries(&self, min_queries: usize) -> Result<usize> {
        let per = self.queries_per_trial()?;
        if per == 0 {
            return Ok(1);
        }
        Ok(min_queries.div_ceil(per).max(1))
    }
}

/// Tallies from one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub trial: usize,
    pub queries: u64,
    pub errors: u64,
    pub density_after: f64,
}

impl TrialStats {
    /// Error fraction; 0 when the trial issued no queries.
    pub fn mer(&self) -> f64 {
        if self.queries == 0 {
            0.0
        } else {
            self.errors as f64 / self.queries as f64
        }
    }
}

/// Pooled tallies across all trials of a spec.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub message_count: usize,
    pub queries: u64,
    pub errors: u64,
    /// Pooled error fraction over all queries.
    pub mer: f64,
    /// Standard error of the per-trial MERs around their mean.
    pub std_error: f64,
    pub density_measured_mean: f64,
    pub trials: Vec<TrialStats>,
}

/// Per-trial random stream: ChaCha8 keyed by the master seed, one stream per
/// trial index.
pub fn trial_rng(master_seed: u64, trial_index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index as u64);
    rng
}

fn message_space(config: &NetworkConfig) -> u128 {
    let l = config.cluster_size() as u128;
    let mut space: u128 = 1;
    for _ in 0..config.clusters() {
        space = space.saturating_mul(l);
    }
    space
}

/// Draws `count` pairwise-distinct uniform messages.
pub fn generate_messages<R: Rng>(
    count: usize,
    config: &NetworkConfig,
    rng: &mut R,
) -> Result<Vec<Message>> {
    let space = message_space(config);
    if count as u128 > space {
        return Err(Error::MessageSpaceExhausted {
            requested: count,
            space,
        });
    }
    let l = config.cluster_size() as u16;
    let mut seen: HashSet<Vec<u16>> = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let symbols: Vec<u16> = (0..config.clusters())
            .map(|_| rng.gen_range(0..l))
            .collect();
        if seen.insert(symbols.clone()) {
            out.push(Message::from_symbols_unchecked(symbols));
        }
    }
    Ok(out)
}

/// A network after its store/delete/add schedule, ready to be queried.
pub struct PreparedTrial {
    pub net: WeightMatrix,
    /// Messages still expected to be retrievable: survivors of the deletion
    /// step followed by the fresh additions.
    pub retained: Vec<Message>,
    rng: ChaCha8Rng,
}

impl PreparedTrial {
    /// One erased query per retained message, in retained order, drawn from
    /// the trial's random stream.
    pub fn make_queries(&mut self, erasure_fraction: f64) -> Vec<PartialMessage> {
        self.retained
            .iter()
            .map(|msg| erase(msg, erasure_fraction, &mut self.rng))
            .collect()
    }
}

/// Runs the schedule of a trial: store, delete, add.
pub fn prepare_trial(spec: &ExperimentSpec, trial_index: usize) -> Result<PreparedTrial> {
    let m = spec.resolved_message_count()?;
    let mut rng = trial_rng(spec.master_seed, trial_index);

    let messages = generate_messages(m, &spec.config, &mut rng)?;
    let mut net = WeightMatrix::new(spec.config);
    for msg in &messages {
        learning::store(&mut net, msg)?;
    }

    let delete_count = spec.deletion_count_for(m);
    let mut deleted = vec![false; m];
    for idx in rand::seq::index::sample(&mut rng, m, delete_count) {
        learning::delete(&mut net, &messages[idx])?;
        deleted[idx] = true;
    }
    let mut retained: Vec<Message> = messages
        .iter()
        .zip(&deleted)
        .filter(|(_, &d)| !d)
        .map(|(msg, _)| msg.clone())
        .collect();

    let addition_count = (spec.addition_rate * m as f64).floor() as usize;
    if addition_count > 0 {
        let space = message_space(&spec.config);
        if (retained.len() + addition_count) as u128 > space {
            return Err(Error::MessageSpaceExhausted {
                requested: retained.len() + addition_count,
                space,
            });
        }
        let l = spec.config.cluster_size() as u16;
        let mut seen: HashSet<Vec<u16>> = retained.iter().map(|m| m.symbols().to_vec()).collect();
        let mut fresh = Vec::with_capacity(addition_count);
        while fresh.len() < addition_count {
            let symbols: Vec<u16> = (0..spec.config.clusters())
                .map(|_| rng.gen_range(0..l))
                .collect();
            if seen.insert(symbols.clone()) {
                fresh.push(Message::from_symbols_unchecked(symbols));
            }
        }
        for msg in &fresh {
            learning::store(&mut net, msg)?;
        }
        retained.extend(fresh);
    }

    Ok(PreparedTrial { net, retained, rng })
}

/// Runs one full trial and tallies its errors.
pub fn run_trial(spec: &ExperimentSpec, trial_index: usize) -> Result<TrialStats> {
    let mut trial = prepare_trial(spec, trial_index)?;
    let queries = trial.make_queries(spec.erasure_fraction);
    let decoder = Decoder::new(&trial.net, spec.arch);
    let config = *trial.net.config();

    let mut errors = 0u64;
    for (msg, pm) in trial.retained.iter().zip(&queries) {
        let initial = local_decode(pm, &config);
        let result = decoder.decode(&initial, spec.iterations);
        match activation_to_message(&result.final_state, &config) {
            Retrieved::Message(got) if got == *msg => {}
            _ => errors += 1,
        }
    }

    Ok(TrialStats {
        trial: trial_index,
        queries: trial.retained.len() as u64,
        errors,
        density_after: learning::density_measured(&trial.net),
    })
}

/// Runs all trials of a spec (in parallel) and pools the tallies.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let trials: Vec<TrialStats> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, t))
        .collect::<Result<Vec<_>>>()?;

    let queries: u64 = trials.iter().map(|t| t.queries).sum();
    let errors: u64 = trials.iter().map(|t| t.errors).sum();
    let mer = if queries == 0 {
        0.0
    } else {
        errors as f64 / queries as f64
    };

    let n = trials.len() as f64;
    let mean = trials.iter().map(|t| t.mer()).sum::<f64>() / n;
    let std_error = if trials.len() < 2 {
        0.0
    } else {
        let var = trials.iter().map(|t| (t.mer() - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };
    let density_measured_mean = trials.iter().map(|t| t.density_after).sum::<f64>() / n;

    Ok(ExperimentResult {
        message_count: spec.resolved_message_count()?,
        queries,
        errors,
        mer,
        std_error,
        density_measured_mean,
        trials,
    })
}

/// Parameter the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Density,
    DeletionRate,
    AdditionRate,
    MaxWeight,
    Iterations,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Density => "density",
            SweepAxis::DeletionRate => "deletion_rate",
            SweepAxis::AdditionRate => "addition_rate",
            SweepAxis::MaxWeight => "w_max",
            SweepAxis::Iterations => "iterations",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(SweepAxis::Density),
            "deletion_rate" => Ok(SweepAxis::DeletionRate),
            "addition_rate" => Ok(SweepAxis::AdditionRate),
            "w_max" => Ok(SweepAxis::MaxWeight),
            "iterations" => Ok(SweepAxis::Iterations),
            other => Err(Error::InvalidSpec(format!("unknown sweep axis {other:?}"))),
        }
    }
}

/// `base` with the axis set to `value`. Checks the value against the axis's
/// own range; full spec validation happens when the experiment runs.
pub fn apply_axis(base: &ExperimentSpec, axis: SweepAxis, value: f64) -> Result<ExperimentSpec> {
    let mut spec = base.clone();
    match axis {
        SweepAxis::Density => {
            if !(0.0..1.0).contains(&value) {
                return Err(Error::InvalidSpec(format!(
                    "density value {value} outside [0, 1)"
                )));
            }
            spec.load = Load::DensityTarget(value);
        }
        SweepAxis::DeletionRate => {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidSpec(format!(
                    "deletion rate value {value} outside [0, 1]"
                )));
            }
            spec.deletion_rate = value;
        }
        SweepAxis::AdditionRate => {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "addition rate value {value} must be finite and >= 0"
                )));
            }
            spec.addition_rate = value;
        }
        SweepAxis::MaxWeight => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "w_max value {value} must be an integer >= 1"
                )));
            }
            spec.config = NetworkConfig::new(
                base.config.clusters(),
                base.config.cluster_size(),
                value as u32,
            )?
            .with_memory_effect(base.config.memory_effect())
            .with_wta_threshold(base.config.wta_threshold());
        }
        SweepAxis::Iterations => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "iterations value {value} must be an integer >= 1"
                )));
            }
            spec.iterations = value as usize;
        }
    }
    Ok(spec)
}

/// One sweep point with its spec echo and pooled result.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub spec: ExperimentSpec,
    pub result: ExperimentResult,
}

/// Runs the experiment once per axis value, all other parameters fixed.
pub fn sweep(base: &ExperimentSpec, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&value| {
            let spec = apply_axis(base, axis, value)?;
            let result = run_experiment(&spec)?;
            Ok(SweepRow {
                axis,
                value,
                spec,
                result,
            })
        })
        .collect()
}

/// Binary-weighted counterpart with the same memory budget and the same
/// message count: `w_max = 1` and the cluster size grown by the square root
/// of the original weight bit width.
pub fn equal_memory_binary_spec(spec: &ExperimentSpec) -> Result<ExperimentSpec> {
    let bits = spec.config.weight_bits();
    if bits < 2 {
        return Err(Error::InvalidSpec(
            "equal-memory baseline requires a multi-bit weight config".into(),
        ));
    }
    let scaled = (spec.config.cluster_size() as f64 * (bits as f64).sqrt()).round() as usize;
    let message_count = spec.resolved_message_count()?;
    let config = NetworkConfig::new(spec.config.clusters(), scaled, 1)?
        .with_memory_effect(spec.config.memory_effect())
        .with_wta_threshold(spec.config.wta_threshold());
    Ok(ExperimentSpec {
        config,
        load: Load::Count(message_count),
        ..spec.clone()
    })
}
