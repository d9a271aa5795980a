//! Canned sweep grids (`fig2` .. `fig9`), one per reproduced figure.
//!
//! All presets share the reference network: 8 clusters of 16 nodes at a 0.4
//! density target with half of each query's sub-messages erased, except
//! where the grid itself varies those values. `fig8`/`fig9` pair the 2-bit
//! weight network with its equal-memory binary counterpart (cluster size 23,
//! same message count).

use anyhow::{bail, Result};
use mvscn::experiment::{apply_axis, equal_memory_binary_spec};
use mvscn::{Arch, ExperimentSpec, Load, NetworkConfig, SweepAxis};

/// One sweep to execute: a base spec, the axis to vary, and its values.
pub struct SweepGroup {
    pub base: ExperimentSpec,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

pub const PRESET_NAMES: [&str; 8] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9",
];

fn base_spec(w_max: u32, arch: Arch, iterations: usize, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        config: NetworkConfig::new(8, 16, w_max).unwrap(),
        load: Load::DensityTarget(0.4),
        erasure_fraction: 0.5,
        deletion_rate: 0.0,
        addition_rate: 0.0,
        iterations,
        arch,
        trials: 0, // resolved per point by the caller
        master_seed: seed,
    }
}

fn density_values() -> Vec<f64> {
    (1..=7).map(|k| k as f64 / 10.0).collect()
}

fn deletion_values() -> Vec<f64> {
    (0..=9).map(|k| k as f64 / 10.0).collect()
}

fn w_max_values() -> Vec<f64> {
    (1..=8).map(|k| k as f64).collect()
}

/// Expands a preset name into its sweep groups.
pub fn expand(name: &str, seed: u64) -> Result<Vec<SweepGroup>> {
    let mut groups = Vec::new();
    match name {
        // density vs error rate, no deletions: arch x w_max x iterations grid
        "fig2" => {
            for arch in Arch::ALL {
                for w_max in [1, 3] {
                    for iterations in [1, 4] {
                        groups.push(SweepGroup {
                            base: base_spec(w_max, arch, iterations, seed),
                            axis: SweepAxis::Density,
                            values: density_values(),
                        });
                    }
                }
            }
        }
        // deletion-rate sweep for the normalized max-score rule
        "fig3" => {
            for w_max in [1, 3] {
                for iterations in [1, 4] {
                    groups.push(SweepGroup {
                        base: base_spec(w_max, Arch::II, iterations, seed),
                        axis: SweepAxis::DeletionRate,
                        values: deletion_values(),
                    });
                }
            }
        }
        // weight-cap sweep at deletion 0.5, without and with re-additions
        "fig4" | "fig5" => {
            let addition = if name == "fig5" { 0.5 } else { 0.0 };
            for arch in Arch::ALL {
                let mut base = base_spec(1, arch, 4, seed);
                base.deletion_rate = 0.5;
                base.addition_rate = addition;
                groups.push(SweepGroup {
                    base,
                    axis: SweepAxis::MaxWeight,
                    values: w_max_values(),
                });
            }
        }
        // deletion-rate sweep across all rules at a fixed iteration count
        "fig6" | "fig7" => {
            let iterations = if name == "fig7" { 4 } else { 1 };
            for arch in Arch::ALL {
                for w_max in [1, 3] {
                    groups.push(SweepGroup {
                        base: base_spec(w_max, arch, iterations, seed),
                        axis: SweepAxis::DeletionRate,
                        values: deletion_values(),
                    });
                }
            }
        }
        // multi-valued network vs equal-memory binary baseline
        "fig8" | "fig9" => {
            let arch = if name == "fig9" { Arch::III } else { Arch::II };
            let multi = base_spec(3, arch, 4, seed);
            let baseline = equal_memory_binary_spec(&multi)?;
            for base in [multi, baseline] {
                groups.push(SweepGroup {
                    base,
                    axis: SweepAxis::DeletionRate,
                    values: deletion_values(),
                });
            }
        }
        other => bail!(
            "unknown preset {other:?} (expected one of {})",
            PRESET_NAMES.join(", ")
        ),
    }
    Ok(groups)
}

/// Fills in the trial count for one sweep point: explicit override, else
/// enough trials to pool `min_queries` queries.
pub fn point_spec(
    base: &ExperimentSpec,
    axis: SweepAxis,
    value: f64,
    trials_override: Option<usize>,
    min_queries: usize,
) -> Result<ExperimentSpec> {
    let mut spec = apply_axis(base, axis, value)?;
    spec.trials = match trials_override {
        Some(t) => t,
        None => spec.trials_for_queries(min_queries)?,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_expand() {
        for name in PRESET_NAMES {
            let groups = expand(name, 1).unwrap();
            assert!(!groups.is_empty(), "{name} expanded to nothing");
        }
        assert!(expand("fig1", 1).is_err());
    }

    #[test]
    fn fig3_grid_shape() {
        let groups = expand("fig3", 1).unwrap();
        assert_eq!(groups.len(), 4); // w_max {1,3} x iterations {1,4}
        for g in &groups {
            assert_eq!(g.base.arch, Arch::II);
            assert_eq!(g.values.len(), 10);
        }
    }

    #[test]
    fn fig8_pairs_equal_memory_networks() {
        let groups = expand("fig8", 1).unwrap();
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0].base.config.max_weight(), 3);
        assert_eq!(groups[0].base.config.cluster_size(), 16);
        assert_eq!(groups[1].base.config.max_weight(), 1);
        assert_eq!(groups[1].base.config.cluster_size(), 23);
        assert_eq!(groups[1].base.load, Load::Count(131));
    }

    #[test]
    fn point_spec_resolves_trials() {
        let groups = expand("fig3", 1).unwrap();
        let spec = point_spec(&groups[0].base, groups[0].axis, 0.5, None, 1000).unwrap();
        // 131 stored, 65 deleted -> 66 queries per trial
        assert_eq!(spec.trials, 16);
        let fixed = point_spec(&groups[0].base, groups[0].axis, 0.5, Some(3), 1000).unwrap();
        assert_eq!(fixed.trials, 3);
    }
}
