//! The fixed CSV result schema, shared by `run` and `sweep`.

use anyhow::{bail, Context, Result};
use mvscn::{ExperimentResult, ExperimentSpec};
use std::collections::HashMap;
use std::path::Path;

/// Column order is part of the output contract; do not reorder.
pub const COLUMNS: [&str; 17] = [
    "arch",
    "c",
    "l",
    "w_max",
    "M",
    "density_target",
    "density_measured_mean",
    "ce",
    "deletion_rate",
    "addition_rate",
    "iterations",
    "trials",
    "queries",
    "errors",
    "mer",
    "stderr",
    "seed",
];

pub fn record(spec: &ExperimentSpec, result: &ExperimentResult) -> Vec<String> {
    vec![
        spec.arch.to_string(),
        spec.config.clusters().to_string(),
        spec.config.cluster_size().to_string(),
        spec.config.max_weight().to_string(),
        result.message_count.to_string(),
        spec.density_target()
            .map(|d| d.to_string())
            .unwrap_or_default(),
        result.density_measured_mean.to_string(),
        spec.erasure_fraction.to_string(),
        spec.deletion_rate.to_string(),
        spec.addition_rate.to_string(),
        spec.iterations.to_string(),
        spec.trials.to_string(),
        result.queries.to_string(),
        result.errors.to_string(),
        result.mer.to_string(),
        result.std_error.to_string(),
        spec.master_seed.to_string(),
    ]
}

/// Serializes header plus rows; the whole body is built in memory so a
/// failed run never leaves a partial file behind.
pub fn to_csv(rows: &[Vec<String>]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(COLUMNS)?;
    for row in rows {
        writer.write_record(row)?;
    }
    let bytes = writer.into_inner().context("flush csv")?;
    String::from_utf8(bytes).context("csv is not utf-8")
}

/// A parsed result CSV: header map plus string rows.
pub struct ResultTable {
    pub header: HashMap<String, usize>,
    pub rows: Vec<Vec<String>>,
}

impl ResultTable {
    pub fn read(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let header: HashMap<String, usize> = reader
            .headers()?
            .iter()
            .enumerate()
            .map(|(i, name)| (name.to_string(), i))
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            bail!("{} has no data rows", path.display());
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.header
            .get(name)
            .copied()
            .with_context(|| format!("missing column {name:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mvscn::{Arch, ExperimentSpec, Load, NetworkConfig};

    #[test]
    fn rows_follow_the_schema() {
        let spec = ExperimentSpec {
            config: NetworkConfig::new(8, 16, 3).unwrap(),
            load: Load::DensityTarget(0.4),
            erasure_fraction: 0.5,
            deletion_rate: 0.0,
            addition_rate: 0.0,
            iterations: 4,
            arch: Arch::II,
            trials: 2,
            master_seed: 1,
        };
        let result = mvscn::run_experiment(&spec).unwrap();
        let row = record(&spec, &result);
        assert_eq!(row.len(), COLUMNS.len());
        assert_eq!(row[0], "II");
        assert_eq!(row[3], "3");
        assert_eq!(row[5], "0.4");

        let csv = to_csv(&[row]).unwrap();
        assert!(csv.starts_with("arch,c,l,w_max,M,density_target,"));
        assert_eq!(csv.lines().count(), 2);
    }
}
