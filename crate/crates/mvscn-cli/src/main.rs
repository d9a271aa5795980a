//! Command-line front end: run experiments from config files, sweep
//! parameter grids (including the `fig2`..`fig9` presets), plot result CSVs
//! as SVG, and demo store/query on small hand-written message files.

mod demo;
mod output;
mod presets;
mod runconfig;
mod svg;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use mvscn::experiment::{run_experiment, SweepAxis};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "mvscn",
    about = "Clustered associative memory with multi-valued weights: \
             error-rate experiments, sweeps, plots and demos"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a `key = value` config file and write a CSV row.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path.
        #[arg(long)]
        output: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count.
        #[arg(long)]
        trials: Option<usize>,
        /// Size of the worker thread pool (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Sweep one parameter (from a config file plus --axis/--values, or a
    /// --preset grid) and write a CSV row per point.
    Sweep {
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Axis to vary: density, deletion_rate, addition_rate, w_max, iterations.
        #[arg(long, requires = "config")]
        axis: Option<String>,
        /// Comma-separated axis values, e.g. `0,0.1,0.2`.
        #[arg(long, requires = "axis")]
        values: Option<String>,
        /// Canned grid: fig2, fig3, fig4, fig5, fig6, fig7, fig8 or fig9.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        output: PathBuf,
        /// Master seed (preset default: 1).
        #[arg(long)]
        seed: Option<u64>,
        /// Pin the trial count per point instead of auto-sizing it.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Render a result CSV as a self-contained SVG line chart.
    Plot {
        /// CSV produced by `run` or `sweep`.
        #[arg(long)]
        input: PathBuf,
        /// Column for the x axis.
        #[arg(long)]
        x: String,
        /// Comma-separated columns whose value combinations define the series.
        #[arg(long, default_value = "")]
        series: String,
        /// Column for the y axis (log scale when it is `mer`).
        #[arg(long, default_value = "mer")]
        y: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Store messages from a text file, then decode erased queries.
    Demo {
        /// Messages to store: one per line, whitespace-separated symbols.
        #[arg(long)]
        store: PathBuf,
        /// Queries: same format, `?` for an erased sub-message.
        #[arg(long)]
        query: PathBuf,
        #[arg(long, default_value = "II")]
        arch: String,
        #[arg(long, default_value_t = 1)]
        w_max: u32,
        #[arg(long, default_value_t = 4)]
        iterations: usize,
        /// Nodes per cluster; default: smallest size fitting the files.
        #[arg(long)]
        cluster_size: Option<usize>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            output,
            seed,
            trials,
            threads,
        } => in_pool(threads, || cmd_run(&config, &output, seed, trials)),
        Command::Sweep {
            config,
            axis,
            values,
            preset,
            output,
            seed,
            trials,
            threads,
        } => in_pool(threads, || {
            cmd_sweep(config, axis, values, preset, &output, seed, trials)
        }),
        Command::Plot {
            input,
            x,
            series,
            y,
            output,
        } => cmd_plot(&input, &x, &series, &y, &output),
        Command::Demo {
            store,
            query,
            arch,
            w_max,
            iterations,
            cluster_size,
        } => {
            let opts = demo::DemoOptions {
                arch: arch.parse()?,
                w_max,
                iterations,
                cluster_size,
            };
            print!("{}", demo::run_demo(&store, &query, &opts)?);
            Ok(())
        }
    }
}

/// Runs `f` inside a dedicated rayon pool when a thread count is given.
fn in_pool(threads: Option<usize>, f: impl FnOnce() -> Result<()> + Send) -> Result<()> {
    match threads {
        None => f(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building thread pool")?;
            pool.install(f)
        }
    }
}

fn cmd_run(
    config: &std::path::Path,
    output: &std::path::Path,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<()> {
    let parsed = runconfig::parse_config_file(config)?;
    let mut spec = parsed.spec;
    if let Some(s) = seed {
        spec.master_seed = s;
    }
    if let Some(t) = trials {
        spec.trials = t;
    }
    spec.validate()?;

    let result = run_experiment(&spec)?;
    eprintln!(
        "{} queries, {} errors, mer {:.6}, density {:.4}",
        result.queries, result.errors, result.mer, result.density_measured_mean
    );
    let csv = output::to_csv(&[output::record(&spec, &result)])?;
    std::fs::write(output, csv).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: Option<PathBuf>,
    axis: Option<String>,
    values: Option<String>,
    preset: Option<String>,
    output: &std::path::Path,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<()> {
    let mut trials_override = trials;
    let groups: Vec<presets::SweepGroup> = match (&preset, &config) {
        (Some(name), None) => presets::expand(name, seed.unwrap_or(1))?,
        (None, Some(path)) => {
            let parsed = runconfig::parse_config_file(path)?;
            // a trial count pinned in the config applies to every point
            trials_override = trials.or(parsed.explicit_trials);
            let mut base = parsed.spec;
            if let Some(s) = seed {
                base.master_seed = s;
            }
            let axis: SweepAxis = axis
                .as_deref()
                .context("--axis is required with --config")?
                .parse()?;
            let values = parse_values(values.as_deref().context("--values is required")?)?;
            vec![presets::SweepGroup { base, axis, values }]
        }
        (Some(_), Some(_)) => bail!("give either --preset or --config, not both"),
        (None, None) => bail!("give either --preset or --config"),
    };

    let total: usize = groups.iter().map(|g| g.values.len()).sum();
    let mut rows = Vec::with_capacity(total);
    let mut done = 0;
    for group in &groups {
        for &value in &group.values {
            let spec = presets::point_spec(
                &group.base,
                group.axis,
                value,
                trials_override,
                runconfig::DEFAULT_MIN_QUERIES,
            )?;
            let result = run_experiment(&spec)?;
            done += 1;
            eprintln!(
                "[{done}/{total}] arch={} w_max={} it={} {}={value}: mer {:.6} \
                 ({} queries)",
                spec.arch,
                spec.config.max_weight(),
                spec.iterations,
                group.axis,
                result.mer,
                result.queries
            );
            rows.push(output::record(&spec, &result));
        }
    }

    let csv = output::to_csv(&rows)?;
    std::fs::write(output, csv).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn parse_values(spec: &str) -> Result<Vec<f64>> {
    let values: Vec<f64> = spec
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("bad axis value {tok:?}"))
        })
        .collect::<Result<_>>()?;
    if values.is_empty() {
        bail!("no axis values given");
    }
    Ok(values)
}

fn cmd_plot(
    input: &std::path::Path,
    x: &str,
    series: &str,
    y: &str,
    output: &std::path::Path,
) -> Result<()> {
    let table = output::ResultTable::read(input)?;
    let series_columns: Vec<String> = series
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    let series = svg::build_series(&table, x, y, &series_columns)?;
    let chart = svg::render_line_chart(&format!("{y} vs {x}"), x, y, y == "mer", &series)?;
    std::fs::write(output, chart).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}
