//! Minimal self-contained SVG line charts for result CSVs.
//!
//! No external assets: everything is inline SVG elements with system font
//! families. When the y column is plotted logarithmically, zero values are
//! drawn at half the smallest positive value in the data (the floor is also
//! printed in the axis label so readers know it is synthetic).

use crate::output::ResultTable;
use anyhow::{bail, Context, Result};

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a",
];

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 230.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

/// Groups CSV rows into one series per distinct combination of the series
/// columns, in first-appearance order.
pub fn build_series(
    table: &ResultTable,
    x_column: &str,
    y_column: &str,
    series_columns: &[String],
) -> Result<Vec<Series>> {
    let xi = table.column(x_column)?;
    let yi = table.column(y_column)?;
    let group_idx: Vec<usize> = series_columns
        .iter()
        .map(|c| table.column(c))
        .collect::<Result<_>>()?;

    let mut order: Vec<String> = Vec::new();
    let mut grouped: std::collections::HashMap<String, Vec<(f64, f64)>> = Default::default();
    for row in &table.rows {
        let label = if group_idx.is_empty() {
            y_column.to_string()
        } else {
            group_idx
                .iter()
                .zip(series_columns)
                .map(|(&i, name)| format!("{name}={}", row[i]))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let x: f64 = row[xi]
            .parse()
            .with_context(|| format!("non-numeric {x_column} value {:?}", row[xi]))?;
        let y: f64 = row[yi]
            .parse()
            .with_context(|| format!("non-numeric {y_column} value {:?}", row[yi]))?;
        if !grouped.contains_key(&label) {
            order.push(label.clone());
        }
        grouped.entry(label).or_default().push((x, y));
    }

    Ok(order
        .into_iter()
        .map(|label| {
            let mut points = grouped.remove(&label).unwrap();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series { label, points }
        })
        .collect())
}

pub fn render_line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_y: bool,
    series: &[Series],
) -> Result<String> {
    if series.iter().all(|s| s.points.is_empty()) {
        bail!("nothing to plot");
    }

    let xs: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .collect();
    let ys: Vec<f64> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .collect();
    let (x_min, x_max) = padded_range(&xs, false)?;

    // floor for zeros on a log axis
    let floor = if log_y {
        let smallest_positive = ys
            .iter()
            .copied()
            .filter(|&y| y > 0.0)
            .fold(f64::INFINITY, f64::min);
        if !smallest_positive.is_finite() {
            bail!("log-scale plot needs at least one positive value");
        }
        Some(smallest_positive / 2.0)
    } else {
        None
    };
    let mapped_ys: Vec<f64> = ys
        .iter()
        .map(|&y| match floor {
            Some(fl) => y.max(fl).log10(),
            None => y,
        })
        .collect();
    let (y_min, y_max) = padded_range(&mapped_ys, log_y)?;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| {
        let v = match floor {
            Some(fl) => y.max(fl).log10(),
            None => y,
        };
        MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    ));

    // axes
    out.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>\n"
    ));

    // y ticks
    if log_y {
        let lo = y_min.floor() as i32;
        let hi = y_max.ceil() as i32;
        for exp in lo..=hi {
            let v = exp as f64;
            if v < y_min - 1e-9 || v > y_max + 1e-9 {
                continue;
            }
            let y = MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;
            out.push_str(&format!(
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
                 stroke=\"#dddddd\"/>\n",
                MARGIN_LEFT + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"end\">1e{exp}</text>\n",
                MARGIN_LEFT - 8.0,
                y + 4.0
            ));
        }
    } else {
        for k in 0..=5 {
            let v = y_min + (y_max - y_min) * k as f64 / 5.0;
            let y = MARGIN_TOP + (y_max - v) / (y_max - y_min) * plot_h;
            out.push_str(&format!(
                "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
                 stroke=\"#dddddd\"/>\n",
                MARGIN_LEFT + plot_w
            ));
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
                 text-anchor=\"end\">{}</text>\n",
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(v)
            ));
        }
    }

    // x ticks
    for k in 0..=6 {
        let v = x_min + (x_max - x_min) * k as f64 / 6.0;
        let x = sx(v);
        out.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        out.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" \
             text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 20.0,
            tick_label(v)
        ));
    }

    // axis labels
    out.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    ));
    let y_title = match floor {
        Some(fl) => format!("{y_label} (log scale; zeros drawn at {fl:.2e})"),
        None => y_label.to_string(),
    };
    out.push_str(&format!(
        "<text x=\"22\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"14\" \
         text-anchor=\"middle\" transform=\"rotate(-90 22 {:.1})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(&y_title)
    ));

    // series
    for (k, s) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            coords.join(" ")
        ));
        for &(x, y) in &s.points {
            out.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        // legend entry
        let ly = MARGIN_TOP + 14.0 + k as f64 * 20.0;
        let lx = WIDTH - MARGIN_RIGHT + 16.0;
        out.push_str(&format!(
            "<line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            lx + 22.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
            lx + 28.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }

    out.push_str("</svg>\n");
    Ok(out)
}

fn padded_range(values: &[f64], already_log: bool) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !v.is_finite() {
            bail!("non-finite value in plot data");
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        bail!("nothing to plot");
    }
    if lo == hi {
        let pad = if already_log {
            0.5
        } else {
            lo.abs().max(1.0) * 0.1
        };
        return Ok((lo - pad, hi + pad));
    }
    let pad = (hi - lo) * 0.05;
    Ok((lo - pad, hi + pad))
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(0.01..1000.0).contains(&a) {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
