//! Small end-to-end demo: store messages from one text file, decode erased
//! queries from another, print what comes back.

use anyhow::{bail, Context, Result};
use mvscn::{
    activation_to_message, learning, local_decode, Arch, Decoder, Message, NetworkConfig,
    PartialMessage, Retrieved, WeightMatrix,
};
use std::path::Path;

pub struct DemoOptions {
    pub arch: Arch,
    pub w_max: u32,
    pub iterations: usize,
    pub cluster_size: Option<usize>,
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

pub fn run_demo(store_path: &Path, query_path: &Path, opts: &DemoOptions) -> Result<String> {
    let store_text = std::fs::read_to_string(store_path)
        .with_context(|| format!("cannot read {}", store_path.display()))?;
    let query_text = std::fs::read_to_string(query_path)
        .with_context(|| format!("cannot read {}", query_path.display()))?;
    let store_lines = data_lines(&store_text);
    let query_lines = data_lines(&query_text);
    if store_lines.is_empty() {
        bail!("{} holds no messages", store_path.display());
    }

    let clusters = store_lines[0].split_whitespace().count();
    let cluster_size = match opts.cluster_size {
        Some(l) => l,
        None => {
            // smallest cluster that fits every symbol mentioned anywhere
            let max_symbol = store_lines
                .iter()
                .chain(&query_lines)
                .flat_map(|l| l.split_whitespace())
                .filter_map(|tok| tok.parse::<usize>().ok())
                .max()
                .unwrap_or(1);
            (max_symbol + 1).max(2)
        }
    };
    let config = NetworkConfig::new(clusters, cluster_size, opts.w_max)?;

    let mut net = WeightMatrix::new(config);
    for line in &store_lines {
        let msg = Message::parse(line, &config)
            .with_context(|| format!("bad stored message {line:?}"))?;
        learning::store(&mut net, &msg)?;
    }

    let decoder = Decoder::new(&net, opts.arch);
    let mut out = String::new();
    out.push_str(&format!(
        "network: {clusters} clusters x {cluster_size} nodes, w_max {}, arch {}, \
         {} messages stored (density {:.4})\n",
        opts.w_max,
        opts.arch,
        store_lines.len(),
        learning::density_measured(&net),
    ));
    for line in &query_lines {
        let pm =
            PartialMessage::parse(line, &config).with_context(|| format!("bad query {line:?}"))?;
        let result = decoder.decode(&local_decode(&pm, &config), opts.iterations);
        let verdict = match activation_to_message(&result.final_state, &config) {
            Retrieved::Message(msg) => msg.to_string(),
            Retrieved::Ambiguous => "AMBIGUOUS".to_string(),
            Retrieved::Empty => "EMPTY".to_string(),
        };
        out.push_str(&format!("{line} -> {verdict}\n"));
    }
    Ok(out)
}
