//! Brute-force reference implementations for tests.
//!
//! Everything here is written as literal nested loops over the checked
//! accessor API, with no packing, masking or early exits, so it exercises a
//! different code path than the production decoder. Intended for small
//! networks only.

#![allow(clippy::needless_range_loop)]

use crate::activation::ActivationState;
use crate::decoding::Arch;
use crate::message::{Message, PartialMessage};
use crate::weights::WeightMatrix;

/// One literal iteration of the given decoding rule.
pub fn naive_decode_step(net: &WeightMatrix, act: &ActivationState, arch: Arch) -> ActivationState {
    match arch {
        Arch::I => naive_wta_step(net, act, false),
        Arch::II => naive_wta_step(net, act, true),
        Arch::III => naive_reduced_step(net, act),
    }
}

fn naive_wta_step(net: &WeightMatrix, act: &ActivationState, normalized: bool) -> ActivationState {
    let cfg = net.config();
    let (c, l) = (cfg.clusters(), cfg.cluster_size());

    // score = per foreign cluster, the strongest connection to one of its
    // active nodes; plus the memory effect for being active oneself
    let mut scores = vec![vec![0u32; l]; c];
    for i in 0..c {
        for j in 0..l {
            let mut s = 0u32;
            for i2 in 0..c {
                if i2 == i {
                    continue;
                }
                let mut best = 0u32;
                for j2 in 0..l {
                    if act.get(i2, j2) {
                        let w = net.weight(i, j, i2, j2).unwrap();
                        let w = if normalized { u32::from(w >= 1) } else { w };
                        best = best.max(w);
                    }
                }
                s += best;
            }
            if act.get(i, j) {
                s += cfg.memory_effect();
            }
            scores[i][j] = s;
        }
    }

    let mut out = ActivationState::for_config(cfg);
    for i in 0..c {
        let max = *scores[i].iter().max().unwrap();
        if max < cfg.wta_threshold() {
            continue;
        }
        for j in 0..l {
            if scores[i][j] == max {
                out.set(i, j, true);
            }
        }
    }
    out
}

fn naive_reduced_step(net: &WeightMatrix, act: &ActivationState) -> ActivationState {
    let cfg = net.config();
    let (c, l) = (cfg.clusters(), cfg.cluster_size());
    let mut out = ActivationState::for_config(cfg);
    for i in 0..c {
        for j in 0..l {
            let mut keep = act.get(i, j);
            for i2 in 0..c {
                if i2 == i {
                    continue;
                }
                let mut any = false;
                for j2 in 0..l {
                    if act.get(i2, j2) && net.weight(i, j, i2, j2).unwrap() >= 1 {
                        any = true;
                    }
                }
                keep = keep && any;
            }
            out.set(i, j, keep);
        }
    }
    out
}

/// All stored messages compatible with every known entry of the query.
/// Decoder-independent ground truth: a query whose candidate set holds two or
/// more messages is ambiguous no matter how it is decoded.
pub fn candidate_set(stored: &[Message], pm: &PartialMessage) -> Vec<Message> {
    stored
        .iter()
        .filter(|msg| {
            msg.symbols()
                .iter()
                .zip(pm.entries())
                .all(|(&s, entry)| entry.admits(s))
        })
        .cloned()
        .collect()
}
