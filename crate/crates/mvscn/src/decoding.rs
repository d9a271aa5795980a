//! Global decoding: iterative pruning of activations using the stored
//! connections until a fixed point.
//!
//! A node's score sums one contribution per foreign cluster — the strongest
//! connection it has toward that cluster's active nodes — plus the memory
//! effect for being active itself. An entirely erased cluster activates all
//! of its nodes, so capping each cluster's contribution at its best link is
//! what keeps those fully-lit clusters from swamping the tally. A node with
//! support in every foreign cluster scores exactly `(c-1) + gamma`; on an
//! undamaged network the cluster maxima always reach that ceiling, while
//! after deletions a damaged node can still win its cluster on a lower
//! score and be recovered, so the winner-take-all floor stays at 1 by
//! default.
//!
//! Three interchangeable per-iteration rules are provided:
//!
//! * [`Arch::I`] — scores over the raw multi-valued weights, then a
//!   per-cluster winner-take-all. A single strong link can stand in for a
//!   missing one, which cuts both ways: it papers over deleted connections
//!   but also produces false winners.
//! * [`Arch::II`] — the same, but every weight is normalized to 0/1 before
//!   scoring, so shared connections cannot outvote unshared ones.
//! * [`Arch::III`] — no scores at all: a node stays active iff it is active
//!   now and every other cluster holds at least one active node connected
//!   to it.
//!
//! [`Decoder`] extracts the packed weight table once into bitmap rows (and,
//! for [`Arch::I`], a dense integer copy) so repeated queries against an
//! unchanging network stay cheap. The free functions build a throwaway
//! [`Decoder`] per call.

use crate::activation::ActivationState;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;
use std::fmt;
use std::str::FromStr;

/// Global-decoding rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arch {
    I,
    II,
    III,
}

impl Arch {
    pub const ALL: [Arch; 3] = [Arch::I, Arch::II, Arch::III];
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arch::I => "I",
            Arch::II => "II",
            Arch::III => "III",
        })
    }
}

impl FromStr for Arch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Arch::I),
            "II" | "2" => Ok(Arch::II),
            "III" | "3" => Ok(Arch::III),
            other => Err(Error::InvalidSpec(format!(
                "unknown architecture {other:?} (expected I, II or III)"
            ))),
        }
    }
}

/// Per-node scores from one scoring pass.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScoreField {
    clusters: usize,
    cluster_size: usize,
    scores: Vec<u32>,
}

impl ScoreField {
    pub fn score(&self, cluster: usize, node: usize) -> u32 {
        self.scores[cluster * self.cluster_size + node]
    }

    pub fn max_in_cluster(&self, cluster: usize) -> u32 {
        let l = self.cluster_size;
        self.scores[cluster * l..(cluster + 1) * l]
            .iter()
            .copied()
            .max()
            .unwrap()
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }
}

/// Result of iterating a decoding rule to convergence or to the cap.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecodeResult {
    pub final_state: ActivationState,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Read-only decoding tables extracted from a weight matrix.
pub struct Decoder {
    clusters: usize,
    cluster_size: usize,
    nodes: usize,
    words: usize,
    arch: Arch,
    memory_effect: u32,
    wta_threshold: u32,
    /// Normalized adjacency: bit `v` of row `u` set iff `w(u,v) >= 1`.
    psi: Vec<u64>,
    /// Dense weight copy, only populated for `Arch::I`.
    raw: Vec<u32>,
    /// One bitmap per cluster selecting that cluster's node bits.
    cluster_masks: Vec<u64>,
}

impl Decoder {
    pub fn new(net: &WeightMatrix, arch: Arch) -> Self {
        let cfg = net.config();
        let (c, l) = (cfg.clusters(), cfg.cluster_size());
        let nodes = c * l;
        let words = nodes.div_ceil(64);

        let mut psi = vec![0u64; nodes * words];
        let mut raw = if arch == Arch::I {
            vec![0u32; nodes * nodes]
        } else {
            Vec::new()
        };
        for u in 0..nodes {
            for v in 0..nodes {
                let w = net.entry(u, v);
                if w > 0 {
                    psi[u * words + v / 64] |= 1u64 << (v % 64);
                    if arch == Arch::I {
                        raw[u * nodes + v] = w;
                    }
                }
            }
        }

        let mut cluster_masks = vec![0u64; c * words];
        for i in 0..c {
            for j in 0..l {
                let bit = i * l + j;
                cluster_masks[i * words + bit / 64] |= 1u64 << (bit % 64);
            }
        }

        Self {
            clusters: c,
            cluster_size: l,
            nodes,
            words,
            arch,
            memory_effect: cfg.memory_effect(),
            wta_threshold: cfg.wta_threshold(),
            psi,
            raw,
            cluster_masks,
        }
    }

    pub fn arch(&self) -> Arch {
        self.arch
    }

    /// One scoring pass; defined for `Arch::I` and `Arch::II`.
    fn scores(&self, act: &ActivationState) -> ScoreField {
        debug_assert_eq!(act.total_nodes(), self.nodes);
        let mut scores = vec![0u32; self.nodes];
        match self.arch {
            Arch::I => {
                // active node list is ascending, so cluster runs are contiguous
                let active: Vec<usize> = act.iter_active().collect();
                for (u, score) in scores.iter_mut().enumerate() {
                    let row = &self.raw[u * self.nodes..(u + 1) * self.nodes];
                    let mut s = 0u32;
                    let mut k = 0;
                    while k < active.len() {
                        let cluster = active[k] / self.cluster_size;
                        let mut best = 0u32;
                        while k < active.len() && active[k] / self.cluster_size == cluster {
                            best = best.max(row[active[k]]);
                            k += 1;
                        }
                        s += best;
                    }
                    *score = s;
                }
            }
            _ => {
                let act_words = act.words();
                let mut masked = vec![0u64; self.words];
                for (u, score) in scores.iter_mut().enumerate() {
                    let row = &self.psi[u * self.words..(u + 1) * self.words];
                    for (m, (&r, &a)) in masked.iter_mut().zip(row.iter().zip(act_words)) {
                        *m = r & a;
                    }
                    let mut s = 0u32;
                    for cluster in 0..self.clusters {
                        let cm =
                            &self.cluster_masks[cluster * self.words..(cluster + 1) * self.words];
                        if masked.iter().zip(cm).any(|(&m, &c)| m & c != 0) {
                            s += 1;
                        }
                    }
                    *score = s;
                }
            }
        }
        for u in act.iter_active() {
            scores[u] += self.memory_effect;
        }
        ScoreField {
            clusters: self.clusters,
            cluster_size: self.cluster_size,
            scores,
        }
    }

    /// Applies one iteration of the configured rule.
    pub fn step(&self, act: &ActivationState) -> ActivationState {
        match self.arch {
            Arch::I | Arch::II => winner_take_all(&self.scores(act), self.wta_threshold),
            Arch::III => self.step_reduced(act),
        }
    }

    fn step_reduced(&self, act: &ActivationState) -> ActivationState {
        let act_words = act.words();
        let mut out = vec![0u64; self.words];
        let mut masked = vec![0u64; self.words];
        for u in act.iter_active() {
            let row = &self.psi[u * self.words..(u + 1) * self.words];
            for (m, (&r, &a)) in masked.iter_mut().zip(row.iter().zip(act_words)) {
                *m = r & a;
            }
            let cluster = u / self.cluster_size;
            let supported = (0..self.clusters).all(|other| {
                if other == cluster {
                    return true;
                }
                let cm = &self.cluster_masks[other * self.words..(other + 1) * self.words];
                masked.iter().zip(cm).any(|(&m, &c)| m & c != 0)
            });
            if supported {
                out[u / 64] |= 1u64 << (u % 64);
            }
        }
        ActivationState::from_words(self.clusters, self.cluster_size, out)
    }

    /// Iterates until the activation repeats or `max_iterations` passes ran.
    pub fn decode(&self, initial: &ActivationState, max_iterations: usize) -> DecodeResult {
        assert!(max_iterations >= 1);
        let mut current = initial.clone();
        for iteration in 1..=max_iterations {
            let next = self.step(&current);
            if next == current {
                return DecodeResult {
                    final_state: next,
                    iterations_used: iteration,
                    converged: true,
                };
            }
            current = next;
        }
        DecodeResult {
            final_state: current,
            iterations_used: max_iterations,
            converged: false,
        }
    }
}

/// Per-cluster winner-take-all: keep every node whose score equals the
/// cluster maximum, provided that maximum reaches `threshold`. Ties keep all
/// tied nodes.
pub fn winner_take_all(scores: &ScoreField, threshold: u32) -> ActivationState {
    let (c, l) = (scores.clusters, scores.cluster_size);
    let mut words = vec![0u64; (c * l).div_ceil(64)];
    for i in 0..c {
        let row = &scores.scores[i * l..(i + 1) * l];
        let max = row.iter().copied().max().unwrap();
        if max < threshold {
            continue;
        }
        for (j, &s) in row.iter().enumerate() {
            if s == max {
                let bit = i * l + j;
                words[bit / 64] |= 1u64 << (bit % 64);
            }
        }
    }
    ActivationState::from_words(c, l, words)
}

/// Scores over the raw multi-valued weights: per foreign cluster, the
/// strongest connection toward an active node, plus the memory-effect bonus.
pub fn score_arch1(net: &WeightMatrix, act: &ActivationState) -> ScoreField {
    Decoder::new(net, Arch::I).scores(act)
}

/// Scores with every weight normalized to 0/1: the number of foreign
/// clusters holding an active connected node, plus the memory-effect bonus.
pub fn score_arch2(net: &WeightMatrix, act: &ActivationState) -> ScoreField {
    Decoder::new(net, Arch::II).scores(act)
}

/// One pass of the score-free rule: a node survives iff it is active and
/// every other cluster contains an active node connected to it.
pub fn step_arch3(net: &WeightMatrix, act: &ActivationState) -> ActivationState {
    Decoder::new(net, Arch::III).step(act)
}

/// Convenience one-shot decode; builds the decoding tables afresh.
pub fn decode(
    net: &WeightMatrix,
    initial: &ActivationState,
    arch: Arch,
    max_iterations: usize,
) -> DecodeResult {
    Decoder::new(net, arch).decode(initial, max_iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{activation_to_message, local_decode, Retrieved};
    use crate::config::NetworkConfig;
    use crate::learning::store;
    use crate::message::{Message, PartialMessage, SubInput};

    fn cfg(c: usize, l: usize, w: u32) -> NetworkConfig {
        NetworkConfig::new(c, l, w).unwrap()
    }

    fn all_active(config: &NetworkConfig) -> ActivationState {
        let mut act = ActivationState::for_config(config);
        for i in 0..config.clusters() {
            for j in 0..config.cluster_size() {
                act.set(i, j, true);
            }
        }
        act
    }

    #[test]
    fn empty_net_scores_are_memory_effect_only() {
        let config = cfg(3, 4, 3);
        let net = WeightMatrix::new(config);
        let scores = score_arch1(&net, &all_active(&config));
        for i in 0..3 {
            for j in 0..4 {
                assert_eq!(scores.score(i, j), 1);
            }
        }
    }

    #[test]
    fn clique_under_full_input_scores_cluster_count() {
        let config = cfg(3, 4, 3);
        let mut net = WeightMatrix::new(config);
        let m = Message::new(vec![0, 1, 2], &config).unwrap();
        store(&mut net, &m).unwrap();
        let act = local_decode(&PartialMessage::from_message(&m), &config);
        let s1 = score_arch1(&net, &act);
        let s2 = score_arch2(&net, &act);
        assert_eq!(s1.score(0, 0), 3);
        assert_eq!(s1.score(1, 1), 3);
        assert_eq!(s2.score(2, 2), 3);
    }

    /// A single strong connection can match several unit connections in the
    /// raw-score rule; normalization removes the effect.
    #[test]
    fn heavy_connection_inflates_raw_scores_only() {
        let config = cfg(4, 4, 3);
        let mut net = WeightMatrix::new(config);
        let m = Message::new(vec![0, 0, 0, 0], &config).unwrap();
        store(&mut net, &m).unwrap();
        // impostor clique stored three times: (3,1) ends up connected to
        // (0,0) with weight 3
        let other = Message::new(vec![0, 1, 1, 1], &config).unwrap();
        for _ in 0..3 {
            store(&mut net, &other).unwrap();
        }

        // query m with the last cluster erased
        let pm = PartialMessage::new(
            vec![
                SubInput::Known(0),
                SubInput::Known(0),
                SubInput::Known(0),
                SubInput::Erased,
            ],
            &config,
        )
        .unwrap();
        let act = local_decode(&pm, &config);

        let raw = score_arch1(&net, &act);
        // true node: three unit connections + memory effect
        assert_eq!(raw.score(3, 0), 4);
        // impostor: one weight-3 connection + memory effect
        assert_eq!(raw.score(3, 1), 4);

        let norm = score_arch2(&net, &act);
        assert_eq!(norm.score(3, 0), 4);
        assert_eq!(norm.score(3, 1), 2);

        // normalized decode retrieves m; raw decode is pulled to the rival
        let ok = decode(&net, &act, Arch::II, 4);
        assert_eq!(
            activation_to_message(&ok.final_state, &config),
            Retrieved::Message(m.clone())
        );
        let bad = decode(&net, &act, Arch::I, 4);
        assert_ne!(
            activation_to_message(&bad.final_state, &config),
            Retrieved::Message(m)
        );
    }

    /// With saturation, raw scoring can even lose a message presented with no
    /// erasures at all; the normalized rules never do.
    #[test]
    fn raw_scoring_can_fail_full_input_recall() {
        let config = cfg(3, 4, 3);
        let mut net = WeightMatrix::new(config);
        let m = Message::new(vec![0, 0, 0], &config).unwrap();
        let rival = Message::new(vec![1, 0, 0], &config).unwrap();
        store(&mut net, &m).unwrap();
        for _ in 0..3 {
            store(&mut net, &rival).unwrap();
        }

        let act = local_decode(&PartialMessage::from_message(&m), &config);
        let raw = decode(&net, &act, Arch::I, 4);
        assert_ne!(
            activation_to_message(&raw.final_state, &config),
            Retrieved::Message(m.clone()),
            "constructed instance must demonstrate the raw-score defect"
        );
        for arch in [Arch::II, Arch::III] {
            let res = decode(&net, &act, arch, 4);
            assert_eq!(
                activation_to_message(&res.final_state, &config),
                Retrieved::Message(m.clone())
            );
            assert!(res.converged && res.iterations_used == 1);
        }
    }

    #[test]
    fn binary_net_normalization_is_identity() {
        let config = cfg(3, 4, 1);
        let mut net = WeightMatrix::new(config);
        for symbols in [[0u16, 1, 2], [1, 1, 3], [0, 3, 2]] {
            store(&mut net, &Message::new(symbols.to_vec(), &config).unwrap()).unwrap();
        }
        let act = all_active(&config);
        assert_eq!(score_arch1(&net, &act), score_arch2(&net, &act));
    }

    #[test]
    fn winner_take_all_threshold_and_ties() {
        let scores = ScoreField {
            clusters: 1,
            cluster_size: 4,
            scores: vec![4, 4, 2, 1],
        };
        let act = winner_take_all(&scores, 3);
        assert_eq!(act.active_in_cluster(0), vec![0, 1]);

        let low = ScoreField {
            clusters: 2,
            cluster_size: 2,
            scores: vec![2, 2, 1, 0],
        };
        assert_eq!(winner_take_all(&low, 3).count_active(), 0);
    }

    #[test]
    fn reduced_step_keeps_cliques_and_ambiguity() {
        let config = cfg(3, 4, 1);
        let mut net = WeightMatrix::new(config);
        let m1 = Message::new(vec![0, 1, 2], &config).unwrap();
        let m2 = Message::new(vec![0, 1, 3], &config).unwrap();
        store(&mut net, &m1).unwrap();
        store(&mut net, &m2).unwrap();

        // full input of a stored clique is a fixed point
        let act = local_decode(&PartialMessage::from_message(&m1), &config);
        assert_eq!(step_arch3(&net, &act), act);

        // a node that local decoding left inactive stays inactive
        let out = step_arch3(&net, &act);
        assert!(!out.get(2, 3));

        // erased last cluster: both stored completions stay active
        let pm = PartialMessage::parse("0 1 ?", &config).unwrap();
        let res = decode(&net, &local_decode(&pm, &config), Arch::III, 4);
        assert_eq!(res.final_state.active_in_cluster(2), vec![2, 3]);
        assert_eq!(
            activation_to_message(&res.final_state, &config),
            Retrieved::Ambiguous
        );
    }

    #[test]
    fn empty_net_reduced_step_clears_everything() {
        let config = cfg(3, 4, 1);
        let net = WeightMatrix::new(config);
        assert_eq!(step_arch3(&net, &all_active(&config)).count_active(), 0);
    }

    #[test]
    fn decode_counts_iterations() {
        let config = cfg(3, 4, 1);
        let mut net = WeightMatrix::new(config);
        let m = Message::new(vec![2, 0, 1], &config).unwrap();
        store(&mut net, &m).unwrap();
        let act = local_decode(&PartialMessage::from_message(&m), &config);
        for arch in [Arch::II, Arch::III] {
            let res = decode(&net, &act, arch, 4);
            assert!(res.converged);
            assert_eq!(res.iterations_used, 1);
            assert_eq!(res.final_state, act);
        }
    }
}
