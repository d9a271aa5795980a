//! Mapping between messages and node activations.
//!
//! Local decoding activates, in each cluster, every node whose index is a
//! possible value of the corresponding sub-message: exactly one node for a
//! known sub-message, all nodes for an erased one.

use crate::activation::ActivationState;
use crate::config::NetworkConfig;
use crate::message::{Message, PartialMessage, SubInput};
use rand::Rng;

/// Outcome of reading a message back out of an activation state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Retrieved {
    /// Every cluster had exactly one active node.
    Message(Message),
    /// Some cluster kept two or more active nodes.
    Ambiguous,
    /// Some cluster has no active node.
    Empty,
}

pub fn local_decode(pm: &PartialMessage, config: &NetworkConfig) -> ActivationState {
    debug_assert_eq!(pm.len(), config.clusters());
    let mut act = ActivationState::for_config(config);
    for (i, entry) in pm.entries().iter().enumerate() {
        match entry {
            SubInput::Known(s) => act.set(i, *s as usize, true),
            SubInput::Erased => {
                for j in 0..config.cluster_size() {
                    act.set(i, j, true);
                }
            }
            SubInput::Candidates(set) => {
                for &s in set {
                    act.set(i, s as usize, true);
                }
            }
        }
    }
    act
}

/// Reads a unique message out of an activation state, if there is one.
/// Ambiguity (a cluster with several candidates) is reported before
/// emptiness when both occur.
pub fn activation_to_message(act: &ActivationState, config: &NetworkConfig) -> Retrieved {
    let mut symbols = Vec::with_capacity(config.clusters());
    let mut empty = false;
    for i in 0..config.clusters() {
        let active = act.active_in_cluster(i);
        match active.len() {
            0 => empty = true,
            1 => symbols.push(active[0] as u16),
            _ => return Retrieved::Ambiguous,
        }
    }
    if empty {
        return Retrieved::Empty;
    }
    Retrieved::Message(Message::from_symbols_unchecked(symbols))
}

/// Erases `round(ce * c)` sub-messages at distinct positions chosen uniformly
/// by `rng`; the remaining entries stay known.
pub fn erase<R: Rng>(msg: &Message, ce: f64, rng: &mut R) -> PartialMessage {
    let c = msg.len();
    let count = ((ce * c as f64).round() as usize).min(c);
    let mut entries: Vec<SubInput> = msg.symbols().iter().map(|&s| SubInput::Known(s)).collect();
    for idx in rand::seq::index::sample(rng, c, count) {
        entries[idx] = SubInput::Erased;
    }
    PartialMessage::from_entries_unchecked(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(c: usize, l: usize) -> NetworkConfig {
        NetworkConfig::new(c, l, 1).unwrap()
    }

    #[test]
    fn known_entries_are_one_hot() {
        let config = cfg(3, 4);
        let msg = Message::new(vec![1, 2, 0], &config).unwrap();
        let act = local_decode(&PartialMessage::from_message(&msg), &config);
        assert_eq!(act.count_active(), 3);
        assert!(act.get(0, 1) && act.get(1, 2) && act.get(2, 0));
    }

    #[test]
    fn erased_entry_activates_whole_cluster() {
        let config = cfg(3, 4);
        let pm = PartialMessage::new(
            vec![SubInput::Known(1), SubInput::Erased, SubInput::Known(0)],
            &config,
        )
        .unwrap();
        let act = local_decode(&pm, &config);
        assert_eq!(act.active_in_cluster(0), vec![1]);
        assert_eq!(act.active_in_cluster(1), vec![0, 1, 2, 3]);
        assert_eq!(act.active_in_cluster(2), vec![0]);
    }

    #[test]
    fn candidate_entry_activates_candidates() {
        let config = cfg(3, 4);
        let pm = PartialMessage::new(
            vec![
                SubInput::Candidates(vec![0, 2]),
                SubInput::Known(3),
                SubInput::Known(3),
            ],
            &config,
        )
        .unwrap();
        let act = local_decode(&pm, &config);
        assert_eq!(act.active_in_cluster(0), vec![0, 2]);
        assert_eq!(act.count_active(), 4);
    }

    #[test]
    fn retrieval_classifies_states() {
        let config = cfg(3, 4);
        let msg = Message::new(vec![1, 2, 0], &config).unwrap();
        let mut act = local_decode(&PartialMessage::from_message(&msg), &config);
        assert_eq!(
            activation_to_message(&act, &config),
            Retrieved::Message(msg)
        );

        for j in 0..4 {
            act.set(1, j, true);
        }
        assert_eq!(activation_to_message(&act, &config), Retrieved::Ambiguous);

        let mut empty = local_decode(&PartialMessage::parse("1 2 0", &config).unwrap(), &config);
        empty.set(2, 0, false);
        assert_eq!(activation_to_message(&empty, &config), Retrieved::Empty);
    }

    #[test]
    fn erase_counts_are_exact() {
        let config = cfg(8, 16);
        let msg = Message::new((0..8).collect(), &config).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);

        let none = erase(&msg, 0.0, &mut rng);
        assert_eq!(none, PartialMessage::from_message(&msg));

        let all = erase(&msg, 1.0, &mut rng);
        assert!(all.entries().iter().all(|e| *e == SubInput::Erased));

        let half = erase(&msg, 0.5, &mut rng);
        let erased = half
            .entries()
            .iter()
            .filter(|e| **e == SubInput::Erased)
            .count();
        assert_eq!(erased, 4);
    }

    #[test]
    fn erase_is_deterministic_per_seed() {
        let config = cfg(8, 16);
        let msg = Message::new((8..16).collect(), &config).unwrap();
        let a = erase(&msg, 0.5, &mut ChaCha8Rng::seed_from_u64(99));
        let b = erase(&msg, 0.5, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
    }
}
