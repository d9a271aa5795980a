//! Storage and deletion of messages as weighted cliques, plus density
//! accounting.
//!
//! Storing a message bumps every inter-cluster connection of its clique up by
//! one, saturating at `max_weight`; deleting bumps them down, saturating at
//! zero. The network itself keeps no record of which messages are stored —
//! callers that need delete-safety track the stored multiset themselves.

use crate::error::{Error, Result};
use crate::message::Message;
use crate::weights::WeightMatrix;

pub fn store(net: &mut WeightMatrix, msg: &Message) -> Result<()> {
    update_clique(net, msg, true)
}

pub fn delete(net: &mut WeightMatrix, msg: &Message) -> Result<()> {
    update_clique(net, msg, false)
}

fn update_clique(net: &mut WeightMatrix, msg: &Message, add: bool) -> Result<()> {
    msg.check_against(net.config())?;
    let l = net.config().cluster_size();
    let symbols = msg.symbols();
    for (a, &sa) in symbols.iter().enumerate() {
        let u = a * l + sa as usize;
        for (b, &sb) in symbols.iter().enumerate().skip(a + 1) {
            let v = b * l + sb as usize;
            if add {
                net.bump_up(u, v);
            } else {
                net.bump_down(u, v);
            }
        }
    }
    Ok(())
}

/// Expected density after storing `messages` uniform random messages:
/// `1 - (1 - 1/l^2)^M`.
pub fn density_predicted(messages: u64, cluster_size: usize) -> f64 {
    let l = cluster_size as f64;
    1.0 - (1.0 - 1.0 / (l * l)).powf(messages as f64)
}

/// Number of messages whose predicted density is closest to `target`,
/// rounding half away from zero.
pub fn messages_for_density(target: f64, cluster_size: usize) -> Result<u64> {
    if !(0.0..1.0).contains(&target) {
        return Err(Error::InvalidSpec(format!(
            "density target {target} outside [0, 1)"
        )));
    }
    if target == 0.0 {
        return Ok(0);
    }
    let l = cluster_size as f64;
    let m = (1.0 - target).ln() / (1.0 - 1.0 / (l * l)).ln();
    Ok(m.round() as u64)
}

/// Fraction of possible inter-cluster connections currently in use.
pub fn density_measured(net: &WeightMatrix) -> f64 {
    net.used_connections() as f64 / net.config().pair_slots() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::NetworkConfig;

    fn net(c: usize, l: usize, w: u32) -> WeightMatrix {
        WeightMatrix::new(NetworkConfig::new(c, l, w).unwrap())
    }

    fn msg(net: &WeightMatrix, symbols: &[u16]) -> Message {
        Message::new(symbols.to_vec(), net.config()).unwrap()
    }

    #[test]
    fn store_builds_a_clique() {
        let mut n = net(3, 4, 3);
        let m = msg(&n, &[0, 1, 2]);
        store(&mut n, &m).unwrap();
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 1);
        assert_eq!(n.weight(0, 0, 2, 2).unwrap(), 1);
        assert_eq!(n.weight(1, 1, 2, 2).unwrap(), 1);
        assert_eq!(n.used_connections(), 3);

        store(&mut n, &m).unwrap();
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 2);

        for _ in 0..3 {
            store(&mut n, &m).unwrap();
        }
        // five stores saturate at max_weight = 3
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 3);
        assert_eq!(n.weight(1, 1, 2, 2).unwrap(), 3);
    }

    #[test]
    fn delete_reverses_store() {
        let mut n = net(3, 4, 3);
        let m = msg(&n, &[3, 0, 1]);
        store(&mut n, &m).unwrap();
        delete(&mut n, &m).unwrap();
        assert_eq!(n.used_connections(), 0);
    }

    #[test]
    fn shared_connection_survives_delete_with_headroom() {
        let mut n = net(3, 4, 3);
        let m1 = msg(&n, &[0, 1, 2]);
        let m2 = msg(&n, &[0, 1, 3]);
        store(&mut n, &m1).unwrap();
        store(&mut n, &m2).unwrap();
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 2); // shared pair

        delete(&mut n, &m1).unwrap();
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 1);
        assert_eq!(n.weight(0, 0, 2, 2).unwrap(), 0);
        assert_eq!(n.weight(1, 1, 2, 2).unwrap(), 0);
        assert_eq!(n.weight(0, 0, 2, 3).unwrap(), 1);
        assert_eq!(n.weight(1, 1, 2, 3).unwrap(), 1);
    }

    #[test]
    fn binary_weights_lose_shared_connections() {
        let mut n = net(3, 4, 1);
        let m1 = msg(&n, &[0, 1, 2]);
        let m2 = msg(&n, &[0, 1, 3]);
        store(&mut n, &m1).unwrap();
        store(&mut n, &m2).unwrap();
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 1); // saturated shared pair

        delete(&mut n, &m1).unwrap();
        // the shared connection is gone, breaking m2's clique
        assert_eq!(n.weight(0, 0, 1, 1).unwrap(), 0);
        assert_eq!(n.weight(0, 0, 2, 3).unwrap(), 1);
    }

    #[test]
    fn predicted_density_examples() {
        assert_eq!(density_predicted(0, 16), 0.0);
        let d130 = density_predicted(130, 16);
        assert!((d130 - 0.399).abs() < 5e-4, "got {d130}");
        // monotone toward 1 (saturates to exactly 1.0 in f64 for huge M)
        let mut prev = 0.0;
        for m in [1u64, 10, 100, 1000, 10_000] {
            let d = density_predicted(m, 16);
            assert!(d >= prev && d <= 1.0);
            prev = d;
        }
        assert!(density_predicted(2000, 16) > 0.999);
        assert!(density_predicted(2000, 16) < 1.0);
    }

    #[test]
    fn message_count_inverts_density() {
        assert_eq!(messages_for_density(0.0, 16).unwrap(), 0);
        // exact value is ~130.5; round-half-away gives 131
        assert_eq!(messages_for_density(0.4, 16).unwrap(), 131);
        assert_eq!(messages_for_density(0.4, 23).unwrap(), 270);
        assert!(messages_for_density(1.0, 16).is_err());

        for target in [0.1, 0.3, 0.5, 0.7] {
            let m = messages_for_density(target, 16).unwrap();
            let step = (density_predicted(m + 1, 16) - density_predicted(m, 16)).abs();
            assert!(
                (density_predicted(m, 16) - target).abs() <= step,
                "prediction for M={m} not within one message-step of {target}"
            );
        }
    }

    #[test]
    fn measured_density_counts_unordered_pairs() {
        let mut n = net(3, 4, 1);
        assert_eq!(density_measured(&n), 0.0);
        let m = msg(&n, &[0, 1, 2]);
        store(&mut n, &m).unwrap();
        assert!((density_measured(&n) - 3.0 / 48.0).abs() < 1e-12);
    }
}
