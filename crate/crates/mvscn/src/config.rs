use crate::error::{Error, Result};

/// Shape and decoding constants of a sparse clustered network.
///
/// A network has `clusters` clusters of `cluster_size` nodes each. Connections
/// exist only between nodes of different clusters and carry integer weights in
/// `[0, max_weight]`. `memory_effect` is the additive bonus a node's score
/// receives for being active already; `wta_threshold` is the minimum score a
/// cluster maximum must reach for any node of that cluster to stay active.
///
/// Unless overridden, `memory_effect` is 1 and `wta_threshold` is 1: cluster
/// winners need some evidence, but a node that lost connections can still win
/// its cluster and be recovered. On an undamaged network a fully supported
/// node scores exactly `clusters`, so raising the threshold to the cluster
/// count turns the winner-take-all into a plain full-support comparator; that
/// shortcut breaks down as soon as deletions remove connections, which is
/// why it is not the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkConfig {
    clusters: usize,
    cluster_size: usize,
    max_weight: u32,
    memory_effect: u32,
    wta_threshold: u32,
}

impl NetworkConfig {
    /// Creates a config with default decode constants (`memory_effect = 1`,
    /// `wta_threshold = 1`).
    pub fn new(clusters: usize, cluster_size: usize, max_weight: u32) -> Result<Self> {
        if clusters < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 clusters, got {clusters}"
            )));
        }
        if cluster_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 nodes per cluster, got {cluster_size}"
            )));
        }
        if max_weight < 1 {
            return Err(Error::InvalidConfig("max_weight must be >= 1".into()));
        }
        if cluster_size > u16::MAX as usize + 1 {
            return Err(Error::InvalidConfig(format!(
                "cluster_size {cluster_size} exceeds the supported symbol range"
            )));
        }
        Ok(Self {
            clusters,
            cluster_size,
            max_weight,
            memory_effect: 1,
            wta_threshold: 1,
        })
    }

    pub fn with_wta_threshold(mut self, threshold: u32) -> Self {
        self.wta_threshold = threshold;
        self
    }

    pub fn with_memory_effect(mut self, bonus: u32) -> Self {
        self.memory_effect = bonus;
        self
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn memory_effect(&self) -> u32 {
        self.memory_effect
    }

    pub fn wta_threshold(&self) -> u32 {
        self.wta_threshold
    }

    pub fn total_nodes(&self) -> usize {
        self.clusters * self.cluster_size
    }

    /// Bits needed to store one connection weight: `ceil(log2(max_weight + 1))`.
    pub fn weight_bits(&self) -> u32 {
        u32::BITS - self.max_weight.leading_zeros()
    }

    /// Bits of a sub-message, defined only when the cluster size is a power
    /// of two.
    pub fn symbol_bits(&self) -> Option<u32> {
        if self.cluster_size.is_power_of_two() {
            Some(self.cluster_size.trailing_zeros())
        } else {
            None
        }
    }

    /// Number of unordered inter-cluster node pairs: `c(c-1)/2 * l^2`.
    pub fn pair_slots(&self) -> u64 {
        let c = self.clusters as u64;
        let l = self.cluster_size as u64;
        c * (c - 1) / 2 * l * l
    }

    /// Memory needed for the weight table, counting each unordered pair once
    /// at `weight_bits()` bits.
    pub fn memory_bits(&self) -> u64 {
        self.pair_slots() * self.weight_bits() as u64
    }

    /// Flat index of node `node` in cluster `cluster`.
    pub fn node_index(&self, cluster: usize, node: usize) -> usize {
        cluster * self.cluster_size + node
    }

    pub(crate) fn check_node(&self, cluster: usize, node: usize) -> Result<()> {
        if cluster >= self.clusters || node >= self.cluster_size {
            return Err(Error::IndexOutOfRange {
                cluster,
                node,
                clusters: self.clusters,
                cluster_size: self.cluster_size,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(NetworkConfig::new(1, 16, 1).is_err());
        assert!(NetworkConfig::new(8, 1, 1).is_err());
        assert!(NetworkConfig::new(8, 16, 0).is_err());
    }

    #[test]
    fn decode_constant_defaults() {
        let cfg = NetworkConfig::new(8, 16, 3).unwrap();
        assert_eq!(cfg.wta_threshold(), 1);
        assert_eq!(cfg.memory_effect(), 1);
        assert_eq!(cfg.total_nodes(), 128);
        assert_eq!(cfg.with_wta_threshold(8).wta_threshold(), 8);
    }

    #[test]
    fn weight_bits_round_up() {
        assert_eq!(NetworkConfig::new(8, 16, 1).unwrap().weight_bits(), 1);
        assert_eq!(NetworkConfig::new(8, 16, 3).unwrap().weight_bits(), 2);
        assert_eq!(NetworkConfig::new(8, 16, 4).unwrap().weight_bits(), 3);
        assert_eq!(NetworkConfig::new(8, 16, 7).unwrap().weight_bits(), 3);
        assert_eq!(NetworkConfig::new(8, 16, 8).unwrap().weight_bits(), 4);
    }

    #[test]
    fn memory_bits_match_pair_count() {
        // 28 cluster pairs * 256 node pairs * 1 bit
        assert_eq!(NetworkConfig::new(8, 16, 1).unwrap().memory_bits(), 7168);
        // two bits per pair doubles the count exactly
        assert_eq!(NetworkConfig::new(8, 16, 3).unwrap().memory_bits(), 14336);
        // sqrt(2)-scaled binary network lands within rounding of the 2-bit one
        assert_eq!(NetworkConfig::new(8, 23, 1).unwrap().memory_bits(), 14812);
    }

    #[test]
    fn symbol_bits_only_for_power_of_two() {
        assert_eq!(NetworkConfig::new(8, 16, 1).unwrap().symbol_bits(), Some(4));
        assert_eq!(NetworkConfig::new(8, 23, 1).unwrap().symbol_bits(), None);
    }
}
