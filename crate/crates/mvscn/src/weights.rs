use crate::config::NetworkConfig;
use crate::error::{Error, Result};

/// Dense, bit-packed table of inter-cluster connection weights.
///
/// Every ordered node pair `(u, u')` has a slot of `weight_bits` bits; both
/// symmetric slots are kept physically so decode loops never branch on pair
/// orientation. Rows are padded to a whole number of 64-bit words. Slots with
/// both nodes in the same cluster are permanently zero.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    config: NetworkConfig,
    bits: u32,
    row_words: usize,
    words: Vec<u64>,
}

impl WeightMatrix {
    /// Builds an all-zero network for the given config.
    pub fn new(config: NetworkConfig) -> Self {
        let n = config.total_nodes();
        let bits = config.weight_bits();
        let row_words = (n * bits as usize).div_ceil(64);
        Self {
            config,
            bits,
            row_words,
            words: vec![0; n * row_words],
        }
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    /// Weight between `(cluster_a, node_a)` and `(cluster_b, node_b)`.
    /// Same-cluster pairs read as 0.
    pub fn weight(
        &self,
        cluster_a: usize,
        node_a: usize,
        cluster_b: usize,
        node_b: usize,
    ) -> Result<u32> {
        self.config.check_node(cluster_a, node_a)?;
        self.config.check_node(cluster_b, node_b)?;
        if cluster_a == cluster_b {
            return Ok(0);
        }
        Ok(self.entry(
            self.config.node_index(cluster_a, node_a),
            self.config.node_index(cluster_b, node_b),
        ))
    }

    /// Writes both symmetric slots of an inter-cluster pair.
    pub fn set_weight(
        &mut self,
        cluster_a: usize,
        node_a: usize,
        cluster_b: usize,
        node_b: usize,
        value: u32,
    ) -> Result<()> {
        self.config.check_node(cluster_a, node_a)?;
        self.config.check_node(cluster_b, node_b)?;
        if cluster_a == cluster_b {
            return Err(Error::IntraCluster { cluster: cluster_a });
        }
        if value > self.config.max_weight() {
            return Err(Error::WeightOutOfRange {
                value,
                max: self.config.max_weight(),
            });
        }
        let u = self.config.node_index(cluster_a, node_a);
        let v = self.config.node_index(cluster_b, node_b);
        self.set_entry(u, v, value);
        self.set_entry(v, u, value);
        Ok(())
    }

    /// Raw slot read by flat node indices. Callers keep `u != u'` out of the
    /// same cluster themselves; the table holds zeros there regardless.
    pub(crate) fn entry(&self, u: usize, v: usize) -> u32 {
        let bits = self.bits as usize;
        let off = v * bits;
        let word = u * self.row_words + off / 64;
        let shift = off % 64;
        let mask = (1u64 << bits) - 1;
        if shift + bits <= 64 {
            ((self.words[word] >> shift) & mask) as u32
        } else {
            let lo = self.words[word] >> shift;
            let hi = self.words[word + 1] << (64 - shift);
            ((lo | hi) & mask) as u32
        }
    }

    pub(crate) fn set_entry(&mut self, u: usize, v: usize, value: u32) {
        let bits = self.bits as usize;
        let off = v * bits;
        let word = u * self.row_words + off / 64;
        let shift = off % 64;
        let mask = (1u64 << bits) - 1;
        let val = value as u64 & mask;
        if shift + bits <= 64 {
            self.words[word] = (self.words[word] & !(mask << shift)) | (val << shift);
        } else {
            let low_bits = 64 - shift;
            self.words[word] = (self.words[word] & !(mask << shift)) | (val << shift);
            let hi_mask = mask >> low_bits;
            self.words[word + 1] = (self.words[word + 1] & !hi_mask) | (val >> low_bits);
        }
    }

    /// Saturating increment of both symmetric slots; clamps at `max_weight`.
    pub(crate) fn bump_up(&mut self, u: usize, v: usize) {
        let w = self.entry(u, v);
        if w < self.config.max_weight() {
            self.set_entry(u, v, w + 1);
            self.set_entry(v, u, w + 1);
        }
    }

    /// Saturating decrement of both symmetric slots; clamps at 0.
    pub(crate) fn bump_down(&mut self, u: usize, v: usize) {
        let w = self.entry(u, v);
        if w > 0 {
            self.set_entry(u, v, w - 1);
            self.set_entry(v, u, w - 1);
        }
    }

    /// Number of unordered inter-cluster pairs with a nonzero weight.
    pub fn used_connections(&self) -> u64 {
        let c = self.config.clusters();
        let l = self.config.cluster_size();
        let mut used = 0;
        for ca in 0..c {
            for cb in (ca + 1)..c {
                for ja in 0..l {
                    let u = ca * l + ja;
                    for jb in 0..l {
                        if self.entry(u, cb * l + jb) != 0 {
                            used += 1;
                        }
                    }
                }
            }
        }
        used
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_parts(config: NetworkConfig, words: Vec<u64>) -> Self {
        let n = config.total_nodes();
        let bits = config.weight_bits();
        let row_words = (n * bits as usize).div_ceil(64);
        debug_assert_eq!(words.len(), n * row_words);
        Self {
            config,
            bits,
            row_words,
            words,
        }
    }
}

impl std::fmt::Debug for WeightMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeightMatrix")
            .field("clusters", &self.config.clusters())
            .field("cluster_size", &self.config.cluster_size())
            .field("max_weight", &self.config.max_weight())
            .field("used_connections", &self.used_connections())
            .finish()
    }
}
