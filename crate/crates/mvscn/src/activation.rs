use crate::config::NetworkConfig;
use std::fmt;

/// Binary node values for a whole network, one bit per node.
///
/// Node `(i, j)` maps to bit `i * cluster_size + j` of a little-endian word
/// array. Padding bits past the last node are always zero, so equality can
/// compare the raw words.
#[derive(Clone, PartialEq, Eq)]
pub struct ActivationState {
    clusters: usize,
    cluster_size: usize,
    words: Vec<u64>,
}

impl ActivationState {
    pub fn empty(clusters: usize, cluster_size: usize) -> Self {
        let n = clusters * cluster_size;
        Self {
            clusters,
            cluster_size,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn for_config(config: &NetworkConfig) -> Self {
        Self::empty(config.clusters(), config.cluster_size())
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    pub fn total_nodes(&self) -> usize {
        self.clusters * self.cluster_size
    }

    pub fn get(&self, cluster: usize, node: usize) -> bool {
        let bit = cluster * self.cluster_size + node;
        self.words[bit / 64] & (1u64 << (bit % 64)) != 0
    }

    pub fn set(&mut self, cluster: usize, node: usize, on: bool) {
        assert!(cluster < self.clusters && node < self.cluster_size);
        let bit = cluster * self.cluster_size + node;
        if on {
            self.words[bit / 64] |= 1u64 << (bit % 64);
        } else {
            self.words[bit / 64] &= !(1u64 << (bit % 64));
        }
    }

    pub fn count_active(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn active_in_cluster(&self, cluster: usize) -> Vec<usize> {
        (0..self.cluster_size)
            .filter(|&j| self.get(cluster, j))
            .collect()
    }

    /// Flat indices of all active nodes, ascending.
    pub fn iter_active(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Builds a state from raw words, clearing any padding bits.
    pub(crate) fn from_words(clusters: usize, cluster_size: usize, mut words: Vec<u64>) -> Self {
        let n = clusters * cluster_size;
        debug_assert_eq!(words.len(), n.div_ceil(64));
        let tail = n % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Self {
            clusters,
            cluster_size,
            words,
        }
    }
}

impl fmt::Debug for ActivationState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let per_cluster: Vec<Vec<usize>> = (0..self.clusters)
            .map(|i| self.active_in_cluster(i))
            .collect();
        f.debug_struct("ActivationState")
            .field("active", &per_cluster)
            .finish()
    }
}
