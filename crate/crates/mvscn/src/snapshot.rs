//! Flat binary snapshots of a weight matrix.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `b"SCNW"`                         |
//! | 4      | 4    | format version, currently 1             |
//! | 8      | 4    | cluster count `c`                       |
//! | 12     | 4    | nodes per cluster `l`                   |
//! | 16     | 4    | maximum weight `w_max`                  |
//! | 20     | ...  | packed weight table                     |
//!
//! The table is the full `n x n` matrix (`n = c*l`), row-major by flat node
//! index, `b = ceil(log2(w_max+1))` bits per slot, slots packed LSB-first
//! into 64-bit words with each row padded to a whole number of words. Words
//! are written as little-endian `u64`s. Decode constants are not stored;
//! loading restores the defaults (memory effect 1, threshold `c`).

use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use crate::weights::WeightMatrix;
use std::io::{Read, Write};

const MAGIC: [u8; 4] = *b"SCNW";
const VERSION: u32 = 1;

pub fn write_snapshot<W: Write>(net: &WeightMatrix, mut out: W) -> Result<()> {
    let cfg = net.config();
    out.write_all(&MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(cfg.clusters() as u32).to_le_bytes())?;
    out.write_all(&(cfg.cluster_size() as u32).to_le_bytes())?;
    out.write_all(&cfg.max_weight().to_le_bytes())?;
    for word in net.words() {
        out.write_all(&word.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_snapshot<R: Read>(mut input: R) -> Result<WeightMatrix> {
    let mut header = [0u8; 20];
    input.read_exact(&mut header)?;
    if header[0..4] != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let field = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap());
    let version = field(4);
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let config = NetworkConfig::new(field(8) as usize, field(12) as usize, field(16))
        .map_err(|e| Error::Snapshot(e.to_string()))?;

    let n = config.total_nodes();
    let row_words = (n * config.weight_bits() as usize).div_ceil(64);
    let mut words = vec![0u64; n * row_words];
    let mut buf = [0u8; 8];
    for word in &mut words {
        input.read_exact(&mut buf)?;
        *word = u64::from_le_bytes(buf);
    }
    if input.read(&mut buf)? != 0 {
        return Err(Error::Snapshot("trailing bytes after weight table".into()));
    }
    let net = WeightMatrix::from_parts(config, words);
    verify_weights(&net)?;
    Ok(net)
}

fn verify_weights(net: &WeightMatrix) -> Result<()> {
    let cfg = net.config();
    let (c, l) = (cfg.clusters(), cfg.cluster_size());
    for ca in 0..c {
        for ja in 0..l {
            let u = cfg.node_index(ca, ja);
            for cb in 0..c {
                for jb in 0..l {
                    let v = cfg.node_index(cb, jb);
                    let w = net.entry(u, v);
                    if ca == cb && w != 0 {
                        return Err(Error::Snapshot(format!(
                            "nonzero weight inside cluster {ca}"
                        )));
                    }
                    if w > cfg.max_weight() {
                        return Err(Error::Snapshot(format!(
                            "weight {w} exceeds max {}",
                            cfg.max_weight()
                        )));
                    }
                    if w != net.entry(v, u) {
                        return Err(Error::Snapshot("asymmetric weight table".into()));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_weights() {
        let config = NetworkConfig::new(3, 5, 3).unwrap();
        let mut net = WeightMatrix::new(config);
        net.set_weight(0, 1, 1, 4, 2).unwrap();
        net.set_weight(1, 3, 2, 0, 3).unwrap();

        let mut buf = Vec::new();
        write_snapshot(&net, &mut buf).unwrap();
        let restored = read_snapshot(buf.as_slice()).unwrap();
        assert_eq!(restored, net);
    }

    #[test]
    fn rejects_corruption() {
        let net = WeightMatrix::new(NetworkConfig::new(2, 2, 1).unwrap());
        let mut buf = Vec::new();
        write_snapshot(&net, &mut buf).unwrap();

        let mut bad_magic = buf.clone();
        bad_magic[0] = b'X';
        assert!(read_snapshot(bad_magic.as_slice()).is_err());

        let mut truncated = buf.clone();
        truncated.pop();
        assert!(read_snapshot(truncated.as_slice()).is_err());

        let mut trailing = buf;
        trailing.push(0);
        assert!(read_snapshot(trailing.as_slice()).is_err());
    }

    #[test]
    fn rejects_intra_cluster_weight() {
        let net = WeightMatrix::new(NetworkConfig::new(2, 2, 1).unwrap());
        let mut buf = Vec::new();
        write_snapshot(&net, &mut buf).unwrap();
        // node 0 and node 1 share cluster 0; flip the (0,1) slot
        let header = 20;
        buf[header] |= 0b10;
        assert!(read_snapshot(buf.as_slice()).is_err());
    }
}
