use crate::config::NetworkConfig;
use crate::error::{Error, Result};
use std::fmt;

/// A full message: one symbol per cluster, each in `[0, cluster_size)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Message {
    symbols: Vec<u16>,
}

impl Message {
    pub fn new(symbols: Vec<u16>, config: &NetworkConfig) -> Result<Self> {
        if symbols.len() != config.clusters() {
            return Err(Error::InvalidMessage(format!(
                "expected {} symbols, got {}",
                config.clusters(),
                symbols.len()
            )));
        }
        if let Some(&s) = symbols
            .iter()
            .find(|&&s| s as usize >= config.cluster_size())
        {
            return Err(Error::InvalidMessage(format!(
                "symbol {s} outside [0, {})",
                config.cluster_size()
            )));
        }
        Ok(Self { symbols })
    }

    pub(crate) fn from_symbols_unchecked(symbols: Vec<u16>) -> Self {
        Self { symbols }
    }

    pub fn symbols(&self) -> &[u16] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub(crate) fn check_against(&self, config: &NetworkConfig) -> Result<()> {
        if self.symbols.len() != config.clusters()
            || self
                .symbols
                .iter()
                .any(|&s| s as usize >= config.cluster_size())
        {
            return Err(Error::InvalidMessage(format!(
                "message {self} does not fit {} clusters of {} nodes",
                config.clusters(),
                config.cluster_size()
            )));
        }
        Ok(())
    }

    /// Parses the text form: whitespace-separated symbol values.
    pub fn parse(line: &str, config: &NetworkConfig) -> Result<Self> {
        let symbols = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u16>()
                    .map_err(|_| Error::InvalidMessage(format!("bad symbol {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, config)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.symbols.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Message[{self}]")
    }
}

/// One cluster's worth of a partial query.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubInput {
    /// The sub-message is fully known.
    Known(u16),
    /// The sub-message is entirely unknown.
    Erased,
    /// Some bits are unknown; any of these symbols could be the value.
    /// Holds a sorted, deduplicated, non-empty candidate list.
    Candidates(Vec<u16>),
}

impl SubInput {
    /// Candidate list for a symbol with some bits erased: every value that
    /// agrees with `symbol` on the bits set in `known_mask`. Requires a
    /// power-of-two cluster size.
    pub fn from_partial_bits(symbol: u16, known_mask: u16, config: &NetworkConfig) -> Result<Self> {
        let bits = config.symbol_bits().ok_or_else(|| {
            Error::InvalidMessage(format!(
                "bit-level erasure needs a power-of-two cluster size, got {}",
                config.cluster_size()
            ))
        })?;
        if symbol as usize >= config.cluster_size() {
            return Err(Error::InvalidMessage(format!(
                "symbol {symbol} outside [0, {})",
                config.cluster_size()
            )));
        }
        let full = (1u32 << bits) - 1;
        let known = known_mask as u32 & full;
        let candidates = (0..config.cluster_size() as u32)
            .filter(|&v| v & known == symbol as u32 & known)
            .map(|v| v as u16)
            .collect();
        Ok(SubInput::Candidates(candidates))
    }

    /// Whether `symbol` is a possible value of this entry.
    pub fn admits(&self, symbol: u16) -> bool {
        match self {
            SubInput::Known(s) => *s == symbol,
            SubInput::Erased => true,
            SubInput::Candidates(set) => set.binary_search(&symbol).is_ok(),
        }
    }

    /// Number of candidate symbols, given the cluster size.
    pub fn candidate_count(&self, cluster_size: usize) -> usize {
        match self {
            SubInput::Known(_) => 1,
            SubInput::Erased => cluster_size,
            SubInput::Candidates(set) => set.len(),
        }
    }
}

/// A query message: per-cluster entries that may be known, erased, or
/// narrowed to a candidate set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMessage {
    entries: Vec<SubInput>,
}

impl PartialMessage {
    pub fn new(entries: Vec<SubInput>, config: &NetworkConfig) -> Result<Self> {
        if entries.len() != config.clusters() {
            return Err(Error::InvalidMessage(format!(
                "expected {} entries, got {}",
                config.clusters(),
                entries.len()
            )));
        }
        let l = config.cluster_size();
        for entry in &entries {
            match entry {
                SubInput::Known(s) => {
                    if *s as usize >= l {
                        return Err(Error::InvalidMessage(format!(
                            "symbol {s} outside [0, {l})"
                        )));
                    }
                }
                SubInput::Erased => {}
                SubInput::Candidates(set) => {
                    if set.is_empty() {
                        return Err(Error::InvalidMessage("empty candidate set".into()));
                    }
                    if set.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::InvalidMessage(
                            "candidate set must be sorted and deduplicated".into(),
                        ));
                    }
                    if set.last().map(|&s| s as usize >= l).unwrap_or(false) {
                        return Err(Error::InvalidMessage(format!("candidate outside [0, {l})")));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn from_message(msg: &Message) -> Self {
        Self {
            entries: msg.symbols().iter().map(|&s| SubInput::Known(s)).collect(),
        }
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<SubInput>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[SubInput] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses the text form: whitespace-separated symbols with `?` for an
    /// erased sub-message.
    pub fn parse(line: &str, config: &NetworkConfig) -> Result<Self> {
        let entries = line
            .split_whitespace()
            .map(|tok| {
                if tok == "?" {
                    Ok(SubInput::Erased)
                } else {
                    tok.parse::<u16>()
                        .map(SubInput::Known)
                        .map_err(|_| Error::InvalidMessage(format!("bad symbol {tok:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, config)
    }
}

impl fmt::Display for PartialMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            match e {
                SubInput::Known(s) => write!(f, "{s}")?,
                SubInput::Erased => f.write_str("?")?,
                SubInput::Candidates(set) => {
                    f.write_str("{")?;
                    for (m, s) in set.iter().enumerate() {
                        if m > 0 {
                            f.write_str("|")?;
                        }
                        write!(f, "{s}")?;
                    }
                    f.write_str("}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(c: usize, l: usize) -> NetworkConfig {
        NetworkConfig::new(c, l, 1).unwrap()
    }

    #[test]
    fn message_validation() {
        let config = cfg(3, 4);
        assert!(Message::new(vec![0, 1, 2], &config).is_ok());
        assert!(Message::new(vec![0, 1], &config).is_err());
        assert!(Message::new(vec![0, 1, 4], &config).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let config = cfg(3, 4);
        let msg = Message::parse("0 3 2", &config).unwrap();
        assert_eq!(msg.to_string(), "0 3 2");
        let pm = PartialMessage::parse("0 ? 2", &config).unwrap();
        assert_eq!(pm.to_string(), "0 ? 2");
        assert!(Message::parse("0 ? 2", &config).is_err());
        assert!(PartialMessage::parse("0 x 2", &config).is_err());
    }

    #[test]
    fn candidate_sets_must_be_canonical() {
        let config = cfg(3, 4);
        let ok = PartialMessage::new(
            vec![
                SubInput::Candidates(vec![0, 2]),
                SubInput::Known(3),
                SubInput::Erased,
            ],
            &config,
        );
        assert!(ok.is_ok());
        assert!(PartialMessage::new(
            vec![
                SubInput::Candidates(vec![]),
                SubInput::Known(0),
                SubInput::Known(0)
            ],
            &config,
        )
        .is_err());
        assert!(PartialMessage::new(
            vec![
                SubInput::Candidates(vec![2, 0]),
                SubInput::Known(0),
                SubInput::Known(0)
            ],
            &config,
        )
        .is_err());
        assert!(PartialMessage::new(
            vec![
                SubInput::Candidates(vec![0, 4]),
                SubInput::Known(0),
                SubInput::Known(0)
            ],
            &config,
        )
        .is_err());
    }

    #[test]
    fn partial_bits_enumerate_agreeing_symbols() {
        // 2-bit symbols; low bit erased on symbol 2 (binary 10) -> {2, 3}
        let config = cfg(3, 4);
        let e = SubInput::from_partial_bits(2, 0b10, &config).unwrap();
        assert_eq!(e, SubInput::Candidates(vec![2, 3]));
        // erasing every bit recovers the full set
        let all = SubInput::from_partial_bits(1, 0, &config).unwrap();
        assert_eq!(all, SubInput::Candidates(vec![0, 1, 2, 3]));
        // not defined for non-power-of-two cluster sizes
        assert!(SubInput::from_partial_bits(0, 0, &cfg(3, 6)).is_err());
    }
}
