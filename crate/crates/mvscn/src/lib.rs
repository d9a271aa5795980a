//! Associative memory over sparse clustered networks with multi-valued
//! connection weights.
//!
//! Messages — one symbol per cluster — are stored as weighted cliques over
//! one node per cluster. Partial queries activate candidate nodes per
//! cluster and are resolved by iterative global decoding against the stored
//! connections. Multi-valued weights let deletions subtract a clique without
//! destroying connections shared with other stored messages, which is the
//! point of the whole construction.
//!
//! Module map:
//!
//! * [`config`] / [`weights`] / [`activation`] — network shape, the packed
//!   weight table and node activation bitmaps.
//! * [`codec`] — message-to-activation mapping and query erasure.
//! * [`learning`] — clique storage, deletion and density accounting.
//! * [`decoding`] — the three global-decoding rules and the convergence loop.
//! * [`experiment`] — seeded Monte-Carlo error-rate harness and sweeps.
//! * [`oracle`] — brute-force reference implementations for tests.
//! * [`snapshot`] — flat binary serialization of a network.

pub mod activation;
pub mod codec;
pub mod config;
pub mod decoding;
mod error;
pub mod experiment;
pub mod learning;
pub mod message;
pub mod oracle;
pub mod snapshot;
pub mod weights;

pub use activation::ActivationState;
pub use codec::{activation_to_message, erase, local_decode, Retrieved};
pub use config::NetworkConfig;
pub use decoding::{decode, winner_take_all, Arch, DecodeResult, Decoder, ScoreField};
pub use error::{Error, Result};
pub use experiment::{
    equal_memory_binary_spec, run_experiment, run_trial, sweep, ExperimentResult, ExperimentSpec,
    Load, SweepAxis, SweepRow, TrialStats,
};
pub use message::{Message, PartialMessage, SubInput};
pub use weights::WeightMatrix;
