//! Fuzzy-payoff-game channel allocation over partially overlapping
//! channels in clustered UAV mesh networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`fuzzy`] and [`quadrature`]: triangular fuzzy numbers and their
//!   ranking by satisfaction functions under a viewpoint.
//! * [`preference`]: fuzzy preference relations and least-deviation
//!   priority vectors.
//! * [`network`], [`mobility`], [`gain`]: topology, clustering, motion and
//!   uncertain channel gains.
//! * [`interference`], [`plan`], [`utility`]: channel structure, SINR,
//!   rate, generalized throughput and constraints.
//! * [`environment`], [`allocator`]: the slot loop with fuzzy, crisp and
//!   random channel selection.
//! * [`config`], [`experiment`], [`stats`], [`output`]: Monte Carlo
//!   harness and file formats.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocator;
pub mod config;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod fuzzy;
pub mod gain;
pub mod interference;
pub mod mobility;
pub mod network;
pub mod output;
pub mod plan;
pub mod preference;
pub mod quadrature;
pub mod seeds;
pub mod stats;
pub mod utility;

pub use allocator::{AllocationTrace, LearnerConfig};
pub use config::{ScenarioConfig, Scheme};
pub use error::{Error, Result};
pub use experiment::{run_experiment, Experiment, RunRecord};
pub use fuzzy::{Stance, Tfn, Viewpoint};
pub use interference::ChannelSet;
pub use network::NetworkState;
pub use plan::ChannelPlan;
pub use preference::{FprMatrix, PreferenceParams, PriorityVector};
pub use utility::Metric;
