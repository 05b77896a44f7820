//! Search for binary (±1) sequences with low aperiodic peak sidelobe level.
//!
//! The crate is organised bottom-up:
//!
//! * [`seqcore`] holds the sequence type, direct autocorrelation and the hex codec.
//! * [`flip`] is the linear-time single-element flip that keeps a sidelobe array
//!   consistent, plus the `Σ|x|^α` fitness family.
//! * [`rotation`] scans all cyclic rotations of a sequence incrementally.
//! * [`search`] is the stochastic hill-climbing kernel with quake perturbations.
//! * [`generators`] builds m-sequences, Legendre sequences and random starts.
//! * [`harness`] runs restart ensembles, hybrid seeding, the exhaustive oracle
//!   and the table of known optimal sequences.

pub mod error;
pub mod flip;
pub mod generators;
pub mod harness;
pub mod rotation;
pub mod search;
pub mod seqcore;

pub use error::{Error, Result};
pub use flip::{fitness, FitnessSpec, SidelobeState};
pub use generators::{legendre, mseq, random_sequence, LfsrSpec};
pub use harness::{ExperimentConfig, ExperimentRecord, HybridConfig, KnownOptimalEntry, SeedProvenance};
pub use rotation::{rotate_left, rotation_delta, scan_rotations, RotationScanResult};
pub use search::{quake, shc_run, Acceptance, SearchConfig, SearchOutcome, StopCriteria};
pub use seqcore::{autocorrelation, decode_hex, encode_hex, psl, sidelobes, BinarySequence, SidelobeArray, Transform};
