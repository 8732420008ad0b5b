//! Fountain-code toolkit core: binary LT and Raptor codes, an inactivation
//! (ML erasure) decoder, exact and approximate predictions of the
//! inactivation count, a Raptor failure-probability bound, and
//! degree-distribution design by simulated annealing.
//!
//! `no_std` + `alloc` compatible; the `std` feature (default) only adds
//! `std::error::Error` impls and the std RNG plumbing.

#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod bound;
pub mod degree;
pub mod design;
pub mod fsm;
pub mod gf2;
pub mod inactivation;
pub mod lt;
pub mod math;
pub mod outer;
pub mod poisson;
pub mod raptor;
pub mod rng;

pub use degree::{lrfc_distribution, r10_distribution, robust_soliton, DegreeDistribution};
pub use gf2::{SparseBinMatrix, Symbol};
pub use inactivation::{decode, decode_structure, DecodeOutcome, DecoderReport};
pub use lt::{encode, receive, Codeword, LtConfig, ReceivedSystem};
pub use outer::{hamming_outer, OuterCode};
pub use raptor::{raptor_decode, raptor_encode, RaptorConfig};
