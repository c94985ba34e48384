//! Exact chirality analysis and racemization dynamics for finite quasigroups.
//!
//! A finite quasigroup of order `n` is represented by its Cayley table, a
//! Latin square over the symbols `0..n`. The crate provides:
//!
//! * exact representations of squares, isotopisms (independent row, column,
//!   and symbol relabelings) and parastrophes (role permutations), with the
//!   group operations on them ([`square`], [`isotopism`], [`parastrophe`]);
//! * intercalate (2x2 subsquare) statistics, which are isotopy invariants
//!   usable both as search pruning data and as cheap chirality certificates
//!   ([`intercalates`]);
//! * a complete, deterministic isotopism search and small-order enumeration
//!   and classification of Latin squares ([`search`]);
//! * continuous-time "racemization" dynamics whose jump rates are generated
//!   by mirror isotopisms, together with exact samplers ([`dynamics`]).
//!
//! Everything is exact: integer data structures throughout, and the few real
//! quantities (rates, probabilities) are computed so that equal multisets of
//! inputs give bit-identical `f64` results.

pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod intercalates;
pub mod isotopism;
pub mod parastrophe;
pub mod perm;
pub mod rng;
pub mod search;
pub mod square;

pub use error::Error;
pub use isotopism::{CycleTypeTriple, Isotopism};
pub use parastrophe::ParastropheId;
pub use perm::{CycleType, Perm};
pub use square::LatinSquare;
