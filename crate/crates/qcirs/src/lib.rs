//! Construction, search, and verification of compact fully-connected
//! QC-LDPC codes of girth 8, 10, and 12.
//!
//! The crate is organized around the exponent-matrix view of a quasi-cyclic
//! code: an `m x n` grid of circulant shifts over `Z_N`. Girth conditions are
//! algebraic (`theta` sums over cycles of the grid), which lets short codes be
//! found by sieving `Z_N` for a structured second column and then running a
//! controlled greedy search for the remaining column multipliers.
//!
//! * [`zring`] - modular arithmetic and the integer-ring sieve.
//! * [`cycles`] - cycle enumeration, strict-equivalence classes, counts.
//! * [`expmat`] - exponent matrices, girth checks, Tanner-graph oracle, alist.
//! * [`irs`] - structured matrix builders, IR-equivalence, sieve maps.
//! * [`search`] - the controlled greedy search and N-min scans.
//! * [`corpus`] - the bundled table of published code records.

pub mod corpus;
pub mod cycles;
pub mod expmat;
pub mod irs;
pub mod search;
pub mod zring;
