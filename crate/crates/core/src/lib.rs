//! Squaring dynamics in Z_N for N a product of two distinct odd primes.
//!
//! [`ring`] holds the arithmetic and the CRT split, [`partition`] the
//! nine-cell classification, [`groups`] the off-by-one groups and
//! homomorphism checkers, [`graph`] cycles, trees and arcs, [`factor`] the
//! toy attacks, [`oracle`] brute-force references and [`verify`] the
//! exhaustive per-pair suite built on all of them.

pub mod error;
pub mod factor;
pub mod graph;
pub mod groups;
pub mod oracle;
pub mod partition;
pub mod ring;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{CycleRecord, FunctionalGraph, RootedTree};
pub use partition::{classify, CardinalityReport, SubsetClass};
pub use ring::{CrtPair, RingContext, Side};
