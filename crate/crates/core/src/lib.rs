//! Fault-tolerant distance structures for directed graphs.
//!
//! The crate provides:
//!
//! * exact shortest paths with globally unique tie-breaking ([`sssp`], [`apsp`]),
//!   plus brute-force replacement paths, eccentricities, diameters, and strong
//!   bridges used as ground truth everywhere else;
//! * path-reporting distance sensitivity oracles for a single edge failure:
//!   an exact reference oracle, a radius-truncated core, and the iterative
//!   pivot extension that grows the radius by 3/2 per round ([`dso`]);
//! * the hierarchical double-pivot hitting-set construction and its greedy
//!   core ([`hierarchy`], [`greedy`]);
//! * diameter and eccentricity oracles built on top of those pieces
//!   ([`fdo`], [`feo`], [`dag_feo`]);
//! * generators and decoders for the two incompressibility graph families
//!   ([`lowerbound`]) and the single-source replacement-path hitting-set
//!   subroutines ([`ssrp`]);
//! * seeded random instance generators ([`gen`]) and the verification suites
//!   driving the CLI ([`suites`]).
//!
//! Everything is deterministic: vertex sets are kept sorted, ties are broken
//! by id, and all randomness flows through explicit seeds.

#![forbid(unsafe_code)]

pub mod dag_feo;
pub mod dist;
pub mod dso;
pub mod error;
pub mod exact;
pub mod fdo;
pub mod feo;
pub mod gen;
pub mod graph;
pub mod greedy;
pub mod hierarchy;
pub mod lowerbound;
pub(crate) mod par;
pub mod report;
pub mod split;
pub mod ssrp;
pub mod sssp;
pub mod suites;

pub use dist::{Dist, PerturbedDist, Rat};
pub use error::{Error, Result};
pub use graph::{Graph, Path};
pub use sssp::{apsp, sssp, ApspData};
