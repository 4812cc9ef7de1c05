//! Rooted plane trees, 321-avoiding permutations, and the laws governing the
//! number and location of their fixed points.
//!
//! The crate is organised bottom-up:
//!
//! - [`perm`]: permutations, pattern containment, fixed points;
//! - [`tree`]: plane trees, Dyck words, leaf and fringe statistics;
//! - [`bijection`]: trees on `n + 1` vertices ↔ `Av_n(321)`;
//! - [`dist`] and [`stats`]: probability mass functions, empirical laws,
//!   distances, tests and exact enumeration oracles;
//! - [`rng`], [`sample`] and [`experiment`]: seeded samplers and parallel
//!   batches;
//! - [`report`] and [`acceptance`]: output files and the acceptance checks.

pub mod acceptance;
pub mod bijection;
pub mod dist;
pub mod error;
pub mod experiment;
pub mod perm;
pub mod report;
pub mod rng;
pub mod sample;
pub mod stats;
pub mod tree;

pub use bijection::{perm_to_tree, tree_to_perm};
pub use dist::{EmpiricalDist, Law, Pmf};
pub use error::{Error, Result};
pub use perm::{FixedPointMeasure, Permutation};
pub use rng::RngStream;
pub use tree::{DyckPath, PlaneTree};
