//! Exact geometric pattern matching by reduction to k-SUM.
//!
//! The library decides whether a scene of `n` points contains the image of a
//! fixed `k`-point pattern under a similarity transformation (in the plane)
//! or an affine transformation (in `d`-space). Both searches are encoded in
//! linear time as linear degeneracy tests, folded into pure k-SUM instances,
//! and handed to exact solvers. All arithmetic is arbitrary-precision
//! rational, so answers are exact: every reported match comes with a
//! transformation that reproduces the matched points bit for bit.
//!
//! Module map:
//! - [`numeric`]: rationals, complex rationals, and the Hadamard vector
//!   rings every instance lives in.
//! - [`ksum`]: instance types, reductions, solvers, and the verified
//!   randomized pipeline.
//! - [`geom`]: pattern/scene types, the similarity and affine encodings,
//!   and transform recovery.
//! - [`oracle`]: independent brute-force matchers used as ground truth.
//! - [`generators`]: reproducible planted, random, and lattice instances.
//! - [`files`]: JSON file formats for instances, patterns, scenes, reports.

pub mod bench;
pub mod cli;
pub mod error;
pub mod files;
pub mod generators;
pub mod geom;
pub mod ksum;
pub mod numeric;
pub mod oracle;
pub mod selftest;

pub use error::{Error, Result};
