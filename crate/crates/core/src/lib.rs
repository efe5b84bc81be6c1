//! Mapper complexes with pluggable per-fiber clustering.
//!
//! The pipeline follows the standard Mapper construction: evaluate a lens on
//! a point cloud, pull an overlapping interval cover back through it,
//! cluster each fiber, and take the nerve of the refined cover. Clustering
//! back-ends live behind the [`clustering::Clusterer`] trait and are chosen
//! at runtime by name, because the choice is exactly what this crate is
//! built to study: fixed-count clusterers (k-means with a global k) distort
//! the complex's topology, while adaptive ones recover it. Betti numbers
//! over GF(2) quantify the distortion, and [`pipeline::failure_mode_bench`]
//! compares back-ends side by side on identical data and cover.

pub mod clustering;
pub mod cover;
pub mod data;
pub mod error;
pub mod export;
pub mod homology;
pub mod lens;
pub mod nerve;
pub mod pipeline;
pub mod rng;

pub use error::{Error, Result};
