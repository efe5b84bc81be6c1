//! Per-fiber clustering back-ends.
//!
//! Every back-end implements [`Clusterer`] and is registered by name in
//! [`registry::ClustererRegistry`], so pipelines select them at runtime from
//! a config document or a compact CLI string like `kmeans:2` or `gap`.
//!
//! The back-ends split into two families. `kmeans` always returns exactly
//! the requested number of clusters no matter what the fiber looks like
//! ([`Clusterer::fixed_count`] is true). The adaptive family --
//! `single_linkage_gap`, `dbscan`, `adaptive_kmeans` -- decides the cluster
//! count from the data; none of their constructors takes a cluster count.

pub mod adaptive;
pub mod dbscan;
pub mod kmeans;
pub mod linkage;
pub mod registry;
pub mod silhouette;
mod spec;

pub use adaptive::AdaptiveKMeans;
pub use dbscan::Dbscan;
pub use kmeans::{kmeans_lloyd, KMeans, KMeansFit};
pub use linkage::{largest_gap_cut, single_linkage_merge_distances, SingleLinkageGap};
pub use registry::ClustererRegistry;
pub use silhouette::silhouette_score;
pub use spec::ClustererSpec;

use crate::data::Metric;
use crate::error::Result;

/// Cluster assignment of one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Cluster(usize),
    /// Unclustered; only DBSCAN produces it.
    Noise,
}

impl Label {
    pub fn is_noise(&self) -> bool {
        matches!(self, Label::Noise)
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Cluster(c) => write!(f, "{c}"),
            Label::Noise => write!(f, "NOISE"),
        }
    }
}

/// Labels for one point list, aligned index-for-index with the input order.
/// Non-noise labels always form the contiguous range 0..num_clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabeling {
    labels: Vec<Label>,
    num_clusters: usize,
}

impl ClusterLabeling {
    pub fn from_labels(labels: Vec<Label>) -> Self {
        let num_clusters = labels
            .iter()
            .filter_map(|l| match l {
                Label::Cluster(c) => Some(c + 1),
                Label::Noise => None,
            })
            .max()
            .unwrap_or(0);
        debug_assert!(
            (0..num_clusters).all(|c| labels.contains(&Label::Cluster(c))),
            "cluster labels must be contiguous"
        );
        ClusterLabeling {
            labels,
            num_clusters,
        }
    }

    /// All points in one cluster.
    pub fn single_cluster(n: usize) -> Self {
        ClusterLabeling {
            labels: vec![Label::Cluster(0); n],
            num_clusters: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_noise()).count()
    }

    /// Member positions (input-order indices) of cluster `c`.
    pub fn cluster_members(&self, c: usize) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Label::Cluster(c))
            .map(|(i, _)| i)
            .collect()
    }
}

/// A per-fiber clustering strategy.
///
/// Implementations must be deterministic: the same points, metric and
/// configuration always yield the same labeling, so whole pipeline runs are
/// reproducible and fibers can be clustered concurrently.
pub trait Clusterer: std::fmt::Debug + Send + Sync {
    /// Compact identifier used in reports, e.g. `kmeans:2` or `gap:10`.
    fn describe(&self) -> String;

    /// Labels the given points. `points` is one fiber's point list; indices
    /// in the returned labeling refer to positions in that list.
    fn label(&self, points: &[Vec<f64>], metric: Metric) -> Result<ClusterLabeling>;

    /// True when the back-end returns a preset cluster count regardless of
    /// the data.
    fn fixed_count(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeling_counts_clusters() {
        let l = ClusterLabeling::from_labels(vec![
            Label::Cluster(0),
            Label::Noise,
            Label::Cluster(1),
            Label::Cluster(0),
        ]);
        assert_eq!(l.num_clusters(), 2);
        assert_eq!(l.noise_count(), 1);
        assert_eq!(l.cluster_members(0), vec![0, 3]);
    }

    #[test]
    fn single_cluster_labeling() {
        let l = ClusterLabeling::single_cluster(4);
        assert_eq!(l.num_clusters(), 1);
        assert!(l.labels().iter().all(|&x| x == Label::Cluster(0)));
        assert_eq!(ClusterLabeling::single_cluster(0).num_clusters(), 0);
    }

    #[test]
    fn noise_label_displays_as_noise() {
        assert_eq!(Label::Noise.to_string(), "NOISE");
        assert_eq!(Label::Cluster(3).to_string(), "3");
    }
}
