//! k-means with the cluster count chosen per fiber by silhouette score.

use super::{silhouette_score, Clusterer, ClusterLabeling, KMeans};
use crate::data::Metric;
use crate::error::{Error, Result};
use crate::rng::RngSeed;

/// Minimum best silhouette for a multi-cluster answer; below this the fiber
/// is treated as a single cluster.
pub const SILHOUETTE_FALLBACK: f64 = 0.25;

/// Runs k-means once per candidate k in [max(2, k_min), min(k_max, n)] and
/// keeps the k with the best silhouette score (ties to the smallest k).
/// Falls back to one cluster when the fiber is too small to support the
/// candidate range (n < 2 * max(2, k_min)) or when even the best score stays
/// under [`SILHOUETTE_FALLBACK`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveKMeans {
    pub k_min: usize,
    pub k_max: usize,
    pub seed: RngSeed,
    pub max_iter: usize,
    pub tol: f64,
}

impl Clusterer for AdaptiveKMeans {
    fn describe(&self) -> String {
        format!("adaptive:{}:{}", self.k_min, self.k_max)
    }

    fn label(&self, points: &[Vec<f64>], metric: Metric) -> Result<ClusterLabeling> {
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::InvalidClustererParam(
                "adaptive kmeans needs 1 <= k_min <= k_max".into(),
            ));
        }
        if points.is_empty() {
            return Ok(ClusterLabeling::from_labels(Vec::new()));
        }
        let n = points.len();
        let lo = self.k_min.max(2);
        let hi = self.k_max.min(n);
        if hi < lo || n < 2 * lo {
            return Ok(ClusterLabeling::single_cluster(n));
        }

        let mut best: Option<(f64, ClusterLabeling)> = None;
        for k in lo..=hi {
            let labeling = KMeans {
                k,
                seed: self.seed,
                max_iter: self.max_iter,
                tol: self.tol,
            }
            .label(points, metric)?;
            let score = silhouette_score(points, &labeling, metric)?;
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                best = Some((score, labeling));
            }
        }
        let (score, labeling) = best.expect("candidate range is nonempty");
        if score < SILHOUETTE_FALLBACK {
            return Ok(ClusterLabeling::single_cluster(n));
        }
        Ok(labeling)
    }
}
