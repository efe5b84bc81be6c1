//! Silhouette score for cluster-validity selection.

use super::{ClusterLabeling, Label};
use crate::data::{pairwise_distances, Metric};
use crate::error::{Error, Result};

/// Mean silhouette over non-noise points: per point, (b - a) / max(a, b)
/// with a the mean distance to its own cluster (self excluded) and b the
/// smallest mean distance to another cluster. Points in singleton clusters
/// contribute 0, as does a degenerate point with a = b = 0. Undefined for
/// fewer than two clusters.
pub fn silhouette_score(
    points: &[Vec<f64>],
    labeling: &ClusterLabeling,
    metric: Metric,
) -> Result<f64> {
    let k = labeling.num_clusters();
    if k < 2 {
        return Err(Error::UndefinedSilhouette { clusters: k });
    }
    let dist = pairwise_distances(points, metric)?;
    let members: Vec<Vec<usize>> = (0..k).map(|c| labeling.cluster_members(c)).collect();

    let mut total = 0.0;
    let mut counted = 0usize;
    for (i, &label) in labeling.labels().iter().enumerate() {
        let own = match label {
            Label::Noise => continue,
            Label::Cluster(c) => c,
        };
        counted += 1;
        if members[own].len() < 2 {
            continue; // singleton contributes 0
        }
        let a = members[own]
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist.at(i, j))
            .sum::<f64>()
            / (members[own].len() - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| {
                members[c].iter().map(|&j| dist.at(i, j)).sum::<f64>() / members[c].len() as f64
            })
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / counted as f64)
}
