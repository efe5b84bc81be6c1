//! Density-based clustering with an explicit noise category.

use super::{Clusterer, ClusterLabeling, Label};
use crate::data::{pairwise_distances, Metric};
use crate::error::{Error, Result};

/// Standard DBSCAN. A core point has at least `min_pts` neighbors within
/// `eps` (itself included); clusters are the connected components of core
/// points under eps-adjacency, border points attach to a neighboring core
/// cluster (ties to the lowest label), everything else is noise.
#[derive(Debug, Clone, PartialEq)]
pub struct Dbscan {
    pub eps: f64,
    pub min_pts: usize,
}

impl Clusterer for Dbscan {
    fn describe(&self) -> String {
        format!("dbscan:{}:{}", self.eps, self.min_pts)
    }

    fn label(&self, points: &[Vec<f64>], metric: Metric) -> Result<ClusterLabeling> {
        if !(self.eps > 0.0) {
            return Err(Error::InvalidClustererParam("dbscan eps must be > 0".into()));
        }
        if self.min_pts == 0 {
            return Err(Error::InvalidClustererParam(
                "dbscan min_pts must be >= 1".into(),
            ));
        }
        let n = points.len();
        if n == 0 {
            return Ok(ClusterLabeling::from_labels(Vec::new()));
        }
        let dist = pairwise_distances(points, metric)?;
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| dist.at(i, j) <= self.eps).collect())
            .collect();
        let is_core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= self.min_pts).collect();

        // cluster ids by flood fill over core points, in ascending index
        // order so labeling is deterministic
        let mut cluster = vec![usize::MAX; n];
        let mut next = 0usize;
        for start in 0..n {
            if !is_core[start] || cluster[start] != usize::MAX {
                continue;
            }
            let id = next;
            next += 1;
            let mut queue = vec![start];
            cluster[start] = id;
            while let Some(p) = queue.pop() {
                for &q in &neighbors[p] {
                    if is_core[q] && cluster[q] == usize::MAX {
                        cluster[q] = id;
                        queue.push(q);
                    }
                }
            }
        }

        let labels = (0..n)
            .map(|i| {
                if is_core[i] {
                    Label::Cluster(cluster[i])
                } else {
                    // border point: lowest cluster label among core neighbors
                    neighbors[i]
                        .iter()
                        .filter(|&&q| is_core[q])
                        .map(|&q| cluster[q])
                        .min()
                        .map_or(Label::Noise, Label::Cluster)
                }
            })
            .collect();
        Ok(ClusterLabeling::from_labels(labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_blobs;
    use crate::rng::{RngSeed, SeedStream};

    #[test]
    fn min_pts_one_has_no_noise() {
        let pts = vec![vec![0.0], vec![0.5], vec![10.0], vec![100.0]];
        let l = Dbscan {
            eps: 1.0,
            min_pts: 1,
        }
        .label(&pts, Metric::Euclidean)
        .unwrap();
        assert_eq!(l.noise_count(), 0);
        // eps-connected components: {0,1}, {2}, {3}
        assert_eq!(l.num_clusters(), 3);
        assert_eq!(l.label(0), l.label(1));
        assert_ne!(l.label(2), l.label(3));
    }

    #[test]
    fn two_blobs_no_noise() {
        let d = generate_blobs(&[vec![0.0, 0.0], vec![10.0, 0.0]], 50, 0.5, RngSeed(1)).unwrap();
        let l = Dbscan {
            eps: 1.0,
            min_pts: 3,
        }
        .label(d.points(), Metric::Euclidean)
        .unwrap();
        assert_eq!(l.num_clusters(), 2);
        assert_eq!(l.noise_count(), 0);
        for i in 0..100 {
            let expect = if i < 50 { Label::Cluster(0) } else { Label::Cluster(1) };
            assert_eq!(l.label(i), expect);
        }
    }

    #[test]
    fn isolated_point_is_noise() {
        let d = generate_blobs(&[vec![0.0, 0.0]], 50, 0.5, RngSeed(4)).unwrap();
        let mut pts = d.points().to_vec();
        pts.push(vec![100.0, 0.0]);
        let l = Dbscan {
            eps: 1.0,
            min_pts: 3,
        }
        .label(&pts, Metric::Euclidean)
        .unwrap();
        assert_eq!(l.num_clusters(), 1);
        assert_eq!(l.label(50), Label::Noise);
        assert_eq!(l.noise_count(), 1);
    }

    #[test]
    fn border_tie_goes_to_lowest_label() {
        // cores at -0.9 and 0.9 (4 neighbors each incl. themselves), the
        // point at 0 reaches a core on each side but is not core itself
        let pts = vec![
            vec![-1.3],
            vec![-1.1],
            vec![-0.9],
            vec![0.9],
            vec![1.1],
            vec![1.3],
            vec![0.0],
        ];
        let l = Dbscan {
            eps: 1.0,
            min_pts: 4,
        }
        .label(&pts, Metric::Euclidean)
        .unwrap();
        assert_eq!(l.num_clusters(), 2);
        assert_eq!(l.noise_count(), 0);
        assert_eq!(l.label(6), Label::Cluster(0));
    }

    #[test]
    fn permutation_equivariance_as_partition() {
        let d = generate_blobs(
            &[vec![0.0, 0.0], vec![6.0, 0.0]],
            20,
            0.4,
            RngSeed(9),
        )
        .unwrap();
        let pts = d.points();
        let spec = Dbscan {
            eps: 1.0,
            min_pts: 3,
        };
        let base = spec.label(pts, Metric::Euclidean).unwrap();

        let mut stream = SeedStream::new(RngSeed(17));
        let mut perm: Vec<usize> = (0..pts.len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, stream.index(i + 1));
        }
        let permuted: Vec<Vec<f64>> = perm.iter().map(|&i| pts[i].clone()).collect();
        let shuffled = spec.label(&permuted, Metric::Euclidean).unwrap();

        assert_eq!(base.num_clusters(), shuffled.num_clusters());
        for a in 0..pts.len() {
            assert_eq!(
                base.label(perm[a]).is_noise(),
                shuffled.label(a).is_noise()
            );
            for b in (a + 1)..pts.len() {
                if base.label(perm[a]).is_noise() || base.label(perm[b]).is_noise() {
                    continue;
                }
                let before = base.label(perm[a]) == base.label(perm[b]);
                let after = shuffled.label(a) == shuffled.label(b);
                assert_eq!(before, after);
            }
        }
    }
}
