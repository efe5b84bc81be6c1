//! Lloyd's k-means with k-means++ style seeded initialization.

use super::{Clusterer, ClusterLabeling, Label};
use crate::data::Metric;
use crate::error::{Error, Result};
use crate::rng::{RngSeed, SeedStream};

/// Fixed-count k-means. Always produces exactly `k` nonempty clusters on any
/// input with at least `k` points; whether the data actually splits into `k`
/// groups is not considered, which is precisely what the distortion benchmark
/// exercises.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    pub k: usize,
    pub seed: RngSeed,
    pub max_iter: usize,
    pub tol: f64,
}

/// Full fit output; `wcss_history` holds the objective after each Lloyd
/// iteration (assignment, empty-cluster repair, centroid update).
#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub labeling: ClusterLabeling,
    pub centroids: Vec<Vec<f64>>,
    pub wcss_history: Vec<f64>,
    pub iterations: usize,
}

impl KMeansFit {
    pub fn wcss(&self) -> f64 {
        self.wcss_history.last().copied().unwrap_or(0.0)
    }
}

impl Clusterer for KMeans {
    fn describe(&self) -> String {
        format!("kmeans:{}", self.k)
    }

    fn label(&self, points: &[Vec<f64>], metric: Metric) -> Result<ClusterLabeling> {
        Ok(self.fit(points, metric)?.labeling)
    }

    fn fixed_count(&self) -> bool {
        true
    }
}

impl KMeans {
    /// Runs Lloyd iteration until centroid movement drops below `tol` or
    /// `max_iter` is reached. With the cosine metric, points are L2
    /// normalized and clustered with Euclidean Lloyd so centroid updates
    /// stay well-defined.
    pub fn fit(&self, points: &[Vec<f64>], metric: Metric) -> Result<KMeansFit> {
        if points.is_empty() {
            return Err(Error::InvalidClustererParam(
                "k-means needs at least one point".into(),
            ));
        }
        if self.k == 0 || self.max_iter == 0 {
            return Err(Error::InvalidClustererParam(
                "k-means needs k >= 1 and max_iter >= 1".into(),
            ));
        }
        if self.k > points.len() {
            return Err(Error::KTooLarge {
                k: self.k,
                points: points.len(),
                fiber: String::new(),
            });
        }

        let normalized;
        let pts: &[Vec<f64>] = match metric {
            Metric::Euclidean => points,
            Metric::Cosine => {
                metric.validate_for(points)?;
                normalized = points
                    .iter()
                    .map(|p| {
                        let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
                        p.iter().map(|x| x / n).collect()
                    })
                    .collect::<Vec<Vec<f64>>>();
                &normalized
            }
        };

        let n = pts.len();
        let dim = pts[0].len();
        let k = self.k;
        let mut stream = SeedStream::new(self.seed);
        let mut centroids = plus_plus_init(pts, k, &mut stream);
        let mut assign = vec![0usize; n];
        let mut counts = vec![0usize; k];
        let mut wcss_history = Vec::new();
        let mut iterations = 0;

        for _ in 0..self.max_iter {
            iterations += 1;

            // assignment: nearest centroid, ties to the lowest index
            for (i, p) in pts.iter().enumerate() {
                let mut best = 0usize;
                let mut best_d = sq_dist(p, &centroids[0]);
                for (c, centroid) in centroids.iter().enumerate().skip(1) {
                    let d = sq_dist(p, centroid);
                    if d < best_d {
                        best_d = d;
                        best = c;
                    }
                }
                assign[i] = best;
            }

            counts.fill(0);
            for &a in &assign {
                counts[a] += 1;
            }

            // Re-seed each empty cluster to the point currently farthest
            // from its assigned centroid, so exactly k clusters survive.
            for c in 0..k {
                if counts[c] > 0 {
                    continue;
                }
                let mut pick: Option<(f64, usize)> = None;
                for (i, p) in pts.iter().enumerate() {
                    if counts[assign[i]] < 2 {
                        continue;
                    }
                    let d = sq_dist(p, &centroids[assign[i]]);
                    if pick.map_or(true, |(pd, _)| d > pd) {
                        pick = Some((d, i));
                    }
                }
                let (_, stolen) =
                    pick.expect("a cluster with >= 2 members exists while some cluster is empty");
                counts[assign[stolen]] -= 1;
                assign[stolen] = c;
                counts[c] = 1;
            }

            // centroid update
            let mut next = vec![vec![0.0; dim]; k];
            for (i, p) in pts.iter().enumerate() {
                for (acc, x) in next[assign[i]].iter_mut().zip(p) {
                    *acc += x;
                }
            }
            for (c, centroid) in next.iter_mut().enumerate() {
                for x in centroid.iter_mut() {
                    *x /= counts[c] as f64;
                }
            }

            let wcss: f64 = pts
                .iter()
                .zip(&assign)
                .map(|(p, &a)| sq_dist(p, &next[a]))
                .sum();
            if let Some(&prev) = wcss_history.last() {
                debug_assert!(
                    wcss <= prev + 1e-9 * (1.0 + prev),
                    "Lloyd objective increased: {prev} -> {wcss}"
                );
            }
            wcss_history.push(wcss);

            let movement = centroids
                .iter()
                .zip(&next)
                .map(|(a, b)| sq_dist(a, b).sqrt())
                .fold(0.0f64, f64::max);
            centroids = next;
            if movement < self.tol {
                break;
            }
        }

        let labels = assign.into_iter().map(Label::Cluster).collect();
        Ok(KMeansFit {
            labeling: ClusterLabeling::from_labels(labels),
            centroids,
            wcss_history,
            iterations,
        })
    }
}

/// k-means++ seeding: first center uniform, later centers drawn with
/// probability proportional to the squared distance to the nearest center
/// already chosen.
fn plus_plus_init(pts: &[Vec<f64>], k: usize, stream: &mut SeedStream) -> Vec<Vec<f64>> {
    let n = pts.len();
    let first = stream.index(n);
    let mut chosen = vec![first];
    let mut d2: Vec<f64> = pts.iter().map(|p| sq_dist(p, &pts[first])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let r = stream.uniform() * total;
            let mut acc = 0.0;
            let mut picked = None;
            for (i, &w) in d2.iter().enumerate() {
                if w <= 0.0 {
                    continue;
                }
                acc += w;
                if r < acc {
                    picked = Some(i);
                    break;
                }
            }
            // acc can land a hair under total; fall back to the last
            // positive-weight index
            picked.unwrap_or_else(|| {
                d2.iter()
                    .rposition(|&w| w > 0.0)
                    .expect("total > 0 implies a positive weight")
            })
        } else {
            // every remaining point duplicates a chosen center
            (0..n)
                .find(|i| !chosen.contains(i))
                .expect("k <= n leaves an unchosen index")
        };
        chosen.push(next);
        for (i, p) in pts.iter().enumerate() {
            let d = sq_dist(p, &pts[next]);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    chosen.into_iter().map(|i| pts[i].clone()).collect()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd k-means on Euclidean points; the operation behind the `kmeans`
/// registry entry.
pub fn kmeans_lloyd(
    points: &[Vec<f64>],
    k: usize,
    seed: RngSeed,
    max_iter: usize,
    tol: f64,
) -> Result<ClusterLabeling> {
    KMeans {
        k,
        seed,
        max_iter,
        tol,
    }
    .label(points, Metric::Euclidean)
}
