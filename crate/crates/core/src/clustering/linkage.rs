//! Single-linkage clustering cut by the largest-gap histogram heuristic.
//!
//! Single-linkage merge heights equal the edge lengths of a minimum spanning
//! tree of the complete distance graph, so the dendrogram is represented
//! here by the MST. The cut threshold comes from a histogram of those merge
//! distances: short edges connect points inside clusters and populate the
//! low bins; the edges that merge genuinely separate clusters sit apart,
//! past one or more empty bins. Cutting at the first such empty bin keeps
//! exactly the within-cluster edges, and the cluster count falls out of the
//! data instead of being chosen up front.

use super::{Clusterer, ClusterLabeling, Label};
use crate::data::{pairwise_distances, Metric};
use crate::error::{Error, Result};

/// Single-linkage with the largest-gap cut; `num_bins` controls the merge
/// distance histogram resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleLinkageGap {
    pub num_bins: usize,
}

impl Clusterer for SingleLinkageGap {
    fn describe(&self) -> String {
        format!("gap:{}", self.num_bins)
    }

    fn label(&self, points: &[Vec<f64>], metric: Metric) -> Result<ClusterLabeling> {
        if self.num_bins < 2 {
            return Err(Error::InvalidClustererParam(
                "gap num_bins must be >= 2".into(),
            ));
        }
        if points.is_empty() {
            return Ok(ClusterLabeling::from_labels(Vec::new()));
        }
        let edges = mst_edges(points, metric)?;
        let distances: Vec<f64> = edges.iter().map(|e| e.0).collect();
        let threshold = largest_gap_cut(&distances, self.num_bins)?;

        // components of the MST restricted to edges shorter than the cut
        let mut dsu = Dsu::new(points.len());
        for &(w, a, b) in &edges {
            if w < threshold {
                dsu.union(a, b);
            }
        }

        // labels by ascending minimum point index per component
        let mut label_of_root = vec![usize::MAX; points.len()];
        let mut next = 0usize;
        let mut labels = Vec::with_capacity(points.len());
        for i in 0..points.len() {
            let root = dsu.find(i);
            if label_of_root[root] == usize::MAX {
                label_of_root[root] = next;
                next += 1;
            }
            labels.push(Label::Cluster(label_of_root[root]));
        }
        Ok(ClusterLabeling::from_labels(labels))
    }
}

/// Single-linkage merge heights: the sorted edge lengths of a minimum
/// spanning tree of the complete distance graph. Exactly `n - 1` values.
pub fn single_linkage_merge_distances(points: &[Vec<f64>], metric: Metric) -> Result<Vec<f64>> {
    let mut distances: Vec<f64> = mst_edges(points, metric)?.iter().map(|e| e.0).collect();
    distances.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    Ok(distances)
}

/// MST of the complete graph by Prim's algorithm: (weight, a, b) triples in
/// insertion order. O(n^2), which is fine at fiber scale.
fn mst_edges(points: &[Vec<f64>], metric: Metric) -> Result<Vec<(f64, usize, usize)>> {
    let n = points.len();
    if n <= 1 {
        return Ok(Vec::new());
    }
    let dist = pairwise_distances(points, metric)?;
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut best_from = vec![0usize; n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = dist.at(0, j);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut pick = usize::MAX;
        let mut pick_d = f64::INFINITY;
        for j in 0..n {
            if !in_tree[j] && best[j] < pick_d {
                pick_d = best[j];
                pick = j;
            }
        }
        edges.push((pick_d, best_from[pick], pick));
        in_tree[pick] = true;
        for j in 0..n {
            if !in_tree[j] && dist.at(pick, j) < best[j] {
                best[j] = dist.at(pick, j);
                best_from[j] = pick;
            }
        }
    }
    Ok(edges)
}

/// Cut threshold from the merge-distance histogram.
///
/// The histogram spans [0, max] with `num_bins` equal-width bins. The cut is
/// the left edge of the first empty bin that has occupied bins on both
/// sides: below it the within-cluster edges, above it the merge edges. When
/// no such bin exists the scales are indistinguishable and the result is
/// +inf, i.e. a single cluster. An empty input also yields +inf.
pub fn largest_gap_cut(merge_distances: &[f64], num_bins: usize) -> Result<f64> {
    if num_bins < 2 {
        return Err(Error::InvalidClustererParam(
            "gap num_bins must be >= 2".into(),
        ));
    }
    let max = merge_distances.iter().fold(0.0f64, |m, &d| m.max(d));
    if merge_distances.is_empty() || max <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let width = max / num_bins as f64;
    let mut occupied = vec![false; num_bins];
    for &d in merge_distances {
        let bin = ((d / width) as usize).min(num_bins - 1);
        occupied[bin] = true;
    }
    let last_occupied = occupied
        .iter()
        .rposition(|&o| o)
        .expect("max > 0 occupies a bin");
    let first_occupied = occupied.iter().position(|&o| o).unwrap();
    for (bin, &occ) in occupied.iter().enumerate() {
        if !occ && bin > first_occupied && bin < last_occupied {
            return Ok(bin as f64 * width);
        }
    }
    Ok(f64::INFINITY)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // root at the smaller index so component roots are stable
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}
