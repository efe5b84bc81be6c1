//! Betti numbers of nerve complexes over GF(2): the distortion measure.
//!
//! Two independent routes are provided on purpose. For graphs (1-complexes)
//! `connected_components` and `graph_cycle_rank` give b0 and b1 by
//! union-find and the Euler formula. For the general case `betti_gf2` builds
//! boundary matrices over GF(2) and reduces them; on a 1-complex the two
//! routes must agree exactly, which the tests cross-check.

use serde::{Deserialize, Serialize};

use crate::nerve::{MapperGraph, NerveComplex};

/// Betti numbers b0..b_maxdim plus the Euler characteristic of the complex
/// they were computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    pub betti: Vec<usize>,
    pub euler: i64,
}

impl BettiProfile {
    /// A declared profile (ground truth for a synthetic shape); the Euler
    /// characteristic is the alternating sum of the declared numbers.
    pub fn declared(betti: Vec<usize>) -> Self {
        let euler = betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        BettiProfile { betti, euler }
    }

    /// b_k, defaulting to 0 past the computed range.
    pub fn b(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }
}

impl std::fmt::Display for BettiProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}]",
            self.betti
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Connected components of a Mapper graph by union-find: the partition (as
/// a root id per vertex) and b0.
pub fn connected_components(graph: &MapperGraph) -> (Vec<usize>, usize) {
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for e in &graph.edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            parent[hi] = lo;
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    (roots, distinct.len())
}

/// Cycle rank b1 = E - V + b0 of a simple graph.
pub fn graph_cycle_rank(graph: &MapperGraph) -> usize {
    let (_, b0) = connected_components(graph);
    graph.edge_count() + b0 - graph.vertex_count()
}

/// Dense GF(2) matrix with u64-packed rows, just big enough for Gaussian
/// elimination on desk-scale boundary matrices.
struct Gf2Matrix {
    rows: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            words,
            data: vec![0; rows * words.max(1)],
        }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    fn xor_rows(&mut self, target: usize, source: usize) {
        for w in 0..self.words {
            let s = self.data[source * self.words + w];
            self.data[target * self.words + w] ^= s;
        }
    }

    /// Rank by row elimination.
    fn rank(mut self, cols: usize) -> usize {
        let mut rank = 0;
        for c in 0..cols {
            let pivot = (rank..self.rows).find(|&r| self.get(r, c));
            let Some(pivot) = pivot else { continue };
            if pivot != rank {
                for w in 0..self.words {
                    self.data.swap(pivot * self.words + w, rank * self.words + w);
                }
            }
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_rows(r, rank);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// Betti numbers over GF(2) up to `up_to_dim` (capped at the complex's own
/// dimension): b_k = dim ker d_k - rank d_{k+1}, boundary matrices built
/// from the simplex lists. The empty complex yields [0].
pub fn betti_gf2(complex: &NerveComplex, up_to_dim: usize) -> BettiProfile {
    let Some(top) = complex.dimension() else {
        return BettiProfile {
            betti: vec![0],
            euler: 0,
        };
    };
    let max_k = up_to_dim.min(top);

    // index simplices of each dimension for boundary lookups
    let index_of: Vec<std::collections::HashMap<&[usize], usize>> = complex
        .simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, s)| (s.vertices.as_slice(), i))
                .collect()
        })
        .collect();

    // rank of the boundary map d_k: C_k -> C_{k-1}; d_0 = 0
    let boundary_rank = |k: usize| -> usize {
        if k == 0 || k > top {
            return 0;
        }
        let n_k = complex.count(k);
        let n_km1 = complex.count(k - 1);
        if n_k == 0 || n_km1 == 0 {
            return 0;
        }
        let mut m = Gf2Matrix::zeros(n_k, n_km1);
        for (col, s) in complex.simplices[k].iter().enumerate() {
            for drop in 0..s.vertices.len() {
                let mut face = s.vertices.clone();
                face.remove(drop);
                let row = index_of[k - 1]
                    .get(face.as_slice())
                    .copied()
                    .expect("downward closure: every face is a simplex");
                m.set(col, row);
            }
        }
        // rows are the k-simplices; rank is the same either way
        m.rank(n_km1)
    };

    let mut betti = Vec::with_capacity(max_k + 1);
    for k in 0..=max_k {
        let n_k = complex.count(k);
        let kernel = n_k - boundary_rank(k);
        let image_above = boundary_rank(k + 1);
        betti.push(kernel - image_above);
    }

    let euler: i64 = (0..=top)
        .map(|k| {
            let c = complex.count(k) as i64;
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum();

    BettiProfile { betti, euler }
}
