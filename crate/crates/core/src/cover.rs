//! Overlapping cubical covers of the lens range and the pullback covering of
//! the dataset.
//!
//! Interval construction per axis with range [a, b], n intervals and overlap
//! fraction g: width w = (b - a) / ((n - 1)(1 - g) + 1), stride w(1 - g),
//! interval i = [a + i w (1 - g), a + i w (1 - g) + w]. Consecutive intervals
//! then overlap on exactly the fraction g of an interval's width, the first
//! interval starts at a and the last ends at b. Boxes are closed on both
//! ends, so boundary lens values land in both adjacent intervals and the
//! covering property survives floating point.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lens::LensValues;

/// One closed interval of a cover axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Product cover of the lens range by axis-aligned closed boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicalCover {
    pub n_intervals: Vec<usize>,
    pub overlap_frac: f64,
    /// Per axis, the interval list in index order.
    pub axes: Vec<Vec<Interval>>,
}

impl CubicalCover {
    pub fn lens_dim(&self) -> usize {
        self.axes.len()
    }

    /// Cover elements in lexicographic multi-index order.
    pub fn multi_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for i in 0..axis.len() {
                    let mut idx = prefix.clone();
                    idx.push(i);
                    next.push(idx);
                }
            }
            out = next;
        }
        out
    }

    /// Whether a lens value lies in the closed box at `index`.
    pub fn box_contains(&self, index: &[usize], value: &[f64]) -> bool {
        index
            .iter()
            .zip(&self.axes)
            .zip(value)
            .all(|((&i, axis), &v)| axis[i].contains(v))
    }
}

/// Fibers of the pullback cover: for each cover element, the point indices
/// whose lens value lands in it. Empty fibers are retained so cover indices
/// stay dense and reports can show them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PullbackCover {
    pub fibers: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl PullbackCover {
    pub fn fiber(&self, index: &[usize]) -> Option<&[usize]> {
        self.fibers.get(index).map(Vec::as_slice)
    }

    pub fn nonempty(&self) -> impl Iterator<Item = (&Vec<usize>, &Vec<usize>)> {
        self.fibers.iter().filter(|(_, pts)| !pts.is_empty())
    }
}

/// Builds the cubical cover of the lens range. `n_intervals` has one entry
/// per lens axis. A degenerate axis (min == max) collapses to the single
/// interval [a, a] with a warning.
pub fn build_cover(
    lens_values: &LensValues,
    n_intervals: &[usize],
    overlap_frac: f64,
) -> Result<CubicalCover> {
    if !(0.0..1.0).contains(&overlap_frac) {
        return Err(Error::InvalidOverlap(overlap_frac));
    }
    if n_intervals.is_empty() || n_intervals.iter().any(|&n| n == 0) {
        return Err(Error::InvalidIntervalCount);
    }
    if n_intervals.len() != lens_values.dim() {
        return Err(Error::DimensionMismatch {
            expected: lens_values.dim(),
            got: n_intervals.len(),
            context: "n_intervals entries vs lens dimension".into(),
        });
    }
    if lens_values.is_empty() {
        return Err(Error::InvalidConfig(
            "cannot build a cover over empty lens values".into(),
        ));
    }

    let mut axes = Vec::with_capacity(n_intervals.len());
    for (axis, &n) in n_intervals.iter().enumerate() {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in lens_values.values() {
            lo = lo.min(v[axis]);
            hi = hi.max(v[axis]);
        }
        axes.push(axis_intervals(axis, lo, hi, n, overlap_frac));
    }
    Ok(CubicalCover {
        n_intervals: n_intervals.to_vec(),
        overlap_frac,
        axes,
    })
}

fn axis_intervals(axis: usize, a: f64, b: f64, n: usize, g: f64) -> Vec<Interval> {
    if a == b {
        log::warn!("lens axis {axis} has degenerate range [{a}, {a}]; using a single interval");
        return vec![Interval { lo: a, hi: a }];
    }
    let w = (b - a) / ((n as f64 - 1.0) * (1.0 - g) + 1.0);
    let stride = w * (1.0 - g);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = a + i as f64 * stride;
        let hi = if i == n - 1 { b } else { lo + w };
        out.push(Interval { lo, hi });
    }
    out
}

/// Pulls the cover back through the lens: fiber(i) = indices of points whose
/// lens value lies in box Y_i.
pub fn pullback(lens_values: &LensValues, cover: &CubicalCover) -> Result<PullbackCover> {
    if lens_values.dim() != cover.lens_dim() {
        return Err(Error::DimensionMismatch {
            expected: cover.lens_dim(),
            got: lens_values.dim(),
            context: "lens dimension vs cover dimension".into(),
        });
    }
    let mut fibers = BTreeMap::new();
    for index in cover.multi_indices() {
        let members: Vec<usize> = lens_values
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| cover.box_contains(&index, v))
            .map(|(i, _)| i)
            .collect();
        fibers.insert(index, members);
    }
    Ok(PullbackCover { fibers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::generate_circle;
    use crate::lens::{apply_lens, LensSpec};
    use crate::rng::RngSeed;
    use proptest::prelude::*;

    fn values_1d(vs: &[f64]) -> LensValues {
        LensValues::new(1, vs.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    #[test]
    fn single_interval_covers_everything() {
        let lv = values_1d(&[0.0, 0.3, 1.0]);
        let cover = build_cover(&lv, &[1], 0.5).unwrap();
        assert_eq!(cover.axes[0], vec![Interval { lo: 0.0, hi: 1.0 }]);
        let pb = pullback(&lv, &cover).unwrap();
        assert_eq!(pb.fiber(&[0]).unwrap(), &[0, 1, 2]);
    }

    #[test]
    fn zero_overlap_bisection() {
        let lv = values_1d(&[0.0, 3.0]);
        let cover = build_cover(&lv, &[2], 0.0).unwrap();
        assert_eq!(
            cover.axes[0],
            vec![
                Interval { lo: 0.0, hi: 1.5 },
                Interval { lo: 1.5, hi: 3.0 }
            ]
        );
    }

    #[test]
    fn half_overlap_two_intervals() {
        // w = 1/1.5 = 2/3; intervals [0, 2/3] and [1/3, 1]; the pairwise
        // overlap is w/2 = 1/3
        let lv = values_1d(&[0.0, 1.0]);
        let cover = build_cover(&lv, &[2], 0.5).unwrap();
        let axis = &cover.axes[0];
        assert!((axis[0].lo - 0.0).abs() < 1e-15);
        assert!((axis[0].hi - 2.0 / 3.0).abs() < 1e-15);
        assert!((axis[1].lo - 1.0 / 3.0).abs() < 1e-15);
        assert!((axis[1].hi - 1.0).abs() < 1e-15);
        let overlap = axis[0].hi - axis[1].lo;
        assert!((overlap - axis[0].width() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_range_single_interval() {
        let lv = values_1d(&[2.0, 2.0, 2.0]);
        let cover = build_cover(&lv, &[4], 0.3).unwrap();
        assert_eq!(cover.axes[0], vec![Interval { lo: 2.0, hi: 2.0 }]);
        let pb = pullback(&lv, &cover).unwrap();
        assert_eq!(pb.fiber(&[0]).unwrap(), &[0, 1, 2]);
    }

    #[test]
    fn overlap_out_of_range_rejected() {
        let lv = values_1d(&[0.0, 1.0]);
        assert!(matches!(
            build_cover(&lv, &[2], 1.0).unwrap_err(),
            Error::InvalidOverlap(_)
        ));
        assert!(matches!(
            build_cover(&lv, &[2], -0.1).unwrap_err(),
            Error::InvalidOverlap(_)
        ));
    }

    #[test]
    fn pullback_membership() {
        // intervals [0, 2/3] and [1/3, 1]: the middle value is in both
        let lv = values_1d(&[0.0, 0.5, 1.0]);
        let cover = build_cover(&lv, &[2], 0.5).unwrap();
        let pb = pullback(&lv, &cover).unwrap();
        assert_eq!(pb.fiber(&[0]).unwrap(), &[0, 1]);
        assert_eq!(pb.fiber(&[1]).unwrap(), &[1, 2]);
    }

    #[test]
    fn empty_fibers_retained() {
        let lv = values_1d(&[0.0, 0.05, 0.95, 1.0]);
        let cover = build_cover(&lv, &[5], 0.0).unwrap();
        let pb = pullback(&lv, &cover).unwrap();
        assert_eq!(pb.fibers.len(), 5);
        assert!(pb.fiber(&[2]).unwrap().is_empty());
    }

    #[test]
    fn circle_fiber_multiplicity_bounded() {
        // with overlap < 0.5, a 1-D lens value can lie in at most 2 intervals
        let d = generate_circle(400, 1.0, 0.05, RngSeed(7)).unwrap();
        let lv = apply_lens(&d, &LensSpec::Coordinate { axis: 1 }).unwrap();
        let cover = build_cover(&lv, &[4], 0.35).unwrap();
        let pb = pullback(&lv, &cover).unwrap();
        let mut counts = vec![0usize; d.len()];
        for (_, members) in pb.fibers.iter() {
            for &m in members {
                counts[m] += 1;
            }
        }
        assert!(counts.iter().all(|&c| c == 1 || c == 2));
    }

    #[test]
    fn covering_property_on_circle() {
        let d = generate_circle(317, 1.0, 0.08, RngSeed(13)).unwrap();
        let lv = apply_lens(&d, &LensSpec::Coordinate { axis: 0 }).unwrap();
        for n in [1, 2, 5, 9] {
            for g in [0.0, 0.25, 0.49, 0.8] {
                let cover = build_cover(&lv, &[n], g).unwrap();
                let pb = pullback(&lv, &cover).unwrap();
                let mut seen = vec![false; d.len()];
                for (_, members) in pb.fibers.iter() {
                    for &m in members {
                        seen[m] = true;
                    }
                }
                assert!(seen.iter().all(|&s| s), "n={n} g={g} left a point uncovered");
            }
        }
    }

    #[test]
    fn two_dim_cover_product_structure() {
        let lv = LensValues::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let cover = build_cover(&lv, &[2, 2], 0.0).unwrap();
        assert_eq!(cover.multi_indices().len(), 4);
        let pb = pullback(&lv, &cover).unwrap();
        assert_eq!(pb.fiber(&[0, 0]).unwrap(), &[0]);
        assert_eq!(pb.fiber(&[1, 1]).unwrap(), &[3]);
    }

    proptest! {
        // raising overlap_frac never shrinks any fiber
        #[test]
        fn overlap_monotonicity(
            seed in 0u64..500,
            n in 1usize..8,
            g1 in 0.0f64..0.9,
            bump in 0.0f64..0.09,
        ) {
            let d = generate_circle(80, 1.0, 0.1, RngSeed(seed)).unwrap();
            let lv = apply_lens(&d, &LensSpec::Coordinate { axis: 0 }).unwrap();
            let g2 = g1 + bump;
            let small = pullback(&lv, &build_cover(&lv, &[n], g1).unwrap()).unwrap();
            let big = pullback(&lv, &build_cover(&lv, &[n], g2).unwrap()).unwrap();
            for (idx, members) in small.fibers.iter() {
                let sup = big.fiber(idx).unwrap();
                for m in members {
                    prop_assert!(sup.contains(m), "fiber {idx:?} lost point {m}");
                }
            }
        }

        // with g < 0.5 only consecutive 1-D intervals intersect
        #[test]
        fn low_overlap_path_structure(n in 2usize..10, g in 0.0f64..0.499) {
            let lv = values_1d(&[0.0, 1.0]);
            let cover = build_cover(&lv, &[n], g).unwrap();
            let axis = &cover.axes[0];
            for i in 0..n {
                for j in (i + 1)..n {
                    let disjoint = axis[j].lo > axis[i].hi;
                    if j == i + 1 {
                        prop_assert!(!disjoint, "consecutive intervals must overlap");
                    } else {
                        prop_assert!(disjoint, "intervals {i},{j} must not intersect");
                    }
                }
            }
        }
    }
}
