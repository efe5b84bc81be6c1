//! Refinement of the pullback cover by per-fiber clusters, and the nerve of
//! the refined cover.

use rayon::prelude::*;

use crate::clustering::{Clusterer, ClusterLabeling};
use crate::cover::PullbackCover;
use crate::data::{Dataset, Metric};
use crate::error::{Error, Result};
use crate::lens::LensValues;

/// One cluster inside one fiber: a vertex of the Mapper complex.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedElement {
    pub cover_index: Vec<usize>,
    pub cluster_label: usize,
    /// Sorted dataset point indices; never empty, noise excluded.
    pub members: Vec<usize>,
}

/// Per-fiber clustering outcome, kept for reports (empty fibers included).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiberOutcome {
    pub fiber: Vec<usize>,
    pub points: usize,
    pub clusters: usize,
    pub noise: usize,
}

/// Per-fiber labels, for the point/fiber/label CSV export.
#[derive(Debug, Clone)]
pub struct FiberLabeling {
    pub fiber: Vec<usize>,
    /// Dataset indices of the fiber's points, ascending.
    pub points: Vec<usize>,
    pub labels: ClusterLabeling,
}

/// Everything the refinement step produces.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub elements: Vec<RefinedElement>,
    pub fiber_outcomes: Vec<FiberOutcome>,
    pub fiber_labelings: Vec<FiberLabeling>,
    /// Points DBSCAN left unclustered, summed over fibers (a point may count
    /// once per fiber it is noise in).
    pub dropped_noise: usize,
}

/// Clusters every nonempty fiber and splits it into one element per
/// non-noise label. Elements come out ordered by (cover_index, label).
/// Fibers are clustered concurrently; the output order is fixed by the
/// fiber order, not the schedule.
pub fn refine_cover(
    pullback: &PullbackCover,
    dataset: &Dataset,
    clusterer: &dyn Clusterer,
    metric: Metric,
) -> Result<Refinement> {
    let fibers: Vec<(&Vec<usize>, &Vec<usize>)> = pullback.fibers.iter().collect();
    let per_fiber: Vec<(Vec<usize>, Vec<usize>, ClusterLabeling)> = fibers
        .par_iter()
        .filter(|(_, members)| !members.is_empty())
        .map(|(index, members)| {
            let points: Vec<Vec<f64>> = members.iter().map(|&i| dataset.point(i).to_vec()).collect();
            let labeling = clusterer
                .label(&points, metric)
                .map_err(|e| attach_fiber(e, index))?;
            Ok(((*index).clone(), (*members).clone(), labeling))
        })
        .collect::<Result<_>>()?;

    let mut elements = Vec::new();
    let mut fiber_labelings = Vec::new();
    let mut dropped_noise = 0usize;
    let mut outcomes_by_index = std::collections::BTreeMap::new();
    for (index, members, labeling) in per_fiber {
        let noise = labeling.noise_count();
        dropped_noise += noise;
        outcomes_by_index.insert(
            index.clone(),
            FiberOutcome {
                fiber: index.clone(),
                points: members.len(),
                clusters: labeling.num_clusters(),
                noise,
            },
        );
        for label in 0..labeling.num_clusters() {
            let cluster_members: Vec<usize> = labeling
                .cluster_members(label)
                .into_iter()
                .map(|local| members[local])
                .collect();
            elements.push(RefinedElement {
                cover_index: index.clone(),
                cluster_label: label,
                members: cluster_members,
            });
        }
        fiber_labelings.push(FiberLabeling {
            fiber: index,
            points: members,
            labels: labeling,
        });
    }
    // empty fibers appear in the outcome list with zero counts
    let fiber_outcomes = pullback
        .fibers
        .keys()
        .map(|index| {
            outcomes_by_index.remove(index).unwrap_or(FiberOutcome {
                fiber: index.clone(),
                points: 0,
                clusters: 0,
                noise: 0,
            })
        })
        .collect();
    Ok(Refinement {
        elements,
        fiber_outcomes,
        fiber_labelings,
        dropped_noise,
    })
}

fn attach_fiber(err: Error, index: &[usize]) -> Error {
    let fiber = format_multi_index(index);
    match err {
        Error::KTooLarge { k, points, .. } => Error::KTooLarge {
            k,
            points,
            fiber: format!("fiber {fiber}"),
        },
        other => Error::InvalidClustererParam(format!("fiber {fiber}: {other}")),
    }
}

/// Multi-index rendered as dot-separated components: "2" or "1.3".
pub fn format_multi_index(index: &[usize]) -> String {
    index
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(".")
}

/// A simplex of the nerve: ascending vertex ids plus one dataset point
/// witnessing that the member sets genuinely intersect.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    pub vertices: Vec<usize>,
    pub witness: usize,
}

/// Nerve of the refined cover, truncated at `max_dim`. `simplices[d]` holds
/// the d-simplices in lexicographic vertex order; dimension 0 lists every
/// vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NerveComplex {
    pub vertices: Vec<RefinedElement>,
    pub simplices: Vec<Vec<Simplex>>,
}

impl NerveComplex {
    /// Highest dimension that actually carries a simplex; None for the empty
    /// complex.
    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().rposition(|s| !s.is_empty())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }
}

/// Builds the nerve: a tuple of vertices is a simplex exactly when their
/// member sets share a point. Grown upward from edges, intersecting one
/// vertex at a time, so each level is verified against the actual member
/// sets rather than inferred from pairwise checks.
pub fn build_nerve(elements: &[RefinedElement], max_dim: usize) -> Result<NerveComplex> {
    if max_dim == 0 {
        return Err(Error::InvalidConfig("nerve max_dim must be >= 1".into()));
    }
    for (i, e) in elements.iter().enumerate() {
        if e.members.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "refined element {i} has no members"
            )));
        }
    }

    let mut simplices: Vec<Vec<Simplex>> = Vec::with_capacity(max_dim + 1);
    simplices.push(
        elements
            .iter()
            .enumerate()
            .map(|(i, e)| Simplex {
                vertices: vec![i],
                witness: e.members[0],
            })
            .collect(),
    );

    // member intersection of each current-level simplex, alongside it
    let mut frontier: Vec<(Vec<usize>, Vec<usize>)> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (vec![i], e.members.clone()))
        .collect();

    for _dim in 1..=max_dim {
        let mut level: Vec<Simplex> = Vec::new();
        let mut next_frontier: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (tuple, common) in &frontier {
            let last = *tuple.last().expect("tuples are nonempty");
            for v in (last + 1)..elements.len() {
                let inter = intersect_sorted(common, &elements[v].members);
                if inter.is_empty() {
                    continue;
                }
                let mut vertices = tuple.clone();
                vertices.push(v);
                level.push(Simplex {
                    vertices: vertices.clone(),
                    witness: inter[0],
                });
                next_frontier.push((vertices, inter));
            }
        }
        let done = level.is_empty();
        simplices.push(level);
        frontier = next_frontier;
        if done {
            break;
        }
    }
    while simplices.len() < max_dim + 1 {
        simplices.push(Vec::new());
    }

    Ok(NerveComplex {
        vertices: elements.to_vec(),
        simplices,
    })
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Vertex of the Mapper graph with display metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct MapperVertex {
    pub id: usize,
    pub cover_index: Vec<usize>,
    pub cluster_label: usize,
    pub size: usize,
    pub mean_lens: Vec<f64>,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapperEdge {
    pub a: usize,
    pub b: usize,
    /// Number of shared dataset points.
    pub intersection: usize,
}

/// The 1-skeleton of the nerve, decorated for reporting and export.
#[derive(Debug, Clone, PartialEq)]
pub struct MapperGraph {
    pub vertices: Vec<MapperVertex>,
    pub edges: Vec<MapperEdge>,
}

impl MapperGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Extracts dimensions 0 and 1 of the nerve with per-vertex metadata.
pub fn mapper_graph(nerve: &NerveComplex, lens: &LensValues) -> MapperGraph {
    let vertices = nerve
        .vertices
        .iter()
        .enumerate()
        .map(|(id, e)| {
            let mut mean = vec![0.0; lens.dim()];
            for &m in &e.members {
                for (acc, x) in mean.iter_mut().zip(lens.value(m)) {
                    *acc += x;
                }
            }
            for x in &mut mean {
                *x /= e.members.len() as f64;
            }
            MapperVertex {
                id,
                cover_index: e.cover_index.clone(),
                cluster_label: e.cluster_label,
                size: e.members.len(),
                mean_lens: mean,
                members: e.members.clone(),
            }
        })
        .collect();
    let edges = nerve
        .simplices
        .get(1)
        .map(|level| {
            level
                .iter()
                .map(|s| {
                    let (a, b) = (s.vertices[0], s.vertices[1]);
                    let inter = intersect_sorted(
                        &nerve.vertices[a].members,
                        &nerve.vertices[b].members,
                    );
                    MapperEdge {
                        a,
                        b,
                        intersection: inter.len(),
                    }
                })
                .collect()
        })
        .unwrap_or_default();
    MapperGraph { vertices, edges }
}
