//! End-to-end pipeline assembly, the fixed-count failure-mode benchmark, and
//! report serialization.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::ClustererSpec;
use crate::cover::{build_cover, pullback, CubicalCover, PullbackCover};
use crate::data::{generate_blobs, generate_circle, load_csv, Dataset, Metric};
use crate::error::{Error, Result};
use crate::homology::{betti_gf2, BettiProfile};
use crate::lens::{apply_lens, LensSpec, LensValues};
use crate::nerve::{
    build_nerve, format_multi_index, mapper_graph, refine_cover, FiberOutcome, MapperGraph,
    NerveComplex, Refinement,
};
use crate::rng::RngSeed;

fn default_radius() -> f64 {
    1.0
}
fn default_max_dim() -> usize {
    2
}
fn default_true() -> bool {
    true
}

/// Where a pipeline's points come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSpec {
    Circle {
        n: usize,
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default)]
        noise_sigma: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Blobs {
        centers: Vec<Vec<f64>>,
        n_per: usize,
        #[serde(default)]
        sigma: f64,
        #[serde(default)]
        seed: Option<u64>,
    },
    Csv { path: PathBuf },
}

impl DatasetSpec {
    /// Materializes the dataset; generator specs without a seed fall back to
    /// the config-level seed.
    pub fn materialize(&self, fallback_seed: u64) -> Result<Dataset> {
        match self {
            DatasetSpec::Circle {
                n,
                radius,
                noise_sigma,
                seed,
            } => generate_circle(*n, *radius, *noise_sigma, RngSeed(seed.unwrap_or(fallback_seed))),
            DatasetSpec::Blobs {
                centers,
                n_per,
                sigma,
                seed,
            } => generate_blobs(centers, *n_per, *sigma, RngSeed(seed.unwrap_or(fallback_seed))),
            DatasetSpec::Csv { path } => load_csv(path),
        }
    }

    /// Betti profile the shape is constructed to have; None for external
    /// data. A circle is one loop; b blobs are b contractible components.
    pub fn ground_truth_betti(&self) -> Option<BettiProfile> {
        match self {
            DatasetSpec::Circle { .. } => Some(BettiProfile::declared(vec![1, 1])),
            DatasetSpec::Blobs { centers, .. } => {
                Some(BettiProfile::declared(vec![centers.len(), 0]))
            }
            DatasetSpec::Csv { .. } => None,
        }
    }
}

/// Where the lens values come from: a built-in lens or a CSV aligned with
/// the dataset rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LensSource {
    Coordinate { axis: usize },
    Eccentricity {
        #[serde(default)]
        metric: Metric,
    },
    Csv { path: PathBuf },
}

impl LensSource {
    pub fn evaluate(&self, dataset: &Dataset) -> Result<LensValues> {
        match self {
            LensSource::Coordinate { axis } => {
                apply_lens(dataset, &LensSpec::Coordinate { axis: *axis })
            }
            LensSource::Eccentricity { metric } => {
                apply_lens(dataset, &LensSpec::Eccentricity { metric: *metric })
            }
            LensSource::Csv { path } => LensValues::load_csv(path, dataset),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub n_intervals: Vec<usize>,
    pub overlap_frac: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Include per-vertex member lists in the JSON artifacts (needed by the
    /// SVG exporter; turn off for large runs).
    #[serde(default = "default_true")]
    pub include_members: bool,
}

/// A full pipeline description; a run is a pure function of this document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub dataset: DatasetSpec,
    pub lens: LensSource,
    #[serde(default)]
    pub metric: Metric,
    pub cover: CoverSpec,
    pub clusterer: ClustererSpec,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
    /// Fallback seed for generator specs that omit their own.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Option<OutputSpec>,
}

impl PipelineConfig {
    /// Loads and validates a config document. Unreadable or malformed
    /// config files are configuration errors, not runtime errors.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let config: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_dim == 0 {
            return Err(Error::InvalidConfig("max_dim must be >= 1".into()));
        }
        self.clusterer.validate()?;
        if !(0.0..1.0).contains(&self.cover.overlap_frac) {
            return Err(Error::InvalidOverlap(self.cover.overlap_frac));
        }
        if self.cover.n_intervals.is_empty() || self.cover.n_intervals.contains(&0) {
            return Err(Error::InvalidIntervalCount);
        }
        Ok(())
    }
}

/// Everything one pipeline run produces.
#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub dataset: Dataset,
    pub lens_values: LensValues,
    pub cover: CubicalCover,
    pub pullback: PullbackCover,
    pub refinement: Refinement,
    pub nerve: NerveComplex,
    pub graph: MapperGraph,
    pub betti: BettiProfile,
}

/// Runs the three Mapper steps (pull back, refine by clustering, take the
/// nerve) plus the Betti computation, then writes the configured artifacts.
/// Deterministic given the config, including all seeds.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineResult> {
    config.validate()?;
    let dataset = config.dataset.materialize(config.seed)?;
    let lens_values = config.lens.evaluate(&dataset)?;
    let result = run_stages(config, dataset, lens_values)?;
    if let Some(outputs) = &config.outputs {
        write_artifacts(config, &result, outputs)?;
    }
    Ok(result)
}

/// The stages downstream of data/lens evaluation; the benchmark reuses this
/// to run many clusterers over identical data and cover.
fn run_stages(
    config: &PipelineConfig,
    dataset: Dataset,
    lens_values: LensValues,
) -> Result<PipelineResult> {
    let cover = build_cover(&lens_values, &config.cover.n_intervals, config.cover.overlap_frac)?;
    let pb = pullback(&lens_values, &cover)?;
    assert_covering(&pb, dataset.len());
    let clusterer = config.clusterer.build()?;
    let refinement = refine_cover(&pb, &dataset, clusterer.as_ref(), config.metric)?;
    let nerve = build_nerve(&refinement.elements, config.max_dim)?;
    let graph = mapper_graph(&nerve, &lens_values);
    let betti = betti_gf2(&nerve, config.max_dim);
    Ok(PipelineResult {
        dataset,
        lens_values,
        cover,
        pullback: pb,
        refinement,
        nerve,
        graph,
        betti,
    })
}

/// The covering property is asserted on every run: each point must land in
/// at least one fiber.
fn assert_covering(pb: &PullbackCover, n_points: usize) {
    let mut seen = vec![false; n_points];
    for members in pb.fibers.values() {
        for &m in members {
            seen[m] = true;
        }
    }
    assert!(
        seen.iter().all(|&s| s),
        "cover construction left a point outside every fiber"
    );
}

// ---------------------------------------------------------------------------
// benchmark

/// One clusterer's outcome inside a distortion report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    pub clusterer: String,
    pub spec: ClustererSpec,
    pub betti: BettiProfile,
    pub vertices: usize,
    pub edges: usize,
    pub fibers: Vec<FiberOutcome>,
    pub dropped_noise: usize,
    /// Fibers where this clusterer produced strictly more clusters than the
    /// reference (the first entry).
    pub overproduced_fibers: Vec<Vec<usize>>,
    pub underproduced_fibers: Vec<Vec<usize>>,
    pub betti_matches_reference: bool,
}

/// Side-by-side comparison of clusterers over identical data and cover.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionReport {
    pub reference: String,
    pub ground_truth_betti: Option<BettiProfile>,
    pub entries: Vec<BenchEntry>,
}

impl DistortionReport {
    pub fn entry(&self, clusterer: &str) -> Option<&BenchEntry> {
        self.entries.iter().find(|e| e.clusterer == clusterer)
    }
}

/// Runs the pipeline once per clusterer on identical data and cover; the
/// first clusterer is the reference. A fiber is flagged overproduced or
/// underproduced when its cluster count exceeds or falls short of the
/// reference count on the same fiber.
pub fn failure_mode_bench(
    base_config: &PipelineConfig,
    clusterers: &[ClustererSpec],
) -> Result<DistortionReport> {
    if clusterers.is_empty() {
        return Err(Error::InvalidConfig(
            "bench needs at least one clusterer".into(),
        ));
    }
    base_config.validate()?;
    let dataset = base_config.dataset.materialize(base_config.seed)?;
    let lens_values = base_config.lens.evaluate(&dataset)?;

    let mut runs = Vec::with_capacity(clusterers.len());
    for spec in clusterers {
        let mut config = base_config.clone();
        config.clusterer = spec.clone();
        config.outputs = None;
        let result = run_stages(&config, dataset.clone(), lens_values.clone())?;
        runs.push((spec.clone(), result));
    }

    let reference_fibers: BTreeMap<Vec<usize>, usize> = runs[0]
        .1
        .refinement
        .fiber_outcomes
        .iter()
        .map(|f| (f.fiber.clone(), f.clusters))
        .collect();
    let reference_betti = runs[0].1.betti.clone();
    let reference_name = runs[0].0.to_string();

    let entries = runs
        .iter()
        .enumerate()
        .map(|(i, (spec, result))| {
            let mut over = Vec::new();
            let mut under = Vec::new();
            if i > 0 {
                for f in &result.refinement.fiber_outcomes {
                    let reference = reference_fibers.get(&f.fiber).copied().unwrap_or(0);
                    if f.clusters > reference {
                        over.push(f.fiber.clone());
                    } else if f.clusters < reference {
                        under.push(f.fiber.clone());
                    }
                }
            }
            BenchEntry {
                clusterer: spec.to_string(),
                spec: spec.clone(),
                betti: result.betti.clone(),
                vertices: result.graph.vertex_count(),
                edges: result.graph.edge_count(),
                fibers: result.refinement.fiber_outcomes.clone(),
                dropped_noise: result.refinement.dropped_noise,
                overproduced_fibers: over,
                underproduced_fibers: under,
                betti_matches_reference: result.betti == reference_betti,
            }
        })
        .collect();

    Ok(DistortionReport {
        reference: reference_name,
        ground_truth_betti: base_config.dataset.ground_truth_betti(),
        entries,
    })
}

/// Writes a distortion report as JSON under the config's output directory.
pub fn write_report(report: &DistortionReport, outputs: &OutputSpec) -> Result<PathBuf> {
    std::fs::create_dir_all(&outputs.dir)?;
    let path = outputs.dir.join("report.json");
    std::fs::write(&path, to_json_pretty(report)?)?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// presets

/// A named, ready-to-run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub config: PipelineConfig,
}

/// The built-in config library. Cover and clusterer parameterizations follow
/// widely circulated Mapper tutorial settings; the datasets are this crate's
/// synthetic shapes standing in for the original tutorial data.
pub fn preset_configs() -> Vec<Preset> {
    let circle = DatasetSpec::Circle {
        n: 400,
        radius: 1.0,
        noise_sigma: 0.05,
        seed: Some(7),
    };
    vec![
        Preset {
            name: "fig1-circle".into(),
            description: "noisy circle, 4-interval cover, adaptive single-linkage reference run"
                .into(),
            config: PipelineConfig {
                dataset: circle.clone(),
                lens: LensSource::Coordinate { axis: 1 },
                metric: Metric::Euclidean,
                cover: CoverSpec {
                    n_intervals: vec![4],
                    overlap_frac: 0.35,
                },
                clusterer: ClustererSpec::gap(10),
                max_dim: 2,
                seed: 7,
                outputs: None,
            },
        },
        Preset {
            name: "kepler-lens-demo".into(),
            description:
                "lens-demo settings (15 cubes, 0.7 overlap, 2-means seeded 3471) on the noisy circle"
                    .into(),
            config: PipelineConfig {
                dataset: circle.clone(),
                lens: LensSource::Coordinate { axis: 1 },
                metric: Metric::Euclidean,
                cover: CoverSpec {
                    n_intervals: vec![15],
                    overlap_frac: 0.7,
                },
                clusterer: ClustererSpec::kmeans(2, 3471),
                max_dim: 2,
                seed: 7,
                outputs: None,
            },
        },
        Preset {
            name: "tda-mapper-digits-shape".into(),
            description:
                "digits-example settings (10 intervals, 0.65 overlap, fixed count 10, realized as \
                 10-means) on the noisy circle"
                    .into(),
            config: PipelineConfig {
                dataset: circle,
                lens: LensSource::Coordinate { axis: 1 },
                metric: Metric::Euclidean,
                cover: CoverSpec {
                    n_intervals: vec![10],
                    overlap_frac: 0.65,
                },
                clusterer: ClustererSpec::kmeans(10, 0),
                max_dim: 2,
                seed: 7,
                outputs: None,
            },
        },
    ]
}

pub fn preset(name: &str) -> Result<Preset> {
    preset_configs()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

// ---------------------------------------------------------------------------
// artifacts

/// JSON form of a nerve vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub cover_index: Vec<usize>,
    pub label: usize,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NerveDoc {
    pub vertices: Vec<VertexDoc>,
    /// Simplices of dimension >= 1, keyed by dimension.
    pub simplices: BTreeMap<usize, Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphVertexDoc {
    pub id: usize,
    pub cover_index: Vec<usize>,
    pub label: usize,
    pub size: usize,
    pub mean_lens: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdgeDoc {
    pub a: usize,
    pub b: usize,
    pub intersection: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<GraphVertexDoc>,
    pub edges: Vec<GraphEdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(graph: &MapperGraph, include_members: bool) -> Self {
        GraphDoc {
            vertices: graph
                .vertices
                .iter()
                .map(|v| GraphVertexDoc {
                    id: v.id,
                    cover_index: v.cover_index.clone(),
                    label: v.cluster_label,
                    size: v.size,
                    mean_lens: v.mean_lens.clone(),
                    members: include_members.then(|| v.members.clone()),
                })
                .collect(),
            edges: graph
                .edges
                .iter()
                .map(|e| GraphEdgeDoc {
                    a: e.a,
                    b: e.b,
                    intersection: e.intersection,
                })
                .collect(),
        }
    }

    /// Rebuilds the in-memory graph. Vertices written without member lists
    /// get empty ones; exporters that need members check for that.
    pub fn into_graph(self) -> MapperGraph {
        MapperGraph {
            vertices: self
                .vertices
                .into_iter()
                .map(|v| crate::nerve::MapperVertex {
                    id: v.id,
                    cover_index: v.cover_index,
                    cluster_label: v.label,
                    size: v.size,
                    mean_lens: v.mean_lens,
                    members: v.members.unwrap_or_default(),
                })
                .collect(),
            edges: self
                .edges
                .into_iter()
                .map(|e| crate::nerve::MapperEdge {
                    a: e.a,
                    b: e.b,
                    intersection: e.intersection,
                })
                .collect(),
        }
    }
}

/// The single-file result artifact; everything the exporters need.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDoc {
    pub config: PipelineConfig,
    pub dataset: Dataset,
    pub lens_values: LensValues,
    pub cover: CubicalCover,
    pub fibers: Vec<FiberOutcome>,
    pub dropped_noise: usize,
    pub nerve: NerveDoc,
    pub graph: GraphDoc,
    pub betti: BettiProfile,
}

impl ResultDoc {
    pub fn new(config: &PipelineConfig, result: &PipelineResult) -> Self {
        let include_members = config
            .outputs
            .as_ref()
            .map_or(true, |o| o.include_members);
        ResultDoc {
            config: config.clone(),
            dataset: result.dataset.clone(),
            lens_values: result.lens_values.clone(),
            cover: result.cover.clone(),
            fibers: result.refinement.fiber_outcomes.clone(),
            dropped_noise: result.refinement.dropped_noise,
            nerve: NerveDoc {
                vertices: result
                    .nerve
                    .vertices
                    .iter()
                    .enumerate()
                    .map(|(id, e)| VertexDoc {
                        id,
                        cover_index: e.cover_index.clone(),
                        label: e.cluster_label,
                        size: e.members.len(),
                        members: include_members.then(|| e.members.clone()),
                    })
                    .collect(),
                simplices: result
                    .nerve
                    .simplices
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(d, level)| {
                        (d, level.iter().map(|s| s.vertices.clone()).collect())
                    })
                    .collect(),
            },
            graph: GraphDoc::from_graph(&result.graph, include_members),
            betti: result.betti.clone(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn write_artifacts(
    config: &PipelineConfig,
    result: &PipelineResult,
    outputs: &OutputSpec,
) -> Result<()> {
    std::fs::create_dir_all(&outputs.dir)?;
    let doc = ResultDoc::new(config, result);
    std::fs::write(outputs.dir.join("result.json"), to_json_pretty(&doc)?)?;
    std::fs::write(outputs.dir.join("fibers.csv"), fibers_csv(result))?;
    std::fs::write(outputs.dir.join("labels.csv"), labels_csv(result))?;
    Ok(())
}

/// Per-fiber stats CSV: fiber,points,clusters,noise.
pub fn fibers_csv(result: &PipelineResult) -> String {
    let mut out = String::from("fiber,points,clusters,noise\n");
    for f in &result.refinement.fiber_outcomes {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_multi_index(&f.fiber),
            f.points,
            f.clusters,
            f.noise
        ));
    }
    out
}

/// Per-point labeling CSV: point_index,fiber,label (label NOISE for points
/// DBSCAN left unclustered).
pub fn labels_csv(result: &PipelineResult) -> String {
    let mut out = String::from("point_index,fiber,label\n");
    for fl in &result.refinement.fiber_labelings {
        for (local, &point) in fl.points.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{}\n",
                point,
                format_multi_index(&fl.fiber),
                fl.labels.label(local)
            ));
        }
    }
    out
}
