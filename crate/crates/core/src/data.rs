//! Point clouds, metrics, synthetic shape generators, and dataset I/O.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{RngSeed, SeedStream};

/// A finite point cloud in R^d. Point order is stable and point ids are the
/// 0-based positions in `points`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl Dataset {
    /// Builds a dataset, checking that every point has length `dim`.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("dataset dimension must be >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.len(),
                    context: format!("point {i}"),
                });
            }
        }
        Ok(Dataset { dim, points })
    }

    pub fn empty(dim: usize) -> Self {
        Dataset {
            dim: dim.max(1),
            points: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

/// Distance functions on point clouds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    /// d(x, y) = 1 - <x,y> / (|x||y|); undefined for zero vectors.
    Cosine,
}

impl Metric {
    /// Distance between two points. Cosine requires both vectors nonzero;
    /// callers that cannot tolerate a Result should validate first (see
    /// [`validate_for`]).
    ///
    /// [`validate_for`]: Metric::validate_for
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            Metric::Euclidean => Ok(euclidean(a, b)),
            Metric::Cosine => {
                let (na, nb) = (norm(a), norm(b));
                if na == 0.0 || nb == 0.0 {
                    return Err(Error::ZeroVectorCosine { index: 0 });
                }
                Ok(1.0 - dot(a, b) / (na * nb))
            }
        }
    }

    /// Checks that every point is in the metric's domain (nonzero vectors for
    /// cosine). After a successful check, [`distance_unchecked`] is safe.
    ///
    /// [`distance_unchecked`]: Metric::distance_unchecked
    pub fn validate_for(&self, points: &[Vec<f64>]) -> Result<()> {
        if *self == Metric::Cosine {
            for (i, p) in points.iter().enumerate() {
                if norm(p) == 0.0 {
                    return Err(Error::ZeroVectorCosine { index: i });
                }
            }
        }
        Ok(())
    }

    /// Distance assuming the points have been validated; a cosine distance
    /// with a zero vector returns 0 rather than erroring.
    pub fn distance_unchecked(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => euclidean(a, b),
            Metric::Cosine => {
                let d = norm(a) * norm(b);
                if d == 0.0 {
                    0.0
                } else {
                    1.0 - dot(a, b) / d
                }
            }
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Symmetric pairwise distance matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Full pairwise distance matrix of a point list under `metric`.
pub fn pairwise_distances(points: &[Vec<f64>], metric: Metric) -> Result<DistanceMatrix> {
    metric.validate_for(points)?;
    let n = points.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = metric.distance_unchecked(&points[i], &points[j]);
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, data })
}

/// Noisy circle in R^2: radius * (cos t, sin t) with t uniform on [0, 2pi)
/// and per-coordinate Gaussian noise of std `noise_sigma`.
///
/// Per point, the stream is consumed as: one uniform for the angle, then one
/// Box-Muller pair for the two noise coordinates.
pub fn generate_circle(n: usize, radius: f64, noise_sigma: f64, seed: RngSeed) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidConfig("circle generator needs n >= 1".into()));
    }
    if radius <= 0.0 {
        return Err(Error::InvalidConfig("circle radius must be positive".into()));
    }
    if noise_sigma < 0.0 {
        return Err(Error::InvalidConfig("noise_sigma must be >= 0".into()));
    }
    let mut stream = SeedStream::new(seed);
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        let t = stream.uniform_in(0.0, 2.0 * std::f64::consts::PI);
        let (gx, gy) = stream.gaussian_pair();
        points.push(vec![
            radius * t.cos() + noise_sigma * gx,
            radius * t.sin() + noise_sigma * gy,
        ]);
    }
    Dataset::new(2, points)
}

/// Isotropic Gaussian blobs: `n_per` points around each center, concatenated
/// in center order. Per point, one Box-Muller batch of `dim` normals.
pub fn generate_blobs(
    centers: &[Vec<f64>],
    n_per: usize,
    sigma: f64,
    seed: RngSeed,
) -> Result<Dataset> {
    if centers.is_empty() || n_per == 0 {
        return Err(Error::InvalidConfig(
            "blob generator needs at least one center and n_per >= 1".into(),
        ));
    }
    if sigma < 0.0 {
        return Err(Error::InvalidConfig("sigma must be >= 0".into()));
    }
    let dim = centers[0].len();
    for (i, c) in centers.iter().enumerate() {
        if c.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: c.len(),
                context: format!("blob center {i}"),
            });
        }
    }
    let mut stream = SeedStream::new(seed);
    let mut points = Vec::with_capacity(centers.len() * n_per);
    for center in centers {
        for _ in 0..n_per {
            let noise = stream.gaussians(dim);
            points.push(
                center
                    .iter()
                    .zip(&noise)
                    .map(|(c, g)| c + sigma * g)
                    .collect(),
            );
        }
    }
    Dataset::new(dim, points)
}

/// Parses a point-cloud CSV: comma-separated decimal reals, uniform arity,
/// optional single header row (any non-numeric token in row 1). Row order is
/// preserved. An empty file (or header-only file) yields an empty dataset;
/// with a header the dimension is inferred from its arity, otherwise it
/// defaults to 1.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_csv(&text, &path.display().to_string())
}

pub(crate) fn parse_csv(text: &str, source: &str) -> Result<Dataset> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            tokens.iter().map(|t| t.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if let Some(d) = dim {
                    if values.len() != d {
                        return Err(Error::CsvParse {
                            path: source.to_string(),
                            row: lineno + 1,
                            message: format!("expected {d} columns, found {}", values.len()),
                        });
                    }
                } else {
                    dim = Some(values.len());
                }
                rows.push(values);
            }
            Err(_) => {
                if lineno == 0 {
                    // Header row: skip it, but remember the arity.
                    dim = Some(tokens.len());
                } else {
                    let bad = tokens
                        .iter()
                        .find(|t| t.parse::<f64>().is_err())
                        .copied()
                        .unwrap_or("");
                    return Err(Error::CsvParse {
                        path: source.to_string(),
                        row: lineno + 1,
                        message: format!("non-numeric token '{bad}'"),
                    });
                }
            }
        }
    }
    match dim {
        Some(d) if d > 0 => Dataset::new(d, rows),
        _ => Ok(Dataset::empty(1)),
    }
}

/// Writes a dataset as canonical CSV: no header, LF line endings, shortest
/// round-trip decimal representation per coordinate.
pub fn save_csv(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_csv_string(dataset.points()))?;
    Ok(())
}

pub(crate) fn to_csv_string(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            // `{}` on f64 is the shortest representation that parses back
            // to the same bits, which is what makes load(save(d)) exact.
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}
