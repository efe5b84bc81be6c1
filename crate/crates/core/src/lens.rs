//! Lens (filter) functions mapping each data point to a low-dimensional value.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::{self, Dataset, Metric};
use crate::error::{Error, Result};

/// Built-in lens functions. Both produce one value per point; richer lenses
/// can be supplied externally as CSV and fed to the cover directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LensSpec {
    /// Projection onto one coordinate axis.
    Coordinate { axis: usize },
    /// Mean distance to every point (self included), under `metric`.
    Eccentricity { metric: Metric },
}

impl LensSpec {
    pub fn output_dim(&self) -> usize {
        1
    }
}

/// Lens values aligned index-for-index with the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensValues {
    dim: usize,
    values: Vec<Vec<f64>>,
}

impl LensValues {
    pub fn new(dim: usize, values: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("lens dimension must be >= 1".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                    context: format!("lens value {i}"),
                });
            }
        }
        Ok(LensValues { dim, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Loads lens values from CSV (same format as point clouds) and checks
    /// that the row count matches the dataset.
    pub fn load_csv(path: impl AsRef<Path>, dataset: &Dataset) -> Result<Self> {
        let as_points = data::load_csv(path)?;
        if as_points.len() != dataset.len() {
            return Err(Error::LensLengthMismatch {
                expected: dataset.len(),
                got: as_points.len(),
            });
        }
        LensValues::new(as_points.dim(), as_points.points().to_vec())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, data::to_csv_string(&self.values))?;
        Ok(())
    }
}

/// Evaluates a built-in lens on every dataset point.
pub fn apply_lens(dataset: &Dataset, spec: &LensSpec) -> Result<LensValues> {
    match spec {
        LensSpec::Coordinate { axis } => {
            if *axis >= dataset.dim() {
                return Err(Error::AxisOutOfRange {
                    axis: *axis,
                    dim: dataset.dim(),
                });
            }
            let values = dataset
                .points()
                .iter()
                .map(|p| vec![p[*axis]])
                .collect();
            LensValues::new(1, values)
        }
        LensSpec::Eccentricity { metric } => {
            metric.validate_for(dataset.points())?;
            let n = dataset.len();
            let values = dataset
                .points()
                .iter()
                .map(|p| {
                    let total: f64 = dataset
                        .points()
                        .iter()
                        .map(|q| metric.distance_unchecked(p, q))
                        .sum();
                    vec![total / n as f64]
                })
                .collect();
            LensValues::new(1, values)
        }
    }
}
