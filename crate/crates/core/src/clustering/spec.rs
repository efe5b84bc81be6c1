//! Serializable clusterer configuration.

use serde::{Deserialize, Serialize};

use super::{AdaptiveKMeans, Clusterer, ClustererRegistry, Dbscan, KMeans, SingleLinkageGap};
use crate::error::{Error, Result};
use crate::rng::RngSeed;

pub(crate) const DEFAULT_SEED: u64 = 0;
pub(crate) const DEFAULT_MAX_ITER: usize = 100;
pub(crate) const DEFAULT_TOL: f64 = 1e-9;
pub(crate) const DEFAULT_NUM_BINS: usize = 10;

fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_max_iter() -> usize {
    DEFAULT_MAX_ITER
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_num_bins() -> usize {
    DEFAULT_NUM_BINS
}

/// The config-file form of a clustering back-end. `build` turns it into the
/// trait object the pipeline runs; the compact string form accepted on the
/// command line is parsed by [`ClustererRegistry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClustererSpec {
    Kmeans {
        k: usize,
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default = "default_tol")]
        tol: f64,
    },
    SingleLinkageGap {
        #[serde(default = "default_num_bins")]
        num_bins: usize,
    },
    Dbscan { eps: f64, min_pts: usize },
    AdaptiveKmeans {
        k_min: usize,
        k_max: usize,
        #[serde(default = "default_seed")]
        seed: u64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
        #[serde(default = "default_tol")]
        tol: f64,
    },
}

impl ClustererSpec {
    pub fn kmeans(k: usize, seed: u64) -> Self {
        ClustererSpec::Kmeans {
            k,
            seed,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
        }
    }

    pub fn gap(num_bins: usize) -> Self {
        ClustererSpec::SingleLinkageGap { num_bins }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ClustererSpec::Kmeans { k, max_iter, tol, .. } => {
                if k == 0 {
                    return Err(Error::InvalidClustererParam("kmeans k must be >= 1".into()));
                }
                if max_iter == 0 {
                    return Err(Error::InvalidClustererParam(
                        "kmeans max_iter must be >= 1".into(),
                    ));
                }
                if !(tol >= 0.0) {
                    return Err(Error::InvalidClustererParam(
                        "kmeans tol must be >= 0".into(),
                    ));
                }
            }
            ClustererSpec::SingleLinkageGap { num_bins } => {
                if num_bins < 2 {
                    return Err(Error::InvalidClustererParam(
                        "gap num_bins must be >= 2".into(),
                    ));
                }
            }
            ClustererSpec::Dbscan { eps, min_pts } => {
                if !(eps > 0.0) {
                    return Err(Error::InvalidClustererParam("dbscan eps must be > 0".into()));
                }
                if min_pts == 0 {
                    return Err(Error::InvalidClustererParam(
                        "dbscan min_pts must be >= 1".into(),
                    ));
                }
            }
            ClustererSpec::AdaptiveKmeans {
                k_min,
                k_max,
                max_iter,
                ..
            } => {
                if k_min == 0 || k_min > k_max {
                    return Err(Error::InvalidClustererParam(
                        "adaptive kmeans needs 1 <= k_min <= k_max".into(),
                    ));
                }
                if max_iter == 0 {
                    return Err(Error::InvalidClustererParam(
                        "adaptive kmeans max_iter must be >= 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Instantiates the strategy behind this spec.
    pub fn build(&self) -> Result<Box<dyn Clusterer>> {
        self.validate()?;
        Ok(match *self {
            ClustererSpec::Kmeans {
                k,
                seed,
                max_iter,
                tol,
            } => Box::new(KMeans {
                k,
                seed: RngSeed(seed),
                max_iter,
                tol,
            }),
            ClustererSpec::SingleLinkageGap { num_bins } => {
                Box::new(SingleLinkageGap { num_bins })
            }
            ClustererSpec::Dbscan { eps, min_pts } => Box::new(Dbscan { eps, min_pts }),
            ClustererSpec::AdaptiveKmeans {
                k_min,
                k_max,
                seed,
                max_iter,
                tol,
            } => Box::new(AdaptiveKMeans {
                k_min,
                k_max,
                seed: RngSeed(seed),
                max_iter,
                tol,
            }),
        })
    }

    /// Parses the compact command-line form, e.g. `kmeans:2`, `gap:12`,
    /// `dbscan:0.5:3`, `adaptive:1:6`.
    pub fn parse(text: &str) -> Result<Self> {
        ClustererRegistry::builtin().parse(text)
    }
}

impl std::fmt::Display for ClustererSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClustererSpec::Kmeans { k, seed, .. } => {
                if *seed == DEFAULT_SEED {
                    write!(f, "kmeans:{k}")
                } else {
                    write!(f, "kmeans:{k}:{seed}")
                }
            }
            ClustererSpec::SingleLinkageGap { num_bins } => write!(f, "gap:{num_bins}"),
            ClustererSpec::Dbscan { eps, min_pts } => write!(f, "dbscan:{eps}:{min_pts}"),
            ClustererSpec::AdaptiveKmeans {
                k_min, k_max, seed, ..
            } => {
                if *seed == DEFAULT_SEED {
                    write!(f, "adaptive:{k_min}:{k_max}")
                } else {
                    write!(f, "adaptive:{k_min}:{k_max}:{seed}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_validates() {
        assert!(ClustererSpec::kmeans(0, 0).build().is_err());
        assert!(ClustererSpec::gap(1).build().is_err());
        assert!(ClustererSpec::Dbscan {
            eps: 0.0,
            min_pts: 1
        }
        .build()
        .is_err());
        assert!(ClustererSpec::kmeans(2, 3471).build().is_ok());
    }

    #[test]
    fn display_round_trips_through_parse() {
        let specs = vec![
            ClustererSpec::kmeans(4, 0),
            ClustererSpec::kmeans(2, 3471),
            ClustererSpec::gap(10),
            ClustererSpec::Dbscan {
                eps: 0.5,
                min_pts: 3,
            },
            ClustererSpec::AdaptiveKmeans {
                k_min: 1,
                k_max: 6,
                seed: 0,
                max_iter: DEFAULT_MAX_ITER,
                tol: DEFAULT_TOL,
            },
        ];
        for spec in specs {
            let back = ClustererSpec::parse(&spec.to_string()).unwrap();
            assert_eq!(back, spec, "{spec}");
        }
    }

    #[test]
    fn json_defaults() {
        let spec: ClustererSpec = serde_json::from_str(r#"{"kind":"kmeans","k":2}"#).unwrap();
        assert_eq!(spec, ClustererSpec::kmeans(2, 0));
        let spec: ClustererSpec =
            serde_json::from_str(r#"{"kind":"single_linkage_gap"}"#).unwrap();
        assert_eq!(spec, ClustererSpec::gap(10));
    }
}
