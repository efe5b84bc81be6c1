//! Name-based registry of clustering back-ends.
//!
//! Each back-end registers a name, aliases, and a parser for its compact
//! argument form. The CLI `--clusterers` flag and config tooling resolve
//! strategies through here, so adding a back-end means adding one table row.

use super::spec::{ClustererSpec, DEFAULT_NUM_BINS, DEFAULT_SEED};
use crate::error::{Error, Result};

pub struct RegistryEntry {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    /// Compact-form usage shown in error messages and help text.
    pub usage: &'static str,
    pub summary: &'static str,
    parse: fn(&[&str]) -> Result<ClustererSpec>,
}

impl RegistryEntry {
    pub fn matches(&self, name: &str) -> bool {
        self.name == name || self.aliases.contains(&name)
    }
}

pub struct ClustererRegistry {
    entries: &'static [RegistryEntry],
}

static ENTRIES: &[RegistryEntry] = &[
    RegistryEntry {
        name: "kmeans",
        aliases: &[],
        usage: "kmeans:<k>[:<seed>]",
        summary: "Lloyd k-means; always returns exactly k clusters",
        parse: parse_kmeans,
    },
    RegistryEntry {
        name: "gap",
        aliases: &["single_linkage_gap"],
        usage: "gap[:<num_bins>]",
        summary: "single-linkage cut at the first empty merge-distance histogram bin",
        parse: parse_gap,
    },
    RegistryEntry {
        name: "dbscan",
        aliases: &[],
        usage: "dbscan:<eps>:<min_pts>",
        summary: "density clustering with an explicit noise label",
        parse: parse_dbscan,
    },
    RegistryEntry {
        name: "adaptive",
        aliases: &["adaptive_kmeans"],
        usage: "adaptive:<k_min>:<k_max>[:<seed>]",
        summary: "k-means with k chosen per fiber by silhouette score",
        parse: parse_adaptive,
    },
];

static REGISTRY: ClustererRegistry = ClustererRegistry { entries: ENTRIES };

impl ClustererRegistry {
    pub fn builtin() -> &'static ClustererRegistry {
        &REGISTRY
    }

    pub fn entries(&self) -> &[RegistryEntry] {
        self.entries
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name).collect()
    }

    /// Parses a compact clusterer string: a registered name followed by
    /// colon-separated arguments.
    pub fn parse(&self, text: &str) -> Result<ClustererSpec> {
        let mut parts = text.split(':');
        let name = parts.next().unwrap_or("").trim();
        let args: Vec<&str> = parts.map(str::trim).collect();
        let entry = self
            .entries
            .iter()
            .find(|e| e.matches(name))
            .ok_or_else(|| Error::UnknownClusterer(name.to_string(), self.names().join(", ")))?;
        let spec = (entry.parse)(&args)?;
        spec.validate()?;
        Ok(spec)
    }

    /// Parses a comma-separated clusterer list, as given to `bench`.
    pub fn parse_list(&self, text: &str) -> Result<Vec<ClustererSpec>> {
        text.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.parse(s.trim()))
            .collect()
    }
}

fn arg<T: std::str::FromStr>(args: &[&str], i: usize, usage: &str) -> Result<T> {
    args.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidClustererParam(format!("expected {usage}")))
}

fn opt_arg<T: std::str::FromStr>(args: &[&str], i: usize, default: T, usage: &str) -> Result<T> {
    match args.get(i) {
        None => Ok(default),
        Some(s) => s
            .parse()
            .map_err(|_| Error::InvalidClustererParam(format!("expected {usage}"))),
    }
}

fn check_arity(args: &[&str], max: usize, usage: &str) -> Result<()> {
    if args.len() > max {
        return Err(Error::InvalidClustererParam(format!(
            "too many arguments, expected {usage}"
        )));
    }
    Ok(())
}

fn parse_kmeans(args: &[&str]) -> Result<ClustererSpec> {
    let usage = "kmeans:<k>[:<seed>]";
    check_arity(args, 2, usage)?;
    let k = arg(args, 0, usage)?;
    let seed = opt_arg(args, 1, DEFAULT_SEED, usage)?;
    Ok(ClustererSpec::kmeans(k, seed))
}

fn parse_gap(args: &[&str]) -> Result<ClustererSpec> {
    let usage = "gap[:<num_bins>]";
    check_arity(args, 1, usage)?;
    let num_bins = opt_arg(args, 0, DEFAULT_NUM_BINS, usage)?;
    Ok(ClustererSpec::gap(num_bins))
}

fn parse_dbscan(args: &[&str]) -> Result<ClustererSpec> {
    let usage = "dbscan:<eps>:<min_pts>";
    check_arity(args, 2, usage)?;
    Ok(ClustererSpec::Dbscan {
        eps: arg(args, 0, usage)?,
        min_pts: arg(args, 1, usage)?,
    })
}

fn parse_adaptive(args: &[&str]) -> Result<ClustererSpec> {
    let usage = "adaptive:<k_min>:<k_max>[:<seed>]";
    check_arity(args, 3, usage)?;
    let k_min = arg(args, 0, usage)?;
    let k_max = arg(args, 1, usage)?;
    let seed = opt_arg(args, 2, DEFAULT_SEED, usage)?;
    Ok(ClustererSpec::AdaptiveKmeans {
        k_min,
        k_max,
        seed,
        max_iter: super::spec::DEFAULT_MAX_ITER,
        tol: super::spec::DEFAULT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bench_style_list() {
        let specs = ClustererRegistry::builtin()
            .parse_list("gap,kmeans:2,kmeans:4")
            .unwrap();
        assert_eq!(specs.len(), 3);
        assert_eq!(specs[0], ClustererSpec::gap(10));
        assert_eq!(specs[1], ClustererSpec::kmeans(2, 0));
        assert_eq!(specs[2], ClustererSpec::kmeans(4, 0));
    }

    #[test]
    fn aliases_resolve() {
        assert_eq!(
            ClustererRegistry::builtin()
                .parse("single_linkage_gap:8")
                .unwrap(),
            ClustererSpec::gap(8)
        );
        assert!(matches!(
            ClustererRegistry::builtin().parse("adaptive_kmeans:1:6").unwrap(),
            ClustererSpec::AdaptiveKmeans { k_min: 1, k_max: 6, .. }
        ));
    }

    #[test]
    fn unknown_name_lists_known() {
        let err = ClustererRegistry::builtin().parse("hdbscan:3").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("hdbscan") && msg.contains("kmeans"), "{msg}");
    }

    #[test]
    fn bad_arity_rejected() {
        assert!(ClustererRegistry::builtin().parse("kmeans").is_err());
        assert!(ClustererRegistry::builtin().parse("kmeans:2:9:9").is_err());
        assert!(ClustererRegistry::builtin().parse("dbscan:0.5").is_err());
        assert!(ClustererRegistry::builtin().parse("gap:one").is_err());
    }

    #[test]
    fn parsed_specs_are_validated() {
        assert!(ClustererRegistry::builtin().parse("kmeans:0").is_err());
        assert!(ClustererRegistry::builtin().parse("dbscan:-1:3").is_err());
        assert!(ClustererRegistry::builtin().parse("adaptive:4:2").is_err());
    }
}
