//! mapper-forge: Mapper pipelines with pluggable per-fiber clustering.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mapper_forge_core::clustering::ClustererRegistry;
use mapper_forge_core::data::{generate_blobs, generate_circle, save_csv, Dataset};
use mapper_forge_core::error::Error;
use mapper_forge_core::export::{export_dot, export_svg};
use mapper_forge_core::pipeline::{
    failure_mode_bench, preset, preset_configs, run_pipeline, write_report, OutputSpec,
    PipelineConfig, ResultDoc,
};
use mapper_forge_core::rng::RngSeed;

#[derive(Parser)]
#[command(
    name = "mapper-forge",
    version,
    about = "Mapper complexes with pluggable per-fiber clustering and a distortion benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a pipeline config and write its artifacts
    Run {
        /// Pipeline config (JSON)
        config: PathBuf,
        /// Override the configured output directory
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run one pipeline per clusterer on identical data and cover; the first
    /// clusterer is the reference
    Bench {
        /// Pipeline config (JSON); its own clusterer entry is ignored
        config: PathBuf,
        /// Comma-separated clusterers, e.g. gap,kmeans:2,kmeans:4
        #[arg(long)]
        clusterers: String,
        /// Override the configured output directory
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic dataset CSV
    Generate {
        #[command(subcommand)]
        shape: Shape,
    },
    /// List the built-in config presets
    Presets {
        /// Print one preset's config JSON to stdout instead
        #[arg(long)]
        emit: Option<String>,
    },
    /// Re-export a result.json artifact in another format
    Export {
        /// result.json produced by `run`
        result: PathBuf,
        #[arg(long)]
        format: Format,
        /// Write here instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Shape {
    /// Noisy circle in the plane
    Circle {
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.0)]
        noise_sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Isotropic Gaussian blobs
    Blobs {
        /// Centers as semicolon-separated coordinate lists, e.g. "0,0;10,0"
        #[arg(long)]
        centers: String,
        #[arg(long, default_value_t = 50)]
        n_per: usize,
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
    Svg,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    configure_threads();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}

/// MAPPER_FORGE_THREADS caps the worker count; 0 or unset means automatic.
fn configure_threads() {
    if let Ok(value) = std::env::var("MAPPER_FORGE_THREADS") {
        match value.trim().parse::<usize>() {
            Ok(0) => {}
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("warning: ignoring non-numeric MAPPER_FORGE_THREADS='{value}'");
            }
        }
    }
}

fn dispatch(command: Command) -> Result<(), Error> {
    match command {
        Command::Run { config, out } => cmd_run(&config, out),
        Command::Bench {
            config,
            clusterers,
            out,
        } => cmd_bench(&config, &clusterers, out),
        Command::Generate { shape } => cmd_generate(shape),
        Command::Presets { emit } => cmd_presets(emit),
        Command::Export {
            result,
            format,
            out,
        } => cmd_export(&result, format, out),
    }
}

fn with_out_override(mut config: PipelineConfig, out: Option<PathBuf>) -> PipelineConfig {
    if let Some(dir) = out {
        let include_members = config
            .outputs
            .as_ref()
            .map_or(true, |o| o.include_members);
        config.outputs = Some(OutputSpec {
            dir,
            include_members,
        });
    }
    config
}

fn cmd_run(config_path: &PathBuf, out: Option<PathBuf>) -> Result<(), Error> {
    let config = with_out_override(PipelineConfig::load(config_path)?, out);
    let result = run_pipeline(&config)?;
    eprintln!(
        "betti {}  vertices {}  edges {}  dropped noise {}",
        result.betti,
        result.graph.vertex_count(),
        result.graph.edge_count(),
        result.refinement.dropped_noise
    );
    match &config.outputs {
        Some(outputs) => eprintln!("artifacts written to {}", outputs.dir.display()),
        None => eprintln!("no outputs configured; nothing written"),
    }
    Ok(())
}

fn cmd_bench(config_path: &PathBuf, clusterers: &str, out: Option<PathBuf>) -> Result<(), Error> {
    let config = with_out_override(PipelineConfig::load(config_path)?, out);
    let specs = ClustererRegistry::builtin().parse_list(clusterers)?;
    if specs.is_empty() {
        return Err(Error::InvalidConfig(
            "--clusterers needs at least one entry".into(),
        ));
    }
    let report = failure_mode_bench(&config, &specs)?;
    for entry in &report.entries {
        eprintln!(
            "{:<16} betti {:<12} vertices {:<4} edges {:<4} overproduced {:?} underproduced {:?}",
            entry.clusterer,
            entry.betti.to_string(),
            entry.vertices,
            entry.edges,
            entry.overproduced_fibers,
            entry.underproduced_fibers
        );
    }
    match &config.outputs {
        Some(outputs) => {
            let path = write_report(&report, outputs)?;
            eprintln!("report written to {}", path.display());
        }
        None => eprintln!("no outputs configured; report not written"),
    }
    Ok(())
}

fn cmd_generate(shape: Shape) -> Result<(), Error> {
    let (dataset, out): (Dataset, PathBuf) = match shape {
        Shape::Circle {
            n,
            radius,
            noise_sigma,
            seed,
            out,
        } => (generate_circle(n, radius, noise_sigma, RngSeed(seed))?, out),
        Shape::Blobs {
            centers,
            n_per,
            sigma,
            seed,
            out,
        } => {
            let centers = parse_centers(&centers)?;
            (generate_blobs(&centers, n_per, sigma, RngSeed(seed))?, out)
        }
    };
    save_csv(&dataset, &out)?;
    eprintln!("wrote {} points to {}", dataset.len(), out.display());
    Ok(())
}

fn parse_centers(text: &str) -> Result<Vec<Vec<f64>>, Error> {
    text.split(';')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            c.split(',')
                .map(|t| {
                    t.trim().parse::<f64>().map_err(|_| {
                        Error::InvalidConfig(format!("bad center coordinate '{}'", t.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn cmd_presets(emit: Option<String>) -> Result<(), Error> {
    let mut stdout = std::io::stdout().lock();
    match emit {
        Some(name) => {
            let p = preset(&name)?;
            let mut json = serde_json::to_string_pretty(&p.config)?;
            json.push('\n');
            stdout.write_all(json.as_bytes())?;
        }
        None => {
            for p in preset_configs() {
                writeln!(stdout, "{:<26} {}", p.name, p.description)?;
            }
        }
    }
    Ok(())
}

fn cmd_export(result_path: &PathBuf, format: Format, out: Option<PathBuf>) -> Result<(), Error> {
    let doc = ResultDoc::load(result_path)?;
    let text = match format {
        Format::Dot => export_dot(&doc.graph.clone().into_graph()),
        Format::Json => {
            let mut json = serde_json::to_string_pretty(&doc.graph)?;
            json.push('\n');
            json
        }
        Format::Svg => export_svg(
            &doc.graph.clone().into_graph(),
            &doc.dataset,
            &doc.lens_values,
        )?,
    };
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
