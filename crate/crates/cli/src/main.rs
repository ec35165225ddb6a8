//! Command-line front end: norm evaluation, cache management, map
//! generation, moduli tables, and concentration/interlaced sweeps with
//! CSV output.
//!
//! Exit codes: 0 success, 2 usage/config error, 3 resource-guard
//! refusal, 4 verification failure.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use combanach::combinatorics::GroundSet;
use combanach::concentration::{
    concentration_sweep, configure_threads, interlaced_sweep, space_map, ExperimentConfig,
};
use combanach::dualnorm::{gauge_norm_verified, PolyhedralNormDescription, TStarEngine};
use combanach::engine::{engine_by_name, EngineOptions, NormEngine};
use combanach::error::Error;
use combanach::lipmaps::{read_map, write_map, FiniteLipschitzMap, Metric};
use combanach::scalar::Scalar;
use combanach::tsirelson::{
    generate_norming_set, load_norming_set_file, save_norming_set_file, t_norm, NormingSet,
};
use combanach::value::NormValue;
use combanach::vector::{read_vector, read_vector_file, FiniteVector};

const CACHE_DIR_ENV: &str = "COMBANACH_CACHE_DIR";
const GENERATION_GUARD: usize = 50_000_000;

#[derive(Parser)]
#[command(name = "combanach", version, about = "Exact norms on combinatorial Banach spaces")]
struct Cli {
    /// Worker threads for parallel subset scans (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm on a vector file.
    Norm(NormArgs),
    /// Run a concentration sweep described by a config file.
    Concentrate(SweepArgs),
    /// Run an interlaced-pair sweep described by a config file.
    Interlaced(SweepArgs),
    /// Build, inspect, or verify norming-set cache files.
    #[command(subcommand)]
    Cache(CacheCommand),
    /// Build experiment maps and export their tables.
    #[command(subcommand)]
    Map(MapCommand),
}

#[derive(Args)]
struct NormArgs {
    /// One of t, tstar, l1, l2, linf, james:<base>.
    #[arg(long)]
    space: String,
    /// Vector file (`-` for stdin).
    #[arg(long)]
    input: String,
    /// Dimension bound; defaults to the largest support index.
    #[arg(long)]
    dim: Option<u32>,
    /// For tstar: print the decomposition certificate and check strong
    /// duality on this solve.
    #[arg(long)]
    verify: bool,
    /// Generate norming sets without domination pruning.
    #[arg(long)]
    no_prune: bool,
    /// Raise the norming-set generation limit (default 10).
    #[arg(long)]
    max_dim: Option<u32>,
    /// Width of the reported l2 enclosure.
    #[arg(long, default_value = "1/1000000")]
    l2_width: String,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment config file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Leave the elapsed_ms column empty so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
    /// Raise the norming-set generation limit (default 10).
    #[arg(long)]
    max_dim: Option<u32>,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Generate a norming set and write the cache file.
    Build(CacheBuildArgs),
    /// Print header data and the depth histogram of a cache file.
    Inspect(CacheRefArgs),
    /// Re-check the checksum and the support_norm = t_norm identity on
    /// sampled vectors.
    Verify(CacheVerifyArgs),
}

#[derive(Args)]
struct CacheBuildArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long)]
    no_prune: bool,
    /// Output path; defaults to `norming-N<dim>.txt` in the cache
    /// directory (or the working directory).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    max_dim: Option<u32>,
}

#[derive(Args)]
struct CacheRefArgs {
    /// Cache file path; defaults to the path `cache build --dim` writes.
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long)]
    dim: Option<u32>,
}

#[derive(Args)]
struct CacheVerifyArgs {
    #[arg(long)]
    path: Option<PathBuf>,
    #[arg(long)]
    dim: Option<u32>,
    /// Number of sampled vectors.
    #[arg(long, default_value_t = 50)]
    samples: u32,
    /// Seed for the deterministic sampler.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum MapCommand {
    /// Build the canonical-basis summing map into a space.
    Build(MapBuildArgs),
    /// Export all pairwise distances of a stored map as CSV.
    Distances(MapIoArgs),
    /// Print compression/expansion moduli at given thresholds.
    Moduli(MapModuliArgs),
}

#[derive(Args)]
struct MapBuildArgs {
    /// One of l1, l2, linf, tstar, jtstar.
    #[arg(long)]
    space: String,
    #[arg(long)]
    k: usize,
    /// Ground range, e.g. `1..8`.
    #[arg(long)]
    ground: String,
    #[arg(long, default_value = "hamming")]
    metric: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    max_dim: Option<u32>,
}

#[derive(Args)]
struct MapIoArgs {
    #[arg(long)]
    map: PathBuf,
    /// Output path (`-` for stdout).
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long)]
    max_dim: Option<u32>,
}

#[derive(Args)]
struct MapModuliArgs {
    #[arg(long)]
    map: PathBuf,
    /// Comma-separated rational thresholds, e.g. `0,1,3/2,2`.
    #[arg(long)]
    thresholds: String,
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long)]
    max_dim: Option<u32>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        configure_threads(jobs);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => 3,
        Error::VerificationFailed(_)
        | Error::ChecksumMismatch { .. }
        | Error::VersionMismatch { .. }
        | Error::Internal(_) => 4,
        _ => 2,
    }
}

fn options(max_dim: Option<u32>, no_prune: bool) -> EngineOptions {
    let mut opts = EngineOptions::default();
    if let Some(d) = max_dim {
        opts.max_norming_dim = opts.max_norming_dim.max(d);
        opts.max_james_tstar_dim = opts.max_james_tstar_dim.max(d);
        opts.max_james_lp_dim = opts.max_james_lp_dim.max(d);
    }
    opts.prune = !no_prune;
    opts
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Norm(args) => cmd_norm(args),
        Command::Concentrate(args) => cmd_sweep(args, false),
        Command::Interlaced(args) => cmd_sweep(args, true),
        Command::Cache(CacheCommand::Build(args)) => cmd_cache_build(args),
        Command::Cache(CacheCommand::Inspect(args)) => cmd_cache_inspect(args),
        Command::Cache(CacheCommand::Verify(args)) => cmd_cache_verify(args),
        Command::Map(MapCommand::Build(args)) => cmd_map_build(args),
        Command::Map(MapCommand::Distances(args)) => cmd_map_distances(args),
        Command::Map(MapCommand::Moduli(args)) => cmd_map_moduli(args),
    }
}

fn read_input_vector(input: &str) -> Result<FiniteVector, Error> {
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        read_vector(buf.as_bytes())
    } else {
        read_vector_file(Path::new(input))
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

fn default_cache_path(dim: u32) -> PathBuf {
    let name = format!("norming-N{dim}.txt");
    match cache_dir() {
        Some(dir) => dir.join(name),
        None => PathBuf::from(name),
    }
}

/// Loads the cached norming set for `dim` if present (warning on a
/// prune-flag mismatch), otherwise generates it and caches it when a
/// cache directory is configured.
fn obtain_norming_set(dim: u32, prune: bool) -> Result<NormingSet, Error> {
    let path = default_cache_path(dim);
    if path.exists() {
        let set = load_norming_set_file(&path)?;
        if set.dim() != dim {
            return Err(Error::VerificationFailed(format!(
                "cache file {} has N = {}, expected {dim}",
                path.display(),
                set.dim()
            )));
        }
        if set.prune() != prune {
            eprintln!(
                "warning: cache file {} records prune={}, context expects prune={}",
                path.display(),
                set.prune(),
                prune
            );
        }
        return Ok(set);
    }
    let set = generate_norming_set(dim, prune, GENERATION_GUARD)?;
    if cache_dir().is_some() {
        save_norming_set_file(&path, &set)?;
    }
    Ok(set)
}

fn cmd_norm(args: NormArgs) -> Result<(), Error> {
    let v = read_input_vector(&args.input)?;
    let dim = match args.dim {
        Some(d) => d,
        None => v.max_index().unwrap_or(1),
    };
    if let Some(max) = v.max_index() {
        if max > dim {
            return Err(Error::DimensionExceeded {
                engine: args.space.clone(),
                support_max: max,
                bound: dim,
            });
        }
    }
    let opts = options(args.max_dim, args.no_prune);

    if args.verify {
        if args.space != "tstar" {
            return Err(Error::parse(
                "--verify",
                "certificate verification is available for --space tstar",
            ));
        }
        if dim > opts.max_norming_dim {
            return Err(Error::ResourceLimit(format!(
                "tstar dimension {dim} exceeds the norming-set generation limit {} \
                 (raise with --max-dim)",
                opts.max_norming_dim
            )));
        }
        let set = obtain_norming_set(dim, opts.prune)?;
        let desc = PolyhedralNormDescription::from_norming_set(&set);
        let solved = gauge_norm_verified(&v, &desc)?;
        println!("{}", solved.value);
        print!("{}", solved.certificate.render(&v));
        println!(
            "dual-witness pairing {}",
            v.abs().inner_product(&solved.dual_witness)
        );
        println!("dual-witness t-norm {}", t_norm(&solved.dual_witness));
        println!("verified primal = dual");
        return Ok(());
    }

    if args.space == "tstar" {
        if dim > opts.max_norming_dim {
            return Err(Error::ResourceLimit(format!(
                "tstar dimension {dim} exceeds the norming-set generation limit {} \
                 (raise with --max-dim)",
                opts.max_norming_dim
            )));
        }
        let set = obtain_norming_set(dim, opts.prune)?;
        let engine = TStarEngine::new(PolyhedralNormDescription::from_norming_set(&set));
        println!("{}", engine.norm(&v)?);
        return Ok(());
    }

    let engine: Arc<dyn NormEngine> = engine_by_name(&args.space, dim, &opts)?;
    let value = engine.evaluate(&v)?;
    println!("{value}");
    if args.space == "l2" {
        if let NormValue::Sqrt(_) = &value {
            // Quarantined reporting: the exact square plus an enclosure.
            println!("squared {}", value.square());
            let width: Scalar = args
                .l2_width
                .parse()
                .map_err(|_| Error::parse("--l2-width", "expected a positive rational"))?;
            if !width.is_positive() {
                return Err(Error::parse("--l2-width", "expected a positive rational"));
            }
            let (lo, hi) = v.l2_norm_interval(&width);
            println!("interval {lo} {hi}");
        }
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs, interlaced: bool) -> Result<(), Error> {
    let text = std::fs::read_to_string(&args.config)?;
    let config = ExperimentConfig::parse(&text)?;
    let opts = options(args.max_dim, false);
    let csv = if interlaced {
        interlaced_sweep(&config, &opts, !args.no_timing)?
    } else {
        concentration_sweep(&config, &opts, !args.no_timing)?
    };
    if config.output == "-" {
        print!("{csv}");
    } else {
        std::fs::write(&config.output, csv)?;
    }
    Ok(())
}

fn cmd_cache_build(args: CacheBuildArgs) -> Result<(), Error> {
    let opts = options(args.max_dim, args.no_prune);
    if args.dim > opts.max_norming_dim {
        return Err(Error::ResourceLimit(format!(
            "dimension {} exceeds the generation limit {} (raise with --max-dim)",
            args.dim, opts.max_norming_dim
        )));
    }
    let set = generate_norming_set(args.dim, opts.prune, GENERATION_GUARD)?;
    let path = args.out.unwrap_or_else(|| default_cache_path(args.dim));
    save_norming_set_file(&path, &set)?;
    println!("wrote {} functionals to {}", set.len(), path.display());
    Ok(())
}

fn resolve_cache_path(path: Option<PathBuf>, dim: Option<u32>) -> Result<PathBuf, Error> {
    match (path, dim) {
        (Some(p), _) => Ok(p),
        (None, Some(d)) => Ok(default_cache_path(d)),
        (None, None) => Err(Error::parse("cache reference", "need --path or --dim")),
    }
}

fn cmd_cache_inspect(args: CacheRefArgs) -> Result<(), Error> {
    let path = resolve_cache_path(args.path, args.dim)?;
    let set = load_norming_set_file(&path)?;
    println!("N {}", set.dim());
    println!("prune {}", set.prune());
    println!("count {}", set.len());
    println!("depth-histogram");
    for (depth, count) in set.depth_histogram() {
        println!("  {depth} {count}");
    }
    Ok(())
}

/// Deterministic cross-platform sampler (splitmix-style), so `cache
/// verify` output is reproducible for a given seed.
struct Sampler(u64);

impl Sampler {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn cmd_cache_verify(args: CacheVerifyArgs) -> Result<(), Error> {
    let path = resolve_cache_path(args.path, args.dim)?;
    let set = load_norming_set_file(&path)?;
    if let Some(d) = args.dim {
        if set.dim() != d {
            return Err(Error::VerificationFailed(format!(
                "cache file has N = {}, expected {d}",
                set.dim()
            )));
        }
    }
    let n = set.dim();
    let mut sampler = Sampler(args.seed);
    for round in 0..args.samples {
        let mut v = FiniteVector::zero();
        for i in 1..=n {
            if sampler.below(2) == 0 {
                continue;
            }
            let num = sampler.below(9) as i64 - 4;
            let den = sampler.below(4) as i64 + 1;
            v.set(i, Scalar::new(num, den));
        }
        let by_set = set.support_norm(&v)?;
        let by_dp = t_norm(&v);
        if by_set != by_dp {
            return Err(Error::VerificationFailed(format!(
                "sample {round}: support_norm {by_set} differs from t-norm {by_dp} on {v:?}"
            )));
        }
    }
    println!("checksum ok, {} samples verified", args.samples);
    Ok(())
}

fn parse_ground(text: &str) -> Result<GroundSet, Error> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Error::parse(format!("ground `{text}`"), "expected lo..hi"))?;
    let lo: u32 = lo
        .trim()
        .parse()
        .map_err(|e| Error::parse(format!("ground `{text}`"), format!("{e}")))?;
    let hi: u32 = hi
        .trim()
        .parse()
        .map_err(|e| Error::parse(format!("ground `{text}`"), format!("{e}")))?;
    GroundSet::range(lo, hi)
}

fn cmd_map_build(args: MapBuildArgs) -> Result<(), Error> {
    let opts = options(args.max_dim, false);
    let ground = parse_ground(&args.ground)?;
    let metric = Metric::parse(&args.metric)?;
    let map = space_map(&args.space, ground, args.k, metric, &opts)?;
    let mut buf = Vec::new();
    write_map(&mut buf, &map)?;
    std::fs::write(&args.out, buf)?;
    println!("wrote map with {} points to {}", map.len(), args.out.display());
    Ok(())
}

fn load_map_file(path: &Path, max_dim: Option<u32>) -> Result<FiniteLipschitzMap, Error> {
    let file = std::fs::File::open(path)?;
    let opts = options(max_dim, false);
    read_map(std::io::BufReader::new(file), &opts)
}

fn write_output(out: &str, text: &str) -> Result<(), Error> {
    if out == "-" {
        print!("{text}");
    } else {
        std::fs::write(out, text)?;
    }
    Ok(())
}

fn cmd_map_distances(args: MapIoArgs) -> Result<(), Error> {
    let map = load_map_file(&args.map, args.max_dim)?;
    let csv = map.distances_csv()?;
    write_output(&args.out, &csv)
}

fn cmd_map_moduli(args: MapModuliArgs) -> Result<(), Error> {
    let map = load_map_file(&args.map, args.max_dim)?;
    let thresholds: Vec<Scalar> = args
        .thresholds
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<Scalar>()
                .map_err(|_| Error::parse(format!("threshold `{t}`"), "expected a rational"))
        })
        .collect::<Result<_, _>>()?;
    let profile = map.moduli_profile(&thresholds)?;
    write_output(&args.out, &profile.to_csv())
}
