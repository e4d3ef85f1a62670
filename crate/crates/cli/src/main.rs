//! Command line for the spherical contact graph toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 enumeration left
//! undecided candidates.

mod configfile;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scg_core::embedder::SolverBudget;
use scg_core::extremal::{contact_upper_bound, fejes_toth_bound};
use scg_core::pipeline::{enumerate_records, enumerate_with_cache, RunFilters, RunManifest};
use scg_core::record::{records_to_jsonl, GraphRecord};
use scg_core::rigidity::{classify_config, vertex_shiftable};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scg", about = "Irreducible contact graphs of equal-circle packings on the sphere", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the irreducible contact graphs on n vertices.
    Enumerate(EnumerateArgs),
    /// Inspect a point configuration file: separation, contacts, rigidity.
    Check(CheckArgs),
    /// Tabulate the separation upper bound and the contact-count bound.
    Bounds(BoundsArgs),
    /// Render a configuration or an enumerated record to SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct EnumerateArgs {
    /// Vertex count (6..=11 is the validated range).
    #[arg(long)]
    n: usize,
    /// Only look for configurations with separation at least this value.
    #[arg(long)]
    d_lower: Option<f64>,
    /// Largest admissible face size.
    #[arg(long, default_value_t = 6)]
    max_face: usize,
    /// Skip isolated-vertex candidates.
    #[arg(long)]
    no_isolated: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Multistart attempts per candidate.
    #[arg(long, default_value_t = 64)]
    starts: usize,
    /// Iteration budget per attempt.
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Acceptance threshold on the constraint violation.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Cache directory (also via SCG_CACHE_DIR); reruns with an equal
    /// manifest reuse cached results.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Records file to write (JSON lines). Defaults to `records-<n>.jsonl`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct CheckArgs {
    /// Configuration file: `x y z` per line, or `theta phi` after a
    /// `spherical` header line.
    config: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 3)]
    from: usize,
    #[arg(long, default_value_t = 14)]
    to: usize,
}

#[derive(Args)]
struct RenderArgs {
    /// Configuration file to draw.
    #[arg(long, conflicts_with = "records")]
    config: Option<PathBuf>,
    /// Records file (JSON lines) to draw from.
    #[arg(long, requires = "index")]
    records: Option<PathBuf>,
    /// Record index within the records file.
    #[arg(long)]
    index: Option<usize>,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let kind = e.kind();
            let _ = e.print();
            return if kind == clap::error::ErrorKind::DisplayHelp
                || kind == clap::error::ErrorKind::DisplayVersion
            {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> scg_core::Result<ExitCode> {
    match cli.command {
        Command::Enumerate(args) => enumerate(args),
        Command::Check(args) => check(args),
        Command::Bounds(args) => bounds(args),
        Command::Render(args) => render(args),
    }
}

fn enumerate(args: EnumerateArgs) -> scg_core::Result<ExitCode> {
    if !(4..=11).contains(&args.n) {
        eprintln!("error: --n must lie in 4..=11 (6..=11 is the validated range)");
        return Ok(ExitCode::from(1));
    }
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .ok();
    }
    let filters = RunFilters {
        max_face_size: args.max_face,
        d_lower: args.d_lower,
        allow_isolated: !args.no_isolated,
    };
    let budget = SolverBudget {
        starts: args.starts,
        iters: args.iters,
        accept_tol: args.tol,
    };
    let manifest = RunManifest::new(args.n, filters.clone(), budget);
    let cache_dir = args
        .cache_dir
        .or_else(|| std::env::var_os("SCG_CACHE_DIR").map(PathBuf::from));
    let out = match &cache_dir {
        Some(dir) => enumerate_with_cache(&manifest, dir)?,
        None => enumerate_records(args.n, &filters, &budget)?,
    };

    let records_path = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("records-{}.jsonl", args.n)));
    std::fs::write(&records_path, records_to_jsonl(&out.records)?)?;

    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out.report)?),
        Format::Csv => {
            println!("n,irreducible,d_n,delta_n,k_star,kappa,ft_bound,k_lower,undecided");
            let r = &out.report;
            println!(
                "{},{},{:.5},{:.5},{},{},{:.5},{},{}",
                r.n,
                r.irreducible_count,
                r.d_n,
                r.delta_n,
                r.k_star,
                r.kappa,
                r.ft_bound,
                r.k_lower,
                r.undecided
            );
        }
        Format::Md => {
            let r = &out.report;
            println!("| n | I_n | d_n | delta_n | k* | kappa | bound |");
            println!("|---|-----|-----|---------|----|-------|-------|");
            println!(
                "| {} | {} | {:.5} | {:.5} | {} | {} | {:.5} |",
                r.n, r.irreducible_count, r.d_n, r.delta_n, r.k_star, r.kappa, r.ft_bound
            );
        }
    }
    eprintln!(
        "records: {} (wrote {}); candidates {}, lp pruned {}, infeasible {}, reducible {}, undecided {}",
        out.records.len(),
        records_path.display(),
        out.stats.candidates,
        out.stats.lp_pruned,
        out.stats.infeasible,
        out.stats.reducible,
        out.stats.undecided
    );
    for key in &out.undecided_keys {
        eprintln!("undecided candidate: {key}");
    }
    Ok(if out.stats.undecided > 0 {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}

fn check(args: CheckArgs) -> scg_core::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.config)?;
    let cfg = configfile::parse_config(&text)?;
    let flags = classify_config(&cfg)?;
    println!("points: {}", cfg.n());
    println!("separation (psi): {:.6}", cfg.separation);
    println!("contacts: {}", cfg.contact_count());
    println!("irreducible: {}", flags.irreducible);
    println!("d-irreducible: {}", flags.d_irreducible);
    if let Some((v, dir)) = flags.shift_witness {
        println!(
            "shiftable vertex: {v} toward [{:.4}, {:.4}, {:.4}]",
            dir[0], dir[1], dir[2]
        );
    }
    if let Some((x, y, z)) = flags.reflection_witness {
        println!("admissible reflection: vertex {x} across contacts ({y}, {z})");
    } else if flags.irreducible {
        println!("admissible reflection: none");
    }
    // Per-vertex summary.
    for v in 0..cfg.n() {
        let contacts = cfg.contacts_of(v);
        let shift = vertex_shiftable(&cfg, v)?.is_some();
        println!(
            "vertex {v}: degree {}, shiftable {}",
            contacts.len(),
            shift
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds(args: BoundsArgs) -> scg_core::Result<ExitCode> {
    if args.from < 3 || args.to < args.from {
        eprintln!("error: need 3 <= from <= to");
        return Ok(ExitCode::from(1));
    }
    println!("n,separation_bound,contact_bound");
    for n in args.from..=args.to {
        println!(
            "{},{:.5},{}",
            n,
            fejes_toth_bound(n)?,
            contact_upper_bound(n)?
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn render(args: RenderArgs) -> scg_core::Result<ExitCode> {
    let cfg = match (&args.config, &args.records) {
        (Some(path), None) => configfile::parse_config(&std::fs::read_to_string(path)?)?,
        (None, Some(path)) => {
            let index = args.index.unwrap_or(0);
            let text = std::fs::read_to_string(path)?;
            let line = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .nth(index)
                .ok_or_else(|| {
                    scg_core::Error::Incomplete(format!("no record at index {index}"))
                })?;
            let record = GraphRecord::from_json_line(line)?;
            let points = record
                .coords_at_dmax
                .iter()
                .map(|c| scg_core::sphere_geom::UnitVector::new(c[0], c[1], c[2]))
                .collect::<scg_core::Result<Vec<_>>>()?;
            scg_core::embedder::SphericalConfig::from_points(points)?
        }
        _ => {
            eprintln!("error: provide exactly one of --config or --records");
            return Ok(ExitCode::from(1));
        }
    };
    std::fs::write(&args.out, svg::render_svg(&cfg))?;
    eprintln!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}
