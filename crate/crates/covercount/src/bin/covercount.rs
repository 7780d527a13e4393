//! Command-line front end. Exit codes: 0 ok, 1 usage or parse error,
//! 2 guard exceeded, 3 verification failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use covercount::io::{parse_atoms_file, parse_graph_auto, write_atoms_file};
use covercount::report::SearchReport;
use covercount::verify::{run_suites, VerifyConfig, SUITE_NAMES};
use covercount::{
    count_covers, enumerate_atoms, rooted_profile, run_closure, AtomSet, Error, Graph, Result,
    RootedGraph,
};

/// Largest input graph `count`/`profile` accept without an explicit
/// override; the exact algorithm is exponential in the worst case.
const DEFAULT_EDGE_GUARD: usize = 64;

/// Largest `--max-vertices` the atom enumerator accepts from the CLI.
const DEFAULT_VERTEX_GUARD: usize = 10;

/// Enumeration is backed by a completeness argument only up to this
/// threshold, so exported catalogs never assert a bound above it.
const ENUMERATION_CERTIFIED_TO: u64 = 67;

#[derive(Parser)]
#[command(
    name = "covercount",
    version,
    about = "Exact edge-cover counting and achievable-count search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count the edge coverings of a graph file
    Count(CountArgs),
    /// Print the rooted profile alpha, beta, s of a graph file
    Profile(ProfileArgs),
    /// Close an atom set under gluing and report achievable counts in 1..=L
    Search(SearchArgs),
    /// Enumerate atomic bipartite graphs with cover count at most a threshold
    Atoms(AtomsArgs),
    /// Run the self-check suites
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CountArgs {
    /// Graph file: edge-list (`n m` header then `u v` lines) or graph6
    path: PathBuf,
    /// Treat the input as graph6 even without a `>>graph6<<` header
    #[arg(long)]
    graph6: bool,
}

#[derive(Args)]
struct ProfileArgs {
    path: PathBuf,
    /// Root vertex
    #[arg(long)]
    root: usize,
    #[arg(long)]
    graph6: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Search bound L: report every value in 1..=L
    #[arg(long, default_value_t = 67, value_parser = clap::value_parser!(u64).range(1..))]
    max: u64,
    /// Use the single-edge atom set: searches tree-achievable counts
    #[arg(long, conflicts_with = "atoms_file")]
    trees: bool,
    /// Atom catalog file (as written by `atoms --format records`)
    #[arg(long)]
    atoms_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 means one per core
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct AtomsArgs {
    /// Keep atoms with cover count at most this threshold
    #[arg(long, default_value_t = 67, value_parser = clap::value_parser!(u64).range(1..))]
    max: u64,
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
    /// `records` emits a catalog file consumable by `search --atoms-file`
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); default runs all of them
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Random draws per randomized suite
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 20260815)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Records,
}

struct Guards {
    edge: usize,
    vertex: usize,
}

fn guard_from_env(name: &str, default: usize) -> Result<usize> {
    match std::env::var(name) {
        Ok(raw) => match raw.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(Error::InvalidArgument(format!(
                "{name} must be a positive integer, got {raw:?}"
            ))),
        },
        Err(_) => Ok(default),
    }
}

fn guards_from_env() -> Result<Guards> {
    Ok(Guards {
        edge: guard_from_env("COVERCOUNT_EDGE_GUARD", DEFAULT_EDGE_GUARD)?,
        vertex: guard_from_env("COVERCOUNT_VERTEX_GUARD", DEFAULT_VERTEX_GUARD)?,
    })
}

fn read_graph(path: &Path, force_graph6: bool, guards: &Guards) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    let g = parse_graph_auto(&text, force_graph6)?;
    if g.edge_count() > guards.edge {
        return Err(Error::GuardExceeded(format!(
            "input has {} edges, over the limit {} (raise COVERCOUNT_EDGE_GUARD to override)",
            g.edge_count(),
            guards.edge
        )));
    }
    Ok(g)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn set_jobs(jobs: usize) {
    if jobs > 0 {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn cmd_count(args: &CountArgs, guards: &Guards) -> Result<ExitCode> {
    let g = read_graph(&args.path, args.graph6, guards)?;
    println!("{}", count_covers(&g));
    Ok(ExitCode::SUCCESS)
}

fn cmd_profile(args: &ProfileArgs, guards: &Guards) -> Result<ExitCode> {
    let g = read_graph(&args.path, args.graph6, guards)?;
    let profile = rooted_profile(&RootedGraph::new(g, args.root)?);
    println!("alpha={} beta={} s={}", profile.alpha, profile.beta, profile.s());
    Ok(ExitCode::SUCCESS)
}

fn atom_set_for(args: &SearchArgs) -> Result<AtomSet> {
    if args.trees {
        return Ok(AtomSet::trees());
    }
    match &args.atoms_file {
        None => Ok(AtomSet::default_seven()),
        Some(path) => {
            let (graphs, bound) = parse_atoms_file(&fs::read_to_string(path)?)?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "file".into());
            AtomSet::new(id, graphs, bound)
        }
    }
}

fn cmd_search(args: &SearchArgs) -> Result<ExitCode> {
    set_jobs(args.jobs);
    let atoms = atom_set_for(args)?;
    let pool = run_closure(&atoms, args.max)?;
    let report = SearchReport::from_pool(&pool);
    let text = match args.format {
        Format::Table => report.render_table(),
        Format::Records => report.render_records(),
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_atoms(args: &AtomsArgs, guards: &Guards) -> Result<ExitCode> {
    if args.max_vertices > guards.vertex {
        return Err(Error::GuardExceeded(format!(
            "--max-vertices {} is over the limit {} (raise COVERCOUNT_VERTEX_GUARD to override)",
            args.max_vertices, guards.vertex
        )));
    }
    let catalog = enumerate_atoms(args.max, args.max_vertices)?;
    let bound = args.max.min(ENUMERATION_CERTIFIED_TO);
    let text = match args.format {
        Format::Records => write_atoms_file(catalog.atoms(), bound),
        Format::Table => {
            let mut out = format!(
                "{} atoms with cover count <= {} on <= {} vertices (certified to {bound})\n",
                catalog.len(),
                args.max,
                args.max_vertices
            );
            for (i, (g, alpha)) in catalog.atoms().iter().enumerate() {
                out.push_str(&format!(
                    "atom {i}: n={} m={} alpha={alpha} edges={:?}\n",
                    g.vertex_count(),
                    g.edge_count(),
                    g.edges()
                ));
            }
            out
        }
    };
    emit(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    set_jobs(args.jobs);
    let names: Vec<&str> = if args.suites.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        let mut names = Vec::new();
        for s in &args.suites {
            match SUITE_NAMES.iter().find(|&&n| n == s) {
                Some(&n) => names.push(n),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown suite {s:?}; known: {}",
                        SUITE_NAMES.join(", ")
                    )))
                }
            }
        }
        names
    };
    let cfg = VerifyConfig {
        samples: args.samples as usize,
        seed: args.seed,
        mutate_oracle: std::env::var_os("COVERCOUNT_VERIFY_MUTATE").is_some(),
        ..VerifyConfig::default()
    };
    let results = run_suites(&names, &cfg)?;
    let mut all_passed = true;
    for r in &results {
        println!("suite {}: {} checks, {} failures", r.name, r.checks, r.failures);
        for ex in &r.examples {
            println!("  {ex}");
        }
        all_passed &= r.passed();
    }
    if all_passed {
        println!("verify: PASS");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("verify: FAIL");
        Ok(ExitCode::from(3))
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let guards = guards_from_env()?;
    match &cli.command {
        Command::Count(args) => cmd_count(args, &guards),
        Command::Profile(args) => cmd_profile(args, &guards),
        Command::Search(args) => cmd_search(args),
        Command::Atoms(args) => cmd_atoms(args, &guards),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::GuardExceeded(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
