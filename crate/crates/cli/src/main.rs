use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rolekit::dataset::{load_tudataset, write_roles_csv};
use rolekit::metrics::{depth_sweep, write_sweep_csv, DepthSweepRow};
use rolekit::verify::{run_all, VerifyConfig};
use rolekit::wl::SignatureMode;
use rolekit::{exact, snp, wl, Coloring, Error, ExactConfig, GraphCollection, Method};

/// Depth-parameterised node roles on TUDataset collections.
#[derive(Parser, Debug)]
#[command(name = "rolekit", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-node role ids at one depth.
    Roles(RolesArgs),
    /// Role counts and label overlap for a range of depths.
    Sweep(SweepArgs),
    /// Randomised cross-checks between the role methods and their oracles.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Directory holding `<prefix>_A.txt` etc. Defaults to
    /// `$ROLEKIT_DATA_DIR/<prefix>`.
    #[arg(long)]
    dataset: Option<PathBuf>,

    /// File prefix. Defaults to the name of the dataset directory.
    #[arg(long)]
    prefix: Option<String>,

    #[arg(long, value_parser = parse_method)]
    method: Method,

    /// Output file, or `-` for stdout.
    #[arg(short, long, default_value = "-")]
    output: String,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Largest collection (in nodes) accepted by the exact method.
    #[arg(long, default_value_t = ExactConfig::default().max_nodes)]
    max_exact_nodes: usize,
}

#[derive(Args, Debug)]
struct RolesArgs {
    #[command(flatten)]
    data: DatasetArgs,

    #[arg(long)]
    depth: usize,

    /// Also dump the SNP embeddings (snp method only).
    #[arg(long)]
    embeddings: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    data: DatasetArgs,

    #[arg(long, default_value_t = 0)]
    min_depth: usize,

    #[arg(long)]
    max_depth: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 200)]
    trials: usize,

    /// Replace the injective WL signature dictionary by a single hash bucket.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_)
            | Error::MissingFile(_)
            | Error::Parse { .. }
            | Error::AsymmetricEdge(..) => 1,
            Error::SizeGuard { .. } | Error::Overflow { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.into()).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("rolekit: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .expect("thread pool is configured once");
    }
    let result = match cli.command {
        Command::Roles(args) => cmd_roles(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rolekit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn resolve_dataset(args: &DatasetArgs) -> Result<(PathBuf, String), Failure> {
    match (&args.dataset, &args.prefix) {
        (Some(dir), Some(prefix)) => Ok((dir.clone(), prefix.clone())),
        (Some(dir), None) => {
            let prefix = dir
                .file_name()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Failure::config("cannot infer --prefix from --dataset"))?;
            Ok((dir.clone(), prefix.to_string()))
        }
        (None, Some(prefix)) => {
            let root = std::env::var_os("ROLEKIT_DATA_DIR").ok_or_else(|| {
                Failure::config("no --dataset given and ROLEKIT_DATA_DIR is unset")
            })?;
            Ok((Path::new(&root).join(prefix), prefix.clone()))
        }
        (None, None) => Err(Failure::config("need --dataset or --prefix")),
    }
}

fn load(args: &DatasetArgs) -> Result<(GraphCollection, String), Failure> {
    let (dir, prefix) = resolve_dataset(args)?;
    let start = Instant::now();
    let collection = load_tudataset(&dir, &prefix)?;
    eprintln!(
        "rolekit: loaded {prefix}: {} graphs, {} nodes in {:.2?}",
        collection.len(),
        collection.total_nodes(),
        start.elapsed()
    );
    Ok((collection, prefix))
}

fn exact_config(args: &DatasetArgs) -> ExactConfig {
    ExactConfig {
        max_nodes: args.max_exact_nodes,
        ..ExactConfig::default()
    }
}

fn open_output(path: &str) -> Result<Box<dyn Write>, Failure> {
    if path == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

#[derive(Serialize)]
struct RoleRecord {
    graph_id: usize,
    node_id: usize,
    role_id: u32,
}

fn cmd_roles(args: RolesArgs) -> Result<(), Failure> {
    if args.embeddings.is_some() && args.data.method != Method::Snp {
        return Err(Failure::config("--embeddings requires --method snp"));
    }
    let (collection, _) = load(&args.data)?;
    let d = args.depth;
    let start = Instant::now();
    let roles: Coloring = match args.data.method {
        Method::Wl => wl::wl_roles_collection(&collection, d)
            .colorings
            .pop()
            .unwrap(),
        Method::Snp => snp::snp_roles(&collection, d)?,
        Method::Exact => exact::exact_roles_collection(&collection, d, &exact_config(&args.data))?,
    };
    eprintln!(
        "rolekit: {} roles at depth {d}: {} classes in {:.2?}",
        args.data.method,
        roles.num_classes(),
        start.elapsed()
    );

    let mut out = open_output(&args.data.output)?;
    match args.data.format {
        Format::Csv => write_roles_csv(&mut out, &collection, &roles)?,
        Format::Json => {
            let mut records = Vec::with_capacity(roles.len());
            for gid in 0..collection.len() {
                for (local, global) in collection.node_range(gid).enumerate() {
                    records.push(RoleRecord {
                        graph_id: gid + 1,
                        node_id: local + 1,
                        role_id: roles.color(global),
                    });
                }
            }
            serde_json::to_writer_pretty(&mut out, &records)?;
            writeln!(out)?;
        }
    }
    out.flush()?;

    if let Some(path) = &args.embeddings {
        let mut dump = BufWriter::new(File::create(path)?);
        snp::write_embedding_dump(&collection, d, &mut dump)?;
        dump.flush()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepRecord<'a> {
    dataset: &'a str,
    method: String,
    depth: usize,
    num_roles: usize,
    roles_per_node: f64,
    overlap: Option<f64>,
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    if args.min_depth > args.max_depth {
        return Err(Failure::config(format!(
            "empty depth range {}..={}",
            args.min_depth, args.max_depth
        )));
    }
    let (collection, name) = load(&args.data)?;
    let start = Instant::now();
    let rows: Vec<DepthSweepRow> = depth_sweep(
        &collection,
        args.data.method,
        args.max_depth,
        &exact_config(&args.data),
    )?
    .into_iter()
    .filter(|r| r.depth >= args.min_depth)
    .collect();
    eprintln!(
        "rolekit: {} sweep to depth {} in {:.2?}",
        args.data.method,
        args.max_depth,
        start.elapsed()
    );

    let mut out = open_output(&args.data.output)?;
    match args.data.format {
        Format::Csv => write_sweep_csv(&mut out, &name, &rows)?,
        Format::Json => {
            let records: Vec<SweepRecord> = rows
                .iter()
                .map(|r| SweepRecord {
                    dataset: &name,
                    method: r.method.to_string(),
                    depth: r.depth,
                    num_roles: r.num_roles,
                    roles_per_node: r.roles_per_node,
                    overlap: r.overlap,
                })
                .collect();
            serde_json::to_writer_pretty(&mut out, &records)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let config = VerifyConfig {
        seed: args.seed,
        trials: args.trials,
        mode: if args.inject_fault {
            SignatureMode::Colliding { buckets: 1 }
        } else {
            SignatureMode::Exact
        },
    };
    eprintln!(
        "rolekit: verify seed={} trials={}",
        config.seed, config.trials
    );
    let reports = run_all(&config)?;
    for r in &reports {
        eprintln!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(Failure {
            code: 4,
            message: format!("{failed} of {} suites failed", reports.len()),
        });
    }
    Ok(())
}
