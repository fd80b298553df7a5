use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ratiocert::json::{render, round12, ToJson};
use ratiocert::{certify, eigen, generate, io, oracle, perturb, rounding};
use ratiocert::{Error, Partition, WeightedGraph};
use serde_json::json;

/// Spectral clustering with ratio-cut certificates and eigenmap perturbation bounds.
#[derive(Parser, Debug)]
#[command(name = "ratiocert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated graph (edge list) and its planted partition.
    Gen(GenArgs),
    /// Spectral clustering; writes a partition file and `<output>.json`.
    Cluster(ClusterArgs),
    /// Optimality certificate of a partition.
    Certify(GraphPartitionArgs),
    /// Two-to-infinity perturbation report for a planted partition.
    Bound(GraphPartitionArgs),
    /// Lower, exact and upper estimates of the ℓ∞ gap.
    Gap(GraphArgs),
    /// Exhaustive minimum ratio cut for small graphs.
    Oracle(OracleArgs),
    /// Laplacian eigenmap coordinates as TSV, one row per vertex.
    Eigenmap(EigenmapArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    ExampleBlocks,
    Unbalanced,
    Planted,
}

#[derive(Args, Debug)]
struct GenArgs {
    family: Family,
    /// Block size for example-blocks.
    #[arg(long)]
    n: Option<usize>,
    /// Cross weight for example-blocks.
    #[arg(long)]
    c: Option<f64>,
    /// Comma-separated block sizes for planted.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    intra: f64,
    #[arg(long)]
    cross: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list destination.
    #[arg(long)]
    output: PathBuf,
    /// Partition destination, default `<output>.partition`.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Fiedler,
    Kmeans,
}

impl From<MethodArg> for rounding::Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fiedler => rounding::Method::Fiedler,
            MethodArg::Kmeans => rounding::Method::KMeans,
        }
    }
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "kmeans")]
    method: MethodArg,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Partition destination; the summary goes to `<output>.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GraphPartitionArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    partition: PathBuf,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EigenmapArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    /// Defaults to standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure with the process exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Input(_) | Error::Parse { .. } | Error::Io(_) | Error::TooLarge(_) => 2,
            Error::Hypothesis(_) => 3,
            Error::Internal(_) => 1,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Errors from reading `path`, prefixed with the file name.
fn in_file(path: &Path, err: Error) -> Failure {
    let mut f = Failure::from(err);
    f.message = format!("{}: {}", path.display(), f.message);
    f
}

fn read_graph(path: &Path) -> Result<WeightedGraph, Failure> {
    io::read_edge_list(path).map_err(|e| in_file(path, e))
}

fn read_partition(path: &Path, n: usize) -> Result<Partition, Failure> {
    let p = io::read_partition(path).map_err(|e| in_file(path, e))?;
    if p.n() != n {
        return Err(usage(format!(
            "{}: partition has {} labels but the graph has {n} vertices",
            path.display(),
            p.n()
        )));
    }
    Ok(p)
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| in_file(path, e.into()))
}

fn emit(output: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match output {
        Some(path) => write(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    let (g, p) = match args.family {
        Family::ExampleBlocks => {
            let n = args.n.ok_or_else(|| usage("example-blocks needs --n"))?;
            let c = args.c.ok_or_else(|| usage("example-blocks needs --c"))?;
            generate::example_blocks(n, c)?
        }
        Family::Unbalanced => generate::unbalanced_example(),
        Family::Planted => {
            if args.sizes.is_empty() {
                return Err(usage("planted needs --sizes"));
            }
            let cross = args.cross.ok_or_else(|| usage("planted needs --cross"))?;
            generate::planted_blocks(&args.sizes, args.intra, cross, args.seed)?
        }
    };
    let partition = args
        .partition
        .clone()
        .unwrap_or_else(|| with_suffix(&args.output, ".partition"));
    write(&args.output, &io::write_edge_list(&g))?;
    write(&partition, &io::write_partition(&p))
}

fn cluster(args: &ClusterArgs) -> Result<(), Failure> {
    let g = read_graph(&args.input)?;
    let res = rounding::spectral_cluster(&g, args.k, args.method.into(), args.seed, args.restarts)?;
    let ratio_cut = g.ratio_cut(&res.partition)?;
    let mut summary = res.to_json();
    summary["method"] = json!(format!("{:?}", args.method).to_lowercase());
    summary["seed"] = json!(args.seed);
    summary["ratio_cut"] = ratiocert::json::float(ratio_cut);
    write(&args.output, &io::write_partition(&res.partition))?;
    write(&with_suffix(&args.output, ".json"), &render(&Raw(summary)))
}

/// Pre-built JSON value.
struct Raw(serde_json::Value);

impl ToJson for Raw {
    fn to_json(&self) -> serde_json::Value {
        self.0.clone()
    }
}

fn eigenmap_tsv(g: &WeightedGraph, k: usize) -> Result<String, Failure> {
    let em = eigen::eigenmap(g, k)?;
    let mut s = String::new();
    for row in em.u.row_iter() {
        let cells: Vec<String> = row.iter().map(|&x| format!("{}", round12(x) + 0.0)).collect();
        writeln!(s, "{}", cells.join("\t")).expect("writing to a String");
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen(args) => gen(args),
        Command::Cluster(args) => cluster(args),
        Command::Certify(args) => {
            let g = read_graph(&args.input)?;
            let p = read_partition(&args.partition, g.n())?;
            emit(args.output.as_deref(), &render(&certify::certificate(&g, &p)?))
        }
        Command::Bound(args) => {
            let g = read_graph(&args.input)?;
            let p = read_partition(&args.partition, g.n())?;
            emit(args.output.as_deref(), &render(&perturb::theoretical_bound(&g, &p)?))
        }
        Command::Gap(args) => {
            let g = read_graph(&args.input)?;
            emit(args.output.as_deref(), &render(&perturb::gap_report(&g)?))
        }
        Command::Oracle(args) => {
            let g = read_graph(&args.input)?;
            let res = oracle::min_ratio_cut_bruteforce(&g, args.k)?;
            emit(args.output.as_deref(), &render(&res))
        }
        Command::Eigenmap(args) => {
            let g = read_graph(&args.input)?;
            emit(args.output.as_deref(), &eigenmap_tsv(&g, args.k)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    log::debug!("{cli:?}");
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
