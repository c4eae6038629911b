use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mindeg_core::bruteforce::{mindeg_ordering_bruteforce, total_fill};
use mindeg_core::decorrelate::{approx_min_degree_sequence_with, ApproxOrderConfig};
use mindeg_core::exact::{
    delta_capped_min_degree, output_sensitive_min_degree, sketch_exact_min_degree, DEFAULT_C_K,
};
use mindeg_core::instances::{
    covering_set_system, generate, ov_reduction_graph, random_ov_vectors, Family,
};
use mindeg_core::io::{read_graph, read_permutation, write_graph, write_permutation, Format};
use mindeg_core::{verify_ordering, Error, Graph, OrderingResult};

const AFTER_HELP: &str = "\
Exit codes:
  0   success
  1   verification failed (verify found violating steps, cover-check failed)
  2   I/O or parse error
  64  invalid arguments or configuration
  65  the permutation file is not a permutation of the graph's vertices

Paths may be `-` for stdin/stdout. Files ending in .mtx are Matrix Market,
anything else is a 0-based edge list.";

#[derive(Parser)]
#[command(name = "mindeg", version, about = "Minimum-degree elimination orderings", after_help = AFTER_HELP)]
struct Cli {
    /// Worker threads for sketch updates and degree estimation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an elimination ordering.
    Order(OrderArgs),
    /// Check an ordering against the approximate greedy condition.
    Verify(VerifyArgs),
    /// Count fill edges produced by an ordering.
    Fill(FillArgs),
    /// Generate a test instance.
    Gen(GenArgs),
    /// Build and exhaustively check the covering set system for `n`.
    CoverCheck { n: usize },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    SketchExact,
    Capped,
    OutputSensitive,
    Approx,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Mtx,
    Edges,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Mtx => Format::MatrixMarket,
            FormatArg::Edges => Format::EdgeList,
        }
    }
}

#[derive(Args)]
struct GraphInput {
    /// Input graph.
    input: String,
    /// Input format; guessed from the file name when omitted.
    #[arg(long)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[arg(long, value_enum)]
    method: Method,
    /// Approximation factor (approx only).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Degree cap (capped only).
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output permutation file.
    #[arg(short, long, default_value = "-")]
    output: String,
    /// Add the reported degree of each pivot as a second column.
    #[arg(long)]
    log_degrees: bool,
    /// Print work counters as a JSON line on stderr.
    #[arg(long)]
    audit: bool,
    #[arg(long)]
    c_k: Option<f64>,
    #[arg(long)]
    c_q: Option<f64>,
    #[arg(long)]
    c_sigma: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    c_scan: Option<f64>,
    #[arg(long)]
    c_lim: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Permutation file.
    perm: String,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
}

#[derive(Args)]
struct FillArgs {
    #[command(flatten)]
    graph: GraphInput,
    perm: String,
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: GenFamily,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, global = true, default_value = "-")]
    output: String,
    #[arg(long, global = true)]
    format: Option<FormatArg>,
}

#[derive(Subcommand)]
enum GenFamily {
    /// k x k grid.
    Grid {
        k: usize,
    },
    /// G(n, p).
    Er {
        n: usize,
        p: f64,
    },
    Clique {
        n: usize,
    },
    /// Star whose center is the last vertex.
    Star {
        n: usize,
    },
    Path {
        n: usize,
    },
    /// Orthogonal-vectors reduction graph over random binary vectors.
    Ov {
        n: usize,
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// Sidecar file receiving one 0/1 string per vector.
        #[arg(long)]
        vectors: String,
    },
}

enum Failure {
    Verify,
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn open_in(path: &str) -> io::Result<Box<dyn BufRead>> {
    Ok(if path == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(BufReader::new(File::open(path)?))
    })
}

fn open_out(path: &str) -> io::Result<Box<dyn Write>> {
    Ok(if path == "-" {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(File::create(path)?))
    })
}

fn load_graph(g: &GraphInput) -> Result<Graph, Failure> {
    let format = g
        .format
        .map_or_else(|| Format::from_path(&g.input), Format::from);
    Ok(read_graph(open_in(&g.input)?, format)?)
}

fn load_perm(path: &str) -> Result<Vec<usize>, Failure> {
    Ok(read_permutation(open_in(path)?)?)
}

fn require<T>(v: Option<T>, msg: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(msg.to_string()))
}

fn run_order(a: &OrderArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let c_k = a.c_k.unwrap_or(DEFAULT_C_K);
    let res: OrderingResult = match a.method {
        Method::Brute => mindeg_ordering_bruteforce(&g),
        Method::SketchExact => sketch_exact_min_degree(&g, a.seed, c_k)?,
        Method::Capped => delta_capped_min_degree(
            &g,
            require(a.delta, "--method capped needs --delta")?,
            a.seed,
            c_k,
        )?,
        Method::OutputSensitive => output_sensitive_min_degree(&g, a.seed, c_k)?,
        Method::Approx => {
            let eps = require(a.epsilon, "--method approx needs --epsilon")?;
            let mut cfg = ApproxOrderConfig::new(eps, a.seed);
            cfg.c1 = a.c1.unwrap_or(cfg.c1);
            cfg.c2 = a.c2.unwrap_or(cfg.c2);
            cfg.c_scan = a.c_scan.unwrap_or(cfg.c_scan);
            cfg.c_q = a.c_q.unwrap_or(cfg.c_q);
            cfg.estimator.c_sigma = a.c_sigma.unwrap_or(cfg.estimator.c_sigma);
            cfg.estimator.c_lim = a.c_lim.unwrap_or(cfg.estimator.c_lim);
            approx_min_degree_sequence_with(&g, &cfg)?.0
        }
    };
    let mut out = open_out(&a.output)?;
    write_permutation(
        &mut out,
        &res.order,
        a.log_degrees.then_some(&res.degrees[..]),
    )?;
    out.flush()?;
    if a.audit {
        let line = serde_json::json!({
            "informs": res.audit.informs,
            "oracle_calls": res.audit.oracle_calls,
            "copies": res.audit.copies,
        });
        eprintln!("{line}");
    }
    Ok(())
}

fn run_verify(a: &VerifyArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let perm = load_perm(&a.perm)?;
    if a.epsilon.is_nan() || a.epsilon < 0.0 {
        return Err(Failure::Usage("--epsilon must be non-negative".into()));
    }
    let rep = verify_ordering(&g, &perm, a.epsilon)?;
    println!("max_ratio {}", rep.max_ratio);
    println!("violating_steps {}", rep.violating_steps);
    if rep.ok() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn run_fill(a: &FillArgs) -> CmdResult {
    let g = load_graph(&a.graph)?;
    let perm = load_perm(&a.perm)?;
    println!("{}", total_fill(&g, &perm)?);
    Ok(())
}

fn run_gen(a: &GenArgs) -> CmdResult {
    let family = match a.family {
        GenFamily::Grid { k } => Family::Grid(k),
        GenFamily::Er { n, p } => Family::ErdosRenyi { n, p },
        GenFamily::Clique { n } => Family::Clique(n),
        GenFamily::Star { n } => Family::Star(n),
        GenFamily::Path { n } => Family::Path(n),
        GenFamily::Ov {
            n,
            dim,
            density,
            ref vectors,
        } => {
            let vecs = random_ov_vectors(n, dim, density, a.seed)?;
            let inst = ov_reduction_graph(&vecs)?;
            let mut side = open_out(vectors)?;
            for v in &vecs {
                let bits: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
                writeln!(side, "{bits}")?;
            }
            side.flush()?;
            return write_instance(&inst.graph, a);
        }
    };
    write_instance(&generate(family, a.seed)?, a)
}

fn write_instance(g: &Graph, a: &GenArgs) -> CmdResult {
    let format = a
        .format
        .map_or_else(|| Format::from_path(&a.output), Format::from);
    let mut out = open_out(&a.output)?;
    write_graph(&mut out, g, format)?;
    out.flush()?;
    Ok(())
}

fn run_cover_check(n: usize) -> CmdResult {
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let chk = covering_set_system(n).check();
    println!("k {}", chk.k);
    println!("max_set_size {}", chk.max_set_size);
    println!(
        "{}",
        if chk.all_pairs_covered {
            "all pairs covered"
        } else {
            "some pairs uncovered"
        }
    );
    if chk.ok() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(64);
        }
    }
    let res = match &cli.cmd {
        Command::Order(a) => run_order(a),
        Command::Verify(a) => run_verify(a),
        Command::Fill(a) => run_fill(a),
        Command::Gen(a) => run_gen(a),
        Command::CoverCheck { n } => run_cover_check(*n),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidParameter(_) => 64,
                Error::NotPermutation(_) => 65,
                _ => 2,
            })
        }
    }
}
