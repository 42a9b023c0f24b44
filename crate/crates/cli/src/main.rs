use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;

use lnn_cnot::bounds::{matrix_lower_bounds, permutation_swap_lower, reversal_report};
use lnn_cnot::constructions::{
    add_circuit, gather_circuit, permutation_circuit, reverse_circuit, rotate_circuit, swap_circuit,
    GATHER_DEPTH_SLOPE,
};
use lnn_cnot::glsynth::synthesize;
use lnn_cnot::render::render;
use lnn_cnot::search::{distance, max_depth};
use lnn_cnot::{BitMatrix, Circuit, Error};

/// Nearest-neighbour CNOT circuit synthesis, verification and search.
#[derive(Parser)]
#[command(name = "lnn-cnot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a circuit and write it to stdout.
    Synth(SynthArgs),
    /// Check that a circuit computes a target matrix.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        target: PathBuf,
    },
    /// Draw a circuit as ASCII art.
    Render {
        #[arg(long)]
        circuit: PathBuf,
    },
    /// Lower bounds on depth and size for a target matrix.
    Bounds {
        #[arg(long)]
        target: PathBuf,
        /// key=value output
        #[arg(long)]
        kv: bool,
    },
    /// Exhaustive minimum-depth search (n ≤ 8; diameter n ≤ 6).
    Search(SearchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Add,
    Swap,
    Rotate,
    Reverse,
    Permute,
    Matrix,
    Gather,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long)]
    n: Option<usize>,
    /// Images σ(1) … σ(n), space separated.
    #[arg(long)]
    perm: Option<String>,
    /// Matrix file; without it `--op matrix` draws a random matrix.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Increasing wire positions, space or comma separated.
    #[arg(long)]
    positions: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, conflicts_with_all = ["reversal", "max"])]
    target: Option<PathBuf>,
    /// Distance to the wire reversal.
    #[arg(long, conflicts_with = "max")]
    reversal: bool,
    /// Maximum depth over all invertible matrices.
    #[arg(long)]
    max: bool,
    #[arg(long, default_value_t = 64)]
    depth_limit: usize,
    /// Permit the n = 6 diameter search.
    #[arg(long)]
    allow_huge: bool,
    /// Write an optimal circuit here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

/// A failure with a specific exit status.
#[derive(Debug)]
struct Exit(u8);

impl std::fmt::Display for Exit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "exit {}", self.0)
    }
}

impl std::error::Error for Exit {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(Exit(code)) = e.downcast_ref::<Exit>() {
                return ExitCode::from(*code);
            }
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::ResourceRefused { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Synth(args) => synth(args),
        Command::Verify { circuit, target } => verify(&circuit, &target),
        Command::Render { circuit } => {
            print!("{}", render(&read_circuit(&circuit)?));
            Ok(())
        }
        Command::Bounds { target, kv } => bounds(&target, kv),
        Command::Search(args) => search(args),
    }
}

fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<BitMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn parse_list(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().with_context(|| format!("bad number {t:?}")))
        .collect()
}

fn need_n(n: Option<usize>, op: Op) -> anyhow::Result<usize> {
    n.with_context(|| format!("--op {op:?} needs --n").to_lowercase())
}

fn synth(args: SynthArgs) -> anyhow::Result<()> {
    let op = args.op;
    let unused = |flag: bool, name: &str| -> anyhow::Result<()> {
        if flag {
            bail!("{name} does not apply to this op");
        }
        Ok(())
    };
    if !matches!(op, Op::Permute) {
        unused(args.perm.is_some(), "--perm")?;
    }
    if !matches!(op, Op::Matrix) {
        unused(args.matrix.is_some(), "--matrix")?;
    }
    if !matches!(op, Op::Gather) {
        unused(args.positions.is_some(), "--positions")?;
    }

    let (circuit, upper) = match op {
        Op::Add => {
            let n = need_n(args.n, op)?;
            (add_circuit(n)?, format!("depth <= {}", n + 3 + n % 2))
        }
        Op::Swap => {
            let n = need_n(args.n, op)?;
            (swap_circuit(n)?, format!("depth <= {}", n + 7 + n % 2))
        }
        Op::Rotate => {
            let n = need_n(args.n, op)?;
            (rotate_circuit(n)?, format!("depth <= {}", n + 5))
        }
        Op::Reverse => {
            let n = need_n(args.n, op)?;
            let d = if n == 2 { 3 } else { 2 * n + 2 };
            (reverse_circuit(n)?, format!("depth = {d}"))
        }
        Op::Permute => {
            let sigma = parse_list(args.perm.as_deref().context("--op permute needs --perm")?)?;
            if let Some(n) = args.n {
                if n != sigma.len() {
                    bail!("--n {n} does not match a permutation of length {}", sigma.len());
                }
            }
            let swaps = permutation_swap_lower(&sigma)?.size_lb;
            let n = sigma.len();
            (
                permutation_circuit(&sigma)?,
                format!("depth <= {}, size = {} (3 per inversion)", 3 * n, 3 * swaps),
            )
        }
        Op::Matrix => {
            let m = match &args.matrix {
                Some(path) => {
                    let m = read_matrix(path)?;
                    if let Some(n) = args.n {
                        if n != m.dim() {
                            bail!("--n {n} does not match a {}x{} matrix", m.dim(), m.dim());
                        }
                    }
                    m
                }
                None => {
                    let n = need_n(args.n, op)?;
                    if !(2..=lnn_cnot::f2::MAX_DIM).contains(&n) {
                        return Err(Error::UnsupportedDimension(n).into());
                    }
                    BitMatrix::random_invertible(n, &mut StdRng::seed_from_u64(args.seed))
                }
            };
            let n = m.dim();
            (synthesize(&m)?, format!("depth <= {}", 5 * n))
        }
        Op::Gather => {
            let n = need_n(args.n, op)?;
            let positions =
                parse_list(args.positions.as_deref().context("--op gather needs --positions")?)?;
            let g = gather_circuit(n, &positions)?;
            eprintln!("window_start {}", g.window_start);
            let bound = n.div_ceil(2) + GATHER_DEPTH_SLOPE * positions.len();
            (g.circuit, format!("depth <= {bound}"))
        }
    };

    print!("{circuit}");
    let metrics = circuit.metrics();
    eprintln!(
        "depth {} size {} density {:.3}",
        metrics.depth, metrics.size, metrics.density
    );
    eprintln!("construction {upper}");
    let lower = matrix_lower_bounds(&circuit.matrix())?;
    eprintln!("lower depth_lb {} size_lb {}", lower.depth_lb, lower.size_lb);
    if op == Op::Reverse && circuit.n() >= 3 {
        let r = reversal_report(circuit.n())?;
        eprintln!("reversal depth_lb {} size_lb {}", r.depth_lb, r.size_lb);
    }
    Ok(())
}

fn verify(circuit: &Path, target: &Path) -> anyhow::Result<()> {
    let c = read_circuit(circuit)?;
    let m = read_matrix(target)?;
    if c.n() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: c.n(),
        }
        .into());
    }
    let pass = c.matrix() == m;
    println!("{}", if pass { "PASS" } else { "FAIL" });
    println!("depth {}", c.depth());
    println!("size {}", c.size());
    if m.is_invertible() {
        let lower = matrix_lower_bounds(&m)?;
        println!("depth_lb {}", lower.depth_lb);
        println!("size_lb {}", lower.size_lb);
        println!("cut gates lower");
        for (cross, (k, lb)) in c.crossings().iter().zip(&lower.per_cut) {
            debug_assert_eq!(cross.k, *k);
            println!("{k} {} {lb}", cross.total());
        }
    } else {
        println!("target is singular");
    }
    if pass {
        Ok(())
    } else {
        Err(Exit(1).into())
    }
}

/// `σ` with column `σ(i)` equal to `e_i`, if `m` is a permutation matrix.
fn as_permutation(m: &BitMatrix) -> Option<Vec<usize>> {
    let n = m.dim();
    let mut sigma = vec![0; n];
    for (j, col) in m.columns().enumerate() {
        if col.weight() != 1 {
            return None;
        }
        sigma[col.leading()? - 1] = j + 1;
    }
    sigma.iter().all(|&s| s > 0).then_some(sigma)
}

fn bounds(target: &Path, kv: bool) -> anyhow::Result<()> {
    let m = read_matrix(target)?;
    let mut reports = vec![matrix_lower_bounds(&m)?];
    if m == BitMatrix::anti_identity(m.dim()) && m.dim() >= 3 {
        reports.push(reversal_report(m.dim())?);
    }
    if let Some(sigma) = as_permutation(&m) {
        reports.push(permutation_swap_lower(&sigma)?);
    }
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            println!();
        }
        if kv {
            print!("{}", r.to_key_values());
        } else {
            print!("{r}");
        }
    }
    Ok(())
}

fn search(args: SearchArgs) -> anyhow::Result<()> {
    if args.max {
        if args.witness.is_some() {
            bail!("--witness needs --target or --reversal");
        }
        let n = args.n.context("--max needs --n")?;
        let r = max_depth(n, args.allow_huge)?;
        println!("max_depth {}", r.depth);
        println!("visited {}", r.visited_count);
        let levels: Vec<String> = r.level_sizes.iter().map(u64::to_string).collect();
        println!("levels {}", levels.join(" "));
        if let Some(m) = r.extremal {
            println!("extremal");
            print!("{m}");
        }
        return Ok(());
    }
    let target = match (&args.target, args.reversal) {
        (Some(path), false) => {
            let m = read_matrix(path)?;
            if let Some(n) = args.n {
                if n != m.dim() {
                    bail!("--n {n} does not match a {}x{} target", m.dim(), m.dim());
                }
            }
            m
        }
        (None, true) => BitMatrix::anti_identity(args.n.context("--reversal needs --n")?),
        _ => bail!("one of --target, --reversal or --max is required"),
    };
    match distance(&target, args.depth_limit, args.witness.is_some()) {
        Ok(r) => {
            println!("distance {}", r.depth);
            println!("visited {}", r.visited_count);
            if let (Some(path), Some(w)) = (&args.witness, &r.witness) {
                fs::write(path, w.to_string()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(())
        }
        Err(Error::DepthLimitExceeded { limit }) => {
            println!("distance > {limit}");
            Err(Exit(3).into())
        }
        Err(e) => Err(e.into()),
    }
}
