//! Command-line front end for the disk clique solvers.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod bench;
pub mod gen;
pub mod instance;
pub mod solve;

pub use instance::InstanceFile;
pub use solve::{Mode, ResultRecord, SolveOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
    #[error("instance has {n} disks, exact solving supports at most {max}")]
    TooLarge { n: usize, max: usize },
    #[error("no benchmark input succeeded in {0}")]
    NoBenchInput(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Solver(#[from] diskclique::Error),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 2,
            CliError::ModeMismatch(_) => 3,
            CliError::TooLarge { .. } => 4,
            CliError::NoBenchInput(_) => 5,
            CliError::BadParams(_) | CliError::Solver(_) | CliError::Io(..) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "diskclique", version, about = "Approximate maximum cliques in disk graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random instance.
    Gen {
        kind: gen::GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long = "box", default_value_t = 10.0)]
        box_side: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.5)]
        rho: f64,
        /// Output file; standard output when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Solve one instance file and print a result record.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Exact maximum clique for instances of at most 64 disks.
    Exact { file: PathBuf },
    /// Time a solver over every instance file in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long, default_value_t = 3)]
        repeats: u64,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Mode::Unit)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0.2)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Leading disks forming the left side in cobip mode.
    #[arg(long)]
    pub split: Option<usize>,
    #[arg(long)]
    pub verify: bool,
    /// Worker threads; all available cores when absent.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub trials_per_cell: Option<u64>,
    #[arg(long)]
    pub m1: Option<u64>,
    #[arg(long)]
    pub m2: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub rounds: u64,
}

impl SolverArgs {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            mode: self.mode,
            epsilon: self.epsilon,
            delta: self.delta,
            seed: self.seed,
            split: self.split,
            verify: self.verify,
            trials_per_cell: self.trials_per_cell,
            m1: self.m1,
            m2: self.m2,
            rounds: self.rounds,
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(CliError::BadParams("--threads must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::BadParams(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn run(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let stdout_err = |e| CliError::Io("output".into(), e);
    match cli.command {
        Command::Gen { kind, n, t, box_side, seed, rho, out: path } => {
            let inst = gen::generate(&gen::GenParams { kind, n, t, box_side, seed, rho })?;
            match path {
                Some(p) => std::fs::write(&p, inst.emit()).map_err(|e| CliError::Io(p.display().to_string(), e))?,
                None => out.write_all(inst.emit().as_bytes()).map_err(stdout_err)?,
            }
        }
        Command::Solve { file, solver } => {
            let inst = InstanceFile::read(&file)?;
            let opts = solver.options();
            let rec = with_threads(solver.threads, || solve::solve(&inst, &opts))??;
            write!(out, "{rec}").map_err(stdout_err)?;
        }
        Command::Exact { file } => {
            let rec = solve::exact(&InstanceFile::read(&file)?)?;
            write!(out, "{rec}").map_err(stdout_err)?;
        }
        Command::Bench { dir, repeats, solver } => {
            let opts = solver.options();
            with_threads(solver.threads, || bench::bench(&dir, &opts, repeats, out, err))??;
        }
    }
    Ok(())
}
