mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperslice::rational::parse_rational;
use hyperslice::tight::SearchGoal;
use hyperslice::{Error, Rational};

use commands::{SliceArgs, SweepArgs};
use report::{Format, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
    #[error("property violated: {0}")]
    Violated(String),
    #[error("{1}")]
    Report(Report, String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Violated(_) | CliError::Report(..) => 1,
            CliError::Core(e) => match e {
                Error::Consistency(_) | Error::ForeignSlice(_) => 1,
                Error::Capacity { .. } => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "hyperslice", version, about = "Exact experiments on k-uniform hypergraphs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add a generation timestamp to JSON reports.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Components, matchings, LYM margins and a reduced graph for one file.
    Analyze {
        file: PathBuf,
        /// Cluster count for the reduced graph (vertex v goes to v mod T).
        #[arg(long)]
        clusters: Option<usize>,
    },
    /// Look for a tight cycle or path.
    Search {
        file: PathBuf,
        #[command(flatten)]
        goal: GoalArgs,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Density sweeps over random graphs.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Slice sampling statistics.
    Slice {
        #[command(subcommand)]
        kind: SliceKind,
    },
    /// Compression counts, or the ratio-matching pipeline trace with --r.
    Compress {
        file: PathBuf,
        #[arg(long)]
        r: Option<usize>,
    },
    /// Write a graph in .khg form: a construction such as star:6:3:1, or random:n:k:p:seed.
    Gen { spec: String },
    /// Run the invariant checks on bundled fixtures and on .khg files in a directory.
    Verify {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GoalArgs {
    /// A tight cycle on exactly this many vertices.
    #[arg(long)]
    cycle: Option<usize>,
    #[arg(long)]
    longest_cycle: bool,
    #[arg(long)]
    longest_path: bool,
}

#[derive(Args)]
struct GridArgs {
    /// Edge probabilities as lo:hi:step or a single value.
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Search budget per graph.
    #[arg(long, default_value_t = 5_000_000)]
    budget: u64,
}

#[derive(Subcommand)]
enum SweepKind {
    /// Random k-graphs on n vertices.
    Eg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Random k-partite k-graphs with parts of size t.
    Partite {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Subcommand)]
enum SliceKind {
    Stats {
        /// Number of clusters.
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        /// Cluster size.
        #[arg(long)]
        m: usize,
        /// Cells per level 2..k-1, comma separated.
        #[arg(long, value_delimiter = ',')]
        cells: Vec<u32>,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph for the quality report; a random one is drawn otherwise.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Edge probability of the random graph.
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value = "1/2")]
        d: String,
        #[arg(long, default_value = "1/4")]
        eps: String,
    },
}

fn rational(s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Input(format!("{s:?}: {e}")))
}

fn sweep_args(g: &GridArgs) -> Result<SweepArgs, CliError> {
    Ok(SweepArgs {
        grid: commands::parse_grid(&g.p)?,
        trials: g.trials,
        seed: g.seed,
        budget: g.budget,
    })
}

enum Output {
    Report(commands::Outcome),
    Text(String),
}

fn run(command: Command) -> Result<Output, CliError> {
    let out = match command {
        Command::Analyze { file, clusters } => commands::analyze(&commands::read_graph(&file)?, clusters)?,
        Command::Search { file, goal, budget } => {
            let goal = match (goal.cycle, goal.longest_cycle) {
                (Some(l), _) => SearchGoal::Cycle(l),
                (None, true) => SearchGoal::LongestCycle,
                (None, false) => SearchGoal::LongestPath,
            };
            commands::search(&commands::read_graph(&file)?, goal, budget)?
        }
        Command::Sweep { kind: SweepKind::Eg { n, k, grid } } => commands::sweep_eg(n, k, &sweep_args(&grid)?)?,
        Command::Sweep {
            kind: SweepKind::Partite { t, k, grid },
        } => commands::sweep_partite(t, k, &sweep_args(&grid)?)?,
        Command::Slice {
            kind:
                SliceKind::Stats {
                    t,
                    k,
                    m,
                    cells,
                    samples,
                    seed,
                    graph,
                    p,
                    d,
                    eps,
                },
        } => {
            let graph = graph.map(|f| commands::read_graph(&f)).transpose()?;
            let p = num_traits::ToPrimitive::to_f64(&rational(&p)?).unwrap_or(0.0);
            commands::slice_stats(&SliceArgs {
                t,
                k,
                m,
                cells,
                samples,
                seed,
                graph,
                p,
                d: rational(&d)?,
                eps: rational(&eps)?,
            })?
        }
        Command::Compress { file, r } => commands::compress(&commands::read_graph(&file)?, r)?,
        Command::Gen { spec } => return Ok(Output::Text(commands::gen_text(&spec)?)),
        Command::Verify { fixtures } => commands::verify(fixtures.as_deref())?,
    };
    Ok(Output::Report(out))
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn render(report: &Report, cli: &Cli) -> Result<Vec<u8>, CliError> {
    let ts = cli.timestamps.then(|| {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs())
    });
    report
        .render(cli.format, ts)
        .map_err(|e| CliError::Io(e.to_string()))
}

fn thread_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("HYPERSLICE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("HYPERSLICE_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let command = std::mem::replace(&mut cli.command, Command::Verify { fixtures: None });
    let result = thread_pool().and_then(|()| run(command)).and_then(|out| match out {
        Output::Text(text) => emit(text.as_bytes(), cli.out.as_ref()).map(|()| false),
        Output::Report(o) => emit(&render(&o.report, &cli)?, cli.out.as_ref()).map(|()| o.budget_exhausted),
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("search budget exhausted; results are partial");
            ExitCode::from(3)
        }
        Err(CliError::Report(report, msg)) => {
            if let Err(e) = render(&report, &cli).and_then(|b| emit(&b, cli.out.as_ref())) {
                eprintln!("error: {e}");
            }
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
