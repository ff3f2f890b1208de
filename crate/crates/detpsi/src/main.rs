//! Command-line front end.
//!
//! Exit codes: 0 when no check failed, 1 when some check failed, 2 on usage
//! or input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use detpsi::{
    generate, read_json, render_report, run, write_atomic, write_json_atomic, Report, RunConfig, RunError, ScenarioSource, Task,
};
use detpsi_core::ring::RingSpec;
use detpsi_core::scenario::{ScenarioFile, ScenarioParams, DEFAULT_MAX_RESAMPLE};

#[derive(Parser)]
#[command(name = "detpsi", version, about = "Randomized verification of determinant-map identities over F_q[x_1..x_d][G]")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kernel, cokernel, bidual and local checks for random two-term complexes.
    PsiSuite {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        primes: PrimeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fitting-ideal and syzygy identities for random modules.
    Appendix {
        #[command(flatten)]
        ring: RingArgs,
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Commutative diagram, snake sequence and local checks for scenarios.
    MainSeq {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        primes: PrimeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The rank-one sequence for scenarios with l = 1.
    L1Seq {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Alternating length sums at height-two primes.
    Chern {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Generate one scenario and write it as JSON.
    GenScenario {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_RESAMPLE)]
        max_resample: usize,
        /// Output file (stdout when absent).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Print a report as one line per check.
    Show {
        report: PathBuf,
        /// Print the timing-free verdict section as JSON instead.
        #[arg(long)]
        verdicts: bool,
    },
    /// Run the configuration embedded in a report again.
    Rerun {
        report: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, env = "DETPSI_JOBS")]
        jobs: Option<usize>,
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Args)]
struct RingArgs {
    /// Field size (a prime or a prime power).
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Number of polynomial variables.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Orders of the cyclic factors of G, comma separated.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u32>,
}

impl RingArgs {
    fn spec(&self) -> RingSpec {
        RingSpec::new(self.q, self.d, &self.group)
    }
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 25)]
    count: usize,
}

#[derive(Args)]
struct PrimeArgs {
    /// A monomial prime given by its variable names, e.g. `x,y`. Repeatable.
    #[arg(long = "prime")]
    primes: Vec<String>,
}

impl PrimeArgs {
    fn get(&self) -> Option<Vec<String>> {
        (!self.primes.is_empty()).then(|| self.primes.clone())
    }
}

#[derive(Args)]
struct ParamArgs {
    /// Field size.
    #[arg(long, default_value_t = 3)]
    q: u32,
    /// Rank of the CM-types; the ring has d + 1 polynomial variables.
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Orders of the cyclic factors of G, comma separated.
    #[arg(long, value_delimiter = ',')]
    group: Vec<u32>,
    /// Number of CM-types.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Local degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    degs: Vec<usize>,
}

impl ParamArgs {
    fn params(&self, max_resample: usize) -> ScenarioParams {
        let mut p = ScenarioParams::new(self.q, self.d, &self.group, self.n, &self.degs);
        p.max_resample = max_resample;
        p
    }
}

#[derive(Args)]
struct SourceArgs {
    /// Read the scenario from this file instead of generating scenarios.
    #[arg(long, conflicts_with_all = ["seed", "count"])]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// Seed of the first scenario; scenario i uses seed + i.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

impl SourceArgs {
    fn source(&self, max_resample: usize) -> Result<ScenarioSource, RunError> {
        Ok(match &self.scenario {
            Some(path) => ScenarioSource::File { scenario: Box::new(read_json::<ScenarioFile>(path)?) },
            None => ScenarioSource::Generated { params: self.params.params(max_resample), seed: self.seed, count: self.count },
        })
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Resampling budget for random constructions.
    #[arg(long, default_value_t = DEFAULT_MAX_RESAMPLE)]
    max_resample: usize,
    /// Write the JSON report here (stdout when absent).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "DETPSI_JOBS")]
    jobs: Option<usize>,
    /// Do not print the per-check lines on stderr.
    #[arg(long)]
    quiet: bool,
}

fn emit_json(out: Option<&Path>, text: &str) -> Result<(), RunError> {
    match out {
        Some(path) => write_atomic(path, format!("{text}\n").as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn execute(config: RunConfig, out: Option<&Path>, jobs: Option<usize>, quiet: bool) -> Result<i32, RunError> {
    let report = run(&config, jobs)?;
    if !quiet {
        eprint!("{}", render_report(&report));
    }
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    emit_json(out, &json)?;
    Ok(report.exit_code())
}

fn dispatch(cmd: Cmd) -> Result<i32, RunError> {
    let task_run =
        |task: Task, c: &CommonArgs| execute(RunConfig { task, max_resample: c.max_resample }, c.out.as_deref(), c.jobs, c.quiet);
    match cmd {
        Cmd::PsiSuite { ring, batch, primes, common } => {
            task_run(Task::PsiSuite { ring: ring.spec(), seed: batch.seed, count: batch.count, primes: primes.get() }, &common)
        }
        Cmd::Appendix { ring, batch, common } => {
            task_run(Task::Appendix { ring: ring.spec(), seed: batch.seed, count: batch.count }, &common)
        }
        Cmd::MainSeq { source, primes, common } => {
            task_run(Task::MainSeq { source: source.source(common.max_resample)?, primes: primes.get() }, &common)
        }
        Cmd::L1Seq { source, common } => task_run(Task::L1Seq { source: source.source(common.max_resample)? }, &common),
        Cmd::Chern { source, common } => task_run(Task::Chern { source: source.source(common.max_resample)? }, &common),
        Cmd::GenScenario { params, seed, max_resample, out } => match generate(&params.params(max_resample), seed) {
            Ok(s) => {
                let file = s.to_file();
                match out {
                    Some(path) => write_json_atomic(&path, &file)?,
                    None => println!("{}", serde_json::to_string_pretty(&file).expect("scenario serializes")),
                }
                Ok(0)
            }
            Err(check) => {
                eprintln!("{}", check.witness.unwrap_or_default());
                Ok(1)
            }
        },
        Cmd::Show { report, verdicts } => {
            let report: Report = read_json(&report)?;
            if verdicts {
                println!("{}", report.verdict_json());
            } else {
                print!("{}", render_report(&report));
            }
            Ok(report.exit_code())
        }
        Cmd::Rerun { report, out, jobs, quiet } => {
            let report: Report = read_json(&report)?;
            execute(report.config, out.as_deref(), jobs, quiet)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
