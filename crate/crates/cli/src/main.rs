use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecke_core::geometry::SetLabel;
use hecke_core::membership::{SearchConfig, DEFAULT_DEPTH, DEFAULT_MAX_UNKNOWNS};
use hecke_core::report::{overall_status, sort_reports, ReportStatus, VerificationReport};

mod output;
mod tasks;

use output::Format;
use tasks::{Claim, Method, Outcome, TaskError};

const EXIT_FAILED: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_RESOURCE: u8 = 70;

#[derive(Parser)]
#[command(name = "hecke")]
#[command(about = "Exact verification of Hecke group-ring identities and indefinite theta identities")]
#[command(version)]
struct Cli {
    /// Support-window depth for witness searches
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH)]
    depth: usize,

    /// Abort with exit code 70 when a linear system would exceed this many unknowns
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_UNKNOWNS)]
    max_unknowns: usize,

    /// Worker threads (defaults to the number of CPUs)
    #[arg(long, global = true, env = "HECKE_THREADS")]
    threads: Option<usize>,

    /// Write the final output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Directory for persisted witnesses, laid out as <claim>/<n>.json
    #[arg(long, global = true, default_value = "witness")]
    witness_dir: PathBuf,

    /// Include wall-clock times in reports (makes output nondeterministic)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify a T̃_n satisfying the Hecke relation
    Build {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Merel)]
        method: Method,
    },
    /// Verify one claim at a single n or for every n up to nmax
    Verify {
        #[arg(value_enum)]
        claim: Claim,
        #[command(flatten)]
        range: Range,
        /// How T̃_n is obtained for eq1 and thm11
        #[arg(long, value_enum, default_value_t = Method::Merel)]
        method: Method,
    },
    /// Theta series identities
    Theta {
        #[command(subcommand)]
        command: ThetaCommand,
    },
    /// Print T_n^∞ or one of the matrix families
    Dump {
        #[command(subcommand)]
        command: DumpCommand,
    },
    /// Re-verify a persisted witness by ring arithmetic alone
    CheckWitness {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Range {
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    nmax: Option<u64>,
}

impl Range {
    fn values(&self) -> Vec<u64> {
        match (self.n, self.nmax) {
            (Some(n), _) => vec![n],
            (_, Some(m)) => (1..=m).collect(),
            _ => unreachable!("clap enforces one of --n, --nmax"),
        }
    }
}

#[derive(Subcommand)]
enum ThetaCommand {
    /// Compare both sides coefficient by coefficient
    Check {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        identity: u8,
        #[arg(long)]
        nmax: usize,
    },
    /// Export coefficients
    Series {
        #[arg(long, value_enum, default_value_t = Side::Both)]
        side: Side,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        identity: u8,
        #[arg(long)]
        nmax: usize,
    },
    /// Count solutions for every odd prime up to pmax
    Primes {
        #[arg(long)]
        pmax: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Side {
    Lhs,
    Rhs,
    Both,
}

#[derive(Subcommand)]
enum DumpCommand {
    Tninf {
        #[arg(long)]
        n: u64,
    },
    Set {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value = "Xn")]
        label: SetLabel,
    },
}

struct Run {
    cfg: SearchConfig,
    format: Format,
    out: Option<PathBuf>,
    witness_dir: PathBuf,
    timing: bool,
}

impl Run {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }

    fn finish(&self, mut reports: Vec<VerificationReport>, aborted: Option<String>) -> anyhow::Result<u8> {
        sort_reports(&mut reports);
        if !self.timing {
            for r in &mut reports {
                r.elapsed_ms = None;
            }
        }
        self.emit(&output::render_reports(&reports, self.format))?;
        if let Some(why) = aborted {
            eprintln!("hecke: resource limit: {why}");
            return Ok(EXIT_RESOURCE);
        }
        Ok(match overall_status(&reports) {
            ReportStatus::Verified => 0,
            ReportStatus::Failed => EXIT_FAILED,
            ReportStatus::Undetermined => EXIT_UNDETERMINED,
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("hecke: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let run = Run {
        cfg: SearchConfig {
            depth: cli.depth,
            max_unknowns: cli.max_unknowns,
        },
        format: cli.format,
        out: cli.out,
        witness_dir: cli.witness_dir,
        timing: cli.timing,
    };
    match dispatch(&run, cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hecke: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn dispatch(run: &Run, command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Verify { claim, range, method } => {
            let ns = range.values();
            if ns.contains(&0) {
                anyhow::bail!("n must be at least 1");
            }
            let outcome = tasks::verify_all(claim, &ns, method, &run.cfg, &run.witness_dir);
            finish_outcome(run, outcome)
        }
        Command::Build { n, method } => {
            let (report, pair) = match tasks::build(n, method, &run.cfg) {
                Ok(v) => v,
                Err(TaskError::Resource(why)) => return run.finish(vec![], Some(why)),
                Err(TaskError::Usage(why)) => anyhow::bail!(why),
            };
            let text = output::render_pair(&pair, &report, run.format);
            run.emit(&text)?;
            Ok(if report.status == ReportStatus::Verified { 0 } else { EXIT_UNDETERMINED })
        }
        Command::Theta { command } => match command {
            ThetaCommand::Check { identity, nmax } => {
                let report = tasks::theta_check(identity, nmax)?;
                run.finish(vec![report], None)
            }
            ThetaCommand::Series { side, identity, nmax } => {
                let (lhs, rhs) = hecke_core::theta::identity_series(identity, nmax)?;
                run.emit(&output::render_series(&lhs, &rhs, side, run.format))?;
                Ok(0)
            }
            ThetaCommand::Primes { pmax } => run.finish(tasks::primes(pmax), None),
        },
        Command::Dump { command } => {
            let text = match command {
                DumpCommand::Tninf { n } => output::render_elt(&hecke_core::hecke::tn_inf(n)?, run.format),
                DumpCommand::Set { n, label } => {
                    output::render_set(&hecke_core::geometry::build_set(n, label)?, run.format)
                }
            };
            run.emit(&text)?;
            Ok(0)
        }
        Command::CheckWitness { file } => run.finish(vec![tasks::check_witness(&file)], None),
    }
}

fn finish_outcome(run: &Run, outcome: Outcome) -> anyhow::Result<u8> {
    match outcome.usage_error {
        Some(why) => anyhow::bail!(why),
        None => run.finish(outcome.reports, outcome.aborted),
    }
}
