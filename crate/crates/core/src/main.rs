use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tameplan::cli::{
    cmd_audit, cmd_classify, cmd_plan, cmd_random, cmd_verify, parse_cell_target, write_csv_file, CliError,
    CliResult, Overrides, QueryDocument, EXIT_OK, EXIT_VERIFY_FAILED,
};
use tameplan::verify::Fault;
use tameplan::Algorithm;

#[derive(Parser, Debug)]
#[command(name = "tameplan", version, about = "Tame sequential motion planners for point robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Planner to use; overrides the document's `algorithm`.
    #[arg(long, global = true, value_enum)]
    algorithm: Option<AlgorithmArg>,

    /// Samples per waypoint segment in exported trajectories.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    #[arg(long, global = true)]
    eps_proj: Option<f64>,

    #[arg(long, global = true)]
    eps_antipode: Option<f64>,

    /// Also write trajectory samples as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    General,
    Even,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::General => Algorithm::General,
            AlgorithmArg::Even => Algorithm::Even,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FaultArg {
    Collision,
    Waypoint,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Plan a query document and print the trajectory document.
    Plan {
        /// Query JSON file, or `-` for stdin.
        input: String,
    },
    /// Print the fine cell and domain index of a query.
    Classify { input: String },
    /// Plan and check waypoints, collisions and junctions.
    Verify {
        input: String,
        #[arg(long, default_value_t = 10_000)]
        resolution: usize,
        /// Verify a deliberately corrupted trajectory instead.
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Compare the domain indices produced with the expected count.
    Audit {
        #[arg(short, long)]
        d: usize,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        n: usize,
        /// Random queries classified in addition to one witness per domain.
        #[arg(long, default_value_t = 20)]
        random: usize,
    },
    /// Emit random query documents as JSON lines.
    Random {
        #[arg(short, long)]
        d: usize,
        #[arg(short, long)]
        k: usize,
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Restrict to one domain, as `ell=N`.
        #[arg(long)]
        cell: Option<String>,
    },
}

fn read_input(input: &str) -> CliResult<QueryDocument> {
    let mut text = String::new();
    if input == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(input)?;
    }
    QueryDocument::parse(&text)
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<i32> {
    let common = &cli.common;
    let overrides = Overrides {
        algorithm: common.algorithm.map(Algorithm::from),
        eps_proj: common.eps_proj,
        eps_antipode: common.eps_antipode,
    };
    let algorithm = overrides.algorithm.unwrap_or_default();
    match cli.command {
        Command::Plan { input } => {
            let doc = read_input(&input)?;
            let traj = cmd_plan(&doc, &overrides, common.samples)?;
            if let Some(path) = &common.csv {
                write_csv_file(&traj, path)?;
            }
            print_json(&traj)?;
        }
        Command::Classify { input } => {
            let doc = read_input(&input)?;
            print_json(&cmd_classify(&doc, &overrides)?)?;
        }
        Command::Verify {
            input,
            resolution,
            inject_fault,
        } => {
            let doc = read_input(&input)?;
            let fault = inject_fault.map(|f| match f {
                FaultArg::Collision => Fault::Collision,
                FaultArg::Waypoint => Fault::Waypoint,
            });
            let report = cmd_verify(&doc, &overrides, resolution, fault)?;
            print_json(&report)?;
            eprintln!("{}", if report.pass { "PASS" } else { "FAIL" });
            if !report.pass {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Audit { d, k, n, random } => {
            let report = cmd_audit(algorithm, &overrides, d, k, n, random, common.seed.unwrap_or(0))?;
            print_json(&report)?;
            eprintln!("expected {}, observed {}", report.expected, report.observed);
        }
        Command::Random { d, k, n, count, cell } => {
            let cell = cell.as_deref().map(parse_cell_target).transpose()?;
            let docs = cmd_random(algorithm, &overrides, d, k, n, count, common.seed.unwrap_or(0), cell)?;
            for doc in &docs {
                print_json(doc)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string(e).unwrap_or_else(|_| e.to_string()));
    ExitCode::from(e.exit_code() as u8)
}
