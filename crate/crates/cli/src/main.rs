use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use strongfw::experiments::Scenario;
use strongfw::NormChoice;
use strongfw_cli::{
    cmd_bench, cmd_generate, cmd_solve, cmd_verify, CliError, Family, GenerateFrom, Outcome, Suite,
    VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "strongfw",
    version,
    about = "Frank-Wolfe over strongly convex sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem in a JSON config and write its trace as CSV.
    Solve {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a sampled property suite: sets, lmo, bounds or gradients.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, value_parser = parse_family, default_value = "lp")]
        family: Family,
        #[arg(long, default_value_t = 1.5)]
        p: f64,
        #[arg(long, default_value_t = 1.5)]
        s: f64,
        #[arg(long = "r", default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        /// Defaults to 10000 for sets, 100 for lmo, 20 for gradients.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Constant to test instead of the family's own value.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_parser = parse_norm, default_value = "own")]
        norm: NormChoice,
    },
    /// Run packaged scenarios, writing NAME.csv and NAME.report.txt.
    Bench {
        /// A scenario name, or `all`.
        #[arg(value_parser = parse_scenarios)]
        scenario: Selection,
        #[arg(long, default_value = "bench-out")]
        out_dir: PathBuf,
    },
    /// Write a self-contained JSON config.
    Generate {
        #[arg(long, value_parser = parse_scenario, conflicts_with = "from", required_unless_present = "from")]
        scenario: Option<Scenario>,
        /// Expand the seeded payloads of this config.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s)
        .ok_or_else(|| format!("unknown suite {s:?}; expected sets, lmo, bounds or gradients"))
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s)
        .ok_or_else(|| format!("unknown family {s:?}; expected lp, schatten, group or box"))
}

fn parse_norm(s: &str) -> Result<NormChoice, String> {
    match s {
        "own" => Ok(NormChoice::Own),
        "euclidean" => Ok(NormChoice::Euclidean),
        _ => Err(format!("unknown norm {s:?}; expected own or euclidean")),
    }
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    Scenario::parse(s).ok_or_else(|| {
        let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
        format!(
            "unknown scenario {s:?}; expected one of {}",
            names.join(", ")
        )
    })
}

#[derive(Clone)]
struct Selection(Vec<Scenario>);

fn parse_scenarios(s: &str) -> Result<Selection, String> {
    if s == "all" {
        Ok(Selection(Scenario::ALL.to_vec()))
    } else {
        parse_scenario(s).map(|sc| Selection(vec![sc]))
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Solve { config, out: path } => cmd_solve(&config, &path, out),
        Command::Verify {
            suite,
            family,
            p,
            s,
            radius,
            dim,
            rows,
            cols,
            samples,
            seed,
            alpha,
            norm,
        } => {
            let samples = samples.unwrap_or(match suite {
                Suite::Sets => 10_000,
                Suite::Lmo => 100,
                Suite::Gradients | Suite::Bounds => 20,
            });
            let opts = VerifyOptions {
                family,
                p,
                s,
                radius,
                dim,
                rows,
                cols,
                samples,
                seed,
                alpha,
                norm,
            };
            cmd_verify(suite, &opts, out)
        }
        Command::Bench { scenario, out_dir } => cmd_bench(&scenario.0, &out_dir, out),
        Command::Generate {
            scenario,
            from,
            out: path,
        } => {
            let source = match (scenario, from) {
                (Some(s), _) => GenerateFrom::Scenario(s),
                (None, Some(p)) => GenerateFrom::Config(p),
                (None, None) => unreachable!("clap requires one of --scenario and --from"),
            };
            match path {
                Some(p) => {
                    let mut file = std::fs::File::create(&p)?;
                    cmd_generate(&source, &mut file)
                }
                None => cmd_generate(&source, out),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
