//! Library half of the `strongfw` command: config parsing, trace files,
//! and the `solve`, `verify`, `bench` and `generate` commands.
//!
//! Every command writes its human-readable output to a caller-supplied
//! writer and returns an [`Outcome`]; `main` maps that to the exit code.
//! Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
//! 3 numerical failure.

pub mod config;
pub mod trace;

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use strongfw::experiments::{Assessment, Scenario, ScenarioRun};
use strongfw::norms::strong_convexity_parameter;
use strongfw::objective::{finite_difference_error, smoothness_violations};
use strongfw::sampling::{gaussian_matrix, gaussian_point, gaussian_vec, point_in_ball, seeded};
use strongfw::{
    solve, verify_set_strong_convexity, BallSpec, DenseMatrix, DenseVector, NormChoice,
    ObjectiveSpec, Point, SolveResult,
};

pub use config::ProblemConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Solver(#[from] strongfw::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Solver(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn write_csv(path: &Path, result: &SolveResult) -> Result<(), CliError> {
    let file = BufWriter::new(File::create(path)?);
    trace::write_trace(file, &result.trace)
}

/// `solve CONFIG --out TRACE.csv`.
pub fn cmd_solve(
    config_path: &Path,
    out_path: &Path,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", config_path.display())))?;
    let cfg = ProblemConfig::from_json(&text)?;
    let problem = cfg.build()?;
    let result = solve(
        &problem.objective,
        &problem.ball,
        problem.start.as_ref(),
        &problem.solver,
    )?;
    write_csv(out_path, &result)?;
    writeln!(out, "final_value {:.16e}", result.final_value)?;
    writeln!(out, "final_gap {:.16e}", result.final_gap)?;
    writeln!(out, "iterations {}", result.iterations_used)?;
    writeln!(out, "termination {}", result.terminated_by.as_str())?;
    writeln!(out, "seed {}", problem.solver.seed)?;
    let Some(scenario) = cfg.experiment.as_deref().and_then(Scenario::parse) else {
        return Ok(Outcome { passed: true });
    };
    let constants = scenario.problem()?.constants;
    let assessment = scenario.assess(&constants, &result.trace)?;
    write_assessment(out, scenario, &assessment)?;
    Ok(Outcome {
        passed: assessment.passed(),
    })
}

fn write_assessment(
    out: &mut dyn Write,
    scenario: Scenario,
    a: &Assessment,
) -> Result<(), CliError> {
    let r = &a.report;
    writeln!(out, "scenario {}", scenario.name())?;
    writeln!(out, "bound {}", r.bound.as_str())?;
    writeln!(out, "violations {}", r.violations)?;
    writeln!(out, "max_violation_ratio {:.16e}", r.max_violation_ratio)?;
    writeln!(out, "exponent {:.16e}", r.exponent)?;
    writeln!(out, "fit_window {} {}", r.fit_window.0, r.fit_window.1)?;
    for c in &a.checks {
        writeln!(
            out,
            "check {} {} {}",
            c.name,
            if c.passed { "pass" } else { "fail" },
            c.detail
        )?;
    }
    Ok(())
}

/// Plain-text rate report of a scenario run.
pub fn report_text(run: &ScenarioRun) -> String {
    let mut buf = Vec::new();
    let s = run.problem.scenario;
    write_assessment(&mut buf, s, &run.assessment).expect("writing to memory");
    let mut text = String::from_utf8(buf).expect("utf-8 report");
    text.push_str(&format!(
        "seed {}\niterations {}\ntermination {}\nfinal_value {:.16e}\nfinal_gap {:.16e}\nresult {}\n",
        strongfw::experiments::SCENARIO_SEED,
        run.result.iterations_used,
        run.result.terminated_by.as_str(),
        run.result.final_value,
        run.result.final_gap,
        if run.assessment.passed() { "pass" } else { "fail" },
    ));
    text
}

/// Run scenarios on separate threads, in input order.
pub fn run_scenarios(list: &[Scenario]) -> Vec<Result<ScenarioRun, strongfw::Error>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = list.iter().map(|s| scope.spawn(move || s.run())).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scenario thread panicked"))
            .collect()
    })
}

/// `bench SCENARIO --out-dir DIR`: writes `NAME.csv` and `NAME.report.txt`
/// per scenario.
pub fn cmd_bench(
    list: &[Scenario],
    out_dir: &Path,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    fs::create_dir_all(out_dir)?;
    let mut passed = true;
    for run in run_scenarios(list) {
        let run = run?;
        let name = run.problem.scenario.name();
        write_csv(&out_dir.join(format!("{name}.csv")), &run.result)?;
        let report = report_text(&run);
        fs::write(out_dir.join(format!("{name}.report.txt")), &report)?;
        write!(out, "{report}")?;
        writeln!(out)?;
        passed &= run.assessment.passed();
    }
    Ok(Outcome { passed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Lp,
    Schatten,
    Group,
    Box,
}

impl Family {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "lp" => Family::Lp,
            "schatten" => Family::Schatten,
            "group" => Family::Group,
            "box" => Family::Box,
            _ => return None,
        })
    }
}

/// Shared options of the `verify` suites.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub family: Family,
    pub p: f64,
    pub s: f64,
    pub radius: f64,
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub samples: usize,
    pub seed: u64,
    /// Strong-convexity constant to test; the family's own value when unset.
    pub alpha: Option<f64>,
    pub norm: NormChoice,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            family: Family::Lp,
            p: 1.5,
            s: 1.5,
            radius: 1.0,
            dim: 10,
            rows: 4,
            cols: 3,
            samples: 1000,
            seed: 42,
            alpha: None,
            norm: NormChoice::Own,
        }
    }
}

impl VerifyOptions {
    pub fn ball(&self) -> Result<BallSpec, CliError> {
        Ok(match self.family {
            Family::Lp => BallSpec::lp(self.p, self.radius, self.dim)?,
            Family::Schatten => BallSpec::schatten(self.p, self.radius, self.rows, self.cols)?,
            Family::Group => BallSpec::group(self.s, self.p, self.radius, self.rows, self.cols)?,
            Family::Box => {
                BallSpec::cube(vec![-self.radius; self.dim], vec![self.radius; self.dim])?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Sets,
    Lmo,
    Bounds,
    Gradients,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sets" => Suite::Sets,
            "lmo" => Suite::Lmo,
            "bounds" => Suite::Bounds,
            "gradients" => Suite::Gradients,
            _ => return None,
        })
    }
}

pub fn cmd_verify(
    suite: Suite,
    opts: &VerifyOptions,
    out: &mut dyn Write,
) -> Result<Outcome, CliError> {
    match suite {
        Suite::Sets => verify_sets(opts, out),
        Suite::Lmo => verify_lmo(opts, out),
        Suite::Bounds => {
            let mut passed = true;
            for run in run_scenarios(&Scenario::ALL) {
                let run = run?;
                let a = &run.assessment;
                for c in &a.checks {
                    writeln!(
                        out,
                        "{} {} {} {}",
                        run.problem.scenario.name(),
                        c.name,
                        if c.passed { "pass" } else { "fail" },
                        c.detail
                    )?;
                }
                passed &= a.passed();
            }
            Ok(Outcome { passed })
        }
        Suite::Gradients => verify_gradients(opts, out),
    }
}

fn verify_sets(opts: &VerifyOptions, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let ball = opts.ball()?;
    let alpha = match opts.alpha {
        Some(a) => a,
        None => strong_convexity_parameter(&ball, opts.norm)?.alpha,
    };
    let v = verify_set_strong_convexity(&ball, alpha, opts.samples, 1e-9, opts.seed, opts.norm)?;
    writeln!(
        out,
        "family {} alpha {alpha:.16e} samples {} seed {} violations {v}",
        ball.family_name(),
        opts.samples,
        opts.seed
    )?;
    Ok(Outcome { passed: v == 0 })
}

fn verify_lmo(opts: &VerifyOptions, out: &mut dyn Write) -> Result<Outcome, CliError> {
    const FEASIBLE: usize = 2000;
    let ball = opts.ball()?;
    let mut rng = seeded(opts.seed);
    let feasible: Vec<Point> = (0..FEASIBLE)
        .map(|_| point_in_ball(&ball, &mut rng))
        .collect::<Result<_, _>>()?;
    let (mut holder, mut boundary, mut dominated) = (0usize, 0usize, 0usize);
    for _ in 0..opts.samples {
        let c = gaussian_point(&mut rng, ball.shape());
        let x = ball.lmo(&c)?;
        let value = x.dot(&c);
        let support = ball.support(&c)?;
        if (value + support).abs() > 1e-8 * (1.0 + support) {
            holder += 1;
        }
        if let Some(r) = ball.radius() {
            if (ball.own_norm(&x)? - r).abs() > 1e-9 * r {
                boundary += 1;
            }
        }
        let tol = 1e-12 * (1.0 + support);
        dominated += feasible.iter().filter(|y| y.dot(&c) < value - tol).count();
    }
    writeln!(
        out,
        "family {} objectives {} seed {} holder {holder} boundary {boundary} dominated {dominated}",
        ball.family_name(),
        opts.samples,
        opts.seed
    )?;
    Ok(Outcome {
        passed: holder + boundary + dominated == 0,
    })
}

fn verify_gradients(opts: &VerifyOptions, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let ball = opts.ball()?;
    let n = ball.dimension();
    let mut rng = seeded(opts.seed);
    let mut worst_fd = 0.0f64;
    let mut smooth = 0usize;
    for k in 0..opts.samples {
        let b = gaussian_matrix(&mut rng, n, n);
        let q = b.gram();
        let center = DenseVector::new(gaussian_vec(&mut rng, n))?;
        let quad = ObjectiveSpec::quadratic(q, center, 0.0)?;
        let rows = 1 + k % n.max(1);
        let a: DenseMatrix = gaussian_matrix(&mut rng, rows, n);
        let rhs = DenseVector::new(gaussian_vec(&mut rng, rows))?;
        let ls = ObjectiveSpec::least_squares(a, rhs)?;
        for obj in [&quad, &ls] {
            let x = point_in_ball(&ball, &mut rng)?;
            worst_fd = worst_fd.max(finite_difference_error(obj, x.entries())?);
            smooth += smoothness_violations(
                obj,
                &ball,
                obj.beta,
                10,
                opts.seed + k as u64,
                NormChoice::Euclidean,
            )?;
        }
    }
    writeln!(
        out,
        "objectives {} seed {} max_finite_difference_error {worst_fd:.3e} smoothness_violations {smooth}",
        2 * opts.samples,
        opts.seed
    )?;
    Ok(Outcome {
        passed: worst_fd <= 1e-6 && smooth == 0,
    })
}

/// Source of a generated config.
#[derive(Debug, Clone, PartialEq)]
pub enum GenerateFrom {
    Scenario(Scenario),
    /// Expand the `random_*` payloads of an existing config.
    Config(PathBuf),
}

pub fn cmd_generate(from: &GenerateFrom, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let cfg = match from {
        GenerateFrom::Scenario(s) => ProblemConfig::from_scenario(&s.problem()?),
        GenerateFrom::Config(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            let cfg: ProblemConfig = serde_json::from_reader(BufReader::new(file))
                .map_err(|e| CliError::Usage(format!("config: {e}")))?;
            cfg.materialize()
        }
    };
    cfg.build()?;
    writeln!(out, "{}", cfg.to_json())?;
    Ok(Outcome { passed: true })
}
