//! Five packaged convergence experiments, each pairing a problem with the
//! bound its constants predict.
//!
//! | scenario        | set                   | regime                     |
//! |-----------------|-----------------------|----------------------------|
//! | `sc_set_sc_obj` | Euclidean ball, n=50  | `1/t²`, optimum on boundary |
//! | `box_baseline`  | box `[−1,1]²`         | `1/t`                       |
//! | `grad_bounded`  | Euclidean ball, n=50  | geometric, `‖∇f‖ ≥ 1`       |
//! | `interior`      | Euclidean ball, n=50  | geometric, interior optimum |
//! | `least_squares` | ℓ1.5 ball, n=30       | `1/t²`, wide least squares  |
//!
//! [`Scenario::problem`] builds the inputs deterministically, and
//! [`Scenario::assess`] turns any trace of that problem into a
//! [`RateReport`] and a list of [`Check`]s. The two halves are separate so a
//! trace read back from disk can be re-assessed.

use crate::analysis::{
    accelerated_bound, check_bound, linear_rate_factor, per_step_check, rate_exponent,
    step_contraction_check, sublinear_bound, BoundKind, RateReport, Regime,
};
use crate::ball::{diameter, BallSpec, NormChoice};
use crate::error::{Error, Result};
use crate::linalg::spectral_bounds;
use crate::norms::strong_convexity_parameter;
use crate::objective::{gradient_bound_violations, ObjectiveSpec};
use crate::sampling::{gaussian_matrix, gaussian_vec, seeded};
use crate::solver::{solve, IterationRecord, SolveResult, SolverConfig};
use crate::types::{euclidean, DenseMatrix, DenseVector, Point};

/// Seed shared by every scenario's random data.
pub const SCENARIO_SEED: u64 = 20_240_617;

const SPHERE_DIM: usize = 50;
const LS_ROWS: usize = 10;
const LS_COLS: usize = 30;
const LS_P: f64 = 1.5;
const LS_RADIUS: f64 = 0.5;
const LS_REFERENCE_GAP: f64 = 1e-12;
const LS_REFERENCE_ITERS: usize = 2_000_000;
const LS_GRADIENT_SAMPLES: usize = 1000;
const LS_MIN_EIGENVALUE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    ScSetScObj,
    BoxBaseline,
    GradBounded,
    Interior,
    LeastSquares,
}

/// Constants the bounds are evaluated with, all in the reference norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub beta: f64,
    pub diameter: f64,
    pub alpha_f: f64,
    /// `None` for sets that are not strongly convex.
    pub alpha_k: Option<f64>,
}

/// Everything needed to run a scenario.
#[derive(Debug, Clone)]
pub struct Problem {
    pub scenario: Scenario,
    pub objective: ObjectiveSpec,
    pub ball: BallSpec,
    pub start: Point,
    pub config: SolverConfig,
    pub constants: BoundConstants,
}

/// One named pass/fail condition of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assessment {
    pub report: RateReport,
    pub checks: Vec<Check>,
}

impl Assessment {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub problem: Problem,
    pub result: SolveResult,
    pub assessment: Assessment,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::ScSetScObj,
        Scenario::BoxBaseline,
        Scenario::GradBounded,
        Scenario::Interior,
        Scenario::LeastSquares,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::ScSetScObj => "sc_set_sc_obj",
            Scenario::BoxBaseline => "box_baseline",
            Scenario::GradBounded => "grad_bounded",
            Scenario::Interior => "interior",
            Scenario::LeastSquares => "least_squares",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Scenario::ALL.into_iter().find(|sc| sc.name() == s)
    }

    pub fn bound_kind(&self) -> BoundKind {
        match self {
            Scenario::ScSetScObj | Scenario::LeastSquares => BoundKind::Accelerated,
            Scenario::BoxBaseline => BoundKind::Sublinear,
            Scenario::GradBounded => BoundKind::GradientBounded,
            Scenario::Interior => BoundKind::Interior,
        }
    }

    /// Build the problem. For `least_squares` this includes a long reference
    /// solve that fixes `f*`.
    pub fn problem(&self) -> Result<Problem> {
        match self {
            Scenario::ScSetScObj => sphere_problem(*self, 1.0, 10_000),
            Scenario::GradBounded => sphere_problem(*self, 2.0, 1000),
            Scenario::Interior => sphere_problem(*self, 0.5, 5000),
            Scenario::BoxBaseline => box_problem(),
            Scenario::LeastSquares => least_squares_problem(),
        }
    }

    pub fn run(&self) -> Result<ScenarioRun> {
        let problem = self.problem()?;
        let result = solve(
            &problem.objective,
            &problem.ball,
            Some(&problem.start),
            &problem.config,
        )?;
        let mut assessment = self.assess(&problem.constants, &result.trace)?;
        if *self == Scenario::LeastSquares {
            assessment
                .checks
                .insert(0, least_squares_gradient_check(&problem)?);
        }
        Ok(ScenarioRun {
            problem,
            result,
            assessment,
        })
    }

    /// Evaluate a trace of this scenario's problem against its bounds.
    pub fn assess(&self, k: &BoundConstants, trace: &[IterationRecord]) -> Result<Assessment> {
        let last = trace.last().map_or(0, |r| r.t);
        let mut checks = Vec::new();
        let window;
        let bound_check;
        match self {
            Scenario::ScSetScObj | Scenario::LeastSquares => {
                let alpha_k = alpha_k_of(k)?;
                bound_check = check_bound(trace, |t| {
                    accelerated_bound(t, k.beta, k.diameter, k.alpha_f, alpha_k).unwrap_or(f64::NAN)
                })?;
                window = if *self == Scenario::ScSetScObj {
                    (100, last.max(101))
                } else {
                    (1, usable_end(trace))
                };
            }
            Scenario::BoxBaseline => {
                bound_check = check_bound(trace, |t| {
                    sublinear_bound(t, k.beta, k.diameter).unwrap_or(f64::NAN)
                })?;
                window = (100, last.max(101));
            }
            Scenario::GradBounded => {
                let factor = linear_rate_factor(
                    Regime::GradientBounded { g: 1.0 },
                    k.beta,
                    k.diameter,
                    k.alpha_f,
                    alpha_k_of(k)?,
                )?;
                let h1 = trace
                    .iter()
                    .find(|r| r.t == 1)
                    .and_then(|r| r.h)
                    .ok_or_else(|| Error::Precondition("trace has no h at t = 1".into()))?;
                bound_check = check_bound(trace, |t| h1 * factor.powi(t as i32 - 1))?;
                window = (1, usable_end(trace));
            }
            Scenario::Interior => {
                let factor = linear_rate_factor(
                    Regime::Interior { r: 0.5 },
                    k.beta,
                    k.diameter,
                    k.alpha_f,
                    alpha_k_of(k)?,
                )?;
                let h0 = trace
                    .first()
                    .and_then(|r| r.h)
                    .ok_or_else(|| Error::Precondition("trace has no h at t = 0".into()))?;
                bound_check = check_bound(trace, |t| h0 * factor.powi(t as i32))?;
                let steps = per_step_check(trace, |_| factor)?;
                checks.push(Check {
                    name: "per_step_factor",
                    passed: steps == 0,
                    detail: format!("factor {factor}, {steps} violations"),
                });
                window = (1, usable_end(trace));
            }
        }
        let exponent = match rate_exponent(trace, window.0, window.1) {
            Ok(e) => e,
            Err(Error::DegenerateFit(_)) | Err(Error::Domain(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        checks.insert(
            0,
            Check {
                name: "bound",
                passed: bound_check.violations == 0 && bound_check.checked > 0,
                detail: format!(
                    "{} violations over {} rows, max ratio {:.3e}",
                    bound_check.violations, bound_check.checked, bound_check.max_violation_ratio
                ),
            },
        );
        match self {
            Scenario::ScSetScObj => checks.push(Check {
                name: "exponent",
                passed: exponent <= -1.5,
                detail: format!(
                    "{exponent:.4} over [{}, {}], need ≤ −1.5",
                    window.0, window.1
                ),
            }),
            Scenario::BoxBaseline => checks.push(Check {
                name: "exponent",
                passed: (-1.4..=-0.7).contains(&exponent),
                detail: format!(
                    "{exponent:.4} over [{}, {}], need within [−1.4, −0.7]",
                    window.0, window.1
                ),
            }),
            _ => {}
        }
        if let (Some(alpha_k), true) = (k.alpha_k, *self != Scenario::LeastSquares) {
            let norms: Vec<f64> = trace.iter().map(|r| r.grad_dual_norm).collect();
            let v = step_contraction_check(trace, alpha_k, k.beta, &norms)?;
            checks.push(Check {
                name: "step_contraction",
                passed: v == 0,
                detail: format!(
                    "{v} violations over {} steps",
                    trace.len().saturating_sub(1)
                ),
            });
        }
        Ok(Assessment {
            report: RateReport {
                exponent,
                fit_window: window,
                bound: self.bound_kind(),
                violations: bound_check.violations,
                max_violation_ratio: bound_check.max_violation_ratio,
            },
            checks,
        })
    }
}

fn alpha_k_of(k: &BoundConstants) -> Result<f64> {
    k.alpha_k
        .ok_or_else(|| Error::Precondition("set strong-convexity constant is required".into()))
}

/// Last `t` whose `h` is still above the rounding floor.
fn usable_end(trace: &[IterationRecord]) -> usize {
    trace
        .iter()
        .filter(|r| {
            r.h.is_some_and(|h| h > 0.0 && h >= 1e-14 * (1.0 + (r.f_value - h).abs()))
        })
        .map(|r| r.t)
        .max()
        .unwrap_or(0)
}

/// `½‖x − x₀‖²` over the unit Euclidean ball, with `x₀` a seeded direction
/// scaled to `norm`.
fn sphere_problem(scenario: Scenario, norm: f64, iters: usize) -> Result<Problem> {
    let mut rng = seeded(SCENARIO_SEED);
    let g = gaussian_vec(&mut rng, SPHERE_DIM);
    let len = euclidean(&g);
    let x0: Vec<f64> = g.iter().map(|v| norm * v / len).collect();
    let dist = (euclidean(&x0) - 1.0).max(0.0);
    let objective = ObjectiveSpec::isotropic(DenseVector::new(x0)?).with_f_star(0.5 * dist * dist);
    let ball = BallSpec::lp(2.0, 1.0, SPHERE_DIM)?;
    let alpha_k = strong_convexity_parameter(&ball, NormChoice::Own)?.alpha;
    Ok(Problem {
        scenario,
        start: ball.default_start()?,
        constants: BoundConstants {
            beta: objective.beta,
            diameter: diameter(&ball, NormChoice::Own)?,
            alpha_f: objective.alpha,
            alpha_k: Some(alpha_k),
        },
        objective,
        ball,
        config: SolverConfig::default().with_max_iters(iters),
    })
}

/// `½‖x − (1, 0)‖²` over `[−1, 1]²`, started at `(−1, −1)`.
fn box_problem() -> Result<Problem> {
    let objective = ObjectiveSpec::isotropic(DenseVector::new(vec![1.0, 0.0])?).with_f_star(0.0);
    let ball = BallSpec::cube(vec![-1.0; 2], vec![1.0; 2])?;
    Ok(Problem {
        scenario: Scenario::BoxBaseline,
        start: ball.default_start()?,
        constants: BoundConstants {
            beta: objective.beta,
            diameter: diameter(&ball, NormChoice::Euclidean)?,
            alpha_f: objective.alpha,
            alpha_k: None,
        },
        objective,
        ball,
        config: SolverConfig::default().with_max_iters(5000),
    })
}

/// Seeded `½‖Ax − b‖²` with `A` of shape 10×30 over an ℓ1.5 ball, measured
/// in the Euclidean norm throughout.
fn least_squares_problem() -> Result<Problem> {
    let (a, b) = least_squares_data();
    let aat = a.matmul(&a.transpose())?;
    let lambda_min = spectral_bounds(&aat)?.lambda_min;
    if !(lambda_min > LS_MIN_EIGENVALUE) {
        return Err(Error::DegenerateObjective(format!(
            "λ_min(AAᵀ) = {lambda_min:e} is not above {LS_MIN_EIGENVALUE:e}"
        )));
    }
    let ball = BallSpec::lp(LS_P, LS_RADIUS, LS_COLS)?;
    let objective = ObjectiveSpec::least_squares(a, b)?;
    let config = SolverConfig::default().with_reference_norm(NormChoice::Euclidean);
    let start = ball.default_start()?;

    let reference = solve(
        &objective,
        &ball,
        Some(&start),
        &config
            .clone()
            .with_max_iters(LS_REFERENCE_ITERS)
            .with_gap_tolerance(LS_REFERENCE_GAP),
    )
    .map(|mut r| {
        r.trace.clear();
        r
    })?;
    if reference.final_gap > LS_REFERENCE_GAP {
        return Err(Error::Precondition(format!(
            "reference solve stopped at gap {:e}",
            reference.final_gap
        )));
    }
    // the gap certifies f(x_ref) − gap ≤ f*
    let f_star = reference.final_value - reference.final_gap;
    let alpha_k = strong_convexity_parameter(&ball, NormChoice::Euclidean)?.alpha;
    Ok(Problem {
        scenario: Scenario::LeastSquares,
        start,
        constants: BoundConstants {
            beta: objective.beta,
            diameter: diameter(&ball, NormChoice::Euclidean)?,
            alpha_f: 4.0 * lambda_min,
            alpha_k: Some(alpha_k),
        },
        objective: objective.with_f_star(f_star),
        ball,
        config: config.with_max_iters(10_000),
    })
}

fn least_squares_gradient_check(problem: &Problem) -> Result<Check> {
    let f_star = problem.objective.f_star.expect("least-squares f* is set");
    let v = gradient_bound_violations(
        &problem.objective,
        &problem.ball,
        problem.constants.alpha_f,
        f_star,
        LS_GRADIENT_SAMPLES,
        SCENARIO_SEED ^ 0x5eed,
        NormChoice::Euclidean,
    )?;
    Ok(Check {
        name: "gradient_lower_bound",
        passed: v == 0,
        detail: format!("{v} violations over {LS_GRADIENT_SAMPLES} samples"),
    })
}

/// Seeded `(A, b)` of the `least_squares` scenario, without the reference
/// solve.
pub fn least_squares_data() -> (DenseMatrix, DenseVector) {
    let mut rng = seeded(SCENARIO_SEED);
    let a = gaussian_matrix(&mut rng, LS_ROWS, LS_COLS);
    let b = gaussian_vec(&mut rng, LS_ROWS);
    (a, DenseVector::new(b).expect("gaussian samples are finite"))
}
