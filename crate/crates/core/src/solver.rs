//! Frank-Wolfe with exact line search on the quadratic upper model.
//!
//! Each iteration calls the set's oracle on the gradient,
//! `p_t = argmin_{y ∈ K} y • ∇f(x_t)`, then picks
//!
//! ```text
//! η_t = argmin_{η ∈ [0,1]}  η (p_t − x_t)•∇f(x_t) + η² (β/2) ‖p_t − x_t‖²
//! ```
//!
//! and moves to `x_{t+1} = x_t + η_t (p_t − x_t)`. The model upper-bounds
//! `f` along the segment whenever `β` is a valid smoothness constant, so the
//! objective never increases. The duality gap `(x_t − p_t)•∇f(x_t)` bounds
//! `f(x_t) − f*` from above and serves as the stopping test.

use crate::ball::{membership, BallSpec, NormChoice};
use crate::error::{Error, Result};
use crate::objective::ObjectiveSpec;
use crate::types::{dot, euclidean, Point};

/// Feasibility tolerance for the starting point.
const START_TOL: f64 = 1e-9;
/// Relative length below which `p_t − x_t` counts as zero.
const ZERO_DIRECTION_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iters: usize,
    /// Stop once the duality gap is at or below this value.
    pub gap_tolerance: f64,
    /// Used instead of the objective's `beta` when set.
    pub beta_override: Option<f64>,
    pub record_trace: bool,
    /// Recorded for reproducibility; the solver itself draws nothing.
    pub seed: u64,
    /// Norm of the line-search model, of `step_norm`, and (through its dual)
    /// of `grad_dual_norm`.
    pub reference_norm: NormChoice,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iters: 1000,
            gap_tolerance: 0.0,
            beta_override: None,
            record_trace: true,
            seed: 0,
            reference_norm: NormChoice::Own,
        }
    }
}

impl SolverConfig {
    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_gap_tolerance(mut self, tol: f64) -> Self {
        self.gap_tolerance = tol;
        self
    }

    pub fn with_reference_norm(mut self, choice: NormChoice) -> Self {
        self.reference_norm = choice;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::Domain("max_iters must be at least 1".into()));
        }
        if !(self.gap_tolerance >= 0.0) {
            return Err(Error::Domain(format!(
                "gap_tolerance {} must be nonnegative",
                self.gap_tolerance
            )));
        }
        if let Some(b) = self.beta_override {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Domain(format!("beta_override {b} must be positive")));
            }
        }
        Ok(())
    }
}

/// One row of the convergence trace, describing iterate `x_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub t: usize,
    pub f_value: f64,
    pub duality_gap: f64,
    /// Step taken from `x_t`; 0 on the final row.
    pub eta: f64,
    /// `‖p_t − x_t‖` in the reference norm.
    pub step_norm: f64,
    /// `f(x_t) − f*` when `f*` is known.
    pub h: Option<f64>,
    /// `‖∇f(x_t)‖_*` in the dual of the reference norm.
    pub grad_dual_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GapTolerance,
    MaxIters,
    /// Zero gradient, or an oracle answer indistinguishable from `x_t`.
    ZeroDirection,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::GapTolerance => "gap_tolerance",
            Termination::MaxIters => "max_iters",
            Termination::ZeroDirection => "zero_direction",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub final_point: Point,
    pub final_value: f64,
    /// Certifies `final_value − f* ≤ final_gap`.
    pub final_gap: f64,
    pub iterations_used: usize,
    pub trace: Vec<IterationRecord>,
    pub terminated_by: Termination,
}

/// Minimiser over `η ∈ [0, 1]` of `η g + η² (β/2) s`, where `g` is the
/// directional derivative along the step and `s` its squared length.
pub fn line_search_eta(g: f64, beta: f64, step_norm_sq: f64) -> f64 {
    if step_norm_sq <= 0.0 || beta <= 0.0 {
        return 0.0;
    }
    (-g / (beta * step_norm_sq)).clamp(0.0, 1.0)
}

/// `(x − p) • grad`.
pub fn duality_gap(x: &[f64], p: &[f64], grad: &[f64]) -> Result<f64> {
    if x.len() != p.len() || x.len() != grad.len() {
        return Err(Error::shape(
            x.len(),
            format!("{} and {}", p.len(), grad.len()),
        ));
    }
    Ok(x.iter()
        .zip(p)
        .zip(grad)
        .map(|((xi, pi), gi)| (xi - pi) * gi)
        .sum())
}

fn finite(value: f64, iteration: usize, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { iteration, what })
    }
}

/// Run Frank-Wolfe from `x_init`, or from [`BallSpec::default_start`] when
/// `None`.
///
/// Stops at the first of: a zero direction, duality gap `≤ gap_tolerance`,
/// or `max_iters` updates. The trace has one row per visited iterate,
/// `t = 0..=iterations_used`; `h` is filled when `obj.f_star` is set.
pub fn solve(
    obj: &ObjectiveSpec,
    ball: &BallSpec,
    x_init: Option<&Point>,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    cfg.validate()?;
    ball.validate()?;
    let mut x = match x_init {
        Some(p) => p.clone(),
        None => ball.default_start()?,
    };
    if obj.dim() != ball.dimension() {
        return Err(Error::shape(
            format!("objective over {} coordinates", ball.dimension()),
            obj.dim(),
        ));
    }
    if !membership(ball, &x, START_TOL)? {
        return Err(Error::Precondition(
            "x_init lies outside the feasible set".into(),
        ));
    }
    let beta = cfg.beta_override.unwrap_or(obj.beta);
    if !(beta > 0.0) {
        return Err(Error::Precondition(format!(
            "smoothness constant {beta} must be positive"
        )));
    }
    let shape = x.shape();
    let mut trace = Vec::new();

    let mut t = 0;
    loop {
        let f = finite(obj.eval(x.entries())?, t, "objective value")?;
        let grad = obj.gradient(x.entries())?;
        if let Some(bad) = grad.iter().find(|g| !g.is_finite()) {
            finite(*bad, t, "gradient")?;
        }
        let grad = Point::from_raw(shape, grad);
        let p = ball.lmo(&grad)?;
        let d: Vec<f64> = p
            .entries()
            .iter()
            .zip(x.entries())
            .map(|(a, b)| a - b)
            .collect();
        let gap = finite(-dot(&d, grad.entries()), t, "duality gap")?;
        let d = Point::from_raw(shape, d);
        let step_norm = finite(ball.norm(&d, cfg.reference_norm)?, t, "step norm")?;
        let grad_dual_norm = ball.dual_norm(&grad, cfg.reference_norm)?;

        let zero_gradient = grad.entries().iter().all(|g| *g == 0.0);
        let zero_step =
            euclidean(d.entries()) <= ZERO_DIRECTION_TOL * (1.0 + euclidean(x.entries()));
        let stop = if zero_gradient || zero_step {
            Some(Termination::ZeroDirection)
        } else if gap <= cfg.gap_tolerance {
            Some(Termination::GapTolerance)
        } else if t >= cfg.max_iters {
            Some(Termination::MaxIters)
        } else {
            None
        };

        let eta = match stop {
            Some(_) => 0.0,
            None => line_search_eta(-gap, beta, step_norm * step_norm),
        };
        let record = IterationRecord {
            t,
            f_value: f,
            duality_gap: gap,
            eta,
            step_norm,
            h: obj.f_star.map(|fs| f - fs),
            grad_dual_norm,
        };

        if let Some(reason) = stop {
            trace.push(record);
            let trace = if cfg.record_trace { trace } else { Vec::new() };
            return Ok(SolveResult {
                final_point: x,
                final_value: f,
                final_gap: gap,
                iterations_used: t,
                trace,
                terminated_by: reason,
            });
        }
        if cfg.record_trace {
            trace.push(record);
        }

        let next: Vec<f64> = x
            .entries()
            .iter()
            .zip(d.entries())
            .map(|(xi, di)| xi + eta * di)
            .collect();
        x = Point::from_raw(shape, next);
        t += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{DenseMatrix, DenseVector};

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn line_search_examples() {
        assert_eq!(line_search_eta(-1.0, 1.0, 1.0), 1.0);
        assert_eq!(line_search_eta(-0.5, 1.0, 1.0), 0.5);
        assert_eq!(line_search_eta(0.2, 1.0, 1.0), 0.0);
        assert_eq!(line_search_eta(-1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn duality_gap_examples() {
        assert_eq!(
            duality_gap(&[1.0, 0.0], &[-1.0, 0.0], &[2.0, 0.0]).unwrap(),
            4.0
        );
        assert_eq!(
            duality_gap(&[0.3, 0.1], &[0.0, 0.0], &[0.0, 0.0]).unwrap(),
            0.0
        );
        assert!(duality_gap(&[1.0], &[1.0, 2.0], &[0.0]).is_err());
    }

    #[test]
    fn scalar_problem_converges_in_one_step() {
        let obj = ObjectiveSpec::quadratic(DenseMatrix::identity(1), v(&[2.0]), 0.0)
            .unwrap()
            .with_f_star(0.5);
        let ball = BallSpec::lp(2.0, 1.0, 1).unwrap();
        let start = Point::Vector(v(&[-1.0]));
        let res = solve(&obj, &ball, Some(&start), &SolverConfig::default()).unwrap();
        // g = −6, ‖d‖² = 4, η clamps to 1
        assert_eq!(res.trace[0].eta, 1.0);
        assert_eq!(res.trace[0].duality_gap, 6.0);
        assert_eq!(res.final_point.entries(), &[1.0]);
        assert_eq!(res.iterations_used, 1);
        assert_eq!(res.terminated_by, Termination::ZeroDirection);
        assert_eq!(res.trace[1].h, Some(0.0));
    }

    #[test]
    fn starting_at_an_unconstrained_optimum_stops_immediately() {
        let obj = ObjectiveSpec::isotropic(v(&[0.2, -0.1]));
        let ball = BallSpec::lp(1.5, 1.0, 2).unwrap();
        let start = Point::Vector(v(&[0.2, -0.1]));
        let res = solve(&obj, &ball, Some(&start), &SolverConfig::default()).unwrap();
        assert_eq!(res.iterations_used, 0);
        assert_eq!(res.final_gap, 0.0);
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let obj = ObjectiveSpec::isotropic(v(&[0.0, 0.0]));
        let ball = BallSpec::lp(2.0, 1.0, 2).unwrap();
        let start = Point::Vector(v(&[1.0, 1.0]));
        assert!(matches!(
            solve(&obj, &ball, Some(&start), &SolverConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_a_shape_error() {
        let obj = ObjectiveSpec::isotropic(v(&[0.0, 0.0, 0.0]));
        let ball = BallSpec::lp(2.0, 1.0, 2).unwrap();
        assert!(matches!(
            solve(&obj, &ball, None, &SolverConfig::default()),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn bad_config_is_rejected() {
        let obj = ObjectiveSpec::isotropic(v(&[0.0]));
        let ball = BallSpec::lp(2.0, 1.0, 1).unwrap();
        let cfg = SolverConfig::default().with_max_iters(0);
        assert!(solve(&obj, &ball, None, &cfg).is_err());
        let cfg = SolverConfig::default().with_gap_tolerance(-1.0);
        assert!(solve(&obj, &ball, None, &cfg).is_err());
    }

    #[test]
    fn gap_tolerance_stops_early() {
        let obj = ObjectiveSpec::isotropic(v(&[0.3, 0.4, 0.0]));
        let ball = BallSpec::lp(1.5, 1.0, 3).unwrap();
        let cfg = SolverConfig::default()
            .with_max_iters(100_000)
            .with_gap_tolerance(1e-6);
        let res = solve(&obj, &ball, None, &cfg).unwrap();
        assert_eq!(res.terminated_by, Termination::GapTolerance);
        assert!(res.final_gap <= 1e-6);
        assert!(res.iterations_used < 100_000);
    }

    #[test]
    fn traces_are_deterministic() {
        let obj = ObjectiveSpec::isotropic(v(&[0.9, -0.7, 0.2]));
        let ball = BallSpec::lp(1.3, 1.0, 3).unwrap();
        let cfg = SolverConfig::default().with_max_iters(200);
        let a = solve(&obj, &ball, None, &cfg).unwrap();
        let b = solve(&obj, &ball, None, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn beta_override_takes_precedence() {
        let obj = ObjectiveSpec::isotropic(v(&[2.0]));
        let ball = BallSpec::lp(2.0, 1.0, 1).unwrap();
        let start = Point::Vector(v(&[-1.0]));
        let cfg = SolverConfig {
            beta_override: Some(6.0),
            ..SolverConfig::default()
        };
        let res = solve(&obj, &ball, Some(&start), &cfg).unwrap();
        // g = −6, β = 6, ‖d‖² = 4: η = 0.25
        assert_eq!(res.trace[0].eta, 0.25);
    }

    #[test]
    fn matrix_domains_keep_their_shape() {
        let obj = ObjectiveSpec::isotropic(v(&[1.0, 0.5, -0.25, 2.0, 0.0, 1.0]));
        let ball = BallSpec::schatten(1.5, 1.0, 2, 3).unwrap();
        let res = solve(
            &obj,
            &ball,
            None,
            &SolverConfig::default().with_max_iters(50),
        )
        .unwrap();
        assert!(res.final_point.as_matrix().is_some());
        assert!(membership(&ball, &res.final_point, 1e-9).unwrap());
    }
}
