//! JSON problem configuration.
//!
//! ```json
//! {
//!   "objective": { "kind": "isotropic", "center": [2.0, 0.0, 0.0] },
//!   "ball": { "family": "lp", "p": 1.5, "radius": 1.0, "dim": 3 },
//!   "solver": { "max_iters": 500, "gap_tolerance": 1e-10 },
//!   "f_star": null,
//!   "experiment": "demo"
//! }
//! ```
//!
//! Objectives over matrix balls act on the row-major flattening. The
//! `random_*` kinds are expanded from their seed with standard normal
//! entries, so a config is fully determined by its text.

use serde::{Deserialize, Serialize};
use strongfw::experiments;
use strongfw::sampling::{gaussian_matrix, gaussian_vec, seeded};
use strongfw::{
    BallSpec, DenseMatrix, DenseVector, NormChoice, ObjectiveKind, ObjectiveSpec, Point,
    SolverConfig,
};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub objective: ObjectiveConfig,
    pub ball: BallConfig,
    #[serde(default)]
    pub solver: SolverSection,
    /// Starting point, flattened row-major. The oracle's answer to the
    /// all-ones objective when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    /// Optimal value, used to fill the `h` column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    /// Free-form tag. A scenario name here makes `solve` assess the trace
    /// against that scenario's bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectiveConfig {
    Quadratic {
        q: Vec<Vec<f64>>,
        center: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    Isotropic {
        center: Vec<f64>,
    },
    LeastSquares {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    /// `Q = BᵀB / dim` and a Gaussian center.
    RandomQuadratic {
        dim: usize,
        seed: u64,
    },
    RandomLeastSquares {
        rows: usize,
        cols: usize,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BallConfig {
    Lp {
        p: f64,
        radius: f64,
        dim: usize,
    },
    Schatten {
        p: f64,
        radius: f64,
        rows: usize,
        cols: usize,
    },
    Group {
        s: f64,
        p: f64,
        radius: f64,
        rows: usize,
        cols: usize,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormConfig {
    #[default]
    Own,
    Euclidean,
}

impl From<NormConfig> for NormChoice {
    fn from(n: NormConfig) -> Self {
        match n {
            NormConfig::Own => NormChoice::Own,
            NormConfig::Euclidean => NormChoice::Euclidean,
        }
    }
}

impl From<NormChoice> for NormConfig {
    fn from(n: NormChoice) -> Self {
        match n {
            NormChoice::Own => NormConfig::Own,
            NormChoice::Euclidean => NormConfig::Euclidean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub max_iters: usize,
    pub gap_tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_override: Option<f64>,
    pub seed: u64,
    pub reference_norm: NormConfig,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSection {
            max_iters: d.max_iters,
            gap_tolerance: d.gap_tolerance,
            beta_override: d.beta_override,
            seed: d.seed,
            reference_norm: d.reference_norm.into(),
        }
    }
}

/// A config turned into solver inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BuiltProblem {
    pub objective: ObjectiveSpec,
    pub ball: BallSpec,
    pub start: Option<Point>,
    pub solver: SolverConfig,
}

fn matrix(rows: &[Vec<f64>]) -> Result<DenseMatrix, CliError> {
    Ok(DenseMatrix::from_rows(rows)?)
}

fn rows_of(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

impl ObjectiveConfig {
    /// Replace `random_*` kinds by their explicit payloads.
    pub fn materialize(&self) -> ObjectiveConfig {
        match self {
            ObjectiveConfig::RandomQuadratic { dim, seed } => {
                let mut rng = seeded(*seed);
                let b = gaussian_matrix(&mut rng, *dim, *dim);
                let center = gaussian_vec(&mut rng, *dim);
                let gram = b.gram();
                let scale = 1.0 / *dim as f64;
                let q = (0..*dim)
                    .map(|i| gram.row(i).iter().map(|v| v * scale).collect())
                    .collect();
                ObjectiveConfig::Quadratic {
                    q,
                    center,
                    offset: 0.0,
                }
            }
            ObjectiveConfig::RandomLeastSquares { rows, cols, seed } => {
                let mut rng = seeded(*seed);
                let a = gaussian_matrix(&mut rng, *rows, *cols);
                let b = gaussian_vec(&mut rng, *rows);
                ObjectiveConfig::LeastSquares { a: rows_of(&a), b }
            }
            other => other.clone(),
        }
    }

    pub fn build(&self) -> Result<ObjectiveSpec, CliError> {
        Ok(match self.materialize() {
            ObjectiveConfig::Quadratic { q, center, offset } => {
                ObjectiveSpec::quadratic(matrix(&q)?, DenseVector::new(center)?, offset)?
            }
            ObjectiveConfig::Isotropic { center } => {
                ObjectiveSpec::isotropic(DenseVector::new(center)?)
            }
            ObjectiveConfig::LeastSquares { a, b } => {
                ObjectiveSpec::least_squares(matrix(&a)?, DenseVector::new(b)?)?
            }
            ObjectiveConfig::RandomQuadratic { .. }
            | ObjectiveConfig::RandomLeastSquares { .. } => {
                unreachable!("materialized above")
            }
        })
    }

    fn from_spec(spec: &ObjectiveSpec) -> ObjectiveConfig {
        match &spec.kind {
            ObjectiveKind::Quadratic { q, center, offset } => {
                if *offset == 0.0 && *q == DenseMatrix::identity(center.len()) {
                    ObjectiveConfig::Isotropic {
                        center: center.as_slice().to_vec(),
                    }
                } else {
                    ObjectiveConfig::Quadratic {
                        q: rows_of(q),
                        center: center.as_slice().to_vec(),
                        offset: *offset,
                    }
                }
            }
            ObjectiveKind::LeastSquares { a, b } => ObjectiveConfig::LeastSquares {
                a: rows_of(a),
                b: b.as_slice().to_vec(),
            },
        }
    }
}

impl BallConfig {
    pub fn build(&self) -> Result<BallSpec, CliError> {
        Ok(match self {
            BallConfig::Lp { p, radius, dim } => BallSpec::lp(*p, *radius, *dim)?,
            BallConfig::Schatten {
                p,
                radius,
                rows,
                cols,
            } => BallSpec::schatten(*p, *radius, *rows, *cols)?,
            BallConfig::Group {
                s,
                p,
                radius,
                rows,
                cols,
            } => BallSpec::group(*s, *p, *radius, *rows, *cols)?,
            BallConfig::Box { lo, hi } => BallSpec::cube(lo.clone(), hi.clone())?,
        })
    }

    fn from_spec(ball: &BallSpec) -> BallConfig {
        match ball {
            BallSpec::Lp { p, radius, dim } => BallConfig::Lp {
                p: *p,
                radius: *radius,
                dim: *dim,
            },
            BallSpec::Schatten {
                p,
                radius,
                rows,
                cols,
            } => BallConfig::Schatten {
                p: *p,
                radius: *radius,
                rows: *rows,
                cols: *cols,
            },
            BallSpec::Group {
                s,
                p,
                radius,
                rows,
                cols,
            } => BallConfig::Group {
                s: *s,
                p: *p,
                radius: *radius,
                rows: *rows,
                cols: *cols,
            },
            BallSpec::Box { lo, hi } => BallConfig::Box {
                lo: lo.as_slice().to_vec(),
                hi: hi.as_slice().to_vec(),
            },
        }
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn build(&self) -> Result<BuiltProblem, CliError> {
        let ball = self.ball.build()?;
        let mut objective = self.objective.build()?;
        if let Some(fs) = self.f_star {
            objective = objective.with_f_star(fs);
        }
        let start = match &self.start {
            Some(entries) => Some(Point::with_shape(ball.shape(), entries.clone())?),
            None => None,
        };
        let s = &self.solver;
        let solver = SolverConfig {
            max_iters: s.max_iters,
            gap_tolerance: s.gap_tolerance,
            beta_override: s.beta_override,
            record_trace: true,
            seed: s.seed,
            reference_norm: s.reference_norm.into(),
        };
        solver.validate()?;
        Ok(BuiltProblem {
            objective,
            ball,
            start,
            solver,
        })
    }

    /// Explicit-payload config reproducing a packaged scenario.
    pub fn from_scenario(problem: &experiments::Problem) -> Self {
        let c = &problem.config;
        ProblemConfig {
            objective: ObjectiveConfig::from_spec(&problem.objective),
            ball: BallConfig::from_spec(&problem.ball),
            solver: SolverSection {
                max_iters: c.max_iters,
                gap_tolerance: c.gap_tolerance,
                beta_override: c.beta_override,
                seed: experiments::SCENARIO_SEED,
                reference_norm: c.reference_norm.into(),
            },
            start: Some(problem.start.entries().to_vec()),
            f_star: problem.objective.f_star,
            experiment: Some(problem.scenario.name().to_string()),
        }
    }

    /// Same config with `random_*` objectives expanded.
    pub fn materialize(&self) -> Self {
        ProblemConfig {
            objective: self.objective.materialize(),
            ..self.clone()
        }
    }
}
