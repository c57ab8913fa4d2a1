//! Frank-Wolfe over strongly convex sets.
//!
//! The crate provides the feasible sets (ℓp, Schatten, group and box
//! balls), their closed-form linear minimization oracles, smooth objectives
//! with their curvature constants, a Frank-Wolfe solver with exact line
//! search, and checks of recorded traces against the `1/t`, `1/t²` and
//! geometric convergence bounds.
//!
//! ```
//! use strongfw::{solve, BallSpec, DenseVector, ObjectiveSpec, SolverConfig};
//!
//! let ball = BallSpec::lp(1.5, 1.0, 3).unwrap();
//! let obj = ObjectiveSpec::isotropic(DenseVector::new(vec![2.0, -1.0, 0.5]).unwrap());
//! let cfg = SolverConfig::default().with_max_iters(200);
//! let res = solve(&obj, &ball, None, &cfg).unwrap();
//! assert!(res.final_gap < 1e-6);
//! ```

pub mod analysis;
pub mod ball;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod lmo;
pub mod norms;
pub mod objective;
pub mod sampling;
pub mod solver;
pub mod types;

pub use analysis::{
    accelerated_bound, bound_crossover, check_bound, linear_rate_factor, rate_exponent,
    step_contraction_check, sublinear_bound, BoundKind, RateReport, Regime,
};
pub use ball::{diameter, dual_exponent, membership, BallSpec, NormChoice};
pub use error::{Error, Result};
pub use experiments::Scenario;
pub use linalg::{spectral_bounds, svd, SvdResult};
pub use norms::{strong_convexity_parameter, verify_set_strong_convexity};
pub use objective::{ObjectiveKind, ObjectiveSpec};
pub use solver::{solve, IterationRecord, SolveResult, SolverConfig, Termination};
pub use types::{DenseMatrix, DenseVector, Point, Shape};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/algorithm.md")]
    pub struct Algorithm;
    #[doc = include_str!("../../../book/src/sets.md")]
    pub struct Sets;
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub struct Oracles;
    #[doc = include_str!("../../../book/src/objectives.md")]
    pub struct Objectives;
    #[doc = include_str!("../../../book/src/rates.md")]
    pub struct Rates;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
