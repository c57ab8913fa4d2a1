//! Smooth convex objectives and their curvature constants.
//!
//! Two constants drive the rate analysis:
//!
//! * `beta`, the smoothness constant: `f(y) ≤ f(x) + ∇f(x)•(y−x) + (β/2)‖y−x‖²`.
//! * `alpha`, the gradient lower-bound constant: at every feasible `x`,
//!   `‖∇f(x)‖_* ≥ √(α/2) · √(f(x) − f*)`. Strong convexity with modulus `α`
//!   implies it, but least squares with a wide, full-row-rank matrix
//!   satisfies it without being strongly convex.

use rand::Rng;

use crate::ball::{BallSpec, NormChoice};
use crate::error::{Error, Result};
use crate::linalg::spectral_bounds;
use crate::sampling::{point_in_ball, seeded};
use crate::types::{dot, euclidean, DenseMatrix, DenseVector, Point};

/// Relative eigenvalue floor below which `AAᵀ` counts as singular.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveKind {
    /// `½ (x − center)ᵀ Q (x − center) + offset`, `Q` symmetric PSD.
    Quadratic {
        q: DenseMatrix,
        center: DenseVector,
        offset: f64,
    },
    /// `½ ‖A x − b‖₂²`.
    LeastSquares { a: DenseMatrix, b: DenseVector },
}

/// An objective with its constants. `f_star`, when known, is the optimal
/// value over the feasible set the objective is paired with.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub beta: f64,
    pub alpha: f64,
    pub f_star: Option<f64>,
}

impl ObjectiveSpec {
    /// Quadratic with `beta = λ_max(Q)` and `alpha = λ_min(Q)`.
    pub fn quadratic(q: DenseMatrix, center: DenseVector, offset: f64) -> Result<Self> {
        if !q.is_square() || q.rows() != center.len() {
            return Err(Error::shape(
                format!("{0}x{0} matrix", center.len()),
                format!("{}x{}", q.rows(), q.cols()),
            ));
        }
        if !offset.is_finite() {
            return Err(Error::Domain("offset must be finite".into()));
        }
        let bounds = spectral_bounds(&q)?;
        Self::with_kind(
            ObjectiveKind::Quadratic { q, center, offset },
            bounds.lambda_max,
            bounds.lambda_min,
        )
    }

    /// `½ ‖x − center‖²`: `beta = alpha = 1`.
    pub fn isotropic(center: DenseVector) -> Self {
        let n = center.len();
        ObjectiveSpec {
            kind: ObjectiveKind::Quadratic {
                q: DenseMatrix::identity(n),
                center,
                offset: 0.0,
            },
            beta: 1.0,
            alpha: 1.0,
            f_star: None,
        }
    }

    /// Least squares with `beta = λ_max(AᵀA)`. `alpha` is `4 λ_min(AAᵀ)` when
    /// `A` has more columns than rows and full row rank, otherwise 0.
    pub fn least_squares(a: DenseMatrix, b: DenseVector) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::shape(format!("b of length {}", a.rows()), b.len()));
        }
        let beta = spectral_bounds(&a.gram())?.lambda_max;
        let mut spec = Self::with_kind(ObjectiveKind::LeastSquares { a, b }, beta, 0.0)?;
        spec.alpha = spec.grad_lower_bound_constant().unwrap_or(0.0);
        Ok(spec)
    }

    fn with_kind(kind: ObjectiveKind, beta: f64, alpha: f64) -> Result<Self> {
        if !(beta > 0.0) {
            return Err(Error::DegenerateObjective(format!(
                "smoothness constant {beta} must be positive"
            )));
        }
        Ok(ObjectiveSpec {
            kind,
            beta,
            alpha,
            f_star: None,
        })
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        match &self.kind {
            ObjectiveKind::Quadratic { center, .. } => center.len(),
            ObjectiveKind::LeastSquares { a, .. } => a.cols(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dim() {
            Ok(())
        } else {
            Err(Error::shape(self.dim(), x.len()))
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            ObjectiveKind::Quadratic { q, center, offset } => {
                let d: Vec<f64> = x
                    .iter()
                    .zip(center.as_slice())
                    .map(|(a, b)| a - b)
                    .collect();
                0.5 * dot(&d, &q.matvec(&d)?) + offset
            }
            ObjectiveKind::LeastSquares { a, b } => {
                let r = residual(a, b, x)?;
                0.5 * dot(&r, &r)
            }
        })
    }

    /// `Q(x − center)` or `Aᵀ(Ax − b)`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        match &self.kind {
            ObjectiveKind::Quadratic { q, center, .. } => {
                let d: Vec<f64> = x
                    .iter()
                    .zip(center.as_slice())
                    .map(|(a, b)| a - b)
                    .collect();
                q.matvec(&d)
            }
            ObjectiveKind::LeastSquares { a, b } => a.matvec_transpose(&residual(a, b, x)?),
        }
    }

    /// `λ_max(Q)` or `λ_max(AᵀA)`, recomputed from the payload.
    pub fn smoothness_constant(&self) -> Result<f64> {
        match &self.kind {
            ObjectiveKind::Quadratic { q, .. } => Ok(spectral_bounds(q)?.lambda_max),
            ObjectiveKind::LeastSquares { a, .. } => Ok(spectral_bounds(&a.gram())?.lambda_max),
        }
    }

    /// Gradient lower-bound constant, recomputed from the payload.
    ///
    /// Quadratics return `λ_min(Q)` and need `Q` positive definite. Least
    /// squares returns `4 λ_min(AAᵀ)`: from `‖Aᵀr‖² ≥ λ_min(AAᵀ)‖r‖²` one
    /// gets `‖∇f‖₂² ≥ 2λ_min(AAᵀ)(f(x) − f*)`, and matching
    /// `√(α/2) = √(2λ_min)` gives the factor 4. It needs fewer rows than
    /// columns and full row rank.
    pub fn grad_lower_bound_constant(&self) -> Result<f64> {
        let (lambda_min, lambda_max) = match &self.kind {
            ObjectiveKind::Quadratic { q, .. } => {
                let b = spectral_bounds(q)?;
                (b.lambda_min, b.lambda_max)
            }
            ObjectiveKind::LeastSquares { a, .. } => {
                if a.rows() >= a.cols() {
                    return Err(Error::DegenerateObjective(format!(
                        "least squares needs fewer rows than columns, got {}x{}",
                        a.rows(),
                        a.cols()
                    )));
                }
                let b = spectral_bounds(&a.transpose().gram())?;
                (b.lambda_min, b.lambda_max)
            }
        };
        if lambda_min <= RANK_TOL * lambda_max {
            return Err(Error::DegenerateObjective(format!(
                "smallest eigenvalue {lambda_min:e} is negligible against {lambda_max:e}"
            )));
        }
        Ok(match self.kind {
            ObjectiveKind::Quadratic { .. } => lambda_min,
            ObjectiveKind::LeastSquares { .. } => 4.0 * lambda_min,
        })
    }
}

fn residual(a: &DenseMatrix, b: &DenseVector, x: &[f64]) -> Result<Vec<f64>> {
    let mut r = a.matvec(x)?;
    for (ri, bi) in r.iter_mut().zip(b.as_slice()) {
        *ri -= bi;
    }
    Ok(r)
}

/// Largest relative deviation between the gradient and central finite
/// differences of `eval` at `x`, with step `1e-5 · (1 + ‖x‖)`.
///
/// The deviation of coordinate `i` is `|g_i − fd_i| / (1 + ‖g‖_∞)`.
pub fn finite_difference_error(obj: &ObjectiveSpec, x: &[f64]) -> Result<f64> {
    let g = obj.gradient(x)?;
    let h = 1e-5 * (1.0 + euclidean(x));
    let scale = 1.0 + g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut probe = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = obj.eval(&probe)?;
        probe[i] = x[i] - h;
        let down = obj.eval(&probe)?;
        probe[i] = x[i];
        let fd = (up - down) / (2.0 * h);
        worst = worst.max((g[i] - fd).abs() / scale);
    }
    Ok(worst)
}

/// Count feasible samples violating `‖∇f(x)‖_* ≥ √(α/2)·√(f(x) − f*) − 1e−8`.
///
/// The dual norm is the dual of `reference` for `ball`.
pub fn gradient_bound_violations(
    obj: &ObjectiveSpec,
    ball: &BallSpec,
    alpha: f64,
    f_star: f64,
    samples: usize,
    seed: u64,
    reference: NormChoice,
) -> Result<usize> {
    let mut rng = seeded(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let x = point_in_ball(ball, &mut rng)?;
        let grad = Point::from_raw(x.shape(), obj.gradient(x.entries())?);
        let lhs = ball.dual_norm(&grad, reference)?;
        let gap = (obj.eval(x.entries())? - f_star).max(0.0);
        if lhs < (0.5 * alpha).sqrt() * gap.sqrt() - 1e-8 {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Count sampled feasible pairs violating the quadratic upper model
/// `f(y) ≤ f(x) + ∇f(x)•(y−x) + (β/2)‖y−x‖² + 1e−10·(1 + |f(y)|)`.
pub fn smoothness_violations(
    obj: &ObjectiveSpec,
    ball: &BallSpec,
    beta: f64,
    samples: usize,
    seed: u64,
    reference: NormChoice,
) -> Result<usize> {
    quadratic_model_violations(obj, ball, beta, samples, seed, reference, true)
}

/// Count sampled feasible pairs violating the quadratic lower model
/// `f(y) ≥ f(x) + ∇f(x)•(y−x) + (α/2)‖y−x‖² − 1e−10·(1 + |f(y)|)`.
pub fn strong_convexity_violations(
    obj: &ObjectiveSpec,
    ball: &BallSpec,
    alpha: f64,
    samples: usize,
    seed: u64,
    reference: NormChoice,
) -> Result<usize> {
    quadratic_model_violations(obj, ball, alpha, samples, seed, reference, false)
}

fn quadratic_model_violations(
    obj: &ObjectiveSpec,
    ball: &BallSpec,
    curvature: f64,
    samples: usize,
    seed: u64,
    reference: NormChoice,
    upper: bool,
) -> Result<usize> {
    let mut rng = seeded(seed);
    let mut violations = 0;
    for _ in 0..samples {
        let x = point_in_ball(ball, &mut rng)?;
        let y = point_in_ball(ball, &mut rng)?;
        // pull y toward x sometimes so short chords are exercised too
        let t: f64 = if rng.random::<f64>() < 0.5 {
            1.0
        } else {
            rng.random()
        };
        let y = Point::from_raw(
            y.shape(),
            x.entries()
                .iter()
                .zip(y.entries())
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        );
        let d = Point::from_raw(
            x.shape(),
            y.entries()
                .iter()
                .zip(x.entries())
                .map(|(a, b)| a - b)
                .collect(),
        );
        let fx = obj.eval(x.entries())?;
        let fy = obj.eval(y.entries())?;
        let lin = dot(&obj.gradient(x.entries())?, d.entries());
        let dist = ball.norm(&d, reference)?;
        let model = fx + lin + 0.5 * curvature * dist * dist;
        let slack = 1e-10 * (1.0 + fy.abs());
        let bad = if upper {
            fy > model + slack
        } else {
            fy < model - slack
        };
        if bad {
            violations += 1;
        }
    }
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn eval_examples() {
        let q = ObjectiveSpec::quadratic(DenseMatrix::identity(1), v(&[2.0]), 0.0).unwrap();
        assert_eq!(q.eval(&[2.0]).unwrap(), 0.0);
        let ls = ObjectiveSpec::least_squares(DenseMatrix::identity(2), v(&[1.0, 0.0])).unwrap();
        assert_eq!(ls.eval(&[0.0, 0.0]).unwrap(), 0.5);
        let d =
            ObjectiveSpec::quadratic(DenseMatrix::diag(&[1.0, 4.0]).unwrap(), v(&[0.0, 0.0]), 0.0)
                .unwrap();
        assert_eq!(d.eval(&[1.0, 1.0]).unwrap(), 2.5);
        assert!(d.eval(&[1.0]).is_err());
    }

    #[test]
    fn gradient_examples() {
        let q = ObjectiveSpec::quadratic(DenseMatrix::identity(1), v(&[2.0]), 0.0).unwrap();
        assert_eq!(q.gradient(&[0.0]).unwrap(), vec![-2.0]);
        let ls = ObjectiveSpec::least_squares(DenseMatrix::identity(2), v(&[1.0, 0.0])).unwrap();
        assert_eq!(ls.gradient(&[0.0, 0.0]).unwrap(), vec![-1.0, 0.0]);
        assert!(ls.gradient(&[0.0; 3]).is_err());
    }

    #[test]
    fn constants_examples() {
        let d =
            ObjectiveSpec::quadratic(DenseMatrix::diag(&[1.0, 4.0]).unwrap(), v(&[0.0, 0.0]), 0.0)
                .unwrap();
        assert!((d.smoothness_constant().unwrap() - 4.0).abs() < 1e-8 * 4.0);
        let i = ObjectiveSpec::quadratic(DenseMatrix::identity(3), v(&[0.0; 3]), 1.0).unwrap();
        assert!((i.grad_lower_bound_constant().unwrap() - 1.0).abs() < 1e-12);

        let ls = ObjectiveSpec::least_squares(DenseMatrix::identity(2), v(&[0.0, 0.0])).unwrap();
        assert!((ls.smoothness_constant().unwrap() - 1.0).abs() < 1e-12);

        // A = [e1ᵀ; e2ᵀ] in R^{2×3}: AAᵀ = I, so alpha = 4
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let ls = ObjectiveSpec::least_squares(a, v(&[0.0, 0.0])).unwrap();
        assert!((ls.grad_lower_bound_constant().unwrap() - 4.0).abs() < 1e-10);
        assert_eq!(ls.alpha, ls.grad_lower_bound_constant().unwrap());

        // AAᵀ = diag(0.25, 1): alpha = 1
        let a = DenseMatrix::from_rows(&[vec![0.5, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let ls = ObjectiveSpec::least_squares(a, v(&[0.0, 0.0])).unwrap();
        assert!((ls.grad_lower_bound_constant().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn degenerate_objectives_are_reported() {
        // rank one AAᵀ
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        let ls = ObjectiveSpec::least_squares(a, v(&[0.0, 0.0])).unwrap();
        assert!(matches!(
            ls.grad_lower_bound_constant(),
            Err(Error::DegenerateObjective(_))
        ));
        assert_eq!(ls.alpha, 0.0);
        // tall A
        let ls = ObjectiveSpec::least_squares(DenseMatrix::identity(2), v(&[0.0, 0.0])).unwrap();
        assert!(ls.grad_lower_bound_constant().is_err());
        // singular Q
        let q =
            ObjectiveSpec::quadratic(DenseMatrix::diag(&[1.0, 0.0]).unwrap(), v(&[0.0, 0.0]), 0.0)
                .unwrap();
        assert!(q.grad_lower_bound_constant().is_err());
    }

    #[test]
    fn quadratic_rejects_mismatched_center() {
        assert!(ObjectiveSpec::quadratic(DenseMatrix::identity(2), v(&[0.0]), 0.0).is_err());
        assert!(ObjectiveSpec::least_squares(DenseMatrix::identity(2), v(&[0.0])).is_err());
    }
}
