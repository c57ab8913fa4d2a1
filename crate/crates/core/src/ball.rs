//! Feasible-set descriptors and elementary set queries.

use crate::error::{Error, Result};
use crate::lmo;
use crate::norms::{group_norm, lp_norm, schatten_norm};
use crate::types::{euclidean, DenseVector, Point, Shape};

/// Which norm a set-dependent quantity is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormChoice {
    /// The norm that defines the ball (Euclidean for the box).
    #[default]
    Own,
    /// The Euclidean norm on vectors, Frobenius on matrices.
    Euclidean,
}

/// A feasible set.
///
/// Construct through [`BallSpec::lp`], [`BallSpec::schatten`],
/// [`BallSpec::group`] or [`BallSpec::cube`] to get parameter validation;
/// every operation re-validates anyway.
#[derive(Debug, Clone, PartialEq)]
pub enum BallSpec {
    /// `{x ∈ Rⁿ : ‖x‖_p ≤ r}`.
    Lp { p: f64, radius: f64, dim: usize },
    /// `{X ∈ R^{m×n} : ‖σ(X)‖_p ≤ r}`.
    Schatten {
        p: f64,
        radius: f64,
        rows: usize,
        cols: usize,
    },
    /// `{X ∈ R^{m×n} : ‖(‖X_1‖_s, …, ‖X_m‖_s)‖_p ≤ r}`, rows as groups.
    Group {
        s: f64,
        p: f64,
        radius: f64,
        rows: usize,
        cols: usize,
    },
    /// `{x : lo ≤ x ≤ hi}` elementwise. Convex but not strongly convex.
    Box { lo: DenseVector, hi: DenseVector },
}

fn check_exponent(name: &str, value: f64) -> Result<()> {
    if value > 1.0 && value <= 2.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} = {value} must lie in (1, 2]"
        )))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "radius {r} must be positive and finite"
        )))
    }
}

/// Conjugate exponent `q` with `1/p + 1/q = 1`, for `p ∈ (1, 2]`.
pub fn dual_exponent(p: f64) -> Result<f64> {
    check_exponent("p", p)?;
    Ok(p / (p - 1.0))
}

impl BallSpec {
    pub fn lp(p: f64, radius: f64, dim: usize) -> Result<Self> {
        let ball = BallSpec::Lp { p, radius, dim };
        ball.validate()?;
        Ok(ball)
    }

    pub fn schatten(p: f64, radius: f64, rows: usize, cols: usize) -> Result<Self> {
        let ball = BallSpec::Schatten {
            p,
            radius,
            rows,
            cols,
        };
        ball.validate()?;
        Ok(ball)
    }

    pub fn group(s: f64, p: f64, radius: f64, rows: usize, cols: usize) -> Result<Self> {
        let ball = BallSpec::Group {
            s,
            p,
            radius,
            rows,
            cols,
        };
        ball.validate()?;
        Ok(ball)
    }

    pub fn cube(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let ball = BallSpec::Box {
            lo: DenseVector::new(lo)?,
            hi: DenseVector::new(hi)?,
        };
        ball.validate()?;
        Ok(ball)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BallSpec::Lp { p, radius, dim } => {
                check_exponent("p", *p)?;
                check_radius(*radius)?;
                if *dim == 0 {
                    return Err(Error::shape("dimension ≥ 1", 0));
                }
            }
            BallSpec::Schatten {
                p,
                radius,
                rows,
                cols,
            } => {
                check_exponent("p", *p)?;
                check_radius(*radius)?;
                if *rows == 0 || *cols == 0 {
                    return Err(Error::shape(
                        "positive matrix dimensions",
                        format!("{rows}x{cols}"),
                    ));
                }
            }
            BallSpec::Group {
                s,
                p,
                radius,
                rows,
                cols,
            } => {
                check_exponent("s", *s)?;
                check_exponent("p", *p)?;
                check_radius(*radius)?;
                if *rows == 0 || *cols == 0 {
                    return Err(Error::shape(
                        "positive matrix dimensions",
                        format!("{rows}x{cols}"),
                    ));
                }
            }
            BallSpec::Box { lo, hi } => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(Error::shape(
                        format!("non-empty bounds of equal length ({})", lo.len()),
                        hi.len(),
                    ));
                }
                if let Some(i) = (0..lo.len()).find(|&i| lo[i] >= hi[i]) {
                    return Err(Error::Domain(format!(
                        "box bound {i}: lo {} must be below hi {}",
                        lo[i], hi[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> Shape {
        match self {
            BallSpec::Lp { dim, .. } => Shape::Vector(*dim),
            BallSpec::Box { lo, .. } => Shape::Vector(lo.len()),
            BallSpec::Schatten { rows, cols, .. } | BallSpec::Group { rows, cols, .. } => {
                Shape::Matrix(*rows, *cols)
            }
        }
    }

    /// Number of real coordinates.
    pub fn dimension(&self) -> usize {
        self.shape().len()
    }

    /// Radius of a norm ball; `None` for the box.
    pub fn radius(&self) -> Option<f64> {
        match self {
            BallSpec::Lp { radius, .. }
            | BallSpec::Schatten { radius, .. }
            | BallSpec::Group { radius, .. } => Some(*radius),
            BallSpec::Box { .. } => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            BallSpec::Lp { .. } => "lp",
            BallSpec::Schatten { .. } => "schatten",
            BallSpec::Group { .. } => "group",
            BallSpec::Box { .. } => "box",
        }
    }

    pub fn check_shape(&self, point: &Point) -> Result<()> {
        let expected = self.shape();
        if point.shape() == expected {
            Ok(())
        } else {
            Err(Error::shape(expected, point.shape()))
        }
    }

    /// The set's defining norm of `point` (Euclidean for the box).
    pub fn own_norm(&self, point: &Point) -> Result<f64> {
        self.check_shape(point)?;
        match (self, point) {
            (BallSpec::Lp { p, .. }, Point::Vector(v)) => lp_norm(v.as_slice(), *p),
            (BallSpec::Schatten { p, .. }, Point::Matrix(m)) => schatten_norm(m, *p),
            (BallSpec::Group { s, p, .. }, Point::Matrix(m)) => group_norm(m, *s, *p),
            (BallSpec::Box { .. }, Point::Vector(v)) => Ok(v.norm2()),
            _ => unreachable!("shape checked above"),
        }
    }

    /// Dual of the defining norm: `ℓ_q`, Schatten-`q`, or group `(z, q)`.
    pub fn own_dual_norm(&self, point: &Point) -> Result<f64> {
        self.check_shape(point)?;
        match (self, point) {
            (BallSpec::Lp { p, .. }, Point::Vector(v)) => lp_norm(v.as_slice(), dual_exponent(*p)?),
            (BallSpec::Schatten { p, .. }, Point::Matrix(m)) => {
                schatten_norm(m, dual_exponent(*p)?)
            }
            (BallSpec::Group { s, p, .. }, Point::Matrix(m)) => {
                group_norm(m, dual_exponent(*s)?, dual_exponent(*p)?)
            }
            (BallSpec::Box { .. }, Point::Vector(v)) => Ok(v.norm2()),
            _ => unreachable!("shape checked above"),
        }
    }

    pub fn norm(&self, point: &Point, choice: NormChoice) -> Result<f64> {
        match choice {
            NormChoice::Own => self.own_norm(point),
            NormChoice::Euclidean => {
                self.check_shape(point)?;
                Ok(euclidean(point.entries()))
            }
        }
    }

    pub fn dual_norm(&self, point: &Point, choice: NormChoice) -> Result<f64> {
        match choice {
            NormChoice::Own => self.own_dual_norm(point),
            NormChoice::Euclidean => {
                self.check_shape(point)?;
                Ok(euclidean(point.entries()))
            }
        }
    }

    /// `argmin_{y ∈ K} y • c`.
    pub fn lmo(&self, c: &Point) -> Result<Point> {
        self.check_shape(c)?;
        match (self, c) {
            (BallSpec::Lp { p, radius, .. }, Point::Vector(v)) => {
                lmo::lmo_lp(v, *p, *radius).map(Point::Vector)
            }
            (BallSpec::Schatten { p, radius, .. }, Point::Matrix(m)) => {
                lmo::lmo_schatten(m, *p, *radius).map(Point::Matrix)
            }
            (BallSpec::Group { s, p, radius, .. }, Point::Matrix(m)) => {
                lmo::lmo_group(m, *s, *p, *radius).map(Point::Matrix)
            }
            (BallSpec::Box { lo, hi }, Point::Vector(v)) => {
                lmo::lmo_box(v, lo, hi).map(Point::Vector)
            }
            _ => unreachable!("shape checked above"),
        }
    }

    /// `−min_{y ∈ K} y • c`, the support function at `−c`. Equals
    /// `r · ‖c‖_*` for the norm balls.
    pub fn support(&self, c: &Point) -> Result<f64> {
        self.check_shape(c)?;
        match self {
            BallSpec::Box { lo, hi } => Ok(-c
                .entries()
                .iter()
                .enumerate()
                .map(|(i, ci)| (lo[i] * ci).min(hi[i] * ci))
                .sum::<f64>()),
            _ => Ok(self.radius().expect("norm ball") * self.own_dual_norm(c)?),
        }
    }

    /// Default starting point: the oracle's answer to the all-ones objective.
    pub fn default_start(&self) -> Result<Point> {
        self.validate()?;
        self.lmo(&Point::filled(self.shape(), 1.0))
    }
}

/// Whether `point` lies in `ball`, with the radius inflated by `1 + tol`.
///
/// For the box each side is widened by `tol` times its half-width.
pub fn membership(ball: &BallSpec, point: &Point, tol: f64) -> Result<bool> {
    ball.validate()?;
    ball.check_shape(point)?;
    match ball {
        BallSpec::Box { lo, hi } => Ok(point.entries().iter().enumerate().all(|(i, &x)| {
            let slack = tol * 0.5 * (hi[i] - lo[i]);
            x >= lo[i] - slack && x <= hi[i] + slack
        })),
        _ => {
            let r = ball.radius().expect("norm ball");
            Ok(ball.own_norm(point)? <= r * (1.0 + tol))
        }
    }
}

/// Diameter `max_{x,y ∈ K} ‖x − y‖`.
///
/// For the three norm families it is `2r` in the own norm, and also `2r` in
/// the Euclidean norm because `‖v‖₂ ≤ ‖v‖_p` for `p ≤ 2` (attained on
/// antipodal axis points). For the box both choices give `‖hi − lo‖₂`.
pub fn diameter(ball: &BallSpec, _choice: NormChoice) -> Result<f64> {
    ball.validate()?;
    Ok(match ball {
        BallSpec::Box { lo, hi } => lo
            .as_slice()
            .iter()
            .zip(hi.as_slice())
            .map(|(l, h)| (h - l).powi(2))
            .sum::<f64>()
            .sqrt(),
        _ => 2.0 * ball.radius().expect("norm ball"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::DenseMatrix;

    fn vec_point(v: &[f64]) -> Point {
        Point::Vector(DenseVector::new(v.to_vec()).unwrap())
    }

    #[test]
    fn dual_exponent_examples() {
        assert_eq!(dual_exponent(2.0).unwrap(), 2.0);
        assert!((dual_exponent(1.5).unwrap() - 3.0).abs() < 1e-15);
        assert!((dual_exponent(1.25).unwrap() - 5.0).abs() < 1e-15);
        assert!(dual_exponent(1.0).is_err());
        assert!(dual_exponent(2.5).is_err());
    }

    #[test]
    fn membership_examples() {
        let ball = BallSpec::lp(2.0, 1.0, 2).unwrap();
        assert!(membership(&ball, &vec_point(&[0.6, 0.8]), 1e-9).unwrap());
        assert!(!membership(&ball, &vec_point(&[1.0, 1.0]), 1e-9).unwrap());

        let sball = BallSpec::schatten(1.5, 1.0, 2, 2).unwrap();
        let x = Point::Matrix(DenseMatrix::diag(&[0.5, 0.5]).unwrap());
        assert!(membership(&sball, &x, 1e-9).unwrap());
    }

    #[test]
    fn membership_rejects_wrong_shape() {
        let ball = BallSpec::schatten(1.5, 1.0, 2, 2).unwrap();
        assert!(matches!(
            membership(&ball, &vec_point(&[0.0; 4]), 1e-9),
            Err(Error::Shape { .. })
        ));
        let lp = BallSpec::lp(1.5, 1.0, 3).unwrap();
        assert!(membership(&lp, &vec_point(&[0.0; 2]), 1e-9).is_err());
    }

    #[test]
    fn box_membership_uses_half_width_slack() {
        let b = BallSpec::cube(vec![-1.0, 0.0], vec![1.0, 2.0]).unwrap();
        assert!(membership(&b, &vec_point(&[1.0, 2.0]), 1e-9).unwrap());
        assert!(membership(&b, &vec_point(&[1.0 + 5e-10, 0.0]), 1e-9).unwrap());
        assert!(!membership(&b, &vec_point(&[1.0, 2.1]), 1e-9).unwrap());
    }

    #[test]
    fn diameter_examples() {
        let lp = BallSpec::lp(1.5, 2.0, 10).unwrap();
        assert_eq!(diameter(&lp, NormChoice::Own).unwrap(), 4.0);
        assert_eq!(diameter(&lp, NormChoice::Euclidean).unwrap(), 4.0);
        let b = BallSpec::cube(vec![-1.0; 2], vec![1.0; 2]).unwrap();
        assert!((diameter(&b, NormChoice::Euclidean).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constructors_validate() {
        assert!(BallSpec::lp(1.0, 1.0, 2).is_err());
        assert!(BallSpec::lp(1.5, 0.0, 2).is_err());
        assert!(BallSpec::group(1.5, 2.5, 1.0, 2, 2).is_err());
        assert!(BallSpec::cube(vec![0.0], vec![0.0]).is_err());
        assert!(BallSpec::cube(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn default_start_is_extreme_and_feasible() {
        let lp = BallSpec::lp(2.0, 1.0, 4).unwrap();
        let x = lp.default_start().unwrap();
        assert!((lp.own_norm(&x).unwrap() - 1.0).abs() < 1e-12);
        let b = BallSpec::cube(vec![-1.0, -2.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(b.default_start().unwrap().entries(), &[-1.0, -2.0]);
    }
}
