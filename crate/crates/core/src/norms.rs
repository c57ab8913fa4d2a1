//! Norms, set strong-convexity parameters, and a sampling falsifier for set
//! strong convexity.
//!
//! A convex set `K` is `α`-strongly convex with respect to `‖·‖` when, for
//! all `x, y ∈ K`, `γ ∈ [0, 1]` and unit `z`,
//!
//! ```text
//! γx + (1 − γ)y + γ(1 − γ)(α/2)‖x − y‖² z  ∈  K,
//! ```
//!
//! i.e. every chord point is surrounded by a ball of radius quadratic in the
//! chord length. [`strong_convexity_parameter`] returns the known constants
//! for the shipped families and [`verify_set_strong_convexity`] tries to
//! falsify a given constant by sampling.

use rand::Rng;

use crate::ball::{membership, BallSpec, NormChoice};
use crate::error::{Error, Result};
use crate::linalg::singular_values;
use crate::sampling::{point_in_ball, seeded, unit_direction};
use crate::types::{DenseMatrix, Point};

/// `(Σ |x_i|^p)^{1/p}` for `p ≥ 1`, computed on entries scaled by the
/// largest magnitude so neither large `p` nor large entries overflow.
pub fn lp_norm(x: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("p = {p} must be at least 1")));
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    if p.is_infinite() {
        return Ok(scale);
    }
    let sum: f64 = if p == 2.0 {
        x.iter().map(|v| (v / scale).powi(2)).sum()
    } else {
        x.iter().map(|v| (v.abs() / scale).powf(p)).sum()
    };
    Ok(scale * sum.powf(1.0 / p))
}

/// `ℓ_p` norm of the singular values.
pub fn schatten_norm(x: &DenseMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("p = {p} must be at least 1")));
    }
    lp_norm(&singular_values(x)?, p)
}

/// `ℓ_p` norm of the vector of row-wise `ℓ_s` norms.
pub fn group_norm(x: &DenseMatrix, s: f64, p: f64) -> Result<f64> {
    let row_norms = (0..x.rows())
        .map(|i| lp_norm(x.row(i), s))
        .collect::<Result<Vec<_>>>()?;
    lp_norm(&row_norms, p)
}

/// Strong-convexity constant of a set with the norm it refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongConvexityParam {
    pub alpha: f64,
    pub reference_norm: NormChoice,
}

/// Strong-convexity constant of each shipped family.
///
/// | family | own norm | Euclidean / Frobenius |
/// |---|---|---|
/// | `ℓ_p` ball | `(p−1)/r` | `(p−1)·n^{1/2−1/p}/r` |
/// | Schatten-`p` ball | `(p−1)/r` | `(p−1)·min(m,n)^{1/2−1/p}/r` |
/// | group `(s,p)` ball | `(s−1)(p−1)/((s+p−2)r)` | `n^{1/s−1/2}·m^{1/p−1/2}` times the own-norm value |
/// | box | 0 | 0 |
///
/// The group Frobenius factor is at least one, so that value exceeds the
/// own-norm constant, whereas comparing the two norms only supports the
/// reciprocal factor `n^{1/2−1/s}·m^{1/2−1/p}`. Prefer the own-norm constant
/// for the group ball.
pub fn strong_convexity_parameter(
    ball: &BallSpec,
    reference_norm: NormChoice,
) -> Result<StrongConvexityParam> {
    ball.validate()?;
    let alpha = match (ball, reference_norm) {
        (BallSpec::Box { .. }, _) => 0.0,
        (BallSpec::Lp { p, radius, .. }, NormChoice::Own)
        | (BallSpec::Schatten { p, radius, .. }, NormChoice::Own) => (p - 1.0) / radius,
        (BallSpec::Lp { p, radius, dim }, NormChoice::Euclidean) => {
            (p - 1.0) * (*dim as f64).powf(0.5 - 1.0 / p) / radius
        }
        (
            BallSpec::Schatten {
                p,
                radius,
                rows,
                cols,
            },
            NormChoice::Euclidean,
        ) => (p - 1.0) * ((*rows).min(*cols) as f64).powf(0.5 - 1.0 / p) / radius,
        (BallSpec::Group { s, p, radius, .. }, NormChoice::Own) => {
            group_own_constant(*s, *p, *radius)
        }
        (
            BallSpec::Group {
                s,
                p,
                radius,
                rows,
                cols,
            },
            NormChoice::Euclidean,
        ) => {
            let factor = (*cols as f64).powf(1.0 / s - 0.5) * (*rows as f64).powf(1.0 / p - 0.5);
            factor * group_own_constant(*s, *p, *radius)
        }
    };
    Ok(StrongConvexityParam {
        alpha,
        reference_norm,
    })
}

fn group_own_constant(s: f64, p: f64, r: f64) -> f64 {
    (s - 1.0) * (p - 1.0) / ((s + p - 2.0) * r)
}

fn perturbed_chord_point(x: &Point, y: &Point, gamma: f64, radius: f64, z: &Point) -> Point {
    let entries = x
        .entries()
        .iter()
        .zip(y.entries())
        .zip(z.entries())
        .map(|((xi, yi), zi)| gamma * xi + (1.0 - gamma) * yi + radius * zi)
        .collect();
    Point::from_raw(x.shape(), entries)
}

fn chord_fails(
    ball: &BallSpec,
    alpha: f64,
    reference: NormChoice,
    x: &Point,
    y: &Point,
    gamma: f64,
    z: &Point,
    tol: f64,
) -> Result<bool> {
    let diff = Point::from_raw(
        x.shape(),
        x.entries()
            .iter()
            .zip(y.entries())
            .map(|(a, b)| a - b)
            .collect(),
    );
    let dist = ball.norm(&diff, reference)?;
    let radius = gamma * (1.0 - gamma) * 0.5 * alpha * dist * dist;
    let candidate = perturbed_chord_point(x, y, gamma, radius, z);
    Ok(!membership(ball, &candidate, tol)?)
}

/// Deterministic face tuples for the box: both corners of a face, their
/// midpoint, pushed along the outward normal. Any `α > 0` beyond the
/// membership tolerance fails them.
fn box_face_tuples(lo: &[f64], hi: &[f64]) -> Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = lo.len();
    let mut tuples = Vec::new();
    if n < 2 {
        return tuples;
    }
    for i in 0..n {
        for (side, normal) in [(hi[i], 1.0), (lo[i], -1.0)] {
            let mut x = lo.to_vec();
            let mut y = hi.to_vec();
            x[i] = side;
            y[i] = side;
            let mut z = vec![0.0; n];
            z[i] = normal;
            tuples.push((x, y, z));
        }
    }
    tuples
}

/// Count sampled tuples `(x, y, γ, z)` whose perturbed chord point leaves
/// the set.
///
/// `x` and `y` come from [`point_in_ball`], `γ` is uniform on `[0, 1]`, and
/// `z` is a Gaussian direction normalised in `reference`, the same norm that
/// measures `‖x − y‖`. Membership uses the relative tolerance `tol`. For the
/// box, the face tuples are checked in addition to the random ones. `α = 0`
/// reduces to plain convexity and never fails.
pub fn verify_set_strong_convexity(
    ball: &BallSpec,
    alpha: f64,
    samples: usize,
    tol: f64,
    seed: u64,
    reference: NormChoice,
) -> Result<usize> {
    ball.validate()?;
    if samples == 0 {
        return Err(Error::Domain("samples must be at least 1".into()));
    }
    if alpha < 0.0 {
        return Err(Error::Domain(format!(
            "alpha = {alpha} must be nonnegative"
        )));
    }
    let mut violations = 0;
    if let BallSpec::Box { lo, hi } = ball {
        for (x, y, z) in box_face_tuples(lo.as_slice(), hi.as_slice()) {
            let shape = ball.shape();
            let (x, y, z) = (
                Point::from_raw(shape, x),
                Point::from_raw(shape, y),
                Point::from_raw(shape, z),
            );
            if chord_fails(ball, alpha, reference, &x, &y, 0.5, &z, tol)? {
                violations += 1;
            }
        }
    }
    let mut rng = seeded(seed);
    for _ in 0..samples {
        let x = point_in_ball(ball, &mut rng)?;
        let y = point_in_ball(ball, &mut rng)?;
        let gamma: f64 = rng.random();
        let z = unit_direction(ball, reference, &mut rng)?;
        if chord_fails(ball, alpha, reference, &x, &y, gamma, &z, tol)? {
            violations += 1;
        }
    }
    Ok(violations)
}
