//! Seeded point and direction samplers over the feasible sets.
//!
//! The samplers aim for coverage, not exact uniformity: they feed
//! falsification checks, which only need to visit the boundary and the
//! interior often enough.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ball::{BallSpec, NormChoice};
use crate::error::Result;
use crate::types::{DenseMatrix, DenseVector, Point, Shape};

/// The generator used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut SeededRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix(rng: &mut SeededRng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, gaussian_vec(rng, rows * cols))
        .expect("gaussian entries are finite")
}

pub fn gaussian_point(rng: &mut SeededRng, shape: Shape) -> Point {
    Point::from_raw(shape, gaussian_vec(rng, shape.len()))
}

fn scaled(point: &Point, factor: f64) -> Point {
    Point::from_raw(
        point.shape(),
        point.entries().iter().map(|x| x * factor).collect(),
    )
}

/// Gaussian direction rescaled to unit length in the chosen norm.
pub fn unit_direction(ball: &BallSpec, choice: NormChoice, rng: &mut SeededRng) -> Result<Point> {
    loop {
        let g = gaussian_point(rng, ball.shape());
        let n = ball.norm(&g, choice)?;
        if n > 0.0 {
            return Ok(scaled(&g, 1.0 / n));
        }
    }
}

/// A feasible point.
///
/// Norm balls: a Gaussian direction normalised to the ball's own norm,
/// scaled by `r · u^{1/dim}`. Box: each coordinate sits on the lower face,
/// the upper face, or uniformly in between, with probabilities ¼, ¼, ½, so
/// faces and corners are visited.
pub fn point_in_ball(ball: &BallSpec, rng: &mut SeededRng) -> Result<Point> {
    match ball {
        BallSpec::Box { lo, hi } => {
            let entries = (0..lo.len())
                .map(|i| {
                    let roll: f64 = rng.random();
                    if roll < 0.25 {
                        lo[i]
                    } else if roll < 0.5 {
                        hi[i]
                    } else {
                        lo[i] + rng.random::<f64>() * (hi[i] - lo[i])
                    }
                })
                .collect();
            Ok(Point::Vector(DenseVector::new(entries)?))
        }
        _ => {
            let r = ball.radius().expect("norm ball");
            let dir = unit_direction(ball, NormChoice::Own, rng)?;
            let u: f64 = rng.random();
            let dim = ball.dimension() as f64;
            Ok(scaled(&dir, r * u.powf(1.0 / dim)))
        }
    }
}
