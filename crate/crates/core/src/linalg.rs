//! Dense kernels: one-sided Jacobi SVD and power-iteration eigenvalue bounds.
//!
//! Both are sized for small dense problems. The SVD is deterministic, and the
//! power iteration uses a fixed start vector, so repeated calls on the same
//! input return bit-identical results.

use crate::error::{Error, Result};
use crate::types::{dot, euclidean, DenseMatrix};

const MAX_SWEEPS: usize = 60;
const MAX_POWER_ITERS: usize = 100_000;
const POWER_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

/// `X = U · Diag(sigma) · Vᵀ` with full square orthogonal factors.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    /// `m × m` orthogonal.
    pub u: DenseMatrix,
    /// `min(m, n)` singular values, descending.
    pub sigma: Vec<f64>,
    /// `n × n` orthogonal.
    pub v: DenseMatrix,
}

impl SvdResult {
    /// `U · Diag(values) · Vᵀ` for any replacement spectrum of the same length.
    pub fn compose(&self, values: &[f64]) -> DenseMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut out = DenseMatrix::zeros(m, n);
        for (k, &s) in values.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let us = self.u.get(i, k) * s;
                if us == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + us * self.v.get(j, k));
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> DenseMatrix {
        self.compose(&self.sigma)
    }
}

/// Largest and smallest eigenvalue of a symmetric PSD matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBounds {
    pub lambda_max: f64,
    pub lambda_min: f64,
}

/// Column-wise one-sided Jacobi. `cols` holds the columns of a tall matrix;
/// `v` accumulates the right rotations. Returns the number of sweeps used.
fn jacobi_sweeps(cols: &mut [Vec<f64>], v: &mut [Vec<f64>]) -> Result<usize> {
    let n = cols.len();
    let m = cols.first().map_or(0, Vec::len);
    let tol = f64::EPSILON * (m.max(4) as f64);
    // columns this small are rounding residue of rotations already done;
    // their direction is noise and would keep the cosine test from settling
    let total: f64 = cols.iter().map(|c| dot(c, c)).sum();
    let negligible = (f64::EPSILON * f64::EPSILON) * total;
    let mut worst = 0.0;
    for sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = dot(&cols[i], &cols[i]);
                let beta = dot(&cols[j], &cols[j]);
                let gamma = dot(&cols[i], &cols[j]);
                if alpha <= negligible || beta <= negligible || gamma == 0.0 {
                    continue;
                }
                let scale = (alpha.sqrt()) * (beta.sqrt());
                let cosine = gamma.abs() / scale;
                if cosine <= tol {
                    continue;
                }
                worst = worst.max(cosine);
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(cols, i, j, c, s);
                rotate(v, i, j, c, s);
                rotated = true;
            }
        }
        if !rotated {
            return Ok(sweep);
        }
    }
    Err(Error::SvdNoConvergence {
        sweeps: MAX_SWEEPS,
        residual: worst,
    })
}

fn rotate(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    let (a, b) = (&mut left[i], &mut right[0]);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xi, yj) = (*x, *y);
        *x = c * xi - s * yj;
        *y = s * xi + c * yj;
    }
}

/// Orthonormal vector in `R^dim` orthogonal to every vector in `basis`.
fn complete_basis(basis: &[Vec<f64>], dim: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..dim {
        let mut w = vec![0.0; dim];
        w[k] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let proj = dot(b, &w);
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let norm = euclidean(&w);
        if norm > 0.5 {
            return w.into_iter().map(|x| x / norm).collect();
        }
        if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
            best = Some((norm, w));
        }
    }
    let (norm, w) = best.expect("dim > basis.len() guarantees a candidate");
    w.into_iter().map(|x| x / norm).collect()
}

/// SVD of a tall (`m ≥ n`) matrix given by its columns.
fn svd_tall(x: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = x.shape();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| x.column(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            e
        })
        .collect();
    jacobi_sweeps(&mut cols, &mut v)?;

    let norms: Vec<f64> = cols.iter().map(|c| euclidean(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let sigma_max = sigma.first().copied().unwrap_or(0.0);

    // Columns whose norm is negligible relative to the largest carry no
    // reliable direction; they are replaced by a completion of the basis.
    let cutoff = sigma_max * 1e-14;
    let mut u_cols: Vec<Option<Vec<f64>>> = vec![None; m];
    for (slot, &k) in order.iter().enumerate() {
        let s = norms[k];
        if s > cutoff && s > 0.0 {
            u_cols[slot] = Some(cols[k].iter().map(|a| a / s).collect());
        }
    }
    for slot in 0..m {
        if u_cols[slot].is_none() {
            let basis: Vec<Vec<f64>> = u_cols.iter().flatten().cloned().collect();
            u_cols[slot] = Some(complete_basis(&basis, m));
        }
    }

    let mut u = DenseMatrix::zeros(m, m);
    for (j, col) in u_cols.into_iter().enumerate() {
        for (i, val) in col.expect("every slot filled").into_iter().enumerate() {
            u.set(i, j, val);
        }
    }
    let mut vm = DenseMatrix::zeros(n, n);
    for (slot, &k) in order.iter().enumerate() {
        for i in 0..n {
            vm.set(i, slot, v[k][i]);
        }
    }
    Ok(SvdResult { u, sigma, v: vm })
}

/// Singular value decomposition by one-sided Jacobi rotations.
///
/// Rotations run on the taller orientation of `x`. A pair of columns is
/// rotated while the cosine of the angle between them exceeds a small
/// multiple of machine epsilon. Singular values come back in descending
/// order. When values tie, any orthonormal basis of the shared subspace
/// is valid.
pub fn svd(x: &DenseMatrix) -> Result<SvdResult> {
    if x.rows() >= x.cols() {
        svd_tall(x)
    } else {
        let t = svd_tall(&x.transpose())?;
        Ok(SvdResult {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        })
    }
}

/// Singular values only.
pub fn singular_values(x: &DenseMatrix) -> Result<Vec<f64>> {
    svd(x).map(|s| s.sigma)
}

fn check_symmetric(s: &DenseMatrix) -> Result<()> {
    if !s.is_square() {
        return Err(Error::shape(
            "square matrix",
            format!("{}x{}", s.rows(), s.cols()),
        ));
    }
    let scale = s.as_slice().iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    let n = s.rows();
    for i in 0..n {
        for j in (i + 1)..n {
            if (s.get(i, j) - s.get(j, i)).abs() > SYMMETRY_TOL * scale {
                return Err(Error::Domain(format!(
                    "matrix is not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Fixed, non-symmetric start vector. A constant vector would be an exact
/// eigenvector of too many structured matrices (circulants, Laplacians).
fn start_vector(n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * 0.618_033_988_749_895).fract())
        .collect();
    let norm = euclidean(&v);
    v.into_iter().map(|x| x / norm).collect()
}

/// Dominant eigenvalue of a PSD operator by power iteration with a
/// residual-based stop.
fn power_iteration(n: usize, apply: impl Fn(&[f64], &mut [f64])) -> f64 {
    let mut v = start_vector(n);
    let mut w = vec![0.0; n];
    let mut theta = 0.0;
    for _ in 0..MAX_POWER_ITERS {
        apply(&v, &mut w);
        theta = dot(&v, &w);
        let wn = euclidean(&w);
        if wn == 0.0 {
            return 0.0;
        }
        let residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - theta * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= POWER_TOL * theta.abs() {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / wn;
        }
    }
    theta
}

/// Extreme eigenvalues of a symmetric PSD matrix.
///
/// `lambda_max` comes from power iteration on `S`, `lambda_min` from power
/// iteration on the shifted matrix `lambda_max·I − S`.
pub fn spectral_bounds(s: &DenseMatrix) -> Result<SpectralBounds> {
    check_symmetric(s)?;
    let n = s.rows();
    let data = s.as_slice();
    let lambda_max = power_iteration(n, |v, w| {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = dot(&data[i * n..(i + 1) * n], v);
        }
    })
    .max(0.0);
    let shifted = power_iteration(n, |v, w| {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = lambda_max * v[i] - dot(&data[i * n..(i + 1) * n], v);
        }
    });
    let lambda_min = (lambda_max - shifted).clamp(0.0, lambda_max);
    Ok(SpectralBounds {
        lambda_max,
        lambda_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orth_defect(q: &DenseMatrix) -> f64 {
        let g = q.transpose().matmul(q).unwrap();
        let n = g.rows();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (g.get(i, j) - target).powi(2);
            }
        }
        acc.sqrt()
    }

    #[test]
    fn rank_one_matrices_converge() {
        let mut rng = crate::sampling::seeded(77);
        for (m, n) in [(4, 3), (3, 4), (5, 5), (8, 2)] {
            for _ in 0..50 {
                let u = crate::sampling::gaussian_vec(&mut rng, m);
                let w = crate::sampling::gaussian_vec(&mut rng, n);
                let data = u
                    .iter()
                    .flat_map(|a| w.iter().map(move |b| a * b))
                    .collect();
                let x = DenseMatrix::new(m, n, data).unwrap();
                let dec = svd(&x).unwrap();
                let expected = euclidean(&u) * euclidean(&w);
                assert!((dec.sigma[0] - expected).abs() < 1e-12 * expected);
                assert!(dec.sigma[1..].iter().all(|s| *s < 1e-12 * expected));
                assert!(orth_defect(&dec.u) < 1e-12 && orth_defect(&dec.v) < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_is_reordered() {
        let x = DenseMatrix::diag(&[3.0, 4.0]).unwrap();
        let s = svd(&x).unwrap();
        assert_eq!(s.sigma, vec![4.0, 3.0]);
    }

    #[test]
    fn zero_matrix_has_zero_spectrum_and_orthogonal_factors() {
        let x = DenseMatrix::zeros(2, 3);
        let s = svd(&x).unwrap();
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert_eq!(s.u.shape(), (2, 2));
        assert_eq!(s.v.shape(), (3, 3));
        assert!(orth_defect(&s.u) < 1e-14);
        assert!(orth_defect(&s.v) < 1e-14);
    }

    #[test]
    fn rank_deficient_factors_stay_orthogonal() {
        // rank one, 4x3
        let x = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.5, 1.0, 1.5],
            vec![-1.0, -2.0, -3.0],
        ])
        .unwrap();
        let s = svd(&x).unwrap();
        assert!(orth_defect(&s.u) <= 1e-10 * 2.0);
        assert!(orth_defect(&s.v) <= 1e-10 * 3f64.sqrt());
        let r = s.reconstruct();
        let err: f64 = r
            .as_slice()
            .iter()
            .zip(x.as_slice())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-10 * x.frobenius());
        assert!(s.sigma[1] < 1e-12 && s.sigma[2] < 1e-12);
    }

    #[test]
    fn wide_matrices_go_through_the_transpose() {
        let x = DenseMatrix::from_rows(&[vec![1.0, 0.0, 2.0], vec![0.0, 3.0, 0.0]]).unwrap();
        let s = svd(&x).unwrap();
        assert_eq!(s.u.shape(), (2, 2));
        assert_eq!(s.v.shape(), (3, 3));
        assert!((s.sigma[0] - 3.0).abs() < 1e-14);
        assert!((s.sigma[1] - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn spectral_bounds_of_simple_matrices() {
        let b = spectral_bounds(&DenseMatrix::identity(3)).unwrap();
        assert!((b.lambda_max - 1.0).abs() < 1e-12 && (b.lambda_min - 1.0).abs() < 1e-12);
        let b = spectral_bounds(&DenseMatrix::diag(&[1.0, 4.0]).unwrap()).unwrap();
        assert!((b.lambda_max - 4.0).abs() < 1e-8 * 4.0);
        assert!((b.lambda_min - 1.0).abs() < 1e-8);
    }

    #[test]
    fn constant_vector_is_not_a_trap() {
        // (1, 1) is the lambda = 1 eigenvector; lambda_max is 3.
        let s = DenseMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        let b = spectral_bounds(&s).unwrap();
        assert!((b.lambda_max - 3.0).abs() < 1e-8 * 3.0);
        assert!((b.lambda_min - 1.0).abs() < 1e-8);
    }

    #[test]
    fn asymmetric_input_is_a_domain_error() {
        let s = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(spectral_bounds(&s), Err(Error::Domain(_))));
        let r = DenseMatrix::zeros(2, 3);
        assert!(matches!(spectral_bounds(&r), Err(Error::Shape { .. })));
    }
}
