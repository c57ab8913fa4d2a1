//! Closed-form linear minimization oracles `argmin_{y ∈ K} y • c`.
//!
//! Each norm-ball oracle attains Hölder's inequality with equality: the
//! returned point sits on the boundary and `y • c = −r‖c‖_*`. Powers are
//! taken on entries divided by the largest magnitude, which keeps every base
//! in `[0, 1]` even when the dual exponent is large.
//!
//! A zero objective returns the zero point (feasible, and every feasible
//! point is optimal).

use crate::ball::dual_exponent;
use crate::error::{Error, Result};
use crate::linalg::svd;
use crate::norms::lp_norm;
use crate::types::{DenseMatrix, DenseVector};

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "radius {r} must be positive and finite"
        )))
    }
}

/// Fill `out` with `−r · sgn(c_i)(|c_i| / ‖c‖_q)^{q−1}`.
fn lp_direction(c: &[f64], q: f64, r: f64, out: &mut [f64]) -> Result<()> {
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        out.iter_mut().for_each(|o| *o = 0.0);
        return Ok(());
    }
    let dual = lp_norm(c, q)? / scale;
    for (o, ci) in out.iter_mut().zip(c) {
        let ratio = ci.abs() / scale / dual;
        *o = -r * ci.signum() * ratio.powf(q - 1.0);
        if *ci == 0.0 {
            *o = 0.0;
        }
    }
    Ok(())
}

/// Oracle for `{x : ‖x‖_p ≤ r}`:
/// `x_i = −r · sgn(c_i)|c_i|^{q−1} / ‖c‖_q^{q−1}`.
pub fn lmo_lp(c: &DenseVector, p: f64, r: f64) -> Result<DenseVector> {
    if c.is_empty() {
        return Err(Error::shape("non-empty objective", 0));
    }
    let q = dual_exponent(p)?;
    check_radius(r)?;
    let mut out = vec![0.0; c.len()];
    lp_direction(c.as_slice(), q, r, &mut out)?;
    DenseVector::new(out)
}

/// Oracle for the Schatten-`p` ball: with `C = UΣVᵀ`, returns
/// `U · Diag(σ) · Vᵀ` where `σ_i = −r · σ_i(C)^{q−1} / ‖σ(C)‖_q^{q−1}`.
///
/// The result is basis independent: tied singular values map to equal
/// entries of `σ`.
pub fn lmo_schatten(c: &DenseMatrix, p: f64, r: f64) -> Result<DenseMatrix> {
    let q = dual_exponent(p)?;
    check_radius(r)?;
    let dec = svd(c)?;
    let mut spectrum = vec![0.0; dec.sigma.len()];
    lp_direction(&dec.sigma, q, r, &mut spectrum)?;
    Ok(dec.compose(&spectrum))
}

/// Oracle for the group `(s, p)` ball:
/// `X_ij = −r · sgn(C_ij)|C_ij|^{z−1} / (‖C‖_{z,q}^{q−1} ‖C_i‖_z^{z−q})`
/// with `1/s + 1/z = 1` and `1/p + 1/q = 1`.
///
/// Evaluated as `−r (‖C_i‖_z/‖C‖_{z,q})^{q−1} · sgn(C_ij)(|C_ij|/‖C_i‖_z)^{z−1}`,
/// which is the same quantity with every base in `[0, 1]`. Zero rows of `C`
/// give zero rows, the continuous limit of the formula.
pub fn lmo_group(c: &DenseMatrix, s: f64, p: f64, r: f64) -> Result<DenseMatrix> {
    let z = dual_exponent(s)?;
    let q = dual_exponent(p)?;
    check_radius(r)?;
    let row_norms = (0..c.rows())
        .map(|i| lp_norm(c.row(i), z))
        .collect::<Result<Vec<_>>>()?;
    let row_budget = {
        // per-row ℓ_s radius: r (‖C_i‖_z / ‖C‖_{z,q})^{q−1}
        let mut b = vec![0.0; c.rows()];
        lp_direction(&row_norms, q, r, &mut b)?;
        b.into_iter().map(|v| -v).collect::<Vec<_>>()
    };
    let mut out = DenseMatrix::zeros(c.rows(), c.cols());
    let mut row = vec![0.0; c.cols()];
    for i in 0..c.rows() {
        if row_norms[i] == 0.0 {
            continue;
        }
        lp_direction(c.row(i), z, row_budget[i], &mut row)?;
        for (j, v) in row.iter().enumerate() {
            out.set(i, j, *v);
        }
    }
    Ok(out)
}

/// Oracle for the box: `lo_i` where `c_i ≥ 0`, `hi_i` where `c_i < 0`.
pub fn lmo_box(c: &DenseVector, lo: &DenseVector, hi: &DenseVector) -> Result<DenseVector> {
    if c.len() != lo.len() || lo.len() != hi.len() {
        return Err(Error::shape(lo.len(), c.len()));
    }
    let out = c
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, ci)| if *ci < 0.0 { hi[i] } else { lo[i] })
        .collect();
    DenseVector::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{group_norm, schatten_norm};

    fn v(x: &[f64]) -> DenseVector {
        DenseVector::new(x.to_vec()).unwrap()
    }

    const TWO_M2_3: f64 = 0.629_960_524_947_436_6; // 2^(−2/3)

    #[test]
    fn lp_examples() {
        let x = lmo_lp(&v(&[3.0, 4.0]), 2.0, 1.0).unwrap();
        assert!((x[0] + 0.6).abs() < 1e-15 && (x[1] + 0.8).abs() < 1e-15);
        let x = lmo_lp(&v(&[1.0, 1.0]), 1.5, 1.0).unwrap();
        assert!((x[0] + TWO_M2_3).abs() < 1e-15 && (x[1] + TWO_M2_3).abs() < 1e-15);
        assert_eq!(
            lmo_lp(&v(&[0.0, 0.0]), 1.5, 1.0).unwrap().as_slice(),
            &[0.0, 0.0]
        );
        assert!(lmo_lp(&DenseVector::zeros(0), 1.5, 1.0).is_err());
        assert!(lmo_lp(&v(&[1.0]), 2.5, 1.0).is_err());
    }

    #[test]
    fn lp_handles_p_near_one() {
        let c = v(&[1e3, -2.0, 1e-3, 0.0]);
        let x = lmo_lp(&c, 1.02, 3.0).unwrap();
        assert!((lp_norm(x.as_slice(), 1.02).unwrap() - 3.0).abs() < 1e-9 * 3.0);
        let q = dual_exponent(1.02).unwrap();
        let target = -3.0 * lp_norm(c.as_slice(), q).unwrap();
        assert!((x.dot(&c) - target).abs() < 1e-9 * target.abs());
        assert_eq!(x[3], 0.0);
    }

    #[test]
    fn schatten_examples() {
        let c = DenseMatrix::diag(&[3.0, 4.0]).unwrap();
        let x = lmo_schatten(&c, 2.0, 1.0).unwrap();
        assert!((x.get(0, 0) + 0.6).abs() < 1e-14 && (x.get(1, 1) + 0.8).abs() < 1e-14);
        assert!(x.get(0, 1).abs() < 1e-14 && x.get(1, 0).abs() < 1e-14);

        let c = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let x = lmo_schatten(&c, 1.5, 1.0).unwrap();
        let expected = [0.0, -1.0, 0.0, 0.0];
        for (a, b) in x.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((x.inner(&c) + 1.0).abs() < 1e-14);
        assert!((schatten_norm(&x, 1.5).unwrap() - 1.0).abs() < 1e-12);

        let zero = lmo_schatten(&DenseMatrix::zeros(2, 3), 1.5, 1.0).unwrap();
        assert!(zero.as_slice().iter().all(|e| *e == 0.0));
    }

    #[test]
    fn group_examples() {
        let c = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let x = lmo_group(&c, 2.0, 2.0, 1.0).unwrap();
        for (a, b) in x.as_slice().iter().zip(c.as_slice()) {
            assert!((a + b / 5.0).abs() < 1e-15);
        }

        let c = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let x = lmo_group(&c, 1.5, 1.5, 1.0).unwrap();
        let expected = [-TWO_M2_3, -TWO_M2_3, 0.0, 0.0];
        for (a, b) in x.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        // X • C = −2^(1/3) = −‖C‖_{3,3}
        assert!((x.inner(&c) + 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert!((group_norm(&x, 1.5, 1.5).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn group_zero_rows_stay_zero() {
        let c = DenseMatrix::from_rows(&[vec![0.0, 0.0, 0.0], vec![1.0, -2.0, 0.5]]).unwrap();
        let x = lmo_group(&c, 1.3, 1.8, 2.0).unwrap();
        assert!(x.row(0).iter().all(|e| *e == 0.0));
        assert!((group_norm(&x, 1.3, 1.8).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn box_examples() {
        let lo = v(&[-1.0, -1.0]);
        let hi = v(&[1.0, 1.0]);
        assert_eq!(
            lmo_box(&v(&[1.0, -2.0]), &lo, &hi).unwrap().as_slice(),
            &[-1.0, 1.0]
        );
        assert_eq!(
            lmo_box(&v(&[0.0, 0.0]), &lo, &hi).unwrap().as_slice(),
            lo.as_slice()
        );
        assert_eq!(
            lmo_box(&v(&[5.0]), &v(&[2.0]), &v(&[3.0]))
                .unwrap()
                .as_slice(),
            &[2.0]
        );
        assert!(lmo_box(&v(&[1.0]), &lo, &hi).is_err());
    }
}
