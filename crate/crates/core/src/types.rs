//! Dense value types shared by every module.
//!
//! Vectors and matrices are distinct types. Matrix-domain feasible sets only
//! accept [`Point::Matrix`], and the solver carries whichever shape the set
//! works in. Objectives see the row-major entries of either shape as a flat
//! coordinate vector.

use std::fmt;

use crate::error::{Error, Result};

fn check_finite(entries: &[f64]) -> Result<()> {
    match entries.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteEntry { index }),
        None => Ok(()),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn euclidean(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A finite real vector of fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<f64>);

impl DenseVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_finite(&entries)?;
        Ok(DenseVector(entries))
    }

    pub fn zeros(len: usize) -> Self {
        DenseVector(vec![0.0; len])
    }

    pub fn filled(len: usize, value: f64) -> Self {
        DenseVector(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &DenseVector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm2(&self) -> f64 {
        euclidean(&self.0)
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// A finite real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::shape("at least 1x1", format!("{rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::shape(
                format!("{} entries for {rows}x{cols}", rows * cols),
                data.len(),
            ));
        }
        check_finite(&data)?;
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::shape(format!("rows of length {cols}"), bad.len()));
        }
        DenseMatrix::new(rows.len(), cols, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        DenseMatrix::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::shape(
                format!("{} rows on the right operand", self.cols),
                other.rows,
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::shape(self.cols, x.len()));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// `Aᵀ y` without forming the transpose.
    pub fn matvec_transpose(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.rows {
            return Err(Error::shape(self.rows, y.len()));
        }
        let mut out = vec![0.0; self.cols];
        for (i, yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * yi;
            }
        }
        Ok(out)
    }

    /// `AᵀA`.
    pub fn gram(&self) -> DenseMatrix {
        self.transpose()
            .matmul(self)
            .expect("transpose shapes always agree")
    }

    pub fn frobenius(&self) -> f64 {
        euclidean(&self.data)
    }

    /// Frobenius inner product `A • B`.
    pub fn inner(&self, other: &DenseMatrix) -> f64 {
        dot(&self.data, &other.data)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// A point of a feasible set: either a vector or a matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Vector(DenseVector),
    Matrix(DenseMatrix),
}

/// Shape descriptor of a [`Point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Vector(usize),
    Matrix(usize, usize),
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Vector(n) => write!(f, "vector of length {n}"),
            Shape::Matrix(m, n) => write!(f, "{m}x{n} matrix"),
        }
    }
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Vector(n) => n,
            Shape::Matrix(m, n) => m * n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Point {
    pub fn shape(&self) -> Shape {
        match self {
            Point::Vector(v) => Shape::Vector(v.len()),
            Point::Matrix(m) => Shape::Matrix(m.rows(), m.cols()),
        }
    }

    /// Flat row-major coordinates.
    pub fn entries(&self) -> &[f64] {
        match self {
            Point::Vector(v) => v.as_slice(),
            Point::Matrix(m) => m.as_slice(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries().is_empty()
    }

    /// A point of the given shape, without a finiteness check.
    pub(crate) fn from_raw(shape: Shape, entries: Vec<f64>) -> Point {
        debug_assert_eq!(shape.len(), entries.len());
        match shape {
            Shape::Vector(_) => Point::Vector(DenseVector(entries)),
            Shape::Matrix(rows, cols) => Point::Matrix(DenseMatrix {
                rows,
                cols,
                data: entries,
            }),
        }
    }

    /// A point of the given shape holding `entries`.
    pub fn with_shape(shape: Shape, entries: Vec<f64>) -> Result<Point> {
        if shape.len() != entries.len() {
            return Err(Error::shape(shape, entries.len()));
        }
        check_finite(&entries)?;
        Ok(Point::from_raw(shape, entries))
    }

    pub fn filled(shape: Shape, value: f64) -> Point {
        Point::from_raw(shape, vec![value; shape.len()])
    }

    pub fn dot(&self, other: &Point) -> f64 {
        dot(self.entries(), other.entries())
    }

    pub fn as_vector(&self) -> Option<&DenseVector> {
        match self {
            Point::Vector(v) => Some(v),
            Point::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&DenseMatrix> {
        match self {
            Point::Matrix(m) => Some(m),
            Point::Vector(_) => None,
        }
    }
}

impl From<DenseVector> for Point {
    fn from(v: DenseVector) -> Self {
        Point::Vector(v)
    }
}

impl From<DenseMatrix> for Point {
    fn from(m: DenseMatrix) -> Self {
        Point::Matrix(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        assert_eq!(
            DenseVector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteEntry { index: 1 })
        );
        assert!(DenseMatrix::new(1, 2, vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn matrix_needs_positive_dims() {
        assert!(DenseMatrix::new(0, 3, vec![]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn matmul_and_transpose_agree() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]]).unwrap();
        let g = a.gram();
        assert_eq!(g.shape(), (3, 3));
        assert_eq!(g.get(0, 0), 17.0);
        assert_eq!(g.get(1, 2), 2.0 * 3.0 + 5.0 * 6.0);
        let y = [1.0, -1.0];
        assert_eq!(
            a.matvec_transpose(&y).unwrap(),
            a.transpose().matvec(&y).unwrap()
        );
    }
}
