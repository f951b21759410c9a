//! Dense row-major matrices over the real or complex field.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};

/// Scalar field of a matrix or frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

/// Relative asymmetry accepted by [`Matrix::check_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix<{:?}> {}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Complex::ZERO; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Complex::ONE;
        }
        m
    }

    /// Builds a matrix from row-major data. Real-field input must have zero imaginary parts.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(FrameError::LengthMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if field == Field::Real {
            if let Some(pos) = data.iter().position(|z| z.im != 0.0) {
                return Err(FrameError::Validation(format!(
                    "real-field matrix has a nonzero imaginary part at ({}, {})",
                    pos / cols.max(1),
                    pos % cols.max(1)
                )));
            }
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let z = f(r, c);
                data.push(if field == Field::Real { Complex::real(z.re) } else { z });
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Real matrix from nested rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(Field::Real, r, c, |i, j| Complex::real(rows[i][j]))
    }

    pub fn diagonal(field: Field, diag: &[Complex]) -> Self {
        let mut m = Matrix::zeros(field, diag.len(), diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = if field == Field::Real { Complex::real(z.re) } else { z };
        }
        m
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, v: &[Complex]) {
        assert_eq!(v.len(), self.rows);
        for (r, &z) in v.iter().enumerate() {
            self[(r, c)] = z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(FrameError::Validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field.join(rhs.field), self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex::ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if v.len() != self.cols {
            return Err(FrameError::LengthMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(FrameError::Validation(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix {
            field: self.field.join(rhs.field),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Adds `alpha * u v*` in place.
    pub fn add_outer(&mut self, alpha: Complex, u: &[Complex], v: &[Complex]) {
        assert_eq!(u.len(), self.rows);
        assert_eq!(v.len(), self.cols);
        for (r, &ur) in u.iter().enumerate() {
            let a = alpha * ur;
            if a == Complex::ZERO {
                continue;
            }
            let row = &mut self.data[r * self.cols..(r + 1) * self.cols];
            for (o, &vc) in row.iter_mut().zip(v) {
                *o += a * vc.conj();
            }
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.abs()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Checks squareness and Hermitian symmetry to [`HERMITIAN_TOL`] relative asymmetry,
    /// naming the worst offending entry.
    pub fn check_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(FrameError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let scale = self.max_abs().max(1e-300);
        let mut worst = (0, 0, 0.0f64);
        for r in 0..self.rows {
            for c in r..self.cols {
                let dev = (self[(r, c)] - self[(c, r)].conj()).abs();
                if dev > worst.2 {
                    worst = (r, c, dev);
                }
            }
        }
        if worst.2 > HERMITIAN_TOL * scale {
            return Err(FrameError::NotHermitian {
                row: worst.0,
                col: worst.1,
                deviation: worst.2,
            });
        }
        Ok(())
    }

    /// Hermitian part `(M + M*)/2`, used to remove rounding asymmetry.
    pub fn hermitian_part(&self) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()).scale(0.5)
        })
    }

    /// Row-major nested representation used for serialization.
    pub fn to_rows(&self) -> Vec<Vec<Complex>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex {
        &mut self.data[r * self.cols + c]
    }
}

pub fn dot(x: &[Complex], y: &[Complex]) -> Complex {
    // <x, y> = sum x_k conj(y_k), linear in the first slot
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

pub fn norm(x: &[Complex]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn axpy(alpha: Complex, x: &[Complex], y: &mut [Complex]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn real_vec(xs: &[f64]) -> Vec<Complex> {
    xs.iter().map(|&x| Complex::real(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_and_product() {
        let m = Matrix::from_fn(Field::Complex, 2, 3, |r, c| Complex::new(r as f64, c as f64));
        let p = m.matmul(&m.adjoint()).unwrap();
        assert!(p.check_hermitian().is_ok());
        assert_eq!(p.rows(), 2);
    }

    #[test]
    fn hermitian_check_names_entry() {
        let m = Matrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[2.0, 1.0, 0.5], &[0.0, 0.0, 1.0]]);
        match m.check_hermitian() {
            Err(FrameError::NotHermitian { row, col, .. }) => assert_eq!((row, col), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
        let r = Matrix::zeros(Field::Real, 2, 3);
        assert!(matches!(r.check_hermitian(), Err(FrameError::NotSquare { .. })));
    }

    #[test]
    fn real_field_rejects_imaginary() {
        let err = Matrix::from_data(Field::Real, 1, 1, vec![Complex::I]);
        assert!(err.is_err());
    }
}
