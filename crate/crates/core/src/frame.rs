//! Frame data model: synthesis/analysis maps, frame operator, Gramian,
//! subset operators, optimal frame bounds and structural classification.

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::matrix::{dot, norm, Field, Matrix};
use crate::spectral::{self, SpectralSummary};

/// Default relative cutoff below which eigenvalues of `S` count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// A finite family of `count` vectors in a `dim`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    field: Field,
    dim: usize,
    vectors: Vec<Vec<Complex>>,
    labels: Option<Vec<String>>,
}

impl FrameMatrix {
    pub fn new(field: Field, dim: usize, vectors: Vec<Vec<Complex>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(FrameError::Validation("a frame needs at least one vector".into()));
        }
        if dim == 0 {
            return Err(FrameError::Validation("ambient dimension must be positive".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(FrameError::Validation(format!(
                    "vector {i} has length {} but dim is {dim}",
                    v.len()
                )));
            }
            if let Some(k) = v.iter().position(|z| !z.is_finite()) {
                return Err(FrameError::Validation(format!("vector {i} entry {k} is not finite")));
            }
            if field == Field::Real {
                if let Some(k) = v.iter().position(|z| z.im != 0.0) {
                    return Err(FrameError::Validation(format!(
                        "vector {i} entry {k} has an imaginary part in a real-field frame"
                    )));
                }
            }
        }
        Ok(FrameMatrix {
            field,
            dim,
            vectors,
            labels: None,
        })
    }

    pub fn from_real(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let vectors = vectors
            .into_iter()
            .map(|v| v.into_iter().map(Complex::real).collect())
            .collect();
        FrameMatrix::new(Field::Real, dim, vectors)
    }

    /// Frame whose vectors are the columns of `m`.
    pub fn from_columns(m: &Matrix) -> Result<Self> {
        FrameMatrix::new(m.field(), m.rows(), (0..m.cols()).map(|c| m.column(c)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.count() {
            return Err(FrameError::LengthMismatch {
                expected: self.count(),
                actual: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    pub fn vector(&self, i: usize) -> &[Complex] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Complex>] {
        &self.vectors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| norm(v)).collect()
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.vectors[i].iter().all(|z| *z == Complex::ZERO)
    }

    /// Indices of exactly-zero vectors.
    pub fn zero_indices(&self) -> Vec<usize> {
        (0..self.count()).filter(|&i| self.is_zero(i)).collect()
    }

    /// Subfamily with the listed indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<FrameMatrix> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.count()) {
            return Err(FrameError::Validation(format!("index {bad} out of range")));
        }
        let mut f = FrameMatrix::new(self.field, self.dim, indices.iter().map(|&i| self.vectors[i].clone()).collect())?;
        if let Some(labels) = &self.labels {
            f.labels = Some(indices.iter().map(|&i| labels[i].clone()).collect());
        }
        Ok(f)
    }

    /// Applies `op` to every vector.
    pub fn map_vectors(&self, op: &Matrix) -> Result<FrameMatrix> {
        let vectors = self.vectors.iter().map(|v| op.mul_vec(v)).collect::<Result<Vec<_>>>()?;
        FrameMatrix::new(self.field.join(op.field()), op.rows(), vectors)
    }

    /// Synthesis operator `T` as a `dim x count` matrix.
    pub fn synthesis_matrix(&self) -> Matrix {
        Matrix::from_fn(self.field, self.dim, self.count(), |r, c| self.vectors[c][r])
    }

    /// `sum_i c_i phi_i`.
    pub fn synthesis_apply(&self, coefficients: &[Complex]) -> Result<Vec<Complex>> {
        if coefficients.len() != self.count() {
            return Err(FrameError::LengthMismatch {
                expected: self.count(),
                actual: coefficients.len(),
            });
        }
        let mut out = vec![Complex::ZERO; self.dim];
        for (v, &c) in self.vectors.iter().zip(coefficients) {
            for (o, &z) in out.iter_mut().zip(v) {
                *o += c * z;
            }
        }
        Ok(out)
    }

    /// `{<x, phi_i>}`.
    pub fn analysis_apply(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        if x.len() != self.dim {
            return Err(FrameError::LengthMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(self.vectors.iter().map(|v| dot(x, v)).collect())
    }

    /// `T diag(w) T* = sum_i w_i phi_i phi_i*`.
    pub fn weighted_operator(&self, weights: &[f64]) -> Result<Matrix> {
        if weights.len() != self.count() {
            return Err(FrameError::LengthMismatch {
                expected: self.count(),
                actual: weights.len(),
            });
        }
        let mut s = Matrix::zeros(self.field, self.dim, self.dim);
        for (v, &w) in self.vectors.iter().zip(weights) {
            if w != 0.0 {
                s.add_outer(Complex::real(w), v, v);
            }
        }
        Ok(s)
    }

    /// `S = T T*`.
    pub fn frame_operator(&self) -> Matrix {
        self.weighted_operator(&vec![1.0; self.count()]).expect("lengths agree")
    }

    /// `G = T* T`, with `G_ij = <phi_j, phi_i>`.
    pub fn gramian(&self) -> Matrix {
        let n = self.count();
        Matrix::from_fn(self.field, n, n, |i, j| dot(&self.vectors[j], &self.vectors[i]))
    }

    /// `S_sigma = sum_{i in sigma} phi_i phi_i*`.
    pub fn subset_operator(&self, mask: &SubsetMask) -> Result<Matrix> {
        if mask.len() != self.count() {
            return Err(FrameError::LengthMismatch {
                expected: self.count(),
                actual: mask.len(),
            });
        }
        self.weighted_operator(&mask.indicator())
    }

    /// Nonzero-spectrum of `S`, computed from whichever of `S` and `G` is smaller.
    pub fn operator_eigenvalues(&self) -> Vec<f64> {
        let m = if self.dim <= self.count() { self.frame_operator() } else { self.gramian() };
        spectral::eigenvalues_unchecked(&m)
    }

    /// Optimal frame bounds on the span of the family.
    pub fn frame_bounds(&self, tol: f64) -> Result<FrameBounds> {
        if (0..self.count()).all(|i| self.is_zero(i)) {
            return Err(FrameError::EmptySpan);
        }
        FrameBounds::from_spectrum(&self.operator_eigenvalues(), self.dim, tol)
    }

    /// Eigen-decomposition of `S` restricted to its range.
    pub fn range_basis(&self, tol: f64) -> Result<RangeBasis> {
        RangeBasis::new(&self.frame_operator(), tol)
    }

    /// Moore-Penrose pseudo-inverse of `S`.
    pub fn pseudo_inverse(&self, tol: f64) -> Result<Matrix> {
        Ok(self.range_basis(tol)?.pseudo_inverse())
    }

    pub fn classify(&self, tol: f64) -> Result<FrameClass> {
        let bounds = self.frame_bounds(tol)?;
        let sq: Vec<f64> = self.norms().iter().map(|x| x * x).collect();
        let max_sq = sq.iter().copied().fold(0.0, f64::max);
        let scale = max_sq.max(f64::MIN_POSITIVE);
        let min_sq = sq.iter().copied().fold(f64::INFINITY, f64::min);
        let equal_norm = max_sq - min_sq <= tol * scale;

        let n = self.count();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                let a = dot(&self.vectors[i], &self.vectors[j]).abs();
                lo = lo.min(a);
                hi = hi.max(a);
            }
        }
        // a single vector has no pairs and is not called equiangular
        let equiangular = n >= 2 && hi - lo <= tol * scale && lo > tol * scale;

        let tight = bounds.upper - bounds.lower <= tol * bounds.upper;
        let parseval = tight && (bounds.lower - 1.0).abs() <= tol && (bounds.upper - 1.0).abs() <= tol;
        Ok(FrameClass {
            equal_norm,
            equiangular,
            tight,
            parseval,
            spanning: bounds.spanning,
        })
    }
}

/// Optimal frame bounds on the span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub rank: usize,
    pub spanning: bool,
}

impl FrameBounds {
    /// Bounds from the spectrum of a frame (or Gram) operator: `B = lambda_max`, `A` the
    /// smallest eigenvalue above `tol * lambda_max`.
    pub fn from_spectrum(eigenvalues: &[f64], dim: usize, tol: f64) -> Result<Self> {
        let upper = eigenvalues.iter().copied().fold(0.0, f64::max);
        if upper <= 0.0 {
            return Err(FrameError::EmptySpan);
        }
        let cutoff = tol * upper;
        let nonzero: Vec<f64> = eigenvalues.iter().copied().filter(|&l| l > cutoff).collect();
        let lower = nonzero.iter().copied().fold(f64::INFINITY, f64::min);
        let rank = nonzero.len();
        Ok(FrameBounds {
            lower,
            upper,
            rank,
            spanning: rank == dim,
        })
    }

    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }

    /// `sqrt(B/A)`, the universal bound on every unconditional constant.
    pub fn sqrt_ratio(&self) -> f64 {
        self.ratio().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameClass {
    pub equal_norm: bool,
    pub equiangular: bool,
    pub tight: bool,
    pub parseval: bool,
    pub spanning: bool,
}

/// Orthonormal basis of `range(S)` with the matching nonzero eigenvalues.
#[derive(Debug, Clone)]
pub struct RangeBasis {
    /// `dim x rank`, orthonormal columns.
    pub basis: Matrix,
    /// Ascending, all strictly positive.
    pub values: Vec<f64>,
    pub spectrum: SpectralSummary,
}

impl RangeBasis {
    pub fn new(s: &Matrix, tol: f64) -> Result<Self> {
        let spectrum = spectral::hermitian_eig(&s.hermitian_part(), 1e-9)?;
        let top = spectrum.max();
        if top <= 0.0 {
            return Err(FrameError::EmptySpan);
        }
        let keep: Vec<usize> = (0..spectrum.eigenvalues.len())
            .filter(|&k| spectrum.eigenvalues[k] > tol * top)
            .collect();
        let basis = Matrix::from_fn(s.field(), s.rows(), keep.len(), |r, c| spectrum.eigenvectors[(r, keep[c])]);
        let values = keep.iter().map(|&k| spectrum.eigenvalues[k]).collect();
        Ok(RangeBasis { basis, values, spectrum })
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `U f(Lambda) U*`.
    pub fn functional(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let d = self.basis.rows();
        let mut m = Matrix::zeros(self.basis.field(), d, d);
        for (k, &l) in self.values.iter().enumerate() {
            let u = self.basis.column(k);
            m.add_outer(Complex::real(f(l)), &u, &u);
        }
        m
    }

    pub fn pseudo_inverse(&self) -> Matrix {
        self.functional(|l| 1.0 / l)
    }

    pub fn projection(&self) -> Matrix {
        self.functional(|_| 1.0)
    }

    /// Coordinates `U* x` of `x` in the range basis.
    pub fn coordinates(&self, x: &[Complex]) -> Vec<Complex> {
        (0..self.rank()).map(|k| dot(x, &self.basis.column(k))).collect()
    }

    /// `U c`.
    pub fn embed(&self, c: &[Complex]) -> Vec<Complex> {
        self.basis.mul_vec(c).expect("coordinate length matches rank")
    }
}

/// A subset `sigma` of the index set `[N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    members: Vec<bool>,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask { members: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask { members: vec![true; n] }
    }

    pub fn from_bools(members: Vec<bool>) -> Self {
        SubsetMask { members }
    }

    /// Bit `i` of `bits` selects index `i`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        assert!(n <= 64, "bitmask form is limited to 64 indices");
        SubsetMask {
            members: (0..n).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut members = vec![false; n];
        for &i in indices {
            if i >= n {
                return Err(FrameError::Validation(format!("subset index {i} out of range for N = {n}")));
            }
            members[i] = true;
        }
        Ok(SubsetMask { members })
    }

    pub fn to_bits(&self) -> u64 {
        assert!(self.members.len() <= 64);
        self.members
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| if b { acc | 1 << i } else { acc })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn toggle(&mut self, i: usize) {
        self.members[i] = !self.members[i];
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.members[i]).collect()
    }

    pub fn complement(&self) -> Self {
        SubsetMask {
            members: self.members.iter().map(|b| !b).collect(),
        }
    }

    /// `1` on members, `0` elsewhere.
    pub fn indicator(&self) -> Vec<f64> {
        self.members.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::real_vec;

    fn shift(n: usize) -> FrameMatrix {
        let vectors = (0..n)
            .map(|i| {
                let mut v = vec![0.0; n + 1];
                v[i] = 1.0;
                v[i + 1] = 0.5;
                v
            })
            .collect();
        FrameMatrix::from_real(n + 1, vectors).unwrap()
    }

    fn onb(d: usize) -> FrameMatrix {
        FrameMatrix::from_real(
            d,
            (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn synthesis_shift_alternating() {
        let f = shift(3);
        let out = f.synthesis_apply(&real_vec(&[1.0, -1.0, 1.0])).unwrap();
        assert_eq!(out, real_vec(&[1.0, -0.5, 0.5, 0.5]));
    }

    #[test]
    fn synthesis_unit_coefficient_picks_vector() {
        let f = shift(3);
        let out = f.synthesis_apply(&real_vec(&[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(out, f.vector(1));
    }

    #[test]
    fn length_mismatches_are_errors() {
        let f = shift(3);
        assert!(f.synthesis_apply(&real_vec(&[1.0])).is_err());
        assert!(f.analysis_apply(&real_vec(&[1.0])).is_err());
        assert!(f.subset_operator(&SubsetMask::empty(2)).is_err());
    }

    #[test]
    fn analysis_orthogonal_vector() {
        let f = FrameMatrix::from_real(3, vec![vec![1.0, 0.0, 0.0], vec![1.0, 1.0, 0.0]]).unwrap();
        let c = f.analysis_apply(&real_vec(&[0.0, 0.0, 2.0])).unwrap();
        assert!(c.iter().all(|z| *z == Complex::ZERO));
    }

    #[test]
    fn frame_operator_basic_cases() {
        assert_eq!(onb(3).frame_operator(), Matrix::identity(Field::Real, 3));
        let rep = FrameMatrix::from_real(2, vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(rep.frame_operator(), Matrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]));
    }

    #[test]
    fn shift_gramian_is_tridiagonal() {
        let g = shift(5).gramian();
        for i in 0..5usize {
            for j in 0..5 {
                let expected = match i.abs_diff(j) {
                    0 => 1.25,
                    1 => 0.5,
                    _ => 0.0,
                };
                assert_eq!(g[(i, j)], Complex::real(expected));
            }
        }
    }

    #[test]
    fn shift_bounds_closed_form() {
        for n in [1usize, 3, 8] {
            let b = shift(n).frame_bounds(DEFAULT_RANK_TOL).unwrap();
            let c = (std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((b.lower - (1.25 - c)).abs() < 1e-12);
            assert!((b.upper - (1.25 + c)).abs() < 1e-12);
            assert_eq!(b.rank, n);
            assert!(!b.spanning);
        }
    }

    #[test]
    fn empty_span() {
        let z = FrameMatrix::from_real(2, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(z.frame_bounds(1e-10), Err(FrameError::EmptySpan)));
    }

    #[test]
    fn subset_operator_edges() {
        let f = shift(4);
        let empty = f.subset_operator(&SubsetMask::empty(4)).unwrap();
        assert_eq!(empty.max_abs(), 0.0);
        let full = f.subset_operator(&SubsetMask::full(4)).unwrap();
        assert_eq!(full, f.frame_operator());
    }

    #[test]
    fn classify_shift() {
        let c = shift(6).classify(1e-10).unwrap();
        assert!(c.equal_norm);
        assert!(!c.equiangular);
        assert!(!c.tight);
    }

    #[test]
    fn classify_onb() {
        let c = onb(3).classify(1e-10).unwrap();
        // an orthonormal basis has all inner products zero, so it is not equiangular
        assert!(c.equal_norm && c.tight && c.parseval && c.spanning);
        assert!(!c.equiangular);
    }

    #[test]
    fn mask_bits_roundtrip() {
        let m = SubsetMask::from_bits(0b1011, 5);
        assert_eq!(m.indices(), vec![0, 1, 3]);
        assert_eq!(m.to_bits(), 0b1011);
        assert_eq!(m.complement().indices(), vec![2, 4]);
    }

    #[test]
    fn rejects_bad_frames() {
        assert!(FrameMatrix::from_real(2, vec![]).is_err());
        assert!(FrameMatrix::from_real(2, vec![vec![1.0]]).is_err());
        assert!(FrameMatrix::from_real(1, vec![vec![f64::NAN]]).is_err());
    }
}
