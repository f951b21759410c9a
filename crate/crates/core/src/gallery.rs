//! Constructors for the standard example families, with their closed-form quantities.
//!
//! Random families draw from `Xoshiro256**` seeded through SplitMix64
//! (`rand_xoshiro`'s `seed_from_u64`) with standard normal entries, so a seed
//! names the same matrix on every platform.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::frame::{FrameMatrix, DEFAULT_RANK_TOL};
use crate::matrix::Field;
use crate::unconditional::SignVector;

pub type Rng = Xoshiro256StarStar;

pub fn rng(seed: u64) -> Rng {
    Xoshiro256StarStar::seed_from_u64(seed)
}

pub fn normal_scalar(rng: &mut Rng, field: Field) -> Complex {
    let re: f64 = StandardNormal.sample(rng);
    match field {
        Field::Real => Complex::real(re),
        Field::Complex => Complex::new(re, StandardNormal.sample(rng)),
    }
}

pub fn normal_vector(rng: &mut Rng, field: Field, len: usize) -> Vec<Complex> {
    (0..len).map(|_| normal_scalar(rng, field)).collect()
}

fn unit(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

/// `phi_i = e_i - v/N` in `R^N`: a Parseval, equal-norm, equiangular frame for
/// the hyperplane orthogonal to the all-ones vector `v`.
pub fn simplex_frame(n: usize) -> Result<FrameMatrix> {
    if n < 3 {
        return Err(FrameError::Validation(format!("simplex frame needs N >= 3, got {n}")));
    }
    let inv = 1.0 / n as f64;
    let vectors = (0..n)
        .map(|i| unit(n, i).into_iter().map(|x| x - inv).collect())
        .collect();
    FrameMatrix::from_real(n, vectors)
}

/// The simplex frame with `phi_1` removed; still a frame for the hyperplane, with
/// bounds `(1/N, 1)`.
pub fn simplex_subframe(n: usize) -> Result<FrameMatrix> {
    let full = simplex_frame(n)?;
    full.select(&(1..n).collect::<Vec<_>>())
}

/// Truncated shift frame: `phi_i = e_i + e_{i+1}/2`, `i = 1..n`, in `R^(n+1)`.
pub fn shift_frame(n: usize) -> Result<FrameMatrix> {
    if n == 0 {
        return Err(FrameError::Validation("shift frame needs n >= 1".into()));
    }
    let vectors = (0..n)
        .map(|i| {
            let mut v = unit(n + 1, i);
            v[i + 1] = 0.5;
            v
        })
        .collect();
    FrameMatrix::from_real(n + 1, vectors)
}

/// `5/4 -/+ cos(pi/(n+1))`: extreme eigenvalues of the tridiagonal Toeplitz Gramian.
pub fn shift_bounds_closed_form(n: usize) -> (f64, f64) {
    let c = (PI / (n as f64 + 1.0)).cos();
    (1.25 - c, 1.25 + c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingWitness {
    pub signs: SignVector,
    pub coefficients: Vec<f64>,
}

/// Signs `(-1)^(i+1)` and unit coefficients `c_i = (-1)^(i+1)`, `i = 1..n`.
pub fn alternating_witness(n: usize) -> Result<AlternatingWitness> {
    if n == 0 {
        return Err(FrameError::Validation("alternating witness needs n >= 1".into()));
    }
    let signs: Vec<i8> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let coefficients = signs.iter().map(|&s| s as f64).collect();
    Ok(AlternatingWitness {
        signs: SignVector::new(signs)?,
        coefficients,
    })
}

/// `d x N` frame with i.i.d. standard normal entries (real and imaginary parts
/// independently for complex fields).
pub fn random_frame(dim: usize, count: usize, seed: u64, field: Field) -> Result<FrameMatrix> {
    if dim == 0 || count == 0 {
        return Err(FrameError::Validation("random frame needs d, N >= 1".into()));
    }
    let mut r = rng(seed);
    let vectors = (0..count).map(|_| normal_vector(&mut r, field, dim)).collect();
    FrameMatrix::new(field, dim, vectors)
}

/// `phi_i -> (S^+)^(1/2) phi_i`; the result is Parseval on the original span.
pub fn canonical_tight(frame: &FrameMatrix) -> Result<FrameMatrix> {
    let range = frame.range_basis(DEFAULT_RANK_TOL)?;
    let root = range.functional(|l| 1.0 / l.sqrt());
    frame.map_vectors(&root)
}

/// Random orthonormal basis of the full space.
pub fn random_orthonormal_basis(dim: usize, seed: u64, field: Field) -> Result<FrameMatrix> {
    canonical_tight(&random_frame(dim, dim, seed, field)?)
}

/// Canonical-tight random frame: Parseval on its span.
pub fn random_parseval(dim: usize, count: usize, seed: u64, field: Field) -> Result<FrameMatrix> {
    canonical_tight(&random_frame(dim, count, seed, field)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Simplex,
    SimplexSub,
    Shift,
    Random,
    Parseval,
    Orthonormal,
}

/// A named gallery family with parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GallerySpec {
    pub family: Family,
    /// `N` for the simplex families, `n` for shift, `N` for random families.
    pub size: usize,
    /// Ambient dimension for random families (ignored elsewhere).
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_field")]
    pub field: Field,
}

fn default_field() -> Field {
    Field::Real
}

/// A constructed frame with the closed-form quantities downstream checks should see.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub spec: GallerySpec,
    pub frame: FrameMatrix,
    pub expected: BTreeMap<String, f64>,
}

impl GallerySpec {
    pub fn build(&self) -> Result<GalleryEntry> {
        let mut expected = BTreeMap::new();
        let n = self.size;
        let nf = n as f64;
        let frame = match self.family {
            Family::Simplex => {
                expected.insert("lower_bound".into(), 1.0);
                expected.insert("upper_bound".into(), 1.0);
                expected.insert("rank".into(), nf - 1.0);
                expected.insert("norm_squared".into(), 1.0 - 1.0 / nf);
                expected.insert("inner_product".into(), -1.0 / nf);
                simplex_frame(n)?
            }
            Family::SimplexSub => {
                expected.insert("lower_bound".into(), 1.0 / nf);
                expected.insert("upper_bound".into(), 1.0);
                expected.insert("sqrt_ratio".into(), nf.sqrt());
                expected.insert("c_sigma_lower".into(), nf.sqrt() / 2.0);
                expected.insert("removed_vector_eigenvalue".into(), 1.0 / nf);
                simplex_subframe(n)?
            }
            Family::Shift => {
                let (a, b) = shift_bounds_closed_form(n);
                expected.insert("lower_bound".into(), a);
                expected.insert("upper_bound".into(), b);
                expected.insert("alternating_sum_norm_squared".into(), 1.0 + nf / 4.0);
                expected.insert("plain_sum_norm_squared".into(), 1.25 + 2.25 * (nf - 1.0));
                expected.insert("sign_flip_ratio".into(), (9.0 * nf - 4.0) / (nf + 4.0));
                expected.insert("limit_lower_bound".into(), 0.25);
                expected.insert("limit_upper_bound".into(), 2.25);
                shift_frame(n)?
            }
            Family::Random => random_frame(self.dim.unwrap_or(n), n, self.seed, self.field)?,
            Family::Parseval => {
                expected.insert("upper_bound".into(), 1.0);
                expected.insert("lower_bound".into(), 1.0);
                random_parseval(self.dim.unwrap_or(n), n, self.seed, self.field)?
            }
            Family::Orthonormal => {
                expected.insert("upper_bound".into(), 1.0);
                expected.insert("lower_bound".into(), 1.0);
                expected.insert("c_sigma".into(), 1.0);
                random_orthonormal_basis(n, self.seed, self.field)?
            }
        };
        Ok(GalleryEntry {
            spec: self.clone(),
            frame,
            expected,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{norm, real_vec};

    #[test]
    fn simplex_gramian_n3() {
        let g = simplex_frame(3).unwrap().gramian();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 2.0 / 3.0 } else { -1.0 / 3.0 };
                assert!((g[(i, j)].re - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn simplex_sum_is_zero() {
        for n in 3..9 {
            let f = simplex_frame(n).unwrap();
            let s = f.synthesis_apply(&real_vec(&vec![1.0; n])).unwrap();
            assert!(norm(&s) < 1e-14);
        }
        assert!(simplex_frame(2).is_err());
    }

    #[test]
    fn alternating_signs() {
        assert_eq!(alternating_witness(1).unwrap().signs.as_slice(), &[1]);
        let w = alternating_witness(4).unwrap();
        assert_eq!(w.signs.as_slice(), &[1, -1, 1, -1]);
        for (s, c) in w.signs.as_slice().iter().zip(&w.coefficients) {
            assert_eq!(*s as f64 * c, 1.0);
        }
    }

    #[test]
    fn random_is_reproducible() {
        let a = random_frame(3, 5, 42, Field::Complex).unwrap();
        let b = random_frame(3, 5, 42, Field::Complex).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_frame(3, 5, 43, Field::Complex).unwrap());
        assert!(a.classify(1e-10).unwrap().spanning);
    }

    #[test]
    fn canonical_tight_cases() {
        let f = FrameMatrix::from_real(1, vec![vec![2.0]]).unwrap();
        assert_eq!(canonical_tight(&f).unwrap().vector(0), &[Complex::real(1.0)]);

        let p = simplex_frame(5).unwrap();
        let q = canonical_tight(&p).unwrap();
        for i in 0..5 {
            for (a, b) in p.vector(i).iter().zip(q.vector(i)) {
                assert!((*a - *b).abs() < 1e-10);
            }
        }

        let r = random_parseval(3, 7, 9, Field::Complex).unwrap();
        assert!(r.classify(1e-9).unwrap().parseval);
    }

    #[test]
    fn orthonormal_basis_is_tight() {
        let f = random_orthonormal_basis(4, 1, Field::Real).unwrap();
        let c = f.classify(1e-10).unwrap();
        assert!(c.parseval && c.spanning);
    }
}
