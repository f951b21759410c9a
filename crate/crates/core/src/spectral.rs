//! Hermitian eigendecomposition by cyclic Jacobi rotations, plus the spectral
//! norm and positive-semidefinite tests built on it.
//!
//! Complex Hermitian input is handled by first removing the phase of the
//! pivot entry with a diagonal unitary, after which an ordinary real plane
//! rotation annihilates it. The iteration stops once the off-diagonal
//! Frobenius norm drops below `1e-13 * ||M||_F` or after [`MAX_SWEEPS`] sweeps.

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::matrix::{Field, Matrix};

pub const MAX_SWEEPS: usize = 100;
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
/// Absolute floor used when a relative tolerance is scaled by a zero norm.
pub const ABS_FLOOR: f64 = 1e-14;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Matrix,
    /// `max_k ||M v_k - lambda_k v_k||`.
    pub residual: f64,
}

impl SpectralSummary {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex> {
        self.eigenvectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

struct Jacobi {
    n: usize,
    a: Vec<Complex>,
    v: Option<Vec<Complex>>,
}

impl Jacobi {
    fn new(m: &Matrix, with_vectors: bool) -> Self {
        let n = m.rows();
        let mut a = m.data().to_vec();
        for i in 0..n {
            a[i * n + i] = Complex::real(a[i * n + i].re);
        }
        let v = with_vectors.then(|| {
            let mut v = vec![Complex::ZERO; n * n];
            for i in 0..n {
                v[i * n + i] = Complex::ONE;
            }
            v
        });
        Jacobi { n, a, v }
    }

    fn off_norm(&self) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += self.a[p * n + q].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    fn rotate(&mut self, p: usize, q: usize) {
        let n = self.n;
        let g = self.a[p * n + q];
        let mag = g.abs();
        if mag == 0.0 {
            return;
        }
        let a = &mut self.a;
        let apq = if g.im == 0.0 { g.re } else { mag };
        if g.im != 0.0 {
            // W* A W with W = diag(.., conj(e) at q, ..) makes a_pq = |g|
            let e = g / mag;
            let ec = e.conj();
            for k in 0..n {
                a[k * n + q] = a[k * n + q] * ec;
            }
            for k in 0..n {
                a[q * n + k] = e * a[q * n + k];
            }
            a[q * n + q] = Complex::real(a[q * n + q].re);
            if let Some(v) = self.v.as_mut() {
                for k in 0..n {
                    v[k * n + q] = v[k * n + q] * ec;
                }
            }
        }
        let app = a[p * n + p].re;
        let aqq = a[q * n + q].re;
        let theta = (aqq - app) / (2.0 * apq);
        let t = if theta.is_infinite() {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;

        for k in 0..n {
            let akp = a[k * n + p];
            let akq = a[k * n + q];
            a[k * n + p] = akp * c - akq * s;
            a[k * n + q] = akp * s + akq * c;
        }
        for k in 0..n {
            let apk = a[p * n + k];
            let aqk = a[q * n + k];
            a[p * n + k] = apk * c - aqk * s;
            a[q * n + k] = apk * s + aqk * c;
        }
        a[p * n + q] = Complex::ZERO;
        a[q * n + p] = Complex::ZERO;
        a[p * n + p] = Complex::real(app - t * apq);
        a[q * n + q] = Complex::real(aqq + t * apq);

        if let Some(v) = self.v.as_mut() {
            for k in 0..n {
                let vkp = v[k * n + p];
                let vkq = v[k * n + q];
                v[k * n + p] = vkp * c - vkq * s;
                v[k * n + q] = vkp * s + vkq * c;
            }
        }
    }

    fn run(&mut self, scale: f64) {
        let n = self.n;
        let threshold = OFF_DIAGONAL_TOL * scale;
        for _ in 0..MAX_SWEEPS {
            if self.off_norm() <= threshold {
                return;
            }
            for p in 0..n.saturating_sub(1) {
                for q in p + 1..n {
                    self.rotate(p, q);
                }
            }
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.a[i * self.n + i].re).collect()
    }
}

/// Full spectral decomposition of a Hermitian matrix.
///
/// Fails with a validation error if `m` is not square or not Hermitian, and with an
/// invariant error if the reconstruction residual exceeds `tol * ||M||`.
pub fn hermitian_eig(m: &Matrix, tol: f64) -> Result<SpectralSummary> {
    m.check_hermitian()?;
    let n = m.rows();
    let scale = m.frobenius_norm();
    let mut jac = Jacobi::new(m, true);
    if scale > 0.0 {
        jac.run(scale);
    }
    let diag = jac.diagonal();
    let v = jac.v.take().expect("vectors requested");

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = Matrix::from_fn(m.field(), n, n, |r, c| v[r * n + order[c]]);
    // real-field input keeps a real eigenbasis; the phase step never fires there
    debug_assert!(m.field() == Field::Complex || eigenvectors.data().iter().all(|z| z.im == 0.0));

    let mut residual = 0.0f64;
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let vk = eigenvectors.column(k);
        let mv = m.mul_vec(&vk)?;
        let r = mv
            .iter()
            .zip(&vk)
            .map(|(&a, &b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual = residual.max(r);
    }
    let allowed = tol * scale.max(ABS_FLOOR);
    if residual > allowed {
        return Err(FrameError::Invariant(format!(
            "eigen-decomposition residual {residual:e} exceeds {allowed:e}"
        )));
    }
    Ok(SpectralSummary {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

/// Ascending eigenvalues only; skips eigenvector accumulation.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    m.check_hermitian()?;
    Ok(eigenvalues_unchecked(m))
}

/// Eigenvalues of a matrix already known to be Hermitian (e.g. built as `X* X`).
pub(crate) fn eigenvalues_unchecked(m: &Matrix) -> Vec<f64> {
    let scale = m.frobenius_norm();
    let mut jac = Jacobi::new(m, false);
    if scale > 0.0 {
        jac.run(scale);
    }
    let mut d = jac.diagonal();
    d.sort_by(f64::total_cmp);
    d
}

pub(crate) fn eig_unchecked(m: &Matrix) -> (Vec<f64>, Matrix) {
    let n = m.rows();
    let scale = m.frobenius_norm();
    let mut jac = Jacobi::new(m, true);
    if scale > 0.0 {
        jac.run(scale);
    }
    let diag = jac.diagonal();
    let v = jac.v.take().expect("vectors requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(m.field(), n, n, |r, c| v[r * n + order[c]]);
    (values, vectors)
}

fn looks_hermitian(m: &Matrix) -> bool {
    m.is_square() && m.check_hermitian().is_ok()
}

/// Largest singular value.
///
/// Hermitian input uses `max |lambda|` directly; anything else goes through the
/// eigenvalues of the smaller of `M* M` and `M M*`.
pub fn spectral_norm(m: &Matrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    if looks_hermitian(m) {
        let ev = eigenvalues_unchecked(m);
        let lo = ev.first().copied().unwrap_or(0.0).abs();
        let hi = ev.last().copied().unwrap_or(0.0).abs();
        return lo.max(hi);
    }
    let adj = m.adjoint();
    let gram = if m.cols() <= m.rows() {
        adj.matmul(m)
    } else {
        m.matmul(&adj)
    }
    .expect("shapes agree")
    .hermitian_part();
    let ev = eigenvalues_unchecked(&gram);
    ev.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

pub fn min_eigenvalue(m: &Matrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

pub fn max_eigenvalue(m: &Matrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.last().copied().unwrap_or(0.0))
}

/// `M >= -tau` in the Loewner order, i.e. the smallest eigenvalue is at least `-tau`.
pub fn is_psd(m: &Matrix, tau: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tau)
}
