//! Orthogonal sums of tight frames.
//!
//! A family has all unconditional constants equal to 1 exactly when every
//! nonzero vector is an eigenvector of `S`; grouping the vectors by eigenvalue
//! then splits the family into tight frames for mutually orthogonal subspaces.
//! [`decompose`] checks each structural condition and either returns the
//! partition or the first condition that fails.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::exec::{self, Execution};
use crate::frame::{FrameMatrix, SubsetMask};
use crate::gallery::{self, normal_vector};
use crate::matrix::{dot, norm, Field, Matrix};
use crate::spectral;
use crate::unconditional::{exact_report, ExactOptions};

pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;
/// Threshold on a constant for "equal to one" in the equivalence check.
pub const ONE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenTest {
    pub is_eigen: bool,
    pub lambda: f64,
    pub residual: f64,
}

fn eigen_test_with(s: &Matrix, s_norm: f64, phi: &[Complex], tol: f64) -> EigenTest {
    let sphi = s.mul_vec(phi).expect("dimension matches");
    let nn = dot(phi, phi).re;
    let lambda = dot(&sphi, phi).re / nn;
    let r: f64 = sphi
        .iter()
        .zip(phi)
        .map(|(&a, &b)| (a - b * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let residual = r / (s_norm * nn.sqrt());
    EigenTest {
        is_eigen: residual <= tol,
        lambda,
        residual,
    }
}

/// Rayleigh quotient `lambda = <S phi_i, phi_i>/||phi_i||^2` and relative residual
/// `||S phi_i - lambda phi_i|| / (||S|| ||phi_i||)`.
pub fn eigenvector_test(frame: &FrameMatrix, i: usize, tol: f64) -> Result<EigenTest> {
    if i >= frame.count() {
        return Err(FrameError::Validation(format!("index {i} out of range")));
    }
    if frame.is_zero(i) {
        return Err(FrameError::ZeroVector(i));
    }
    let s = frame.frame_operator();
    let s_norm = spectral::spectral_norm(&s);
    Ok(eigen_test_with(&s, s_norm, frame.vector(i), tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    NonEigenvector,
    CrossInnerProduct,
    NonTightGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WitnessIndex {
    Single(usize),
    Pair(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub kind: FailureKind,
    pub index: WitnessIndex,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightGroup {
    pub indices: Vec<usize>,
    pub lambda: f64,
    pub span_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightDecomposition {
    pub groups: Vec<TightGroup>,
    pub null_indices: Vec<usize>,
    pub min_bound: f64,
    /// Groups whose eigenvalue spread exceeds the cluster tolerance because of
    /// transitive merging (indices into `groups`).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ambiguous_groups: Vec<usize>,
}

impl TightDecomposition {
    pub fn max_bound(&self) -> f64 {
        self.groups.iter().map(|g| g.lambda).fold(0.0, f64::max)
    }

    pub fn total_span(&self) -> usize {
        self.groups.iter().map(|g| g.span_dim).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Decomposition {
    Tight(TightDecomposition),
    Failure { failure: FailureWitness },
}

impl Decomposition {
    pub fn tight(&self) -> Option<&TightDecomposition> {
        match self {
            Decomposition::Tight(t) => Some(t),
            Decomposition::Failure { .. } => None,
        }
    }

    pub fn failure(&self) -> Option<&FailureWitness> {
        match self {
            Decomposition::Tight(_) => None,
            Decomposition::Failure { failure } => Some(failure),
        }
    }

    pub fn is_tight(&self) -> bool {
        self.tight().is_some()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    pub residual_tol: f64,
    pub cluster_tol: f64,
    pub execution: Execution,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            residual_tol: DEFAULT_RESIDUAL_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            execution: Execution::default(),
        }
    }
}

pub fn decompose(frame: &FrameMatrix, tol: f64) -> Result<Decomposition> {
    decompose_with(
        frame,
        &DecomposeOptions {
            residual_tol: tol,
            ..Default::default()
        },
    )
}

pub fn decompose_with(frame: &FrameMatrix, opts: &DecomposeOptions) -> Result<Decomposition> {
    let null_indices = frame.zero_indices();
    let live: Vec<usize> = (0..frame.count()).filter(|i| !null_indices.contains(i)).collect();
    if live.is_empty() {
        return Err(FrameError::EmptySpan);
    }
    let s = frame.frame_operator();
    let s_norm = spectral::spectral_norm(&s);

    let tests = exec::map_indices(live.len(), opts.execution, |k| {
        eigen_test_with(&s, s_norm, frame.vector(live[k]), opts.residual_tol)
    });
    if let Some(k) = tests.iter().position(|t| !t.is_eigen) {
        return Ok(Decomposition::Failure {
            failure: FailureWitness {
                kind: FailureKind::NonEigenvector,
                index: WitnessIndex::Single(live[k]),
                residual: tests[k].residual,
            },
        });
    }

    // single-linkage clustering of the Rayleigh quotients
    let mut order: Vec<usize> = (0..live.len()).collect();
    order.sort_by(|&a, &b| tests[a].lambda.total_cmp(&tests[b].lambda).then(a.cmp(&b)));
    let gap = opts.cluster_tol * s_norm;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for &k in &order {
        let l = tests[k].lambda;
        match clusters.last_mut() {
            Some(c) if l - prev <= gap => c.push(k),
            _ => clusters.push(vec![k]),
        }
        prev = l;
    }
    // report in order of first index
    for c in clusters.iter_mut() {
        c.sort_unstable();
    }
    clusters.sort_by_key(|c| c[0]);

    let mut ambiguous_groups = Vec::new();
    let mut group_of = vec![usize::MAX; frame.count()];
    for (g, c) in clusters.iter().enumerate() {
        let lo = c.iter().map(|&k| tests[k].lambda).fold(f64::INFINITY, f64::min);
        let hi = c.iter().map(|&k| tests[k].lambda).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > gap {
            ambiguous_groups.push(g);
        }
        for &k in c {
            group_of[live[k]] = g;
        }
    }

    // cross-orthogonality between groups
    for (a, &i) in live.iter().enumerate() {
        for &j in &live[a + 1..] {
            if group_of[i] == group_of[j] {
                continue;
            }
            let ip = dot(frame.vector(i), frame.vector(j)).abs();
            let rel = ip / (norm(frame.vector(i)) * norm(frame.vector(j)));
            if rel > opts.residual_tol {
                return Ok(Decomposition::Failure {
                    failure: FailureWitness {
                        kind: FailureKind::CrossInnerProduct,
                        index: WitnessIndex::Pair(i, j),
                        residual: rel,
                    },
                });
            }
        }
    }

    let mut groups = Vec::with_capacity(clusters.len());
    for c in &clusters {
        let indices: Vec<usize> = c.iter().map(|&k| live[k]).collect();
        let lambda = c.iter().map(|&k| tests[k].lambda).sum::<f64>() / c.len() as f64;
        let mask = SubsetMask::from_indices(&indices, frame.count())?;
        let p = frame.subset_operator(&mask)?.scale(1.0 / lambda);
        let defect = spectral::spectral_norm(&p.matmul(&p)?.sub(&p)?.hermitian_part());
        if defect > opts.residual_tol {
            return Ok(Decomposition::Failure {
                failure: FailureWitness {
                    kind: FailureKind::NonTightGroup,
                    index: WitnessIndex::Single(indices[0]),
                    residual: defect,
                },
            });
        }
        let span_dim = p.trace().re.round() as usize;
        groups.push(TightGroup {
            indices,
            lambda,
            span_dim,
        });
    }
    let min_bound = groups.iter().map(|g| g.lambda).fold(f64::INFINITY, f64::min);
    Ok(Decomposition::Tight(TightDecomposition {
        groups,
        null_indices,
        min_bound,
        ambiguous_groups,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub decomposes: bool,
    pub c_sigma: f64,
    pub c_epsilon: f64,
    pub c_a: f64,
    pub sigma_is_one: bool,
    pub epsilon_is_one: bool,
    pub a_is_one: bool,
    pub agree: bool,
}

/// Cross-validates the decomposition against the exact constants: the family is an
/// orthogonal sum of tight frames iff each of `C_sigma`, `C_epsilon`, `C_a` is 1.
pub fn unconditional_equivalence_check(
    frame: &FrameMatrix,
    decompose_opts: &DecomposeOptions,
    exact_opts: &ExactOptions,
) -> Result<EquivalenceReport> {
    let decomposes = decompose_with(frame, decompose_opts)?.is_tight();
    let r = exact_report(frame, exact_opts)?;
    let sigma_is_one = r.c_sigma <= 1.0 + ONE_TOL;
    let epsilon_is_one = r.c_epsilon <= 1.0 + ONE_TOL;
    let a_is_one = r.c_a <= 1.0 + ONE_TOL;
    let agree = [sigma_is_one, epsilon_is_one, a_is_one].iter().all(|&b| b == decomposes);
    Ok(EquivalenceReport {
        decomposes,
        c_sigma: r.c_sigma,
        c_epsilon: r.c_epsilon,
        c_a: r.c_a,
        sigma_is_one,
        epsilon_is_one,
        a_is_one,
        agree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationTest {
    /// `x y* + y x* >= 0`.
    pub psd: bool,
    /// `y` is a multiple of `x`.
    pub parallel: bool,
    /// `y = lambda x` when parallel.
    pub lambda: Option<Complex>,
    pub min_eigenvalue: f64,
}

/// PSD test of `x y* + y x*` against parallelism of `x` and `y`. A PSD symmetrization
/// forces `y = lambda x`; the converse needs `Re(lambda) >= 0`.
pub fn symmetrization_psd_test(x: &[Complex], y: &[Complex], tol: f64) -> Result<SymmetrizationTest> {
    if x.len() != y.len() {
        return Err(FrameError::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let nx = norm(x);
    let ny = norm(y);
    if nx == 0.0 || ny == 0.0 {
        return Err(FrameError::Validation("symmetrization test needs nonzero x and y".into()));
    }
    let field = if x.iter().chain(y).any(|z| z.im != 0.0) {
        Field::Complex
    } else {
        Field::Real
    };
    let mut m = Matrix::zeros(field, x.len(), x.len());
    m.add_outer(Complex::ONE, x, y);
    m.add_outer(Complex::ONE, y, x);
    let min_eigenvalue = spectral::min_eigenvalue(&m.hermitian_part())?;
    let psd = min_eigenvalue >= -tol * nx * ny;

    let coef = dot(y, x) / (nx * nx);
    let off: f64 = y
        .iter()
        .zip(x)
        .map(|(&yi, &xi)| (yi - coef * xi).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let parallel = off <= tol * ny;
    if psd && !parallel {
        return Err(FrameError::Invariant(format!(
            "x y* + y x* is PSD (min eigenvalue {min_eigenvalue:e}) but y is not parallel to x (residual {off:e})"
        )));
    }
    Ok(SymmetrizationTest {
        psd,
        parallel,
        lambda: parallel.then_some(coef),
        min_eigenvalue,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub span_dim: usize,
    pub vector_count: usize,
    pub tight_bound: f64,
}

/// A constructed orthogonal sum together with the ground-truth partition.
#[derive(Debug, Clone)]
pub struct TightSum {
    pub frame: FrameMatrix,
    /// Vector indices of each group, in spec order.
    pub groups: Vec<Vec<usize>>,
}

/// Random orthogonal sum of tight frames: group `j` is a random frame on its own
/// `span_dim`-dimensional block of a random orthonormal basis, normalized to be tight
/// with bound `tight_bound`. Vector order is shuffled.
pub fn build_orthogonal_tight_sum(specs: &[GroupSpec], seed: u64, field: Field) -> Result<TightSum> {
    if specs.is_empty() {
        return Err(FrameError::Validation("need at least one group".into()));
    }
    for (j, g) in specs.iter().enumerate() {
        if g.span_dim == 0 || g.vector_count < g.span_dim {
            return Err(FrameError::Validation(format!(
                "group {j}: need 1 <= span_dim <= vector_count, got span_dim {} with {} vectors",
                g.span_dim, g.vector_count
            )));
        }
        if !(g.tight_bound > 0.0) {
            return Err(FrameError::Validation(format!("group {j}: tight bound must be positive")));
        }
    }
    let dim: usize = specs.iter().map(|g| g.span_dim).sum();
    let basis = gallery::random_orthonormal_basis(dim, seed, field)?;
    let mut rng = gallery::rng(seed ^ 0x9e37_79b9_7f4a_7c15);

    let mut vectors: Vec<(usize, Vec<Complex>)> = Vec::new();
    let mut offset = 0;
    for (j, g) in specs.iter().enumerate() {
        let local: Vec<Vec<Complex>> = (0..g.vector_count).map(|_| normal_vector(&mut rng, field, g.span_dim)).collect();
        let local = gallery::canonical_tight(&FrameMatrix::new(field, g.span_dim, local)?)?;
        let scale = g.tight_bound.sqrt();
        for v in local.vectors() {
            let mut out = vec![Complex::ZERO; dim];
            for (k, &c) in v.iter().enumerate() {
                crate::matrix::axpy(c * scale, basis.vector(offset + k), &mut out);
            }
            vectors.push((j, out));
        }
        offset += g.span_dim;
    }
    vectors.shuffle(&mut rng);
    let mut groups = vec![Vec::new(); specs.len()];
    for (i, (j, _)) in vectors.iter().enumerate() {
        groups[*j].push(i);
    }
    let frame = FrameMatrix::new(field, dim, vectors.into_iter().map(|(_, v)| v).collect())?;
    Ok(TightSum { frame, groups })
}
