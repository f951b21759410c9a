//! Unconditional constants of frame expansions.
//!
//! For weights `w` the relative operator is `T diag(w) T* S^+`, and its norm is
//! the smallest `C` with `||sum_i w_i <x, phi_i> phi_i|| <= C ||S x||` for all `x`.
//! Subset indicators give `C_sigma`, sign patterns give `C_epsilon`, and the box
//! `|a_i| <= 1` gives `C_a`.
//!
//! All evaluations go through [`RelativeOperator`], which works in coordinates of
//! an orthonormal eigenbasis `U` of `range(S)`: with `a_i = U* phi_i` and
//! `b_i = Lambda^{-1} a_i` the operator is the `rank x rank` matrix
//! `R(w) = sum_i w_i a_i b_i*`, whose norm equals the relative norm.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::exec::{self, Execution};
use crate::frame::{FrameBounds, FrameMatrix, RangeBasis, SubsetMask, DEFAULT_RANK_TOL};
use crate::matrix::{norm, Matrix};
use crate::spectral;

pub const DEFAULT_EXACT_LIMIT: usize = 16;
/// Slack allowed when checking a constant against `sqrt(B/A)`.
pub const BOUND_TOL: f64 = 1e-9;

/// Signs `epsilon_i` in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(i) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(FrameError::Validation(format!("sign {i} is {} (must be +1 or -1)", signs[i])));
        }
        Ok(SignVector(signs))
    }

    pub fn all_positive(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    /// `epsilon_0 = +1`; bit `i - 1` of `key` set means `epsilon_i = -1`.
    pub fn from_key(key: u64, n: usize) -> Self {
        let mut s = vec![1i8; n];
        for (i, si) in s.iter_mut().enumerate().skip(1) {
            if key >> (i - 1) & 1 == 1 {
                *si = -1;
            }
        }
        SignVector(s)
    }

    /// `2 * 1_sigma - 1`, flipped globally so the first sign is `+1`.
    pub fn from_mask(mask: &SubsetMask) -> Self {
        let mut s: Vec<i8> = (0..mask.len()).map(|i| if mask.contains(i) { 1 } else { -1 }).collect();
        if s.first() == Some(&-1) {
            s.iter_mut().for_each(|x| *x = -*x);
        }
        SignVector(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn weights(&self) -> Vec<f64> {
        self.0.iter().map(|&s| s as f64).collect()
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = FrameError;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Vec<i8> {
        s.0
    }
}

/// Real coefficients in the closed box `|a_i| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector(Vec<f64>);

impl CoefficientVector {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if let Some(i) = a.iter().position(|x| !(x.abs() <= 1.0)) {
            return Err(FrameError::Validation(format!("coefficient {i} = {} lies outside [-1, 1]", a[i])));
        }
        Ok(CoefficientVector(a))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// The relative operator `T diag(w) T* S^+` of a fixed frame, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct RelativeOperator {
    range: RangeBasis,
    count: usize,
    a: Vec<Vec<Complex>>,
    b: Vec<Vec<Complex>>,
}

impl RelativeOperator {
    pub fn new(frame: &FrameMatrix) -> Result<Self> {
        Self::with_tol(frame, DEFAULT_RANK_TOL)
    }

    pub fn with_tol(frame: &FrameMatrix, rank_tol: f64) -> Result<Self> {
        if frame.zero_indices().len() == frame.count() {
            return Err(FrameError::EmptySpan);
        }
        let range = frame.range_basis(rank_tol)?;
        let a: Vec<Vec<Complex>> = frame.vectors().iter().map(|v| range.coordinates(v)).collect();
        let b = a
            .iter()
            .map(|ai| ai.iter().zip(&range.values).map(|(&z, &l)| z / l).collect())
            .collect();
        Ok(RelativeOperator {
            range,
            count: frame.count(),
            a,
            b,
        })
    }

    pub fn rank(&self) -> usize {
        self.range.rank()
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn range(&self) -> &RangeBasis {
        &self.range
    }

    /// `R(w)` in range coordinates.
    pub fn compressed(&self, weights: &[f64]) -> Result<Matrix> {
        if weights.len() != self.count {
            return Err(FrameError::LengthMismatch {
                expected: self.count,
                actual: weights.len(),
            });
        }
        let r = self.rank();
        let mut m = Matrix::zeros(self.range.basis.field(), r, r);
        for ((ai, bi), &w) in self.a.iter().zip(&self.b).zip(weights) {
            if w != 0.0 {
                m.add_outer(Complex::real(w), ai, bi);
            }
        }
        Ok(m)
    }

    /// `R(w)* R(w)`, Hermitian by construction.
    fn normal(&self, weights: &[f64]) -> Result<Matrix> {
        let m = self.compressed(weights)?;
        Ok(m.adjoint().matmul(&m)?.hermitian_part())
    }

    /// `||T diag(w) T* S^+||`.
    pub fn norm(&self, weights: &[f64]) -> Result<f64> {
        let ev = spectral::eigenvalues_unchecked(&self.normal(weights)?);
        Ok(ev.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }

    /// The norm together with a unit vector `x` in the span attaining
    /// `||T diag(w) T* x|| / ||S x||`.
    pub fn norm_with_witness(&self, weights: &[f64]) -> Result<(f64, Vec<Complex>)> {
        let (values, vectors) = spectral::eig_unchecked(&self.normal(weights)?);
        let top = values.len() - 1;
        let v = vectors.column(top);
        let scaled: Vec<Complex> = v.iter().zip(&self.range.values).map(|(&z, &l)| z / l).collect();
        let mut x = self.range.embed(&scaled);
        let nx = norm(&x);
        x.iter_mut().for_each(|z| *z = *z / nx);
        Ok((values[top].max(0.0).sqrt(), x))
    }

    pub fn sigma_norm(&self, mask: &SubsetMask) -> Result<f64> {
        self.norm(&mask.indicator())
    }
}

/// `||T diag(d) T* S^+||` for a frame with nonzero span.
pub fn relative_norm(frame: &FrameMatrix, weights: &[f64]) -> Result<f64> {
    if weights.len() != frame.count() {
        return Err(FrameError::LengthMismatch {
            expected: frame.count(),
            actual: weights.len(),
        });
    }
    RelativeOperator::new(frame)?.norm(weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy)]
pub struct ExactOptions {
    pub limit: usize,
    pub execution: Execution,
    pub rank_tol: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            limit: DEFAULT_EXACT_LIMIT,
            execution: Execution::default(),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl ExactOptions {
    pub fn sequential() -> Self {
        ExactOptions {
            execution: Execution::Sequential,
            ..Default::default()
        }
    }
}

fn check_limit(count: usize, limit: usize) -> Result<()> {
    if count > limit || count > 63 {
        return Err(FrameError::ExactLimit { count, limit });
    }
    Ok(())
}

/// Exhaustive `C_sigma` over the `2^N` subsets with the winning mask
/// (numerically smallest bitmask on ties).
pub fn c_sigma_exact_with(op: &RelativeOperator, opts: &ExactOptions) -> Result<(f64, SubsetMask)> {
    let n = op.count();
    check_limit(n, opts.limit)?;
    let best = exec::argmax(1u64 << n, opts.execution, |bits| {
        let w: Vec<f64> = (0..n).map(|i| (bits >> i & 1) as f64).collect();
        op.norm(&w).expect("weight length matches")
    });
    Ok((best.value, SubsetMask::from_bits(best.key, n)))
}

/// Exhaustive `C_epsilon` over the `2^(N-1)` sign patterns with `epsilon_0 = +1`.
pub fn c_epsilon_exact_with(op: &RelativeOperator, opts: &ExactOptions) -> Result<(f64, SignVector)> {
    let n = op.count();
    check_limit(n, opts.limit)?;
    let best = exec::argmax(1u64 << (n - 1), opts.execution, |key| {
        let w = SignVector::from_key(key, n).weights();
        op.norm(&w).expect("weight length matches")
    });
    Ok((best.value, SignVector::from_key(best.key, n)))
}

pub fn c_sigma_exact(frame: &FrameMatrix) -> Result<(f64, SubsetMask)> {
    c_sigma_exact_with(&RelativeOperator::new(frame)?, &ExactOptions::default())
}

pub fn c_epsilon_exact(frame: &FrameMatrix) -> Result<(f64, SignVector)> {
    c_epsilon_exact_with(&RelativeOperator::new(frame)?, &ExactOptions::default())
}

/// `C_a` over the closed box. `w -> ||R(w)||` is convex, so the maximum sits at a
/// vertex and equals the exact `C_epsilon`.
pub fn c_a(frame: &FrameMatrix) -> Result<f64> {
    Ok(c_epsilon_exact(frame)?.0)
}

/// Relative norm at a box point.
pub fn box_point_norm(op: &RelativeOperator, a: &CoefficientVector) -> Result<f64> {
    op.norm(a.as_slice())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnconditionalReport {
    pub c_sigma: f64,
    pub c_epsilon: f64,
    pub c_a: f64,
    /// `sqrt(B/A)`.
    pub bound: f64,
    #[serde(with = "mask_indices")]
    pub witness_sigma: SubsetMask,
    pub witness_signs: SignVector,
    /// Unit vector attaining the `C_sigma` ratio at `witness_sigma`, as `[re, im]` pairs.
    pub witness_x: Vec<[f64; 2]>,
    pub mode: Mode,
    /// `bound - c_a`.
    pub slack: f64,
}

mod mask_indices {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::frame::SubsetMask;

    pub fn serialize<S: Serializer>(m: &SubsetMask, s: S) -> Result<S::Ok, S::Error> {
        m.indices().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SubsetMask, D::Error> {
        // the count is recovered from witness_signs by UnconditionalReport::normalize
        let idx = Vec::<usize>::deserialize(d)?;
        let n = idx.iter().max().map_or(0, |m| m + 1);
        SubsetMask::from_indices(&idx, n).map_err(serde::de::Error::custom)
    }
}

impl UnconditionalReport {
    /// Re-pads `witness_sigma` to `N` after deserialization (the JSON form only lists members).
    pub fn normalize(mut self) -> Self {
        let n = self.witness_signs.len();
        if self.witness_sigma.len() < n {
            let idx = self.witness_sigma.indices();
            self.witness_sigma = SubsetMask::from_indices(&idx, n).expect("indices below N");
        }
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str::<UnconditionalReport>(s)?.normalize())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks the chain `1 <= C_sigma <= C_epsilon <= 2 C_sigma`, `C_epsilon <= C_a <= 2 C_epsilon`
    /// and `C_a <= sqrt(B/A)`. Returns the list of violated relations.
    pub fn violations(&self, chain_tol: f64, bound_tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut le = |name: &str, lhs: f64, rhs: f64, tol: f64| {
            if !(lhs <= rhs + tol) {
                out.push(format!("{name}: {lhs} > {rhs}"));
            }
        };
        le("1 <= c_sigma", 1.0, self.c_sigma, chain_tol);
        le("c_sigma <= c_epsilon", self.c_sigma, self.c_epsilon, chain_tol);
        le("c_epsilon <= 2 c_sigma", self.c_epsilon, 2.0 * self.c_sigma, chain_tol);
        le("c_epsilon <= c_a", self.c_epsilon, self.c_a, chain_tol);
        le("c_a <= 2 c_epsilon", self.c_a, 2.0 * self.c_epsilon, chain_tol);
        le("c_a <= sqrt(B/A)", self.c_a, self.bound, bound_tol);
        out
    }
}

fn encode(x: &[Complex]) -> Vec<[f64; 2]> {
    x.iter().map(|z| [z.re, z.im]).collect()
}

/// Exact constants with witnesses.
pub fn exact_report(frame: &FrameMatrix, opts: &ExactOptions) -> Result<UnconditionalReport> {
    check_limit(frame.count(), opts.limit)?;
    let op = RelativeOperator::with_tol(frame, opts.rank_tol)?;
    let bounds = frame.frame_bounds(opts.rank_tol)?;
    let (c_sigma, mask) = c_sigma_exact_with(&op, opts)?;
    let (c_epsilon, signs) = c_epsilon_exact_with(&op, opts)?;
    let (_, x) = op.norm_with_witness(&mask.indicator())?;
    let bound = bounds.sqrt_ratio();
    Ok(UnconditionalReport {
        c_sigma,
        c_epsilon,
        c_a: c_epsilon,
        bound,
        witness_sigma: mask,
        witness_signs: signs,
        witness_x: encode(&x),
        mode: Mode::Exact,
        slack: bound - c_epsilon,
    })
}

/// Greedy ascent by single flips; stops at a local optimum or when `budget` runs out.
fn climb<S: Clone>(
    start: S,
    flips: std::ops::Range<usize>,
    budget: &mut usize,
    eval: &impl Fn(&S) -> f64,
    flip: &impl Fn(&mut S, usize),
) -> Option<(f64, S)> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut cur_val = eval(&start);
    let mut cur = start;
    loop {
        let mut step: Option<(f64, usize)> = None;
        for i in flips.clone() {
            if *budget == 0 {
                break;
            }
            *budget -= 1;
            let mut cand = cur.clone();
            flip(&mut cand, i);
            let v = eval(&cand);
            if v > cur_val && step.is_none_or(|(bv, _)| v > bv) {
                step = Some((v, i));
            }
        }
        match step {
            Some((v, i)) => {
                flip(&mut cur, i);
                cur_val = v;
            }
            None => return Some((cur_val, cur)),
        }
    }
}

/// Seeded lower bounds on the constants for families too large for enumeration.
///
/// `budget` caps the number of relative-norm evaluations spent on each of the
/// subset and sign searches; two more go to the halves of the best sign pattern. The walk is sequential and deterministic given
/// `(seed, budget)`.
pub fn c_heuristic(frame: &FrameMatrix, budget: usize, seed: u64) -> Result<UnconditionalReport> {
    if budget == 0 {
        return Err(FrameError::Validation("heuristic budget must be at least 1".into()));
    }
    let op = RelativeOperator::new(frame)?;
    let bounds = frame.frame_bounds(DEFAULT_RANK_TOL)?;
    let n = frame.count();
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);

    let eval_mask = |m: &SubsetMask| op.sigma_norm(m).expect("mask length matches");
    let flip_mask = |m: &mut SubsetMask, i: usize| m.toggle(i);
    // the full set always scores 1, so C_sigma >= 1 holds for the report
    let mut best_sigma = (eval_mask(&SubsetMask::full(n)), SubsetMask::full(n));
    let mut left = budget.saturating_sub(1);
    while left > 0 {
        let start = SubsetMask::from_bools((0..n).map(|_| rng.random::<bool>()).collect());
        match climb(start, 0..n, &mut left, &eval_mask, &flip_mask) {
            Some((v, m)) if v > best_sigma.0 => best_sigma = (v, m),
            Some(_) => {}
            None => break,
        }
    }

    let eval_signs = |s: &SignVector| op.norm(&s.weights()).expect("sign length matches");
    let flip_sign = |s: &mut SignVector, i: usize| s.flip(i);
    // 2*1_sigma - 1 scores at least 2 C_sigma - 1 >= C_sigma, keeping the chain intact
    let mut left = budget;
    let mut best_eps: Option<(f64, SignVector)> = None;
    let mut start = SignVector::from_mask(&best_sigma.1);
    loop {
        match climb(start, 1..n, &mut left, &eval_signs, &flip_sign) {
            Some((v, s)) if best_eps.as_ref().is_none_or(|(bv, _)| v > *bv) => best_eps = Some((v, s)),
            Some(_) => {}
            None => break,
        }
        if left == 0 {
            break;
        }
        let mut s: Vec<i8> = (0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        s[0] = 1;
        start = SignVector(s);
    }
    let (c_epsilon, signs) = best_eps.expect("budget >= 1 evaluates the seeded start");
    // T D_eps T* = S_plus - S_minus, so one of the two halves scores at least c_epsilon / 2
    let plus = SubsetMask::from_bools(signs.as_slice().iter().map(|&e| e > 0).collect());
    for m in [plus.complement(), plus] {
        let v = eval_mask(&m);
        if v > best_sigma.0 {
            best_sigma = (v, m);
        }
    }

    let c_a = c_epsilon.max(best_sigma.0);
    let (_, x) = op.norm_with_witness(&best_sigma.1.indicator())?;
    let bound = bounds.sqrt_ratio();
    Ok(UnconditionalReport {
        c_sigma: best_sigma.0,
        c_epsilon,
        c_a,
        bound,
        witness_sigma: best_sigma.1,
        witness_signs: signs,
        witness_x: encode(&x),
        mode: Mode::Heuristic,
        slack: bound - c_a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// `sqrt(B/A)`.
    pub bound: f64,
    /// Exact `C_a`.
    pub max_constant: f64,
    pub slack: f64,
    /// Non-tight family: `C_sigma < sqrt(B/A)` is expected with a positive gap.
    pub strict: bool,
    /// `sqrt(B/A) - C_sigma`.
    pub sigma_gap: f64,
}

/// Checks `C_a <= sqrt(B/A)` on the exact constants; a violation is an invariant failure
/// naming the witness.
pub fn verify_bound(frame: &FrameMatrix, opts: &ExactOptions) -> Result<BoundCheck> {
    let report = exact_report(frame, opts)?;
    let bounds = frame.frame_bounds(opts.rank_tol)?;
    check_report_bound(&report, &bounds)
}

pub fn check_report_bound(report: &UnconditionalReport, bounds: &FrameBounds) -> Result<BoundCheck> {
    let bound = bounds.sqrt_ratio();
    if report.c_a > bound + BOUND_TOL {
        return Err(FrameError::Invariant(format!(
            "C_a = {} exceeds sqrt(B/A) = {bound} (witness signs {:?})",
            report.c_a,
            report.witness_signs.as_slice()
        )));
    }
    Ok(BoundCheck {
        bound,
        max_constant: report.c_a,
        slack: bound - report.c_a,
        strict: bounds.upper - bounds.lower > BOUND_TOL * bounds.upper,
        sigma_gap: bound - report.c_sigma,
    })
}

/// `S_sigma^2 <= C S^2` in the Loewner order, to `1e-9 ||S^2||`.
pub fn psd_square_order(frame: &FrameMatrix, mask: &SubsetMask, c: f64) -> Result<bool> {
    if !(c > 0.0) {
        return Err(FrameError::Validation(format!("C must be positive, got {c}")));
    }
    let s = frame.frame_operator();
    let ss = frame.subset_operator(mask)?;
    let s2 = s.matmul(&s)?.hermitian_part();
    let ss2 = ss.matmul(&ss)?.hermitian_part();
    let diff = s2.scale(c).sub(&ss2)?.hermitian_part();
    let scale = spectral::spectral_norm(&s2);
    Ok(spectral::min_eigenvalue(&diff)? >= -1e-9 * scale)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EqualityDiagnosis {
    /// `||S_sigma x|| / ||S x||`.
    pub ratio: f64,
    pub bound: f64,
    pub is_equality: bool,
    /// When `is_equality`: whether the family is tight.
    pub tight: Option<bool>,
    /// When `is_equality`: whether `x` is orthogonal to every vector outside `sigma`.
    pub orthogonal_to_removed: Option<bool>,
}

/// Ratio `||S_sigma x|| / ||S x||` against `sqrt(B/A)`. Equality forces tightness and
/// `x` orthogonal to the removed vectors; observing equality without both is an
/// invariant failure.
pub fn equality_case_check(frame: &FrameMatrix, mask: &SubsetMask, x: &[Complex]) -> Result<EqualityDiagnosis> {
    const TOL: f64 = 1e-9;
    let s = frame.frame_operator();
    let sx = s.mul_vec(x)?;
    let sx_norm = norm(&sx);
    let scale = spectral::spectral_norm(&s) * norm(x);
    if !(sx_norm > 1e-14 * scale) || scale == 0.0 {
        return Err(FrameError::Validation("S x = 0: ratio undefined".into()));
    }
    let ssx = frame.subset_operator(mask)?.mul_vec(x)?;
    let ratio = norm(&ssx) / sx_norm;
    let bounds = frame.frame_bounds(DEFAULT_RANK_TOL)?;
    let bound = bounds.sqrt_ratio();
    let is_equality = (ratio - bound).abs() <= TOL;
    if !is_equality {
        return Ok(EqualityDiagnosis {
            ratio,
            bound,
            is_equality,
            tight: None,
            orthogonal_to_removed: None,
        });
    }
    let tight = bounds.upper - bounds.lower <= TOL * bounds.upper;
    let coeffs = frame.analysis_apply(x)?;
    let nx = norm(x);
    let orthogonal = mask
        .complement()
        .indices()
        .iter()
        .all(|&i| coeffs[i].abs() <= TOL * nx * norm(frame.vector(i)).max(1.0));
    if !(tight && orthogonal) {
        return Err(FrameError::Invariant(format!(
            "ratio {ratio} meets sqrt(B/A) = {bound} but tight = {tight}, orthogonal = {orthogonal}"
        )));
    }
    Ok(EqualityDiagnosis {
        ratio,
        bound,
        is_equality,
        tight: Some(tight),
        orthogonal_to_removed: Some(orthogonal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::real_vec;

    fn onb(d: usize) -> FrameMatrix {
        FrameMatrix::from_real(
            d,
            (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
        )
        .unwrap()
    }

    fn simplex(n: usize) -> FrameMatrix {
        FrameMatrix::from_real(
            n,
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 } - 1.0 / n as f64).collect())
                .collect(),
        )
        .unwrap()
    }

    fn psi(n: usize) -> FrameMatrix {
        simplex(n).select(&(1..n).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn all_ones_gives_projection() {
        let f = psi(5);
        let v = relative_norm(&f, &[1.0; 4]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_indicator_lower_bound() {
        // sigma = {phi_2, phi_3} of Psi (N = 4): ||S_sigma phi_1|| / ||S phi_1|| = sqrt(4/3)
        let f = psi(4);
        let v = relative_norm(&f, &[1.0, 1.0, 0.0]).unwrap();
        assert!(v >= (4.0f64 / 3.0).sqrt() - 1e-12, "{v}");
    }

    #[test]
    fn onb_constants_are_one() {
        let r = exact_report(&onb(4), &ExactOptions::default()).unwrap();
        assert!((r.c_sigma - 1.0).abs() < 1e-12);
        assert!((r.c_epsilon - 1.0).abs() < 1e-12);
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn single_vector() {
        let f = FrameMatrix::from_real(2, vec![vec![0.6, 0.8]]).unwrap();
        let (e, signs) = c_epsilon_exact(&f).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert_eq!(signs.as_slice(), &[1]);
    }

    #[test]
    fn psi_sigma_exceeds_half_sqrt_n() {
        let (c, mask) = c_sigma_exact(&psi(4)).unwrap();
        assert!(c > 1.0 && c < 2.0, "{c}");
        assert!(mask.size() > 0 && mask.size() < 3);
    }

    #[test]
    fn over_limit_is_refused() {
        let f = FrameMatrix::from_real(1, vec![vec![1.0]; 17]).unwrap();
        assert!(matches!(c_sigma_exact(&f), Err(FrameError::ExactLimit { count: 17, limit: 16 })));
    }

    #[test]
    fn heuristic_tight_frame() {
        let r = c_heuristic(&simplex(6), 50, 7).unwrap();
        assert_eq!(r.mode, Mode::Heuristic);
        for v in [r.c_sigma, r.c_epsilon, r.c_a] {
            assert!((v - 1.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn heuristic_is_deterministic_and_below_exact() {
        let f = psi(7);
        let a = c_heuristic(&f, 40, 3).unwrap();
        let b = c_heuristic(&f, 40, 3).unwrap();
        assert_eq!(a, b);
        let e = exact_report(&f, &ExactOptions::default()).unwrap();
        assert!(a.c_sigma <= e.c_sigma + 1e-12);
        assert!(a.c_epsilon <= e.c_epsilon + 1e-12);
        assert!(a.violations(1e-10, BOUND_TOL).is_empty());
    }

    #[test]
    fn bound_check_tight_and_psi() {
        let t = verify_bound(&simplex(5), &ExactOptions::default()).unwrap();
        assert!((t.bound - 1.0).abs() < 1e-9 && t.slack.abs() < 1e-9 && !t.strict);
        let p = verify_bound(&psi(4), &ExactOptions::default()).unwrap();
        assert!((p.bound - 2.0).abs() < 1e-9);
        assert!(p.max_constant > 1.0 && p.max_constant < 2.0);
        assert!(p.strict);
    }

    #[test]
    fn corrupted_report_fails_bound() {
        let f = psi(4);
        let mut r = exact_report(&f, &ExactOptions::default()).unwrap();
        r.c_a = 3.0;
        assert!(check_report_bound(&r, &f.frame_bounds(1e-10).unwrap()).is_err());
        assert!(!r.violations(1e-10, BOUND_TOL).is_empty());
    }

    #[test]
    fn square_order_cases() {
        let t = simplex(4);
        for bits in 0..16u64 {
            assert!(psd_square_order(&t, &SubsetMask::from_bits(bits, 4), 1.0).unwrap());
        }
        let f = psi(5);
        assert!(psd_square_order(&f, &SubsetMask::empty(4), 1e-3).unwrap());
        let (c, mask) = c_sigma_exact(&f).unwrap();
        assert!(psd_square_order(&f, &mask, c * c + 1e-6).unwrap());
        assert!(!psd_square_order(&f, &mask, c * c - 1e-3).unwrap());
        assert!(psd_square_order(&f, &mask, 0.0).is_err());
    }

    #[test]
    fn equality_cases() {
        let t = simplex(4);
        let x = t.vector(0).to_vec();
        let d = equality_case_check(&t, &SubsetMask::full(4), &x).unwrap();
        assert!(d.is_equality && d.tight == Some(true) && d.orthogonal_to_removed == Some(true));

        let f = FrameMatrix::from_real(2, vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mask = SubsetMask::from_indices(&[0, 1], 3).unwrap();
        let d = equality_case_check(&f, &mask, &real_vec(&[1.0, 0.0])).unwrap();
        assert!((d.ratio - 1.0).abs() < 1e-15);
        assert!(d.ratio < 2f64.sqrt() && !d.is_equality);

        let p = psi(6);
        let phi1 = simplex(6).vector(0).to_vec();
        for bits in 1..(1u64 << 5) - 1 {
            let d = equality_case_check(&p, &SubsetMask::from_bits(bits, 5), &phi1).unwrap();
            assert!(d.ratio < 6f64.sqrt());
        }
        assert!(equality_case_check(&p, &SubsetMask::full(5), &real_vec(&[1.0; 6])).is_err());
    }

    #[test]
    fn report_json_roundtrip() {
        let r = exact_report(&psi(5), &ExactOptions::default()).unwrap();
        let back = UnconditionalReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(r, back);
    }

    #[test]
    fn sign_vector_validation() {
        assert!(SignVector::new(vec![1, 0]).is_err());
        assert!(CoefficientVector::new(vec![0.5, 1.5]).is_err());
        assert_eq!(SignVector::from_key(0b10, 3).as_slice(), &[1, 1, -1]);
    }
}
