//! Property suite run against a single input frame.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::frame::{FrameBounds, FrameMatrix, SubsetMask, DEFAULT_RANK_TOL};
use crate::gallery;
use crate::spectral;
use crate::unconditional::{c_heuristic, exact_report, psd_square_order, ExactOptions, Mode, RelativeOperator, UnconditionalReport, BOUND_TOL};

pub const CHAIN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: Mode,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.properties.iter().filter(|p| !p.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub exact: ExactOptions,
    pub budget: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exact: ExactOptions::default(),
            budget: 64,
            seed: 0,
        }
    }
}

fn prop(name: &str, passed: bool, detail: String) -> PropertyResult {
    PropertyResult {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Masks to test: all of them for `N <= 10`, otherwise a seeded sample of 64.
fn masks(n: usize, seed: u64) -> Vec<SubsetMask> {
    if n <= 10 {
        return (0..1u64 << n).map(|b| SubsetMask::from_bits(b, n)).collect();
    }
    use rand::Rng;
    let mut rng = gallery::rng(seed);
    (0..64)
        .map(|_| SubsetMask::from_bools((0..n).map(|_| rng.random::<bool>()).collect()))
        .collect()
}

/// Structural properties of the frame operator that do not depend on the constants.
pub fn operator_properties(frame: &FrameMatrix, seed: u64) -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    let bounds = frame.frame_bounds(DEFAULT_RANK_TOL)?;
    out.push(prop(
        "frame_bounds",
        bounds.lower > 0.0 && bounds.lower <= bounds.upper,
        format!("A = {}, B = {}, rank = {}", bounds.lower, bounds.upper, bounds.rank),
    ));

    let s = frame.frame_operator();
    let s_norm = spectral::spectral_norm(&s);
    let cut = DEFAULT_RANK_TOL * s_norm;
    let nonzero = |m| -> Vec<f64> {
        spectral::eigenvalues_unchecked(&m).into_iter().filter(|&l| l > cut).collect()
    };
    let ss = nonzero(s.clone());
    let gs = nonzero(frame.gramian());
    let spectra_ok = ss.len() == gs.len() && ss.iter().zip(&gs).all(|(a, b)| (a - b).abs() <= 1e-9 * s_norm.max(1.0));
    out.push(prop(
        "gramian_spectrum",
        spectra_ok,
        format!("{} nonzero eigenvalues of S, {} of G", ss.len(), gs.len()),
    ));

    let mut worst_split = 0.0f64;
    let mut worst_order = 0.0f64;
    for m in masks(frame.count(), seed) {
        let a = frame.subset_operator(&m)?;
        let b = frame.subset_operator(&m.complement())?;
        worst_split = worst_split.max(a.add(&b)?.max_abs_diff(&s));
        worst_order = worst_order.min(spectral::min_eigenvalue(&s.sub(&a)?.hermitian_part())?);
    }
    out.push(prop(
        "subset_split",
        worst_split <= 1e-12 * s_norm.max(1.0),
        format!("max |S_sigma + S_sigma^c - S| = {worst_split:e}"),
    ));
    out.push(prop(
        "subset_order",
        worst_order >= -1e-10 * s_norm.max(1.0),
        format!("min eigenvalue of S - S_sigma = {worst_order:e}"),
    ));
    Ok(out)
}

/// Checks a constants report against the frame: chain inequalities, the `sqrt(B/A)`
/// bound, tightness, strictness and square-order spot checks at the witness.
pub fn report_properties(frame: &FrameMatrix, report: &UnconditionalReport, bounds: &FrameBounds) -> Result<Vec<PropertyResult>> {
    let mut out = Vec::new();
    let chain = report.violations(CHAIN_TOL, f64::INFINITY);
    out.push(prop("chain_inequalities", chain.is_empty(), chain.join("; ")));

    let bound = bounds.sqrt_ratio();
    out.push(prop(
        "sqrt_ratio_bound",
        report.c_a <= bound + BOUND_TOL && (report.bound - bound).abs() <= 1e-9 * bound,
        format!("C_a = {}, sqrt(B/A) = {bound}, slack = {}", report.c_a, bound - report.c_a),
    ));

    let tight = bounds.upper - bounds.lower <= BOUND_TOL * bounds.upper;
    if tight {
        let ok = [report.c_sigma, report.c_epsilon, report.c_a].iter().all(|c| (c - 1.0).abs() <= 1e-9);
        out.push(prop("tight_constants_one", ok, format!("slack = {:e}", bound - report.c_a)));
    } else if report.mode == Mode::Exact {
        let gap = bound - report.c_sigma;
        out.push(prop("strict_gap", gap > 0.0, format!("sqrt(B/A) - C_sigma = {gap:e}")));
    }

    let op = RelativeOperator::new(frame)?;
    let at = op.sigma_norm(&report.witness_sigma)?;
    out.push(prop(
        "witness_value",
        (at - report.c_sigma).abs() <= 1e-9 * report.c_sigma.max(1.0),
        format!("||S_sigma S^+|| at witness = {at}, reported C_sigma = {}", report.c_sigma),
    ));
    let holds = psd_square_order(frame, &report.witness_sigma, at * at + 1e-6)?;
    out.push(prop("square_order_above", holds, format!("S_sigma^2 <= (C^2 + 1e-6) S^2 at C = {at}")));
    if bounds.ratio() < 100.0 && at * at > 1e-3 {
        let fails = !psd_square_order(frame, &report.witness_sigma, at * at - 1e-3)?;
        out.push(prop("square_order_below", fails, format!("S_sigma^2 <= (C^2 - 1e-3) S^2 must fail at C = {at}")));
    }
    Ok(out)
}

pub fn verify_frame(frame: &FrameMatrix, opts: &VerifyOptions) -> Result<VerifyReport> {
    let bounds = frame.frame_bounds(opts.exact.rank_tol)?;
    let report = if frame.count() <= opts.exact.limit {
        exact_report(frame, &opts.exact)?
    } else {
        c_heuristic(frame, opts.budget, opts.seed)?
    };
    verify_with_report(frame, &report, &bounds, opts.seed)
}

pub fn verify_with_report(frame: &FrameMatrix, report: &UnconditionalReport, bounds: &FrameBounds, seed: u64) -> Result<VerifyReport> {
    let mut properties = operator_properties(frame, seed)?;
    properties.extend(report_properties(frame, report, bounds)?);
    let passed = properties.iter().all(|p| p.passed);
    Ok(VerifyReport {
        mode: report.mode,
        properties,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{shift_frame, simplex_frame, simplex_subframe};

    #[test]
    fn gallery_frames_pass() {
        for f in [simplex_frame(5).unwrap(), simplex_subframe(6).unwrap(), shift_frame(6).unwrap()] {
            let r = verify_frame(&f, &VerifyOptions::default()).unwrap();
            assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn tight_frame_reports_zero_slack() {
        let r = verify_frame(&simplex_frame(4).unwrap(), &VerifyOptions::default()).unwrap();
        assert!(r.properties.iter().any(|p| p.name == "tight_constants_one" && p.passed));
    }

    #[test]
    fn corrupted_report_fails() {
        let f = simplex_subframe(5).unwrap();
        let bounds = f.frame_bounds(DEFAULT_RANK_TOL).unwrap();
        let mut report = exact_report(&f, &ExactOptions::default()).unwrap();
        report.c_epsilon = 0.5;
        report.c_a = 10.0;
        let r = verify_with_report(&f, &report, &bounds, 0).unwrap();
        assert!(!r.passed);
        let failed: Vec<_> = r.failures().map(|p| p.name.as_str()).collect();
        assert!(failed.contains(&"chain_inequalities"));
        assert!(failed.contains(&"sqrt_ratio_bound"));
    }
}
