//! Frame multipliers `M x = sum_i m_i <x, psi_i> phi_i`.

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{FrameError, Result};
use crate::frame::FrameMatrix;
use crate::matrix::Matrix;
use crate::spectral;
use crate::unconditional::{c_epsilon_exact_with, ExactOptions, RelativeOperator};

#[derive(Debug, Clone)]
pub struct MultiplierSpec {
    pub symbol: Vec<Complex>,
    pub analysis: FrameMatrix,
    pub synthesis: FrameMatrix,
}

impl MultiplierSpec {
    pub fn new(symbol: Vec<Complex>, analysis: FrameMatrix, synthesis: FrameMatrix) -> Result<Self> {
        if analysis.count() != synthesis.count() {
            return Err(FrameError::Validation(format!(
                "analysis frame has {} vectors, synthesis frame {}",
                analysis.count(),
                synthesis.count()
            )));
        }
        if analysis.dim() != synthesis.dim() {
            return Err(FrameError::Validation(format!(
                "analysis frame lives in dimension {}, synthesis frame in {}",
                analysis.dim(),
                synthesis.dim()
            )));
        }
        if analysis.field() != synthesis.field() {
            return Err(FrameError::Validation("analysis and synthesis frames have different fields".into()));
        }
        if symbol.len() != synthesis.count() {
            return Err(FrameError::LengthMismatch {
                expected: synthesis.count(),
                actual: symbol.len(),
            });
        }
        Ok(MultiplierSpec {
            symbol,
            analysis,
            synthesis,
        })
    }

    /// `psi = phi` with a real symbol.
    pub fn self_multiplier(frame: &FrameMatrix, symbol: &[f64]) -> Result<Self> {
        MultiplierSpec::new(symbol.iter().map(|&m| Complex::real(m)).collect(), frame.clone(), frame.clone())
    }
}

/// `sum_i m_i phi_i psi_i*`.
pub fn multiplier_matrix(spec: &MultiplierSpec) -> Matrix {
    let d = spec.synthesis.dim();
    let field = spec.synthesis.field().join(if spec.symbol.iter().any(|m| m.im != 0.0) {
        crate::matrix::Field::Complex
    } else {
        crate::matrix::Field::Real
    });
    let mut m = Matrix::zeros(field, d, d);
    for ((&mi, phi), psi) in spec.symbol.iter().zip(spec.synthesis.vectors()).zip(spec.analysis.vectors()) {
        if mi != Complex::ZERO {
            m.add_outer(mi, phi, psi);
        }
    }
    m
}

pub fn multiplier_norm(spec: &MultiplierSpec) -> f64 {
    spectral::spectral_norm(&multiplier_matrix(spec))
}

/// `sup_{|a_i| <= 1} ||M_{a, phi, phi} S^+||`, i.e. `C_a` of the frame. At most 1
/// (to `1e-8`) exactly when the family is an orthogonal sum of tight frames.
pub fn box_multiplier_sup_relative(frame: &FrameMatrix, opts: &ExactOptions) -> Result<f64> {
    let op = RelativeOperator::with_tol(frame, opts.rank_tol)?;
    Ok(c_epsilon_exact_with(&op, opts)?.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub dim: usize,
    pub count: usize,
    pub norm: f64,
    /// `||M S^+||` when the analysis and synthesis frames coincide and the symbol is real.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_norm: Option<f64>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

pub fn multiplier_report(spec: &MultiplierSpec) -> Result<MultiplierReport> {
    let m = multiplier_matrix(spec);
    let relative_norm = if spec.analysis == spec.synthesis && spec.symbol.iter().all(|z| z.im == 0.0) {
        let w: Vec<f64> = spec.symbol.iter().map(|z| z.re).collect();
        Some(RelativeOperator::new(&spec.synthesis)?.norm(&w)?)
    } else {
        None
    };
    Ok(MultiplierReport {
        dim: spec.synthesis.dim(),
        count: spec.synthesis.count(),
        norm: spectral::spectral_norm(&m),
        relative_norm,
        matrix: m.to_rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::SubsetMask;
    use crate::gallery::{simplex_frame, simplex_subframe};
    use crate::unconditional::c_sigma_exact;

    #[test]
    fn ones_symbol_gives_frame_operator() {
        let f = simplex_subframe(5).unwrap();
        let m = multiplier_matrix(&MultiplierSpec::self_multiplier(&f, &[1.0; 4]).unwrap());
        assert!(m.max_abs_diff(&f.frame_operator()) < 1e-15);
    }

    #[test]
    fn indicator_symbol_gives_subset_operator() {
        let f = simplex_subframe(6).unwrap();
        let mask = SubsetMask::from_bits(0b10110, 5);
        let m = multiplier_matrix(&MultiplierSpec::self_multiplier(&f, &mask.indicator()).unwrap());
        assert!(m.max_abs_diff(&f.subset_operator(&mask).unwrap()) <= 1e-14);
    }

    #[test]
    fn signs_on_orthonormal_basis() {
        let f = FrameMatrix::from_real(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let m = multiplier_matrix(&MultiplierSpec::self_multiplier(&f, &[1.0, -1.0]).unwrap());
        assert_eq!(m, Matrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]));
    }

    #[test]
    fn norms() {
        let p = simplex_frame(5).unwrap();
        assert!((multiplier_norm(&MultiplierSpec::self_multiplier(&p, &[1.0; 5]).unwrap()) - 1.0).abs() < 1e-12);
        let scaled = p.map_vectors(&Matrix::identity(p.field(), 5).scale(3f64.sqrt())).unwrap();
        let n = multiplier_norm(&MultiplierSpec::self_multiplier(&scaled, &[1.0; 5]).unwrap());
        assert!((n - 3.0).abs() < 1e-12);

        let psi = simplex_subframe(4).unwrap();
        let (_, mask) = c_sigma_exact(&psi).unwrap();
        let n = multiplier_norm(&MultiplierSpec::self_multiplier(&psi, &mask.indicator()).unwrap());
        let direct = spectral::spectral_norm(&psi.subset_operator(&mask).unwrap());
        assert!((n - direct).abs() < 1e-14);
    }

    #[test]
    fn box_sup_cases() {
        let opts = ExactOptions::default();
        assert!(box_multiplier_sup_relative(&simplex_frame(5).unwrap(), &opts).unwrap() <= 1.0 + 1e-8);
        assert!(box_multiplier_sup_relative(&simplex_subframe(5).unwrap(), &opts).unwrap() > 1.0);
        let one = FrameMatrix::from_real(3, vec![vec![1.0, 2.0, 2.0]]).unwrap();
        assert!((box_multiplier_sup_relative(&one, &opts).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mismatched_specs() {
        let a = simplex_frame(4).unwrap();
        let b = simplex_frame(5).unwrap();
        assert!(MultiplierSpec::new(vec![Complex::ONE; 4], a.clone(), b).is_err());
        assert!(MultiplierSpec::new(vec![Complex::ONE; 3], a.clone(), a).is_err());
    }
}
