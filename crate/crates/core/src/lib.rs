//! Finite frame analysis.
//!
//! Frame and Gramian operators, optimal frame bounds, the unconditional constants
//! `C_sigma`, `C_epsilon`, `C_a` of frame expansions (exhaustive and heuristic),
//! the decomposition of 1-unconditional families into orthogonal sums of tight
//! frames, and frame multipliers. Linear algebra runs on a small built-in dense
//! kernel with a cyclic Jacobi eigensolver.

pub mod complex;
pub mod decomposition;
pub mod error;
pub mod exec;
pub mod frame;
pub mod gallery;
pub mod io;
pub mod matrix;
pub mod multiplier;
pub mod spectral;
pub mod unconditional;
pub mod verify;

pub use complex::Complex;
pub use error::{FrameError, Result};
pub use exec::Execution;
pub use frame::{FrameBounds, FrameClass, FrameMatrix, SubsetMask};
pub use matrix::{Field, Matrix};
pub use spectral::SpectralSummary;
pub use unconditional::{ExactOptions, Mode, RelativeOperator, SignVector, UnconditionalReport};
