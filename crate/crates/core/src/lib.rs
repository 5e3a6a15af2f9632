//! Complex scaling treatment of the Swanson oscillator in the region where
//! it behaves as an inverted oscillator (`m > 0`, `Ω² < 0`).
//!
//! The crate is organised bottom-up: [`model`] holds parameters and derived
//! scales, [`special`] the special functions and quadrature, [`eigen`] the
//! discrete and continuum eigenfunctions, [`propagator`] kernels and time
//! evolution, [`packets`] the three benchmark packets, [`wigner`] phase-space
//! functions, [`rhs`] the generalized-eigenfunction (rigged Hilbert space)
//! comparison and [`conformance`] the end-to-end check suite.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments)]

pub mod conformance;
pub mod eigen;
pub mod error;
pub mod model;
pub mod packets;
pub mod propagator;
pub mod rhs;
pub mod special;
pub mod wigner;

pub use error::{CsmError, Result};
pub use model::{Branch, DerivedQuantities, ModelParams, RegionClass};
pub use num_complex::Complex64;
