//! Numerical toolkit for the stability of axially compressed circular
//! cylindrical shells treated as three-dimensional elastic bodies.
//!
//! The crate computes Korn and Korn-type constants, constitutively linearized
//! buckling loads, trivial-branch stresses (perfect, load-imperfect and
//! Mooney-Rivlin), Rayleigh ratios of an explicit test field, and the
//! first-order stress redistribution around a dent.
//!
//! Layout:
//! - [`tensor`]: cylindrical tensor calculus and the isotropic stiffness.
//! - [`quadrature`]: Gauss-Legendre rules and Legendre polynomials.
//! - [`basis`]: Fourier x trig x Legendre discretization and Gram assembly.
//! - [`pencil`]: symmetric-definite generalized eigenproblems.
//! - [`spectra`]: Korn constant, safe load, buckling load and friends.
//! - [`branch`]: SVK and load-imperfect linear trivial branches.
//! - [`mooney`]: incompressible helical trivial branch.
//! - [`ansatz`]: the h^{1/4}-scaled test field and its ratios.
//! - [`dent`]: stress potential around a localized dent.
//! - [`scaling`]: log-log fits of swept constants.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ansatz;
pub mod basis;
pub mod branch;
pub mod dent;
pub mod error;
pub mod mooney;
pub mod pencil;
pub mod quadrature;
pub mod scaling;
pub mod spectra;
pub mod tensor;

pub use error::{Error, Result};
pub use tensor::{ShellParams, SymTensor3, Tensor3};
