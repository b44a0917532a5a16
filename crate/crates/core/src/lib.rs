//! Kinematics engine for Hamiltonian lattice gauge theory with fermions on
//! finite cubic lattices.
//!
//! The crate builds the truncated link Hilbert spaces and the fermionic Fock
//! space of a lattice region, assembles gauge transformations, Gauss-law
//! generators and projectors, gauge-invariant observables and the lattice
//! Hamiltonian, and provides a finite-dimensional constraint-reduction engine
//! (null ideal, observables, physical algebra) working on operator spans.
//!
//! Module map:
//! - [`lattice`]: sites, oriented links, plaquettes, regions and envelopes.
//! - [`gauge_group`]: Z_N, U(1), SU(2) elements, irreps, Lie data, Clebsch–Gordan, Haar quadrature.
//! - [`link_space`]: electric-basis model of L²(G) with translations and multiplication operators.
//! - [`fermion_space`]: Jordan–Wigner Fock space and gauge-covariant second quantization.
//! - [`gauge_action`]: full gauge unitaries, Gauss generators and gauge-invariant projectors.
//! - [`observables`]: Wilson loops, Wilson-line bilinears and the Hamiltonian.
//! - [`tprocedure`]: constraint reduction on matrix algebras.
//! - [`solver`]: dense and Lanczos hermitian eigensolvers.
//! - [`verify`]: invariant suite used by the CLI `verify` command.

// Index loops mirror the component formulas of the linear algebra.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fermion_space;
pub mod gauge_action;
pub mod gauge_group;
pub mod lattice;
pub mod linalg;
pub mod link_space;
pub mod observables;
pub mod solver;
pub mod tprocedure;
pub mod verify;

pub use error::{LgkError, Result};
pub use linalg::{SpMat, C64};
