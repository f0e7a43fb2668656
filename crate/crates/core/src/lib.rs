//! Symmetry analysis and open-system dynamics of small quantum-dot qubit
//! networks.
//!
//! The crate covers the full pipeline for 2- and 3-qubit networks with
//! dipole-dipole coupling and a phonon bath:
//!
//! * [`model`]: pseudo-spin operators, the rotating-wave network Hamiltonian,
//!   Ising/annealing Hamiltonians, classical Hopfield energies and the
//!   3-qubit coupling topologies.
//! * [`symmetry`]: Bell basis, the quartet + two-doublet group basis and
//!   block-structure reports.
//! * [`spectra`]: cyclic Jacobi eigensolver for Hermitian matrices, the
//!   closed-form triangle spectrum and field sweeps.
//! * [`bath`]: spectral densities, thermal occupation, Markovian dephasing
//!   rates and bath coupling operators.
//! * [`dynamics`]: RK4 propagation of the von Neumann and Lindblad equations,
//!   annealing schedules and an exact finite-bath oracle.
//! * [`analysis`]: populations, leakage, purity, entropy, concurrence and
//!   decoherence-free-subspace reports.
//! * [`runner`]: JSON experiment configs, CSV/manifest output and the built-in
//!   verification suite.
//!
//! Conventions: energies in meV, `ħ = 1` (time unit ħ/meV ≈ 0.6582 ps).
//! Qubit `i` is bit `i` of the computational index, so the state label
//! `"00X"` is index 1 and has qubit 0 excited.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bath;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod model;
pub mod runner;
pub mod spectra;
pub mod symmetry;

pub use error::{Error, Result};
pub use linalg::{HermitianOperator, Operator, C64};
