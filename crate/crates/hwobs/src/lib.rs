//! Heisenberg-Weyl observable toolkit for d-dimensional qudits.
//!
//! The crate builds the Hermitian Heisenberg-Weyl (HW) observable basis
//! Q(l,m), encodes and decodes density matrices as real Bloch vectors in that
//! basis, classifies (anti-)commutation of observable pairs on the discrete
//! phase-space grid, evaluates the generalized anti-commutativity bound and
//! the entanglement witnesses built on it, and simulates the ancilla-qubit
//! Ramsey measurement of the observables. Everything is deterministic: all
//! randomness flows through explicit seeds.

pub mod acbound;
pub mod bloch;
pub mod commutation;
pub mod demos;
pub mod golden;
pub mod hw_basis;
pub mod io;
pub mod numerics;
pub mod ramsey;
pub mod states;

pub use acbound::{ObservableSet, PairSum, WitnessReport, WitnessSpec};
pub use bloch::{BlochVector, DensityMatrix};
pub use hw_basis::{PhasePoint, CHI};
pub use numerics::ComplexMatrix;
