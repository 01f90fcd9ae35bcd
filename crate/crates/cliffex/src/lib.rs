//! Clifford extraction and absorption for circuits built from Pauli
//! rotations `exp(i t P)`.
//!
//! [`extract`] pulls the Clifford part of every rotation to the end of the
//! circuit, then [`absorb`] folds that tail into the measurement, either by
//! rewriting observables or by replaying a CNOT network on the measured
//! bitstrings. [`oracle`] is a small dense simulator for checking all of it.

pub mod absorb;
pub mod circuit;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod extract;
pub mod oracle;
pub mod pauli;
pub mod problems;

pub use circuit::{peephole, Circuit, Gate};
pub use clifford::{decompose_h_cnot, CliffordGate, ConjugationTableau, HCnotForm};
pub use error::{Error, Result};
pub use extract::{extract, ExtractionResult};
pub use oracle::DenseOracle;
pub use pauli::{Letter, PauliString, PauliTerm, Sign};
