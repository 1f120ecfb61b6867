//! Simulation of periodically driven spin lattices by high-frequency kick
//! operators (QHiFFS), with Trotter and exact references, gate-level
//! compilation and analytic error estimates.
//!
//! Numerical types are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod circuit;
pub mod eigen;
pub mod error;
pub mod error_analysis;
pub mod evolve;
pub mod kick;
pub mod lattice;
pub mod observables;
pub mod pauli;
pub mod propagators;
pub mod scalar;
pub mod state;

pub use circuit::{compile_qhiffs, simulate_circuit, Circuit, Gate, GateCounts};
pub use eigen::{ground_state, ground_state_with, EigenMethod, GroundStateOptions};
pub use error::{Error, Result};
pub use evolve::{evolve_exact, evolve_exact_report, EvolutionSettings, Scheme};
pub use kick::{classify, expand, heff_truncated, kick_at, CaseTag, HighFreqExpansion};
pub use lattice::{
    build_bnnni, build_custom, neighbor_pairs, BnnniParams, FloquetHamiltonian, LatticeSpec, ModelDescription,
};
pub use observables::{nnn_correlation, sample_correlation, SampledCorrelation};
pub use pauli::{commutator, PauliString, PauliSum};
pub use propagators::{qhiffs_evolve, trotter_evolve, unitary_of, DenseUnitary, Exact, Propagator, Qhiffs, Trotter};
pub use scalar::{Real, C};
pub use state::{exp_apply, expectation, StateVector};

/// Exact rational numbers for the error coefficients.
pub type Rational = num_rational::Ratio<i128>;

pub type PauliSum64 = PauliSum<f64>;
pub type PauliSum32 = PauliSum<f32>;
pub type StateVector64 = StateVector<f64>;
pub type StateVector32 = StateVector<f32>;
pub type FloquetHamiltonian64 = FloquetHamiltonian<f64>;
pub type FloquetHamiltonian32 = FloquetHamiltonian<f32>;
