//! Exact dynamics of two interacting spin-1/2 particles.
//!
//! The crate evolves a pair of qubits under the anisotropic exchange
//! Hamiltonian
//!
//! ```text
//! H = (ω₁/2) σz⊗I + (ω₂/2) I⊗σz + 2λ (aₓ σx⊗σx + a_y σy⊗σy + a_z σz⊗σz)
//! ```
//!
//! (ħ = 1, S = σ/2), tracks the Schmidt decomposition and von Neumann
//! entanglement entropy along the trajectory, and compares the exact evolution
//! against the product-precession ansatz in which each Schmidt branch simply
//! Larmor-precesses with a frozen Schmidt angle.
//!
//! All amplitudes use the fixed basis ordering
//! `|+z,+z⟩, |+z,−z⟩, |−z,+z⟩, |−z,−z⟩`.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod falsifier;
pub mod hamiltonian;
mod linalg;
pub mod qstate;
pub mod schmidt;

pub use dynamics::{
    closed_form_alpha_beta, counterexample_initial, simulate_trajectory, CounterexampleParams,
    TimeGrid, Trajectory, TrajectoryPoint,
};
pub use error::{Error, Result};
pub use falsifier::{falsify, gw_ansatz_state, AnsatzParams, FalsificationReport, Verdict};
pub use hamiltonian::{
    build_hamiltonian, evolve, propagator, propagator_oracle, spectrum, HamiltonianParams,
    HermitianMatrix4, Propagator4, Spectrum4,
};
pub use qstate::{
    antipode, fidelity, single_qubit_state, tensor, Amplitude, BlochAngles, SingleQubitState,
    TwoQubitState,
};
pub use schmidt::{
    entanglement_entropy, entropy_from_alpha, recompose, reduced_density, schmidt_decompose,
    schmidt_fixed_basis, FixedBasisSchmidt, ReducedDensity2, SchmidtForm, Subsystem,
};
