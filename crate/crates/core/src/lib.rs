//! Closed-system quantum dynamics on finite-dimensional Hilbert spaces with
//! analyzers for time-energy uncertainty relations.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod qstat;
pub mod random;
pub mod scalar;
pub mod toymodel;
pub mod uncertainty;

pub use dynamics::{
    check_conservation, ehrenfest_residual, evolve, evolve_with_states, offset_invariance_check, shift_hamiltonian,
    ConservationReport, Evolution, OffsetReport, TimeGrid,
};
pub use error::{Error, Result};
pub use hilbert::{commutator, hermitian_eigendecomposition, inner, propagator};
pub use qstat::{expectation, l1_coherence, stats, CoherenceSummary, StatSummary};
pub use scalar::Scalar;
pub use toymodel::{pauli, qubit_scenario, tick_tock, Axis, TickTockReport};
pub use uncertainty::{
    ml_bounds, ml_tau_perp, mt_sample, qsl_tau, robertson, schrodinger, BoundCheck, Extended, MlBounds,
    Orthogonalization, OrthogonalizationResult,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = hilbert::ComplexMatrix<f64>;
pub type Observable = hilbert::HermitianObservable<f64>;
pub type State = hilbert::QuantumState<f64>;
pub type Spectrum = hilbert::SpectralDecomposition<f64>;
pub type Scenario = dynamics::Scenario<f64>;
pub type Trajectory = dynamics::Trajectory<f64>;
pub type QubitPreset = toymodel::QubitPreset<f64>;
