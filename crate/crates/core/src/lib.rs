//! Simulation of counterfactual quantum-information transfer through a nested
//! Michelson interferometer with a quantum-dot microcavity acting as a
//! spin-controlled photon blocker.
//!
//! The crate is organised around a small number of value types:
//!
//! * [`amplitude::HybridState`] — four complex amplitudes over
//!   (photon polarization × electron spin) plus the probability already
//!   swallowed by the two photon detectors. All evolution maps act on it.
//! * [`cavity`] — the spin-dependent scattering rules of the double-sided
//!   microcavity, in both the lossless and the lossy (side-leakage) regime.
//! * [`interferometer`] — inner/outer interferometer cycles, the full nested
//!   protocol, and the closed-form recursion used as an independent oracle.
//! * [`analysis`] — derived quantities: entanglement-generation probability,
//!   average transfer fidelity under rotator error, lossy-cavity success
//!   probability, and the Hadamard-and-measure completion step.
//! * [`suite`] — the self-check battery behind the `verify` CLI command.
//!
//! Everything is a pure function of value inputs; states are cheap to clone
//! and safe to use from many threads.

pub mod amplitude;
pub mod analysis;
pub mod cavity;
pub mod interferometer;
mod numeric;
pub mod suite;

use thiserror::Error as ThisError;

/// Largest accepted deviation of a spin-state norm from 1 at construction.
pub const SPIN_NORM_TOLERANCE: f64 = 1e-9;

/// Budget for probability-conservation checks (`norm² + D1 + D2 = 1`) over
/// runs of up to ~10⁵ composed linear maps.
pub const CONSERVATION_TOLERANCE: f64 = 1e-12;

/// Largest tolerated relative weight outside the `{|L↑⟩, |R↓⟩}` manifold for
/// the transfer-completion step.
pub const TARGET_MANIFOLD_TOLERANCE: f64 = 1e-6;

/// Errors reported by fallible operations in this crate.
#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum Error {
    /// A spin state was constructed with amplitudes whose norm deviates from
    /// 1 by more than [`SPIN_NORM_TOLERANCE`].
    #[error("spin state norm {norm} deviates from 1 by more than {SPIN_NORM_TOLERANCE:e}")]
    UnnormalizedSpin { norm: f64 },

    /// The fidelity quadrature was asked for fewer nodes than the minimum.
    #[error("quadrature needs at least {min} nodes, got {got}")]
    TooFewQuadPoints { got: usize, min: usize },

    /// The fidelity quadrature kept changing after the node cap was reached.
    #[error("quadrature did not converge below {tolerance:e} at {nodes} nodes (last delta {delta:e})")]
    QuadratureNotConverged {
        nodes: usize,
        delta: f64,
        tolerance: f64,
    },

    /// The transfer-completion step was fed a state with too much weight
    /// outside the `{|L↑⟩, |R↓⟩}` manifold.
    #[error("state carries relative weight {weight:e} outside the {{|L↑⟩, |R↓⟩}} manifold")]
    OutsideTargetManifold { weight: f64 },
}
