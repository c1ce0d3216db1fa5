//! Coherence flow of a qubit coupled to an environment through the standard
//! noise channels.
//!
//! The qubit state `ρ^S` is embedded as `ρ^S ⊗ |E_0⟩⟨E_0|` and pushed through
//! the isometric dilation `|S_l⟩|E_0⟩ ↦ Σ_j K_j|S_l⟩ ⊗ |E_j⟩` of a Kraus set.
//! On the resulting joint state we measure l1-norm coherence (total, local,
//! non-local), concurrence and negativity, and compare against closed-form
//! predictions for every channel.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices, Jacobi Hermitian eigensolver, PSD square root.
//! * [`states`]: Bloch vectors, density matrices, l1 coherence, random sampling.
//! * [`channels`]: Kraus sets, joint evolution, partial traces.
//! * [`measures`]: coherence split, concurrence, partial transpose, negativity.
//! * [`oracles`]: closed-form per-channel predictions.
//! * [`cli`]: sweeps, figure fixtures and verification runs behind the binary.

pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod oracles;
pub mod states;

pub use channels::{
    apply_channel, evolve_joint, kraus_set, mix_kraus, partial_trace, prob_from_time, ChannelKind,
    JointState, KrausSet, Subsystem,
};
pub use error::{Error, Result};
pub use linalg::{hermitian_eigenvalues, psd_sqrt, trace_norm, Complex, ComplexMatrix};
pub use measures::{
    coherence_split, concurrence, negativity, partial_transpose, pdc_gap, CoherenceSplit,
};
pub use oracles::{pdc_negativity_coeffs, predict, PdcQuartic, PredictionRecord};
pub use states::{
    bloch_from_density, density_from_bloch, l1_coherence, sample_random_bloch, BlochVector,
    DensityMatrix, StateKind,
};
