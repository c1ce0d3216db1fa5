//! Coherence bookkeeping and entanglement quantifiers on joint states.

use crate::channels::{evolve_joint, kraus_set, partial_trace, ChannelKind, JointState, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, kron, pauli, psd_sqrt, Complex, ComplexMatrix,
};
use crate::states::{density_from_bloch, l1_coherence, BlochVector, DensityMatrix};

/// Eigenvalues of `ρ` at or below this are treated as outside its support
/// when forming the concurrence matrix.
const SUPPORT_TOL: f64 = 1e-14;

/// Total coherence and its local / non-local parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSplit {
    pub total: f64,
    pub system: f64,
    pub environment: f64,
    /// `system + environment`.
    pub local: f64,
    /// `total − local`.
    pub nonlocal: f64,
}

pub fn coherence_split(joint: &JointState) -> CoherenceSplit {
    let total = l1_coherence(joint.density());
    let system = l1_coherence(&partial_trace(joint, Subsystem::System));
    let environment = l1_coherence(&partial_trace(joint, Subsystem::Environment));
    let local = system + environment;
    CoherenceSplit {
        total,
        system,
        environment,
        local,
        nonlocal: total - local,
    }
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::dims(
            "4x4 two-qubit state",
            format!("{0}x{0}", rho.dim()),
        ))
    }
}

/// `σ_2 ⊗ σ_2`.
fn yy() -> ComplexMatrix {
    kron(&pauli(2), &pauli(2))
}

/// Spin-flipped state `ρ̃ = (σ_2⊗σ_2) ρ* (σ_2⊗σ_2)`.
pub fn spin_flip(rho: &ComplexMatrix) -> ComplexMatrix {
    let yy = yy();
    yy.matmul(&rho.conj()).matmul(&yy)
}

/// Eigenvalues of `ρρ̃`, descending, obtained from the Hermitian matrix
/// `√ρ ρ̃ √ρ` (same spectrum). Tiny negative round-off is clamped to zero.
pub fn wootters_eigenvalues(rho: &DensityMatrix) -> Result<Vec<f64>> {
    require_two_qubit(rho)?;
    let root = psd_sqrt(rho.matrix())?;
    let m = root.matmul(&spin_flip(rho.matrix())).matmul(&root);
    // Symmetrize away the round-off of the triple product.
    let m = (&m + &m.adjoint()).scale_real(0.5);
    Ok(hermitian_eigenvalues(&m)?
        .into_iter()
        .map(|l| l.max(0.0))
        .collect())
}

/// Wootters concurrence `max(0, √λ1 − √λ2 − √λ3 − √λ4)`.
///
/// Computed from the singular values of `τ_ij = v_iᵀ(σ_2⊗σ_2)v_j`, where
/// `v_i = √μ_i e_i` runs over the support of `ρ`; their squares are the
/// non-zero eigenvalues of `ρρ̃`. For rank ≤ 2 the singular-value gap is
/// taken in closed form, `σ1 − σ2 = √(‖τ‖_F² − 2|det τ|)`, which keeps the
/// exact zeros of `ρρ̃` from leaking `√ε` error into the result.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let eig = hermitian_eigen(rho.matrix())?;
    let yy = yy();
    let support: Vec<Vec<Complex>> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > SUPPORT_TOL)
        .map(|(k, &mu)| eig.vector(k).into_iter().map(|z| z * mu.sqrt()).collect())
        .collect();
    let r = support.len();
    let tau = ComplexMatrix::from_fn(r.max(1), r.max(1), |i, j| {
        if r == 0 {
            return Complex::new(0.0, 0.0);
        }
        let flipped: Vec<Complex> = (0..4)
            .map(|a| (0..4).map(|b| yy.get(a, b) * support[j][b]).sum())
            .collect();
        (0..4).map(|a| support[i][a] * flipped[a]).sum()
    });
    let value = match r {
        0 => 0.0,
        1 => tau.get(0, 0).norm(),
        2 => {
            let det = tau.get(0, 0) * tau.get(1, 1) - tau.get(0, 1) * tau.get(1, 0);
            let fro2 = tau.frobenius_norm().powi(2);
            (fro2 - 2.0 * det.norm()).max(0.0).sqrt()
        }
        _ => {
            let gram = tau.adjoint().matmul(&tau);
            let sv: Vec<f64> = hermitian_eigenvalues(&gram)?
                .into_iter()
                .map(|l| l.max(0.0).sqrt())
                .collect();
            sv[0] - sv[1..].iter().sum::<f64>()
        }
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Transpose on the environment index: `⟨s j|T_E(ρ)|t k⟩ = ⟨s k|ρ|t j⟩`.
pub fn partial_transpose(joint: &JointState) -> ComplexMatrix {
    partial_transpose_env(joint.matrix(), joint.env_dim())
}

pub(crate) fn partial_transpose_env(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let n = m.rows();
    ComplexMatrix::from_fn(n, n, |row, col| {
        let (s, j) = (row / d, row % d);
        let (t, k) = (col / d, col % d);
        m.get(s * d + k, t * d + j)
    })
}

/// `E_n = (‖T_E(ρ)‖₁ − 1)/2 = Σ_j (|λ_j| − λ_j)/2` over the partial-transpose spectrum.
pub fn negativity(joint: &JointState) -> Result<f64> {
    let ev = hermitian_eigenvalues(&partial_transpose(joint))?;
    Ok(ev.iter().map(|l| 0.5 * (l.abs() - l)).sum())
}

/// Entanglement compared against non-local coherence: concurrence for a
/// two-level environment, `2·E_n` otherwise.
pub fn joint_entanglement(joint: &JointState) -> Result<f64> {
    if joint.env_dim() == 2 {
        concurrence(joint.density())
    } else {
        Ok(2.0 * negativity(joint)?)
    }
}

/// PDC gap `Δ = C_nl − 2E_n` of a phase-damping joint state.
pub fn pdc_gap(joint: &JointState) -> Result<f64> {
    if joint.env_dim() != ChannelKind::Pdc.env_dim() {
        return Err(Error::dims(
            "phase-damping joint state (qutrit environment)",
            format!("environment dimension {}", joint.env_dim()),
        ));
    }
    Ok(coherence_split(joint).nonlocal - 2.0 * negativity(joint)?)
}

/// Evolves `r` through the PDC to `p` and returns the gap.
pub fn pdc_gap_at(r: BlochVector, p: f64) -> Result<f64> {
    let joint = evolve_joint(&density_from_bloch(r), &kraus_set(ChannelKind::Pdc, p)?)?;
    pdc_gap(&joint)
}
