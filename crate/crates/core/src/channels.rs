//! Noise channels as Kraus sets and their system–environment dilations.
//!
//! Joint states live on `C² ⊗ C^{d_E}` in the product basis `|jk⟩ = |S_j⟩⊗|E_k⟩`,
//! system index major. The environment starts in `|E_0⟩` and the dilation
//! acts as `|S_l⟩|E_0⟩ ↦ Σ_j K_j|S_l⟩ ⊗ |E_j⟩`, so its dimension equals the
//! number of Kraus operators.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, Complex, ComplexMatrix};
use crate::states::DensityMatrix;

/// Tolerance on `V†V = I` accepted by [`mix_kraus`].
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChannelKind {
    /// Amplitude damping.
    Adc,
    /// Phase damping, three-operator representation.
    Pdc,
    /// Bit flip.
    Bfc,
    /// Phase flip.
    Pfc,
    /// Bit-phase flip.
    Bpfc,
    /// Depolarizing.
    Dc,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::Adc,
        ChannelKind::Pdc,
        ChannelKind::Bfc,
        ChannelKind::Pfc,
        ChannelKind::Bpfc,
        ChannelKind::Dc,
    ];

    /// Effective environment dimension (number of Kraus operators).
    pub fn env_dim(self) -> usize {
        match self {
            ChannelKind::Adc | ChannelKind::Bfc | ChannelKind::Pfc | ChannelKind::Bpfc => 2,
            ChannelKind::Pdc => 3,
            ChannelKind::Dc => 4,
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            ChannelKind::Adc => "adc",
            ChannelKind::Pdc => "pdc",
            ChannelKind::Bfc => "bfc",
            ChannelKind::Pfc => "pfc",
            ChannelKind::Bpfc => "bpfc",
            ChannelKind::Dc => "dc",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.code() == s.to_ascii_lowercase())
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "unknown channel `{s}` (expected adc|pdc|bfc|pfc|bpfc|dc)"
                ))
            })
    }
}

/// Kraus operators of one channel at parametrized time `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    kind: ChannelKind,
    p: f64,
    ops: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    pub fn env_dim(&self) -> usize {
        self.ops.len()
    }

    /// `max |Σ K†K − I|` entrywise.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.ops.iter().fold(ComplexMatrix::zeros(2, 2), |acc, k| {
            &acc + &k.adjoint().matmul(k)
        });
        sum.max_abs_diff(&ComplexMatrix::identity(2))
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::POutOfRange(p))
    }
}

/// Kraus set of `kind` at `p ∈ [0, 1]`, with `q = 1 − p`.
pub fn kraus_set(kind: ChannelKind, p: f64) -> Result<KrausSet> {
    check_p(p)?;
    let q = 1.0 - p;
    let (sp, sq) = (p.sqrt(), q.sqrt());
    let ops = match kind {
        ChannelKind::Adc => vec![
            ComplexMatrix::diag(&[1.0, sq]),
            ComplexMatrix::unit(2, 0, 1).scale_real(sp),
        ],
        ChannelKind::Pdc => vec![
            pauli(0).scale_real(sq),
            ComplexMatrix::unit(2, 0, 0).scale_real(sp),
            ComplexMatrix::unit(2, 1, 1).scale_real(sp),
        ],
        ChannelKind::Bfc => vec![pauli(0).scale_real(sq), pauli(1).scale_real(sp)],
        ChannelKind::Pfc => vec![pauli(0).scale_real(sq), pauli(3).scale_real(sp)],
        ChannelKind::Bpfc => vec![pauli(0).scale_real(sq), pauli(2).scale_real(sp)],
        ChannelKind::Dc => {
            let s0 = (1.0 - 0.75 * p).sqrt();
            let s = (0.25 * p).sqrt();
            vec![
                pauli(0).scale_real(s0),
                pauli(1).scale_real(s),
                pauli(2).scale_real(s),
                pauli(3).scale_real(s),
            ]
        }
    };
    Ok(KrausSet { kind, p, ops })
}

/// System–environment density matrix on `C² ⊗ C^{d_E}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    state: DensityMatrix,
    env_dim: usize,
}

impl JointState {
    /// Validates `mat` as a density matrix of dimension `2·env_dim`.
    pub fn new(mat: ComplexMatrix, env_dim: usize) -> Result<Self> {
        if env_dim == 0 || mat.rows() != 2 * env_dim {
            return Err(Error::dims(
                format!("{0}x{0} joint matrix", 2 * env_dim),
                format!("{}x{}", mat.rows(), mat.cols()),
            ));
        }
        Ok(Self {
            state: DensityMatrix::new(mat)?,
            env_dim,
        })
    }

    /// `ρ_S ⊗ ρ_E`.
    pub fn product(system: &DensityMatrix, env: &DensityMatrix) -> Result<Self> {
        if system.dim() != 2 {
            return Err(Error::dims(
                "qubit system",
                format!("dimension {}", system.dim()),
            ));
        }
        Ok(Self {
            state: DensityMatrix::from_trusted(kron(system.matrix(), env.matrix())),
            env_dim: env.dim(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }
}

fn require_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 2 {
        Ok(())
    } else {
        Err(Error::dims(
            "2x2 qubit state",
            format!("{0}x{0}", rho.dim()),
        ))
    }
}

/// Image of `ρ_S ⊗ |E_0⟩⟨E_0|` under the dilation of `ks`:
/// `Σ_{j,k} K_j ρ_S K_k† ⊗ |E_j⟩⟨E_k|`.
pub fn evolve_joint(rho: &DensityMatrix, ks: &KrausSet) -> Result<JointState> {
    require_qubit(rho)?;
    let d = ks.env_dim();
    let n = 2 * d;
    let rho = rho.matrix();
    let left: Vec<ComplexMatrix> = ks.ops.iter().map(|k| k.matmul(rho)).collect();
    let adj: Vec<ComplexMatrix> = ks.ops.iter().map(ComplexMatrix::adjoint).collect();
    let mut data = vec![Complex::new(0.0, 0.0); n * n];
    for (j, kl) in left.iter().enumerate() {
        for (k, kr) in adj.iter().enumerate() {
            let block = kl.matmul(kr);
            for s in 0..2 {
                for t in 0..2 {
                    data[(s * d + j) * n + (t * d + k)] = block.get(s, t);
                }
            }
        }
    }
    let mat = ComplexMatrix::new(n, n, data)?;
    Ok(JointState {
        state: DensityMatrix::from_trusted(mat),
        env_dim: d,
    })
}

/// Which factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

pub fn partial_trace(joint: &JointState, keep: Subsystem) -> DensityMatrix {
    let d = joint.env_dim;
    let m = joint.matrix();
    let n = 2 * d;
    let reduced = match keep {
        Subsystem::System => ComplexMatrix::from_fn(2, 2, |s, t| {
            (0..d)
                .map(|k| m.entries()[(s * d + k) * n + (t * d + k)])
                .sum()
        }),
        Subsystem::Environment => ComplexMatrix::from_fn(d, d, |j, k| {
            (0..2)
                .map(|s| m.entries()[(s * d + j) * n + (s * d + k)])
                .sum()
        }),
    };
    DensityMatrix::from_trusted(reduced)
}

/// `Σ_j K_j ρ K_j†`.
pub fn apply_channel(rho: &DensityMatrix, ks: &KrausSet) -> Result<DensityMatrix> {
    require_qubit(rho)?;
    let out = ks
        .ops
        .iter()
        .map(|k| k.matmul(rho.matrix()).matmul(&k.adjoint()))
        .fold(ComplexMatrix::zeros(2, 2), |acc, t| &acc + &t);
    Ok(DensityMatrix::from_trusted(out))
}

/// Kraus set `K'_j = Σ_l V_jl K_l` for a unitary `V` on the environment.
pub fn mix_kraus(ks: &KrausSet, v: &ComplexMatrix) -> Result<KrausSet> {
    let d = ks.env_dim();
    if v.rows() != d || v.cols() != d {
        return Err(Error::dims(
            format!("{d}x{d} unitary"),
            format!("{}x{}", v.rows(), v.cols()),
        ));
    }
    let deviation = v
        .adjoint()
        .matmul(v)
        .max_abs_diff(&ComplexMatrix::identity(d));
    if deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let ops = (0..d)
        .map(|j| {
            (0..d).fold(ComplexMatrix::zeros(2, 2), |acc, l| {
                &acc + &ks.ops[l].scale(v.get(j, l))
            })
        })
        .collect();
    Ok(KrausSet {
        kind: ks.kind,
        p: ks.p,
        ops,
    })
}

/// `p = 1 − exp(−t/T)` for a relaxation time `T` (T1 or T2).
pub fn prob_from_time(t: f64, relaxation: f64) -> Result<f64> {
    if !relaxation.is_finite() || relaxation <= 0.0 {
        return Err(Error::NonPositiveT(relaxation));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "time must be non-negative, got {t}"
        )));
    }
    Ok(-(-t / relaxation).exp_m1())
}
