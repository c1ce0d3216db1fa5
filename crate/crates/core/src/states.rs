//! Qubit states: Bloch parametrization, density matrices and l1-norm coherence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, pauli, Complex, ComplexMatrix};

/// Slack on `|r| ≤ 1`.
pub const BLOCH_TOL: f64 = 1e-12;
/// Tolerance for the density-matrix validity checks.
pub const DENSITY_TOL: f64 = 1e-10;

/// Polarizations `r_j = Tr(ρ σ_j)` of a qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector {
        r1: 0.0,
        r2: 0.0,
        r3: 0.0,
    };

    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let r = Self { r1, r2, r3 };
        let norm = r.norm();
        if !norm.is_finite() || norm > 1.0 + BLOCH_TOL {
            return Err(Error::BlochOutOfBall { norm });
        }
        Ok(r)
    }

    pub fn from_array(r: [f64; 3]) -> Result<Self> {
        Self::new(r[0], r[1], r[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn norm(&self) -> f64 {
        (self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3).sqrt()
    }

    /// l1 coherence of the corresponding qubit, `√(r1² + r2²)`.
    pub fn coherence(&self) -> f64 {
        self.r1.hypot(self.r2)
    }

    /// `Σ_j |r_j|`.
    pub fn abs_sum(&self) -> f64 {
        self.r1.abs() + self.r2.abs() + self.r3.abs()
    }

    /// `(r2, r1, r3)`.
    pub fn swap_12(self) -> Self {
        Self {
            r1: self.r2,
            r2: self.r1,
            r3: self.r3,
        }
    }

    /// `(r3, r2, r1)`.
    pub fn swap_13(self) -> Self {
        Self {
            r1: self.r3,
            r2: self.r2,
            r3: self.r1,
        }
    }
}

impl std::fmt::Display for BlochVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.r1, self.r2, self.r3)
    }
}

impl std::str::FromStr for BlochVector {
    type Err = Error;

    /// Parses a comma-separated triple such as `-0.41,0.80,-0.38`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidConfig(format!(
                "Bloch vector needs three comma-separated components, got `{s}`"
            )));
        }
        let mut r = [0.0; 3];
        for (slot, part) in r.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad Bloch component `{part}`")))?;
        }
        Self::from_array(r)
    }
}

/// A validated density matrix of any dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity, each within [`DENSITY_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::dims(
                "square matrix",
                format!("{}x{}", mat.rows(), mat.cols()),
            ));
        }
        let deviation = mat.hermiticity_defect();
        if deviation > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min = hermitian_eigenvalues(&mat)?
            .last()
            .copied()
            .unwrap_or_default();
        if min < -DENSITY_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix that is a density matrix by construction (image of a
    /// valid state under a CPTP map or a partial trace).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn pure(psi: &[Complex]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi))
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_trusted(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.matmul(&self.mat).trace().re
    }
}

/// `ρ = (σ_0 + r·σ)/2`.
pub fn density_from_bloch(r: BlochVector) -> DensityMatrix {
    let half = 0.5;
    let data = vec![
        Complex::new(half * (1.0 + r.r3), 0.0),
        Complex::new(half * r.r1, -half * r.r2),
        Complex::new(half * r.r1, half * r.r2),
        Complex::new(half * (1.0 - r.r3), 0.0),
    ];
    DensityMatrix::from_trusted(
        ComplexMatrix::new(2, 2, data).expect("2x2 from finite Bloch vector"),
    )
}

/// `r_j = Tr(ρ σ_j)` for a qubit density matrix.
pub fn bloch_from_density(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::dims(
            "2x2 density matrix",
            format!("{0}x{0}", rho.dim()),
        ));
    }
    let comp = |k| rho.matrix().matmul(&pauli(k)).trace().re;
    let r = BlochVector {
        r1: comp(1),
        r2: comp(2),
        r3: comp(3),
    };
    // A validated 2x2 density matrix may overshoot the ball by rounding only.
    if r.norm() > 1.0 + BLOCH_TOL {
        return Err(Error::BlochOutOfBall { norm: r.norm() });
    }
    Ok(r)
}

/// l1-norm coherence in the computational basis: `Σ_{j≠k} |ρ_jk|`.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    rho.mat.l1_off_diagonal()
}

/// Sampling measure for random qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    /// Uniform on the Bloch sphere.
    Pure,
    /// Uniform in the Bloch ball.
    Mixed,
}

/// Draws one Bloch vector from `rng`.
pub fn sample_bloch<R: Rng + ?Sized>(rng: &mut R, kind: StateKind) -> BlochVector {
    let dir = loop {
        let g: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if n > 1e-12 {
            break [g[0] / n, g[1] / n, g[2] / n];
        }
    };
    let radius = match kind {
        StateKind::Pure => 1.0,
        StateKind::Mixed => rng.random::<f64>().cbrt(),
    };
    BlochVector {
        r1: radius * dir[0],
        r2: radius * dir[1],
        r3: radius * dir[2],
    }
}

/// Deterministic single draw for a seed.
pub fn sample_random_bloch(seed: u64, kind: StateKind) -> BlochVector {
    sample_bloch(&mut ChaCha8Rng::seed_from_u64(seed), kind)
}

/// `n` draws from one seeded stream.
pub fn sample_bloch_batch(seed: u64, n: usize, kind: StateKind) -> Vec<BlochVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_bloch(&mut rng, kind)).collect()
}
