//! Test-only oracles and generators, independent of the library's
//! eigensolver and dilation code paths.

#![allow(dead_code)]

use coherence_flow::linalg::kron;
use coherence_flow::{BlochVector, Complex, ComplexMatrix, DensityMatrix, KrausSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex<R: Rng>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let data = (0..n * n).map(|_| gaussian_complex(rng)).collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Haar-ish random unitary from Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|i| g.get(i, j)).collect();
        for u in &cols {
            let proj: Complex = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    let data = (0..n)
        .flat_map(|i| cols.iter().map(move |c| c[i]).collect::<Vec<_>>())
        .collect();
    ComplexMatrix::new(n, n, data).unwrap()
}

/// Full-rank random density matrix `G G† / Tr(G G†)`.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> DensityMatrix {
    let g = ginibre(rng, n);
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    let m = gg.scale_real(1.0 / tr);
    let m = (&m + &m.adjoint()).scale_real(0.5);
    DensityMatrix::new(m).unwrap()
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Coefficients `[c0, c1, …, c_{n-1}, 1]` of `det(λI − A)` (Faddeev–LeVerrier).
pub fn char_poly(a: &ComplexMatrix) -> Vec<Complex> {
    let n = a.rows();
    let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let shifted = &a.matmul(&m) + &ComplexMatrix::identity(n).scale(coeffs[n - k + 1]);
        m = shifted;
        coeffs[n - k] = -a.matmul(&m).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let seed = Complex::new(0.4, 0.9);
    let mut roots: Vec<Complex> = (0..n).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0_f64;
        for i in 0..n {
            let zi = roots[i];
            let denom: Complex = (0..n).filter(|&j| j != i).map(|j| zi - roots[j]).product();
            let step = horner(coeffs, zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-16 {
            break;
        }
    }
    roots
}

/// Eigenvalues of `ρρ̃` from its characteristic polynomial, real parts
/// sorted descending.
pub fn brute_force_wootters(rho: &DensityMatrix) -> Vec<f64> {
    let m = rho.matrix();
    let yy = kron(
        &coherence_flow::linalg::pauli(2),
        &coherence_flow::linalg::pauli(2),
    );
    let tilde = yy.matmul(&m.conj()).matmul(&yy);
    let product = m.matmul(&tilde);
    let mut roots: Vec<f64> = poly_roots(&char_poly(&product))
        .iter()
        .map(|z| z.re)
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Explicit isometry `W = Σ_j K_j ⊗ |E_j⟩` as a `(2d)×2` matrix, system major.
pub fn dilation_isometry(ks: &KrausSet) -> ComplexMatrix {
    let d = ks.env_dim();
    let mut w = ComplexMatrix::zeros(2 * d, 2);
    for (j, k) in ks.ops().iter().enumerate() {
        let ket = ComplexMatrix::unit(d, j, 0);
        let col = ComplexMatrix::new(d, 1, (0..d).map(|i| ket.get(i, 0)).collect()).unwrap();
        w = &w + &kron(k, &col);
    }
    w
}

/// Uniform Bloch-ball samples used by the property suites.
pub fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    coherence_flow::states::sample_bloch(rng, coherence_flow::StateKind::Mixed)
}

pub fn grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect()
}
