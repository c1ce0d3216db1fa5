//! Dense complex linear algebra for the small matrices used here (at most 8×8).
//!
//! Matrices are immutable values: every operation allocates its result.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

/// Hermiticity tolerance used by the eigensolver precondition.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues of a PSD input below `-PSD_CLAMP_TOL` are rejected; those in
/// `[-PSD_CLAMP_TOL, 0)` are clamped to zero.
pub const PSD_CLAMP_TOL: f64 = 1e-8;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::dims(
                format!("{rows}x{cols} with {} entries", rows * cols),
                format!("{} entries", data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows of real entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dims("rectangular rows", "ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| Complex::new(x, 0.0)))
            .collect();
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[&[Complex]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dims("rectangular rows", "ragged rows"));
        }
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(rows.len(), cols, data)
    }

    pub(crate) fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(entries[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Projector `|ψ⟩⟨ψ|` onto a (not necessarily normalized) column vector.
    pub fn outer(psi: &[Complex]) -> Self {
        let n = psi.len();
        Self::from_fn(n, n, |i, j| psi[i] * psi[j].conj())
    }

    /// Matrix unit `|i⟩⟨j|` in dimension `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, n, |a, b| if a == i && b == j { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "elementwise operation on mismatched shapes"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Matrix product. Panics on inner-dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Sum of the moduli of all off-diagonal entries.
    pub fn l1_off_diagonal(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self.get(i, j).norm();
                }
            }
        }
        acc
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .max_abs_diff(&Self::identity(self.rows))
                <= tol
    }

    /// Hermitian with smallest eigenvalue `>= -tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(HERMITIAN_TOL)) {
            return false;
        }
        match hermitian_eigenvalues(self) {
            Ok(ev) => ev.last().is_none_or(|&min| min >= -tol),
            Err(_) => false,
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Pauli matrices: `pauli(0)` is the identity σ_0, then σ_1, σ_2, σ_3.
pub fn pauli(k: usize) -> ComplexMatrix {
    let i = Complex::i();
    let data = match k {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -i, i, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {k} out of range 0..=3"),
    };
    ComplexMatrix {
        rows: 2,
        cols: 2,
        data: data.to_vec(),
    }
}

/// Tensor product; entry `(i·b.rows + k, j·b.cols + l)` is `a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a.get(r / b.rows, c / b.cols) * b.get(r % b.rows, c % b.cols)
    })
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `k` is the normalized eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex> {
        (0..self.vectors.rows)
            .map(|i| self.vectors.get(i, k))
            .collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * self.vectors.get(j, k).conj() * fv[k])
                .sum()
        })
    }
}

/// Cyclic complex Jacobi diagonalization.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::dims(
            "square matrix",
            format!("{}x{}", h.rows, h.cols),
        ));
    }
    let deviation = h.hermiticity_defect();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = h.rows;
    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h.get(i, j) + h.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .map(|(i, j)| a.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(y, y).re.total_cmp(&a.get(x, x).re));
    let values = order.iter().map(|&k| a.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v.get(i, order[k]));
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation zeroing `a[p,q]`; accumulates the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.rows;
    let apq = a.get(p, q);
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    // Skip elements already negligible against both diagonal entries.
    if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a.data[p * n + q] = ZERO;
        a.data[q * n + p] = ZERO;
        return;
    }
    let phase = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]
    let jpp = Complex::new(c, 0.0);
    let jpq = Complex::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    // A ← A J (columns p, q)
    for k in 0..n {
        let akp = a.data[k * n + p];
        let akq = a.data[k * n + q];
        a.data[k * n + p] = akp * jpp + akq * jqp;
        a.data[k * n + q] = akp * jpq + akq * jqq;
    }
    // A ← J† A (rows p, q)
    for k in 0..n {
        let apk = a.data[p * n + k];
        let aqk = a.data[q * n + k];
        a.data[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a.data[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a.data[p * n + q] = ZERO;
    a.data[q * n + p] = ZERO;
    a.data[p * n + p].im = 0.0;
    a.data[q * n + q].im = 0.0;
    // V ← V J
    for k in 0..n {
        let vkp = v.data[k * n + p];
        let vkq = v.data[k * n + q];
        v.data[k * n + p] = vkp * jpp + vkq * jqp;
        v.data[k * n + q] = vkp * jpq + vkq * jqq;
    }
}

/// Real eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(h).map(|e| e.values)
}

/// Principal square root of a Hermitian PSD matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    if let Some(&min) = eig.values.last() {
        if min < -PSD_CLAMP_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// `Tr √(X X†)`, the sum of singular values.
///
/// Hermitian inputs go through their own spectrum (`Σ|λ|`), which keeps full
/// precision for eigenvalues near zero.
pub fn trace_norm(x: &ComplexMatrix) -> f64 {
    assert!(x.is_square(), "trace norm of a non-square matrix");
    if x.is_hermitian(HERMITIAN_TOL) {
        if let Ok(ev) = hermitian_eigenvalues(x) {
            return ev.iter().map(|l| l.abs()).sum();
        }
    }
    let gram = x.matmul(&x.adjoint());
    hermitian_eigenvalues(&gram)
        .expect("X X† is Hermitian by construction")
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
        assert_eq!(
            kron(&pauli(3), &pauli(0)),
            ComplexMatrix::diag(&[1.0, 1.0, -1.0, -1.0])
        );
        let proj = kron(&ComplexMatrix::unit(2, 0, 0), &ComplexMatrix::unit(2, 1, 1));
        assert_eq!(proj, ComplexMatrix::unit(4, 1, 1));
    }

    #[test]
    fn kron_of_rectangular_shapes() {
        let col = ComplexMatrix::new(2, 1, vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let row = ComplexMatrix::new(1, 3, vec![c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let k = kron(&col, &row);
        assert_eq!((k.rows(), k.cols()), (2, 3));
        assert_eq!(k[(1, 2)], c(0.0, 3.0));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![ONE; 3]),
            Err(Error::DimMismatch { .. })
        ));
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn pauli_spectra() {
        assert_eq!(hermitian_eigenvalues(&pauli(3)).unwrap(), vec![1.0, -1.0]);
        let ev = hermitian_eigenvalues(&pauli(2)).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn maximally_mixed_spectrum() {
        let ev = hermitian_eigenvalues(&ComplexMatrix::identity(4).scale_real(0.25)).unwrap();
        assert_eq!(ev, vec![0.25; 4]);
    }

    #[test]
    fn pure_state_spectrum() {
        // r = (0.6, 0, 0.8)
        let rho = ComplexMatrix::from_real_rows(&[&[0.9, 0.3], &[0.3, 0.1]]).unwrap();
        let ev = hermitian_eigenvalues(&rho).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14, "{ev:?}");
        assert!(ev[1].abs() < 1e-14, "{ev:?}");
    }

    #[test]
    fn eigenvectors_reconstruct_input() {
        let h = ComplexMatrix::from_rows(&[
            &[c(2.0, 0.0), c(0.5, -1.0), c(0.0, 0.3)],
            &[c(0.5, 1.0), c(-1.0, 0.0), c(0.7, 0.0)],
            &[c(0.0, -0.3), c(0.7, 0.0), c(0.4, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        assert!(eig.reconstruct_with(|x| x).max_abs_diff(&h) < 1e-13);
        assert!(eig.vectors.is_unitary(1e-13));
        let tr: f64 = eig.values.iter().sum();
        assert!((tr - h.trace().re).abs() < 1e-12);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(
            hermitian_eigenvalues(&m),
            Err(Error::NotHermitian { .. })
        ));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigenvalues(&r),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn psd_sqrt_examples() {
        let s = psd_sqrt(&ComplexMatrix::diag(&[4.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag(&[2.0, 3.0])) < 1e-14);
        let id = psd_sqrt(&ComplexMatrix::identity(2)).unwrap();
        assert!(id.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
        let plus = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(psd_sqrt(&plus).unwrap().max_abs_diff(&plus) < 1e-14);
    }

    #[test]
    fn psd_sqrt_clamps_and_rejects() {
        let tiny_neg = ComplexMatrix::diag(&[1.0, -1e-12]);
        let s = psd_sqrt(&tiny_neg).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag(&[1.0, 0.0])) < 1e-14);
        assert!(matches!(
            psd_sqrt(&ComplexMatrix::diag(&[1.0, -1e-6])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&pauli(3)) - 2.0).abs() < 1e-14);
        assert_eq!(trace_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        assert!((trace_norm(&rho) - 1.0).abs() < 1e-14);
        // Non-Hermitian: singular values of [[0, 2], [0, 0]] are {2, 0}.
        let nilpotent = ComplexMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        assert!((trace_norm(&nilpotent) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unitary_and_psd_predicates() {
        assert!(pauli(2).is_unitary(1e-15));
        assert!(!ComplexMatrix::diag(&[1.0, 2.0]).is_unitary(1e-10));
        assert!(ComplexMatrix::diag(&[0.5, 0.0]).is_psd(1e-10));
        assert!(!pauli(3).is_psd(1e-10));
    }
}
