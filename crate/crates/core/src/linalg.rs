//! Dense complex matrices on `n` qubits and the local-gate kernels the rest
//! of the crate is built on.
//!
//! Basis ordering: qubit 0 is the leftmost tensor factor, i.e. the most
//! significant bit of a computational-basis index.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Tolerance for the unitarity check on operators flagged unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// A `2^n x 2^n` complex matrix acting on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    matrix: CMatrix,
}

impl DenseOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = qubits_for_dim(matrix.nrows())?;
        if matrix.ncols() != matrix.nrows() {
            return Err(Error::SizeMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        Ok(Self { n, matrix })
    }

    pub fn from_rows(n: usize, rows: &[&[C64]]) -> Result<Self> {
        let dim = 1usize << n;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::SizeMismatch { expected: dim, found: rows.len() });
        }
        Ok(Self { n, matrix: CMatrix::from_fn(dim, dim, |i, j| rows[i][j]) })
    }

    /// Builds an operator from real entries, row-major.
    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        let dim = 1usize << n;
        if entries.len() != dim * dim {
            return Err(Error::SizeMismatch { expected: dim * dim, found: entries.len() });
        }
        Ok(Self { n, matrix: CMatrix::from_fn(dim, dim, |i, j| C64::new(entries[i * dim + j], 0.0)) })
    }

    pub fn identity(n: usize) -> Self {
        let dim = 1usize << n;
        Self { n, matrix: CMatrix::identity(dim, dim) }
    }

    pub fn zeros(n: usize) -> Self {
        let dim = 1usize << n;
        Self { n, matrix: CMatrix::zeros(dim, dim) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { n: self.n, matrix: self.matrix.adjoint() }
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        Ok(Self { n: self.n, matrix: &self.matrix * &rhs.matrix })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { n: self.n, matrix: &self.matrix * factor }
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Hilbert–Schmidt norm normalized so that every unitary has norm 1:
    /// `sqrt(tr(A^dagger A) / 2^n)`.
    pub fn normalized_hs_norm(&self) -> f64 {
        libm::sqrt(self.matrix.norm_squared() / self.dim() as f64)
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.matrix.adjoint() * &self.matrix;
        max_abs_deviation_from_identity(&prod)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    /// True if the operator equals `c * I` for some scalar `c`.
    pub fn scalar_multiple_of_identity(&self, tol: f64) -> Option<C64> {
        let c = self.matrix[(0, 0)];
        let dim = self.dim();
        for j in 0..dim {
            for i in 0..dim {
                let expected = if i == j { c } else { ZERO };
                if (self.matrix[(i, j)] - expected).norm() > tol {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// `self` acting on `targets` inside an `n`-qubit register.
    pub fn embed(&self, targets: &[usize], n: usize) -> Result<Self> {
        validate_targets(targets, n)?;
        if targets.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: targets.len() });
        }
        let mut out = CMatrix::identity(1 << n, 1 << n);
        apply_local_left(&mut out, &self.matrix, targets, n);
        Ok(Self { n, matrix: out })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(invalid(alloc::format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

pub(crate) fn max_abs_deviation_from_identity(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let expected = if i == j { ONE } else { ZERO };
            worst = worst.max((m[(i, j)] - expected).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub(crate) fn validate_targets(targets: &[usize], n: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QubitOutOfRange { index: t, n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// Bit position of qubit `q` inside a basis index of an `n`-qubit register.
#[inline]
pub(crate) fn bit_of(q: usize, n: usize) -> usize {
    n - 1 - q
}

/// Offsets of the `2^k` local basis states for `targets` (first target is
/// the most significant local bit), plus the mask of target bits.
pub(crate) fn local_offsets(targets: &[usize], n: usize) -> (Vec<usize>, usize) {
    let k = targets.len();
    let mut mask = 0usize;
    for &t in targets {
        mask |= 1 << bit_of(t, n);
    }
    let offsets = (0..1usize << k)
        .map(|local| {
            targets.iter().enumerate().fold(0usize, |acc, (pos, &t)| {
                if (local >> (k - 1 - pos)) & 1 == 1 {
                    acc | (1 << bit_of(t, n))
                } else {
                    acc
                }
            })
        })
        .collect();
    (offsets, mask)
}

/// Indices whose target bits are all zero.
pub(crate) fn base_indices(mask: usize, n: usize) -> impl Iterator<Item = usize> {
    (0..1usize << n).filter(move |i| i & mask == 0)
}

/// `m <- (G on targets) * m` without forming the full operator.
pub fn apply_local_left(m: &mut CMatrix, gate: &CMatrix, targets: &[usize], n: usize) {
    let (offsets, mask) = local_offsets(targets, n);
    let local = offsets.len();
    debug_assert_eq!(gate.nrows(), local);
    let bases: Vec<usize> = base_indices(mask, n).collect();
    let mut buf = vec![ZERO; local];
    for col in 0..m.ncols() {
        for &base in &bases {
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = m[(base + off, col)];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, v) in buf.iter().enumerate() {
                    acc += gate[(row, c)] * v;
                }
                m[(base + off, col)] = acc;
            }
        }
    }
}

/// `m <- m * (G on targets)`.
pub fn apply_local_right(m: &mut CMatrix, gate: &CMatrix, targets: &[usize], n: usize) {
    let (offsets, mask) = local_offsets(targets, n);
    let local = offsets.len();
    let bases: Vec<usize> = base_indices(mask, n).collect();
    let mut buf = vec![ZERO; local];
    for row in 0..m.nrows() {
        for &base in &bases {
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = m[(row, base + off)];
            }
            for (col, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (r, v) in buf.iter().enumerate() {
                    acc += v * gate[(r, col)];
                }
                m[(row, base + off)] = acc;
            }
        }
    }
}

/// `psi <- (G on targets) psi`.
pub fn apply_local_vector(psi: &mut [C64], gate: &CMatrix, targets: &[usize], n: usize) {
    let (offsets, mask) = local_offsets(targets, n);
    let mut buf = vec![ZERO; offsets.len()];
    for base in base_indices(mask, n) {
        for (slot, off) in buf.iter_mut().zip(&offsets) {
            *slot = psi[base + off];
        }
        for (row, off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (c, v) in buf.iter().enumerate() {
                acc += gate[(row, c)] * v;
            }
            psi[base + off] = acc;
        }
    }
}

/// Matrix of complex standard Gaussians with `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let scale = core::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    })
}

/// Haar-distributed unitary on `n` qubits: QR of a complex Gaussian matrix
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DenseOperator {
    let dim = 1usize << n;
    let qr = complex_gaussian(dim, dim, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    DenseOperator { n, matrix: q }
}

/// Random Hermitian matrix with spectral norm 1.
pub fn random_unit_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let dim = 1usize << n;
    let a = complex_gaussian(dim, dim, rng);
    let h = (&a + a.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.clone().symmetric_eigen();
    let spectral = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if spectral > 0.0 {
        h * C64::new(1.0 / spectral, 0.0)
    } else {
        h
    }
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = CMatrix::from_diagonal(&CVector::from_iterator(
        h.nrows(),
        eig.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -t * l)),
    ));
    v * phases * v.adjoint()
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    sym.symmetric_eigen().eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Gate matrices used throughout.
pub mod gates {
    use super::*;

    pub fn pauli_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    pub fn hadamard() -> CMatrix {
        let h = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
    }

    /// `exp(-i delta X / 2)`.
    pub fn rx(delta: f64) -> CMatrix {
        let c = C64::new(libm::cos(delta / 2.0), 0.0);
        let s = C64::new(0.0, -libm::sin(delta / 2.0));
        CMatrix::from_row_slice(2, 2, &[c, s, s, c])
    }

    /// Control on the first qubit.
    pub fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        m
    }

    pub fn swap() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 2)] = ONE;
        m[(2, 1)] = ONE;
        m[(3, 3)] = ONE;
        m
    }

    /// `exp(i delta P)` with `P = |1><1| (x) (I - X)/2`; equals CNOT at
    /// `delta = pi`.
    pub fn rcx(delta: f64) -> CMatrix {
        // P is a projector, so exp(i delta P) = I + (e^{i delta} - 1) P.
        let f = C64::from_polar(1.0, delta) - ONE;
        let half = C64::new(0.5, 0.0);
        let mut m = CMatrix::identity(4, 4);
        m[(2, 2)] += f * half;
        m[(2, 3)] -= f * half;
        m[(3, 2)] -= f * half;
        m[(3, 3)] += f * half;
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn embed_matches_kronecker_product() {
        let x = gates::pauli_x();
        let z = gates::pauli_z();
        // X on qubit 0, Z on qubit 1 of a 2-qubit register is X (x) Z.
        let xz = x.kronecker(&z);
        let mut m = CMatrix::identity(4, 4);
        apply_local_left(&mut m, &x, &[0], 2);
        apply_local_left(&mut m, &z, &[1], 2);
        assert!(max_abs_diff(&m, &xz) < 1e-15);
        // A two-qubit gate on reversed targets is the swapped conjugate.
        let cnot = DenseOperator::new(gates::cnot()).unwrap();
        let rev = cnot.embed(&[1, 0], 2).unwrap();
        let s = gates::swap();
        let expected = &s * gates::cnot() * &s;
        assert!(max_abs_diff(rev.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn right_application_matches_product() {
        let mut rng = seeded(3);
        let u = haar_unitary(3, &mut rng);
        let g = haar_unitary(2, &mut rng);
        let full = g.embed(&[2, 0], 3).unwrap();
        let mut m = u.matrix().clone();
        apply_local_right(&mut m, g.matrix(), &[2, 0], 3);
        assert!(max_abs_diff(&m, &(u.matrix() * full.matrix())) < 1e-13);
        let mut psi: Vec<C64> = u.matrix().column(0).iter().copied().collect();
        apply_local_vector(&mut psi, g.matrix(), &[2, 0], 3);
        let direct = full.matrix() * u.matrix().column(0);
        for (a, b) in psi.iter().zip(direct.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = seeded(11);
        for n in 1..=4 {
            assert!(haar_unitary(n, &mut rng).is_unitary(UNITARY_TOL));
        }
    }

    #[test]
    fn rcx_at_pi_is_cnot() {
        let m = gates::rcx(core::f64::consts::PI);
        assert!(max_abs_diff(&m, &gates::cnot()) < 1e-15);
        let inv = gates::rcx(-0.3);
        let prod = gates::rcx(0.3) * inv;
        assert!(max_abs_deviation_from_identity(&prod) < 1e-15);
    }

    #[test]
    fn hermitian_exponential() {
        let mut rng = seeded(5);
        let h = random_unit_hermitian(2, &mut rng);
        let eig = h.clone().symmetric_eigen();
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!((top - 1.0).abs() < 1e-12);
        let u = expm_hermitian(&h, 0.2);
        assert!(max_abs_deviation_from_identity(&(u.adjoint() * &u)) < 1e-12);
        // exp(-i delta X / 2) through the eigen route agrees with rx.
        let x = gates::pauli_x() * C64::new(0.5, 0.0);
        assert!(max_abs_diff(&expm_hermitian(&x, 0.7), &gates::rx(0.7)) < 1e-14);
    }

    #[test]
    fn invalid_targets() {
        let x = DenseOperator::new(gates::pauli_x()).unwrap();
        assert_eq!(x.embed(&[3], 3), Err(Error::QubitOutOfRange { index: 3, n: 3 }));
        let c = DenseOperator::new(gates::cnot()).unwrap();
        assert_eq!(c.embed(&[1, 1], 3), Err(Error::DuplicateQubit(1)));
    }
}
