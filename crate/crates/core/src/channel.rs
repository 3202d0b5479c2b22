//! Quantum operations in operator-sum form, with a compact representation
//! for Pauli-diagonal channels.
//!
//! A Pauli-diagonal channel `rho -> sum_v a_v K_v rho K_v` is stored as its
//! `4^n` probabilities rather than as Kraus matrices; everything else is a
//! list of Kraus operators. The full `4^n x 4^n` superoperator is never
//! formed.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::expand::pauli_expand;
use crate::linalg::{
    max_abs_deviation_from_identity, min_hermitian_eigenvalue, validate_targets, CMatrix, CVector, DenseOperator, C64,
    UNITARY_TOL, ZERO,
};
use crate::pauli::{index_to_symplectic, symplectic_to_index, PauliString};
use crate::walsh::xor_convolve;

/// Allowed deviation of `sum_j E_j^dagger E_j` from the identity.
pub const TRACE_TOL: f64 = 1e-9;
/// Kraus count above which [`compose`] compresses the running product.
pub const DEFAULT_KRAUS_CAP: usize = 4096;
/// Largest Gram/Choi dimension the compressor will diagonalize.
pub const COMPRESSION_DIM_CAP: usize = 1024;
/// Eigenvalues below this are dropped during compression.
pub const COMPRESSION_EIG_TOL: f64 = 1e-12;
/// Upper bound on `kraus_count * 4^n` for materialized Kraus lists.
pub const MATERIALIZE_ENTRY_CAP: usize = 1 << 24;
/// Largest qubit count for an explicit Choi matrix.
pub const CHOI_QUBIT_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ChannelKind {
    Unitary,
    PauliDiagonal,
    General,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Kraus(Vec<DenseOperator>),
    Pauli(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    n: usize,
    kind: ChannelKind,
    repr: Repr,
}

impl Channel {
    pub fn identity(n: usize) -> Self {
        Self { n, kind: ChannelKind::Unitary, repr: Repr::Kraus(vec![DenseOperator::identity(n)]) }
    }

    /// `rho -> U rho U^dagger`; `U` must be unitary within 1e-10.
    pub fn unitary(u: DenseOperator) -> Result<Self> {
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { n: u.n(), kind: ChannelKind::Unitary, repr: Repr::Kraus(vec![u]) })
    }

    /// Operator-sum channel; checks trace preservation.
    pub fn from_kraus(kraus: Vec<DenseOperator>) -> Result<Self> {
        let n = kraus
            .first()
            .map(DenseOperator::n)
            .ok_or_else(|| invalid("a channel needs at least one Kraus operator"))?;
        if let Some(bad) = kraus.iter().find(|k| k.n() != n) {
            return Err(Error::SizeMismatch { expected: n, found: bad.n() });
        }
        let deviation = trace_deviation(&kraus);
        if deviation > TRACE_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        let kind = if kraus.len() == 1 { ChannelKind::Unitary } else { ChannelKind::General };
        Ok(Self { n, kind, repr: Repr::Kraus(kraus) })
    }

    /// `rho -> sum_v a_v K_v rho K_v` for a probability vector indexed by
    /// base-4 Pauli index.
    pub fn pauli_diagonal(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << (2 * n) {
            return Err(Error::SizeMismatch { expected: 1 << (2 * n), found: probs.len() });
        }
        if let Some(&p) = probs.iter().find(|&&p| !(p >= 0.0)) {
            return Err(invalid(format!("negative Pauli probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::NotTracePreserving { deviation: (total - 1.0).abs() });
        }
        Ok(Self { n, kind: ChannelKind::PauliDiagonal, repr: Repr::Pauli(probs) })
    }

    /// Independent single-qubit Pauli channels; `per_qubit[q]` holds the
    /// probabilities of `(I, X, Y, Z)` on qubit `q`.
    pub fn pauli_product(per_qubit: &[[f64; 4]]) -> Result<Self> {
        let n = per_qubit.len();
        for probs in per_qubit {
            let total: f64 = probs.iter().sum();
            if probs.iter().any(|&p| !(p >= 0.0)) || (total - 1.0).abs() > TRACE_TOL {
                return Err(invalid(format!("bad single-qubit Pauli distribution {probs:?}")));
            }
        }
        let mut table = vec![1.0f64];
        for probs in per_qubit {
            table = table.iter().flat_map(|&a| probs.iter().map(move |&b| a * b)).collect();
        }
        Self::pauli_diagonal(n, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// Pauli probabilities when the channel is stored Pauli-diagonally.
    pub fn pauli_probabilities(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Pauli(p) => Some(p),
            Repr::Kraus(_) => None,
        }
    }

    /// Number of Kraus operators (nonzero Pauli terms for diagonal channels).
    pub fn kraus_count(&self) -> usize {
        match &self.repr {
            Repr::Kraus(k) => k.len(),
            Repr::Pauli(p) => p.iter().filter(|&&a| a > 0.0).count(),
        }
    }

    /// Kraus operators; Pauli-diagonal channels are materialized as
    /// `sqrt(a_v) K_v`.
    pub fn kraus_operators(&self) -> Result<Cow<'_, [DenseOperator]>> {
        match &self.repr {
            Repr::Kraus(k) => Ok(Cow::Borrowed(k)),
            Repr::Pauli(p) => {
                let count = self.kraus_count();
                let entries = count.saturating_mul(1 << (2 * self.n));
                if entries > MATERIALIZE_ENTRY_CAP {
                    return Err(Error::OverCap {
                        what: "materialized Kraus entries",
                        requested: entries,
                        cap: MATERIALIZE_ENTRY_CAP,
                    });
                }
                Ok(Cow::Owned(
                    p.iter()
                        .enumerate()
                        .filter(|(_, &a)| a > 0.0)
                        .map(|(v, &a)| {
                            PauliString::from_index(self.n, v).to_dense().scale(C64::new(libm::sqrt(a), 0.0))
                        })
                        .collect(),
                ))
            }
        }
    }

    /// Diagonal of the chi matrix in the multi-Pauli basis.
    pub fn chi_diagonal(&self) -> Result<Vec<f64>> {
        match &self.repr {
            Repr::Pauli(p) => Ok(p.clone()),
            Repr::Kraus(k) => chi_diagonal_of_kraus(k),
        }
    }

    /// Largest entry of `|sum_j E_j^dagger E_j - I|`.
    pub fn trace_deviation(&self) -> f64 {
        match &self.repr {
            Repr::Kraus(k) => trace_deviation(k),
            Repr::Pauli(p) => (p.iter().sum::<f64>() - 1.0).abs(),
        }
    }

    /// Choi matrix `sum_j |E_j>> <<E_j|` with `|E>> = sum_i |i> (x) E|i>`.
    pub fn choi_matrix(&self) -> Result<CMatrix> {
        choi_of_kraus(&self.kraus_operators()?)
    }

    pub fn choi_min_eigenvalue(&self) -> Result<f64> {
        Ok(min_hermitian_eigenvalue(&self.choi_matrix()?))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: rho.n() });
        }
        let m = rho.matrix();
        let out = match &self.repr {
            Repr::Kraus(kraus) => kraus
                .iter()
                .fold(CMatrix::zeros(m.nrows(), m.ncols()), |acc, e| acc + e.matrix() * m * e.matrix().adjoint()),
            Repr::Pauli(probs) => apply_pauli_diagonal(self.n, probs, m),
        };
        Ok(DensityMatrix { n: self.n, matrix: out })
    }
}

fn apply_pauli_diagonal(n: usize, probs: &[f64], rho: &CMatrix) -> CMatrix {
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    for (v, &a) in probs.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let (x, z, _) = PauliString::from_index(n, v).masks();
        // K rho K^dagger maps entry (b, b') to (b ^ x, b' ^ x) with sign
        // (-1)^{|z & b| + |z & b'|}; the Y phases cancel.
        for c in 0..dim {
            let sc = (z & c).count_ones();
            for r in 0..dim {
                let sign = if ((z & r).count_ones() + sc) % 2 == 0 { a } else { -a };
                out[(r ^ x, c ^ x)] += rho[(r, c)] * sign;
            }
        }
    }
    out
}

pub(crate) fn trace_deviation(kraus: &[DenseOperator]) -> f64 {
    let dim = kraus[0].dim();
    let sum = kraus.iter().fold(CMatrix::zeros(dim, dim), |acc, e| acc + e.matrix().adjoint() * e.matrix());
    max_abs_deviation_from_identity(&sum)
}

/// `chi_vv = sum_j |a_{jv}|^2` for Kraus operators `E_j = sum_v a_{jv} K_v`.
pub fn chi_diagonal_of_kraus(kraus: &[DenseOperator]) -> Result<Vec<f64>> {
    let n = kraus[0].n();
    let mut chi = vec![0.0; 1 << (2 * n)];
    for e in kraus {
        let c = pauli_expand(e)?;
        for (acc, a) in chi.iter_mut().zip(c.as_slice()) {
            *acc += a.norm_sqr();
        }
    }
    Ok(chi)
}

pub(crate) fn choi_of_kraus(kraus: &[DenseOperator]) -> Result<CMatrix> {
    let n = kraus[0].n();
    if n > CHOI_QUBIT_CAP {
        return Err(Error::OverCap { what: "qubits for an explicit Choi matrix", requested: n, cap: CHOI_QUBIT_CAP });
    }
    let dim = 1usize << n;
    let mut choi = CMatrix::zeros(dim * dim, dim * dim);
    for e in kraus {
        let v = vectorize(e);
        choi += &v * v.adjoint();
    }
    Ok(choi)
}

/// `|E>>` with entry `(i, r) -> E[r, i]` at index `i * dim + r`.
fn vectorize(e: &DenseOperator) -> CVector {
    let dim = e.dim();
    CVector::from_fn(dim * dim, |idx, _| e.matrix()[(idx % dim, idx / dim)])
}

fn unvectorize(v: &[C64], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |r, i| v[i * dim + r])
}

/// Replaces a Kraus list by an equivalent one of minimal length, through the
/// eigendecomposition of its Gram matrix (when shorter than `4^n`) or of the
/// Choi matrix. Both have the same nonzero spectrum.
pub fn compress_kraus(kraus: &[DenseOperator]) -> Result<Vec<DenseOperator>> {
    let n = kraus[0].n();
    let dim = 1usize << n;
    let r = kraus.len();
    let work = r.min(dim * dim);
    if work > COMPRESSION_DIM_CAP {
        return Err(Error::OverCap { what: "Kraus rank for compression", requested: work, cap: COMPRESSION_DIM_CAP });
    }
    let mut out = Vec::new();
    if r <= dim * dim {
        let gram = CMatrix::from_fn(r, r, |i, j| {
            kraus[i].matrix().iter().zip(kraus[j].matrix().iter()).map(|(a, b)| a.conj() * b).sum::<C64>()
        });
        let eig = gram.symmetric_eigen();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < COMPRESSION_EIG_TOL {
                continue;
            }
            let mut f = CMatrix::zeros(dim, dim);
            for (j, e) in kraus.iter().enumerate() {
                let w = eig.eigenvectors[(j, k)];
                if w != ZERO {
                    f += e.matrix() * w;
                }
            }
            out.push(DenseOperator::new(f)?);
        }
    } else {
        let eig = choi_of_kraus(kraus)?.symmetric_eigen();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < COMPRESSION_EIG_TOL {
                continue;
            }
            let col: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            let f = unvectorize(&col, dim) * C64::new(libm::sqrt(lambda), 0.0);
            out.push(DenseOperator::new(f)?);
        }
    }
    Ok(out)
}

/// Sequential composition with the default Kraus cap: the first channel in
/// the list is applied first.
pub fn compose(channels: &[Channel]) -> Result<Channel> {
    compose_capped(channels, DEFAULT_KRAUS_CAP)
}

pub fn compose_capped(channels: &[Channel], kraus_cap: usize) -> Result<Channel> {
    let first = channels.first().ok_or_else(|| invalid("nothing to compose"))?;
    let n = first.n;
    if let Some(bad) = channels.iter().find(|c| c.n != n) {
        return Err(Error::SizeMismatch { expected: n, found: bad.n });
    }
    if channels.iter().all(|c| c.kind == ChannelKind::PauliDiagonal) {
        return compose_pauli(channels);
    }
    let all_unitary = channels.iter().all(|c| c.kind == ChannelKind::Unitary);
    let choi_dim = 1usize << (2 * n);
    let mut acc: Vec<DenseOperator> = first.kraus_operators()?.into_owned();
    for next in &channels[1..] {
        let next_ops = next.kraus_operators()?;
        let entries = (acc.len() * next_ops.len()).saturating_mul(choi_dim);
        if entries > MATERIALIZE_ENTRY_CAP {
            return Err(Error::OverCap {
                what: "materialized Kraus entries",
                requested: entries,
                cap: MATERIALIZE_ENTRY_CAP,
            });
        }
        let mut product = Vec::with_capacity(acc.len() * next_ops.len());
        for a in &acc {
            for b in next_ops.iter() {
                product.push(b.mul(a)?);
            }
        }
        acc = if product.len() > kraus_cap || product.len() > choi_dim { compress_kraus(&product)? } else { product };
    }
    let kind = if all_unitary { ChannelKind::Unitary } else { ChannelKind::General };
    Ok(Channel { n, kind, repr: Repr::Kraus(acc) })
}

/// Pauli channels compose by convolution over the Pauli group, computed in
/// the symplectic `Z_2^{2n}` picture.
fn compose_pauli(channels: &[Channel]) -> Result<Channel> {
    let n = channels[0].n;
    let to_symplectic = |probs: &[f64]| {
        let mut s = vec![0.0; probs.len()];
        for (v, &a) in probs.iter().enumerate() {
            s[index_to_symplectic(v, n)] = a;
        }
        s
    };
    let mut acc = to_symplectic(channels[0].pauli_probabilities().expect("diagonal"));
    for ch in &channels[1..] {
        acc = xor_convolve(&acc, &to_symplectic(ch.pauli_probabilities().expect("diagonal")));
    }
    let mut probs = vec![0.0; acc.len()];
    for (s, &a) in acc.iter().enumerate() {
        probs[symplectic_to_index(s, n)] = a.max(0.0);
    }
    Channel::pauli_diagonal(n, probs)
}

/// `ch` acting on `targets` of an `n`-qubit register, identity elsewhere.
pub fn embed(ch: &Channel, targets: &[usize], n: usize) -> Result<Channel> {
    validate_targets(targets, n)?;
    if targets.len() != ch.n {
        return Err(Error::SizeMismatch { expected: ch.n, found: targets.len() });
    }
    let repr = match &ch.repr {
        Repr::Kraus(kraus) => Repr::Kraus(kraus.iter().map(|e| e.embed(targets, n)).collect::<Result<_>>()?),
        Repr::Pauli(probs) => {
            let k = ch.n;
            let mut table = vec![0.0; 1 << (2 * n)];
            for (v, &a) in probs.iter().enumerate() {
                let full = targets.iter().enumerate().fold(0usize, |acc, (pos, &t)| {
                    let digit = (v >> (2 * (k - 1 - pos))) & 3;
                    acc | (digit << (2 * (n - 1 - t)))
                });
                table[full] = a;
            }
            Repr::Pauli(table)
        }
    };
    Ok(Channel { n, kind: ch.kind, repr })
}

/// Tolerances for [`DensityMatrix`] validation.
pub const STATE_TOL: f64 = 1e-10;
pub const STATE_EIG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let op = DenseOperator::new(matrix)?;
        let state = Self { n: op.n(), matrix: op.into_matrix() };
        state.validate()?;
        Ok(state)
    }

    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let v = CVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v / C64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let dim = 1usize << n;
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = C64::new(1.0, 0.0);
        Self { n, matrix: m }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        Self { n, matrix: CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let herm = crate::linalg::max_abs_diff(m, &m.adjoint());
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = min_hermitian_eigenvalue(m);
        if min < -STATE_EIG_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `<psi| rho |psi>` for a normalized `psi`.
    pub fn fidelity_with_pure(&self, psi: &[C64]) -> f64 {
        let v = CVector::from_column_slice(psi);
        (v.adjoint() * &self.matrix * &v)[(0, 0)].re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        crate::linalg::max_abs_diff(&self.matrix, &other.matrix)
    }
}
