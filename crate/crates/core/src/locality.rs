//! Locality filtrations: height truncation, the `N_eps` damping and
//! best tensor-product fits over qubit partitions.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::Rng;

use crate::channel::{choi_of_kraus, trace_deviation, Channel, CHOI_QUBIT_CAP};
use crate::error::{invalid, Error, Result};
use crate::expand::{pauli_expand, PauliCoefficients};
use crate::linalg::{
    apply_local_left, bit_of, complex_gaussian, min_hermitian_eigenvalue, CMatrix, DenseOperator, C64, ZERO,
};
use crate::noise::random_partition;
use crate::pauli::index_height;
use crate::rng::seeded;

/// Zeroes every coefficient above height `k`; returns the removed norm.
pub fn truncate_coefficients(c: &mut PauliCoefficients, k: usize) -> f64 {
    let n = c.n();
    let mut removed = 0.0;
    for (v, x) in c.as_mut_slice().iter_mut().enumerate() {
        if index_height(v, n) > k {
            removed += x.norm_sqr();
            *x = ZERO;
        }
    }
    libm::sqrt(removed)
}

/// Orthogonal projection onto `M(<= k)` and the normalized residual norm.
pub fn truncate_m(a: &DenseOperator, k: usize) -> Result<(DenseOperator, f64)> {
    let mut c = pauli_expand(a)?;
    if k >= a.n() {
        return Ok((a.clone(), 0.0));
    }
    let residual = truncate_coefficients(&mut c, k);
    Ok((c.resum(), residual))
}

/// `sum_k eps^k Pi_k(A)` with `Pi_k` the exact-height-`k` component.
pub fn n_eps_filter(a: &DenseOperator, eps: f64) -> Result<DenseOperator> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(invalid(format!("eps = {eps} outside [0, 1]")));
    }
    if eps == 1.0 {
        return Ok(a.clone());
    }
    let mut c = pauli_expand(a)?;
    c.scale_by_height(|k| height_factor(eps, k));
    Ok(c.resum())
}

/// `eps^k`, with `0^0 = 1`.
pub fn height_factor(eps: f64, k: usize) -> f64 {
    libm::pow(eps, k as f64)
}

/// Kraus operators of a channel after `N_eps`; completely positive by
/// construction but in general not trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredChannel {
    pub kraus: Vec<DenseOperator>,
    /// Largest entry of `|sum E_j^dagger E_j - I|`.
    pub trace_defect: f64,
    /// Smallest Choi eigenvalue, when the register is small enough.
    pub choi_min_eigenvalue: Option<f64>,
}

pub fn n_eps_filter_channel(ch: &Channel, eps: f64) -> Result<FilteredChannel> {
    let kraus = ch.kraus_operators()?.iter().map(|e| n_eps_filter(e, eps)).collect::<Result<Vec<_>>>()?;
    let choi_min_eigenvalue =
        if ch.n() <= CHOI_QUBIT_CAP { Some(min_hermitian_eigenvalue(&choi_of_kraus(&kraus)?)) } else { None };
    Ok(FilteredChannel { trace_defect: trace_deviation(&kraus), choi_min_eigenvalue, kraus })
}

/// Disjoint qubit blocks covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.is_empty() {
                return Err(invalid("empty block"));
            }
            for &q in b {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n });
                }
                if seen[q] {
                    return Err(Error::DuplicateQubit(q));
                }
                seen[q] = true;
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(invalid(format!("qubit {q} is not covered")));
        }
        Ok(Self { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self { n, blocks: (0..n).map(|q| vec![q]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        Self { n, blocks: vec![(0..n).collect()] }
    }

    /// Consecutive blocks `[0, k), [k, 2k), ...`.
    pub fn contiguous(n: usize, k: usize) -> Self {
        let all: Vec<usize> = (0..n).collect();
        Self { n, blocks: all.chunks(k.max(1)).map(<[usize]>::to_vec).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn max_block(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Same blocks, each sorted, listed by smallest member.
    pub fn canonical(&self) -> Self {
        let mut blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort_unstable();
        Self { n: self.n, blocks }
    }

    /// Every partition obtained by merging two blocks into one of size at
    /// most `k`.
    pub fn coarsenings(&self, k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 0..self.blocks.len() {
            for j in i + 1..self.blocks.len() {
                if self.blocks[i].len() + self.blocks[j].len() > k {
                    continue;
                }
                let mut blocks = Vec::with_capacity(self.blocks.len() - 1);
                for (idx, b) in self.blocks.iter().enumerate() {
                    if idx == i {
                        let mut merged = b.clone();
                        merged.extend_from_slice(&self.blocks[j]);
                        blocks.push(merged);
                    } else if idx != j {
                        blocks.push(b.clone());
                    }
                }
                out.push(Self { n: self.n, blocks }.canonical());
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    /// `0,1|2,3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for (j, q) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{q}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|q| q.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{q:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitMethod {
    /// Singular value decomposition for two blocks, alternating least
    /// squares otherwise.
    #[default]
    Auto,
    Als,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub method: FitMethod,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub restarts: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { method: FitMethod::Auto, max_iterations: 200, tolerance: 1e-10, restarts: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorFit {
    /// One factor per block, acting on that block's qubits in listed order.
    pub factors: Vec<DenseOperator>,
    pub approximation: DenseOperator,
    /// `||A - B_1 (x) ... (x) B_r|| / ||A||`.
    pub delta: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Best product approximation of `a` over `partition`.
pub fn tensor_fit(a: &DenseOperator, partition: &Partition) -> Result<TensorFit> {
    tensor_fit_with(a, partition, &FitOptions::default(), &mut seeded(0x7e45_0f17))
}

pub fn tensor_fit_with<R: Rng + ?Sized>(
    a: &DenseOperator,
    partition: &Partition,
    opts: &FitOptions,
    rng: &mut R,
) -> Result<TensorFit> {
    let n = a.n();
    if partition.n() != n {
        return Err(Error::SizeMismatch { expected: n, found: partition.n() });
    }
    let t = Realigned::new(a, partition);
    let (vectors, converged, iterations) = match (opts.method, partition.blocks().len()) {
        (_, 1) => (vec![t.data.clone()], true, 0),
        (FitMethod::Auto, 2) => (t.svd_rank_one(), true, 0),
        _ => t.als(opts, rng),
    };
    let factors: Vec<DenseOperator> = vectors
        .iter()
        .zip(partition.blocks())
        .map(|(v, b)| {
            let d = 1usize << b.len();
            DenseOperator::new(CMatrix::from_fn(d, d, |r, c| v[(r << b.len()) | c]))
        })
        .collect::<Result<_>>()?;
    let dim = 1usize << n;
    let mut approx = CMatrix::identity(dim, dim);
    for (f, b) in factors.iter().zip(partition.blocks()) {
        apply_local_left(&mut approx, f.matrix(), b, n);
    }
    let norm = a.matrix().norm();
    let delta = if norm == 0.0 { 0.0 } else { (a.matrix() - &approx).norm() / norm };
    Ok(TensorFit { factors, approximation: DenseOperator::new(approx)?, delta, converged, iterations })
}

/// Entries of `A` rearranged into an order-`r` tensor whose mode `i` is
/// the `(row, column)` pair of block `i`.
struct Realigned {
    dims: Vec<usize>,
    strides: Vec<usize>,
    data: Vec<C64>,
}

impl Realigned {
    fn new(a: &DenseOperator, partition: &Partition) -> Self {
        let n = a.n();
        let dim = 1usize << n;
        let blocks = partition.blocks();
        let dims: Vec<usize> = blocks.iter().map(|b| 1usize << (2 * b.len())).collect();
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        // local[i][x]: bits of basis index x on block i, first qubit highest.
        let local: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| {
                (0..dim).map(|x| b.iter().fold(0usize, |acc, &q| (acc << 1) | ((x >> bit_of(q, n)) & 1))).collect()
            })
            .collect();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                let mut idx = 0;
                for (i, b) in blocks.iter().enumerate() {
                    idx += ((local[i][r] << b.len()) | local[i][c]) * strides[i];
                }
                data[idx] = a.matrix()[(r, c)];
            }
        }
        Self { dims, strides, data }
    }

    fn svd_rank_one(&self) -> Vec<Vec<C64>> {
        let (rows, cols) = (self.dims[0], self.dims[1]);
        // Row-major data: entry (i, j) at i * cols + j.
        let m = CMatrix::from_fn(rows, cols, |i, j| self.data[i * cols + j]);
        let svd = m.svd(true, true);
        let (best, sigma) =
            svd.singular_values
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
        let u = svd.u.expect("requested");
        let v_t = svd.v_t.expect("requested");
        let left = (0..rows).map(|i| u[(i, best)] * sigma).collect();
        let right = (0..cols).map(|j| v_t[(best, j)]).collect();
        vec![left, right]
    }

    fn norm_sqr(&self) -> f64 {
        self.data.iter().map(C64::norm_sqr).sum()
    }

    /// `sum T[x] prod_{j != skip} conj(b_j[x_j])`, as a vector over mode
    /// `skip`; with `skip = None` the full inner product `<b, T>`.
    fn contract(&self, factors: &[Vec<C64>], skip: Option<usize>) -> Vec<C64> {
        let mut out = vec![ZERO; skip.map_or(1, |s| self.dims[s])];
        for (idx, &t) in self.data.iter().enumerate() {
            if t == ZERO {
                continue;
            }
            let mut w = t;
            let mut slot = 0;
            for (j, f) in factors.iter().enumerate() {
                let x = (idx / self.strides[j]) % self.dims[j];
                if Some(j) == skip {
                    slot = x;
                } else {
                    w *= f[x].conj();
                }
            }
            out[slot] += w;
        }
        out
    }

    /// Alternating least squares on the rank-one model with random
    /// restarts; keeps the best restart.
    fn als<R: Rng + ?Sized>(&self, opts: &FitOptions, rng: &mut R) -> (Vec<Vec<C64>>, bool, usize) {
        let total = self.norm_sqr();
        let mut best: Option<(f64, Vec<Vec<C64>>, bool, usize)> = None;
        for _ in 0..opts.restarts.max(1) {
            let mut factors: Vec<Vec<C64>> =
                self.dims.iter().map(|&d| complex_gaussian(d, 1, rng).iter().copied().collect()).collect();
            let mut previous = f64::INFINITY;
            let mut converged = false;
            let mut iterations = 0;
            let mut residual = total;
            for it in 0..opts.max_iterations {
                iterations = it + 1;
                for i in 0..factors.len() {
                    let others: f64 = factors
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, f)| f.iter().map(C64::norm_sqr).sum::<f64>())
                        .product();
                    if others == 0.0 {
                        break;
                    }
                    let mut next = self.contract(&factors, Some(i));
                    for x in &mut next {
                        *x /= others;
                    }
                    factors[i] = next;
                }
                let overlap = self.contract(&factors, None)[0];
                let model: f64 = factors.iter().map(|f| f.iter().map(C64::norm_sqr).sum::<f64>()).product();
                residual = (total - 2.0 * overlap.re + model).max(0.0);
                let delta = if total > 0.0 { libm::sqrt(residual / total) } else { 0.0 };
                if (previous - delta).abs() < opts.tolerance {
                    converged = true;
                    break;
                }
                previous = delta;
            }
            if best.as_ref().is_none_or(|b| residual < b.0) {
                best = Some((residual, factors, converged, iterations));
            }
        }
        let (_, factors, converged, iterations) = best.expect("at least one restart");
        (factors, converged, iterations)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileEntry {
    pub k: usize,
    pub delta: f64,
    pub partition: Partition,
}

/// Best relative residual found for each maximum block size.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalityProfile {
    pub entries: Vec<ProfileEntry>,
}

/// For `k = 1..=max_k`, fits over `samples` random partitions with blocks
/// of size `k`, the contiguous partition and every one-merge coarsening of
/// the previous best. The best partition for `k - 1` stays admissible, so
/// the reported `delta(k)` never increases.
pub fn approx_local_profile<R: Rng + ?Sized>(
    a: &DenseOperator,
    max_k: usize,
    samples: usize,
    rng: &mut R,
) -> Result<LocalityProfile> {
    let n = a.n();
    if max_k == 0 || max_k > n {
        return Err(invalid(format!("max_k = {max_k} outside [1, {n}]")));
    }
    let opts = FitOptions::default();
    let mut entries: Vec<ProfileEntry> = Vec::with_capacity(max_k);
    for k in 1..=max_k {
        let mut candidates = vec![Partition::contiguous(n, k)];
        for _ in 0..samples {
            candidates.push(Partition { n, blocks: random_partition(n, k, rng) }.canonical());
        }
        if let Some(prev) = entries.last() {
            candidates.extend(prev.partition.coarsenings(k));
        }
        let mut seen: Vec<Partition> = Vec::new();
        let mut best: Option<ProfileEntry> = entries.last().map(|e| ProfileEntry { k, ..e.clone() });
        for p in candidates {
            let p = p.canonical();
            if seen.contains(&p) {
                continue;
            }
            let fit = tensor_fit_with(a, &p, &opts, rng)?;
            if best.as_ref().is_none_or(|b| fit.delta < b.delta) {
                best = Some(ProfileEntry { k, delta: fit.delta, partition: p.clone() });
            }
            seen.push(p);
        }
        entries.push(best.expect("at least one candidate"));
    }
    Ok(LocalityProfile { entries })
}

impl LocalityProfile {
    pub fn deltas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.delta).collect()
    }
}

/// Short identifier for a partition, usable as a CSV field.
pub fn partition_id(p: &Partition) -> String {
    format!("{p}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gates, haar_unitary};
    use crate::pauli::PauliString;

    fn cnot() -> DenseOperator {
        DenseOperator::new(gates::cnot()).unwrap()
    }

    #[test]
    fn truncation_of_cnot() {
        let (t, residual) = truncate_m(&cnot(), 1).unwrap();
        assert!((residual * residual - 0.25).abs() < 1e-15);
        let expect: DenseOperator = {
            let half = C64::new(0.5, 0.0);
            let sum = ["II", "IX", "ZI"]
                .iter()
                .map(|s| s.parse::<PauliString>().unwrap().to_dense().into_matrix())
                .fold(CMatrix::zeros(4, 4), |acc, m| acc + m);
            DenseOperator::new(sum * half).unwrap()
        };
        assert!(t.max_abs_diff(&expect) < 1e-15);
        let (full, r) = truncate_m(&cnot(), 2).unwrap();
        assert_eq!(full, cnot());
        assert_eq!(r, 0.0);
        let xx: DenseOperator = "XX".parse::<PauliString>().unwrap().to_dense();
        let (z, r) = truncate_m(&xx, 1).unwrap();
        assert!(z.normalized_hs_norm() < 1e-15 && (r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn truncation_is_idempotent_and_pythagorean() {
        let mut rng = seeded(31);
        let u = haar_unitary(4, &mut rng);
        for k in 0..=4 {
            let mut c = pauli_expand(&u).unwrap();
            truncate_coefficients(&mut c, k);
            let once = c.clone();
            assert_eq!(truncate_coefficients(&mut c, k), 0.0);
            assert_eq!(c, once);
            let (t, r) = truncate_m(&u, k).unwrap();
            let (tt, _) = truncate_m(&t, k).unwrap();
            assert!(tt.max_abs_diff(&t) < 1e-14);
            let lhs = u.normalized_hs_norm().powi(2);
            let rhs = t.normalized_hs_norm().powi(2) + r * r;
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn filter_scales_basis_elements() {
        let eps = 0.3;
        for s in ["II", "XI", "ZY", "YX"] {
            let p: PauliString = s.parse().unwrap();
            let k = p.to_dense();
            let filtered = n_eps_filter(&k, eps).unwrap();
            let expect = k.scale(C64::new(height_factor(eps, p.height()), 0.0));
            assert_eq!(filtered, expect, "{s}");
        }
        let mut rng = seeded(2);
        let u = haar_unitary(3, &mut rng);
        assert_eq!(n_eps_filter(&u, 1.0).unwrap(), u);
        let n0 = n_eps_filter(&cnot(), 0.0).unwrap();
        assert!(n0.max_abs_diff(&DenseOperator::identity(2).scale(C64::new(0.5, 0.0))) < 1e-15);
        let f = n_eps_filter(&cnot(), eps).unwrap();
        let expect = 0.25 + 0.5 * eps * eps + 0.25 * eps.powi(4);
        assert!((f.normalized_hs_norm().powi(2) - expect).abs() < 1e-12);
    }

    #[test]
    fn filtered_channel_is_cp_but_shrinks_trace() {
        let ch = Channel::unitary(cnot()).unwrap();
        let f = n_eps_filter_channel(&ch, 0.5).unwrap();
        assert!(f.choi_min_eigenvalue.unwrap() > -1e-12);
        assert!(f.trace_defect > 0.1);
    }

    #[test]
    fn product_operator_fits_exactly() {
        let mut rng = seeded(4);
        let a = haar_unitary(1, &mut rng);
        let b = haar_unitary(2, &mut rng);
        let mut m = CMatrix::identity(8, 8);
        apply_local_left(&mut m, a.matrix(), &[1], 3);
        apply_local_left(&mut m, b.matrix(), &[2, 0], 3);
        let op = DenseOperator::new(m).unwrap();
        let p = Partition::new(3, vec![vec![1], vec![2, 0]]).unwrap();
        let fit = tensor_fit(&op, &p).unwrap();
        assert!(fit.delta < 1e-9, "{}", fit.delta);
        let fit = tensor_fit(&op, &Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap()).unwrap();
        assert!(fit.delta > 0.1);
    }

    #[test]
    fn cnot_and_swap_fits() {
        let fit = tensor_fit(&cnot(), &Partition::singletons(2)).unwrap();
        assert!((fit.delta - libm::sqrt(0.5)).abs() < 1e-9);
        let swap = DenseOperator::new(gates::swap()).unwrap();
        let fit = tensor_fit(&swap, &Partition::singletons(2)).unwrap();
        assert!((fit.delta - libm::sqrt(0.75)).abs() < 1e-9);
    }

    #[test]
    fn als_matches_svd_on_bipartitions() {
        let mut rng = seeded(6);
        let opts = FitOptions { method: FitMethod::Als, ..FitOptions::default() };
        for _ in 0..10 {
            let a = DenseOperator::new(complex_gaussian(4, 4, &mut rng)).unwrap();
            let p = Partition::singletons(2);
            let svd = tensor_fit(&a, &p).unwrap();
            let als = tensor_fit_with(&a, &p, &opts, &mut rng).unwrap();
            assert!((svd.delta - als.delta).abs() < 1e-6, "{} vs {}", svd.delta, als.delta);
        }
    }

    #[test]
    fn partition_text() {
        let p: Partition = "0,1|2,3".parse().unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(format!("{p}"), "0,1|2,3");
        assert!("0,1|1".parse::<Partition>().is_err());
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn profiles() {
        let mut rng = seeded(8);
        let prof = approx_local_profile(&cnot(), 2, 2, &mut rng).unwrap();
        let d = prof.deltas();
        assert!((d[0] - libm::sqrt(0.5)).abs() < 1e-9);
        assert!(d[1] < 1e-12);
        let id = approx_local_profile(&DenseOperator::identity(3), 3, 2, &mut rng).unwrap();
        assert!(id.deltas().iter().all(|&x| x < 1e-9));
        let u = haar_unitary(4, &mut rng);
        let prof = approx_local_profile(&u, 4, 2, &mut rng).unwrap();
        let d = prof.deltas();
        assert!(d.windows(2).all(|w| w[1] <= w[0]));
        assert!(d[3] < 1e-12);
    }
}
