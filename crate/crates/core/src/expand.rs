//! Expansion of operators in the multi-Pauli basis.
//!
//! `c_v = tr(K_v^dagger U) / 2^n`. The fast route applies a 4-point
//! transform on each qubit's `(row bit, column bit)` pair, `O(n 4^n)` in
//! total; the trace route sums the one nonzero entry per column of each
//! `K_v`, `O(8^n)`, and is kept as an independent cross-check.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DenseOperator, C64, ZERO};
use crate::pauli::{index_height, PauliString};
use crate::DEFAULT_QUBIT_CAP;

/// Coefficients of an operator in the multi-Pauli basis, indexed by the
/// base-4 index of `v` (see [`crate::pauli`]).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliCoefficients {
    n: usize,
    coeffs: Vec<C64>,
}

impl PauliCoefficients {
    pub fn from_vec(n: usize, coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() != 1usize << (2 * n) {
            return Err(Error::SizeMismatch { expected: 1 << (2 * n), found: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn get(&self, v: &PauliString) -> C64 {
        self.coeffs[v.index()] * v.phase().conj().to_complex()
    }

    /// `sum_v |c_v|^2`, the normalized Hilbert–Schmidt norm squared.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Squared coefficient mass by height, length `n + 1`.
    pub fn height_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (v, c) in self.coeffs.iter().enumerate() {
            w[index_height(v, self.n)] += c.norm_sqr();
        }
        w
    }

    /// Scales every coefficient of height `k` by `factor(k)`.
    pub fn scale_by_height(&mut self, factor: impl Fn(usize) -> f64) {
        let table: Vec<f64> = (0..=self.n).map(&factor).collect();
        let n = self.n;
        for (v, c) in self.coeffs.iter_mut().enumerate() {
            *c *= table[index_height(v, n)];
        }
    }

    /// Nonzero coefficients as `(string, value)` pairs.
    pub fn nonzero(&self, tol: f64) -> impl Iterator<Item = (PauliString, C64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.norm() > tol)
            .map(|(v, &c)| (PauliString::from_index(self.n, v), c))
    }

    /// Resums `sum_v c_v K_v` with the inverse local transform.
    pub fn resum(&self) -> DenseOperator {
        let n = self.n;
        let mut data = self.coeffs.clone();
        let i = C64::new(0.0, 1.0);
        for q in 0..n {
            let stride = 1usize << (2 * (n - 1 - q));
            for_each_quad(&mut data, stride, |[ci, cx, cy, cz]| [ci + cz, cx - i * cy, cx + i * cy, ci - cz]);
        }
        DenseOperator::new(unpack(&data, n)).expect("power-of-two dimension")
    }
}

/// Fast expansion with the default qubit cap.
pub fn pauli_expand(op: &DenseOperator) -> Result<PauliCoefficients> {
    pauli_expand_capped(op, DEFAULT_QUBIT_CAP)
}

pub fn pauli_expand_capped(op: &DenseOperator, cap: usize) -> Result<PauliCoefficients> {
    let n = op.n();
    if n > cap {
        return Err(Error::OverCap { what: "qubits for Pauli expansion", requested: n, cap });
    }
    let mut data = pack(op.matrix(), n);
    let half = C64::new(0.5, 0.0);
    let half_i = C64::new(0.0, 0.5);
    for q in 0..n {
        let stride = 1usize << (2 * (n - 1 - q));
        // (a, b; c, d) -> ((a + d)/2, (b + c)/2, i(b - c)/2, (a - d)/2)
        for_each_quad(&mut data, stride, |[a, b, c, d]| {
            [(a + d) * half, (b + c) * half, (b - c) * half_i, (a - d) * half]
        });
    }
    Ok(PauliCoefficients { n, coeffs: data })
}

/// Trace-by-trace expansion, one basis element at a time.
pub fn pauli_expand_by_trace(op: &DenseOperator) -> PauliCoefficients {
    let n = op.n();
    let dim = op.dim();
    let m = op.matrix();
    let coeffs = (0..1usize << (2 * n))
        .map(|v| {
            let k = PauliString::from_index(n, v).to_dense();
            let km = k.matrix();
            // K_v has exactly one nonzero per column.
            let mut acc = ZERO;
            for b in 0..dim {
                for r in 0..dim {
                    let e = km[(r, b)];
                    if e != ZERO {
                        acc += e.conj() * m[(r, b)];
                        break;
                    }
                }
            }
            acc / dim as f64
        })
        .collect();
    PauliCoefficients { n, coeffs }
}

/// Packs entry `(r, c)` at the base-4 index whose digit for qubit `q` is
/// `2 r_q + c_q`.
fn pack(m: &CMatrix, n: usize) -> Vec<C64> {
    let dim = 1usize << n;
    let spread = spread_table(n);
    let mut data = vec![ZERO; dim * dim];
    for c in 0..dim {
        for r in 0..dim {
            data[(spread[r] << 1) | spread[c]] = m[(r, c)];
        }
    }
    data
}

fn unpack(data: &[C64], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let spread = spread_table(n);
    CMatrix::from_fn(dim, dim, |r, c| data[(spread[r] << 1) | spread[c]])
}

/// `spread[x]` places bit `j` of `x` at bit `2 j`.
fn spread_table(n: usize) -> Vec<usize> {
    (0..1usize << n).map(|x| (0..n).fold(0usize, |acc, j| acc | (((x >> j) & 1) << (2 * j)))).collect()
}

fn for_each_quad(data: &mut [C64], stride: usize, f: impl Fn([C64; 4]) -> [C64; 4]) {
    for block in data.chunks_exact_mut(4 * stride) {
        for off in 0..stride {
            let quad = [block[off], block[off + stride], block[off + 2 * stride], block[off + 3 * stride]];
            let out = f(quad);
            for (j, v) in out.into_iter().enumerate() {
                block[off + j * stride] = v;
            }
        }
    }
}
