//! Single-qubit Paulis, quarter phases and signed multi-Pauli strings.
//!
//! Phase convention: `Y = i X Z`. A string `K_v` is indexed by
//! `v in {I, X, Y, Z}^n`; as an integer, `v` is read base 4 with qubit 0 as
//! the most significant digit and digits `I = 0, X = 1, Y = 2, Z = 3`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{bit_of, CMatrix, DenseOperator, C64, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[repr(u8)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_digit(d: u8) -> Self {
        Self::ALL[usize::from(d & 3)]
    }

    pub fn digit(self) -> u8 {
        self as u8
    }

    /// `(x, z)` bits with `P = i^{x z} X^x Z^z`.
    pub fn symplectic(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_symplectic(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// `self * rhs = phase * result`.
    pub fn mul(self, rhs: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            (X, Y) => (Phase::PLUS_I, Z),
            (Y, Z) => (Phase::PLUS_I, X),
            (Z, X) => (Phase::PLUS_I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -i, i, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        CMatrix::from_row_slice(2, 2, &entries)
    }

    pub fn as_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' | '_' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// A power of `i`: `+1, +i, -1, -i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const PLUS_I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][usize::from(self.0)])
    }
}

/// Signed tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PauliString {
    symbols: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn new(symbols: Vec<Pauli>) -> Self {
        Self { symbols, phase: Phase::ONE }
    }

    pub fn with_phase(symbols: Vec<Pauli>, phase: Phase) -> Self {
        Self { symbols, phase }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(alloc::vec![Pauli::I; n])
    }

    /// Single non-identity symbol `p` on qubit `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.symbols[q] = p;
        s
    }

    /// String with base-4 index `index` (phase +1).
    pub fn from_index(n: usize, index: usize) -> Self {
        let symbols = (0..n).map(|q| Pauli::from_digit(((index >> (2 * (n - 1 - q))) & 3) as u8)).collect();
        Self::new(symbols)
    }

    pub fn index(&self) -> usize {
        self.symbols.iter().fold(0usize, |acc, p| (acc << 2) | usize::from(p.digit()))
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Pauli] {
        &self.symbols
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn get(&self, q: usize) -> Pauli {
        self.symbols[q]
    }

    /// Number of non-identity factors.
    pub fn height(&self) -> usize {
        self.symbols.iter().filter(|&&p| p != Pauli::I).count()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols.iter().enumerate().filter(|(_, &p)| p != Pauli::I).map(|(q, _)| q)
    }

    /// Drops the phase.
    pub fn unsigned(&self) -> Self {
        Self::new(self.symbols.clone())
    }

    /// Product `self * rhs`, phase included.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.n() != rhs.n() {
            return Err(Error::SizeMismatch { expected: self.n(), found: rhs.n() });
        }
        let mut phase = self.phase.mul(rhs.phase);
        let symbols = self
            .symbols
            .iter()
            .zip(&rhs.symbols)
            .map(|(&a, &b)| {
                let (ph, p) = a.mul(b);
                phase = phase.mul(ph);
                p
            })
            .collect();
        Ok(Self { symbols, phase })
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti =
            self.symbols.iter().zip(&other.symbols).filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b).count();
        anti % 2 == 0
    }

    /// `(x, z)` masks with qubit `q` at bit `bit_of(q, n)`, and the number of
    /// `Y` factors.
    pub(crate) fn masks(&self) -> (usize, usize, u32) {
        let n = self.n();
        let mut x = 0usize;
        let mut z = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.symbols.iter().enumerate() {
            let (px, pz) = p.symplectic();
            if px {
                x |= 1 << bit_of(q, n);
            }
            if pz {
                z |= 1 << bit_of(q, n);
            }
            if px && pz {
                ys += 1;
            }
        }
        (x, z, ys)
    }

    /// Dense `2^n x 2^n` matrix including the phase.
    pub fn to_dense(&self) -> DenseOperator {
        let n = self.n();
        let dim = 1usize << n;
        let (x, z, ys) = self.masks();
        let global = self.phase.mul(Phase::from_power(ys)).to_complex();
        let mut m = CMatrix::zeros(dim, dim);
        for b in 0..dim {
            let sign = if (z & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(b ^ x, b)] = global * sign;
        }
        DenseOperator::new(m).expect("power-of-two dimension")
    }

    /// `psi <- K psi` in place.
    pub fn apply_to_vector(&self, psi: &mut [C64]) {
        let (x, z, ys) = self.masks();
        let global = self.phase.mul(Phase::from_power(ys)).to_complex();
        let signed = |b: usize, v: C64| {
            if (z & b).count_ones() % 2 == 0 {
                global * v
            } else {
                -global * v
            }
        };
        if x == 0 {
            for (b, v) in psi.iter_mut().enumerate() {
                *v = signed(b, *v);
            }
            return;
        }
        for b in 0..psi.len() {
            let partner = b ^ x;
            if b < partner {
                let (vb, vp) = (psi[b], psi[partner]);
                psi[partner] = signed(b, vb);
                psi[b] = signed(partner, vp);
            }
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != Phase::ONE {
            write!(f, "{}", self.phase)?;
        }
        for p in &self.symbols {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts an optional sign prefix (`+`, `-`, `+i`, `-i`, `i`) followed
    /// by the symbols, e.g. `"-iXZI"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, rest) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::PLUS_I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('i') {
            (Phase::PLUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let symbols = rest
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::Parse(alloc::format!("bad Pauli symbol {c:?} in {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { symbols, phase })
    }
}

/// Height of a base-4 index over `n` digits.
#[inline]
pub fn index_height(index: usize, n: usize) -> usize {
    (0..n).filter(|&q| (index >> (2 * q)) & 3 != 0).count()
}

/// Whether digit `q` (qubit `q`) of a base-4 index is non-identity.
#[inline]
pub fn index_touches(index: usize, q: usize, n: usize) -> bool {
    (index >> (2 * (n - 1 - q))) & 3 != 0
}

/// Base-4 index to the symplectic integer `(x bits << n) | z bits` used for
/// group convolutions; qubit `q` sits at bit `n - 1 - q` of each half.
pub fn index_to_symplectic(index: usize, n: usize) -> usize {
    let mut x = 0usize;
    let mut z = 0usize;
    for q in 0..n {
        let d = ((index >> (2 * (n - 1 - q))) & 3) as u8;
        let (px, pz) = Pauli::from_digit(d).symplectic();
        let bit = n - 1 - q;
        if px {
            x |= 1 << bit;
        }
        if pz {
            z |= 1 << bit;
        }
    }
    (x << n) | z
}

pub fn symplectic_to_index(s: usize, n: usize) -> usize {
    let x = s >> n;
    let z = s & ((1 << n) - 1);
    (0..n).fold(0usize, |acc, q| {
        let bit = n - 1 - q;
        let p = Pauli::from_symplectic((x >> bit) & 1 == 1, (z >> bit) & 1 == 1);
        (acc << 2) | usize::from(p.digit())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use alloc::string::ToString;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_qubit_products() {
        // X * Z = -i Y
        assert_eq!(ps("X").mul(&ps("Z")).unwrap(), ps("-iY"));
        assert_eq!(ps("IX").mul(&ps("IX")).unwrap(), ps("II"));
        assert_eq!(ps("XZ").mul(&ps("ZZ")).unwrap(), ps("-iYI"));
    }

    #[test]
    fn products_agree_with_matrices() {
        for a in 0..16 {
            for b in 0..16 {
                let p = PauliString::from_index(2, a);
                let q = PauliString::from_index(2, b);
                let r = p.mul(&q).unwrap();
                let dense = p.to_dense().mul(&q.to_dense()).unwrap();
                assert!(max_abs_diff(r.to_dense().matrix(), dense.matrix()) < 1e-15);
                let swapped = q.to_dense().mul(&p.to_dense()).unwrap();
                let commute = max_abs_diff(dense.matrix(), swapped.matrix()) < 1e-15;
                assert_eq!(p.commutes_with(&q), commute);
            }
        }
    }

    #[test]
    fn y_convention() {
        let y = ps("Y").to_dense();
        let ixz = ps("iX").to_dense().mul(&ps("Z").to_dense()).unwrap();
        assert!(max_abs_diff(y.matrix(), ixz.matrix()) < 1e-15);
        assert!(max_abs_diff(y.matrix(), &Pauli::Y.matrix()) < 1e-15);
    }

    #[test]
    fn index_round_trips() {
        let s = ps("XIZY");
        assert_eq!(s.index(), 0b01_00_11_10);
        assert_eq!(PauliString::from_index(4, s.index()), s);
        assert_eq!(index_height(s.index(), 4), 3);
        assert!(index_touches(s.index(), 0, 4));
        assert!(!index_touches(s.index(), 1, 4));
        for v in 0..256 {
            assert_eq!(symplectic_to_index(index_to_symplectic(v, 4), 4), v);
        }
        assert_eq!(s.to_string(), "XIZY");
        assert_eq!(ps("-iXY").to_string(), "-iXY");
        assert!("XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn mismatched_lengths() {
        assert!(ps("X").mul(&ps("XX")).is_err());
    }

    #[test]
    fn vector_action_matches_dense() {
        let s = ps("-YXZ");
        let psi: Vec<C64> = (0..8).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let mut out = psi.clone();
        s.apply_to_vector(&mut out);
        let dense = s.to_dense();
        for r in 0..8 {
            let expected: C64 = (0..8).map(|c| dense.matrix()[(r, c)] * psi[c]).sum();
            assert!((out[r] - expected).norm() < 1e-14);
        }
    }
}
