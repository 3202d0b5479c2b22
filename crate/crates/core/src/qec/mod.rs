//! Small stabilizer codes under sampled noise.
//!
//! Errors are handled in the binary symplectic picture: a Pauli string is
//! a pair of bitmasks `(x, z)` with qubit `q` at bit `n - 1 - q`, and two
//! strings anticommute iff `|x1 & z2| + |z1 & x2|` is odd.

mod code;
mod exact;
mod sampling;

pub use code::{builtin_code, Correction, StabilizerCode, BUILTIN_CODES};
pub use exact::{logical_states, recovery_fidelity, residual_logical, twirl, EXACT_QUBIT_CAP};
pub use sampling::{exact_failure_probability, logical_error_rate, ErrorModel, QecResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Symplectic {
    pub x: usize,
    pub z: usize,
}

impl Symplectic {
    pub(crate) fn from_string(p: &crate::pauli::PauliString) -> Self {
        let (x, z, _) = p.masks();
        Self { x, z }
    }

    /// From a base-4 index over `n` qubits.
    pub(crate) fn from_index(v: usize, n: usize) -> Self {
        let s = crate::pauli::index_to_symplectic(v, n);
        Self { x: s >> n, z: s & ((1 << n) - 1) }
    }

    pub(crate) fn anticommutes(self, other: Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 1
    }

    pub(crate) fn times(self, other: Self) -> Self {
        Self { x: self.x ^ other.x, z: self.z ^ other.z }
    }

    pub(crate) fn weight(self) -> u32 {
        (self.x | self.z).count_ones()
    }
}
