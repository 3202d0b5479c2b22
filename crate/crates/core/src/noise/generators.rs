use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{gates, CMatrix};

/// One element of the tiny generator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Generator {
    /// `R_X(+delta)` or `R_X(-delta)` on one qubit.
    Rx { positive: bool },
    /// `R_CX(+delta)` or `R_CX(-delta)` on an ordered (control, target) pair.
    Rcx { positive: bool },
}

impl Generator {
    pub fn arity(self) -> usize {
        match self {
            Generator::Rx { .. } => 1,
            Generator::Rcx { .. } => 2,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            Generator::Rx { positive } => Generator::Rx { positive: !positive },
            Generator::Rcx { positive } => Generator::Rcx { positive: !positive },
        }
    }
}

/// `W = {R_X(+-delta), R_CX(+-delta)}` with
/// `R_CX(delta) = exp(i delta |1><1| (x) (I - X)/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TinyGeneratorSet {
    pub delta: f64,
}

impl TinyGeneratorSet {
    pub const ELEMENTS: [Generator; 4] = [
        Generator::Rx { positive: true },
        Generator::Rx { positive: false },
        Generator::Rcx { positive: true },
        Generator::Rcx { positive: false },
    ];

    pub fn new(delta: f64) -> Self {
        Self { delta }
    }

    pub fn matrix(&self, g: Generator) -> CMatrix {
        match g {
            Generator::Rx { positive } => gates::rx(if positive { self.delta } else { -self.delta }),
            Generator::Rcx { positive } => gates::rcx(if positive { self.delta } else { -self.delta }),
        }
    }

    pub fn elements(&self) -> Vec<(Generator, CMatrix)> {
        Self::ELEMENTS.iter().map(|&g| (g, self.matrix(g))).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Generator {
        Self::ELEMENTS[rng.random_range(0..4)]
    }

    pub fn sample_single<R: Rng + ?Sized>(&self, rng: &mut R) -> Generator {
        Generator::Rx { positive: rng.random_bool(0.5) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    #[test]
    fn closed_under_inversion() {
        let w = TinyGeneratorSet::new(0.37);
        for (g, m) in w.elements() {
            let inv = w.matrix(g.inverse());
            let prod = &m * &inv;
            let id = CMatrix::identity(m.nrows(), m.ncols());
            assert!(max_abs_diff(&prod, &id) < 1e-14);
            assert!(max_abs_diff(&inv, &m.adjoint()) < 1e-14);
        }
    }

    #[test]
    fn full_angle_is_cnot() {
        let w = TinyGeneratorSet::new(core::f64::consts::PI);
        let m = w.matrix(Generator::Rcx { positive: true });
        assert!(max_abs_diff(&m, &gates::cnot()) < 1e-15);
    }
}
