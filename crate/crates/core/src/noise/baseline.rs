use alloc::vec;

use crate::channel::Channel;
use crate::error::{check_probability, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum BaselineKind {
    /// `(1 - p, p/3, p/3, p/3)` per qubit.
    Depolarizing,
    /// `(1 - p, 0, 0, p)` per qubit.
    Dephasing,
}

/// Independent identical single-qubit Pauli channels.
pub fn baseline(kind: BaselineKind, n: usize, p: f64) -> Result<Channel> {
    check_probability("p", p)?;
    let single = match kind {
        BaselineKind::Depolarizing => [1.0 - p, p / 3.0, p / 3.0, p / 3.0],
        BaselineKind::Dephasing => [1.0 - p, 0.0, 0.0, p],
    };
    Channel::pauli_product(&vec![single; n])
}
