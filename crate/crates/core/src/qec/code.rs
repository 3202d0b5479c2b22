use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Symplectic;
use crate::error::{invalid, Error, Result};
use crate::pauli::{index_height, Pauli, PauliString};

pub const BUILTIN_CODES: [&str; 3] = ["rep3", "steane7", "shor9"];

/// Stabilizer code encoding one logical qubit, with a minimum-weight
/// lookup decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliString>,
    logical_x: PauliString,
    logical_z: PauliString,
    gen_masks: Vec<Symplectic>,
    lx: Symplectic,
    lz: Symplectic,
    /// Correction for each syndrome, bit `i` set when generator `i`
    /// anticommutes with the error.
    table: Vec<Symplectic>,
}

/// Outcome of one round of syndrome decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correction {
    pub corrected: bool,
    /// Logical action of `correction * error`.
    pub residual: Pauli,
}

impl StabilizerCode {
    /// Checks commutation relations and builds the decoder table.
    pub fn new(
        name: &str,
        generators: Vec<PauliString>,
        logical_x: PauliString,
        logical_z: PauliString,
    ) -> Result<Self> {
        let n = logical_x.n();
        if n == 0 || n > 12 {
            return Err(invalid(format!("code length {n} outside [1, 12]")));
        }
        for g in generators.iter().chain([&logical_z]) {
            if g.n() != n {
                return Err(Error::SizeMismatch { expected: n, found: g.n() });
            }
        }
        if generators.len() + 1 != n {
            return Err(invalid(format!("{} generators on {n} qubits do not encode one qubit", generators.len())));
        }
        let gen_masks: Vec<Symplectic> = generators.iter().map(Symplectic::from_string).collect();
        let lx = Symplectic::from_string(&logical_x);
        let lz = Symplectic::from_string(&logical_z);
        for (i, a) in gen_masks.iter().enumerate() {
            for b in &gen_masks[i + 1..] {
                if a.anticommutes(*b) {
                    return Err(invalid(format!("generators of {name} do not commute")));
                }
            }
            if a.anticommutes(lx) || a.anticommutes(lz) {
                return Err(invalid(format!("logical operators of {name} fail to commute with a generator")));
            }
        }
        if !lx.anticommutes(lz) {
            return Err(invalid(format!("logical X and Z of {name} commute")));
        }
        let mut code =
            Self { name: name.to_string(), n, generators, logical_x, logical_z, gen_masks, lx, lz, table: Vec::new() };
        code.table = code.build_table()?;
        Ok(code)
    }

    /// Lowest weight first, then lexicographic with `I < X < Y < Z` and
    /// qubit 0 leading, which is increasing base-4 index.
    fn build_table(&self) -> Result<Vec<Symplectic>> {
        let n = self.n;
        let syndromes = 1usize << self.gen_masks.len();
        let mut best: Vec<Option<(usize, usize)>> = vec![None; syndromes];
        for v in 0..1usize << (2 * n) {
            let e = Symplectic::from_index(v, n);
            let s = self.syndrome_of(e);
            let h = index_height(v, n);
            if best[s].is_none_or(|(bh, _)| h < bh) {
                best[s] = Some((h, v));
            }
        }
        best.iter()
            .map(|b| {
                b.map(|(_, v)| Symplectic::from_index(v, n))
                    .ok_or_else(|| invalid(format!("generators of {} are not independent", self.name)))
            })
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn logical_x(&self) -> &PauliString {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &PauliString {
        &self.logical_z
    }

    pub(crate) fn syndrome_of(&self, e: Symplectic) -> usize {
        self.gen_masks.iter().enumerate().fold(0, |acc, (i, g)| if g.anticommutes(e) { acc | (1 << i) } else { acc })
    }

    pub fn syndrome(&self, error: &PauliString) -> usize {
        self.syndrome_of(Symplectic::from_string(error))
    }

    /// Decoder's correction for a syndrome.
    pub fn correction(&self, syndrome: usize) -> PauliString {
        let c = self.table[syndrome];
        let s = crate::pauli::symplectic_to_index((c.x << self.n) | c.z, self.n);
        PauliString::from_index(self.n, s)
    }

    /// Logical class of an element of the normalizer.
    pub(crate) fn logical_class(&self, r: Symplectic) -> Pauli {
        // X-bar component anticommutes with Z-bar and vice versa.
        Pauli::from_symplectic(r.anticommutes(self.lz), r.anticommutes(self.lx))
    }

    pub(crate) fn residual_of(&self, e: Symplectic) -> Pauli {
        let r = self.table[self.syndrome_of(e)].times(e);
        self.logical_class(r)
    }

    pub(crate) fn residual_of_index(&self, v: usize) -> Pauli {
        self.residual_of(Symplectic::from_index(v, self.n))
    }

    pub fn syndrome_correct(&self, error: &PauliString) -> Result<Correction> {
        if error.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: error.n() });
        }
        let residual = self.residual_of(Symplectic::from_string(error));
        Ok(Correction { corrected: residual == Pauli::I, residual })
    }

    /// Smallest weight of a nontrivial logical operator, searched up to
    /// `max_weight`.
    pub fn distance(&self, max_weight: usize) -> Option<usize> {
        let n = self.n;
        (0..1usize << (2 * n))
            .filter(|&v| index_height(v, n) <= max_weight && v != 0)
            .filter_map(|v| {
                let e = Symplectic::from_index(v, n);
                (self.syndrome_of(e) == 0 && self.logical_class(e) != Pauli::I).then_some(e.weight() as usize)
            })
            .min()
    }
}

impl fmt::Display for StabilizerCode {
    /// One stabilizer per line, then the logical operators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {} n={}", self.name, self.n)?;
        for g in &self.generators {
            writeln!(f, "S {g}")?;
        }
        writeln!(f, "X {}", self.logical_x)?;
        writeln!(f, "Z {}", self.logical_z)
    }
}

fn parse_all(strings: &[&str]) -> Vec<PauliString> {
    strings.iter().map(|s| s.parse().expect("builtin string")).collect()
}

/// `rep3`, `steane7` or `shor9`.
pub fn builtin_code(name: &str) -> Result<StabilizerCode> {
    let (gens, lx, lz): (Vec<&str>, &str, &str) = match name {
        "rep3" => (vec!["ZZI", "IZZ"], "XXX", "ZII"),
        "steane7" => {
            let rows = ["IIIXXXX", "IXXIIXX", "XIXIXIX"];
            let mut g: Vec<&str> = rows.to_vec();
            g.extend(["IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"]);
            (g, "XXXXXXX", "ZZZZZZZ")
        }
        "shor9" => (
            vec![
                "ZZIIIIIII",
                "IZZIIIIII",
                "IIIZZIIII",
                "IIIIZZIII",
                "IIIIIIZZI",
                "IIIIIIIZZ",
                "XXXXXXIII",
                "IIIXXXXXX",
            ],
            "ZZZZZZZZZ",
            "XXXXXXXXX",
        ),
        other => return Err(Error::UnknownName(other.to_string())),
    };
    StabilizerCode::new(name, parse_all(&gens), lx.parse()?, lz.parse()?)
}
