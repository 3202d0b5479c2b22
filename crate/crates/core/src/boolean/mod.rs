//! Boolean functions in the `+-1` convention.
//!
//! Input index `x` carries variable `i` in bit `i`; the spin of variable
//! `i` is `(-1)^{bit i}`, so index 0 is the all-`+1` input.

mod fourier;
mod gcode;
mod noise;

pub use fourier::{noise_stability, rec_maj3_level_weights, wht, FourierExpansion};
pub use gcode::{
    g_code_search, g_code_search_with_budget, verify_unique_decoding, GCodeResult, SearchMode, DEFAULT_NODE_BUDGET,
    EXACT_SEARCH_CAP,
};
pub use noise::{cluster_noise, empirical_flip_correlation, majority_repair, majority_repair_exact, ClusterRule};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

pub const BOOLEAN_VARIABLE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<i8>,
    name: Option<String>,
}

fn check_n(n: usize) -> Result<()> {
    if n > BOOLEAN_VARIABLE_CAP {
        return Err(Error::OverCap { what: "Boolean variables", requested: n, cap: BOOLEAN_VARIABLE_CAP });
    }
    Ok(())
}

impl BooleanFunction {
    pub fn from_table(n: usize, table: Vec<i8>) -> Result<Self> {
        check_n(n)?;
        if table.len() != 1usize << n {
            return Err(Error::SizeMismatch { expected: 1 << n, found: table.len() });
        }
        if table.iter().any(|&v| v != 1 && v != -1) {
            return Err(invalid("truth table entries must be +1 or -1"));
        }
        Ok(Self { n, table, name: None })
    }

    /// Table from a predicate on the input index.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, table: (0..1usize << n).map(|x| if f(x) { 1 } else { -1 }).collect(), name: None })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[i8] {
        &self.table
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn eval(&self, x: usize) -> i8 {
        self.table[x]
    }

    /// Hex text: byte `j` holds inputs `8j..8j+7`, input `8j+i` at bit `i`,
    /// set where the value is `-1`.
    pub fn to_hex(&self) -> String {
        self.table
            .chunks(8)
            .map(|chunk| {
                let byte = chunk.iter().enumerate().fold(0u8, |b, (i, &v)| if v == -1 { b | (1 << i) } else { b });
                format!("{byte:02x}")
            })
            .collect()
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        check_n(n)?;
        let hex = hex.trim();
        let size = 1usize << n;
        let bytes = size.div_ceil(8);
        if hex.len() != 2 * bytes {
            return Err(Error::Parse(format!("expected {} hex digits, found {}", 2 * bytes, hex.len())));
        }
        let mut table = vec![1i8; size];
        for j in 0..bytes {
            let byte = u8::from_str_radix(&hex[2 * j..2 * j + 2], 16).map_err(|e| Error::Parse(format!("{e}")))?;
            for i in 0..8 {
                let x = 8 * j + i;
                if byte >> i & 1 == 1 {
                    if x >= size {
                        return Err(Error::Parse("padding bits must be zero".into()));
                    }
                    table[x] = -1;
                }
            }
        }
        Self::from_table(n, table)
    }
}

fn spin(x: usize, i: usize) -> i32 {
    if x >> i & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `sign(sum x_i)` for odd `n`.
pub fn majority(n: usize) -> Result<BooleanFunction> {
    if n % 2 == 0 {
        return Err(invalid(format!("majority needs odd n, got {n}")));
    }
    Ok(BooleanFunction::from_fn(n, |x| (x.count_ones() as usize) * 2 < n)?.with_name("majority"))
}

pub fn parity(n: usize) -> Result<BooleanFunction> {
    Ok(BooleanFunction::from_fn(n, |x| x.count_ones() % 2 == 0)?.with_name("parity"))
}

/// `(-1)^{b_0 b_1 + b_2 b_3 + ...}` on bits, even `n`.
pub fn bent_ip(n: usize) -> Result<BooleanFunction> {
    if n % 2 == 1 {
        return Err(invalid(format!("inner-product function needs even n, got {n}")));
    }
    Ok(BooleanFunction::from_fn(n, |x| {
        (0..n / 2).map(|j| (x >> (2 * j) & 1) & (x >> (2 * j + 1) & 1)).sum::<usize>() % 2 == 0
    })?
    .with_name("bent_ip"))
}

/// Majority of consecutive triples, iterated; `n = 3^d`.
pub fn rec_maj3(n: usize) -> Result<BooleanFunction> {
    let mut m = n;
    while m > 1 && m % 3 == 0 {
        m /= 3;
    }
    if m != 1 || n == 1 {
        return Err(invalid(format!("recursive majority needs n = 3^d with d >= 1, got {n}")));
    }
    Ok(BooleanFunction::from_fn(n, |x| {
        let mut level: Vec<i32> = (0..n).map(|i| spin(x, i)).collect();
        while level.len() > 1 {
            level = level.chunks(3).map(|t| (t[0] + t[1] + t[2]).signum()).collect();
        }
        level[0] == 1
    })?
    .with_name("rec_maj3"))
}

/// Median of the run count of a uniform input: the smallest `m` with
/// `P(runs <= m) >= 1/2`, where `runs - 1 ~ Binomial(n - 1, 1/2)`.
pub fn runs_median(n: usize) -> usize {
    // Pascal's triangle row n - 1, exact in u64 for n <= 24.
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = vec![1u64; row.len() + 1];
        for j in 1..row.len() {
            next[j] = row[j - 1] + row[j];
        }
        row = next;
    }
    let total: u64 = row.iter().sum();
    let mut acc = 0u64;
    for (j, c) in row.iter().enumerate() {
        acc += c;
        if 2 * acc >= total {
            return j + 1;
        }
    }
    n
}

/// `+1` iff the number of runs exceeds [`runs_median`].
pub fn runs_above_median(n: usize) -> Result<BooleanFunction> {
    if n == 0 {
        return Err(invalid("runs function needs n >= 1"));
    }
    let median = runs_median(n);
    Ok(BooleanFunction::from_fn(n, |x| {
        let changes = ((x ^ (x >> 1)) & ((1usize << (n - 1)) - 1)).count_ones() as usize;
        changes + 1 > median
    })?
    .with_name("runs_median"))
}

/// `majority`, `rec_maj3`, `parity`, `bent_ip` or `runs_median`.
pub fn builtin_function(name: &str, n: usize) -> Result<BooleanFunction> {
    check_n(n)?;
    match name {
        "majority" => majority(n),
        "rec_maj3" => rec_maj3(n),
        "parity" => parity(n),
        "bent_ip" => bent_ip(n),
        "runs_median" => runs_above_median(n),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let m = majority(3).unwrap();
        // Inputs with at most one -1 spin have value +1.
        for x in 0..8usize {
            let expect = if x.count_ones() <= 1 { 1 } else { -1 };
            assert_eq!(m.eval(x), expect);
        }
        let b = bent_ip(4).unwrap();
        for x in 0..16usize {
            let bits = |i: usize| x >> i & 1;
            let e = (bits(0) * bits(1) + bits(2) * bits(3)) % 2;
            assert_eq!(b.eval(x), if e == 0 { 1 } else { -1 });
        }
        assert!(majority(4).is_err());
        assert!(bent_ip(3).is_err());
        assert!(rec_maj3(6).is_err());
        assert!(builtin_function("tribes", 4).is_err());
        assert!(builtin_function("parity", 25).is_err());
    }

    #[test]
    fn rec_maj3_values() {
        let f = rec_maj3(9).unwrap();
        assert_eq!(f.eval(0), 1);
        // One -1 in each triple.
        assert_eq!(f.eval(0b001_010_100), 1);
        assert_eq!(f.eval(0b000_011_011), -1);
        assert_eq!(rec_maj3(3).unwrap(), majority(3).unwrap().with_name("rec_maj3"));
    }

    #[test]
    fn runs() {
        // n = 3: runs - 1 ~ Bin(2, 1/2): P(runs <= 1) = 1/4, P(runs <= 2) = 3/4.
        assert_eq!(runs_median(3), 2);
        let f = runs_above_median(3).unwrap();
        // Alternating input has 3 runs.
        assert_eq!(f.eval(0b010), 1);
        assert_eq!(f.eval(0b011), -1);
        assert_eq!(runs_median(1), 1);
    }

    #[test]
    fn hex_round_trip() {
        for n in [1, 3, 5] {
            let f = majority(n).unwrap();
            let back = BooleanFunction::from_hex(n, &f.to_hex()).unwrap();
            assert_eq!(back.table(), f.table());
        }
        assert_eq!(majority(3).unwrap().to_hex(), "e8");
        assert!(BooleanFunction::from_hex(3, "e").is_err());
        assert!(BooleanFunction::from_hex(2, "f0").is_err());
    }
}
