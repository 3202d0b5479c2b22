//! Codes for the acceptance-set decoder: a received word `y` decodes to the
//! codeword `x` when `g(x ^ y) = +1`.
//!
//! Two codewords conflict exactly when their difference lies in `A ^ A`,
//! with `A = g^{-1}(+1)`, so a code is an independent set in the Cayley
//! graph of `Z_2^n` generated by the nonzero elements of `A ^ A`.

use alloc::vec;
use alloc::vec::Vec;

use super::BooleanFunction;
use crate::error::{Error, Result};
use crate::walsh::fwht;

/// Largest `n` for exact search.
pub const EXACT_SEARCH_CAP: usize = 14;
pub const DEFAULT_NODE_BUDGET: u64 = 500_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum SearchMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GCodeResult {
    pub n: usize,
    pub codewords: Vec<u32>,
    pub mode: SearchMode,
    /// Proven maximum.
    pub optimal: bool,
    /// Exact search ran out of budget; `codewords` is the best found.
    pub budget_exhausted: bool,
    /// Independence-number bound from the least Cayley-graph eigenvalue.
    pub ratio_bound: usize,
    pub verified: bool,
    pub nodes: u64,
}

impl GCodeResult {
    pub fn size(&self) -> usize {
        self.codewords.len()
    }
}

/// Nonzero differences of accepted patterns.
fn conflict_differences(g: &BooleanFunction) -> Vec<u32> {
    let mut a: Vec<i64> = g.table().iter().map(|&v| i64::from(v == 1)).collect();
    fwht(&mut a);
    a.iter_mut().for_each(|x| *x *= *x);
    fwht(&mut a);
    (1..a.len()).filter(|&d| a[d] > 0).map(|d| d as u32).collect()
}

/// Hoffman bound `N (-l_min) / (deg - l_min)`; the Cayley eigenvalues are
/// the Walsh transform of the generator indicator.
fn ratio_bound(n: usize, diffs: &[u32]) -> usize {
    let size = 1usize << n;
    if diffs.is_empty() {
        return size;
    }
    let mut ind = vec![0i64; size];
    for &d in diffs {
        ind[d as usize] = 1;
    }
    fwht(&mut ind);
    let deg = diffs.len() as f64;
    let lmin = ind.iter().copied().min().unwrap_or(0) as f64;
    let bound = size as f64 * -lmin / (deg - lmin);
    // Guard against rounding just below an integer.
    libm::floor(bound + 1e-9) as usize
}

fn greedy(n: usize, diffs: &[u32]) -> Vec<u32> {
    let size = 1usize << n;
    let mut blocked = vec![false; size];
    let mut code = Vec::new();
    for x in 0..size {
        if blocked[x] {
            continue;
        }
        code.push(x as u32);
        for &d in diffs {
            blocked[x ^ d as usize] = true;
        }
    }
    code
}

struct Exact<'a> {
    diffs: &'a [u32],
    /// `conflict[d]`: `d` is a nonzero difference of accepted patterns.
    conflict: Vec<bool>,
    budget: u64,
    target: usize,
}

impl Exact<'_> {
    /// Greedy clique cover of the candidates, each clique listed in
    /// ascending order. Its size bounds the independent sets they contain.
    fn clique_cover(&self, cand: &[u64]) -> Vec<Vec<u32>> {
        let mut cliques: Vec<Vec<u32>> = Vec::new();
        for (w, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = (w * 64) as u32 + bits.trailing_zeros();
                bits &= bits - 1;
                match cliques.iter_mut().find(|c| c.iter().all(|&u| self.conflict[(u ^ v) as usize])) {
                    Some(c) => c.push(v),
                    None => cliques.push(vec![v]),
                }
            }
        }
        cliques
    }

    /// Depth-first branch and bound with an explicit path stack. Each frame
    /// holds the remaining candidates. The branching vertex is included on
    /// descent and removed from its parent frame, so backtracking lands in
    /// the exclusion branch.
    fn run(&self, n: usize, mut best: Vec<u32>) -> (Vec<u32>, bool, u64) {
        let size = 1usize << n;
        let words = size.div_ceil(64);
        let mut root = vec![0u64; words];
        for x in 1..size {
            root[x / 64] |= 1 << (x % 64);
        }
        for &d in self.diffs {
            root[d as usize / 64] &= !(1 << (d % 64));
        }
        let mut path = vec![root];
        let mut chosen = vec![0u32];
        let mut nodes = 0u64;
        while let Some(top) = path.last_mut() {
            if best.len() >= self.target {
                return (best, true, nodes);
            }
            let cover = self.clique_cover(top);
            if chosen.len() + cover.len() <= best.len() {
                path.pop();
                chosen.pop();
                continue;
            }
            if cover.is_empty() {
                best = chosen.clone();
                path.pop();
                chosen.pop();
                continue;
            }
            nodes += 1;
            if nodes > self.budget {
                return (best, false, nodes);
            }
            // Branch on a vertex of the last clique; excluding it first
            // weakens the bound where it is tightest.
            let v = *cover.last().and_then(|c| c.last()).expect("nonempty cover") as usize;
            top[v / 64] &= !(1 << (v % 64));
            let mut next = top.clone();
            for &d in self.diffs {
                let u = v ^ d as usize;
                next[u / 64] &= !(1 << (u % 64));
            }
            path.push(next);
            chosen.push(v as u32);
        }
        (best, true, nodes)
    }
}

/// Checks that no received word decodes to two codewords.
pub fn verify_unique_decoding(g: &BooleanFunction, codewords: &[u32]) -> bool {
    let accepted: Vec<usize> = (0..g.table().len()).filter(|&z| g.eval(z) == 1).collect();
    let mut hit = vec![false; g.table().len()];
    for &x in codewords {
        for &a in &accepted {
            let y = x as usize ^ a;
            if hit[y] {
                return false;
            }
            hit[y] = true;
        }
    }
    true
}

pub fn g_code_search(g: &BooleanFunction, mode: SearchMode) -> Result<GCodeResult> {
    g_code_search_with_budget(g, mode, DEFAULT_NODE_BUDGET)
}

/// Exact mode falls back to the greedy code, flagged, once `budget` search
/// nodes have been expanded.
pub fn g_code_search_with_budget(g: &BooleanFunction, mode: SearchMode, budget: u64) -> Result<GCodeResult> {
    let n = g.n();
    if mode == SearchMode::Exact && n > EXACT_SEARCH_CAP {
        return Err(Error::OverCap { what: "variables for exact code search", requested: n, cap: EXACT_SEARCH_CAP });
    }
    let diffs = conflict_differences(g);
    let bound = ratio_bound(n, &diffs);
    let start = greedy(n, &diffs);
    let (codewords, optimal, exhausted, nodes) = match mode {
        SearchMode::Greedy => {
            let tight = start.len() >= bound;
            (start, tight, false, 0)
        }
        SearchMode::Exact => {
            let mut conflict = vec![false; 1usize << n];
            for &d in &diffs {
                conflict[d as usize] = true;
            }
            let search = Exact { diffs: &diffs, conflict, budget, target: bound };
            let (best, complete, nodes) = search.run(n, start);
            (best, complete, !complete, nodes)
        }
    };
    let verified = verify_unique_decoding(g, &codewords);
    Ok(GCodeResult { n, codewords, mode, optimal, budget_exhausted: exhausted, ratio_bound: bound, verified, nodes })
}
