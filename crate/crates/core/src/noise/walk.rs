use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::channel::Channel;
use crate::error::{invalid, Result};
use crate::linalg::{apply_local_left, CMatrix, DenseOperator};
use crate::noise::generators::{Generator, TinyGeneratorSet};
use crate::noise::graph::GraphSpec;
use crate::noise::unitary_e_total;

/// Largest register for dense running products.
pub const WALK_QUBIT_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSample {
    pub channel: Channel,
    pub m: usize,
    /// The target was met before `max_m`.
    pub reached: bool,
    /// Stopping statistic after each step: running maximum of `e(T)`.
    pub estimates: Vec<f64>,
    /// `e(T)` of the returned product.
    pub e_total: f64,
    pub steps: Vec<(Generator, Vec<usize>)>,
}

/// Random walk on products of tiny generators placed on graph edges,
/// stopped once the recorded noise reaches `target`.
pub fn sample_graph_walk<R: Rng + ?Sized>(
    graph: &GraphSpec,
    w: &TinyGeneratorSet,
    target: f64,
    max_m: usize,
    rng: &mut R,
) -> Result<WalkSample> {
    let n = graph.n();
    if !(target >= 0.0) {
        return Err(invalid(format!("target {target} must be nonnegative")));
    }
    if n > WALK_QUBIT_CAP {
        return Err(invalid(format!("graph walk on {n} qubits exceeds {WALK_QUBIT_CAP}")));
    }
    let dim = 1usize << n;
    let mut u = CMatrix::identity(dim, dim);
    let mut estimates = Vec::new();
    let mut steps = Vec::new();
    let mut running = 0.0f64;
    let mut e_total = 0.0;
    let mut reached = running >= target;
    while !reached && steps.len() < max_m {
        let (a, b) = graph.edges()[rng.random_range(0..graph.edges().len())];
        let g = if a == b { w.sample_single(rng) } else { w.sample(rng) };
        let targets = match g.arity() {
            1 => vec![if rng.random_bool(0.5) { a } else { b }],
            _ if rng.random_bool(0.5) => vec![a, b],
            _ => vec![b, a],
        };
        apply_local_left(&mut u, &w.matrix(g), &targets, n);
        steps.push((g, targets));
        e_total = unitary_e_total(&DenseOperator::new(u.clone())?)?;
        running = running.max(e_total);
        estimates.push(running);
        reached = running >= target;
    }
    Ok(WalkSample {
        channel: Channel::unitary(DenseOperator::new(u)?)?,
        m: steps.len(),
        reached,
        estimates,
        e_total,
        steps,
    })
}
