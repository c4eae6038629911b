//! Exact Δ-capped and output-sensitive minimum-degree orderings.
//!
//! With `k = ⌈c_k·Δ·ln n⌉` sketch copies, the distinct minimizers of a vertex
//! of fill degree at most Δ are, with high probability, all of its fill
//! neighbors, so the distinct count gives the degree exactly.

use std::collections::BTreeSet;

use crate::bank::SketchBank;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::ordering::{Audit, OrderingResult};

pub const DEFAULT_C_K: f64 = 4.0;

/// Sketch copies needed for degree cap `cap` on `n` vertices.
pub fn copies_for_cap(cap: usize, n: usize, c_k: f64) -> usize {
    let ln_n = (n.max(2) as f64).ln();
    ((c_k * cap as f64 * ln_n).ceil() as usize).max(1)
}

/// Degree index: `(distinct count, vertex)` for every remaining vertex.
struct Index {
    set: BTreeSet<(usize, usize)>,
    key: Vec<usize>,
}

impl Index {
    fn build(bank: &SketchBank) -> Self {
        let mut idx = Index {
            set: BTreeSet::new(),
            key: vec![0; bank.cg.n()],
        };
        for v in bank.cg.remaining_vertices().collect::<Vec<_>>() {
            idx.key[v] = bank.distinct(v);
            idx.set.insert((idx.key[v], v));
        }
        idx
    }

    fn refresh(&mut self, bank: &SketchBank, vs: &[usize]) {
        for &v in vs {
            let d = bank.distinct(v);
            if d != self.key[v] {
                self.set.remove(&(self.key[v], v));
                self.key[v] = d;
                self.set.insert((d, v));
            }
        }
    }

    fn remove(&mut self, v: usize) {
        self.set.remove(&(self.key[v], v));
    }

    /// Least vertex of least distinct count, as `(degree, vertex)`.
    fn min(&self) -> Option<(usize, usize)> {
        self.set.first().map(|&(d, v)| (d - 1, v))
    }
}

fn validate_c_k(c_k: f64) -> Result<()> {
    if c_k.is_finite() && c_k > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("c_k must be positive, got {c_k}")))
    }
}

/// Minimum-degree ordering that is exact while step minima stay at most
/// `delta`; larger degrees are only known to exceed it.
pub fn delta_capped_min_degree(
    g: &Graph,
    delta: usize,
    seed: u64,
    c_k: f64,
) -> Result<OrderingResult> {
    if delta < 1 {
        return Err(invalid("delta must be at least 1"));
    }
    validate_c_k(c_k)?;
    let k = copies_for_cap(delta, g.n(), c_k);
    let mut bank = SketchBank::new(g, seed, k, usize::MAX);
    let mut index = Index::build(&bank);
    let mut res = OrderingResult {
        seed: Some(seed),
        ..Default::default()
    };
    while let Some((d, u)) = index.min() {
        index.remove(u);
        let touched = bank.pivot(u)?;
        index.refresh(&bank, &touched);
        res.order.push(u);
        res.degrees.push(d);
    }
    res.audit = Audit {
        informs: bank.informs(),
        oracle_calls: 0,
        copies: bank.k() as u64,
    };
    Ok(res)
}

/// Exact ordering with the cap set to `n − 1`, so no degree is clamped.
pub fn sketch_exact_min_degree(g: &Graph, seed: u64, c_k: f64) -> Result<OrderingResult> {
    delta_capped_min_degree(g, g.n().saturating_sub(1).max(1), seed, c_k)
}

/// Exact ordering without a known degree bound: start at cap 2 and double
/// whenever the capped minimum exceeds half the cap. Copies added on
/// doubling are built fresh on the current component graph.
pub fn output_sensitive_min_degree(g: &Graph, seed: u64, c_k: f64) -> Result<OrderingResult> {
    validate_c_k(c_k)?;
    let n = g.n();
    let mut cap = 2usize;
    let mut bank = SketchBank::new(g, seed, copies_for_cap(cap, n, c_k), usize::MAX);
    let mut index = Index::build(&bank);
    let mut res = OrderingResult {
        seed: Some(seed),
        ..Default::default()
    };
    while let Some((d, _)) = index.min() {
        if d.min(cap) * 2 > cap {
            cap *= 2;
            let want = copies_for_cap(cap, n, c_k);
            bank.add_copies(want - bank.k());
            index = Index::build(&bank);
            continue;
        }
        // d ≤ cap/2, so clamping to the cap cannot change the minimum.
        let (d, u) = index.min().expect("index is non-empty");
        index.remove(u);
        let touched = bank.pivot(u)?;
        index.refresh(&bank, &touched);
        res.order.push(u);
        res.degrees.push(d);
        res.caps.push(cap);
    }
    res.audit = Audit {
        informs: bank.informs(),
        oracle_calls: 0,
        copies: bank.k() as u64,
    };
    Ok(res)
}
