//! Sampling estimators for the number of non-zero columns of an implicit
//! 0/1 matrix, and the fill-degree estimator built on them.

use std::cell::Cell;
use std::collections::HashMap;

use rand::Rng;

use crate::component::{ComponentGraph, Node};
use crate::error::{invalid, Error, Result};
use crate::ordset::SortedBlocks;

/// A 0/1 matrix accessed only through sampling and point queries.
pub trait ImplicitMatrix {
    fn rows(&self) -> usize;
    /// Size of the column universe; sets the `ln n` terms of the budgets.
    fn universe(&self) -> usize;
    fn row_size(&self, i: usize) -> usize;
    /// A uniform non-zero column of row `i`. Only called on non-empty rows.
    fn sample_from_row<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize;
    fn query_value(&self, i: usize, j: usize) -> bool;

    fn nnz(&self) -> usize {
        (0..self.rows()).map(|i| self.row_size(i)).sum()
    }
}

/// Explicit sparse rows, each sorted and duplicate-free.
#[derive(Clone, Debug)]
pub struct SparseRows {
    rows: Vec<Vec<usize>>,
    universe: usize,
}

impl SparseRows {
    pub fn new(mut rows: Vec<Vec<usize>>, universe: usize) -> Result<Self> {
        for r in &mut rows {
            r.sort_unstable();
            r.dedup();
            if let Some(&j) = r.last() {
                if j >= universe {
                    return Err(Error::VertexOutOfRange { id: j, n: universe });
                }
            }
        }
        Ok(SparseRows { rows, universe })
    }

    /// Exact number of non-zero columns.
    pub fn nonzero_columns(&self) -> usize {
        let mut seen = vec![false; self.universe];
        self.rows.iter().flatten().for_each(|&j| seen[j] = true);
        seen.into_iter().filter(|&b| b).count()
    }
}

impl ImplicitMatrix for SparseRows {
    fn rows(&self) -> usize {
        self.rows.len()
    }
    fn universe(&self) -> usize {
        self.universe
    }
    fn row_size(&self, i: usize) -> usize {
        self.rows[i].len()
    }
    fn sample_from_row<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize {
        self.rows[i][rng.random_range(0..self.rows[i].len())]
    }
    fn query_value(&self, i: usize, j: usize) -> bool {
        self.rows[i].binary_search(&j).is_ok()
    }
}

/// Wraps a matrix and counts every oracle call.
pub struct Counted<'a, M> {
    inner: &'a M,
    calls: Cell<u64>,
}

impl<'a, M: ImplicitMatrix> Counted<'a, M> {
    pub fn new(inner: &'a M) -> Self {
        Counted {
            inner,
            calls: Cell::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn tick(&self) {
        self.calls.set(self.calls.get() + 1);
    }
}

impl<M: ImplicitMatrix> ImplicitMatrix for Counted<'_, M> {
    fn rows(&self) -> usize {
        self.inner.rows()
    }
    fn universe(&self) -> usize {
        self.inner.universe()
    }
    fn row_size(&self, i: usize) -> usize {
        self.tick();
        self.inner.row_size(i)
    }
    fn sample_from_row<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize {
        self.tick();
        self.inner.sample_from_row(i, rng)
    }
    fn query_value(&self, i: usize, j: usize) -> bool {
        self.tick();
        self.inner.query_value(i, j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatorConfig {
    /// Stopping-threshold multiplier.
    pub c_sigma: f64,
    /// Geometric-trial truncation multiplier.
    pub c_lim: f64,
    /// Hard cap on column-sum draws, as a multiple of `r·σ`.
    pub c_cap: f64,
    /// Let [`selection_degree`] count exactly when scanning is cheaper than sampling.
    pub exact_when_cheaper: bool,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            c_sigma: 5.0,
            c_lim: 4.0,
            c_cap: 16.0,
            exact_when_cheaper: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub value: f64,
    pub samples: u64,
}

fn ln_universe(n: usize) -> f64 {
    (n.max(3) as f64).ln()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("eps must lie in (0, 1), got {eps}")))
    }
}

/// Draw until the running sum reaches `sigma`; estimate the mean as
/// `sigma / draws`. `max_samples` bounds the loop.
pub fn estimate_mean<F>(mut draw: F, sigma: f64, max_samples: Option<u64>) -> Result<MeanEstimate>
where
    F: FnMut() -> Result<f64>,
{
    if !(sigma > 0.0) {
        return Err(invalid("sigma must be positive"));
    }
    let mut sum = 0.0;
    let mut count = 0u64;
    while sum < sigma {
        if max_samples.is_some_and(|cap| count >= cap) {
            return Err(Error::SampleCapExceeded(count));
        }
        let x = draw()?;
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfUnitRange(x));
        }
        sum += x;
        count += 1;
    }
    Ok(MeanEstimate {
        value: sigma / count as f64,
        samples: count,
    })
}

/// Estimate the number of ones in column `j` to within `1 ± eps` with
/// failure probability about `delta_fail`.
pub fn approx_column_sum<M, R>(
    a: &M,
    j: usize,
    eps: f64,
    delta_fail: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<f64>
where
    M: ImplicitMatrix,
    R: Rng + ?Sized,
{
    check_eps(eps)?;
    if !(delta_fail > 0.0 && delta_fail < 1.0) {
        return Err(invalid("delta_fail must lie in (0, 1)"));
    }
    let r = a.rows();
    let sigma = (cfg.c_sigma * (1.0 / delta_fail).ln() / (eps * eps))
        .ceil()
        .max(1.0);
    let cap = (cfg.c_cap * r as f64 * sigma).ceil() as u64;
    let est = estimate_mean(
        || {
            let i = rng.random_range(0..r);
            Ok(if a.query_value(i, j) { 1.0 } else { 0.0 })
        },
        sigma,
        Some(cap),
    )?;
    Ok(r as f64 * est.value)
}

/// Pick a uniform non-zero entry `(i, j)`.
fn sample_nonzero<M: ImplicitMatrix, R: Rng + ?Sized>(
    a: &M,
    prefix: &[usize],
    rng: &mut R,
) -> (usize, usize) {
    let total = *prefix.last().unwrap();
    let t = rng.random_range(0..total);
    let i = prefix.partition_point(|&p| p <= t);
    (i, a.sample_from_row(i, rng))
}

fn row_prefix<M: ImplicitMatrix>(a: &M) -> Vec<usize> {
    let mut acc = 0;
    (0..a.rows())
        .map(|i| {
            acc += a.row_size(i);
            acc
        })
        .collect()
}

/// The number of non-zero columns as `nnz · E[1 / colsum(j)]` over uniform
/// non-zeros, with each column sum estimated once and reused.
pub fn count_nonzero_columns_slow<M, R>(
    a: &M,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<f64>
where
    M: ImplicitMatrix,
    R: Rng + ?Sized,
{
    check_eps(eps)?;
    let prefix = row_prefix(a);
    let nnz = prefix.last().copied().unwrap_or(0);
    if nnz == 0 {
        return Ok(0.0);
    }
    let ln_n = ln_universe(a.universe());
    let delta_fail = (-2.0 * ln_n).exp();
    let sigma = (cfg.c_sigma * ln_n / (eps * eps)).ceil();
    let mut memo: HashMap<usize, f64> = HashMap::new();
    let est = estimate_mean(
        || {
            let (_, j) = sample_nonzero(a, &prefix, rng);
            let s = match memo.get(&j) {
                Some(&s) => s,
                None => {
                    let s = approx_column_sum(a, j, eps, delta_fail, cfg, rng)?;
                    memo.insert(j, s);
                    s
                }
            };
            // The true sum is at least 1 since j was sampled from a non-zero.
            Ok((1.0 / s).min(1.0))
        },
        sigma,
        None,
    )?;
    Ok(nnz as f64 * est.value)
}

/// The number of non-zero columns from the combined distribution: pick a
/// uniform non-zero `(i, j)`, then count uniform-row trials until one hits
/// column `j`, truncated at `lim`, and return `count / lim`. Its mean is
/// `r·cols / (nnz·lim)` up to the truncation bias.
pub fn count_nonzero_columns<M, R>(
    a: &M,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<f64>
where
    M: ImplicitMatrix,
    R: Rng + ?Sized,
{
    check_eps(eps)?;
    let prefix = row_prefix(a);
    let nnz = prefix.last().copied().unwrap_or(0);
    if nnz == 0 {
        return Ok(0.0);
    }
    let r = a.rows();
    let ln_n = ln_universe(a.universe());
    let lim = ((cfg.c_lim * r as f64 * ln_n).ceil() as u64).max(1);
    let sigma = (cfg.c_sigma * ln_n * ln_n / (eps * eps)).ceil();
    let est = estimate_mean(
        || {
            let (_, j) = sample_nonzero(a, &prefix, rng);
            let mut count = 0u64;
            while count < lim {
                count += 1;
                if a.query_value(rng.random_range(0..r), j) {
                    break;
                }
            }
            Ok(count as f64 / lim as f64)
        },
        sigma,
        None,
    )?;
    Ok(est.value * nnz as f64 * lim as f64 / r as f64)
}

/// The implicit matrix of a remaining vertex `u`: one row per adjacent
/// component plus one for `u`'s own remaining neighbors; columns are
/// remaining vertices.
pub struct FillMatrix<'a> {
    universe: usize,
    rows: Vec<&'a SortedBlocks<usize>>,
}

impl<'a> FillMatrix<'a> {
    pub fn new(cg: &'a ComponentGraph, u: usize) -> Result<Self> {
        let mut rows = Vec::new();
        for c in cg.component_neighbors(u)? {
            rows.push(cg.remaining_set(Node::Component(c))?);
        }
        let own = cg.remaining_set(Node::Remaining(u))?;
        if !own.is_empty() {
            rows.push(own);
        }
        Ok(FillMatrix {
            universe: cg.n(),
            rows,
        })
    }
}

impl ImplicitMatrix for FillMatrix<'_> {
    fn rows(&self) -> usize {
        self.rows.len()
    }
    fn universe(&self) -> usize {
        self.universe
    }
    fn row_size(&self, i: usize) -> usize {
        self.rows[i].len()
    }
    fn sample_from_row<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize {
        let row = self.rows[i];
        row.get(rng.random_range(0..row.len())).unwrap()
    }
    fn query_value(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(&j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeEstimate {
    pub value: f64,
    pub oracle_calls: u64,
}

/// Estimate the fill degree of remaining vertex `u` to within `1 ± eps`.
pub fn estimate_degree<R: Rng + ?Sized>(
    cg: &ComponentGraph,
    u: usize,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<DegreeEstimate> {
    if cg.d_component(u)? == 0 {
        return Ok(DegreeEstimate {
            value: cg.d_remain(Node::Remaining(u))? as f64,
            oracle_calls: 0,
        });
    }
    let m = FillMatrix::new(cg, u)?;
    let counted = Counted::new(&m);
    // Every component row contains u itself.
    let cols = count_nonzero_columns(&counted, eps, cfg, rng)?;
    Ok(DegreeEstimate {
        value: (cols - 1.0).max(0.0),
        oracle_calls: counted.calls(),
    })
}

/// Fill degree of `u` to within `1 ± eps`. When the rows hold no more cells
/// than the estimator's minimum sample count the union is counted exactly;
/// `oracle_calls` then reports the cells scanned.
pub fn selection_degree<R: Rng + ?Sized>(
    cg: &ComponentGraph,
    u: usize,
    eps: f64,
    cfg: &EstimatorConfig,
    rng: &mut R,
) -> Result<DegreeEstimate> {
    if cfg.exact_when_cheaper && cg.d_component(u)? > 0 {
        check_eps(eps)?;
        let m = FillMatrix::new(cg, u)?;
        let cells: usize = m.rows.iter().map(|r| r.len()).sum();
        let ln_n = ln_universe(m.universe);
        if cells as f64 <= cfg.c_sigma * ln_n * ln_n / (eps * eps) {
            return Ok(DegreeEstimate {
                value: cg.fill_degree(u)? as f64,
                oracle_calls: cells as u64,
            });
        }
    }
    estimate_degree(cg, u, eps, cfg, rng)
}
