//! Approximate fill degrees from `k = ⌈c_q·ln n·ε̂⁻²⌉` sketch copies,
//! reported in geometric buckets.
//!
//! The estimator is the rank-`⌊k(1−1/e)⌋` minimizer key `q(u)`, which
//! concentrates around `1/|N_fill(u) ∪ {u}|`. A vertex's *degree value* is
//! `1/q(u) − 1`, or the exact-in-practice `distinct − 1` when its distinct
//! minimizer count is below `k(1−1/e)`. Bucket 0 holds degree values in
//! `[0, 1+ε̂]`, bucket `i ≥ 1` holds `((1+ε̂)^i, (1+ε̂)^(i+1)]`; the last
//! bucket is unbounded above.

use crate::bank::SketchBank;
use crate::component::ComponentGraph;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::ordset::SortedBlocks;
use crate::sketch::key_value;

pub const DEFAULT_C_Q: f64 = 8.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxDsConfig {
    pub eps_hat: f64,
    pub c_q: f64,
    /// Override the number of copies.
    pub copies: Option<usize>,
    pub seed: u64,
}

impl ApproxDsConfig {
    pub fn new(eps_hat: f64, seed: u64) -> Self {
        ApproxDsConfig {
            eps_hat,
            c_q: DEFAULT_C_Q,
            copies: None,
            seed,
        }
    }
}

/// Number of copies for accuracy `eps_hat` on `n` vertices (at least 3).
pub fn copies_for_accuracy(eps_hat: f64, n: usize, c_q: f64) -> usize {
    let ln_n = (n.max(2) as f64).ln();
    ((c_q * ln_n / (eps_hat * eps_hat)).ceil() as usize).max(3)
}

#[derive(Clone, Debug)]
pub struct ApproxDegreeDs {
    bank: SketchBank,
    eps_hat: f64,
    rank: usize,
    small_threshold: f64,
    bounds: Vec<f64>,
    value: Vec<f64>,
    index: SortedBlocks<(u64, u32)>,
    generation: u64,
}

impl ApproxDegreeDs {
    pub fn new(g: &Graph, eps_hat: f64, seed: u64) -> Result<Self> {
        Self::with_config(g, ApproxDsConfig::new(eps_hat, seed))
    }

    pub fn with_config(g: &Graph, cfg: ApproxDsConfig) -> Result<Self> {
        if !(cfg.eps_hat > 0.0 && cfg.eps_hat <= 0.5) {
            return Err(invalid(format!(
                "eps_hat must lie in (0, 1/2], got {}",
                cfg.eps_hat
            )));
        }
        if !(cfg.c_q > 0.0) {
            return Err(invalid("c_q must be positive"));
        }
        let k = match cfg.copies {
            Some(k) if k < 3 => return Err(invalid("at least 3 copies are required")),
            Some(k) => k,
            None => copies_for_accuracy(cfg.eps_hat, g.n(), cfg.c_q),
        };
        let keep = 1.0 - (-1.0f64).exp();
        let rank = ((k as f64 * keep).floor() as usize).max(1);
        let base = 1.0 + cfg.eps_hat;
        let nb = ((2.0 * g.n().max(2) as f64).ln() / base.ln()).ceil() as usize + 2;
        let bounds = (0..=nb).map(|i| base.powi(i as i32)).collect();
        let mut ds = ApproxDegreeDs {
            bank: SketchBank::new(g, cfg.seed, k, (k as f64 * keep).floor() as usize),
            eps_hat: cfg.eps_hat,
            rank,
            small_threshold: k as f64 * keep,
            bounds,
            value: vec![0.0; g.n()],
            index: SortedBlocks::new(),
            generation: 0,
        };
        let mut entries = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            ds.value[v] = ds.compute_value(v);
            entries.push((ds.value[v].to_bits(), v as u32));
        }
        entries.sort_unstable();
        ds.index = SortedBlocks::from_sorted(entries);
        Ok(ds)
    }

    fn compute_value(&self, v: usize) -> f64 {
        let distinct = self.bank.distinct(v);
        if (distinct as f64) < self.small_threshold {
            (distinct - 1) as f64
        } else {
            let q = self.quantile_unchecked(v).max(f64::MIN_POSITIVE);
            (1.0 / q - 1.0).max(0.0)
        }
    }

    fn quantile_unchecked(&self, v: usize) -> f64 {
        key_value(
            self.bank
                .ranked_key(v, self.rank)
                .expect("rank within copies"),
        )
    }

    fn check_remaining(&self, u: usize) -> Result<()> {
        if self.bank.cg.is_remaining(u) {
            Ok(())
        } else if u < self.bank.cg.n() {
            Err(Error::NotRemaining(u))
        } else {
            Err(Error::VertexOutOfRange {
                id: u,
                n: self.bank.cg.n(),
            })
        }
    }

    pub fn graph(&self) -> &ComponentGraph {
        &self.bank.cg
    }

    pub fn eps_hat(&self) -> f64 {
        self.eps_hat
    }

    pub fn copies(&self) -> usize {
        self.bank.k()
    }

    /// 1-based rank of the quantile key.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_buckets(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Lower edge `(1+ε̂)^i` of bucket `i` (bucket 0 also takes everything below).
    pub fn bucket_base(&self, i: usize) -> f64 {
        self.bounds[i]
    }

    /// Number of pivots applied; reports from other generations are stale.
    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn informs(&self) -> u64 {
        self.bank.informs()
    }

    /// `q(u)`: the rank-`⌊k(1−1/e)⌋` minimizer key of `u`.
    pub fn quantile(&self, u: usize) -> Result<f64> {
        self.check_remaining(u)?;
        Ok(self.quantile_unchecked(u))
    }

    /// Sorted minimizer keys of `u` across copies, as reals.
    pub fn minimizer_values(&self, u: usize) -> Result<Vec<f64>> {
        self.check_remaining(u)?;
        Ok(self
            .bank
            .minimizer_keys(u)
            .into_iter()
            .map(key_value)
            .collect())
    }

    /// Distinct minimizer owners of `u`, counting `u` itself.
    pub fn distinct_count(&self, u: usize) -> Result<usize> {
        self.check_remaining(u)?;
        Ok(self.bank.distinct(u))
    }

    /// Approximate fill degree used for bucketing.
    pub fn degree_value(&self, u: usize) -> Result<f64> {
        self.check_remaining(u)?;
        Ok(self.value[u])
    }

    pub fn bucket_of_value(&self, value: f64) -> usize {
        let below = self.bounds.partition_point(|&b| b < value);
        below.saturating_sub(1).min(self.num_buckets() - 1)
    }

    pub fn bucket_of(&self, u: usize) -> Result<usize> {
        Ok(self.bucket_of_value(self.degree_value(u)?))
    }

    /// Pivot `u` in the graph and all copies, then re-bucket the vertices
    /// whose minimizers moved.
    pub fn pivot(&mut self, u: usize) -> Result<()> {
        self.check_remaining(u)?;
        self.index.remove(&(self.value[u].to_bits(), u as u32));
        let touched = self.bank.pivot(u)?;
        for v in touched {
            let nv = self.compute_value(v);
            if nv.to_bits() != self.value[v].to_bits() {
                self.index.remove(&(self.value[v].to_bits(), v as u32));
                self.index.insert((nv.to_bits(), v as u32));
                self.value[v] = nv;
            }
        }
        self.generation += 1;
        Ok(())
    }

    /// Split the remaining vertices into buckets by degree value.
    pub fn report(&self) -> BucketReport {
        let nb = self.num_buckets();
        let mut cuts = Vec::with_capacity(nb + 1);
        cuts.push(0);
        for i in 1..nb {
            cuts.push(self.index.rank(&(self.bounds[i].to_bits(), u32::MAX)));
        }
        cuts.push(self.index.len());
        BucketReport {
            generation: self.generation,
            cuts,
        }
    }
}

/// Bucket boundaries into the structure's ordered index. Member access goes
/// through the structure and fails once it has been pivoted again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BucketReport {
    generation: u64,
    cuts: Vec<usize>,
}

impl BucketReport {
    pub fn num_buckets(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn len(&self, i: usize) -> usize {
        self.cuts[i + 1] - self.cuts[i]
    }

    pub fn is_empty(&self, i: usize) -> bool {
        self.len(i) == 0
    }

    pub fn first_nonempty(&self) -> Option<usize> {
        (0..self.num_buckets()).find(|&i| !self.is_empty(i))
    }

    /// A view of bucket `i`, valid while `ds` is unchanged.
    pub fn bucket<'a>(&self, ds: &'a ApproxDegreeDs, i: usize) -> Result<BucketView<'a>> {
        if ds.generation != self.generation {
            return Err(Error::StaleReport {
                report: self.generation,
                current: ds.generation,
            });
        }
        Ok(BucketView {
            index: &ds.index,
            start: self.cuts[i],
            end: self.cuts[i + 1],
        })
    }
}

/// Random-access view of one bucket's vertices, ordered by degree value.
#[derive(Clone, Copy, Debug)]
pub struct BucketView<'a> {
    index: &'a SortedBlocks<(u64, u32)>,
    start: usize,
    end: usize,
}

impl BucketView<'_> {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn get(&self, j: usize) -> usize {
        assert!(j < self.len());
        self.index.get(self.start + j).unwrap().1 as usize
    }

    pub fn to_vec(&self) -> Vec<usize> {
        (0..self.len()).map(|j| self.get(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_accuracy() {
        let g = Graph::empty(3);
        assert!(ApproxDegreeDs::new(&g, 0.0, 1).is_err());
        assert!(ApproxDegreeDs::new(&g, 0.6, 1).is_err());
        let cfg = ApproxDsConfig {
            copies: Some(2),
            ..ApproxDsConfig::new(0.25, 1)
        };
        assert!(ApproxDegreeDs::with_config(&g, cfg).is_err());
    }

    #[test]
    fn isolated_vertices_fill_bucket_zero() {
        let ds = ApproxDegreeDs::new(&Graph::empty(5), 0.25, 1).unwrap();
        let rep = ds.report();
        assert_eq!(rep.len(0), 5);
        assert!((1..rep.num_buckets()).all(|i| rep.is_empty(i)));
        assert_eq!(rep, ds.clone().report());
    }

    #[test]
    fn boundary_value_goes_to_lower_bucket() {
        let ds = ApproxDegreeDs::new(&Graph::empty(4), 0.25, 1).unwrap();
        let b3 = ds.bucket_base(3);
        assert_eq!(ds.bucket_of_value(b3), 2);
        assert_eq!(ds.bucket_of_value(b3 * 1.0001), 3);
        assert_eq!(ds.bucket_of_value(0.0), 0);
        assert_eq!(ds.bucket_of_value(1.25), 0);
    }

    #[test]
    fn stale_reports_are_rejected() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut ds = ApproxDegreeDs::new(&g, 0.5, 4).unwrap();
        let rep = ds.report();
        assert!(rep.bucket(&ds, 0).is_ok());
        ds.pivot(1).unwrap();
        assert!(matches!(rep.bucket(&ds, 0), Err(Error::StaleReport { .. })));
        assert!(matches!(ds.pivot(1), Err(Error::NotRemaining(1))));
    }

    #[test]
    fn single_edge_estimates_two() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let ds = ApproxDegreeDs::new(&g, 0.25, 9).unwrap();
        for u in 0..2 {
            assert_eq!(ds.distinct_count(u).unwrap(), 2);
            assert_eq!(ds.degree_value(u).unwrap(), 1.0);
            // over a set of size d the quantile tends to 1 − e^(−1/d); 1/q ≈ 2.54 at d = 2
            let q = ds.quantile(u).unwrap();
            assert!((q - (1.0 - (-0.5f64).exp())).abs() < 0.05, "{q}");
        }
    }
}
