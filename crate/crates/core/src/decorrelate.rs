//! Exponentially decayed minima and the approximate greedy ordering.
//!
//! Each step perturbs the bucketed degree of every candidate by a factor
//! `1 − ε̂·X` with `X ~ Exp(1)`, and pivots the vertex minimizing the
//! perturbed *estimated* degree. Only the few largest perturbations in each
//! bucket can win, so they are sampled directly as top order statistics.

use rand::{Rng, RngCore, SeedableRng};
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::approx::{ApproxDegreeDs, ApproxDsConfig, BucketView, DEFAULT_C_Q};
use crate::error::{invalid, Result};
use crate::estimator::{selection_degree, EstimatorConfig};
use crate::graph::Graph;
use crate::ordering::{Audit, OrderingResult};
use crate::rng::{purpose, stream, StreamRng};

/// The order statistics `X_(k) ≥ X_(k−1) ≥ … ≥ X_(1)` of `k` independent
/// `Exp(1)` draws, generated lazily from the top.
pub struct DecreasingExponentials<'r, R: ?Sized> {
    rng: &'r mut R,
    k: usize,
    emitted: usize,
    current: f64,
}

impl<'r, R: Rng + ?Sized> DecreasingExponentials<'r, R> {
    pub fn new(k: usize, rng: &'r mut R) -> Result<Self> {
        if k < 1 {
            return Err(invalid("need at least one exponential"));
        }
        Ok(DecreasingExponentials {
            rng,
            k,
            emitted: 0,
            current: 0.0,
        })
    }
}

/// Invert `F(x) = (1 − e^(−x))^k` at `u` by bisection on `[0, 60]`.
pub fn max_exponential_quantile(k: usize, u: f64) -> f64 {
    let cdf = |x: f64| (k as f64 * (-(-x).exp()).ln_1p()).exp();
    let (mut lo, mut hi) = (0.0f64, 60.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl<R: Rng + ?Sized> Iterator for DecreasingExponentials<'_, R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.emitted == self.k {
            return None;
        }
        self.current = if self.emitted == 0 {
            max_exponential_quantile(self.k, self.rng.random::<f64>())
        } else {
            // The gap below the i-th largest of k exponentials is Exp(i).
            let gap = Exp::new(self.emitted as f64).unwrap().sample(self.rng);
            self.current - gap
        };
        self.emitted += 1;
        Some(self.current)
    }
}

/// The top order statistics of `k` exponentials that lie within `c2` of
/// the maximum, largest first.
pub fn sample_decreasing_exponentials<R: Rng + ?Sized>(
    k: usize,
    c2: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(c2 > 0.0) {
        return Err(invalid("c2 must be positive"));
    }
    let mut it = DecreasingExponentials::new(k, rng)?;
    let top = it.next().unwrap();
    let mut out = vec![top];
    out.extend(it.take_while(|&x| x >= top - c2));
    Ok(out)
}

/// Random access to a set of vertices.
pub trait VertexSeq {
    fn len(&self) -> usize;
    fn get(&self, i: usize) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl VertexSeq for [usize] {
    fn len(&self) -> usize {
        <[usize]>::len(self)
    }
    fn get(&self, i: usize) -> usize {
        self[i]
    }
}

impl VertexSeq for BucketView<'_> {
    fn len(&self) -> usize {
        BucketView::len(self)
    }
    fn get(&self, i: usize) -> usize {
        BucketView::get(self, i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayedCandidate {
    pub delta: f64,
    pub vertex: usize,
    pub bucket_index: usize,
}

/// The draws of [`exp_decayed_candidates`] come from two child streams
/// seeded by the first two words of `rng`: one for the order-statistic
/// chain and one for the assignment to elements.
pub fn child_streams<R: RngCore + ?Sized>(rng: &mut R) -> (StreamRng, StreamRng) {
    let a = rng.next_u64();
    let b = rng.next_u64();
    (StreamRng::seed_from_u64(a), StreamRng::seed_from_u64(b))
}

/// Position `t` of a Fisher–Yates shuffle of `0..len`, drawn lazily.
pub struct LazyShuffle {
    len: usize,
    t: usize,
    moved: std::collections::HashMap<usize, usize>,
}

impl LazyShuffle {
    pub fn new(len: usize) -> Self {
        LazyShuffle {
            len,
            t: 0,
            moved: Default::default(),
        }
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if self.t == self.len {
            return None;
        }
        let j = rng.random_range(self.t..self.len);
        let at = |m: &std::collections::HashMap<usize, usize>, i| *m.get(&i).unwrap_or(&i);
        let pick = at(&self.moved, j);
        let here = at(&self.moved, self.t);
        self.moved.insert(j, here);
        self.t += 1;
        Some(pick)
    }
}

/// Candidates for the decayed minimum of a set whose values agree to within
/// a factor `1 + c2·ε̂`: the largest perturbations, each assigned to a
/// distinct uniformly random element.
pub fn exp_decayed_candidates<S, R>(
    set: &S,
    bucket_index: usize,
    eps_hat: f64,
    c2: f64,
    rng: &mut R,
) -> Result<Vec<DecayedCandidate>>
where
    S: VertexSeq + ?Sized,
    R: RngCore + ?Sized,
{
    if set.is_empty() {
        return Err(crate::error::Error::EmptySample);
    }
    let (mut chain_rng, mut assign_rng) = child_streams(rng);
    let xs = sample_decreasing_exponentials(set.len(), c2, &mut chain_rng)?;
    let mut shuffle = LazyShuffle::new(set.len());
    Ok(xs
        .into_iter()
        .map(|x| DecayedCandidate {
            delta: eps_hat * x,
            vertex: set.get(shuffle.next(&mut assign_rng).unwrap()),
            bucket_index,
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxOrderConfig {
    pub eps: f64,
    pub seed: u64,
    pub c1: f64,
    pub c2: f64,
    pub c_scan: f64,
    pub c_q: f64,
    pub estimator: EstimatorConfig,
    /// Accuracy passed to the degree estimator; `None` means `eps_hat`.
    pub estimate_eps: Option<f64>,
    /// Record exact degrees of all candidates in the trace (slow).
    pub audit: bool,
}

impl ApproxOrderConfig {
    pub fn new(eps: f64, seed: u64) -> Self {
        ApproxOrderConfig {
            eps,
            seed,
            c1: 2.0,
            c2: 7.0,
            c_scan: 2.0,
            c_q: DEFAULT_C_Q,
            estimator: EstimatorConfig::default(),
            estimate_eps: None,
            audit: false,
        }
    }

    /// `ε̂ = ε / (c1·ln n)`.
    pub fn eps_hat(&self, n: usize) -> f64 {
        self.eps / (self.c1 * (n.max(3) as f64).ln())
    }
}

/// Per-step diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StepTrace {
    pub candidates: usize,
    pub kept: usize,
    pub chosen: usize,
    pub estimate: f64,
    /// Whether the decayed argmin by exact degree over all candidates survived trimming.
    pub trim_safe: Option<bool>,
}

fn score(delta: f64, value: f64) -> f64 {
    (1.0 - delta) * value
}

/// A `(1+ε)`-approximate greedy minimum-degree ordering.
pub fn approx_min_degree_sequence(g: &Graph, eps: f64, seed: u64) -> Result<OrderingResult> {
    Ok(approx_min_degree_sequence_with(g, &ApproxOrderConfig::new(eps, seed))?.0)
}

pub fn approx_min_degree_sequence_with(
    g: &Graph,
    cfg: &ApproxOrderConfig,
) -> Result<(OrderingResult, Vec<StepTrace>)> {
    if !(cfg.eps > 0.0 && cfg.eps <= 0.5) {
        return Err(invalid(format!(
            "eps must lie in (0, 1/2], got {}",
            cfg.eps
        )));
    }
    if !(cfg.c1 > 0.0 && cfg.c2 > 0.0 && cfg.c_scan > 0.0) {
        return Err(invalid("c1, c2 and c_scan must be positive"));
    }
    let n = g.n();
    let eps_hat = cfg.eps_hat(n);
    let est_eps = cfg.estimate_eps.unwrap_or(eps_hat);
    let ds_cfg = ApproxDsConfig {
        eps_hat,
        c_q: cfg.c_q,
        copies: None,
        seed: cfg.seed,
    };
    let mut ds = ApproxDegreeDs::with_config(g, ds_cfg)?;
    let window = (cfg.c_scan * (n.max(3) as f64).ln() / eps_hat).ceil() as usize;
    let slack = (1.0 + eps_hat).powi(7);

    let mut res = OrderingResult {
        seed: Some(cfg.seed),
        ..Default::default()
    };
    let mut trace = Vec::with_capacity(n);
    let mut oracle_calls = 0u64;

    for step in 0..n as u64 {
        let report = ds.report();
        let lo = report.first_nonempty().expect("a vertex remains");
        let hi = (lo + window).min(report.num_buckets() - 1);
        let mut cands: Vec<DecayedCandidate> = Vec::new();
        for i in lo..=hi {
            if report.is_empty(i) {
                continue;
            }
            let view = report.bucket(&ds, i)?;
            let mut r = stream(cfg.seed, &[purpose::DECAY, step, i as u64]);
            cands.extend(exp_decayed_candidates(&view, i, eps_hat, cfg.c2, &mut r)?);
        }
        // Collapse repeats, keeping the larger perturbation.
        cands.sort_by(|a, b| a.vertex.cmp(&b.vertex).then(b.delta.total_cmp(&a.delta)));
        cands.dedup_by_key(|c| c.vertex);

        let bucket_score = |c: &DecayedCandidate| score(c.delta, ds.bucket_base(c.bucket_index));
        let best = cands.iter().map(bucket_score).fold(f64::INFINITY, f64::min);
        // A draw above 1/ε̂ makes scores negative; loosen toward zero there too.
        let bound = if best >= 0.0 {
            slack * best
        } else {
            best / slack
        };
        let kept: Vec<DecayedCandidate> = cands
            .iter()
            .copied()
            .filter(|c| bucket_score(c) <= bound)
            .collect();

        let cg = ds.graph();
        let estimates = kept
            .par_iter()
            .map(|c| {
                let mut r = stream(cfg.seed, &[purpose::ESTIMATE, step, c.vertex as u64]);
                selection_degree(cg, c.vertex, est_eps, &cfg.estimator, &mut r)
            })
            .collect::<Result<Vec<_>>>()?;
        oracle_calls += estimates.iter().map(|e| e.oracle_calls).sum::<u64>();
        let (pick, est) = kept
            .iter()
            .zip(&estimates)
            .min_by(|(a, ea), (b, eb)| {
                score(a.delta, ea.value)
                    .total_cmp(&score(b.delta, eb.value))
                    .then(a.vertex.cmp(&b.vertex))
            })
            .map(|(c, e)| (c.vertex, e.value))
            .expect("trimming keeps the best candidate");

        let trim_safe = cfg.audit.then(|| {
            let exact =
                |c: &DecayedCandidate| score(c.delta, cg.fill_degree(c.vertex).unwrap() as f64);
            let arg = cands
                .iter()
                .min_by(|a, b| exact(a).total_cmp(&exact(b)).then(a.vertex.cmp(&b.vertex)))
                .unwrap();
            kept.iter().any(|c| c.vertex == arg.vertex)
        });
        trace.push(StepTrace {
            candidates: cands.len(),
            kept: kept.len(),
            chosen: pick,
            estimate: est,
            trim_safe,
        });

        ds.pivot(pick)?;
        res.order.push(pick);
        res.degrees.push(est.round() as usize);
    }
    res.audit = Audit {
        informs: ds.informs(),
        oracle_calls,
        copies: ds.copies() as u64,
    };
    Ok((res, trace))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_inversion_hits_the_cdf() {
        for &k in &[1usize, 10, 1000] {
            for &u in &[0.1, 0.5, 0.9] {
                let x = max_exponential_quantile(k, u);
                let f = (1.0 - (-x).exp()).powi(k as i32);
                assert!((f - u).abs() < 1e-9, "k={k} u={u} f={f}");
            }
        }
    }

    #[test]
    fn chain_is_decreasing_and_bounded() {
        let mut r = stream(5, &[]);
        let xs = sample_decreasing_exponentials(50, 2.0, &mut r).unwrap();
        assert!(xs.windows(2).all(|w| w[0] >= w[1]));
        assert!(xs.iter().all(|&x| x >= xs[0] - 2.0));
        assert!(sample_decreasing_exponentials(0, 1.0, &mut r).is_err());
        let all: Vec<f64> = DecreasingExponentials::new(30, &mut r).unwrap().collect();
        assert_eq!(all.len(), 30);
        assert!(all.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn lazy_shuffle_is_a_permutation() {
        let mut r = stream(6, &[]);
        let mut s = LazyShuffle::new(20);
        let mut got: Vec<usize> = std::iter::from_fn(|| s.next(&mut r)).collect();
        got.sort_unstable();
        assert_eq!(got, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn singleton_set_gives_one_candidate() {
        let mut r = stream(7, &[]);
        let c = exp_decayed_candidates(&[42usize][..], 3, 0.1, 7.0, &mut r).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].vertex, c[0].bucket_index), (42, 3));
        assert!(c[0].delta >= 0.0);
        let empty: [usize; 0] = [];
        assert!(exp_decayed_candidates(&empty[..], 0, 0.1, 7.0, &mut r).is_err());
    }

    #[test]
    fn path_pivots_an_endpoint_first() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        for seed in 0..10 {
            let r = approx_min_degree_sequence(&g, 0.5, seed).unwrap();
            assert_ne!(r.order[0], 1);
        }
    }

    #[test]
    fn isolated_vertex_goes_first() {
        let mut e: Vec<(usize, usize)> = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                e.push((i, j));
            }
        }
        let g = Graph::from_edges(6, e).unwrap();
        for seed in 0..10 {
            assert_eq!(
                approx_min_degree_sequence(&g, 0.5, seed).unwrap().order[0],
                5
            );
        }
    }
}
