mod common;

use common::{gnp, rng, shuffled};
use mindeg_core::approx::{ApproxDsConfig, DEFAULT_C_Q};
use mindeg_core::bruteforce::{fill_degree_bruteforce, mindeg_ordering_bruteforce};
use mindeg_core::{ApproxDegreeDs, ComponentGraph, Error, Graph, SketchCopy};

/// Rank statistic of minimizer values recomputed copy by copy from scratch.
fn scratch_quantile(ds: &ApproxDegreeDs, seed: u64, u: usize) -> f64 {
    let cg: &ComponentGraph = ds.graph();
    let mut vals: Vec<f64> = (0..ds.copies() as u64)
        .map(|i| SketchCopy::new(cg, seed, i).query_min(u).unwrap().value())
        .collect();
    vals.sort_by(f64::total_cmp);
    vals[ds.rank() - 1]
}

#[test]
fn parameter_checks() {
    let g = Graph::empty(3);
    assert!(matches!(
        ApproxDegreeDs::new(&g, 0.0, 1),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        ApproxDegreeDs::new(&g, 0.6, 1),
        Err(Error::InvalidParameter(_))
    ));
    let ds = ApproxDegreeDs::new(&g, 0.5, 1).unwrap();
    assert_eq!(
        ds.copies(),
        (DEFAULT_C_Q * 3f64.ln() / 0.25).ceil() as usize
    );
    assert_eq!(
        ds.rank(),
        (ds.copies() as f64 * (1.0 - (-1f64).exp())).floor() as usize
    );
}

#[test]
fn isolated_vertices_sit_in_bucket_zero() {
    let g = Graph::empty(6);
    let mut ds = ApproxDegreeDs::new(&g, 0.25, 3).unwrap();
    let rep = ds.report();
    assert_eq!(rep.len(0), 6);
    assert_eq!((1..rep.num_buckets()).map(|i| rep.len(i)).sum::<usize>(), 0);
    assert_eq!(rep, ds.report());
    let before: Vec<f64> = (1..6).map(|u| ds.quantile(u).unwrap()).collect();
    ds.pivot(0).unwrap();
    let after: Vec<f64> = (1..6).map(|u| ds.quantile(u).unwrap()).collect();
    assert_eq!(before, after);
    assert!(matches!(ds.quantile(0), Err(Error::NotRemaining(0))));
}

#[test]
fn quantiles_match_scratch_recompute() {
    let mut r = rng(31);
    for t in 0..3 {
        let g = gnp(40, 0.2, &mut r);
        let cfg = ApproxDsConfig {
            copies: Some(60),
            ..ApproxDsConfig::new(0.25, 90 + t)
        };
        let mut ds = ApproxDegreeDs::with_config(&g, cfg).unwrap();
        for u in shuffled(40, &mut r) {
            ds.pivot(u).unwrap();
            for v in ds.graph().remaining_vertices().collect::<Vec<_>>() {
                assert_eq!(ds.quantile(v).unwrap(), scratch_quantile(&ds, 90 + t, v));
            }
        }
    }
}

#[test]
fn path_pivot_updates_endpoint_minimizers() {
    let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
    let cfg = ApproxDsConfig {
        copies: Some(50),
        ..ApproxDsConfig::new(0.25, 4)
    };
    let mut ds = ApproxDegreeDs::with_config(&g, cfg).unwrap();
    ds.pivot(1).unwrap();
    for u in [0, 2] {
        let mut expect: Vec<f64> = (0..50)
            .map(|i| {
                let s = SketchCopy::new(ds.graph(), 4, i);
                s.key(0).value().min(s.key(2).value())
            })
            .collect();
        expect.sort_by(f64::total_cmp);
        assert_eq!(ds.minimizer_values(u).unwrap(), expect);
        assert_eq!(ds.distinct_count(u).unwrap(), 2);
    }
}

/// A star on `d + 2` vertices with its center (vertex 0) eliminated: the fill
/// graph on the leaves is `K_{d+1}` without storing its edges.
fn implicit_clique(d: usize, eps_hat: f64, seed: u64) -> ApproxDegreeDs {
    let g = Graph::from_edges(d + 2, (1..d + 2).map(|v| (0, v))).unwrap();
    let k = (8.0 * ((d + 1) as f64).ln() / (eps_hat * eps_hat)).ceil() as usize;
    let mut ds = ApproxDegreeDs::with_config(
        &g,
        ApproxDsConfig {
            copies: Some(k),
            ..ApproxDsConfig::new(eps_hat, seed)
        },
    )
    .unwrap();
    ds.pivot(0).unwrap();
    ds
}

#[test]
fn clique_quantile_is_accurate() {
    let d = 500;
    let eps_hat = 0.25;
    let dp = (d + 1) as f64;
    let seeds = 40u64;
    let mut ok = 0;
    for seed in 0..seeds {
        let ds = implicit_clique(d, eps_hat, seed);
        assert_eq!(ds.graph().fill_degree(1).unwrap(), d);
        let q = ds.quantile(1).unwrap();
        assert!((2..d + 2).all(|u| ds.quantile(u).unwrap() == q));
        let inv = 1.0 / q;
        ok += u64::from((1.0 - eps_hat) * dp <= inv && inv <= (1.0 + eps_hat) * dp);
    }
    assert!(ok * 100 >= seeds * 95, "{ok}/{seeds}");
}

#[test]
fn separated_cliques_land_far_apart() {
    // K3 ∪ K101: degrees 2 and 100.
    let mut edges: Vec<(usize, usize)> = vec![(0, 1), (1, 2), (0, 2)];
    edges.extend((3..104).flat_map(|i| (i + 1..104).map(move |j| (i, j))));
    let g = Graph::from_edges(104, edges).unwrap();
    let eps_hat = 0.1;
    let ds = ApproxDegreeDs::new(&g, eps_hat, 8).unwrap();
    let rep = ds.report();
    let nonempty: Vec<usize> = (0..rep.num_buckets())
        .filter(|&i| !rep.is_empty(i))
        .collect();
    assert_eq!(nonempty.len(), 2, "{nonempty:?}");
    assert_eq!(rep.len(nonempty[0]), 3);
    assert_eq!(rep.len(nonempty[1]), 101);
    // Integer bucket indices can only realize the floor of the log gap.
    let gap = (50f64).ln() / (1.0 + eps_hat).ln();
    assert!(
        (nonempty[1] - nonempty[0]) as f64 >= gap.floor(),
        "{nonempty:?}"
    );
}

#[test]
fn reports_go_stale_after_a_pivot() {
    let g = gnp(20, 0.2, &mut rng(32));
    let mut ds = ApproxDegreeDs::new(&g, 0.5, 1).unwrap();
    let rep = ds.report();
    let i = rep.first_nonempty().unwrap();
    let view = rep.bucket(&ds, i).unwrap();
    let u = view.get(0);
    assert_eq!(view.len(), rep.len(i));
    ds.pivot(u).unwrap();
    assert!(matches!(rep.bucket(&ds, i), Err(Error::StaleReport { .. })));
    let fresh = ds.report();
    let total: usize = (0..fresh.num_buckets()).map(|b| fresh.len(b)).sum();
    assert_eq!(total, 19);
}

#[test]
fn buckets_partition_and_are_sound() {
    let mut r = rng(33);
    let eps_hat = 0.25;
    let (mut steps, mut sound) = (0usize, 0usize);
    for t in 0..4 {
        let n = 60;
        let g = gnp(n, 0.08, &mut r);
        // pivot order fixed independently of the structure's seed
        let order = mindeg_ordering_bruteforce(&g).order;
        let mut ds = ApproxDegreeDs::new(&g, eps_hat, 200 + t).unwrap();
        let mut elim = vec![false; n];
        for &u in &order {
            let rep = ds.report();
            let mut seen = 0;
            let mut all_ok = true;
            for b in 0..rep.num_buckets() {
                let view = rep.bucket(&ds, b).unwrap();
                for j in 0..view.len() {
                    let v = view.get(j);
                    seen += 1;
                    assert_eq!(ds.bucket_of(v).unwrap(), b);
                    let truth = fill_degree_bruteforce(&g, &elim, v).unwrap() as f64;
                    let tb = ds.bucket_of_value(truth);
                    all_ok &= tb.abs_diff(b) <= 2;
                }
            }
            assert_eq!(seen, n - elim.iter().filter(|&&e| e).count());
            steps += 1;
            sound += usize::from(all_ok);
            ds.pivot(u).unwrap();
            elim[u] = true;
        }
    }
    assert!(sound * 100 >= steps * 95, "{sound}/{steps}");
}

#[test]
fn bucket_boundaries_go_down() {
    let ds = ApproxDegreeDs::new(&Graph::empty(4), 0.5, 1).unwrap();
    assert_eq!(ds.bucket_of_value(0.0), 0);
    assert_eq!(ds.bucket_of_value(1.5), 0);
    assert_eq!(ds.bucket_of_value(1.5000001), 1);
    assert_eq!(ds.bucket_of_value(2.25), 1);
    assert_eq!(ds.bucket_of_value(1e12), ds.num_buckets() - 1);
    for i in 0..ds.num_buckets() {
        assert_eq!(ds.bucket_base(i), 1.5f64.powi(i as i32));
    }
}
