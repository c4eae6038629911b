mod common;

use common::rng;
use mindeg_core::bruteforce::mindeg_ordering_bruteforce;
use mindeg_core::instances::{
    adversarial_correlation_demo, covering_set_system, generate, has_orthogonal_pair, is_prime,
    ov_decide, ov_reduction_graph, Family,
};
use mindeg_core::verify_ordering;
use rand::Rng;

/// Pair coverage by direct enumeration, independent of the bitset check.
fn covers_all_pairs(n: usize, sets: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; n * n];
    for s in sets {
        for &a in s {
            for &b in s {
                seen[(a - 1) * n + (b - 1)] = true;
            }
        }
    }
    seen.into_iter().all(|x| x)
}

#[test]
fn covering_small_examples() {
    let c = covering_set_system(1);
    assert_eq!(c.sets, vec![vec![1]]);
    let c = covering_set_system(9);
    assert_eq!(c.p, 3);
    assert_eq!(c.sets.len(), 12);
    assert!(c.sets.iter().all(|s| s.len() <= 3));
    assert!(covers_all_pairs(9, &c.sets));
}

#[test]
fn covering_conditions_hold_for_small_n() {
    for n in 1..=300 {
        let c = covering_set_system(n);
        let chk = c.check();
        assert!(chk.ok(), "n={n}: {chk:?}");
        assert_eq!(chk.all_pairs_covered, covers_all_pairs(n, &c.sets), "n={n}");
        assert!(
            is_prime(c.p) && c.p * c.p >= n && (c.p as f64) < 4.0 * (n as f64).sqrt(),
            "n={n}"
        );
        // p is the least prime whose square reaches n
        assert!((2..c.p).all(|q| !is_prime(q) || q * q < n), "n={n}");
        assert!(c.sets.iter().flatten().all(|&e| (1..=n).contains(&e)));
    }
}

fn random_vectors(n: usize, d: usize, density: f64, g: &mut impl Rng) -> Vec<Vec<bool>> {
    (0..n)
        .map(|_| (0..d).map(|_| g.random_bool(density)).collect())
        .collect()
}

#[test]
fn ov_examples() {
    let inst = ov_reduction_graph(&[vec![true, false], vec![false, true]]).unwrap();
    let dec = ov_decide(&inst);
    assert!(dec.dims_first);
    assert!(dec.next_degree < 20 * 2 + 2 - 1);

    let inst = ov_reduction_graph(&[vec![true, true], vec![true, true]]).unwrap();
    let dec = ov_decide(&inst);
    assert!(!has_orthogonal_pair(&inst.vectors));
    assert!(!dec.has_orthogonal_pair);
    assert_eq!(dec.next_degree, 20 * 2 + 2 - 1);

    assert!(ov_reduction_graph(&[vec![true], vec![]]).is_err());
}

#[test]
fn ov_degree_facts() {
    let mut g = rng(71);
    for n in [2usize, 5, 9, 16] {
        let vecs = random_vectors(n, 4, 0.5, &mut g);
        let inst = ov_reduction_graph(&vecs).unwrap();
        let root = (1..).find(|r| r * r >= n).unwrap();
        assert_eq!(inst.num_pad, 20 * root);
        let gr = &inst.graph;
        for v in inst.pad_vertices() {
            assert_eq!(gr.degree(v), inst.num_pad - 1 + n);
        }
        for v in inst.dim_vertices() {
            assert!(gr.degree(v) as f64 <= 10.0 * (n as f64).sqrt());
        }
        for v in 0..n {
            assert!(gr.degree(v) >= inst.num_pad);
        }
    }
}

#[test]
fn ov_decision_matches_scan() {
    let mut g = rng(72);
    let (mut yes, mut no) = (0, 0);
    for t in 0..12 {
        let density = if t % 2 == 0 { 0.3 } else { 0.7 };
        let vecs = random_vectors(8, 5, density, &mut g);
        let inst = ov_reduction_graph(&vecs).unwrap();
        let dec = ov_decide(&inst);
        assert!(dec.dims_first);
        let truth = has_orthogonal_pair(&vecs);
        assert_eq!(dec.has_orthogonal_pair, truth);
        if truth {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0, "{yes}/{no}");
}

#[test]
fn family_examples() {
    let g = generate(Family::Grid(3), 0).unwrap();
    assert_eq!((g.n(), g.m()), (9, 12));
    assert_eq!(generate(Family::Path(5), 0).unwrap().m(), 4);
    let a = generate(Family::ErdosRenyi { n: 100, p: 0.05 }, 5).unwrap();
    assert_eq!(
        a,
        generate(Family::ErdosRenyi { n: 100, p: 0.05 }, 5).unwrap()
    );
    assert_ne!(
        a,
        generate(Family::ErdosRenyi { n: 100, p: 0.05 }, 6).unwrap()
    );
    assert_eq!(generate(Family::Clique(6), 0).unwrap().m(), 15);
    let star = generate(Family::Star(7), 0).unwrap();
    assert_eq!(star.degree(6), 6);
    assert!(generate(Family::ErdosRenyi { n: 10, p: 1.5 }, 0).is_err());
}

#[test]
fn verify_examples() {
    let star = generate(Family::Star(8), 0).unwrap();
    let rev: Vec<usize> = (0..8).rev().collect();
    let rep = verify_ordering(&star, &rev, 0.5).unwrap();
    assert!(rep.violating_steps > 0);
    assert!(rep.max_ratio.is_infinite() || rep.max_ratio > 1.5);

    let g = generate(Family::ErdosRenyi { n: 30, p: 0.15 }, 3).unwrap();
    let brute = mindeg_ordering_bruteforce(&g);
    assert!(verify_ordering(&g, &brute.order, 0.0).unwrap().ok());
    assert!(verify_ordering(&g, &[0, 0], 0.0).is_err());
}

#[test]
fn demo_examples() {
    let r = adversarial_correlation_demo(1000, 1.0, 3).unwrap();
    assert_eq!(r.key_set_size, (1000f64.ln()).ceil() as usize);
    assert_eq!(r.final_set_size, r.key_set_size);
    for seed in 0..3 {
        let r = adversarial_correlation_demo(2000, 0.1, seed).unwrap();
        assert!(r.final_set_size <= 2 * r.key_set_size);
        assert!(r.oblivious_max_error >= 0.0);
    }
    assert!(adversarial_correlation_demo(1, 0.1, 0).is_err());
    assert!(adversarial_correlation_demo(100, 0.0, 0).is_err());
}
