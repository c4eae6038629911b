#![allow(dead_code)]

use mindeg_core::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) drawn independently of the library's generators.
pub fn gnp(n: usize, p: f64, r: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.random_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn shuffled(n: usize, r: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(r);
    v
}

pub fn grid(k: usize) -> Graph {
    let mut e = Vec::new();
    for r in 0..k {
        for c in 0..k {
            let v = r * k + c;
            if c + 1 < k {
                e.push((v, v + 1));
            }
            if r + 1 < k {
                e.push((v, v + k));
            }
        }
    }
    Graph::from_edges(k * k, e).unwrap()
}
