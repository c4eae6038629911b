use rand::Rng;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::rng::{purpose, stream};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `k × k` grid; vertex `r·k + c`.
    Grid(usize),
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    Clique(usize),
    /// `n` vertices; the center is the last vertex, `n − 1`.
    Star(usize),
    Path(usize),
}

pub fn generate(family: Family, seed: u64) -> Result<Graph> {
    match family {
        Family::Grid(k) => {
            let mut e = Vec::with_capacity(2 * k * k);
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
            Graph::from_edges(k * k, e)
        }
        Family::ErdosRenyi { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("edge probability {p} outside [0, 1]")));
            }
            let mut rng = stream(seed, &[purpose::GENERATE]);
            let mut e = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.random_bool(p) {
                        e.push((i, j));
                    }
                }
            }
            Graph::from_edges(n, e)
        }
        Family::Clique(n) => {
            Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
        }
        Family::Star(n) => Graph::from_edges(n, (0..n.saturating_sub(1)).map(|i| (i, n - 1))),
        Family::Path(n) => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
    }
}
