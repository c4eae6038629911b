use super::covering::covering_set_system;
use crate::bruteforce::{fill_degree_bruteforce, mindeg_ordering_bruteforce};
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::rng::{purpose, stream};
use rand::Rng;

/// The reduction graph for `n` vectors of dimension `d`.
///
/// Vertex layout: `0..n` are the vectors, then one vertex per (dimension,
/// covering subset), then a pad clique of `20⌈√n⌉` vertices joined to every
/// vector vertex.
#[derive(Clone, Debug)]
pub struct OvInstance {
    pub vectors: Vec<Vec<bool>>,
    pub graph: Graph,
    pub num_vec: usize,
    pub num_dim: usize,
    pub num_pad: usize,
}

impl OvInstance {
    pub fn dim_vertices(&self) -> std::ops::Range<usize> {
        self.num_vec..self.num_vec + self.num_dim
    }

    pub fn pad_vertices(&self) -> std::ops::Range<usize> {
        self.num_vec + self.num_dim..self.graph.n()
    }

    /// Fill degree that the next pivot reaches when no orthogonal pair exists.
    pub fn threshold(&self) -> usize {
        self.num_pad + self.num_vec - 1
    }
}

fn ceil_sqrt(n: usize) -> usize {
    (1..).find(|r| r * r >= n).unwrap()
}

pub fn ov_reduction_graph(vectors: &[Vec<bool>]) -> Result<OvInstance> {
    let n = vectors.len();
    if n == 0 {
        return Err(invalid("need at least one vector"));
    }
    let d = vectors[0].len();
    if vectors.iter().any(|v| v.len() != d) {
        return Err(invalid("vectors have inconsistent dimensions"));
    }
    let cover = covering_set_system(n);
    let num_dim = d * cover.sets.len();
    let num_pad = 20 * ceil_sqrt(n);
    let total = n + num_dim + num_pad;
    let mut edges = Vec::new();
    let mut next = n;
    #[allow(clippy::needless_range_loop)]
    for j in 0..d {
        for set in &cover.sets {
            for &e in set {
                if vectors[e - 1][j] {
                    edges.push((e - 1, next));
                }
            }
            next += 1;
        }
    }
    let pad0 = n + num_dim;
    for a in pad0..total {
        for b in a + 1..total {
            edges.push((a, b));
        }
        for v in 0..n {
            edges.push((a, v));
        }
    }
    Ok(OvInstance {
        vectors: vectors.to_vec(),
        graph: Graph::from_edges(total, edges)?,
        num_vec: n,
        num_dim,
        num_pad,
    })
}

/// `n` random vectors of dimension `d`, each bit set with probability `density`.
pub fn random_ov_vectors(n: usize, d: usize, density: f64, seed: u64) -> Result<Vec<Vec<bool>>> {
    if !(0.0..=1.0).contains(&density) {
        return Err(invalid(format!("density {density} outside [0, 1]")));
    }
    let mut rng = stream(seed, &[purpose::OV_VECTORS]);
    Ok((0..n)
        .map(|_| (0..d).map(|_| rng.random_bool(density)).collect())
        .collect())
}

/// Direct scan for a pair of distinct orthogonal vectors.
pub fn has_orthogonal_pair(vectors: &[Vec<bool>]) -> bool {
    (0..vectors.len()).any(|i| {
        (i + 1..vectors.len()).any(|j| vectors[i].iter().zip(&vectors[j]).all(|(a, b)| !(a & b)))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvDecision {
    pub has_orthogonal_pair: bool,
    /// Whether the dimension vertices were exactly the first pivots.
    pub dims_first: bool,
    /// Fill degree of the first pivot after the dimension vertices.
    pub next_degree: usize,
}

/// Decide the instance from the exact minimum-degree ordering: after the
/// dimension vertices go, the next pivot's fill degree falls below the
/// threshold exactly when some pair of vectors is orthogonal.
pub fn ov_decide(inst: &OvInstance) -> OvDecision {
    let ord = mindeg_ordering_bruteforce(&inst.graph);
    let dims = inst.dim_vertices();
    let dims_first = ord.order[..inst.num_dim].iter().all(|v| dims.contains(v));
    let mut elim = vec![false; inst.graph.n()];
    for &v in &ord.order[..inst.num_dim] {
        elim[v] = true;
    }
    let next = ord.order[inst.num_dim];
    let next_degree =
        fill_degree_bruteforce(&inst.graph, &elim, next).expect("next pivot is remaining");
    OvDecision {
        has_orthogonal_pair: next_degree < inst.threshold(),
        dims_first,
        next_degree,
    }
}
