//! Slow reference implementations. Two independent fill simulators live
//! here: explicit clique insertion ([`EliminationGraph`]) and reachability
//! through eliminated vertices ([`fill_degree_bruteforce`]).

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::io::check_permutation;
use crate::ordering::OrderingResult;

/// An explicit elimination graph with bitset adjacency. Eliminating a
/// vertex turns its current neighborhood into a clique.
#[derive(Clone, Debug)]
pub struct EliminationGraph {
    words: usize,
    bits: Vec<u64>,
    degree: Vec<usize>,
    alive: Vec<bool>,
}

impl EliminationGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        for (u, v) in g.edges() {
            bits[u * words + v / 64] |= 1 << (v % 64);
            bits[v * words + u / 64] |= 1 << (u % 64);
        }
        EliminationGraph {
            words,
            bits,
            degree: (0..n).map(|v| g.degree(v)).collect(),
            alive: vec![true; n],
        }
    }

    pub fn n(&self) -> usize {
        self.alive.len()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    /// Current degree, which equals the fill degree in the original graph.
    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let row = &self.bits[v * self.words..(v + 1) * self.words];
        let mut out = Vec::with_capacity(self.degree[v]);
        for (wi, &w) in row.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(wi * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    fn set(&mut self, u: usize, v: usize) -> bool {
        let w = &mut self.bits[u * self.words + v / 64];
        let mask = 1 << (v % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    fn clear(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] &= !(1 << (v % 64));
    }

    /// Eliminate `v`, returning its neighborhood at elimination time.
    pub fn eliminate(&mut self, v: usize) -> Vec<usize> {
        assert!(self.alive[v], "vertex {v} eliminated twice");
        let nb = self.neighbors(v);
        for &a in &nb {
            self.clear(a, v);
            self.degree[a] -= 1;
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.set(a, b) {
                    self.set(b, a);
                    self.degree[a] += 1;
                    self.degree[b] += 1;
                }
            }
        }
        for w in &mut self.bits[v * self.words..(v + 1) * self.words] {
            *w = 0;
        }
        self.degree[v] = 0;
        self.alive[v] = false;
        nb
    }

    /// Smallest current degree and the least vertex attaining it.
    pub fn min_degree_vertex(&self) -> Option<(usize, usize)> {
        (0..self.n())
            .filter(|&v| self.alive[v])
            .map(|v| (self.degree[v], v))
            .min()
    }
}

/// Fill degree of `v` after eliminating `eliminated`, by searching through
/// eliminated vertices for reachable remaining ones.
pub fn fill_degree_bruteforce(g: &Graph, eliminated: &[bool], v: usize) -> Result<usize> {
    g.check_vertex(v)?;
    if eliminated.len() != g.n() {
        return Err(invalid("eliminated mask length differs from vertex count"));
    }
    if eliminated[v] {
        return Err(Error::NotRemaining(v));
    }
    Ok(fill_neighbors_bruteforce(g, eliminated, v).len())
}

/// Sorted fill neighbors of a remaining vertex `v`.
pub fn fill_neighbors_bruteforce(g: &Graph, eliminated: &[bool], v: usize) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    seen[v] = true;
    let mut stack = vec![v];
    let mut out = Vec::new();
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if seen[y] {
                continue;
            }
            seen[y] = true;
            if eliminated[y] {
                stack.push(y);
            } else {
                out.push(y);
            }
        }
    }
    out.sort_unstable();
    out
}

/// The fill graph restricted to remaining vertices. Vertex ids are kept;
/// eliminated vertices are isolated in the result.
pub fn fill_graph_bruteforce(g: &Graph, eliminated: &[bool]) -> Result<Graph> {
    if eliminated.len() != g.n() {
        return Err(invalid("eliminated mask length differs from vertex count"));
    }
    let mut eg = EliminationGraph::new(g);
    for v in (0..g.n()).filter(|&v| eliminated[v]) {
        eg.eliminate(v);
    }
    let edges: Vec<(usize, usize)> = (0..g.n())
        .filter(|&v| !eliminated[v])
        .flat_map(|v| {
            eg.neighbors(v)
                .into_iter()
                .filter(move |&w| w > v)
                .map(move |w| (v, w))
        })
        .collect();
    Graph::from_edges(g.n(), edges)
}

/// Exact minimum-degree ordering with lexicographic tie-breaking.
pub fn mindeg_ordering_bruteforce(g: &Graph) -> OrderingResult {
    let mut eg = EliminationGraph::new(g);
    let mut res = OrderingResult::default();
    while let Some((d, v)) = eg.min_degree_vertex() {
        eg.eliminate(v);
        res.order.push(v);
        res.degrees.push(d);
    }
    res
}

/// Total fill: the sum over steps of the pivot's fill degree.
pub fn total_fill(g: &Graph, perm: &[usize]) -> Result<usize> {
    check_permutation(perm, g.n())?;
    let mut eliminated = vec![false; g.n()];
    let mut total = 0;
    for &v in perm {
        total += fill_degree_bruteforce(g, &eliminated, v)?;
        eliminated[v] = true;
    }
    Ok(total)
}
