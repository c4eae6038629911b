//! A component graph plus many sketch copies kept in lockstep, and the
//! per-vertex table of their current minimizers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::component::ComponentGraph;
use crate::error::Result;
use crate::graph::Graph;
use crate::ordset::SortedBlocks;
use crate::sketch::{SketchCopy, SketchKey};

#[derive(Clone, Debug)]
pub(crate) struct SketchBank {
    pub cg: ComponentGraph,
    pub copies: Vec<SketchCopy>,
    seed: u64,
    /// `current[i][v]`: minimizer of `v` in copy `i`.
    current: Vec<Vec<SketchKey>>,
    /// Owner multiplicities of each vertex's minimizers.
    owners: Vec<BTreeMap<u32, u32>>,
    /// Sorted minimizer keys, materialized only for vertices whose distinct
    /// count is at least `track_from`. Other vertices are served from `current`.
    keys: Vec<Option<SortedBlocks<u64>>>,
    track_from: usize,
    scratch: Vec<Vec<usize>>,
}

impl SketchBank {
    /// `track_from`: distinct count from which a vertex keeps a sorted key
    /// multiset (`usize::MAX` disables).
    pub fn new(g: &Graph, seed: u64, copies: usize, track_from: usize) -> Self {
        let n = g.n();
        let mut bank = SketchBank {
            cg: ComponentGraph::new(g),
            copies: Vec::new(),
            seed,
            current: Vec::new(),
            owners: vec![BTreeMap::new(); n],
            keys: vec![None; n],
            track_from,
            scratch: Vec::new(),
        };
        bank.add_copies(copies);
        bank
    }

    pub fn k(&self) -> usize {
        self.copies.len()
    }

    /// Build `extra` fresh copies on the current component graph.
    pub fn add_copies(&mut self, extra: usize) {
        let start = self.copies.len() as u64;
        let cg = &self.cg;
        let seed = self.seed;
        let fresh: Vec<SketchCopy> = (start..start + extra as u64)
            .into_par_iter()
            .map(|i| SketchCopy::new(cg, seed, i))
            .collect();
        for copy in fresh {
            let mut cur = vec![SketchKey { x: 0, owner: 0 }; self.cg.n()];
            for v in self.cg.remaining_vertices() {
                let m = copy.query_min_unchecked(v);
                cur[v] = m;
                *self.owners[v].entry(m.owner).or_insert(0) += 1;
            }
            self.current.push(cur);
            self.copies.push(copy);
        }
        self.scratch.resize_with(self.copies.len(), Vec::new);
        self.keys.iter_mut().for_each(|k| *k = None);
        for v in self.cg.remaining_vertices().collect::<Vec<_>>() {
            self.retrack(v);
        }
    }

    fn column(&self, v: usize) -> Vec<u64> {
        self.current.iter().map(|c| c[v].x).collect()
    }

    /// Start or stop materializing `v`'s key multiset. Tracking starts at
    /// `track_from` and stops below half of it, so a count hovering at the
    /// threshold does not rebuild every step.
    fn retrack(&mut self, v: usize) {
        let d = self.distinct(v);
        if self.keys[v].is_none() && d >= self.track_from {
            let mut col = self.column(v);
            col.sort_unstable();
            self.keys[v] = Some(SortedBlocks::from_sorted(col));
        } else if self.keys[v].is_some() && d < self.track_from / 2 {
            self.keys[v] = None;
        }
    }

    /// Pivot `u` in the graph and every copy. Returns the remaining vertices
    /// whose minimizer changed in at least one copy, ascending.
    pub fn pivot(&mut self, u: usize) -> Result<Vec<usize>> {
        let delta = self.cg.pivot(u)?;
        let mut changed = std::mem::take(&mut self.scratch);
        self.copies
            .par_iter_mut()
            .zip(changed.par_iter_mut())
            .try_for_each(|(c, out)| {
                out.clear();
                c.pivot_vertex_into(&delta, out)
            })?;
        self.owners[u].clear();
        self.keys[u] = None;
        let mut touched = Vec::new();
        for (i, list) in changed.iter().enumerate() {
            for &v in list {
                let new = self.copies[i].query_min_unchecked(v);
                let old = std::mem::replace(&mut self.current[i][v], new);
                let map = &mut self.owners[v];
                let cnt = map.get_mut(&old.owner).expect("minimizer tracked");
                *cnt -= 1;
                if *cnt == 0 {
                    map.remove(&old.owner);
                }
                *map.entry(new.owner).or_insert(0) += 1;
                if let Some(keys) = &mut self.keys[v] {
                    keys.remove(&old.x);
                    keys.insert(new.x);
                }
                touched.push(v);
            }
        }
        self.scratch = changed;
        touched.sort_unstable();
        touched.dedup();
        for &v in &touched {
            self.retrack(v);
        }
        Ok(touched)
    }

    /// Distinct minimizer owners of `v`, counting `v` itself as a sentinel:
    /// an estimate of `|N_fill(v) ∪ {v}|`.
    pub fn distinct(&self, v: usize) -> usize {
        let m = &self.owners[v];
        m.len() + usize::from(!m.contains_key(&(v as u32)))
    }

    /// The `r`-th smallest (1-based) minimizer key of `v`.
    pub fn ranked_key(&self, v: usize, r: usize) -> Option<u64> {
        if r == 0 || r > self.k() {
            return None;
        }
        if let Some(keys) = &self.keys[v] {
            return keys.get(r - 1);
        }
        let mut col = self.column(v);
        Some(*col.select_nth_unstable(r - 1).1)
    }

    /// Sorted minimizer keys of `v`.
    pub fn minimizer_keys(&self, v: usize) -> Vec<u64> {
        match &self.keys[v] {
            Some(keys) => keys.to_vec(),
            None => {
                let mut col = self.column(v);
                col.sort_unstable();
                col
            }
        }
    }

    pub fn informs(&self) -> u64 {
        self.copies.iter().map(|c| c.counters().informs).sum()
    }
}
