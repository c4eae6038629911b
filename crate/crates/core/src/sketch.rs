//! One dynamic ℓ0-sketch copy over a component graph.
//!
//! Every vertex owns a uniform 64-bit key. Each live component keeps the
//! keys of its remaining neighbors sorted (its *remaining heap*); each
//! remaining vertex keeps a multiset (its *fill heap*) holding the keys of its
//! remaining neighbors plus the minimum of every adjacent component. The
//! vertex's own key is consulted at query time, so
//! `query_min(u) = min(x_u, fill(u).min)` is the minimum over `N_fill(u) ∪ {u}`.
//!
//! Heaps are sorted `Vec<u64>` of packed keys: the high bits are random and
//! the low bits hold the owner id, so keys never tie and the owner of any
//! entry is recoverable without a lookup.

use rand::RngCore;

use crate::component::{ComponentGraph, Node, PivotDelta};
use crate::error::{Error, Result};
use crate::rng::{purpose, stream};

/// A sketch key. `x` is the 64-bit draw with its low bits replaced by the
/// owner id, so keys are totally ordered and never tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SketchKey {
    pub x: u64,
    pub owner: u32,
}

impl SketchKey {
    /// The key as a real in `[0, 1)`.
    pub fn value(self) -> f64 {
        key_value(self.x)
    }

    pub fn owner(self) -> usize {
        self.owner as usize
    }
}

/// Map a raw 64-bit key to `[0, 1)`.
pub fn key_value(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Element-move counters for complexity audits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SketchCounters {
    /// Fill-heap entries rewritten by `inform_remaining`.
    pub informs: u64,
    /// Entries moved between remaining heaps by melds.
    pub meld_moves: u64,
    /// Fill-heap entries rewritten for the pivot's own remaining neighbors.
    pub direct_updates: u64,
}

#[derive(Clone, Debug)]
pub struct SketchCopy {
    mask: u64,
    slots: Vec<Slot>,
    remaining_heap: Vec<Vec<u64>>,
    counters: SketchCounters,
    touched: Vec<(u32, u64)>,
    epoch: u32,
    spare: Vec<u64>,
    common: Vec<u64>,
}

/// Per-vertex state, kept together so one update touches one cache line.
#[derive(Clone, Debug, Default)]
struct Slot {
    key: u64,
    stamp: u32,
    alive: bool,
    fill: Vec<u64>,
}

fn heap_insert(heap: &mut Vec<u64>, k: u64) {
    let pos = heap.partition_point(|&e| e < k);
    heap.insert(pos, k);
}

fn heap_remove(heap: &mut Vec<u64>, k: u64) -> bool {
    match heap.binary_search(&k) {
        Ok(pos) => {
            heap.remove(pos);
            true
        }
        Err(_) => false,
    }
}

fn owner_mask(n: usize) -> u64 {
    let bits = usize::BITS - n.saturating_sub(1).leading_zeros();
    (1u64 << bits.max(1)) - 1
}

impl Slot {
    #[inline]
    fn query(&self) -> u64 {
        match self.fill.first() {
            Some(&m) if m < self.key => m,
            _ => self.key,
        }
    }
}

impl SketchCopy {
    /// A copy with keys drawn from the stream `(seed, copy_index)`.
    pub fn new(cg: &ComponentGraph, seed: u64, copy_index: u64) -> Self {
        let mut rng = stream(seed, &[purpose::SKETCH, copy_index]);
        let xs = (0..cg.n()).map(|_| rng.next_u64()).collect();
        Self::with_keys(cg, xs)
    }

    /// A copy with explicit raw keys, one per vertex. The low bits of each
    /// key are overwritten by the owner id.
    pub fn with_keys(cg: &ComponentGraph, xs: Vec<u64>) -> Self {
        assert_eq!(xs.len(), cg.n(), "one key per vertex");
        let n = cg.n();
        let mask = owner_mask(n);
        let keys: Vec<u64> = xs
            .into_iter()
            .enumerate()
            .map(|(v, x)| (x & !mask) | v as u64)
            .collect();
        let mut remaining_heap = vec![Vec::new(); n];
        for c in cg.component_ids() {
            let mut h: Vec<u64> = cg
                .remaining_neighbors(Node::Component(c))
                .unwrap()
                .into_iter()
                .map(|v| keys[v])
                .collect();
            h.sort_unstable();
            remaining_heap[c] = h;
        }
        let mut slots: Vec<Slot> = keys
            .iter()
            .map(|&key| Slot {
                key,
                ..Slot::default()
            })
            .collect();
        for u in cg.remaining_vertices() {
            slots[u].alive = true;
            let mut h: Vec<u64> = cg
                .remaining_neighbors(Node::Remaining(u))
                .unwrap()
                .into_iter()
                .map(|v| keys[v])
                .collect();
            for c in cg.component_neighbors(u).unwrap() {
                h.push(remaining_heap[c][0]);
            }
            h.sort_unstable();
            slots[u].fill = h;
        }
        SketchCopy {
            mask,
            slots,
            remaining_heap,
            counters: SketchCounters::default(),
            touched: Vec::new(),
            epoch: 0,
            spare: Vec::new(),
            common: Vec::new(),
        }
    }

    /// Record `v`'s current query value unless already recorded this pivot.
    #[inline]
    fn touch(&mut self, v: usize) {
        let slot = &mut self.slots[v];
        if slot.stamp != self.epoch {
            slot.stamp = self.epoch;
            let q = slot.query();
            self.touched.push((v as u32, q));
        }
    }

    fn to_key(&self, k: u64) -> SketchKey {
        SketchKey {
            x: k,
            owner: (k & self.mask) as u32,
        }
    }

    pub fn key(&self, v: usize) -> SketchKey {
        self.to_key(self.slots[v].key)
    }

    pub fn raw_keys(&self) -> Vec<u64> {
        self.slots.iter().map(|s| s.key).collect()
    }

    pub fn counters(&self) -> SketchCounters {
        self.counters
    }

    /// Minimum key over `N_fill(u) ∪ {u}`.
    pub fn query_min(&self, u: usize) -> Result<SketchKey> {
        if !self.slots.get(u).is_some_and(|s| s.alive) {
            return Err(Error::NotRemaining(u));
        }
        Ok(self.query_min_unchecked(u))
    }

    #[inline]
    pub(crate) fn query_min_unchecked(&self, u: usize) -> SketchKey {
        self.to_key(self.query_raw(u))
    }

    #[inline]
    fn query_raw(&self, u: usize) -> u64 {
        self.slots[u].query()
    }

    /// Minimum of a component's remaining heap.
    pub fn component_min(&self, c: usize) -> Option<SketchKey> {
        self.remaining_heap[c].first().map(|&k| self.to_key(k))
    }

    /// Replay a pivot already applied to the component graph. Returns the
    /// remaining vertices whose `query_min` changed, ascending.
    pub fn pivot_vertex(&mut self, delta: &PivotDelta) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        self.pivot_vertex_into(delta, &mut out)?;
        Ok(out)
    }

    /// As [`pivot_vertex`](Self::pivot_vertex), appending to `out`.
    pub fn pivot_vertex_into(&mut self, delta: &PivotDelta, out: &mut Vec<usize>) -> Result<()> {
        let u = delta.vertex;
        if !self.slots.get(u).is_some_and(|s| s.alive) {
            return Err(Error::NotRemaining(u));
        }
        self.touched.clear();
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.slots.iter_mut().for_each(|s| s.stamp = u32::MAX);
            self.epoch = 1;
        }
        let ku = self.slots[u].key;

        // u becomes a component whose remaining heap is its remaining neighborhood.
        let mut cu: Vec<u64> = delta
            .remaining_neighbors
            .iter()
            .map(|&v| self.slots[v].key)
            .collect();
        cu.sort_unstable();
        if let Some(&m) = cu.first() {
            for &v in &delta.remaining_neighbors {
                self.touch(v);
                let fh = &mut self.slots[v].fill;
                let ok = heap_remove(fh, ku);
                debug_assert!(ok);
                heap_insert(fh, m);
            }
            self.counters.direct_updates += cu.len() as u64;
        }
        self.remaining_heap[u] = cu;
        self.slots[u].fill = Vec::new();
        self.slots[u].alive = false;

        let mut cur = u;
        for &w in &delta.component_neighbors {
            let was_min = self.remaining_heap[w].first() == Some(&ku);
            let ok = heap_remove(&mut self.remaining_heap[w], ku);
            debug_assert!(ok, "component {w} did not hold pivot {u}");
            if was_min {
                let new = self.remaining_heap[w].first().copied();
                self.inform(w, ku, new, None);
            }
            cur = self.meld_into(cur, w);
        }
        if cur != delta.component {
            self.remaining_heap.swap(cur, delta.component);
        }

        let start = out.len();
        out.extend(
            self.touched
                .iter()
                .filter(|&&(v, old)| self.query_raw(v as usize) != old)
                .map(|&(v, _)| v as usize),
        );
        out[start..].sort_unstable();
        Ok(())
    }

    /// Replace component `w`'s entry `x_old` by `x_new` (or drop it) in the
    /// fill heap of every remaining neighbor of `w`. Returns the neighbors
    /// whose fill-heap minimum changed.
    pub fn inform_remaining(
        &mut self,
        w: usize,
        x_old: SketchKey,
        x_new: Option<SketchKey>,
    ) -> Vec<usize> {
        let mut changed = Vec::new();
        self.inform(w, x_old.x, x_new.map(|k| k.x), Some(&mut changed));
        self.touched.clear();
        changed
    }

    fn inform(
        &mut self,
        w: usize,
        old: u64,
        new: Option<u64>,
        mut changed: Option<&mut Vec<usize>>,
    ) {
        for &k in &self.remaining_heap[w] {
            let v = (k & self.mask) as usize;
            let slot = &mut self.slots[v];
            if slot.stamp != self.epoch {
                slot.stamp = self.epoch;
                self.touched.push((v as u32, slot.query()));
            }
            let fh = &mut slot.fill;
            let before = fh.first().copied();
            heap_remove(fh, old);
            if let Some(k) = new {
                heap_insert(fh, k);
            }
            if let Some(ch) = changed.as_deref_mut() {
                if fh.first().copied() != before {
                    ch.push(v);
                }
            }
        }
        self.counters.informs += self.remaining_heap[w].len() as u64;
    }

    /// Meld components `a` and `b`; returns the slot holding the result.
    pub fn meld(&mut self, a: usize, b: usize) -> usize {
        let r = self.meld_into(a, b);
        self.touched.clear();
        r
    }

    fn meld_into(&mut self, a: usize, b: usize) -> usize {
        let ma = self.remaining_heap[a].first().copied();
        let mb = self.remaining_heap[b].first().copied();
        if let (Some(ma), Some(mb)) = (ma, mb) {
            if ma < mb {
                self.inform(b, mb, Some(ma), None);
            } else if mb < ma {
                self.inform(a, ma, Some(mb), None);
            }
        }
        let merged_min = match (ma, mb) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let (small, large) = if self.remaining_heap[a].len() < self.remaining_heap[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        let moved = std::mem::take(&mut self.remaining_heap[small]);
        self.counters.meld_moves += moved.len() as u64;
        let mut target = std::mem::take(&mut self.remaining_heap[large]);
        let mut common = std::mem::take(&mut self.common);
        common.clear();
        if moved.len() * 8 < target.len() {
            for &k in &moved {
                match target.binary_search(&k) {
                    Ok(_) => common.push(k),
                    Err(pos) => target.insert(pos, k),
                }
            }
        } else {
            let mut out = std::mem::take(&mut self.spare);
            out.clear();
            out.reserve(target.len() + moved.len());
            let (mut i, mut j) = (0, 0);
            while i < target.len() && j < moved.len() {
                let (x, y) = (target[i], moved[j]);
                if x < y {
                    out.push(x);
                    i += 1;
                } else if y < x {
                    out.push(y);
                    j += 1;
                } else {
                    common.push(x);
                    out.push(x);
                    i += 1;
                    j += 1;
                }
            }
            out.extend_from_slice(&target[i..]);
            out.extend_from_slice(&moved[j..]);
            self.spare = std::mem::replace(&mut target, out);
        }
        // A vertex adjacent to both sides now holds two copies of the merged minimum.
        if let Some(m) = merged_min {
            for &k in &common {
                let v = (k & self.mask) as usize;
                self.touch(v);
                let fh = &mut self.slots[v].fill;
                let ok = heap_remove(fh, m);
                debug_assert!(ok);
            }
        }
        self.common = common;
        self.remaining_heap[large] = target;
        large
    }

    /// Whether every heap equals a from-scratch rebuild on `cg` with the same keys.
    pub fn matches_rebuild(&self, cg: &ComponentGraph) -> bool {
        let fresh = SketchCopy::with_keys(cg, self.raw_keys());
        cg.component_ids()
            .all(|c| self.remaining_heap[c] == fresh.remaining_heap[c])
            && self
                .slots
                .iter()
                .zip(&fresh.slots)
                .all(|(a, b)| a.alive == b.alive && a.fill == b.fill)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    const SCALE: f64 = (1u64 << 63) as f64 * 2.0;

    fn raw(vals: &[f64]) -> Vec<u64> {
        vals.iter().map(|v| (v * SCALE) as u64).collect()
    }

    #[test]
    fn isolated_and_triangle_queries() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let cg = ComponentGraph::new(&g);
        let s = SketchCopy::with_keys(&cg, raw(&[0.1, 0.5, 0.9, 0.7]));
        for u in 0..3 {
            assert_eq!(s.query_min(u).unwrap().owner(), 0);
        }
        assert_eq!(s.query_min(3).unwrap().owner(), 3);
    }

    #[test]
    fn path_pivot_middle_changes_both_ends() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::with_keys(&cg, raw(&[0.2, 0.1, 0.3]));
        assert_eq!(s.query_min(0).unwrap().owner(), 1);
        let d = cg.pivot(1).unwrap();
        let changed = s.pivot_vertex(&d).unwrap();
        assert_eq!(changed, vec![0, 2]);
        assert_eq!(s.query_min(0).unwrap().owner(), 0);
        assert_eq!(s.query_min(2).unwrap().owner(), 0);
        assert!(s.matches_rebuild(&cg));
        assert!(matches!(s.query_min(1), Err(Error::NotRemaining(1))));
    }

    #[test]
    fn isolated_pivot_changes_nothing() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::new(&cg, 1, 0);
        let d = cg.pivot(2).unwrap();
        assert!(s.pivot_vertex(&d).unwrap().is_empty());
        assert!(s.pivot_vertex(&d).is_err());
    }

    #[test]
    fn inform_on_star_component() {
        // center 0 eliminated; leaves 1..=3 see component {0}; 4 is isolated
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::with_keys(&cg, raw(&[0.9, 0.5, 0.6, 0.7, 0.05]));
        let d = cg.pivot(0).unwrap();
        s.pivot_vertex(&d).unwrap();
        let old = s.component_min(0).unwrap();
        let before = s.counters().informs;
        let changed = s.inform_remaining(0, old, Some(s.key(4)));
        assert_eq!(changed, vec![1, 2, 3]);
        assert_eq!(s.counters().informs - before, 3);
        assert!(s.inform_remaining(4, s.key(4), None).is_empty());
    }

    #[test]
    fn meld_informs_only_the_larger_side() {
        // 0 - 1 - 2 - 3 - 4 ; components {1} (nbrs 0,2) and {3} (nbrs 2,4)
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::with_keys(&cg, raw(&[0.1, 0.5, 0.6, 0.7, 0.9]));
        for v in [1, 3] {
            let d = cg.pivot(v).unwrap();
            s.pivot_vertex(&d).unwrap();
        }
        let before = s.counters().informs;
        // {1}.min = x_0 = 0.1 < {3}.min = x_2 = 0.6 -> only {3}'s neighbors {2,4} informed
        let slot = s.meld(1, 3);
        assert_eq!(s.counters().informs - before, 2);
        assert_eq!(s.component_min(slot).unwrap().owner(), 0);
    }

    #[test]
    fn meld_with_equal_minima_informs_nobody() {
        // Both components have vertex 2 (smallest key) as their minimum.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::with_keys(&cg, raw(&[0.5, 0.6, 0.1, 0.7, 0.9]));
        for v in [1, 3] {
            let d = cg.pivot(v).unwrap();
            s.pivot_vertex(&d).unwrap();
        }
        let before = s.counters().informs;
        s.meld(1, 3);
        assert_eq!(s.counters().informs, before);
    }

    #[test]
    fn forced_equal_x_values_break_ties_by_owner() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let mut cg = ComponentGraph::new(&g);
        let mut s = SketchCopy::with_keys(&cg, vec![5, 5, 5, 5]);
        for v in [1, 2] {
            let d = cg.pivot(v).unwrap();
            s.pivot_vertex(&d).unwrap();
            assert!(s.matches_rebuild(&cg));
        }
        assert_eq!(s.query_min(3).unwrap().owner(), 0);
    }
}
