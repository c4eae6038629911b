//! The component (quotient) graph: every connected set of eliminated
//! vertices is contracted into one component node. Edges only join
//! remaining vertices to each other or to components, never two components.
//!
//! A component is named by one of its member vertices (its union-find root).

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ordset::SortedBlocks;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexState {
    Remaining,
    Eliminated,
}

/// A node of the component graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Remaining(usize),
    /// Any eliminated vertex; resolved to its component.
    Component(usize),
}

/// What a pivot touched, in the order a sketch replay needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotDelta {
    pub vertex: usize,
    /// Remaining neighbors of the pivot, ascending.
    pub remaining_neighbors: Vec<usize>,
    /// Adjacent components before the pivot, ascending.
    pub component_neighbors: Vec<usize>,
    /// Name of the component that now contains the pivot.
    pub component: usize,
}

/// Order-independent snapshot used to compare states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalState {
    /// Component member set -> its remaining neighbors.
    pub components: BTreeMap<Vec<usize>, Vec<usize>>,
    /// Remaining vertex -> (remaining neighbors, member sets of adjacent components).
    pub remaining: BTreeMap<usize, (Vec<usize>, Vec<Vec<usize>>)>,
}

#[derive(Debug)]
pub struct ComponentGraph {
    state: Vec<VertexState>,
    // Union-find parents. Compression during reads is benign under races.
    parent: Vec<AtomicUsize>,
    remaining: SortedBlocks<usize>,
    components: SortedBlocks<usize>,
    comp_remaining: Vec<SortedBlocks<usize>>,
    nbr_remaining: Vec<SortedBlocks<usize>>,
    nbr_component: Vec<SortedBlocks<usize>>,
    meld_moves: u64,
}

impl Clone for ComponentGraph {
    fn clone(&self) -> Self {
        ComponentGraph {
            state: self.state.clone(),
            parent: self
                .parent
                .iter()
                .map(|p| AtomicUsize::new(p.load(Relaxed)))
                .collect(),
            remaining: self.remaining.clone(),
            components: self.components.clone(),
            comp_remaining: self.comp_remaining.clone(),
            nbr_remaining: self.nbr_remaining.clone(),
            nbr_component: self.nbr_component.clone(),
            meld_moves: self.meld_moves,
        }
    }
}

impl ComponentGraph {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        ComponentGraph {
            state: vec![VertexState::Remaining; n],
            parent: (0..n).map(AtomicUsize::new).collect(),
            remaining: SortedBlocks::from_sorted((0..n).collect()),
            components: SortedBlocks::new(),
            comp_remaining: vec![SortedBlocks::new(); n],
            nbr_remaining: (0..n)
                .map(|v| SortedBlocks::from_sorted(g.neighbors(v).to_vec()))
                .collect(),
            nbr_component: vec![SortedBlocks::new(); n],
            meld_moves: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.state.len()
    }

    pub fn num_remaining(&self) -> usize {
        self.remaining.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Elements moved by small-to-large set merges so far.
    pub fn meld_moves(&self) -> u64 {
        self.meld_moves
    }

    pub fn state_of(&self, v: usize) -> Result<VertexState> {
        self.state
            .get(v)
            .copied()
            .ok_or(Error::VertexOutOfRange { id: v, n: self.n() })
    }

    pub fn is_remaining(&self, v: usize) -> bool {
        self.state.get(v) == Some(&VertexState::Remaining)
    }

    /// Remaining vertices, ascending.
    pub fn remaining_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.remaining.iter()
    }

    /// Live component names, ascending.
    pub fn component_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.components.iter()
    }

    fn find(&self, mut x: usize) -> usize {
        loop {
            let p = self.parent[x].load(Relaxed);
            if p == x {
                return x;
            }
            let gp = self.parent[p].load(Relaxed);
            self.parent[x].store(gp, Relaxed);
            x = gp;
        }
    }

    /// The component containing eliminated vertex `v`.
    pub fn component_of(&self, v: usize) -> Result<usize> {
        match self.state_of(v)? {
            VertexState::Eliminated => Ok(self.find(v)),
            VertexState::Remaining => Err(Error::NotComponent(v)),
        }
    }

    fn check_remaining(&self, u: usize) -> Result<()> {
        match self.state_of(u)? {
            VertexState::Remaining => Ok(()),
            VertexState::Eliminated => Err(Error::NotRemaining(u)),
        }
    }

    pub(crate) fn remaining_set(&self, x: Node) -> Result<&SortedBlocks<usize>> {
        match x {
            Node::Remaining(u) => {
                self.check_remaining(u)?;
                Ok(&self.nbr_remaining[u])
            }
            Node::Component(c) => Ok(&self.comp_remaining[self.component_of(c)?]),
        }
    }

    pub fn d_remain(&self, x: Node) -> Result<usize> {
        Ok(self.remaining_set(x)?.len())
    }

    pub fn d_component(&self, u: usize) -> Result<usize> {
        self.check_remaining(u)?;
        Ok(self.nbr_component[u].len())
    }

    /// Remaining neighbors of a node, ascending.
    pub fn remaining_neighbors(&self, x: Node) -> Result<Vec<usize>> {
        Ok(self.remaining_set(x)?.to_vec())
    }

    /// Adjacent components of a remaining vertex, ascending.
    pub fn component_neighbors(&self, u: usize) -> Result<Vec<usize>> {
        self.check_remaining(u)?;
        Ok(self.nbr_component[u].to_vec())
    }

    pub fn sample_remaining_neighbor<R: Rng + ?Sized>(
        &self,
        x: Node,
        rng: &mut R,
    ) -> Result<usize> {
        let set = self.remaining_set(x)?;
        if set.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(set.get(rng.random_range(0..set.len())).unwrap())
    }

    /// A uniformly random live component.
    pub fn sample_component_vertex<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        if self.components.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(self
            .components
            .get(rng.random_range(0..self.components.len()))
            .unwrap())
    }

    pub fn has_edge_component_remaining(&self, c: usize, u: usize) -> Result<bool> {
        self.check_remaining(u)?;
        let c = self.component_of(c)?;
        Ok(self.comp_remaining[c].contains(&u))
    }

    pub fn has_edge_remaining(&self, u: usize, v: usize) -> Result<bool> {
        self.check_remaining(u)?;
        self.check_remaining(v)?;
        Ok(self.nbr_remaining[u].contains(&v))
    }

    /// Exact fill neighbors of `u` (excluding `u`), ascending.
    pub fn fill_neighbors(&self, u: usize) -> Result<Vec<usize>> {
        self.check_remaining(u)?;
        let mut out: Vec<usize> = self.nbr_remaining[u].to_vec();
        for c in self.nbr_component[u].iter() {
            out.extend(self.comp_remaining[c].iter().filter(|&v| v != u));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn fill_degree(&self, u: usize) -> Result<usize> {
        Ok(self.fill_neighbors(u)?.len())
    }

    /// Eliminate `u`, melding it with every adjacent component.
    pub fn pivot(&mut self, u: usize) -> Result<PivotDelta> {
        self.check_remaining(u)?;
        let rem = std::mem::take(&mut self.nbr_remaining[u]).to_vec();
        let comps = std::mem::take(&mut self.nbr_component[u]).to_vec();
        self.state[u] = VertexState::Eliminated;
        self.remaining.remove(&u);

        for &v in &rem {
            self.nbr_remaining[v].remove(&u);
            self.nbr_component[v].insert(u);
        }
        self.comp_remaining[u] = SortedBlocks::from_sorted(rem.clone());
        self.components.insert(u);

        let mut cur = u;
        for &w in &comps {
            let removed = self.comp_remaining[w].remove(&u);
            debug_assert!(removed);
            cur = self.merge(cur, w);
        }
        debug_assert!(self.check_local(cur).is_ok(), "{:?}", self.check_local(cur));
        Ok(PivotDelta {
            vertex: u,
            remaining_neighbors: rem,
            component_neighbors: comps,
            component: cur,
        })
    }

    /// Merge two live components small-to-large; returns the survivor.
    fn merge(&mut self, a: usize, b: usize) -> usize {
        let (small, large) = if self.comp_remaining[a].len() < self.comp_remaining[b].len() {
            (a, b)
        } else {
            (b, a)
        };
        let moved = std::mem::take(&mut self.comp_remaining[small]);
        self.meld_moves += moved.len() as u64;
        for v in moved.iter() {
            let nc = &mut self.nbr_component[v];
            nc.remove(&small);
            if !self.comp_remaining[large].contains(&v) {
                self.comp_remaining[large].insert(v);
                nc.insert(large);
            }
        }
        self.parent[small].store(large, Relaxed);
        self.components.remove(&small);
        large
    }

    /// Check adjacency symmetry around component `c`.
    fn check_local(&self, c: usize) -> std::result::Result<(), String> {
        for v in self.comp_remaining[c].iter() {
            if !self.is_remaining(v) {
                return Err(format!("component {c} lists eliminated vertex {v}"));
            }
            if !self.nbr_component[v].contains(&c) {
                return Err(format!("vertex {v} does not list component {c}"));
            }
            if let Some(d) = self.nbr_component[v]
                .iter()
                .find(|&d| !self.components.contains(&d))
            {
                return Err(format!("vertex {v} lists dead component {d}"));
            }
        }
        Ok(())
    }

    /// Full structural check of the quasi-bipartite representation.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for u in 0..self.n() {
            if self.is_remaining(u) {
                for v in self.nbr_remaining[u].iter() {
                    if !self.is_remaining(v) || !self.nbr_remaining[v].contains(&u) {
                        return Err(format!("remaining edge {u}-{v} is inconsistent"));
                    }
                }
                for c in self.nbr_component[u].iter() {
                    if !self.components.contains(&c) || !self.comp_remaining[c].contains(&u) {
                        return Err(format!("component edge {c}-{u} is inconsistent"));
                    }
                }
            } else if self.nbr_remaining[u].len() + self.nbr_component[u].len() > 0 {
                return Err(format!("eliminated vertex {u} keeps adjacency"));
            }
        }
        for c in self.components.iter() {
            if self.find(c) != c || self.is_remaining(c) {
                return Err(format!("component name {c} is not a root"));
            }
            self.check_local(c)?;
        }
        Ok(())
    }

    pub fn canonical_form(&self) -> CanonicalState {
        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in (0..self.n()).filter(|&v| !self.is_remaining(v)) {
            members.entry(self.find(v)).or_default().push(v);
        }
        let components = members
            .iter()
            .map(|(c, m)| (m.clone(), self.comp_remaining[*c].to_vec()))
            .collect();
        let remaining = self
            .remaining
            .iter()
            .map(|u| {
                let mut cs: Vec<Vec<usize>> = self.nbr_component[u]
                    .iter()
                    .map(|c| members[&c].clone())
                    .collect();
                cs.sort();
                (u, (self.nbr_remaining[u].to_vec(), cs))
            })
            .collect();
        CanonicalState {
            components,
            remaining,
        }
    }

    /// Mask of eliminated vertices.
    pub fn eliminated_mask(&self) -> Vec<bool> {
        self.state
            .iter()
            .map(|s| *s == VertexState::Eliminated)
            .collect()
    }
}
