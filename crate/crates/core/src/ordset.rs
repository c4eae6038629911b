//! A sorted multiset stored as a list of bounded sorted blocks.
//!
//! Insert and remove cost `O(log n + B)`, select and rank cost
//! `O(n / B + log B)` with block size `B`.

const MAX_BLOCK: usize = 256;

#[derive(Clone, Debug)]
pub struct SortedBlocks<T> {
    blocks: Vec<Vec<T>>,
    len: usize,
}

impl<T> Default for SortedBlocks<T> {
    fn default() -> Self {
        SortedBlocks {
            blocks: Vec::new(),
            len: 0,
        }
    }
}

impl<T: Ord + Copy> SortedBlocks<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from an already sorted vector.
    pub fn from_sorted(v: Vec<T>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] <= w[1]));
        let len = v.len();
        if len <= MAX_BLOCK {
            let blocks = if v.is_empty() { Vec::new() } else { vec![v] };
            return SortedBlocks { blocks, len };
        }
        let blocks = v.chunks(MAX_BLOCK / 2).map(|c| c.to_vec()).collect();
        SortedBlocks { blocks, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn clear(&mut self) {
        self.blocks.clear();
        self.len = 0;
    }

    /// Insert `x`, after any equal elements.
    pub fn insert(&mut self, x: T) {
        self.len += 1;
        if self.blocks.is_empty() {
            self.blocks.push(vec![x]);
            return;
        }
        let last = self.blocks.len() - 1;
        let bi = self
            .blocks
            .partition_point(|b| *b.last().unwrap() <= x)
            .min(last);
        let block = &mut self.blocks[bi];
        let pos = block.partition_point(|e| *e <= x);
        block.insert(pos, x);
        if block.len() > MAX_BLOCK {
            let tail = block.split_off(block.len() / 2);
            self.blocks.insert(bi + 1, tail);
        }
    }

    /// Remove one occurrence of `x`. Returns whether it was present.
    pub fn remove(&mut self, x: &T) -> bool {
        let bi = self.blocks.partition_point(|b| b.last().unwrap() < x);
        let Some(block) = self.blocks.get_mut(bi) else {
            return false;
        };
        let pos = block.partition_point(|e| e < x);
        if pos == block.len() || block[pos] != *x {
            return false;
        }
        block.remove(pos);
        self.len -= 1;
        let blen = block.len();
        if blen == 0 {
            self.blocks.remove(bi);
        } else if blen < MAX_BLOCK / 8
            && bi + 1 < self.blocks.len()
            && blen + self.blocks[bi + 1].len() <= MAX_BLOCK
        {
            let next = self.blocks.remove(bi + 1);
            self.blocks[bi].extend(next);
        }
        true
    }

    pub fn contains(&self, x: &T) -> bool {
        let bi = self.blocks.partition_point(|b| b.last().unwrap() < x);
        match self.blocks.get(bi) {
            Some(block) => block.binary_search(x).is_ok(),
            None => false,
        }
    }

    pub fn first(&self) -> Option<T> {
        self.blocks.first().map(|b| b[0])
    }

    pub fn last(&self) -> Option<T> {
        self.blocks.last().map(|b| *b.last().unwrap())
    }

    /// The element at sorted position `i` (0-based).
    pub fn get(&self, mut i: usize) -> Option<T> {
        if i >= self.len {
            return None;
        }
        for b in &self.blocks {
            if i < b.len() {
                return Some(b[i]);
            }
            i -= b.len();
        }
        None
    }

    /// Number of elements strictly less than `x`.
    pub fn rank(&self, x: &T) -> usize {
        let bi = self.blocks.partition_point(|b| b.last().unwrap() < x);
        let before: usize = self.blocks[..bi].iter().map(Vec::len).sum();
        before
            + self
                .blocks
                .get(bi)
                .map_or(0, |b| b.partition_point(|e| e < x))
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.blocks.iter().flat_map(|b| b.iter().copied())
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.iter().collect()
    }
}

impl<T: Ord + Copy> PartialEq for SortedBlocks<T> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.iter().eq(other.iter())
    }
}

impl<T: Ord + Copy> Eq for SortedBlocks<T> {}

impl<T: Ord + Copy> FromIterator<T> for SortedBlocks<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut v: Vec<T> = iter.into_iter().collect();
        v.sort_unstable();
        Self::from_sorted(v)
    }
}
