/// Subsets of `{1..n}` such that every pair of elements (including an
/// element with itself) lies in a common subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSetSystem {
    pub n: usize,
    pub p: usize,
    /// Sorted, distinct, non-empty subsets of `1..=n`.
    pub sets: Vec<Vec<usize>>,
}

pub fn is_prime(x: usize) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Lay `1..=p²` out on a `p × p` array (`e ↦ ((e−1)/p, (e−1)%p)`) and take
/// all lines `y ≡ a·x + b (mod p)` plus all rows, restricted to `1..=n`.
/// Empty and repeated restrictions are dropped.
pub fn covering_set_system(n: usize) -> CoveringSetSystem {
    let mut p = ceil_sqrt(n.max(1));
    while !is_prime(p) {
        p += 1;
    }
    let elem = |x: usize, y: usize| x * p + y + 1;
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(p * p + p);
    for a in 0..p {
        for b in 0..p {
            sets.push(
                (0..p)
                    .map(|x| elem(x, (a * x + b) % p))
                    .filter(|&e| e <= n)
                    .collect(),
            );
        }
    }
    for a in 0..p {
        sets.push((0..p).map(|y| elem(a, y)).filter(|&e| e <= n).collect());
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    sets.retain(|s| !s.is_empty());
    sets.sort();
    sets.dedup();
    CoveringSetSystem { n, p, sets }
}

/// Outcome of [`CoveringSetSystem::check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCheck {
    pub k: usize,
    pub max_set_size: usize,
    pub all_pairs_covered: bool,
    /// `k ≤ 16·n`.
    pub count_ok: bool,
    /// Every set has at most `10·√n` elements.
    pub size_ok: bool,
}

impl CoverCheck {
    pub fn ok(&self) -> bool {
        self.all_pairs_covered && self.count_ok && self.size_ok
    }
}

impl CoveringSetSystem {
    /// Verify all pair coverage exhaustively with bitset rows.
    pub fn check(&self) -> CoverCheck {
        let n = self.n;
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        let mut mask = vec![0u64; words];
        for s in &self.sets {
            mask.iter_mut().for_each(|w| *w = 0);
            for &e in s {
                mask[(e - 1) / 64] |= 1 << ((e - 1) % 64);
            }
            for &e in s {
                let row = &mut rows[(e - 1) * words..e * words];
                row.iter_mut().zip(&mask).for_each(|(r, m)| *r |= m);
            }
        }
        let full = |i: usize, w: u64| {
            let bits = (n - i * 64).min(64);
            w == if bits == 64 {
                u64::MAX
            } else {
                (1u64 << bits) - 1
            }
        };
        let all_pairs_covered = rows
            .chunks(words)
            .all(|row| row.iter().enumerate().all(|(i, &w)| full(i, w)));
        let max_set_size = self.sets.iter().map(Vec::len).max().unwrap_or(0);
        CoverCheck {
            k: self.sets.len(),
            max_set_size,
            all_pairs_covered,
            count_ok: self.sets.len() <= 16 * n,
            size_ok: max_set_size as f64 <= 10.0 * (n as f64).sqrt(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let c = covering_set_system(1);
        assert_eq!(c.sets, vec![vec![1]]);
        let c = covering_set_system(9);
        assert_eq!(c.p, 3);
        let chk = c.check();
        assert_eq!((chk.k, chk.max_set_size), (12, 3));
        assert!(chk.ok());
    }

    #[test]
    fn detects_missing_pair() {
        let bad = CoveringSetSystem {
            n: 3,
            p: 2,
            sets: vec![vec![1, 2], vec![3]],
        };
        assert!(!bad.check().all_pairs_covered);
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..30).filter(|&x| is_prime(x)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
