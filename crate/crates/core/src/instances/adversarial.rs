use rand::seq::index::sample;

use crate::error::{invalid, Result};
use crate::rng::{purpose, stream};

/// Outcome of [`adversarial_correlation_demo`].
#[derive(Clone, Debug, PartialEq)]
pub struct DemoReport {
    pub n: usize,
    pub key_set_size: usize,
    /// Size of the second set after the adaptive loop.
    pub final_set_size: usize,
    /// The structure's size estimate for that set after the loop.
    pub adaptive_estimate: f64,
    /// Largest additive error of the estimate over an oblivious run with
    /// the same number of deletions.
    pub oblivious_max_error: f64,
}

/// A set-size structure that tracks `|S ∩ K|` for a random key set `K` and
/// reports `|S ∩ K|·n/|K|`. Two copies of `{1..n}` start equal. The
/// adaptive loop deletes each element of the second set and reinserts it
/// if the structure then reports the second set as the smaller one (ties go
/// to the first set). That reveals `K`, and the second set shrinks to `K`
/// while its estimate stays at `n`.
pub fn adversarial_correlation_demo(n: usize, eps: f64, seed: u64) -> Result<DemoReport> {
    if n < 2 {
        return Err(invalid("need at least two elements"));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    let ksize = (((n as f64).ln() / (eps * eps)).ceil() as usize).clamp(1, n);
    let mut rng = stream(seed, &[purpose::DEMO]);
    let mut in_key = vec![false; n];
    for i in sample(&mut rng, n, ksize) {
        in_key[i] = true;
    }
    let scale = n as f64 / ksize as f64;

    // Adaptive loop over the second set.
    let (k1, mut k2) = (ksize, ksize);
    let mut s2 = n;
    let mut deletions = 0usize;
    for &hit in &in_key {
        s2 -= 1;
        if hit {
            k2 -= 1;
        }
        if k2 < k1 {
            s2 += 1;
            if hit {
                k2 += 1;
            }
        } else {
            deletions += 1;
        }
    }

    // Oblivious control: the same number of deletions in an order fixed
    // before the key set is consulted.
    let order = sample(&mut rng, n, deletions).into_vec();
    let mut true_size = n;
    let mut hits = ksize;
    let mut worst = 0.0f64;
    for x in order {
        true_size -= 1;
        if in_key[x] {
            hits -= 1;
        }
        worst = worst.max((hits as f64 * scale - true_size as f64).abs());
    }
    Ok(DemoReport {
        n,
        key_set_size: ksize,
        final_set_size: s2,
        adaptive_estimate: k2 as f64 * scale,
        oblivious_max_error: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adaptive_loop_recovers_the_key_set() {
        let r = adversarial_correlation_demo(2000, 0.2, 1).unwrap();
        assert_eq!(r.final_set_size, r.key_set_size);
        assert_eq!(r.adaptive_estimate, 2000.0);
    }

    #[test]
    fn huge_tolerance_still_recovers_key_set() {
        let r = adversarial_correlation_demo(500, 1.0, 2).unwrap();
        assert_eq!(r.key_set_size, 7);
        assert_eq!(r.final_set_size, r.key_set_size);
    }
}
