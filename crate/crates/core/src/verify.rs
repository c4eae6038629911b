//! Check an ordering against the `(1+ε)`-approximate greedy condition.

use crate::bruteforce::EliminationGraph;
use crate::error::Result;
use crate::graph::Graph;
use crate::io::check_permutation;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    /// Largest `degree / minimum` over steps (`0/0` counts as 1; a positive
    /// degree against a zero minimum is infinite).
    pub max_ratio: f64,
    /// Steps whose pivot degree exceeds `(1+ε)` times the minimum.
    pub violating_steps: usize,
    /// `(pivot fill degree, minimum fill degree)` per step.
    pub steps: Vec<(usize, usize)>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violating_steps == 0
    }
}

pub fn verify_ordering(g: &Graph, perm: &[usize], eps: f64) -> Result<VerifyReport> {
    check_permutation(perm, g.n())?;
    let mut eg = EliminationGraph::new(g);
    let mut report = VerifyReport {
        max_ratio: 1.0,
        violating_steps: 0,
        steps: Vec::with_capacity(g.n()),
    };
    for &v in perm {
        let (min, _) = eg.min_degree_vertex().expect("vertices remain");
        let d = eg.degree(v);
        let ratio = match (d, min) {
            (0, _) => 1.0,
            (_, 0) => f64::INFINITY,
            _ => d as f64 / min as f64,
        };
        report.max_ratio = report.max_ratio.max(ratio);
        if d as f64 > (1.0 + eps) * min as f64 {
            report.violating_steps += 1;
        }
        report.steps.push((d, min));
        eg.eliminate(v);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bruteforce::mindeg_ordering_bruteforce;
    use crate::instances::{generate, Family};

    #[test]
    fn bruteforce_ordering_has_no_violations() {
        let g = generate(Family::Grid(5), 0).unwrap();
        let r = verify_ordering(&g, &mindeg_ordering_bruteforce(&g).order, 0.0).unwrap();
        assert!(r.ok());
        assert_eq!(r.max_ratio, 1.0);
    }

    #[test]
    fn star_center_first_violates() {
        let g = generate(Family::Star(6), 0).unwrap();
        let r = verify_ordering(&g, &(0..6).collect::<Vec<_>>(), 0.5).unwrap();
        assert!(r.ok());
        let perm: Vec<usize> = (0..6).rev().collect();
        let r = verify_ordering(&g, &perm, 0.5).unwrap();
        assert!(r.violating_steps > 0);
        assert_eq!(r.max_ratio, 5.0);
    }
}
