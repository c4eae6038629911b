/// Work counters reported alongside an ordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Audit {
    /// Fill-heap entries rewritten by component-minimum propagation.
    pub informs: u64,
    /// Calls into the implicit-matrix oracles.
    pub oracle_calls: u64,
    /// Sketch copies alive at the end of the run.
    pub copies: u64,
}

/// An elimination ordering plus per-step diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct OrderingResult {
    /// `order[t]` is the vertex pivoted at step `t`.
    pub order: Vec<usize>,
    /// Fill degree reported by the algorithm when each pivot was chosen.
    pub degrees: Vec<usize>,
    /// Cap in force at each step (output-sensitive runs only).
    pub caps: Vec<usize>,
    pub seed: Option<u64>,
    pub audit: Audit,
}
