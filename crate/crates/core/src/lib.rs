//! Greedy minimum-degree elimination orderings.
//!
//! * [`bruteforce`]: explicit reference orderings and fill simulators.
//! * [`component`]: the component graph maintained under pivots.
//! * [`instances`]: graph families, covering systems and reduction instances.
//! * [`sketch`]: dynamic ℓ0-sketch copies replaying pivots.
//! * [`approx`]: bucketed approximate degrees from rank-quantile sketches.
//! * [`decorrelate`]: decayed-minimum candidates and the approximate ordering.
//! * [`estimator`]: sampling estimators for non-zero columns and fill degree.
//! * [`exact`]: exact Δ-capped and output-sensitive orderings from sketches.

// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
mod bank;
pub mod bruteforce;
pub mod component;
pub mod decorrelate;
pub mod error;
pub mod estimator;
pub mod exact;
pub mod graph;
pub mod instances;
pub mod io;
pub mod ordering;
pub mod ordset;
pub mod rng;
pub mod sketch;
pub mod verify;

pub use approx::{ApproxDegreeDs, BucketReport};
pub use component::{ComponentGraph, Node, PivotDelta, VertexState};
pub use error::{Error, Result};
pub use graph::Graph;
pub use ordering::{Audit, OrderingResult};
pub use sketch::{SketchCopy, SketchKey};
pub use verify::{verify_ordering, VerifyReport};
