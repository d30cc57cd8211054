//! Boundary curves of matrix symbols and the winding-number criterion.

pub mod domain;
pub mod grid;
pub mod hungarian;
pub mod trace;

pub use domain::{
    membership, verify_generates_domain, verify_with_trace, winding_number, DomainConditions, DomainReport,
    Membership, WindingContext,
};
pub use grid::{Grid, GridSpec};
pub use trace::{trace_branches, trace_with, CurveTrace, TraceOptions};
