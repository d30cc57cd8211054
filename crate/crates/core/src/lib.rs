//! Rational normal matrix symbols and the quadrature domains they generate.

pub mod error;
pub mod hardy;
pub mod numkernel;
pub mod quaddom;
pub mod subnormal;
pub mod symbols;
pub mod winding;

pub use error::{Error, Result};

/// Deterministic property-test configuration.
#[cfg(test)]
pub(crate) fn prop_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        rng_seed: proptest::test_runner::RngSeed::Fixed(42),
        failure_persistence: None,
        ..proptest::test_runner::Config::default()
    }
}
