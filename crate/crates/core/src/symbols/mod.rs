//! Rational matrix symbols: Blaschke–Potapov products, compositions
//! `ψ(t, B(t))`, classification and Fourier coefficients.

pub mod blaschke;
pub mod classify;
pub mod fourier;
pub mod json;
pub mod polymat;
pub mod symbol;

pub use blaschke::{bp_build, BlaschkeFactorSpec, BlaschkePotapov};
pub use classify::{classify_in_place, classify_symbol, classify_with, Classification, ClassifyOptions};
pub use fourier::{fourier_coeffs, FourierCoeffs};
pub use json::SymbolSpec;
pub use symbol::{compose_psi, Flag, MatrixSymbol, ScalarBivarRational, SymbolFlags};
