//! Polynomial and rational-function arithmetic, root finding, resultants
//! and bivariate interpolation.

pub mod bivar;
pub mod field;
pub mod linalg;
pub mod poly;
pub mod ratfun;
pub mod resultant;
pub mod roots;

pub use bivar::{bivar_fit, bivar_interpolate_exact, BivarPoly, FitOptions, FitReport};
pub use field::{Backend, GaussRat, Ring, Scalar};
pub use linalg::{CMat, CVec};
pub use poly::{CPoly, Poly};
pub use ratfun::{CRatFun, RatFun};
pub use resultant::{resultant, resultant_scalar, ResultantOutput};
pub use roots::{poly_roots, Root};
