//! Matrix parameters of subnormal Toeplitz operators with rational analytic
//! symbols: coprime factorization, model-space bases, `(C, Λ)` and the
//! discriminant curve.

pub mod factor;
pub mod model;
pub mod params;
pub mod quadrature;

pub use factor::{coprime_factorize, CoprimeFactorization, FactorizationCheck};
pub use model::{model_basis, ModelFunction};
pub use params::{
    area_from_c, discriminant_from, discriminant_poly, matrix_parameters, parameters_in_bases, DiscriminantCurve,
    SubnormalParams,
};
pub use quadrature::{CircleQuad, QUAD_POINTS};
