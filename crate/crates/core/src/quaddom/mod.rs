//! Quadrature domains generated by the paper's example symbols: nodes and
//! weights, quadrature identities, boundary branches, univalence and
//! defining equations.

pub mod ahlfors;
pub mod defining;
pub mod example1;
pub mod example2;
pub mod example3;
pub mod integrate;

pub use example1::{
    example1_build, schwartz_nodes_weights, verify_quadrature_identity, Example1Scenario, NodeWeightSet,
    QuadratureResidual, TestFunction,
};
pub use example2::{
    example2_build, trace_z_branches, univalence_check, Example2Params, Example2Scenario, UnivalenceReport, ZBranches,
};
pub use defining::{defining_equation, CurveScenario, DefiningEquation};
pub use ahlfors::{ahlfors_curve_sample, AhlforsPoint};
pub use example3::{example3_build, example3_two_component_variant, example3_with};
