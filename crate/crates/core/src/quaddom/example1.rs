//! The scalar family `F(t) = t + β/(t - a)`, `|a| > 1`: boundary
//! univalence, Schwarz-function nodes and weights, and the quadrature
//! identity checked by grid integration.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use super::integrate::{is_simple_polygon, polygon_distance, polygon_winding, region_integral};
use crate::error::{Error, Result};
use crate::numkernel::{CPoly, CRatFun};
use crate::symbols::{classify_in_place, Classification, MatrixSymbol};
use crate::winding::GridSpec;

/// Boundary samples used for univalence and the integration polygon.
pub const BOUNDARY_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryUnivalence {
    pub univalent: bool,
    /// The boundary curve has no self-intersections.
    pub simple_boundary: bool,
    /// The boundary is traversed counterclockwise.
    pub positively_oriented: bool,
    /// `arg(F(e^{iθ}) - F(0))` strictly increases (star-shaped image).
    pub star_shaped: bool,
    pub min_arg_step: f64,
}

#[derive(Debug, Clone)]
pub struct Example1Scenario {
    pub a: Complex64,
    pub beta: Complex64,
    pub f: MatrixSymbol,
    /// `t ↦ conj F(1/conj t) = 1/t + β̄t/(1 - āt)`.
    pub fstar: CRatFun,
    pub classification: Classification,
    pub univalence: BoundaryUnivalence,
}

pub fn example1_build(a: Complex64, beta: Complex64) -> Result<Example1Scenario> {
    if !(a.norm() > 1.0) {
        return Err(Error::PreconditionViolation(format!("|a| = {} must exceed 1", a.norm())));
    }
    if beta == Complex64::new(0.0, 0.0) {
        return Err(Error::PreconditionViolation("beta must be nonzero".into()));
    }
    let one = Complex64::new(1.0, 0.0);
    // (t² - a t + β)/(t - a)
    let entry = CRatFun::new_unreduced(CPoly::new(vec![beta, -a, one]), CPoly::new(vec![-a, one]))?;
    let mut f = MatrixSymbol::scalar(entry);
    // (1 - āt + β̄t²)/(t - āt²)
    let fstar = CRatFun::new_unreduced(
        CPoly::new(vec![one, -a.conj(), beta.conj()]),
        CPoly::new(vec![Complex64::new(0.0, 0.0), one, -a.conj()]),
    )?;
    let classification = classify_in_place(&mut f);
    let boundary = boundary_polygon(&f, BOUNDARY_SAMPLES);
    let univalence = boundary_univalence(&boundary, f.eval(Complex64::new(0.0, 0.0))[(0, 0)]);
    Ok(Example1Scenario { a, beta, f, fstar, classification, univalence })
}

/// `F(e^{2πik/n})`, closed (the last point repeats the first).
pub fn boundary_polygon(f: &MatrixSymbol, n: usize) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> =
        (0..n).map(|k| f.eval(Complex64::from_polar(1.0, TAU * k as f64 / n as f64))[(0, 0)]).collect();
    pts.push(pts[0]);
    pts
}

/// A function analytic on the closed disc is univalent there when its
/// boundary curve is a positively oriented Jordan curve.
fn boundary_univalence(poly: &[Complex64], center: Complex64) -> BoundaryUnivalence {
    let simple_boundary = is_simple_polygon(poly);
    let area: f64 = 0.5 * poly.windows(2).map(|w| w[0].re * w[1].im - w[1].re * w[0].im).sum::<f64>();
    let min_arg_step = poly
        .windows(2)
        .map(|w| ((w[1] - center) / (w[0] - center)).arg())
        .fold(f64::INFINITY, f64::min);
    BoundaryUnivalence {
        univalent: simple_boundary && area > 0.0,
        simple_boundary,
        positively_oriented: area > 0.0,
        star_shaped: min_arg_step > 0.0,
        min_arg_step,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeWeightSet {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub orders: Vec<usize>,
}

impl NodeWeightSet {
    pub fn total_weight(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    /// `Σ c_k f(z_k)` (simple nodes).
    pub fn apply(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &c)| c * f(z)).sum()
    }

    pub fn to_json(&self) -> Value {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        json!({ "nodes": pairs(&self.nodes), "weights": pairs(&self.weights), "orders": self.orders })
    }
}

fn derivative(f: &CRatFun) -> Result<CRatFun> {
    let (n, d) = (f.num(), f.den());
    let num = &(&n.derivative() * d) - &(n * &d.derivative());
    CRatFun::new_unreduced(num, d * d)
}

/// `F_*(t) F'(t)`, whose residues at the disc poles of `F_*` are the
/// residues of the Schwarz function at the nodes.
fn schwarz_pullback(s: &Example1Scenario) -> Result<CRatFun> {
    Ok(s.fstar.mul(&derivative(s.f.entry(0, 0))?).reduce())
}

/// Nodes `F(0)`, `F(1/ā)` with weights `π Res_t[F_* F']`.
pub fn schwartz_nodes_weights(s: &Example1Scenario) -> Result<NodeWeightSet> {
    if !s.univalence.univalent {
        return Err(Error::PreconditionViolation("F is not univalent on the disc".into()));
    }
    let g = schwarz_pullback(s)?;
    let pf = g.partial_fractions();
    let ts = [Complex64::new(0.0, 0.0), 1.0 / s.a.conj()];
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for t in ts {
        let res = pf.residue_near(t).ok_or_else(|| Error::DegenerateInput("no pole near a node preimage".into()))?;
        nodes.push(s.f.eval(t)[(0, 0)]);
        weights.push(res * PI);
    }
    Ok(NodeWeightSet { nodes, weights, orders: vec![1; ts.len()] })
}

/// `(1/2πi) ∮ F_*(t) F'(t) dt` over the circle `|t - t_k| = radius`,
/// `n` trapezoidal points: the contour-integral oracle for the weights.
pub fn contour_residue(s: &Example1Scenario, center: Complex64, radius: f64, n: usize) -> Result<Complex64> {
    let g = schwarz_pullback(s)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let e = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let t = center + e * radius;
        // dt = i r e dθ
        acc += g.eval(&t) * e * radius;
    }
    Ok(acc / n as f64)
}

/// Analytic test functions for the quadrature identity.
#[derive(Debug, Clone)]
pub enum TestFunction {
    Polynomial(CPoly),
    Rational(CRatFun),
}

impl TestFunction {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            TestFunction::Polynomial(p) => p.eval(&z),
            TestFunction::Rational(r) => r.eval(&z),
        }
    }

    fn poles(&self) -> Vec<Complex64> {
        match self {
            TestFunction::Polynomial(_) => Vec::new(),
            TestFunction::Rational(r) => r.poles().into_iter().map(|p| p.value).collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Polynomial(p) => format!("poly{:?}", p.coeffs().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()),
            TestFunction::Rational(r) => format!(
                "rational(poles {:?})",
                r.poles().iter().map(|p| [p.value.re, p.value.im]).collect::<Vec<_>>()
            ),
        }
    }

    /// `1, z, z²` and `1/(z - 5)`.
    pub fn standard_set() -> Vec<TestFunction> {
        let one = Complex64::new(1.0, 0.0);
        vec![
            TestFunction::Polynomial(CPoly::one()),
            TestFunction::Polynomial(CPoly::x()),
            TestFunction::Polynomial(CPoly::monomial(one, 2)),
            TestFunction::Rational(
                CRatFun::new_unreduced(CPoly::one(), CPoly::new(vec![Complex64::new(-5.0, 0.0), one])).expect("nonzero"),
            ),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QuadratureResidual {
    pub label: String,
    /// Richardson-extrapolated area integral.
    pub integral: Complex64,
    /// Plain midpoint values on the fine and coarse grids.
    pub fine: Complex64,
    pub coarse: Complex64,
    pub quadrature_sum: Complex64,
    pub residual: f64,
}

/// Compares `∬_Ω f dA` with `Σ c_k f(z_k)`. The integral uses the grid
/// `grid` and one of half the resolution, combined by Richardson
/// extrapolation for a second-order rule.
pub fn verify_quadrature_identity(
    s: &Example1Scenario,
    fs: &[TestFunction],
    grid: GridSpec,
) -> Result<Vec<QuadratureResidual>> {
    let nw = schwartz_nodes_weights(s)?;
    let polys = vec![boundary_polygon(&s.f, BOUNDARY_SAMPLES)];
    let scale = polys[0].iter().map(|z| z.norm()).fold(1.0, f64::max);
    for f in fs {
        for p in f.poles() {
            if polygon_distance(&polys, p) <= 1e-9 * scale || polygon_winding(&polys, p) != 0 {
                return Err(Error::InvalidTestFunction(format!("{} has a pole at {p} in the closed domain", f.label())));
            }
        }
    }
    let coarse_spec = GridSpec { width: (grid.width / 2).max(2), height: (grid.height / 2).max(2) };
    Ok(fs
        .iter()
        .map(|f| {
            let eval = |z: Complex64| f.eval(z);
            let fine = region_integral(&polys, grid, &eval);
            let coarse = region_integral(&polys, coarse_spec, &eval);
            let integral = fine + (fine - coarse) / 3.0;
            let quadrature_sum = nw.apply(|z| f.eval(z));
            QuadratureResidual {
                label: f.label(),
                integral,
                fine,
                coarse,
                quadrature_sum,
                residual: (integral - quadrature_sum).norm() / (1.0 + integral.norm()),
            }
        })
        .collect())
}

/// Area of `F(𝔻)` by grid measure (winding-one cells, boundary supersampled).
pub fn grid_area(s: &Example1Scenario, grid: GridSpec) -> f64 {
    let polys = vec![boundary_polygon(&s.f, BOUNDARY_SAMPLES)];
    region_integral(&polys, grid, &|_| Complex64::new(1.0, 0.0)).re
}
