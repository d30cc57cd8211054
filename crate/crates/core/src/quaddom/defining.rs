//! Defining equations `Q(z, w) = Res_t(X_z, Y_w)` of the boundary curves:
//! `X_z(t) = 0` relates `t` and `z`, `Y_w(t) = 0` relates `t` and `w`, and
//! the resultant eliminates `t`.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::example1::Example1Scenario;
use super::example2::{CurvePolys, Example2Scenario};
use crate::error::{Error, Result};
use crate::numkernel::bivar::FitOptions;
use crate::numkernel::field::format_rational;
use crate::numkernel::resultant::{sylvester, ResultantScalar};
use crate::numkernel::{bivar_fit, bivar_interpolate_exact, poly_roots, Backend, BivarPoly, GaussRat, Poly, Scalar};

/// Relative validation residual above which the degree bounds are too small.
pub const DEGREE_TOL: f64 = 1e-8;

/// Common-root test for spurious factors, relative to coefficient size.
const CONTENT_TOL: f64 = 1e-8;

/// `x[j]` is the coefficient of `t^j` in `X_z`, a polynomial in `z`;
/// likewise `y` for `Y_w` in `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relations<T: Scalar> {
    pub x: Vec<Poly<T>>,
    pub y: Vec<Poly<T>>,
}

impl<T: Scalar + ResultantScalar> Relations<T> {
    /// `Res_t(X_z, Y_w)` at one point, with the nominal `t`-degrees.
    pub fn resultant_at(&self, z: &T, w: &T) -> T {
        let xs: Vec<T> = self.x.iter().map(|p| p.eval(z)).collect();
        let ys: Vec<T> = self.y.iter().map(|p| p.eval(w)).collect();
        T::det_scalar(sylvester(&xs, &ys))
    }

    /// Degree bounds of the resultant in `z` and `w`.
    pub fn degree_bounds(&self) -> (usize, usize) {
        let dz = self.x.iter().filter_map(Poly::degree).max().unwrap_or(0);
        let dw = self.y.iter().filter_map(Poly::degree).max().unwrap_or(0);
        ((self.y.len() - 1) * dz, (self.x.len() - 1) * dw)
    }
}

/// `z = F(t)`: `t² - (a + z)t + (β + az) = 0`; `w = F_*(t)`:
/// `(β̄ + āw)t² - (ā + w)t + 1 = 0`.
pub fn example1_relations<T: Scalar>(a: &T, beta: &T) -> Relations<T> {
    let one = T::one();
    let zero = T::zero();
    let (ab, bb) = (a.conj(), beta.conj());
    Relations {
        x: vec![
            Poly::new(vec![beta.clone(), a.clone()]),
            Poly::new(vec![-a.clone(), -one.clone()]),
            Poly::new(vec![one.clone(), zero.clone()]),
        ],
        y: vec![Poly::new(vec![one.clone(), zero]), Poly::new(vec![-ab.clone(), -one]), Poly::new(vec![bb, ab])],
    }
}

/// From `σ(z - 1) = L(t - γ₁)(z + 1)` and `σ² = D`:
/// `X_z = L²(t - γ₁)²(z + 1)² - D(t)(z - 1)²`. The involution
/// `(t, η) ↦ (1/t̄, 1/η̄)` and `conj D(1/t̄) = t⁻⁴D(t)` give
/// `Y_w = L̄²t²(1 - γ̄₁t)²(w + 1)² - D(t)(w - 1)²`.
pub fn example2_relations<T: Scalar>(polys: &CurvePolys<T>, l: &T, gamma1: &T) -> Relations<T> {
    let (one, two) = (T::one(), T::from_i64(2));
    let plus2 = Poly::new(vec![one.clone(), two.clone(), one.clone()]);
    let minus2 = Poly::new(vec![one.clone(), -two, one.clone()]);
    let lin = Poly::new(vec![-l.clone() * gamma1.clone(), l.clone()]);
    let lb = l.conj();
    let lin_r = Poly::new(vec![T::zero(), lb.clone(), -lb * gamma1.conj()]);
    let sq = &lin * &lin;
    let sq_r = &lin_r * &lin_r;
    let build = |a: &Poly<T>| -> Vec<Poly<T>> {
        (0..=4).map(|j| &plus2.scale(&a.coeff(j)) - &minus2.scale(&polys.d.coeff(j))).collect()
    };
    Relations { x: build(&sq), y: build(&sq_r) }
}

/// Borrowed scenario for [`defining_equation`].
#[derive(Debug, Clone, Copy)]
pub enum CurveScenario<'a> {
    Example1(&'a Example1Scenario),
    Example2(&'a Example2Scenario),
}

impl CurveScenario<'_> {
    pub fn relations(&self) -> Relations<Complex64> {
        match self {
            CurveScenario::Example1(s) => example1_relations(&s.a, &s.beta),
            CurveScenario::Example2(s) => example2_relations(&s.polys, &s.l, &s.gamma1),
        }
    }

    /// Exact relations. Example 2's `γ₁` is irrational and enters through
    /// the exact binary value of its floating approximation.
    pub fn relations_exact(&self) -> Relations<GaussRat> {
        match self {
            CurveScenario::Example1(s) => {
                example1_relations(&GaussRat::from_c64(s.a), &GaussRat::from_c64(s.beta))
            }
            CurveScenario::Example2(s) => {
                example2_relations(&s.exact_polys, &s.params.l, &GaussRat::from_c64(s.gamma1))
            }
        }
    }

    pub fn default_degrees(&self) -> (usize, usize) {
        self.relations().degree_bounds()
    }

    /// Points `(z, w)` of the curve computed without the relations: `n`
    /// boundary points (where `w = z̄`) and `n` interior points, offset from
    /// any grid the construction uses.
    pub fn curve_samples(&self, n: usize) -> Result<Vec<(Complex64, Complex64)>> {
        let ts = |r: f64, off: f64| {
            (0..n).map(move |k| Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + off) / n as f64))
        };
        let mut out = Vec::with_capacity(2 * n);
        match self {
            CurveScenario::Example1(s) => {
                for t in ts(1.0, 0.5).chain(ts(0.6, 0.25)) {
                    out.push((s.f.eval(t)[(0, 0)], s.fstar.eval(&t)));
                }
            }
            CurveScenario::Example2(s) => {
                for (k, t) in ts(1.0, 0.5).chain(ts(0.6, 0.25)).enumerate() {
                    let root = s.polys.d.eval(&t).sqrt();
                    let sigma = if k % 2 == 0 { root } else { -root };
                    out.push((s.z_of(t, sigma), s.w_of(t, sigma)));
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct DefiningEquation {
    /// Normalized toward real type.
    pub q: BivarPoly<Complex64>,
    pub exact: Option<BivarPoly<GaussRat>>,
    pub deg_z: usize,
    pub deg_w: usize,
    pub real_type_defect: f64,
    /// Relative mismatch of the recovered polynomial against the resultant
    /// at points off the interpolation grid.
    pub validation_residual: f64,
    /// `max |Q|` over the curve samples, relative to `max |Q|` on their
    /// bounding box.
    pub sample_residual: f64,
    /// Common zeros `z₀` of all `w`-coefficients: candidate factors `z - z₀`.
    pub spurious_z: Vec<Complex64>,
    /// Likewise `w₀` for factors `w - w₀`.
    pub spurious_w: Vec<Complex64>,
}

impl DefiningEquation {
    /// Coefficients as `[re, im]` pairs, `coeffs[j][k]` for `z^j w^k`; exact
    /// coefficients as rational strings when available.
    pub fn to_json(&self) -> Value {
        let pairs = |v: &[Complex64]| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>();
        let coeffs: Vec<Vec<[f64; 2]>> = self.q.coeffs().iter().map(|r| pairs(r)).collect();
        let exact = self.exact.as_ref().map(|e| {
            e.coeffs()
                .iter()
                .map(|r| r.iter().map(|c| [format_rational(&c.re), format_rational(&c.im)]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        json!({
            "deg_z": self.deg_z,
            "deg_w": self.deg_w,
            "coeffs": coeffs,
            "exact_coeffs": exact,
            "real_type_defect": self.real_type_defect,
            "validation_residual": self.validation_residual,
            "sample_residual": self.sample_residual,
            "spurious_z": pairs(&self.spurious_z),
            "spurious_w": pairs(&self.spurious_w),
        })
    }
}

pub fn defining_equation(
    s: CurveScenario<'_>,
    deg_z: usize,
    deg_w: usize,
    backend: Backend,
) -> Result<DefiningEquation> {
    let (q, exact, validation_residual) = match backend {
        Backend::Float => {
            let rel = s.relations();
            let opts = FitOptions { validation_tol: DEGREE_TOL, ..FitOptions::default() };
            let (q, report) = bivar_fit(|z, w| rel.resultant_at(&z, &w), deg_z, deg_w, opts)?;
            (q.normalize_real_type(), None, report.validation_residual)
        }
        Backend::Exact => {
            let rel = s.relations_exact();
            let q = bivar_interpolate_exact(|z, w| rel.resultant_at(z, w), deg_z, deg_w);
            // One point outside the interpolation grid in each variable.
            let (zc, wc) = (GaussRat::from_i64(deg_z as i64 + 1), GaussRat::from_i64(deg_w as i64 + 2));
            let truth = rel.resultant_at(&zc, &wc);
            let diff = (q.eval(&zc, &wc) - truth.clone()).modulus();
            let residual = if diff == 0.0 { 0.0 } else { diff / truth.modulus().max(f64::MIN_POSITIVE) };
            let normalized = q.normalize_by_diagonal();
            (normalized.to_c64(), Some(normalized), residual)
        }
    };
    if validation_residual > DEGREE_TOL {
        return Err(Error::DegreeBound { deg_z, deg_w, residual: validation_residual });
    }
    if q.is_zero() {
        return Err(Error::DegenerateCurve("the resultant vanishes identically".into()));
    }
    let real_type_defect = match &exact {
        Some(e) if e.is_real_type(0.0) => 0.0,
        _ => q.real_type_defect(),
    };
    let samples = s.curve_samples(128)?;
    let sample_residual = sample_residual(&q, &samples);
    // Floating-point content analysis in both backends: Euclid over the
    // exact coefficients suffers from coefficient growth.
    let (spurious_z, spurious_w) = (content_roots(&q.as_poly_in_w())?, content_roots(&q.as_poly_in_z())?);
    Ok(DefiningEquation {
        q,
        exact,
        deg_z,
        deg_w,
        real_type_defect,
        validation_residual,
        sample_residual,
        spurious_z,
        spurious_w,
    })
}

/// `max |Q(z_k, w_k)|` relative to `max |Q|` on a grid over the samples'
/// bounding box in `z` and in `w`.
pub fn sample_residual(q: &BivarPoly<Complex64>, samples: &[(Complex64, Complex64)]) -> f64 {
    let bbox = |f: &dyn Fn(&(Complex64, Complex64)) -> Complex64| {
        samples.iter().map(f).fold([f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY], |b, z| {
            [b[0].min(z.re), b[1].max(z.re), b[2].min(z.im), b[3].max(z.im)]
        })
    };
    let grid = |b: [f64; 4]| -> Vec<Complex64> {
        let m = 8;
        (0..m * m)
            .map(|k| {
                let (i, j) = (k % m, k / m);
                Complex64::new(
                    b[0] + (b[1] - b[0]) * i as f64 / (m - 1) as f64,
                    b[2] + (b[3] - b[2]) * j as f64 / (m - 1) as f64,
                )
            })
            .collect()
    };
    let zs = grid(bbox(&|p| p.0));
    let ws = grid(bbox(&|p| p.1));
    let top = zs.iter().flat_map(|z| ws.iter().map(move |w| q.eval(z, w).norm())).fold(0.0, f64::max);
    let worst = samples.iter().map(|(z, w)| q.eval(z, w).norm()).fold(0.0, f64::max);
    if top == 0.0 {
        worst
    } else {
        worst / top
    }
}

/// Common roots of the coefficient polynomials, tested at the roots of the
/// lowest-degree nonconstant one.
fn content_roots(coeffs: &[Poly<Complex64>]) -> Result<Vec<Complex64>> {
    let nonzero: Vec<&Poly<Complex64>> = coeffs.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.iter().any(|p| p.degree() == Some(0)) {
        return Ok(Vec::new());
    }
    let Some(pivot) = nonzero.iter().min_by_key(|p| p.degree()) else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for r in poly_roots(pivot)? {
        let common = nonzero.iter().all(|p| {
            let (v, scale) = p.eval_with_scale(r.value);
            v.norm() <= CONTENT_TOL * scale
        });
        if common {
            out.push(r.value);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;
    use crate::quaddom::example1::example1_build;
    use crate::quaddom::example2::{example2_build, Example2Params};
    use crate::subnormal::{discriminant_poly, matrix_parameters};

    #[test]
    fn example1_vanishes_on_curve() {
        let s = example1_build(c64(2.0, 0.0), c64(0.3, 0.0)).unwrap();
        let sc = CurveScenario::Example1(&s);
        assert_eq!(sc.default_degrees(), (2, 2));
        for backend in [Backend::Float, Backend::Exact] {
            let q = defining_equation(sc, 2, 2, backend).unwrap();
            assert!(q.sample_residual < 1e-10, "{backend:?}: {}", q.sample_residual);
            assert!(q.real_type_defect < 1e-12);
            assert!(q.spurious_z.is_empty() && q.spurious_w.is_empty());
            for k in 0..256 {
                let t = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 256.0);
                let z = s.f.eval(t)[(0, 0)];
                assert!(q.q.eval(&z, &s.fstar.eval(&t)).norm() < 1e-10 * q.q.max_coeff());
            }
        }
        let exact = defining_equation(sc, 2, 2, Backend::Exact).unwrap().exact.unwrap();
        assert!(exact.is_real_type(0.0));
    }

    #[test]
    fn example1_matches_discriminant_curve() {
        let s = example1_build(c64(2.0, 0.5), c64(0.3, -0.2)).unwrap();
        let q = defining_equation(CurveScenario::Example1(&s), 2, 2, Backend::Float).unwrap().q;
        let disc = discriminant_poly(&matrix_parameters(&s.f).unwrap(), Backend::Float).unwrap().q;
        // Proportional: compare after scaling by the (0,0) coefficients.
        let ratio = q.coeff(0, 0) / disc.coeff(0, 0);
        for j in 0..=2 {
            for k in 0..=2 {
                assert!((q.coeff(j, k) - ratio * disc.coeff(j, k)).norm() < 1e-7 * q.max_coeff(), "{j} {k}");
            }
        }
    }

    #[test]
    fn degree_bound_too_small_is_reported() {
        let s = example1_build(c64(2.0, 0.0), c64(0.3, 0.0)).unwrap();
        let sc = CurveScenario::Example1(&s);
        assert!(matches!(defining_equation(sc, 1, 2, Backend::Float), Err(Error::DegreeBound { .. })));
        assert!(matches!(defining_equation(sc, 2, 1, Backend::Exact), Err(Error::DegreeBound { .. })));
    }

    #[test]
    fn example2_vanishes_on_curve() {
        let s = example2_build(&Example2Params::paper(), 0).unwrap();
        let sc = CurveScenario::Example2(&s);
        let (dz, dw) = sc.default_degrees();
        assert_eq!((dz, dw), (8, 8));
        let q = defining_equation(sc, dz, dw, Backend::Float).unwrap();
        assert!(q.sample_residual < 1e-6, "{}", q.sample_residual);
        assert!(q.real_type_defect < 1e-8, "{}", q.real_type_defect);
        // At z = -1, X_z = -4D shares the root 1/γ̄₁ with every Y_w, so
        // z + 1 divides Q; symmetrically w + 1 (root γ₁).
        assert!(q.spurious_z.iter().any(|z| (z + 1.0).norm() < 1e-6), "{:?}", q.spurious_z);
        assert!(q.spurious_w.iter().any(|w| (w + 1.0).norm() < 1e-6), "{:?}", q.spurious_w);
    }

    #[test]
    fn example2_exact_is_reproducible() {
        let s = example2_build(&Example2Params::paper(), 0).unwrap();
        let sc = CurveScenario::Example2(&s);
        let a = defining_equation(sc, 8, 8, Backend::Exact).unwrap();
        let b = defining_equation(sc, 8, 8, Backend::Exact).unwrap();
        assert_eq!(a.exact, b.exact);
        assert!(a.exact.as_ref().unwrap().is_real_type(0.0));
        assert!(a.sample_residual < 1e-6, "{}", a.sample_residual);
    }
}
