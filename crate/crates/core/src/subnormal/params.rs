//! Matrix parameters `(C, Λ)` of the subnormal Toeplitz operator with an
//! analytic symbol: compression of `T_{F_*}` and `Γ_{F_*}` to the model
//! space of the coprime factorization.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::factor::{coprime_factorize, CoprimeFactorization};
use super::model::{model_basis, sample_basis, ModelFunction};
use super::quadrature::{CircleQuad, Samples};
use crate::error::{Error, Result};
use crate::numkernel::bivar::{bivar_fit, bivar_interpolate_exact, BivarPoly, FitOptions};
use crate::numkernel::field::{Backend, GaussRat, Scalar};
use crate::numkernel::linalg::{eigenvalues, frobenius, hermitian_eigen, identity, CMat, CVec};
use crate::numkernel::resultant::bareiss_det;
use crate::symbols::MatrixSymbol;

/// Hermitian tolerance relative to `1 + ‖C‖`.
const HERMITIAN_TOL: f64 = 1e-10;
pub const REAL_TYPE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SubnormalParams {
    pub dim_m: usize,
    pub basis: Vec<ModelFunction>,
    pub lambda: CMat,
    pub lambda_star: CMat,
    pub r: CMat,
    pub c: CMat,
    pub factorization: CoprimeFactorization,
    /// `‖Gram - I‖_F` of the basis under boundary quadrature.
    pub gram_defect: f64,
}

pub fn matrix_parameters(f: &MatrixSymbol) -> Result<SubnormalParams> {
    let factorization = coprime_factorize(f)?;
    let basis = model_basis(&factorization.alpha)?;
    let q = CircleQuad::default();
    let g = f.boundary_adjoint();
    let g_samples: Vec<CMat> = q.nodes().iter().map(|&t| g.eval(t)).collect();
    let e = sample_basis(&q, &basis);
    let gram_defect = frobenius(&(CircleQuad::gram(&e) - identity(e.len())));
    let (lambda_star, y) = compress(&q, &g_samples, &e);
    // R in the basis of left singular vectors of the image: R = U*Y = ΣV*.
    let svd = y.clone().svd(true, true);
    let u = svd.u.expect("left singular vectors");
    let r = u.adjoint() * &y;
    let c = r.adjoint() * &r;
    Ok(SubnormalParams {
        dim_m: basis.len(),
        basis,
        lambda: lambda_star.adjoint(),
        lambda_star,
        r,
        c,
        factorization,
        gram_defect,
    })
}

/// `Λ*_ij = ⟨G e_j, e_i⟩` and the stacked negative Fourier coefficients of
/// `G e_j` as columns.
fn compress(q: &CircleQuad, g: &[CMat], e: &[Samples]) -> (CMat, CMat) {
    let ge: Vec<Samples> = e.iter().map(|x| CircleQuad::apply(g, x)).collect();
    let d = e.len();
    let lambda_star = CMat::from_fn(d, d, |i, j| CircleQuad::inner(&ge[j], &e[i]));
    let cols: Vec<CVec> = ge.iter().map(|x| q.anti_analytic(x)).collect();
    (lambda_star, CMat::from_columns(&cols))
}

/// `Λ*` and `R` for caller-supplied orthonormal bases `e` of the model space
/// and `h` of the image of the Hankel operator (functions in `H²_-`):
/// `F_* e_j = Σ R_ij h_i + Σ Λ*_ij e_i`.
pub fn parameters_in_bases(
    f: &MatrixSymbol,
    e: &[&dyn Fn(Complex64) -> CVec],
    h: &[&dyn Fn(Complex64) -> CVec],
) -> (CMat, CMat) {
    let q = CircleQuad::default();
    let g = f.boundary_adjoint();
    let g_samples: Vec<CMat> = q.nodes().iter().map(|&t| g.eval(t)).collect();
    let es: Vec<Samples> = e.iter().map(|f| q.sample(f)).collect();
    let hs: Vec<Samples> = h.iter().map(|f| q.sample(f)).collect();
    let ge: Vec<Samples> = es.iter().map(|x| CircleQuad::apply(&g_samples, x)).collect();
    let lambda_star = CMat::from_fn(es.len(), es.len(), |i, j| CircleQuad::inner(&ge[j], &es[i]));
    let r = CMat::from_fn(hs.len(), es.len(), |i, j| CircleQuad::inner(&ge[j], &hs[i]));
    (lambda_star, r)
}

impl SubnormalParams {
    /// Eigenvalues of `Λ`.
    pub fn nodes(&self) -> Result<Vec<Complex64>> {
        eigenvalues(&self.lambda)
    }

    pub fn area(&self) -> Result<f64> {
        area_from_c(&self.c)
    }

    /// `‖C - R*R‖_F`.
    pub fn factor_defect(&self) -> f64 {
        frobenius(&(&self.c - self.r.adjoint() * &self.r))
    }

    /// Smallest eigenvalue of `C` relative to `‖C‖`.
    pub fn min_c_eigenvalue(&self) -> f64 {
        let (vals, _) = hermitian_eigen(&self.c);
        vals.last().copied().unwrap_or(0.0) / frobenius(&self.c).max(f64::MIN_POSITIVE)
    }

    pub fn to_json(&self) -> Result<Value> {
        let nodes = self.nodes()?;
        Ok(json!({
            "dimM": self.dim_m,
            "Lambda": matrix_json(&self.lambda),
            "R": matrix_json(&self.r),
            "C": matrix_json(&self.c),
            "nodes": nodes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "area": self.area()?,
        }))
    }
}

pub fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn require_hermitian(c: &CMat) -> Result<()> {
    let defect = frobenius(&(c - c.adjoint()));
    if !c.is_square() || defect > HERMITIAN_TOL * (1.0 + frobenius(c)) {
        return Err(Error::PreconditionViolation(format!("C is not Hermitian (defect {defect:.2e})")));
    }
    Ok(())
}

/// `π trace C`.
pub fn area_from_c(c: &CMat) -> Result<f64> {
    require_hermitian(c)?;
    let tr = c.trace();
    if tr.im.abs() > 1e-12 * (1.0 + tr.re.abs()) {
        return Err(Error::PreconditionViolation(format!("trace C has imaginary part {:.2e}", tr.im)));
    }
    Ok(std::f64::consts::PI * tr.re)
}

#[derive(Debug, Clone)]
pub struct DiscriminantCurve {
    /// `Q(z, w) = Σ a_jk z^j w^k`.
    pub q: BivarPoly<Complex64>,
    /// The exact expansion, when computed with the exact backend.
    pub exact: Option<BivarPoly<GaussRat>>,
    pub real_type_defect: f64,
    pub real_type: bool,
}

impl DiscriminantCurve {
    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.q.eval(&z, &w)
    }
}

pub fn discriminant_poly(params: &SubnormalParams, backend: Backend) -> Result<DiscriminantCurve> {
    discriminant_from(&params.c, &params.lambda, backend)
}

/// `Q(z, w) = det(C - (wI - Λ*)(zI - Λ))`.
pub fn discriminant_from(c: &CMat, lambda: &CMat, backend: Backend) -> Result<DiscriminantCurve> {
    require_hermitian(c)?;
    let (vals, _) = hermitian_eigen(c);
    if vals.last().copied().unwrap_or(0.0) < -HERMITIAN_TOL * (1.0 + frobenius(c)) {
        return Err(Error::PreconditionViolation("C is not positive semidefinite".into()));
    }
    let d = c.nrows();
    match backend {
        Backend::Float => {
            let lambda_star = lambda.adjoint();
            let eval = |z: Complex64, w: Complex64| {
                let lhs = c - (identity(d) * w - &lambda_star) * (identity(d) * z - lambda);
                crate::numkernel::linalg::det(&lhs)
            };
            let (q, _) = bivar_fit(eval, d, d, FitOptions::default())?;
            let defect = q.real_type_defect();
            if defect > REAL_TYPE_TOL {
                return Err(Error::SymmetryViolation { defect });
            }
            Ok(DiscriminantCurve { q, exact: None, real_type_defect: defect, real_type: true })
        }
        Backend::Exact => {
            let ce: Vec<Vec<GaussRat>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let a = GaussRat::from_c64(c[(i, j)]);
                            let b = GaussRat::from_c64(c[(j, i)]).conj();
                            (a + b) * GaussRat::from_c64(Complex64::new(0.5, 0.0))
                        })
                        .collect()
                })
                .collect();
            let le: Vec<Vec<GaussRat>> =
                (0..d).map(|i| (0..d).map(|j| GaussRat::from_c64(lambda[(i, j)])).collect()).collect();
            let eval = |z: &GaussRat, w: &GaussRat| {
                let m: Vec<Vec<GaussRat>> = (0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| {
                                let mut acc = ce[i][j].clone();
                                for k in 0..d {
                                    // (w - Λ*)_ik (z - Λ)_kj
                                    let mut x = -le[k][i].conj();
                                    if i == k {
                                        x += w.clone();
                                    }
                                    let mut y = -le[k][j].clone();
                                    if k == j {
                                        y += z.clone();
                                    }
                                    acc -= x * y;
                                }
                                acc
                            })
                            .collect()
                    })
                    .collect();
                bareiss_det(m)
            };
            let exact = bivar_interpolate_exact(eval, d, d);
            let real_type = exact.is_real_type(0.0);
            let q = exact.to_c64();
            let defect = q.real_type_defect();
            if !real_type {
                return Err(Error::SymmetryViolation { defect });
            }
            Ok(DiscriminantCurve { q, exact: Some(exact), real_type_defect: defect, real_type })
        }
    }
}
