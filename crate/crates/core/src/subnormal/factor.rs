//! Right coprime factorization `F_* = h α⁻¹` of the boundary adjoint of an
//! analytic symbol, with `α` an inner Blaschke–Potapov product and `h`
//! analytic on the disc.
//!
//! The model space `M = H²_m ⊖ αH²_m` is the orthogonal complement of the
//! Hankel kernel. It sits inside `K_β ⊗ C^m`, where `β` is the scalar
//! Blaschke product over the disc poles of `F_*`, so `M` is the row space of
//! the Hankel operator restricted to that finite space. Factors of `α` are
//! then peeled off one at a time: each eigenvector of the backward shift on
//! `M` is `u/(1 - ā t)` and yields a factor with zero `a` and projection onto
//! the span of the `u`'s.

use num_complex::Complex64;
use serde::Serialize;

use super::model::normalize_phase;
use super::quadrature::{CircleQuad, Samples};
use crate::error::{Error, Result};
use crate::numkernel::linalg::{det, eigenvalues, identity, null_space, CMat, CVec};
use crate::numkernel::{CPoly, CRatFun};
use crate::symbols::{bp_build, BlaschkeFactorSpec, BlaschkePotapov, MatrixSymbol};

/// Relative singular-value threshold for the Hankel rank.
pub const RANK_TOL: f64 = 1e-8;
/// Relative singular values in this band make the rank ambiguous.
const AMBIGUOUS_BAND: (f64, f64) = (1e-11, 1e-6);
/// Eigenvalues of the backward shift closer than this are one zero.
const ZERO_CLUSTER: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct CoprimeFactorization {
    pub alpha: BlaschkePotapov,
    /// `F_* α`, analytic on the closed disc.
    pub h: MatrixSymbol,
    /// Singular values of the Hankel operator of `F_*` on `K_β ⊗ C^m`,
    /// descending.
    pub hankel_singular_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorizationCheck {
    /// Max over circle samples of `‖h α* - F_*‖_F / (1 + ‖F_*‖_F)`.
    pub boundary_residual: f64,
    /// Smallest singular value of `[α(t); h(t)]` over disc samples
    /// (including the zeros of `α`); positive means right coprime.
    pub min_stacked_singular_value: f64,
    /// Largest negative Fourier coefficient of `h`.
    pub max_negative_coeff: f64,
}

pub fn coprime_factorize(f: &MatrixSymbol) -> Result<CoprimeFactorization> {
    if let Some((p, _)) = f.poles().into_iter().find(|(p, _)| p.norm() <= 1.0) {
        return Err(Error::PreconditionViolation(format!(
            "symbol has a pole at {p}, not analytic on the closed disc"
        )));
    }
    let g = f.boundary_adjoint();
    require_nonsingular(&g)?;
    let q = CircleQuad::default();
    let (m_basis, sv) = model_space(&g, &q)?;
    let alpha = extract_product(&q, m_basis, f.size())?;
    let h = multiply(&g, &alpha)?;
    Ok(CoprimeFactorization { alpha, h, hankel_singular_values: sv })
}

impl CoprimeFactorization {
    /// Evaluates the factorization invariants against the symbol it came from.
    pub fn check(&self, f: &MatrixSymbol) -> FactorizationCheck {
        let g = f.boundary_adjoint();
        let mut boundary_residual: f64 = 0.0;
        for k in 0..256 {
            let t = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 256.0);
            let gt = g.eval(t);
            let r = self.h.eval(t) * self.alpha.eval(t).adjoint() - &gt;
            boundary_residual = boundary_residual.max(r.norm() / (1.0 + gt.norm()));
        }
        let mut pts: Vec<Complex64> = self.alpha.factors().iter().map(|f| f.a).collect();
        for k in 0..64 {
            let r = 0.95 * ((k % 8) as f64 + 0.5) / 8.0;
            pts.push(Complex64::from_polar(r, 0.7 + std::f64::consts::TAU * k as f64 / 64.0));
        }
        let m = self.alpha.size();
        let mut min_sv = f64::INFINITY;
        for t in pts {
            let mut stacked = CMat::zeros(2 * m, m);
            stacked.view_mut((0, 0), (m, m)).copy_from(&self.alpha.eval(t));
            stacked.view_mut((m, 0), (m, m)).copy_from(&self.h.eval(t));
            let sv = crate::numkernel::linalg::singular_values(&stacked);
            min_sv = min_sv.min(sv.last().copied().unwrap_or(0.0));
        }
        let max_negative_coeff = crate::symbols::fourier_coeffs(&self.h, -16, -1)
            .map(|c| (-16..=-1).map(|n| c.get(n).norm()).fold(0.0, f64::max))
            .unwrap_or(f64::INFINITY);
        FactorizationCheck { boundary_residual, min_stacked_singular_value: min_sv, max_negative_coeff }
    }
}

fn require_nonsingular(g: &MatrixSymbol) -> Result<()> {
    let m = g.size();
    let mut best: f64 = 0.0;
    for k in 0..16 {
        let t = Complex64::from_polar(1.0, 0.3 + std::f64::consts::TAU * k as f64 / 16.0);
        let gt = g.eval(t);
        let scale = gt.norm().max(1e-300).powi(m as i32);
        best = best.max(det(&gt).norm() / scale);
    }
    if best < 1e-12 {
        return Err(Error::PreconditionViolation("det F_* vanishes identically on the circle".into()));
    }
    Ok(())
}

/// Scalar Malmquist–Walsh functions for the zeros `z_1, …, z_D`.
fn scalar_mw(zeros: &[Complex64], t: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(zeros.len());
    let mut prefix = Complex64::new(1.0, 0.0);
    for &z in zeros {
        out.push(prefix * (1.0 - z.norm_sqr()).sqrt() / (1.0 - z.conj() * t));
        prefix *= (t - z) / (1.0 - z.conj() * t);
    }
    out
}

/// Orthonormal samples spanning `M`, plus the Hankel singular values.
fn model_space(g: &MatrixSymbol, q: &CircleQuad) -> Result<(Vec<Samples>, Vec<f64>)> {
    let m = g.size();
    let mut zeros = Vec::new();
    for (p, mult) in g.poles() {
        if p.norm() < 1.0 {
            zeros.extend(std::iter::repeat_n(p, mult));
        }
    }
    if zeros.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let scalar: Vec<Vec<Complex64>> = q.nodes().iter().map(|&t| scalar_mw(&zeros, t)).collect();
    let mut k_basis: Vec<Samples> = Vec::new();
    for i in 0..zeros.len() {
        for r in 0..m {
            k_basis.push(scalar.iter().map(|u| CVec::from_fn(m, |c, _| if c == r { u[i] } else { Complex64::new(0.0, 0.0) })).collect());
        }
    }
    let g_samples: Vec<CMat> = q.nodes().iter().map(|&t| g.eval(t)).collect();
    let cols: Vec<CVec> = k_basis.iter().map(|x| q.anti_analytic(&CircleQuad::apply(&g_samples, x))).collect();
    let y = CMat::from_columns(&cols);
    let svd = y.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return Ok((Vec::new(), sv));
    }
    if sv.iter().any(|&s| s > AMBIGUOUS_BAND.0 * top && s < AMBIGUOUS_BAND.1 * top) {
        return Err(Error::FactorizationAmbiguous { singular_values: sv });
    }
    let basis = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > RANK_TOL * top)
        .map(|&i| {
            let c: Vec<Complex64> = v_t.row(i).iter().map(|z| z.conj()).collect();
            combine(&k_basis, &c)
        })
        .collect();
    Ok((basis, sv))
}

fn combine(xs: &[Samples], c: &[Complex64]) -> Samples {
    let n = xs[0].len();
    let m = xs[0][0].len();
    (0..n)
        .map(|s| xs.iter().zip(c).fold(CVec::zeros(m), |acc, (x, c)| acc + &x[s] * *c))
        .collect()
}

/// Peels Blaschke–Potapov factors off an orthonormal basis of a backward
/// shift invariant space.
fn extract_product(q: &CircleQuad, mut basis: Vec<Samples>, m: usize) -> Result<BlaschkePotapov> {
    let mut factors = Vec::new();
    while !basis.is_empty() {
        let d = basis.len();
        let at_zero: Vec<CVec> = basis.iter().map(CircleQuad::mean).collect();
        let shifted: Vec<Samples> = basis
            .iter()
            .zip(&at_zero)
            .map(|(x, x0)| x.iter().zip(q.nodes()).map(|(v, t)| (v - x0) / *t).collect())
            .collect();
        let a_s = CMat::from_fn(d, d, |i, j| CircleQuad::inner(&shifted[j], &basis[i]));
        let eig = eigenvalues(&a_s)?;
        let mu0 = eig.iter().copied().min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap();
        let cluster: Vec<Complex64> = eig.iter().copied().filter(|e| (e - mu0).norm() <= ZERO_CLUSTER).collect();
        let mu = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
        let w = null_space(&(&a_s - identity(d) * mu), 1e-7 * (1.0 + a_s.norm()));
        if w.ncols() == 0 {
            return Err(Error::NoConvergence(format!("no backward-shift eigenvector for eigenvalue {mu}")));
        }
        let zero = mu.conj();
        if zero.norm() >= 1.0 {
            return Err(Error::NoConvergence(format!("extracted zero {zero} outside the disc")));
        }
        // Directions u with eigenvector x = u/(1 - ā t), read off at t = 0.
        let x0 = CMat::from_columns(&at_zero) * &w;
        let svd = x0.clone().svd(true, false);
        let top = svd.singular_values.max();
        let u_all = svd.u.expect("left singular vectors");
        let dirs: Vec<CVec> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > 1e-8 * top)
            .map(|i| u_all.column(i).into_owned())
            .collect();
        if dirs.len() != w.ncols() {
            return Err(Error::FactorizationAmbiguous { singular_values: svd.singular_values.iter().copied().collect() });
        }
        let mut p = CMat::zeros(m, m);
        for u in &dirs {
            let u = normalize_phase(u.clone());
            p += &u * u.adjoint();
        }
        let p = (&p + p.adjoint()) * Complex64::new(0.5, 0.0);
        let factor = BlaschkeFactorSpec::new(zero, Complex64::new(1.0, 0.0), p)?;
        // Remaining part of the space, divided by the factor.
        let rest = null_space(&w.adjoint(), 1e-8);
        basis = (0..rest.ncols())
            .map(|c| {
                let coeffs: Vec<Complex64> = rest.column(c).iter().copied().collect();
                let x = combine(&basis, &coeffs);
                x.iter().zip(q.nodes()).map(|(v, &t)| factor.eval(t).adjoint() * v).collect()
            })
            .collect();
        factors.push(factor);
    }
    bp_build(identity(m), factors)
}

/// `G α` as a rational matrix symbol. The disc poles of `G` cancel against
/// the zeros of `α`, so the denominator is known in advance: the outer poles
/// of `G` times the denominator of `α`. The numerator is recovered from
/// circle samples (`G` is bounded at infinity because `F` is analytic at 0).
fn multiply(g: &MatrixSymbol, alpha: &BlaschkePotapov) -> Result<MatrixSymbol> {
    let m = g.size();
    let (_, mut den) = alpha.polynomial_form();
    for (p, mult) in g.poles() {
        if p.norm() > 1.0 {
            for _ in 0..mult {
                den = &den * &CPoly::new(vec![-p, Complex64::new(1.0, 0.0)]);
            }
        }
    }
    let bound = den.degree().unwrap_or(0);
    let len = (4 * (bound + 1)).next_power_of_two().max(64);
    let q = CircleQuad::new(len);
    let samples: Vec<CMat> = q.nodes().iter().map(|&t| g.eval(t) * alpha.eval(t) * den.eval(&t)).collect();
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let col: Samples = samples.iter().map(|s| CVec::from_element(1, s[(i, j)])).collect();
            let c = &q.coeffs(&col)[0];
            let scale = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let tail = c[bound + 1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
            if tail > 1e-8 * (1.0 + scale) {
                return Err(Error::NoConvergence(format!("G α has disc poles left (tail {tail:.2e})")));
            }
            let num = CPoly::new(c[..=bound].to_vec()).trim_relative(1e-15);
            entries.push(CRatFun::new_unreduced(num, den.clone())?);
        }
    }
    MatrixSymbol::new(m, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;

    pub(crate) fn example1(a: Complex64, beta: Complex64) -> MatrixSymbol {
        let num = CPoly::new(vec![beta, -a, c64(1.0, 0.0)]);
        let den = CPoly::new(vec![-a, c64(1.0, 0.0)]);
        MatrixSymbol::scalar(CRatFun::new_unreduced(num, den).unwrap())
    }

    fn zeros_of(alpha: &BlaschkePotapov) -> Vec<Complex64> {
        alpha.factors().iter().map(|f| f.a).collect()
    }

    #[test]
    fn shift() {
        let f = MatrixSymbol::scalar(CRatFun::from_poly(CPoly::x()));
        let fac = coprime_factorize(&f).unwrap();
        assert_eq!(fac.alpha.degree(), 1);
        assert!(fac.alpha.factors()[0].a.norm() < 1e-12);
        for th in [0.2, 1.0, 3.0] {
            let t = Complex64::from_polar(0.7, th);
            assert!((fac.h.eval(t)[(0, 0)] - 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn example1_zeros() {
        let a = c64(2.0, 0.0);
        let f = example1(a, c64(0.3, 0.0));
        let fac = coprime_factorize(&f).unwrap();
        let z = zeros_of(&fac.alpha);
        assert_eq!(z.len(), 2);
        assert!(z[0].norm() < 1e-10, "{z:?}");
        assert!((z[1] - 1.0 / a.conj()).norm() < 1e-10, "{z:?}");
        let chk = fac.check(&f);
        assert!(chk.boundary_residual < 1e-9, "{chk:?}");
        assert!(chk.min_stacked_singular_value > 1e-6, "{chk:?}");
        assert!(chk.max_negative_coeff < 1e-9, "{chk:?}");
    }

    #[test]
    fn double_zero_for_square() {
        let f = MatrixSymbol::diagonal_poly(2, &CPoly::monomial(c64(1.0, 0.0), 2));
        let fac = coprime_factorize(&f).unwrap();
        assert_eq!(fac.alpha.degree(), 4);
        assert!(zeros_of(&fac.alpha).iter().all(|z| z.norm() < 1e-8));
        let chk = fac.check(&f);
        assert!(chk.boundary_residual < 1e-9 && chk.max_negative_coeff < 1e-9, "{chk:?}");
    }

    #[test]
    fn rotated_diagonal() {
        // U diag(t, t + β/(t-a)) U* with a non-trivial unitary U.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = CMat::from_row_slice(2, 2, &[c64(s, 0.0), c64(0.0, s), c64(0.0, s), c64(s, 0.0)]);
        let e1 = example1(c64(1.5, 0.5), c64(0.2, 0.1));
        let d = [CRatFun::from_poly(CPoly::x()), e1.entry(0, 0).clone()];
        let mut entries = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = CRatFun::constant(c64(0.0, 0.0));
                for k in 0..2 {
                    acc = acc.add(&d[k].mul(&CRatFun::constant(u[(i, k)] * u[(j, k)].conj())));
                }
                entries.push(acc);
            }
        }
        let f = MatrixSymbol::new(2, entries).unwrap();
        let fac = coprime_factorize(&f).unwrap();
        assert_eq!(fac.alpha.degree(), 3);
        let chk = fac.check(&f);
        assert!(chk.boundary_residual < 1e-9, "{chk:?}");
        assert!(chk.min_stacked_singular_value > 1e-6, "{chk:?}");
        assert!(chk.max_negative_coeff < 1e-9, "{chk:?}");
    }

    #[test]
    fn pole_in_disc_rejected() {
        let f = MatrixSymbol::scalar(CRatFun::new_unreduced(CPoly::one(), CPoly::x()).unwrap());
        assert!(matches!(coprime_factorize(&f), Err(Error::PreconditionViolation(_))));
    }
}
