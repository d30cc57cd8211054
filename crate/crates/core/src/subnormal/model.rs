//! Orthonormal bases of model spaces `H²_m ⊖ αH²_m` (Malmquist–Walsh).

use num_complex::Complex64;

use super::quadrature::{CircleQuad, Samples};
use crate::error::{Error, Result};
use crate::numkernel::linalg::{frobenius, hermitian_eigen, identity, CMat, CVec};
use crate::numkernel::{CPoly, CRatFun};
use crate::symbols::BlaschkePotapov;

/// `t ↦ β(t) u √(1-|a|²)/(1 - ā t)` where `β` is a Blaschke–Potapov prefix
/// of `α` and `u` a unit vector in the range of the next factor's projection.
#[derive(Debug, Clone)]
pub struct ModelFunction {
    prefix: BlaschkePotapov,
    zero: Complex64,
    direction: CVec,
}

impl ModelFunction {
    pub fn new(prefix: BlaschkePotapov, zero: Complex64, direction: CVec) -> Self {
        ModelFunction { prefix, zero, direction }
    }

    pub fn zero(&self) -> Complex64 {
        self.zero
    }

    pub fn direction(&self) -> &CVec {
        &self.direction
    }

    pub fn eval(&self, t: Complex64) -> CVec {
        let k = (1.0 - self.zero.norm_sqr()).sqrt() / (1.0 - self.zero.conj() * t);
        self.prefix.eval(t) * &self.direction * k
    }

    /// The components as rational functions.
    pub fn as_rational(&self) -> Vec<CRatFun> {
        let (num, den) = self.prefix.polynomial_form();
        let k = Complex64::new((1.0 - self.zero.norm_sqr()).sqrt(), 0.0);
        let den = &den * &CPoly::new(vec![Complex64::new(1.0, 0.0), -self.zero.conj()]);
        let m = self.direction.len();
        (0..m)
            .map(|r| {
                let mut p = CPoly::zero();
                for (c, u) in self.direction.iter().enumerate() {
                    p = &p + &num.get(r, c).scale(&(u * k));
                }
                CRatFun::new_unreduced(p, den.clone()).expect("nonzero denominator").reduce()
            })
            .collect()
    }
}

/// Orthonormal basis of `H²_m ⊖ αH²_m`: for the `k`-th factor
/// `b_k P_k + (I - P_k)` it contributes `α_{<k} u k_{a_k}` for an orthonormal
/// basis `u` of the range of `P_k`, where `α_{<k}` is the product of the
/// preceding factors (including the constant unitary).
pub fn model_basis(alpha: &BlaschkePotapov) -> Result<Vec<ModelFunction>> {
    if alpha.degree() == 0 {
        return Err(Error::EmptyModelSpace);
    }
    let mut out = Vec::new();
    for (k, f) in alpha.factors().iter().enumerate() {
        let prefix = alpha.prefix(k);
        for u in range_basis(&f.p) {
            out.push(ModelFunction::new(prefix.clone(), f.a, u));
        }
    }
    Ok(out)
}

/// Orthonormal eigenvectors of a projection for eigenvalue one, each with
/// its largest component made real and positive.
pub(crate) fn range_basis(p: &CMat) -> Vec<CVec> {
    let (vals, vecs) = hermitian_eigen(p);
    vals.iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(i, _)| normalize_phase(vecs.column(i).into_owned()))
        .collect()
}

pub(crate) fn normalize_phase(mut v: CVec) -> CVec {
    let big = v.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    if let Some(big) = big {
        if big.norm() > 0.0 {
            let phase = big.conj() / big.norm();
            v *= phase;
        }
    }
    v
}

pub fn sample_basis(q: &CircleQuad, basis: &[ModelFunction]) -> Vec<Samples> {
    basis.iter().map(|e| q.sample(|t| e.eval(t))).collect()
}

/// `‖Gram - I‖_F` of the basis under boundary quadrature.
pub fn gram_defect(q: &CircleQuad, basis: &[ModelFunction]) -> f64 {
    let s = sample_basis(q, basis);
    frobenius(&(CircleQuad::gram(&s) - identity(basis.len())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;
    use crate::symbols::{bp_build, BlaschkeFactorSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shift_gives_constants() {
        let alpha = bp_build(identity(1), vec![BlaschkeFactorSpec::new(c64(0.0, 0.0), c64(1.0, 0.0), identity(1)).unwrap()]).unwrap();
        let b = model_basis(&alpha).unwrap();
        assert_eq!(b.len(), 1);
        for th in [0.1, 2.0, 4.0] {
            let t = Complex64::from_polar(1.0, th);
            assert!((b[0].eval(t)[0] - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_alpha_is_empty() {
        assert!(matches!(model_basis(&BlaschkePotapov::identity(2)), Err(Error::EmptyModelSpace)));
    }

    #[test]
    fn example1_basis() {
        let a = c64(2.0, 0.0);
        let factors = vec![
            BlaschkeFactorSpec::new(c64(0.0, 0.0), c64(1.0, 0.0), identity(1)).unwrap(),
            BlaschkeFactorSpec::new(1.0 / a.conj(), c64(1.0, 0.0), identity(1)).unwrap(),
        ];
        let alpha = bp_build(identity(1), factors).unwrap();
        let b = model_basis(&alpha).unwrap();
        let k = (1.0 - 1.0 / a.norm_sqr()).sqrt();
        for th in [0.3, 1.7, 5.0] {
            let t = Complex64::from_polar(0.9, th);
            assert!((b[0].eval(t)[0] - 1.0).norm() < 1e-14);
            let e2 = k * t / (1.0 - t / a);
            assert!((b[1].eval(t)[0] - e2).norm() < 1e-14);
            let r = b[1].as_rational();
            assert!((r[0].eval(&t) - e2).norm() < 1e-12);
        }
        assert!(gram_defect(&CircleQuad::default(), &b) < 1e-9);
    }

    #[test]
    fn random_matrix_product_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let mut factors = Vec::new();
            for _ in 0..3 {
                let a = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..6.3));
                let l = [c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
                factors.push(BlaschkeFactorSpec::rank_one(a, c64(1.0, 0.0), &l).unwrap());
            }
            let alpha = bp_build(identity(2), factors).unwrap();
            let b = model_basis(&alpha).unwrap();
            assert_eq!(b.len(), 3);
            assert!(gram_defect(&CircleQuad::default(), &b) < 1e-9);
            // Each basis function is orthogonal to αH²: ⟨e, α c t^n⟩ = 0.
            let q = CircleQuad::default();
            for e in &b {
                let es = q.sample(|t| e.eval(t));
                for n in 0..3 {
                    for c in 0..2 {
                        let x = q.sample(|t| alpha.eval(t).column(c).into_owned() * t.powi(n));
                        assert!(CircleQuad::inner(&es, &x).norm() < 1e-12);
                    }
                }
            }
        }
    }
}
