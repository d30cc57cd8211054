//! Finite Blaschke–Potapov products
//! `B(t) = v · Π (b_n(t) P_n + (I - P_n))`, `b_n(t) = ξ_n (t - a_n)/(1 - conj(a_n) t)`.

use num_complex::Complex64;

use super::polymat::PolyMatrix;
use crate::error::{Error, Result};
use crate::numkernel::linalg::{frobenius, identity, unitarity_defect, CMat};
use crate::numkernel::CPoly;

pub const STRUCTURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeFactorSpec {
    /// Zero location, `|a| < 1`.
    pub a: Complex64,
    /// Unimodular rotation.
    pub xi: Complex64,
    /// Orthogonal projection.
    pub p: CMat,
}

impl BlaschkeFactorSpec {
    pub fn new(a: Complex64, xi: Complex64, p: CMat) -> Result<Self> {
        let f = BlaschkeFactorSpec { a, xi, p };
        f.validate()?;
        Ok(f)
    }

    /// Rank-one projection onto the span of `l` (normalized internally).
    pub fn rank_one(a: Complex64, xi: Complex64, l: &[Complex64]) -> Result<Self> {
        let norm: f64 = l.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidFactor("zero direction vector".into()));
        }
        let m = l.len();
        let p = CMat::from_fn(m, m, |i, j| l[i] * l[j].conj() / (norm * norm));
        Self::new(a, xi, p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.norm() < 1.0) {
            return Err(Error::InvalidFactor(format!("zero {} not inside the unit disc", self.a)));
        }
        if (self.xi.norm() - 1.0).abs() > STRUCTURE_TOL {
            return Err(Error::InvalidFactor(format!("rotation {} is not unimodular", self.xi)));
        }
        if !self.p.is_square() {
            return Err(Error::InvalidFactor("projection is not square".into()));
        }
        let herm = frobenius(&(&self.p - self.p.adjoint()));
        let idem = frobenius(&(&self.p * &self.p - &self.p));
        if herm > STRUCTURE_TOL || idem > STRUCTURE_TOL {
            return Err(Error::InvalidFactor(format!(
                "P is not an orthogonal projection (|P-P*| = {herm:.2e}, |P^2-P| = {idem:.2e})"
            )));
        }
        Ok(())
    }

    /// `ξ (t - a)/(1 - conj(a) t)`.
    pub fn scalar(&self, t: Complex64) -> Complex64 {
        self.xi * (t - self.a) / (1.0 - self.a.conj() * t)
    }

    pub fn eval(&self, t: Complex64) -> CMat {
        let m = self.p.nrows();
        &self.p * self.scalar(t) + (identity(m) - &self.p)
    }

    pub fn rank(&self) -> usize {
        self.p.trace().re.round() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkePotapov {
    v: CMat,
    factors: Vec<BlaschkeFactorSpec>,
}

/// Validates and assembles a Blaschke–Potapov product.
pub fn bp_build(v: CMat, factors: Vec<BlaschkeFactorSpec>) -> Result<BlaschkePotapov> {
    if !v.is_square() {
        return Err(Error::InvalidFactor("v is not square".into()));
    }
    let m = v.nrows();
    let defect = unitarity_defect(&v);
    if defect > STRUCTURE_TOL {
        return Err(Error::InvalidFactor(format!("v is not unitary (defect {defect:.2e})")));
    }
    for f in &factors {
        if f.p.nrows() != m {
            return Err(Error::InvalidFactor(format!(
                "projection of size {} in a product of size {m}",
                f.p.nrows()
            )));
        }
        f.validate()?;
    }
    Ok(BlaschkePotapov { v, factors })
}

impl BlaschkePotapov {
    pub fn identity(m: usize) -> Self {
        BlaschkePotapov { v: identity(m), factors: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.v.nrows()
    }

    pub fn v(&self) -> &CMat {
        &self.v
    }

    pub fn factors(&self) -> &[BlaschkeFactorSpec] {
        &self.factors
    }

    /// Total zero count of `det B` in the disc (sum of projection ranks).
    pub fn degree(&self) -> usize {
        self.factors.iter().map(BlaschkeFactorSpec::rank).sum()
    }

    pub fn eval(&self, t: Complex64) -> CMat {
        self.factors.iter().fold(self.v.clone(), |acc, f| acc * f.eval(t))
    }

    /// The product of the first `k` factors (with `v`).
    pub fn prefix(&self, k: usize) -> BlaschkePotapov {
        BlaschkePotapov { v: self.v.clone(), factors: self.factors[..k].to_vec() }
    }

    /// Appends a factor on the right.
    pub fn push(&mut self, f: BlaschkeFactorSpec) {
        self.factors.push(f);
    }

    /// `B(t) = N(t)/d(t)` with `N` a polynomial matrix and
    /// `d(t) = Π (1 - conj(a_n) t)`.
    pub fn polynomial_form(&self) -> (PolyMatrix, CPoly) {
        let m = self.size();
        let mut num = PolyMatrix::constant(&self.v);
        let mut den = CPoly::one();
        for f in &self.factors {
            let lin = CPoly::new(vec![-f.xi * f.a, f.xi]);
            let dn = CPoly::new(vec![Complex64::new(1.0, 0.0), -f.a.conj()]);
            let p = PolyMatrix::constant(&f.p);
            let q = PolyMatrix::constant(&(identity(m) - &f.p));
            let factor = p.scale_poly(&lin).add(&q.scale_poly(&dn));
            num = num.mul(&factor);
            den = &den * &dn;
        }
        (num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;

    #[test]
    fn single_scalar_factor_is_t() {
        let f = BlaschkeFactorSpec::new(c64(0.0, 0.0), c64(1.0, 0.0), identity(1)).unwrap();
        let b = bp_build(identity(1), vec![f]).unwrap();
        let t = c64(0.3, -0.4);
        assert!((b.eval(t)[(0, 0)] - t).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(BlaschkeFactorSpec::new(c64(1.2, 0.0), c64(1.0, 0.0), identity(1)).is_err());
        assert!(BlaschkeFactorSpec::new(c64(0.2, 0.0), c64(1.1, 0.0), identity(1)).is_err());
        let not_proj = CMat::from_element(2, 2, c64(0.5, 0.1));
        assert!(matches!(
            BlaschkeFactorSpec::new(c64(0.2, 0.0), c64(1.0, 0.0), not_proj),
            Err(Error::InvalidFactor(_))
        ));
        let v = CMat::from_element(2, 2, c64(1.0, 0.0));
        assert!(bp_build(v, vec![]).is_err());
    }

    #[test]
    fn polynomial_form_matches_evaluation() {
        let f1 = BlaschkeFactorSpec::rank_one(c64(0.0, 0.8), c64(1.0, 0.0), &[c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        let f2 = BlaschkeFactorSpec::rank_one(
            c64(0.0, -0.8),
            c64(0.0, 1.0),
            &[c64(12.0 / 13.0, 0.0), c64(5.0 / 13.0, 0.0)],
        )
        .unwrap();
        let b = bp_build(identity(2), vec![f1, f2]).unwrap();
        let (n, d) = b.polynomial_form();
        for &t in &[c64(0.2, 0.1), c64(-0.7, 0.5), c64(1.5, 2.0)] {
            let direct = b.eval(t);
            let via = n.eval(t) / d.eval(&t);
            assert!(frobenius(&(direct - via)) < 1e-13);
        }
        assert_eq!(b.degree(), 2);
    }

    /// A random orthogonal projection of rank 1..m.
    fn random_projection(m: usize, raw: &[f64]) -> CMat {
        let a = CMat::from_fn(m, m, |i, j| c64(raw[2 * (i * m + j)], raw[2 * (i * m + j) + 1]));
        let rank = 1 + (raw[0].abs() * 1e3) as usize % m;
        let q = a.qr().q();
        let cols = q.columns(0, rank);
        &cols * cols.adjoint()
    }

    proptest::proptest! {
        #![proptest_config(crate::prop_config(64))]
        #[test]
        fn unitary_on_circle(
            m in 1usize..4,
            zeros in proptest::collection::vec((0.0f64..0.95, 0.0f64..6.283, 0.0f64..6.283), 1..4),
            raw in proptest::collection::vec(-1.0f64..1.0, 18 * 3),
            thetas in proptest::collection::vec(0.0f64..6.283, 64),
        ) {
            let factors: Vec<_> = zeros
                .iter()
                .enumerate()
                .map(|(k, &(r, arg, rot))| {
                    let p = random_projection(m, &raw[18 * k..]);
                    BlaschkeFactorSpec::new(Complex64::from_polar(r, arg), Complex64::from_polar(1.0, rot), p).unwrap()
                })
                .collect();
            let v = random_projection(m, &raw[..]).map(|z| z * 2.0) - identity(m);
            let b = bp_build(v, factors).unwrap();
            for th in thetas {
                let u = b.eval(Complex64::from_polar(1.0, th));
                proptest::prop_assert!(unitarity_defect(&u) <= 1e-10);
            }
        }
    }
}
