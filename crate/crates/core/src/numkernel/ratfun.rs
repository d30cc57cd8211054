//! Scalar rational functions `num / den` with reduction, reflection across
//! the unit circle and partial-fraction (Laurent) expansions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::Scalar;
use super::poly::{CPoly, Poly};
use super::roots::{poly_roots, Root};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct RatFun<T> {
    num: Poly<T>,
    den: Poly<T>,
}

pub type CRatFun = RatFun<Complex64>;

/// Relative tolerance deciding that a denominator root also annihilates
/// the numerator in the floating backend.
pub const CANCEL_TOL: f64 = 1e-7;

impl<T: Scalar> RatFun<T> {
    /// Builds without reduction. Fails on an identically zero denominator.
    pub fn new_unreduced(num: Poly<T>, den: Poly<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateInput("rational function with zero denominator".into()));
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: T) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    pub fn eval(&self, t: &T) -> T {
        self.num.eval(t) / self.den.eval(t)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact reduction: divide by the gcd and make the denominator monic.
    pub fn reduce_exact(&self) -> Self {
        let g = self.num.gcd(&self.den);
        let (mut num, _) = self.num.div_rem(&g);
        let (mut den, _) = self.den.div_rem(&g);
        if num.is_zero() {
            den = Poly::one();
        }
        let lead = den.leading().cloned().unwrap();
        let inv = T::one() / lead;
        num = num.scale(&inv);
        den = den.scale(&inv);
        RatFun { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFun {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFun { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn neg(&self) -> Self {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    /// `t ↦ conj(f(1/conj t))`, the reflection across the unit circle.
    pub fn reflect(&self) -> Self {
        if self.num.is_zero() {
            return RatFun { num: Poly::zero(), den: Poly::one() };
        }
        let a = self.num.degree().unwrap();
        let b = self.den.degree().unwrap();
        let num_r = self.num.conj_coeffs().reversed(a);
        let den_r = self.den.conj_coeffs().reversed(b);
        if b >= a {
            RatFun { num: num_r.shift_up(b - a), den: den_r }
        } else {
            RatFun { num: num_r, den: den_r.shift_up(a - b) }
        }
    }

    pub fn to_c64(&self) -> CRatFun {
        RatFun { num: self.num.to_c64(), den: self.den.to_c64() }
    }
}

impl CRatFun {
    /// Floating reduction: cancels denominator roots at which the numerator
    /// vanishes to `CANCEL_TOL` relative to its evaluation scale, trims
    /// negligible leading coefficients, and makes the denominator monic.
    pub fn reduce(&self) -> CRatFun {
        let mut num = self.num.trim_relative(1e-14);
        let mut den = self.den.trim_relative(1e-14);
        if num.is_zero() {
            return RatFun { num: Poly::zero(), den: Poly::one() };
        }
        if den.degree().is_some_and(|d| d > 0) {
            if let Ok(roots) = poly_roots(&den) {
                for root in roots {
                    for _ in 0..root.multiplicity {
                        if num.degree().unwrap_or(0) == 0 {
                            break;
                        }
                        let (val, scale) = num.eval_with_scale(root.value);
                        if val.norm() <= CANCEL_TOL * scale {
                            num = num.deflate(&root.value).0;
                            den = den.deflate(&root.value).0;
                        } else {
                            break;
                        }
                    }
                }
            }
        }
        let lead = *den.leading().unwrap();
        RatFun { num: num.scale(&(1.0 / lead)), den: den.scale(&(1.0 / lead)) }
    }

    /// Poles with multiplicity (roots of the denominator).
    pub fn poles(&self) -> Vec<Root> {
        match self.den.degree() {
            Some(d) if d > 0 => poly_roots(&self.den).unwrap_or_default(),
            _ => Vec::new(),
        }
    }

    pub fn partial_fractions(&self) -> PartialFractions {
        let (poly, rem) = self.num.div_rem(&self.den);
        let mut terms = Vec::new();
        if !rem.is_zero() {
            for root in self.poles() {
                terms.push(principal_part(&rem, &self.den, root));
            }
        }
        PartialFractions { poly, terms }
    }
}

/// `Σ_i coeffs[i] (t - pole)^{-(i+1)}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoleTerm {
    pub pole: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl PoleTerm {
    pub fn residue(&self) -> Complex64 {
        self.coeffs.first().copied().unwrap_or_default()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Debug, Clone)]
pub struct PartialFractions {
    pub poly: CPoly,
    pub terms: Vec<PoleTerm>,
}

fn principal_part(num: &CPoly, den: &CPoly, root: Root) -> PoleTerm {
    let p = root.value;
    let k = root.multiplicity;
    let mut h = den.clone();
    for _ in 0..k {
        h = h.deflate(&p).0;
    }
    // num(p + u) / h(p + u) as a power series in u, first k terms.
    let n_sh = num.taylor_shift(&p);
    let h_sh = h.taylor_shift(&p);
    let h0 = h_sh.coeff(0);
    let mut series = vec![Complex64::new(0.0, 0.0); k];
    for j in 0..k {
        let mut acc = n_sh.coeff(j);
        for i in 1..=j {
            acc -= h_sh.coeff(i) * series[j - i];
        }
        series[j] = acc / h0;
    }
    // series[j] multiplies u^{j-k}; store by descending pole order index.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
    for (j, s) in series.into_iter().enumerate() {
        coeffs[k - 1 - j] = s;
    }
    PoleTerm { pole: p, coeffs }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

impl PartialFractions {
    /// Laurent coefficient of `t^n` of the expansion valid on the unit
    /// circle (poles inside contribute negative powers, poles outside
    /// nonnegative powers). Poles on the circle are the caller's problem.
    pub fn laurent_coeff(&self, n: i64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        if n >= 0 {
            acc += self.poly.coeff(n as usize);
        }
        for term in &self.terms {
            let p = term.pole;
            for (i, a) in term.coeffs.iter().enumerate() {
                let k = i + 1;
                if p.norm() < 1.0 {
                    // a (t-p)^{-k} = a Σ_j C(j+k-1,k-1) p^j t^{-j-k}
                    let j = -n - k as i64;
                    if j >= 0 {
                        acc += a * binomial(j as usize + k - 1, k - 1) * p.powi(j as i32);
                    }
                } else if n >= 0 {
                    // a (t-p)^{-k} = a (-p)^{-k} Σ_j C(j+k-1,k-1) p^{-j} t^j
                    acc += a * (-p).powi(-(k as i32)) * binomial(n as usize + k - 1, k - 1) * p.powi(-(n as i32));
                }
            }
        }
        acc
    }

    /// Residue at the pole closest to `t0`.
    pub fn residue_near(&self, t0: Complex64) -> Option<Complex64> {
        self.terms
            .iter()
            .min_by(|a, b| (a.pole - t0).norm().partial_cmp(&(b.pole - t0).norm()).unwrap())
            .map(PoleTerm::residue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::field::{gauss, GaussRat};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn common_factor_cancels() {
        let num = CPoly::from_roots(&[c(0.3, 0.1), c(2.0, -1.0)]);
        let den = CPoly::from_roots(&[c(0.3, 0.1), c(-1.5, 0.0), c(0.0, 3.0)]);
        let r = RatFun::new_unreduced(num, den).unwrap().reduce();
        assert_eq!(r.num().degree(), Some(1));
        assert_eq!(r.den().degree(), Some(2));
    }

    #[test]
    fn exact_reduction() {
        let g = Poly::from_roots(&[gauss(1, 3, 0, 1)]);
        let num = &g * &Poly::<GaussRat>::from_roots(&[gauss(2, 1, 1, 1)]);
        let den = &g * &Poly::<GaussRat>::from_roots(&[gauss(0, 1, 1, 2)]);
        let r = RatFun::new_unreduced(num, den).unwrap().reduce_exact();
        assert_eq!(r.den(), &Poly::from_roots(&[gauss(0, 1, 1, 2)]));
        assert_eq!(r.reduce_exact(), r);
    }

    #[test]
    fn reflection_of_example_symbol() {
        // F(t) = t + β/(t-a) reflects to 1/t + conj(β) t / (1 - conj(a) t).
        let a = c(2.0, 0.5);
        let beta = c(0.3, -0.2);
        // num = t^2 - a t + β, den = t - a
        let f = RatFun::new_unreduced(
            CPoly::new(vec![beta, -a, c(1.0, 0.0)]),
            CPoly::new(vec![-a, c(1.0, 0.0)]),
        )
        .unwrap();
        let g = f.reflect();
        for &t in &[c(0.4, 0.1), c(-0.2, 0.7), c(1.3, -0.4)] {
            let expect = 1.0 / t + beta.conj() * t / (1.0 - a.conj() * t);
            assert!((g.eval(&t) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn laurent_coefficients_of_simple_poles() {
        // β/(t-a) with |a|>1: coefficients -β/a^{n+1} for n >= 0.
        let a = c(2.0, 0.0);
        let beta = c(0.3, 0.0);
        let f = RatFun::new_unreduced(CPoly::constant(beta), CPoly::new(vec![-a, c(1.0, 0.0)])).unwrap();
        let pf = f.partial_fractions();
        for n in 0..6 {
            let expect = -beta / a.powi(n + 1);
            assert!((pf.laurent_coeff(n as i64) - expect).norm() < 1e-15);
        }
        assert_eq!(pf.laurent_coeff(-1), c(0.0, 0.0));
        // Double pole inside: 1/(t-p)^2 = Σ (j+1) p^j t^{-j-2}.
        let p = c(0.25, 0.1);
        let g = RatFun::new_unreduced(CPoly::one(), CPoly::from_roots(&[p, p])).unwrap();
        let pf = g.partial_fractions();
        for j in 0..5 {
            let expect = (j as f64 + 1.0) * p.powi(j);
            assert!((pf.laurent_coeff(-(j as i64) - 2) - expect).norm() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(crate::prop_config(64))]
        #[test]
        fn reduction_is_idempotent(
            r1 in -1.0f64..1.0, r2 in -1.0f64..1.0, s1 in -2.0f64..2.0, s2 in -2.0f64..2.0
        ) {
            let common = c(r1, r2);
            let num = CPoly::from_roots(&[common, c(s1, 0.5)]);
            let den = CPoly::from_roots(&[common, c(s2, -0.5), c(1.5, 1.5)]);
            let once = RatFun::new_unreduced(num, den).unwrap().reduce();
            let twice = once.reduce();
            prop_assert_eq!(once.num().degree(), twice.num().degree());
            prop_assert_eq!(once.den().degree(), twice.den().degree());
            for k in 0..=once.den().degree().unwrap() {
                prop_assert!((once.den().coeff(k) - twice.den().coeff(k)).norm() < 1e-9);
            }
        }
    }
}
