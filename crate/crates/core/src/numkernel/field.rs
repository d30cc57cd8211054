//! Scalar rings used by the polynomial machinery.
//!
//! Two backends share one generic code path: `Complex64` for floating
//! evaluation and [`GaussRat`] (complex numbers with arbitrary precision
//! rational parts) for exact elimination.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rational: `p + q i` with `p, q` rational.
pub type GaussRat = Complex<BigRational>;

/// Arithmetic backend for operations that can run either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Float,
    Exact,
}

/// Commutative ring with identity.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
}

/// Ring in which division by a known divisor is exact (used by Bareiss).
pub trait ExactDiv: Ring {
    fn exact_div(&self, divisor: &Self) -> Self;
}

/// Field of complex scalars, floating or exact.
pub trait Scalar: Ring + Div<Output = Self> {
    /// `true` for the exact backend.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn from_c64(z: Complex64) -> Self;
    fn from_i64(n: i64) -> Self;
    /// Approximate modulus, used only for scaling and reporting.
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl ExactDiv for Complex64 {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl ExactDiv for GaussRat {
    fn exact_div(&self, divisor: &Self) -> Self {
        self.clone() / divisor.clone()
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    /// Exact binary expansion of the floating input.
    fn from_c64(z: Complex64) -> Self {
        Complex::new(f64_to_rat(z.re), f64_to_rat(z.im))
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaled integer division for huge numerators/denominators.
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits() as i64 - d.bits() as i64).clamp(-1000, 1000);
    let scaled = if shift > 60 {
        BigRational::new(n.clone(), d.clone() << (shift - 60) as usize)
    } else if shift < -60 {
        BigRational::new(n.clone() << (-shift - 60) as usize, d.clone())
    } else {
        r.clone()
    };
    let base = scaled.to_f64().unwrap_or(f64::NAN);
    if shift > 60 {
        base * 2f64.powi((shift - 60) as i32)
    } else if shift < -60 {
        base / 2f64.powi((-shift - 60) as i32)
    } else {
        base
    }
}

pub fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.3"` exactly.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let negative = mantissa.starts_with('-');
    let digits = mantissa.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    let all: String = format!("{int_part}{frac_part}");
    if all.is_empty() || !all.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut num: BigInt = all.parse().ok()?;
    if negative {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Canonical text form of a rational, `p/q` or `p`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn gauss(re: i64, re_den: i64, im: i64, im_den: i64) -> GaussRat {
    Complex::new(
        BigRational::new(BigInt::from(re), BigInt::from(re_den)),
        BigRational::new(BigInt::from(im), BigInt::from(im_den)),
    )
}

/// Squared modulus of an exact scalar, itself exact.
pub fn norm_sqr_exact(z: &GaussRat) -> BigRational {
    &z.re * &z.re + &z.im * &z.im
}

pub fn is_nonneg(r: &BigRational) -> bool {
    !r.is_negative()
}
