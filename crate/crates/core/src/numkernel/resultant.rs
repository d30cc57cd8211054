//! Sylvester resultants. Exact backend: fraction-free Bareiss elimination.
//! Floating backend: LU determinants at roots of unity, then inverse DFT.

use num_complex::Complex64;
use serde::Serialize;

use super::field::{ExactDiv, GaussRat, Ring, Scalar};
use super::linalg::{det, CMat};
use super::poly::Poly;
use super::roots::poly_roots;

/// Backend-specific determinant kernels.
pub trait ResultantScalar: Scalar {
    /// Determinant of a square matrix of scalars.
    fn det_scalar(m: Vec<Vec<Self>>) -> Self;
    /// Determinant of a square matrix with polynomial entries. `deg_bound`
    /// bounds the degree of the result.
    fn det_poly(m: Vec<Vec<Poly<Self>>>, deg_bound: usize) -> Poly<Self>;
}

/// Fraction-free Gaussian elimination (Bareiss); every division is exact.
pub fn bareiss_det<R: ExactDiv>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = v.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

impl ResultantScalar for GaussRat {
    fn det_scalar(m: Vec<Vec<Self>>) -> Self {
        bareiss_det(m)
    }
    fn det_poly(m: Vec<Vec<Poly<Self>>>, _deg_bound: usize) -> Poly<Self> {
        bareiss_det(m)
    }
}

impl ResultantScalar for Complex64 {
    fn det_scalar(m: Vec<Vec<Self>>) -> Self {
        let n = m.len();
        det(&CMat::from_fn(n, n, |i, j| m[i][j]))
    }
    fn det_poly(m: Vec<Vec<Poly<Self>>>, deg_bound: usize) -> Poly<Self> {
        let n = m.len();
        let nodes = deg_bound + 1;
        let values: Vec<Complex64> = (0..nodes)
            .map(|k| {
                let s = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64);
                det(&CMat::from_fn(n, n, |i, j| m[i][j].eval(&s)))
            })
            .collect();
        interpolate_unit_roots(&values).trim_relative(1e-13)
    }
}

/// Coefficients of the polynomial of degree `< values.len()` taking
/// `values[k]` at `exp(2πik/N)`.
pub fn interpolate_unit_roots(values: &[Complex64]) -> Poly<Complex64> {
    let n = values.len();
    let coeffs = (0..n)
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in values.iter().enumerate() {
                let phase = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, phase);
            }
            acc / n as f64
        })
        .collect();
    Poly::new(coeffs)
}

/// Reported when a declared leading coefficient (in `t`) vanishes
/// identically, or to list parameter values where it vanishes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingDrop {
    /// Which argument lost degree: `"f"`, `"g"` or both.
    pub inputs: Vec<&'static str>,
    /// Number of identically zero leading coefficients removed in total.
    pub trimmed: usize,
}

#[derive(Debug, Clone)]
pub struct ResultantOutput<T> {
    pub value: Poly<T>,
    pub leading_drop: Option<LeadingDrop>,
    /// Parameter values where a leading coefficient vanishes; the resultant
    /// can acquire spurious zeros there.
    pub degenerations: Vec<Complex64>,
}

/// Sylvester matrix of `f = Σ f_k t^k` and `g = Σ g_k t^k` (rows of `f`
/// first, descending powers).
pub fn sylvester<R: Ring>(f: &[R], g: &[R]) -> Vec<Vec<R>> {
    let n = f.len() - 1;
    let m = g.len() - 1;
    let size = n + m;
    let mut rows = vec![vec![R::zero(); size]; size];
    for i in 0..m {
        for (k, c) in f.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for j in 0..n {
        for (k, c) in g.iter().rev().enumerate() {
            rows[m + j][j + k] = c.clone();
        }
    }
    rows
}

fn trim_declared<R: Ring>(v: &[R]) -> (Vec<R>, usize) {
    let mut out = v.to_vec();
    let mut dropped = 0;
    while out.len() > 1 && out.last().is_some_and(Ring::is_zero) {
        out.pop();
        dropped += 1;
    }
    (out, dropped)
}

/// Resultant with respect to `t` of two polynomials whose coefficients are
/// polynomials in a parameter `s`. Coefficient slices are in ascending
/// powers of `t` with the declared degree `len - 1`.
pub fn resultant<T: ResultantScalar>(f: &[Poly<T>], g: &[Poly<T>]) -> ResultantOutput<T> {
    let (f, df) = trim_declared(f);
    let (g, dg) = trim_declared(g);
    let mut inputs = Vec::new();
    if df > 0 {
        inputs.push("f");
    }
    if dg > 0 {
        inputs.push("g");
    }
    let leading_drop = (!inputs.is_empty()).then(|| LeadingDrop { inputs, trimmed: df + dg });

    let mut degenerations = Vec::new();
    for lc in [f.last(), g.last()].into_iter().flatten() {
        let lc64 = lc.to_c64();
        if lc64.degree().is_some_and(|d| d > 0) {
            if let Ok(rs) = poly_roots(&lc64) {
                degenerations.extend(rs.iter().map(|r| r.value));
            }
        }
    }

    if f.iter().all(Ring::is_zero) || g.iter().all(Ring::is_zero) {
        return ResultantOutput { value: Poly::zero(), leading_drop, degenerations };
    }
    let n = f.len() - 1;
    let m = g.len() - 1;
    if n == 0 && m == 0 {
        return ResultantOutput { value: Poly::one(), leading_drop, degenerations };
    }
    let deg_f = f.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let deg_g = g.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let bound = m * deg_f + n * deg_g;
    let value = T::det_poly(sylvester(&f, &g), bound);
    ResultantOutput { value, leading_drop, degenerations }
}

/// Resultant of two scalar polynomials.
pub fn resultant_scalar<T: ResultantScalar>(f: &Poly<T>, g: &Poly<T>) -> T {
    match (f.degree(), g.degree()) {
        (None, _) | (_, None) => T::zero(),
        (Some(0), Some(0)) => T::one(),
        _ => T::det_scalar(sylvester(f.coeffs(), g.coeffs())),
    }
}
