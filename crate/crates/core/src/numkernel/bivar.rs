//! Bivariate polynomials `Q(z, w) = Σ a_jk z^j w^k` and their recovery from
//! point evaluations.

use num_complex::Complex64;
use serde::Serialize;

use super::field::{Ring, Scalar};
use super::poly::Poly;
use crate::error::{Error, Result};

/// `coeffs[j][k]` multiplies `z^j w^k`. Trailing all-zero rows and columns
/// are trimmed.
#[derive(Clone, PartialEq, Debug)]
pub struct BivarPoly<T> {
    coeffs: Vec<Vec<T>>,
}

impl<T: Scalar> BivarPoly<T> {
    pub fn new(coeffs: Vec<Vec<T>>) -> Self {
        let mut p = BivarPoly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        BivarPoly { coeffs: Vec::new() }
    }

    fn trim(&mut self) {
        let cols = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        for row in &mut self.coeffs {
            row.resize(cols, T::zero());
        }
        while self.coeffs.last().is_some_and(|r| r.iter().all(Ring::is_zero)) {
            self.coeffs.pop();
        }
        let mut keep = 0;
        for row in &self.coeffs {
            if let Some(k) = row.iter().rposition(|c| !c.is_zero()) {
                keep = keep.max(k + 1);
            }
        }
        for row in &mut self.coeffs {
            row.truncate(keep);
        }
        if keep == 0 {
            self.coeffs.clear();
        }
    }

    pub fn coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize, k: usize) -> T {
        self.coeffs.get(j).and_then(|r| r.get(k)).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg_z(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn deg_w(&self) -> usize {
        self.coeffs.first().map_or(0, |r| r.len().saturating_sub(1))
    }

    /// `Q(z, w)` by nested Horner.
    pub fn eval(&self, z: &T, w: &T) -> T {
        let mut acc = T::zero();
        for row in self.coeffs.iter().rev() {
            let mut inner = T::zero();
            for c in row.iter().rev() {
                inner = inner * w.clone() + c.clone();
            }
            acc = acc * z.clone() + inner;
        }
        acc
    }

    /// Coefficients of `Q` as a polynomial in `w` with polynomial
    /// coefficients in `z`.
    pub fn as_poly_in_w(&self) -> Vec<Poly<T>> {
        (0..=self.deg_w())
            .map(|k| Poly::new((0..=self.deg_z()).map(|j| self.coeff(j, k)).collect()))
            .collect()
    }

    /// Coefficients of `Q` as a polynomial in `z` with polynomial
    /// coefficients in `w`.
    pub fn as_poly_in_z(&self) -> Vec<Poly<T>> {
        (0..=self.deg_z())
            .map(|j| Poly::new((0..=self.deg_w()).map(|k| self.coeff(j, k)).collect()))
            .collect()
    }

    pub fn scale(&self, c: &T) -> Self {
        BivarPoly::new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(|a| a.clone() * c.clone()).collect())
                .collect(),
        )
    }

    /// Max over `(j,k)` of `|a_kj - conj(a_jk)|`, relative to the largest
    /// coefficient.
    pub fn real_type_defect(&self) -> f64 {
        let n = self.deg_z().max(self.deg_w());
        let mut worst: f64 = 0.0;
        let mut top: f64 = 0.0;
        for j in 0..=n {
            for k in 0..=n {
                let a = self.coeff(j, k);
                top = top.max(a.modulus());
                worst = worst.max((self.coeff(k, j) - a.conj()).modulus());
            }
        }
        if top == 0.0 {
            0.0
        } else {
            worst / top
        }
    }

    /// Real-type test `a_kj = conj(a_jk)`: exact equality in the exact
    /// backend, relative tolerance `tol` otherwise.
    pub fn is_real_type(&self, tol: f64) -> bool {
        if T::EXACT {
            let n = self.deg_z().max(self.deg_w());
            (0..=n).all(|j| (0..=n).all(|k| self.coeff(k, j) == self.coeff(j, k).conj()))
        } else {
            self.real_type_defect() <= tol
        }
    }

    pub fn to_c64(&self) -> BivarPoly<Complex64> {
        BivarPoly::new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(Scalar::to_c64).collect())
                .collect(),
        )
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().flatten().map(Scalar::modulus).fold(0.0, f64::max)
    }
}

impl BivarPoly<Complex64> {
    /// Multiplies by the unimodular constant that makes `Q` closest to real
    /// type. If `Q = c·Q₀` with `Q₀` of real type then `Σ a_jk a_kj = c²Σ|a₀|²`,
    /// which fixes the phase of `c` up to sign.
    pub fn normalize_real_type(&self) -> Self {
        let n = self.deg_z().max(self.deg_w());
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            for k in 0..=n {
                s += self.coeff(j, k) * self.coeff(k, j);
            }
        }
        if s.norm() == 0.0 {
            return self.clone();
        }
        let phase = Complex64::from_polar(1.0, -0.5 * s.arg());
        let mut out = self.scale(&phase);
        // Fix the residual sign so the largest diagonal coefficient is positive.
        let diag = (0..=n)
            .map(|j| out.coeff(j, j))
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap_or_default();
        if diag.re < 0.0 {
            out = out.scale(&Complex64::new(-1.0, 0.0));
        }
        out
    }
}

impl<T: Scalar> BivarPoly<T> {
    /// Exact-backend normalization: divide by the first nonzero diagonal
    /// coefficient, which is real up to the common scalar factor.
    pub fn normalize_by_diagonal(&self) -> Self {
        let n = self.deg_z().max(self.deg_w());
        match (0..=n).map(|j| self.coeff(j, j)).find(|c| !c.is_zero()) {
            Some(d) => self.scale(&(T::one() / d)),
            None => self.clone(),
        }
    }
}

/// Options for [`bivar_fit`].
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// Radius of the circle carrying the `z` nodes.
    pub radius_z: f64,
    /// Radius of the circle carrying the `w` nodes.
    pub radius_w: f64,
    /// Largest admissible condition estimate of the scaled Vandermonde maps.
    pub cond_limit: f64,
    /// Relative residual on the validation grid above which the degree
    /// bounds are reported as too small.
    pub validation_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { radius_z: 1.0, radius_w: 1.0, cond_limit: 1e8, validation_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    /// Max relative mismatch at the interpolation nodes.
    pub node_residual: f64,
    /// Max relative mismatch on a disjoint, rotated validation grid.
    pub validation_residual: f64,
    pub condition_estimate: f64,
}

/// Recovers a polynomial of bidegree `(deg_z, deg_w)` from its values on a
/// tensor grid of scaled roots of unity. With the nodes on circles the
/// Vandermonde maps are scaled DFTs with condition `max(r, 1/r)^deg`.
pub fn bivar_fit(
    evaluator: impl Fn(Complex64, Complex64) -> Complex64 + Sync,
    deg_z: usize,
    deg_w: usize,
    opts: FitOptions,
) -> Result<(BivarPoly<Complex64>, FitReport)> {
    let cond = |r: f64, d: usize| r.max(1.0 / r).powi(d as i32);
    let estimate = cond(opts.radius_z, deg_z) * cond(opts.radius_w, deg_w);
    if estimate > opts.cond_limit {
        return Err(Error::Conditioning { estimate, limit: opts.cond_limit });
    }
    let nz = deg_z + 1;
    let nw = deg_w + 1;
    let tau = 2.0 * std::f64::consts::PI;
    let zn = |i: usize, off: f64| Complex64::from_polar(opts.radius_z, tau * (i as f64 + off) / nz as f64);
    let wn = |l: usize, off: f64| Complex64::from_polar(opts.radius_w, tau * (l as f64 + off) / nw as f64);

    let mut values = vec![vec![Complex64::new(0.0, 0.0); nw]; nz];
    for (i, row) in values.iter_mut().enumerate() {
        for (l, v) in row.iter_mut().enumerate() {
            *v = evaluator(zn(i, 0.0), wn(l, 0.0));
            if !v.is_finite() {
                return Err(Error::DegenerateInput(format!(
                    "evaluator not finite at grid node ({i}, {l})"
                )));
            }
        }
    }
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); nw]; nz];
    for (j, row) in coeffs.iter_mut().enumerate() {
        for (k, a) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, vrow) in values.iter().enumerate() {
                for (l, v) in vrow.iter().enumerate() {
                    let phase = -tau * (((i * j) % nz) as f64 / nz as f64 + ((l * k) % nw) as f64 / nw as f64);
                    acc += v * Complex64::from_polar(1.0, phase);
                }
            }
            *a = acc / (nz * nw) as f64 / (opts.radius_z.powi(j as i32) * opts.radius_w.powi(k as i32));
        }
    }
    let scale = values.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let poly = BivarPoly::new(coeffs);
    let rel = |d: f64| if scale > 0.0 { d / scale } else { d };

    let mut node_residual: f64 = 0.0;
    for (i, vrow) in values.iter().enumerate() {
        for (l, v) in vrow.iter().enumerate() {
            node_residual = node_residual.max(rel((poly.eval(&zn(i, 0.0), &wn(l, 0.0)) - v).norm()));
        }
    }
    let mut validation_residual: f64 = 0.0;
    for i in 0..nz {
        for l in 0..nw {
            let (z, w) = (zn(i, 0.37), wn(l, 0.61));
            validation_residual = validation_residual.max(rel((poly.eval(&z, &w) - evaluator(z, w)).norm()));
        }
    }
    Ok((poly, FitReport { node_residual, validation_residual, condition_estimate: estimate }))
}

/// Exact recovery from values on the integer grid `{0..=deg_z} × {0..=deg_w}`
/// (Newton divided differences in each variable).
pub fn bivar_interpolate_exact<T: Scalar>(
    evaluator: impl Fn(&T, &T) -> T,
    deg_z: usize,
    deg_w: usize,
) -> BivarPoly<T> {
    let zs: Vec<T> = (0..=deg_z as i64).map(T::from_i64).collect();
    let ws: Vec<T> = (0..=deg_w as i64).map(T::from_i64).collect();
    // For each z node, interpolate in w.
    let rows: Vec<Poly<T>> = zs
        .iter()
        .map(|z| {
            let vals: Vec<T> = ws.iter().map(|w| evaluator(z, w)).collect();
            newton_interpolate(&ws, &vals)
        })
        .collect();
    // Then interpolate each w-coefficient across z.
    let mut coeffs = vec![vec![T::zero(); deg_w + 1]; deg_z + 1];
    for k in 0..=deg_w {
        let vals: Vec<T> = rows.iter().map(|p| p.coeff(k)).collect();
        let pz = newton_interpolate(&zs, &vals);
        for (j, row) in coeffs.iter_mut().enumerate() {
            row[k] = pz.coeff(j);
        }
    }
    BivarPoly::new(coeffs)
}

/// Interpolating polynomial through `(xs[i], ys[i])`, in monomial form.
pub fn newton_interpolate<T: Scalar>(xs: &[T], ys: &[T]) -> Poly<T> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
        }
    }
    let mut p = Poly::zero();
    for i in (0..n).rev() {
        p = &(&p * &Poly::new(vec![-xs[i].clone(), T::one()])) + &Poly::constant(dd[i].clone());
    }
    p
}
