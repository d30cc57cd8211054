//! Samples of the curve of triples `(z, w, t)` for which `F(t)` and
//! `F*(1/t̄)` have a common eigenvector with eigenvalues `z` and `w`.
//! The set is invariant under `(z, w, t) ↦ (w̄, z̄, 1/t̄)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::numkernel::linalg::{eigenvalues, frobenius, null_space, CMat};
use crate::symbols::MatrixSymbol;

/// Residual bound for a common eigenvector, relative to `1 + ‖·‖`.
pub const COMMON_EIGEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AhlforsPoint {
    pub z: Complex64,
    pub w: Complex64,
    pub t: Complex64,
    /// Dimension of the joint eigenspace.
    pub mult: usize,
}

/// Joint eigenpairs of `F(t)` and `G(t) = F*(1/t̄)` at each grid point.
/// Points where no joint eigenvector exists contribute nothing.
pub fn ahlfors_curve_sample(f: &MatrixSymbol, t_grid: &[Complex64]) -> Result<Vec<AhlforsPoint>> {
    let g = f.boundary_adjoint();
    let mut out = Vec::new();
    for &t in t_grid {
        let a = f.eval(t);
        let b = g.eval(t);
        for (z, w, mult) in joint_eigenpairs(&a, &b)? {
            out.push(AhlforsPoint { z, w, t, mult });
        }
    }
    Ok(out)
}

fn clusters(vals: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &v in vals {
        match out.iter_mut().find(|(c, _)| (c - v).norm() <= tol) {
            Some((c, n)) => {
                *c = (*c * *n as f64 + v) / (*n + 1) as f64;
                *n += 1;
            }
            None => out.push((v, 1)),
        }
    }
    out.into_iter().map(|(c, _)| c).collect()
}

/// `(z, w, dim)` for each joint eigenspace of `a` and `b`.
pub fn joint_eigenpairs(a: &CMat, b: &CMat) -> Result<Vec<(Complex64, Complex64, usize)>> {
    let m = a.nrows();
    let (na, nb) = (1.0 + frobenius(a), 1.0 + frobenius(b));
    let eye = CMat::identity(m, m);
    let mut out = Vec::new();
    for z in clusters(&eigenvalues(a)?, 1e-6 * na) {
        let v = null_space(&(a - &eye * z), 1e-7 * na);
        if v.ncols() == 0 {
            continue;
        }
        // b restricted to the eigenspace of a.
        let h = v.adjoint() * b * &v;
        let k = h.nrows();
        let eye_k = CMat::identity(k, k);
        for w in clusters(&eigenvalues(&h)?, 1e-6 * nb) {
            let y = null_space(&(&h - &eye_k * w), 1e-7 * nb);
            if y.ncols() == 0 {
                continue;
            }
            let phi = &v * y;
            let res_b = frobenius(&(b * &phi - &phi * w));
            let res_a = frobenius(&(a * &phi - &phi * z));
            if res_b <= COMMON_EIGEN_TOL * nb && res_a <= COMMON_EIGEN_TOL * na {
                out.push((z, w, phi.ncols()));
            }
        }
    }
    Ok(out)
}

/// Largest distance from the reflection `(w̄, z̄, 1/t̄)` of a sample to the
/// nearest sample at `1/t̄`, over samples whose reflected parameter is also
/// on the grid.
pub fn involution_defect(points: &[AhlforsPoint]) -> f64 {
    let mut worst: f64 = 0.0;
    for p in points {
        let tr = 1.0 / p.t.conj();
        let partners: Vec<&AhlforsPoint> = points.iter().filter(|q| (q.t - tr).norm() < 1e-12 * (1.0 + tr.norm())).collect();
        if partners.is_empty() {
            continue;
        }
        let (zr, wr) = (p.w.conj(), p.z.conj());
        let d = partners
            .iter()
            .map(|q| ((q.z - zr).norm() / (1.0 + zr.norm())).max((q.w - wr).norm() / (1.0 + wr.norm())))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    worst
}

/// Reflection-closed grid: `n` angles at each radius `r` and `1/r`.
pub fn paired_grid(radii: &[f64], n: usize, offset: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for &r in radii {
        for k in 0..n {
            let th = std::f64::consts::TAU * (k as f64 + offset) / n as f64;
            out.push(Complex64::from_polar(r, th));
            if r != 1.0 {
                out.push(Complex64::from_polar(1.0 / r, th));
            }
        }
    }
    out
}
