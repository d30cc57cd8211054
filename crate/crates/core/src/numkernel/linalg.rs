//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::linalg::{Schur, SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Eigenvalues of a general complex matrix from its complex Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![m[(0, 0)]]),
        2 => return Ok(eigenvalues_2x2(m)),
        _ => {}
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::NoConvergence("complex Schur iteration".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

fn eigenvalues_2x2(m: &CMat) -> Vec<Complex64> {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * c;
    let s = disc.sqrt();
    let l1 = half_tr + s;
    let l2 = half_tr - s;
    // Recover the smaller root from the product to avoid cancellation.
    let det = a * d - b * c;
    if l1.norm() >= l2.norm() && l1.norm() > 0.0 {
        vec![l1, det / l1]
    } else if l2.norm() > 0.0 {
        vec![det / l2, l2]
    } else {
        vec![l1, l2]
    }
}

pub fn det(m: &CMat) -> Complex64 {
    match m.nrows() {
        0 => c64(1.0, 0.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.clone().lu().determinant(),
    }
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with threshold `rel · σ₁`.
pub fn rank(sv: &[f64], rel: f64) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

/// Orthonormal basis (columns) of the numerical null space of `m`:
/// right singular vectors with `σ ≤ abs_tol`.
pub fn null_space(m: &CMat, abs_tol: f64) -> CMat {
    let n = m.ncols();
    let rows = m.nrows();
    // Pad to a square matrix so the SVD returns a full set of right vectors.
    let mut padded = CMat::zeros(rows.max(n), n);
    padded.view_mut((0, 0), (rows, n)).copy_from(m);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut cols = Vec::new();
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s <= abs_tol {
            cols.push(v_t.row(i).adjoint());
        }
    }
    if cols.is_empty() {
        return CMat::zeros(n, 0);
    }
    CMat::from_columns(&cols)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let herm = (m + m.adjoint()) * c64(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].partial_cmp(&eig.eigenvalues[i]).unwrap());
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_columns(&order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect::<Vec<_>>());
    (vals, vecs)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `‖A*A - I‖_F`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    frobenius(&(m.adjoint() * m - identity(m.nrows())))
}

/// `‖AA* - A*A‖_F`.
pub fn normality_defect(m: &CMat) -> f64 {
    frobenius(&(m * m.adjoint() - m.adjoint() * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_triangular_matrix() {
        let m = CMat::from_row_slice(
            3,
            3,
            &[
                c64(1.0, 0.0),
                c64(2.0, 1.0),
                c64(0.0, 3.0),
                c64(0.0, 0.0),
                c64(0.0, 1.0),
                c64(5.0, 0.0),
                c64(0.0, 0.0),
                c64(0.0, 0.0),
                c64(-2.0, 0.0),
            ],
        );
        let mut ev = eigenvalues(&m).unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((ev[0] - c64(-2.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c64(0.0, 1.0)).norm() < 1e-12);
        assert!((ev[2] - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn null_space_of_rank_one() {
        let v = CVec::from_vec(vec![c64(1.0, 0.0), c64(0.0, 1.0)]);
        let m = &v * v.adjoint();
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.ncols(), 1);
        assert!((m * ns).norm() < 1e-12);
    }
}
