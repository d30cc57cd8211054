//! Finite sections of block Toeplitz and Hankel operators with rational
//! symbols, and self-commutator rank experiments.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::linalg::{frobenius, normality_defect as matrix_normality_defect, rank, singular_values, CMat};
use crate::symbols::fourier::{fourier_coeffs, FourierCoeffs};
use crate::symbols::MatrixSymbol;

pub const DEFAULT_RANK_TOL: f64 = 1e-8;
const MAX_PAD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Toeplitz,
    Hankel,
    Commutator,
}

#[derive(Debug, Clone)]
pub struct OperatorSection {
    /// Number of powers of `t` kept.
    pub n: usize,
    /// Block size.
    pub m: usize,
    pub mat: CMat,
    pub kind: SectionKind,
}

impl OperatorSection {
    pub fn block(&self, j: usize, k: usize) -> CMat {
        self.mat.view((j * self.m, k * self.m), (self.m, self.m)).into_owned()
    }
}

/// Block matrix with `rows × cols` blocks, block `(j, k) = coeff(j, k)`.
fn assemble(rows: usize, cols: usize, m: usize, coeff: impl Fn(usize, usize) -> CMat) -> CMat {
    let mut out = CMat::zeros(rows * m, cols * m);
    for j in 0..rows {
        for k in 0..cols {
            out.view_mut((j * m, k * m), (m, m)).copy_from(&coeff(j, k));
        }
    }
    out
}

/// Block `(j, k) = c_{j-k}(F)`, `0 ≤ j, k < N`.
pub fn toeplitz_section(f: &MatrixSymbol, n: usize) -> Result<OperatorSection> {
    check_order(n)?;
    let c = fourier_coeffs(f, -(n as i64 - 1), n as i64 - 1)?;
    let m = f.size();
    let mat = assemble(n, n, m, |j, k| c.get(j as i64 - k as i64));
    Ok(OperatorSection { n, m, mat, kind: SectionKind::Toeplitz })
}

/// Block `(j, k) = c_{-(j+k+1)}(F)`, `0 ≤ j, k < N`.
pub fn hankel_section(f: &MatrixSymbol, n: usize) -> Result<OperatorSection> {
    check_order(n)?;
    let c = fourier_coeffs(f, -(2 * n as i64), -1)?;
    let m = f.size();
    let mat = assemble(n, n, m, |j, k| c.get(-((j + k + 1) as i64)));
    Ok(OperatorSection { n, m, mat, kind: SectionKind::Hankel })
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DegenerateInput("section order must be at least 1".into()));
    }
    Ok(())
}

/// First index beyond which every coefficient norm stays below `rel` times
/// the largest one, estimated from the geometric decay rate set by the
/// poles.
fn bandwidth(f: &MatrixSymbol, rel: f64) -> usize {
    let poly_deg = f
        .entries()
        .iter()
        .map(|e| e.num().degree().unwrap_or(0).saturating_sub(e.den().degree().unwrap_or(0)))
        .max()
        .unwrap_or(0);
    let rho = f
        .poles()
        .iter()
        .map(|(p, _)| if p.norm() < 1.0 { p.norm() } else { 1.0 / p.norm() })
        .fold(0.0, f64::max);
    let max_mult = f.poles().iter().map(|(_, k)| *k).max().unwrap_or(1);
    let decay = if rho > 0.0 { (rel.ln() / rho.ln()).ceil() as usize + 8 * max_mult } else { 0 };
    (poly_deg + 1).max(decay).min(MAX_PAD)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CommutatorReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// `‖[T*,T] - Γ*Γ‖_F` on the interior block, for normal symbols.
    pub identity_residual: Option<f64>,
    /// Rows of padding used to close the infinite sums.
    pub padding: usize,
    /// Size of the interior block (in powers of `t`) used for the identity.
    pub interior: usize,
}

/// Rank of the compression `P_N (T_F* T_F - T_F T_F*) P_N` of the
/// self-commutator of an analytic Toeplitz operator.
///
/// `P_N T_F T_F* P_N` only involves the `N × N` section, but
/// `P_N T_F* T_F P_N` sums over all rows, so the rows are extended until the
/// remaining Fourier coefficients are negligible.
pub fn self_commutator_rank(f: &MatrixSymbol, n: usize, tol: f64) -> Result<CommutatorReport> {
    check_order(n)?;
    if f.poles().iter().any(|(p, _)| p.norm() <= 1.0) {
        return Err(Error::PreconditionViolation("self-commutator needs a symbol analytic on the closed disc".into()));
    }
    let m = f.size();
    let pad = bandwidth(f, 1e-17);
    let rows = n + pad;
    let c = fourier_coeffs(f, 0, rows as i64)?;
    let tall = assemble(rows, n, m, |j, k| if j >= k { c.get((j - k) as i64) } else { CMat::zeros(m, m) });
    let square = tall.rows(0, n * m).into_owned();
    let comm = tall.adjoint() * &tall - &square * square.adjoint();
    let sv = singular_values(&comm);
    let r = rank(&sv, tol);

    let interior = n.saturating_sub(interior_margin(&c)).max(1);
    let identity_residual = if normality_defect(f, 64) < 1e-9 {
        let gamma = hankel_of_adjoint(&c, rows, n, m);
        let d = &comm - gamma.adjoint() * gamma;
        Some(frobenius(&d.view((0, 0), (interior * m, interior * m)).into_owned()))
    } else {
        None
    };
    Ok(CommutatorReport { n, m, rank: r, singular_values: sv, identity_residual, padding: pad, interior })
}

/// Rows `l`, columns `k` of `Γ_{F*}`: block `c_{-(l+k+1)}(F_*) = c_{l+k+1}(F)*`.
fn hankel_of_adjoint(c: &FourierCoeffs, rows: usize, cols: usize, m: usize) -> CMat {
    assemble(rows, cols, m, |l, k| {
        let idx = (l + k + 1) as i64;
        if idx <= c.n_max {
            c.get(idx).adjoint()
        } else {
            CMat::zeros(m, m)
        }
    })
}

/// The identity is only asserted away from the truncation edge: the
/// margin is the index after which `‖c_n‖ < 10⁻¹²`.
fn interior_margin(c: &FourierCoeffs) -> usize {
    let big = (0..=c.n_max).map(|k| frobenius(&c.get(k))).fold(0.0, f64::max);
    (0..=c.n_max).rev().find(|&k| frobenius(&c.get(k)) >= 1e-12 * big.max(1.0)).map_or(0, |k| k as usize)
}

/// `max ‖F F* - F* F‖ / (1 + ‖F‖²)` over `samples` points of the circle.
pub fn normality_defect(f: &MatrixSymbol, samples: usize) -> f64 {
    (0..samples)
        .map(|k| {
            let t = Complex64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + 0.5) / samples as f64);
            let v = f.eval(t);
            let norm = frobenius(&v);
            matrix_normality_defect(&v) / (1.0 + norm * norm)
        })
        .fold(0.0, f64::max)
}

/// Numerical rank of a section at relative threshold `tol`.
pub fn section_rank(s: &OperatorSection, tol: f64) -> (usize, Vec<f64>) {
    let sv = singular_values(&s.mat);
    (rank(&sv, tol), sv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;
    use crate::numkernel::{CPoly, CRatFun};

    fn shift() -> MatrixSymbol {
        MatrixSymbol::scalar(CRatFun::from_poly(CPoly::x()))
    }

    fn example1(a: f64, beta: f64) -> MatrixSymbol {
        let num = CPoly::new(vec![c64(beta, 0.0), c64(-a, 0.0), c64(1.0, 0.0)]);
        let den = CPoly::new(vec![c64(-a, 0.0), c64(1.0, 0.0)]);
        MatrixSymbol::scalar(CRatFun::new_unreduced(num, den).unwrap())
    }

    #[test]
    fn shift_section_is_lower_shift() {
        let s = toeplitz_section(&shift(), 3).unwrap();
        for j in 0..3 {
            for k in 0..3 {
                let want = if j == k + 1 { 1.0 } else { 0.0 };
                assert!((s.mat[(j, k)] - c64(want, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn adjoint_section_is_adjoint() {
        let f = example1(2.0, 0.3);
        let a = toeplitz_section(&f, 6).unwrap();
        let b = toeplitz_section(&f.boundary_adjoint(), 6).unwrap();
        assert!(frobenius(&(a.mat.adjoint() - b.mat)) < 1e-13);
    }

    #[test]
    fn example1_section_entries() {
        let (a, beta) = (2.0, 0.3);
        let s = toeplitz_section(&example1(a, beta), 8).unwrap();
        for j in 0..8 {
            for k in 0..8 {
                let n = j as i32 - k as i32;
                let want = match n {
                    n if n < 0 => 0.0,
                    0 => -beta / a,
                    1 => 1.0 - beta / (a * a),
                    n => -beta / a.powi(n + 1),
                };
                assert!((s.mat[(j, k)].re - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hankel_ranks() {
        let f = example1(2.0, 0.3);
        let h = hankel_section(&f, 8).unwrap();
        assert!(frobenius(&h.mat) < 1e-14);
        let hs = hankel_section(&f.boundary_adjoint(), 8).unwrap();
        let (r, sv) = section_rank(&hs, 1e-10);
        assert_eq!(r, 2);
        assert!(sv[2] / sv[0] < 1e-10);
        let inv = MatrixSymbol::scalar(CRatFun::new_unreduced(CPoly::one(), CPoly::x()).unwrap());
        assert_eq!(section_rank(&hankel_section(&inv, 6).unwrap(), 1e-10).0, 1);
    }

    #[test]
    fn commutator_of_shift_has_rank_one() {
        let rep = self_commutator_rank(&shift(), 16, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(rep.rank, 1);
        assert!(rep.identity_residual.unwrap() < 1e-12);
    }

    #[test]
    fn commutator_example1() {
        let rep = self_commutator_rank(&example1(2.0, 0.3), 32, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(rep.rank, 2);
        assert!(rep.singular_values[2] / rep.singular_values[0] < 1e-9);
        assert!(rep.identity_residual.unwrap() < 1e-8);
    }

    #[test]
    fn commutator_rejects_inner_poles() {
        let inv = MatrixSymbol::scalar(CRatFun::new_unreduced(CPoly::one(), CPoly::x()).unwrap());
        assert!(matches!(self_commutator_rank(&inv, 8, 1e-8), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn jordan_block() {
        let entries = vec![
            CRatFun::from_poly(CPoly::x()),
            CRatFun::constant(c64(1.0, 0.0)),
            CRatFun::from_poly(CPoly::zero()),
            CRatFun::from_poly(CPoly::x()),
        ];
        let f = MatrixSymbol::new(2, entries).unwrap();
        assert!(normality_defect(&f, 64) > 0.1);
        assert_eq!(normality_defect(&MatrixSymbol::diagonal_poly(2, &CPoly::x()), 64), 0.0);
        let r8 = self_commutator_rank(&f, 8, DEFAULT_RANK_TOL).unwrap();
        let r16 = self_commutator_rank(&f, 16, DEFAULT_RANK_TOL).unwrap();
        assert!(r16.rank > r8.rank);
        assert!(r16.identity_residual.is_none());
    }

    #[test]
    fn toeplitz_is_linear() {
        let f = example1(2.0, 0.3);
        let g = example1(-1.5, 0.7);
        let sum = f.add(&g).unwrap();
        let lhs = toeplitz_section(&sum, 5).unwrap().mat;
        let rhs = toeplitz_section(&f, 5).unwrap().mat + toeplitz_section(&g, 5).unwrap().mat;
        assert!(frobenius(&(lhs - rhs)) < 1e-12);
    }
}
