//! Rational matrix symbols stored entrywise, and the composition
//! `F(t) = ψ(t, B(t))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::blaschke::BlaschkePotapov;
use super::polymat::PolyMatrix;
use crate::error::{Error, Result};
use crate::numkernel::linalg::{det, CMat};
use crate::numkernel::resultant::interpolate_unit_roots;
use crate::numkernel::{BivarPoly, CPoly, CRatFun};

/// Tri-state classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    True,
    False,
    Unknown,
}

impl Flag {
    pub fn from_bool(b: bool) -> Flag {
        if b {
            Flag::True
        } else {
            Flag::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Flag::True
    }

    pub fn and(self, other: Flag) -> Flag {
        match (self, other) {
            (Flag::False, _) | (_, Flag::False) => Flag::False,
            (Flag::True, Flag::True) => Flag::True,
            _ => Flag::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolFlags {
    pub normal: Flag,
    pub analytic_closed_disc: Flag,
    pub nondegenerate: Flag,
}

impl Default for SymbolFlags {
    fn default() -> Self {
        SymbolFlags { normal: Flag::Unknown, analytic_closed_disc: Flag::Unknown, nondegenerate: Flag::Unknown }
    }
}

/// An `m × m` matrix of reduced rational functions of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSymbol {
    m: usize,
    entries: Vec<CRatFun>,
    pub flags: SymbolFlags,
}

impl MatrixSymbol {
    /// Row-major entries; each is reduced.
    pub fn new(m: usize, entries: Vec<CRatFun>) -> Result<Self> {
        if m == 0 || entries.len() != m * m {
            return Err(Error::DegenerateInput(format!("{} entries for a {m}x{m} symbol", entries.len())));
        }
        Ok(MatrixSymbol { m, entries: entries.iter().map(CRatFun::reduce).collect(), flags: SymbolFlags::default() })
    }

    pub fn scalar(f: CRatFun) -> Self {
        MatrixSymbol { m: 1, entries: vec![f.reduce()], flags: SymbolFlags::default() }
    }

    /// `p(t)·I`.
    pub fn diagonal_poly(m: usize, p: &CPoly) -> Self {
        let entries = (0..m * m)
            .map(|k| if k / m == k % m { CRatFun::from_poly(p.clone()) } else { CRatFun::from_poly(CPoly::zero()) })
            .collect();
        MatrixSymbol { m, entries, flags: SymbolFlags::default() }
    }

    pub fn constant(c: &CMat) -> Self {
        let m = c.nrows();
        let entries = (0..m * m).map(|k| CRatFun::constant(c[(k / m, k % m)])).collect();
        MatrixSymbol { m, entries, flags: SymbolFlags::default() }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &CRatFun {
        &self.entries[i * self.m + j]
    }

    pub fn entries(&self) -> &[CRatFun] {
        &self.entries
    }

    pub fn eval(&self, t: Complex64) -> CMat {
        CMat::from_fn(self.m, self.m, |i, j| self.entry(i, j).eval(&t))
    }

    /// The boundary function of `F*`, i.e. `t ↦ F(1/conj t)*`. On the unit
    /// circle it coincides with `F(t)*`.
    pub fn boundary_adjoint(&self) -> MatrixSymbol {
        let m = self.m;
        let entries = (0..m * m).map(|k| self.entry(k % m, k / m).reflect().reduce()).collect();
        MatrixSymbol { m, entries, flags: SymbolFlags::default() }
    }

    /// Distinct poles over all entries, each with the largest multiplicity
    /// seen in any entry.
    pub fn poles(&self) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for e in &self.entries {
            for r in e.poles() {
                match out.iter_mut().find(|(p, _)| (*p - r.value).norm() <= 1e-6 * (1.0 + p.norm())) {
                    Some(slot) => slot.1 = slot.1.max(r.multiplicity),
                    None => out.push((r.value, r.multiplicity)),
                }
            }
        }
        out
    }

    /// `min | |p| - 1 |` over poles, or infinity for a polynomial symbol.
    pub fn boundary_pole_distance(&self) -> Option<(Complex64, f64)> {
        self.poles()
            .into_iter()
            .map(|(p, _)| (p, (p.norm() - 1.0).abs()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
    }

    pub fn require_no_boundary_pole(&self, clearance: f64) -> Result<()> {
        match self.boundary_pole_distance() {
            Some((p, d)) if d <= clearance => Err(Error::BoundaryPole { pole_re: p.re, pole_im: p.im, distance: d }),
            _ => Ok(()),
        }
    }

    pub fn add(&self, other: &MatrixSymbol) -> Result<MatrixSymbol> {
        if self.m != other.m {
            return Err(Error::DegenerateInput("symbol sizes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        MatrixSymbol::new(self.m, entries)
    }

    /// `t ↦ F(ξ t)`.
    pub fn reparametrize(&self, xi: Complex64) -> MatrixSymbol {
        let rot = |p: &CPoly| {
            let mut pw = Complex64::new(1.0, 0.0);
            let mut c = Vec::with_capacity(p.coeffs().len());
            for a in p.coeffs() {
                c.push(a * pw);
                pw *= xi;
            }
            CPoly::new(c)
        };
        let entries = self
            .entries
            .iter()
            .map(|e| CRatFun::new_unreduced(rot(e.num()), rot(e.den())).unwrap().reduce())
            .collect();
        MatrixSymbol { m: self.m, entries, flags: self.flags }
    }
}

/// `ψ(t, η) = num(t, η) / den(t, η)`; `coeffs[j][k]` multiplies `t^j η^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBivarRational {
    pub num: BivarPoly<Complex64>,
    pub den: BivarPoly<Complex64>,
}

impl ScalarBivarRational {
    pub fn new(num: BivarPoly<Complex64>, den: BivarPoly<Complex64>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DegenerateInput("psi has a zero denominator".into()));
        }
        Ok(ScalarBivarRational { num, den })
    }

    /// `ψ(t, η) = η`.
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        ScalarBivarRational { num: BivarPoly::new(vec![vec![zero, one]]), den: BivarPoly::new(vec![vec![one]]) }
    }

    pub fn eval(&self, t: Complex64, eta: Complex64) -> Complex64 {
        self.num.eval(&t, &eta) / self.den.eval(&t, &eta)
    }

    /// `num(t, B)·den(t, B)^{-1}` for a matrix argument.
    pub fn eval_matrix(&self, t: Complex64, b: &CMat) -> Option<CMat> {
        let n = bivar_at_matrix(&self.num, t, b);
        let d = bivar_at_matrix(&self.den, t, b);
        d.try_inverse().map(|inv| n * inv)
    }
}

fn bivar_at_matrix(p: &BivarPoly<Complex64>, t: Complex64, b: &CMat) -> CMat {
    let m = b.nrows();
    let mut acc = CMat::zeros(m, m);
    let deg_eta = p.deg_w();
    let mut eta_pow = CMat::identity(m, m);
    for k in 0..=deg_eta {
        let coeff: Complex64 = (0..=p.deg_z()).rev().fold(Complex64::new(0.0, 0.0), |s, j| s * t + p.coeff(j, k));
        acc += &eta_pow * coeff;
        eta_pow = &eta_pow * b;
    }
    acc
}

/// `Σ_{j,k} c_jk t^j N^k d^{K-k}` for `B = N/d`.
fn homogenize(p: &BivarPoly<Complex64>, n: &PolyMatrix, d: &CPoly, k_max: usize) -> PolyMatrix {
    let m = n.size();
    let mut acc = PolyMatrix::zeros(m);
    let mut n_pow = PolyMatrix::identity(m);
    for k in 0..=k_max {
        let coeff_t = CPoly::new((0..=p.deg_z()).map(|j| p.coeff(j, k)).collect());
        if !coeff_t.is_zero() {
            let scal = &coeff_t * &d.pow(k_max - k);
            acc = acc.add(&n_pow.scale_poly(&scal));
        }
        if k < k_max {
            n_pow = n_pow.mul(n);
        }
    }
    acc
}

/// `F(t) = ψ(t, B(t))` as an entrywise rational symbol.
///
/// Writing `B = N/d`, both `num(t,B)` and `den(t,B)` become polynomial
/// matrices after multiplying by `d^K`. The quotient is then
/// `Num·adj(Den)/det(Den)`, whose polynomial entries are recovered by
/// evaluation at roots of unity (one linear-algebra solve per node) and an
/// inverse DFT, then reduced.
pub fn compose_psi(psi: &ScalarBivarRational, b: &BlaschkePotapov) -> Result<MatrixSymbol> {
    let m = b.size();
    let (n, d) = b.polynomial_form();
    let k_max = psi.num.deg_w().max(psi.den.deg_w());
    let num_m = homogenize(&psi.num, &n, &d, k_max);

    if psi.den.deg_w() == 0 {
        // ψ's denominator is a function of t alone.
        let den_t = CPoly::new((0..=psi.den.deg_z()).map(|j| psi.den.coeff(j, 0)).collect());
        let common = &den_t * &d.pow(k_max);
        let entries = (0..m * m)
            .map(|k| CRatFun::new_unreduced(num_m.get(k / m, k % m).clone(), common.clone()))
            .collect::<Result<Vec<_>>>()?;
        return MatrixSymbol::new(m, entries);
    }

    let den_m = homogenize(&psi.den, &n, &d, k_max);
    let deg_num = num_m.degree();
    let deg_den = den_m.degree();
    let bound_det = m * deg_den;
    let bound_num = deg_num + (m - 1) * deg_den;
    let nodes = (bound_det.max(bound_num) + 1).next_power_of_two();

    let mut det_vals = Vec::with_capacity(nodes);
    let mut num_vals: Vec<Vec<Complex64>> = vec![Vec::with_capacity(nodes); m * m];
    for k in 0..nodes {
        let t = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / nodes as f64);
        let den_t = den_m.eval(t);
        let adj = adjugate(&den_t);
        det_vals.push(det(&den_t));
        let prod = num_m.eval(t) * adj;
        for (idx, vals) in num_vals.iter_mut().enumerate() {
            vals.push(prod[(idx / m, idx % m)]);
        }
    }
    let det_poly = interpolate_unit_roots(&det_vals).trim_relative(1e-13);
    let scale = det_vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if det_poly.is_zero() || det_poly.norm_inf() <= 1e-12 * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
        return Err(Error::IllPosedComposition("den(t, B(t)) is singular for every t".into()));
    }
    let entries = num_vals
        .iter()
        .map(|vals| CRatFun::new_unreduced(interpolate_unit_roots(vals), det_poly.clone()))
        .collect::<Result<Vec<_>>>()?;
    MatrixSymbol::new(m, entries)
}

/// Classical adjugate via cofactors (well defined for singular input).
fn adjugate(a: &CMat) -> CMat {
    let m = a.nrows();
    if m == 1 {
        return CMat::from_element(1, 1, Complex64::new(1.0, 0.0));
    }
    CMat::from_fn(m, m, |i, j| {
        // adj[i][j] = (-1)^{i+j} minor(j, i)
        let minor = a.clone().remove_row(j).remove_column(i);
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        det(&minor) * sign
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::{c64, eigenvalues, frobenius, identity};
    use crate::symbols::blaschke::{bp_build, BlaschkeFactorSpec};

    fn example2_b() -> BlaschkePotapov {
        let lam = c64(0.0, 0.8);
        let f1 = BlaschkeFactorSpec::rank_one(lam, c64(1.0, 0.0), &[c64(1.0, 0.0), c64(0.0, 0.0)]).unwrap();
        let f2 = BlaschkeFactorSpec::rank_one(-lam, c64(1.0, 0.0), &[c64(12.0 / 13.0, 0.0), c64(5.0 / 13.0, 0.0)])
            .unwrap();
        bp_build(identity(2), vec![f1, f2]).unwrap()
    }

    #[test]
    fn identity_psi_gives_b() {
        let b = example2_b();
        let f = compose_psi(&ScalarBivarRational::identity(), &b).unwrap();
        for &t in &[c64(0.3, 0.2), c64(-0.5, 0.6), Complex64::from_polar(1.0, 0.9)] {
            assert!(frobenius(&(f.eval(t) - b.eval(t))) < 1e-12);
        }
    }

    #[test]
    fn mobius_psi_matches_direct_evaluation() {
        // ψ = (η + t/2) / (2 - η t)
        let z = c64(0.0, 0.0);
        let one = c64(1.0, 0.0);
        let num = BivarPoly::new(vec![vec![z, one], vec![c64(0.5, 0.0), z]]);
        let den = BivarPoly::new(vec![vec![c64(2.0, 0.0), z], vec![z, -one]]);
        let psi = ScalarBivarRational::new(num, den).unwrap();
        let b = example2_b();
        let f = compose_psi(&psi, &b).unwrap();
        for &t in &[c64(0.3, 0.2), c64(-0.5, 0.6), Complex64::from_polar(1.0, 0.7), c64(1.3, -0.4)] {
            let direct = psi.eval_matrix(t, &b.eval(t)).unwrap();
            assert!(frobenius(&(f.eval(t) - &direct)) < 1e-9 * (1.0 + frobenius(&direct)));
            // Spectral mapping.
            let mut got = eigenvalues(&f.eval(t)).unwrap();
            let mut want: Vec<Complex64> =
                eigenvalues(&b.eval(t)).unwrap().into_iter().map(|eta| psi.eval(t, eta)).collect();
            got.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            want.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn singular_denominator_is_ill_posed() {
        // den(t, η) = (η - 1)² vanishes identically at B ≡ I.
        let one = c64(1.0, 0.0);
        let den = BivarPoly::new(vec![vec![one, c64(-2.0, 0.0), one]]);
        let psi = ScalarBivarRational::new(BivarPoly::new(vec![vec![one]]), den).unwrap();
        let b = BlaschkePotapov::identity(2);
        assert!(matches!(compose_psi(&psi, &b), Err(Error::IllPosedComposition(_))));
    }

    #[test]
    fn boundary_adjoint_is_pointwise_adjoint_on_circle() {
        let b = example2_b();
        let f = compose_psi(&ScalarBivarRational::identity(), &b).unwrap();
        let fs = f.boundary_adjoint();
        for k in 0..8 {
            let t = Complex64::from_polar(1.0, 0.3 + k as f64);
            assert!(frobenius(&(fs.eval(t) - f.eval(t).adjoint())) < 1e-11);
        }
    }

    #[test]
    fn reparametrization_rotates_argument() {
        let b = example2_b();
        let f = compose_psi(&ScalarBivarRational::identity(), &b).unwrap();
        let xi = Complex64::from_polar(1.0, 1.1);
        let g = f.reparametrize(xi);
        let t = c64(0.2, -0.3);
        assert!(frobenius(&(g.eval(t) - f.eval(xi * t))) < 1e-12);
    }
}
