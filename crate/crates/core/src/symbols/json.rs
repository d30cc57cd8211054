//! JSON description of symbols.
//!
//! ```json
//! {"m": 2, "kind": "bp_psi",
//!  "v": [[["1","0"],["0","0"]],[["0","0"],["1","0"]]],
//!  "factors": [{"a": ["0","4/5"], "xi": [1, 0], "P": [[...]]}],
//!  "psi": {"num": [[...]], "den": [[...]]}}
//! ```
//!
//! A scalar is a `[re, im]` pair whose parts are JSON numbers or rational
//! strings (`"12/13"`, `"0.3"`). Parts are kept verbatim, so parsing and
//! re-serializing reproduces the input, and rational strings convert to
//! exact Gaussian rationals. `psi.num[j][k]` multiplies `t^j η^k`. The
//! `"entrywise"` kind replaces `v`/`factors`/`psi` by
//! `"entries": [[{"num": [...], "den": [...]}, ...], ...]` with ascending
//! coefficient lists.

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::blaschke::{bp_build, BlaschkeFactorSpec, BlaschkePotapov};
use super::symbol::{compose_psi, MatrixSymbol, ScalarBivarRational};
use crate::error::{Error, Result};
use crate::numkernel::field::{f64_to_rat, format_rational, parse_rational, rat_to_f64};
use crate::numkernel::linalg::CMat;
use crate::numkernel::{BivarPoly, CPoly, CRatFun, GaussRat, Poly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Num(f64),
    Text(String),
}

impl Real {
    pub fn exact(r: &BigRational) -> Real {
        Real::Text(format_rational(r))
    }

    pub fn to_rat(&self) -> Result<BigRational> {
        match self {
            Real::Num(x) => Ok(f64_to_rat(*x)),
            Real::Text(s) => parse_rational(s).ok_or_else(|| Error::Schema(format!("not a rational number: {s:?}"))),
        }
    }

    pub fn to_f64(&self) -> Result<f64> {
        match self {
            Real::Num(x) => Ok(*x),
            Real::Text(_) => self.to_rat().map(|r| rat_to_f64(&r)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Text(_))
    }
}

pub type ScalarRepr = [Real; 2];
pub type MatrixRepr = Vec<Vec<ScalarRepr>>;

pub fn scalar_repr_exact(z: &GaussRat) -> ScalarRepr {
    [Real::exact(&z.re), Real::exact(&z.im)]
}

pub fn scalar_repr(z: Complex64) -> ScalarRepr {
    [Real::Num(z.re), Real::Num(z.im)]
}

pub fn scalar_c64(s: &ScalarRepr) -> Result<Complex64> {
    Ok(Complex64::new(s[0].to_f64()?, s[1].to_f64()?))
}

pub fn scalar_exact(s: &ScalarRepr) -> Result<GaussRat> {
    Ok(GaussRat::new(s[0].to_rat()?, s[1].to_rat()?))
}

pub fn matrix_c64(rows: &MatrixRepr, m: usize) -> Result<CMat> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(Error::Schema(format!("expected a {m}x{m} matrix")));
    }
    let mut out = CMat::zeros(m, m);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            out[(i, j)] = scalar_c64(s)?;
        }
    }
    Ok(out)
}

pub fn matrix_repr(m: &CMat) -> MatrixRepr {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| scalar_repr(m[(i, j)])).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRepr {
    pub a: ScalarRepr,
    pub xi: ScalarRepr,
    #[serde(rename = "P")]
    pub p: MatrixRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiRepr {
    pub num: MatrixRepr,
    pub den: MatrixRepr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryRepr {
    pub num: Vec<ScalarRepr>,
    pub den: Vec<ScalarRepr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    BpPsi,
    Entrywise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub m: usize,
    pub kind: SymbolKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<EntryRepr>>>,
}

fn bivar_c64(rows: &MatrixRepr) -> Result<BivarPoly<Complex64>> {
    rows.iter()
        .map(|r| r.iter().map(scalar_c64).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(BivarPoly::new)
}

fn bivar_exact(rows: &MatrixRepr) -> Result<BivarPoly<GaussRat>> {
    rows.iter()
        .map(|r| r.iter().map(scalar_exact).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map(BivarPoly::new)
}

impl SymbolSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SymbolSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        spec.check_shape()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("symbol spec serializes")
    }

    /// True when every scalar is given as a rational string.
    pub fn is_exact(&self) -> bool {
        let mut all = true;
        let mut visit = |s: &ScalarRepr| all &= s[0].is_exact() && s[1].is_exact();
        let visit_matrix = |rows: &MatrixRepr, f: &mut dyn FnMut(&ScalarRepr)| rows.iter().flatten().for_each(f);
        if let Some(v) = &self.v {
            visit_matrix(v, &mut visit);
        }
        for f in self.factors.iter().flatten() {
            visit(&f.a);
            visit(&f.xi);
            visit_matrix(&f.p, &mut visit);
        }
        if let Some(psi) = &self.psi {
            visit_matrix(&psi.num, &mut visit);
            visit_matrix(&psi.den, &mut visit);
        }
        for e in self.entries.iter().flatten().flatten() {
            e.num.iter().chain(&e.den).for_each(&mut visit);
        }
        all
    }

    fn check_shape(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Schema("m must be positive".into()));
        }
        match self.kind {
            SymbolKind::BpPsi => {
                if self.factors.is_none() || self.psi.is_none() {
                    return Err(Error::Schema("bp_psi needs \"factors\" and \"psi\"".into()));
                }
            }
            SymbolKind::Entrywise => {
                let ok = self
                    .entries
                    .as_ref()
                    .is_some_and(|rows| rows.len() == self.m && rows.iter().all(|r| r.len() == self.m));
                if !ok {
                    return Err(Error::Schema(format!("entrywise needs a {0}x{0} \"entries\" grid", self.m)));
                }
            }
        }
        Ok(())
    }

    pub fn blaschke(&self) -> Result<BlaschkePotapov> {
        let v = match &self.v {
            Some(v) => matrix_c64(v, self.m)?,
            None => CMat::identity(self.m, self.m),
        };
        let factors = self
            .factors
            .iter()
            .flatten()
            .map(|f| BlaschkeFactorSpec::new(scalar_c64(&f.a)?, scalar_c64(&f.xi)?, matrix_c64(&f.p, self.m)?))
            .collect::<Result<Vec<_>>>()?;
        bp_build(v, factors)
    }

    pub fn psi(&self) -> Result<ScalarBivarRational> {
        let psi = self.psi.as_ref().ok_or_else(|| Error::Schema("missing \"psi\"".into()))?;
        ScalarBivarRational::new(bivar_c64(&psi.num)?, bivar_c64(&psi.den)?)
    }

    /// `ψ` with exact coefficients.
    pub fn psi_exact(&self) -> Result<(BivarPoly<GaussRat>, BivarPoly<GaussRat>)> {
        let psi = self.psi.as_ref().ok_or_else(|| Error::Schema("missing \"psi\"".into()))?;
        Ok((bivar_exact(&psi.num)?, bivar_exact(&psi.den)?))
    }

    pub fn build(&self) -> Result<MatrixSymbol> {
        self.check_shape()?;
        match self.kind {
            SymbolKind::BpPsi => compose_psi(&self.psi()?, &self.blaschke()?),
            SymbolKind::Entrywise => {
                let mut entries = Vec::with_capacity(self.m * self.m);
                for e in self.entries.iter().flatten().flatten() {
                    let num = CPoly::new(e.num.iter().map(scalar_c64).collect::<Result<_>>()?);
                    let den = CPoly::new(e.den.iter().map(scalar_c64).collect::<Result<_>>()?);
                    entries.push(CRatFun::new_unreduced(num, den).map_err(|e| Error::Schema(e.to_string()))?);
                }
                MatrixSymbol::new(self.m, entries)
            }
        }
    }

    /// Entrywise description of an already built symbol (floating values).
    pub fn from_symbol(f: &MatrixSymbol) -> SymbolSpec {
        let m = f.size();
        let poly = |p: &CPoly| p.coeffs().iter().map(|c| scalar_repr(*c)).collect::<Vec<_>>();
        let entries = (0..m)
            .map(|i| (0..m).map(|j| EntryRepr { num: poly(f.entry(i, j).num()), den: poly(f.entry(i, j).den()) }).collect())
            .collect();
        SymbolSpec { m, kind: SymbolKind::Entrywise, v: None, factors: None, psi: None, entries: Some(entries) }
    }
}

/// Exact ascending coefficients as a polynomial.
pub fn poly_exact(coeffs: &[ScalarRepr]) -> Result<Poly<GaussRat>> {
    coeffs.iter().map(scalar_exact).collect::<Result<Vec<_>>>().map(Poly::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::{c64, frobenius};

    const EX2: &str = r#"{
        "m": 2, "kind": "bp_psi",
        "factors": [
            {"a": ["0", "4/5"], "xi": ["1", "0"], "P": [[["1","0"],["0","0"]],[["0","0"],["0","0"]]]},
            {"a": ["0", "-4/5"], "xi": ["1", "0"],
             "P": [[["144/169","0"],["60/169","0"]],[["60/169","0"],["25/169","0"]]]}
        ],
        "psi": {"num": [[["0","0"],["1","0"]]], "den": [[["1","0"]]]}
    }"#;

    #[test]
    fn round_trip_is_lossless() {
        let spec = SymbolSpec::from_json(EX2).unwrap();
        assert!(spec.is_exact());
        let again = SymbolSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, again);
        let v1: serde_json::Value = serde_json::from_str(EX2).unwrap();
        let v2: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(v1, v2);
        let a = scalar_exact(&spec.factors.as_ref().unwrap()[0].a).unwrap();
        assert_eq!(a, crate::numkernel::field::gauss(0, 1, 4, 5));
    }

    #[test]
    fn builds_blaschke_product() {
        let spec = SymbolSpec::from_json(EX2).unwrap();
        let f = spec.build().unwrap();
        let b = spec.blaschke().unwrap();
        let t = c64(0.1, 0.45);
        assert!(frobenius(&(f.eval(t) - b.eval(t))) < 1e-12);
    }

    #[test]
    fn entrywise_round_trip() {
        let text = r#"{"m":1,"kind":"entrywise","entries":[[{"num":[[0.3,0],[-2,0],[1,0]],"den":[[-2,0],[1,0]]}]]}"#;
        let spec = SymbolSpec::from_json(text).unwrap();
        assert!(!spec.is_exact());
        let f = spec.build().unwrap();
        let t = c64(0.5, 0.5);
        let want = t + 0.3 / (t - 2.0);
        assert!((f.eval(t)[(0, 0)] - want).norm() < 1e-14);
        let back = SymbolSpec::from_symbol(&f).build().unwrap();
        assert!((back.eval(t)[(0, 0)] - want).norm() < 1e-14);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(SymbolSpec::from_json("{\"m\": 1}"), Err(Error::Schema(_))));
        assert!(matches!(SymbolSpec::from_json("{\"m\":1,\"kind\":\"bp_psi\"}"), Err(Error::Schema(_))));
        let bad = r#"{"m":1,"kind":"entrywise","entries":[[{"num":[["x","0"]],"den":[["1","0"]]}]]}"#;
        assert!(matches!(SymbolSpec::from_json(bad).unwrap().build(), Err(Error::Schema(_))));
    }
}
