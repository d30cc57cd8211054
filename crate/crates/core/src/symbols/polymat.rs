//! Square matrices with polynomial entries.

use num_complex::Complex64;

use crate::numkernel::linalg::CMat;
use crate::numkernel::CPoly;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    m: usize,
    entries: Vec<CPoly>,
}

impl PolyMatrix {
    pub fn zeros(m: usize) -> Self {
        PolyMatrix { m, entries: vec![CPoly::zero(); m * m] }
    }

    pub fn identity(m: usize) -> Self {
        Self::scalar(m, CPoly::one())
    }

    /// `p(t)·I`.
    pub fn scalar(m: usize, p: CPoly) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out.entries[i * m + i] = p.clone();
        }
        out
    }

    pub fn constant(mat: &CMat) -> Self {
        let m = mat.nrows();
        PolyMatrix { m, entries: (0..m * m).map(|k| CPoly::constant(mat[(k / m, k % m)])).collect() }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &CPoly {
        &self.entries[i * self.m + j]
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().filter_map(CPoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, t: Complex64) -> CMat {
        CMat::from_fn(self.m, self.m, |i, j| self.get(i, j).eval(&t))
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = CPoly::zero();
                for k in 0..m {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.entries[i * m + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        PolyMatrix {
            m: self.m,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale_poly(&self, p: &CPoly) -> PolyMatrix {
        PolyMatrix { m: self.m, entries: self.entries.iter().map(|a| a * p).collect() }
    }
}
