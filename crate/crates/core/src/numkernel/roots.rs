//! Polynomial roots: companion-matrix eigenvalues, one Newton polish step,
//! then clustering into multiple roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::{eigenvalues, CMat};
use super::poly::CPoly;
use crate::error::{Error, Result};

pub const DEFAULT_TOL_ROOT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of `p` with multiplicities. Multiplicities sum to the degree.
///
/// Companion eigenvalues of a root of multiplicity `k` scatter by about
/// `eps^(1/k)`, so the clustering radius reliably merges double roots only.
pub fn poly_roots(p: &CPoly) -> Result<Vec<Root>> {
    let deg = match p.degree() {
        None | Some(0) => {
            return Err(Error::DegenerateInput(
                "polynomial root finding needs degree >= 1".into(),
            ))
        }
        Some(d) => d,
    };
    let coeffs = p.coeffs();

    // Zero roots are split off exactly.
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = CPoly::new(coeffs[zeros..].to_vec());
    let mut raw: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); zeros];

    if let Some(d) = reduced.degree().filter(|&d| d > 0) {
        let lead = *reduced.leading().unwrap();
        let monic: Vec<Complex64> = reduced.coeffs().iter().map(|c| c / lead).collect();
        let mut comp = CMat::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -monic[i];
        }
        for r in eigenvalues(&comp)? {
            raw.push(newton_polish(&reduced, r));
        }
    }
    debug_assert_eq!(raw.len(), deg);
    Ok(cluster(&raw, 1e-6))
}

/// One Newton step, kept only when it reduces the residual.
fn newton_polish(p: &CPoly, r: Complex64) -> Complex64 {
    let dp = p.derivative();
    let fr = p.eval(&r);
    let dfr = dp.eval(&r);
    if dfr.norm() == 0.0 {
        return r;
    }
    let cand = r - fr / dfr;
    if cand.is_finite() && p.eval(&cand).norm() < fr.norm() {
        cand
    } else {
        r
    }
}

/// Groups approximations within `radius·(1+|r|)` of each other; each group
/// becomes one root (its centroid) with multiplicity equal to the group size.
fn cluster(raw: &[Complex64], radius: f64) -> Vec<Root> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut k = i;
        while parent[k] != r {
            let next = parent[k];
            parent[k] = r;
            k = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let tol = radius * (1.0 + raw[i].norm().max(raw[j].norm()));
            if (raw[i] - raw[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let g = find(&mut parent, i);
        match groups.iter_mut().find(|(root, _)| *root == g) {
            Some((_, members)) => members.push(raw[i]),
            None => groups.push((g, vec![raw[i]])),
        }
    }
    let mut roots: Vec<Root> = groups
        .into_iter()
        .map(|(_, members)| {
            let m = members.len();
            let sum: Complex64 = members.iter().sum();
            Root { value: sum / m as f64, multiplicity: m }
        })
        .collect();
    roots.sort_by(|a, b| {
        a.value
            .re
            .partial_cmp(&b.value.re)
            .unwrap()
            .then(a.value.im.partial_cmp(&b.value.im).unwrap())
    });
    roots
}

/// Flattens roots into a list with repetitions.
pub fn expand(roots: &[Root]) -> Vec<Complex64> {
    roots
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect()
}

/// `|p(r)| / ‖p‖∞`, the normalized residual asserted by callers.
pub fn relative_residual(p: &CPoly, r: Complex64) -> f64 {
    p.eval(&r).norm() / p.norm_inf()
}
