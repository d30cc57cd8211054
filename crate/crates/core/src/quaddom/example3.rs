//! A three-sheeted symbol `F(t) = t + B(t)` in `ℂ³`, with `B` a product of
//! three rank-one Blaschke–Potapov factors along skewed directions.

use num_complex::Complex64;

use crate::error::Result;
use crate::numkernel::linalg::identity;
use crate::numkernel::BivarPoly;
use crate::symbols::{bp_build, compose_psi, BlaschkeFactorSpec, MatrixSymbol, ScalarBivarRational};

/// Zero of the first factor; the second sits at its negative.
pub const EXAMPLE3_LAMBDA: f64 = 0.1;

fn directions() -> [[Complex64; 3]; 3] {
    let c = |x: f64| Complex64::new(x / 13.0, 0.0);
    [[c(12.0), c(-5.0), c(0.0)], [c(0.0), c(12.0), c(-5.0)], [c(-5.0), c(0.0), c(12.0)]]
}

/// `ε₂ = exp(2πi/3)`.
pub fn example3_build() -> Result<MatrixSymbol> {
    example3_with(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0))
}

/// The same data with another unimodular rotation `ε₂` on the second
/// factor.
pub fn example3_with(eps2: Complex64) -> Result<MatrixSymbol> {
    let [l1, l2, l3] = directions();
    let lam = Complex64::new(EXAMPLE3_LAMBDA, 0.0);
    let factors = vec![
        BlaschkeFactorSpec::rank_one(lam, Complex64::new(0.0, 1.0), &l1)?,
        BlaschkeFactorSpec::rank_one(-lam, eps2, &l2)?,
        BlaschkeFactorSpec::rank_one(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), &l3)?,
    ];
    let b = bp_build(identity(3), factors)?;
    // ψ(t, η) = t + η
    let (zero, one) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    let psi = ScalarBivarRational::new(BivarPoly::new(vec![vec![zero, one], vec![one, zero]]), BivarPoly::new(vec![vec![one]]))?;
    compose_psi(&psi, &b)
}

/// `ε₂ = (-1 + i)/√2`.
pub fn example3_two_component_variant() -> Result<MatrixSymbol> {
    example3_with(Complex64::new(-1.0, 1.0) / 2f64.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::eigenvalues;
    use crate::symbols::classify_symbol;
    use crate::winding::trace_branches;

    #[test]
    fn three_components() {
        let f = example3_build().unwrap();
        assert!(classify_symbol(&f).ndarn_member.is_true());
        let tr = trace_branches(&f, 512).unwrap();
        assert_eq!(tr.component_count, 3);
        // Each eigenvalue runs over its own component counterclockwise.
        assert!(tr.orbit_signed_areas().iter().all(|&a| a > 0.0));
    }

    /// Closure permutation by plain nearest-neighbour continuation on a
    /// fine grid, independent of the adaptive tracer.
    fn monodromy(f: &MatrixSymbol, n: usize) -> Vec<usize> {
        let at = |k: usize| eigenvalues(&f.eval(Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))).unwrap();
        let start = at(0);
        let mut cur = start.clone();
        for k in 1..=n {
            let next = at(k);
            cur = cur
                .iter()
                .map(|z| *next.iter().min_by(|a, b| (*a - z).norm().partial_cmp(&(*b - z).norm()).unwrap()).unwrap())
                .collect();
        }
        cur.iter()
            .map(|z| (0..start.len()).min_by(|&i, &j| (start[i] - z).norm().partial_cmp(&(start[j] - z).norm()).unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn variant_matches_independent_monodromy() {
        let f = example3_two_component_variant().unwrap();
        assert!(classify_symbol(&f).ndarn_member.is_true());
        let tr = trace_branches(&f, 512).unwrap();
        let perm = monodromy(&f, 20000);
        let mut cycles = 0;
        let mut seen = vec![false; perm.len()];
        for i in 0..perm.len() {
            if !seen[i] {
                cycles += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                }
            }
        }
        assert_eq!(tr.orbits.len(), cycles);
    }
}
