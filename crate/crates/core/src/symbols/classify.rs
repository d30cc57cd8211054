//! Membership tests for the class of non-degenerate analytic rational
//! normal symbols.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::symbol::{Flag, MatrixSymbol, SymbolFlags};
use crate::numkernel::linalg::{eigenvalues, frobenius, normality_defect};

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Relative normality tolerance; the commutator must satisfy
    /// `‖FF* - F*F‖ ≤ tol·(1 + ‖F‖²)`.
    pub tol_normal: f64,
    /// Defects in `(tol, band·tol]` are reported as unknown.
    pub band: f64,
    pub boundary_samples: usize,
    pub probe_points: usize,
    pub confirm_points: usize,
    pub match_radius: f64,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol_normal: 1e-9,
            band: 100.0,
            boundary_samples: 64,
            probe_points: 8,
            confirm_points: 64,
            match_radius: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub normal: Flag,
    pub analytic_closed_disc: Flag,
    pub nondegenerate: Flag,
    pub ndarn_member: Flag,
    /// Largest relative normality defect seen on the circle.
    pub normal_defect: f64,
    /// `min |p|` over poles, infinite for polynomial symbols.
    pub min_pole_modulus: f64,
    /// Constant eigenvalues that survived confirmation.
    pub constant_eigenvalues: Vec<Complex64>,
}

impl Classification {
    pub fn flags(&self) -> SymbolFlags {
        SymbolFlags {
            normal: self.normal,
            analytic_closed_disc: self.analytic_closed_disc,
            nondegenerate: self.nondegenerate,
        }
    }
}

pub fn classify_symbol(f: &MatrixSymbol) -> Classification {
    classify_with(f, &ClassifyOptions::default())
}

pub fn classify_with(f: &MatrixSymbol, opts: &ClassifyOptions) -> Classification {
    let poles = f.poles();
    let min_pole_modulus = poles.iter().map(|(p, _)| p.norm()).fold(f64::INFINITY, f64::min);
    let analytic = if (min_pole_modulus - 1.0).abs() <= 1e-10 {
        Flag::Unknown
    } else {
        Flag::from_bool(min_pole_modulus > 1.0)
    };

    let (normal, normal_defect) = normality(f, opts);
    let (nondegenerate, constant_eigenvalues) = nondegeneracy(f, &poles, opts);
    Classification {
        normal,
        analytic_closed_disc: analytic,
        nondegenerate,
        ndarn_member: normal.and(analytic).and(nondegenerate),
        normal_defect,
        min_pole_modulus,
        constant_eigenvalues,
    }
}

/// Sets the symbol's flags from a fresh classification.
pub fn classify_in_place(f: &mut MatrixSymbol) -> Classification {
    let c = classify_symbol(f);
    f.flags = c.flags();
    c
}

fn normality(f: &MatrixSymbol, opts: &ClassifyOptions) -> (Flag, f64) {
    let n = opts.boundary_samples;
    let mut worst: f64 = 0.0;
    let mut evaluated = 0;
    for k in 0..n {
        // Offset keeps samples away from the symmetric points ±1, ±i.
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.318_309_886) / n as f64;
        let v = f.eval(Complex64::from_polar(1.0, theta));
        if v.iter().any(|z| !z.is_finite()) {
            continue;
        }
        evaluated += 1;
        let norm = frobenius(&v);
        worst = worst.max(normality_defect(&v) / (1.0 + norm * norm));
    }
    if evaluated == 0 {
        return (Flag::Unknown, f64::NAN);
    }
    let flag = if worst <= opts.tol_normal {
        Flag::True
    } else if worst <= opts.band * opts.tol_normal {
        Flag::Unknown
    } else {
        Flag::False
    };
    (flag, worst)
}

fn random_disc_points(
    rng: &mut ChaCha8Rng,
    count: usize,
    poles: &[(Complex64, usize)],
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = 0.9 * rng.gen::<f64>().sqrt();
        let t = Complex64::from_polar(r, rng.gen_range(0.0..2.0 * std::f64::consts::PI));
        if poles.iter().all(|(p, _)| (t - p).norm() > 1e-3) {
            out.push(t);
        }
    }
    out
}

/// A constant eigenvalue branch shows up in every spectrum; candidates from
/// the first probe are intersected with the rest, then confirmed.
fn nondegeneracy(f: &MatrixSymbol, poles: &[(Complex64, usize)], opts: &ClassifyOptions) -> (Flag, Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let probes = random_disc_points(&mut rng, opts.probe_points, poles);
    let confirm = random_disc_points(&mut rng, opts.confirm_points, poles);
    let spectrum = |t: Complex64| eigenvalues(&f.eval(t)).ok();

    let Some(first) = spectrum(probes[0]) else {
        return (Flag::Unknown, Vec::new());
    };
    let mut candidates: Vec<Complex64> = first;
    for &t in probes[1..].iter().chain(confirm.iter()) {
        let Some(spec) = spectrum(t) else {
            return (Flag::Unknown, Vec::new());
        };
        candidates.retain(|c| spec.iter().any(|e| (e - c).norm() <= opts.match_radius * (1.0 + c.norm())));
        if candidates.is_empty() {
            return (Flag::True, Vec::new());
        }
    }
    candidates.dedup_by(|a, b| (*a - *b).norm() <= opts.match_radius * (1.0 + a.norm()));
    (Flag::False, candidates)
}
