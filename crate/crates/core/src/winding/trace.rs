//! Continuity-matched eigenvalue branches of `F(e^{iθ})`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hungarian::min_cost_assignment;
use crate::error::{Error, Result};
use crate::numkernel::linalg::eigenvalues;
use crate::symbols::fourier::BOUNDARY_CLEARANCE;
use crate::symbols::MatrixSymbol;

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub n_init: usize,
    pub max_levels: usize,
    /// Collisions tighter than this that survive refinement are ambiguous.
    pub collision_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { n_init: 512, max_levels: 12, collision_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveTrace {
    /// Ascending, from 0 to 2π inclusive.
    pub thetas: Vec<f64>,
    /// `branches[j][i] = ζ_j(thetas[i])`.
    pub branches: Vec<Vec<Complex64>>,
    /// Branch `j` at 2π continues as branch `closure_perm[j]` at 0.
    pub closure_perm: Vec<usize>,
    /// Branch index lists, one per cycle of `closure_perm`, in traversal order.
    pub orbits: Vec<Vec<usize>>,
    /// Orbits grouped by geometric coincidence.
    pub components: Vec<Vec<usize>>,
    pub component_count: usize,
    /// Intervals where the continuity bound could not be met within the
    /// refinement cap (the assignment was still used).
    pub unresolved_intervals: usize,
}

/// Smallest distance between eigenvalues that are not numerically equal;
/// infinite when all coincide.
fn cluster_gap(z: &[Complex64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let d = (z[i] - z[j]).norm();
            if d > 1e-9 * (1.0 + z[i].norm()) {
                gap = gap.min(d);
            }
        }
    }
    gap
}

/// Reorders `next` to follow `prev` with minimal total displacement.
pub fn match_to(prev: &[Complex64], next: &[Complex64]) -> Vec<Complex64> {
    let cost: Vec<Vec<f64>> = prev.iter().map(|p| next.iter().map(|q| (p - q).norm()).collect()).collect();
    min_cost_assignment(&cost).into_iter().map(|j| next[j]).collect()
}

struct Tracer<'a> {
    f: &'a MatrixSymbol,
    opts: TraceOptions,
    unresolved: usize,
}

impl Tracer<'_> {
    fn spectrum(&self, theta: f64) -> Result<Vec<Complex64>> {
        eigenvalues(&self.f.eval(Complex64::from_polar(1.0, theta)))
    }

    fn step(
        &mut self,
        ta: f64,
        za: &[Complex64],
        tb: f64,
        zb_raw: &[Complex64],
        level: usize,
        out: &mut Vec<(f64, Vec<Complex64>)>,
    ) -> Result<()> {
        let zb = match_to(za, zb_raw);
        let gap = cluster_gap(za).min(cluster_gap(&zb));
        let moved = za.iter().zip(&zb).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if moved < gap / 3.0 {
            out.push((tb, zb));
            return Ok(());
        }
        if level >= self.opts.max_levels {
            if gap < self.opts.collision_tol {
                return Err(Error::BranchAmbiguity { theta_lo: ta, theta_hi: tb, gap });
            }
            self.unresolved += 1;
            out.push((tb, zb));
            return Ok(());
        }
        let tm = 0.5 * (ta + tb);
        let zm_raw = self.spectrum(tm)?;
        self.step(ta, za, tm, &zm_raw, level + 1, out)?;
        let (tm, zm) = out.last().cloned().unwrap();
        self.step(tm, &zm, tb, zb_raw, level + 1, out)
    }
}

pub fn trace_branches(f: &MatrixSymbol, n_init: usize) -> Result<CurveTrace> {
    trace_with(f, &TraceOptions { n_init, ..TraceOptions::default() })
}

pub fn trace_with(f: &MatrixSymbol, opts: &TraceOptions) -> Result<CurveTrace> {
    if opts.n_init < 64 {
        return Err(Error::PreconditionViolation(format!("n_init = {} < 64", opts.n_init)));
    }
    f.require_no_boundary_pole(BOUNDARY_CLEARANCE)?;
    let mut tracer = Tracer { f, opts: *opts, unresolved: 0 };
    let n = opts.n_init;
    let z0 = tracer.spectrum(0.0)?;
    let mut samples: Vec<(f64, Vec<Complex64>)> = vec![(0.0, z0)];
    for k in 1..=n {
        let tb = TAU * k as f64 / n as f64;
        // The endpoint reuses the spectrum at 0 so closure is exact.
        let zb_raw = if k == n { samples[0].1.clone() } else { tracer.spectrum(tb)? };
        let (ta, za) = samples.last().cloned().unwrap();
        tracer.step(ta, &za, tb, &zb_raw, 0, &mut samples)?;
    }

    let m = f.size();
    let thetas: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let branches: Vec<Vec<Complex64>> = (0..m).map(|j| samples.iter().map(|s| s.1[j]).collect()).collect();
    let ends: Vec<Complex64> = branches.iter().map(|b| *b.last().unwrap()).collect();
    let starts: Vec<Complex64> = branches.iter().map(|b| b[0]).collect();
    let cost: Vec<Vec<f64>> = ends.iter().map(|e| starts.iter().map(|s| (e - s).norm()).collect()).collect();
    let closure_perm = min_cost_assignment(&cost);

    let orbits = cycles(&closure_perm);
    let mut trace = CurveTrace {
        thetas,
        branches,
        closure_perm,
        orbits,
        components: Vec::new(),
        component_count: 0,
        unresolved_intervals: tracer.unresolved,
    };
    trace.components = trace.group_coincident();
    trace.component_count = trace.components.len();
    Ok(trace)
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            cyc.push(j);
            j = perm[j];
        }
        out.push(cyc);
    }
    out
}

fn point_segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * s)).norm()
}

pub fn distance_to_polyline(p: Complex64, poly: &[Complex64]) -> f64 {
    poly.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
}

impl CurveTrace {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Closed polygon of an orbit: its branches concatenated; the last
    /// point equals the first.
    pub fn orbit_polyline(&self, orbit: &[usize]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(orbit.len() * self.thetas.len());
        for &j in orbit {
            if out.is_empty() {
                out.extend_from_slice(&self.branches[j]);
            } else {
                out.extend_from_slice(&self.branches[j][1..]);
            }
        }
        out
    }

    /// One closed polyline per orbit.
    pub fn polylines(&self) -> Vec<Vec<Complex64>> {
        self.orbits.iter().map(|o| self.orbit_polyline(o)).collect()
    }

    /// One closed polyline per geometric component (first orbit of each).
    pub fn component_polylines(&self) -> Vec<Vec<Complex64>> {
        self.components.iter().map(|c| self.orbit_polyline(&self.orbits[c[0]])).collect()
    }

    fn scale(&self) -> f64 {
        self.branches.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max)
    }

    /// Groups orbit indices whose curves coincide as point sets.
    fn group_coincident(&self) -> Vec<Vec<usize>> {
        let polys = self.polylines();
        let tol = 1e-7 * self.scale();
        let same = |a: &[Complex64], b: &[Complex64]| {
            let step = (a.len() / 64).max(1);
            a.iter().step_by(step).all(|&p| distance_to_polyline(p, b) <= tol)
                && b.iter().step_by((b.len() / 64).max(1)).all(|&p| distance_to_polyline(p, a) <= tol)
        };
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (k, poly) in polys.iter().enumerate() {
            match groups.iter_mut().find(|g| same(&polys[g[0]], poly)) {
                Some(g) => g.push(k),
                None => groups.push(vec![k]),
            }
        }
        groups
    }

    /// Distance from `z` to the traced curve (polyline approximation).
    pub fn distance(&self, z: Complex64) -> f64 {
        self.branches.iter().map(|b| distance_to_polyline(z, b)).fold(f64::INFINITY, f64::min)
    }

    /// Bounding box `[x_min, x_max, y_min, y_max]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
        for z in self.branches.iter().flatten() {
            bb[0] = bb[0].min(z.re);
            bb[1] = bb[1].max(z.re);
            bb[2] = bb[2].min(z.im);
            bb[3] = bb[3].max(z.im);
        }
        bb
    }

    /// Signed area enclosed by each orbit polygon (positive when traversed
    /// counterclockwise).
    pub fn orbit_signed_areas(&self) -> Vec<f64> {
        self.polylines()
            .iter()
            .map(|p| 0.5 * p.windows(2).map(|w| w[0].re * w[1].im - w[1].re * w[0].im).sum::<f64>())
            .collect()
    }

    /// Winding number of the traced branches about `z0`: the summed argument
    /// increments of `ζ_j(θ) - z0`.
    pub fn winding_from_branches(&self, z0: Complex64) -> i64 {
        let total: f64 = self
            .branches
            .iter()
            .map(|b| b.windows(2).map(|w| ((w[1] - z0) / (w[0] - z0)).arg()).sum::<f64>())
            .sum();
        // Closure permutation contributes jumps between branch ends and starts.
        let jumps: f64 = self
            .closure_perm
            .iter()
            .enumerate()
            .map(|(j, &k)| ((self.branches[k][0] - z0) / (*self.branches[j].last().unwrap() - z0)).arg())
            .sum();
        ((total + jumps) / TAU).round() as i64
    }

    /// Rows `theta,branch_index,re,im`, ordered by sample then branch.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,branch_index,re,im\n");
        for (i, th) in self.thetas.iter().enumerate() {
            for (j, b) in self.branches.iter().enumerate() {
                let _ = writeln!(s, "{th:.15e},{j},{:.15e},{:.15e}", b[i].re, b[i].im);
            }
        }
        s
    }

    /// Maximum deviation of the branch multiset from a fresh spectrum at
    /// every sample.
    pub fn multiset_defect(&self, f: &MatrixSymbol) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, &th) in self.thetas.iter().enumerate() {
            let spec = eigenvalues(&f.eval(Complex64::from_polar(1.0, th)))?;
            let here: Vec<Complex64> = self.branches.iter().map(|b| b[i]).collect();
            let matched = match_to(&here, &spec);
            for (a, b) in here.iter().zip(&matched) {
                worst = worst.max((a - b).norm());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;
    use crate::numkernel::{CPoly, CRatFun};

    #[test]
    fn shift_times_identity_is_one_geometric_component() {
        let f = MatrixSymbol::diagonal_poly(2, &CPoly::x());
        let tr = trace_branches(&f, 64).unwrap();
        assert_eq!(tr.branch_count(), 2);
        assert_eq!(tr.orbits.len(), 2);
        assert_eq!(tr.component_count, 1);
        for (i, th) in tr.thetas.iter().enumerate() {
            assert!((tr.branches[0][i] - Complex64::from_polar(1.0, *th)).norm() < 1e-12);
        }
    }

    #[test]
    fn swapped_branches_form_one_orbit() {
        // Eigenvalues ±sqrt(t): the two branches exchange after one turn.
        let entries = vec![
            CRatFun::from_poly(CPoly::zero()),
            CRatFun::from_poly(CPoly::x()),
            CRatFun::constant(c64(1.0, 0.0)),
            CRatFun::from_poly(CPoly::zero()),
        ];
        let f = MatrixSymbol::new(2, entries).unwrap();
        let tr = trace_branches(&f, 128).unwrap();
        assert_eq!(tr.closure_perm, vec![1, 0]);
        assert_eq!(tr.orbits.len(), 1);
        assert_eq!(tr.component_count, 1);
        assert!(tr.multiset_defect(&f).unwrap() < 1e-12);
        assert_eq!(tr.winding_from_branches(c64(0.0, 0.0)), 1);
    }

    #[test]
    fn rejects_small_n_and_boundary_poles() {
        let f = MatrixSymbol::diagonal_poly(1, &CPoly::x());
        assert!(matches!(trace_branches(&f, 16), Err(Error::PreconditionViolation(_))));
        let g = MatrixSymbol::scalar(
            CRatFun::new_unreduced(CPoly::one(), CPoly::new(vec![c64(0.0, -1.0), c64(1.0, 0.0)])).unwrap(),
        );
        assert!(matches!(trace_branches(&g, 64), Err(Error::BoundaryPole { .. })));
    }

    #[test]
    fn csv_layout() {
        let f = MatrixSymbol::diagonal_poly(1, &CPoly::x());
        let tr = trace_branches(&f, 64).unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("theta,branch_index,re,im"));
        assert_eq!(csv.lines().count(), 1 + tr.thetas.len());
        assert!(lines.next().unwrap().starts_with("0.000000000000000e0,0,1.000000000000000e0,"));
    }
}
