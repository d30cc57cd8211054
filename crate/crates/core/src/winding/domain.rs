//! Matrix winding numbers and verification that a symbol generates a
//! domain (winding one inside, zero outside, boundary equal to the curve).

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{boundary_band, components, label_grid, polyline_winding, Grid, GridSpec};
use super::trace::{trace_branches, CurveTrace};
use crate::error::{Error, Result};
use crate::numkernel::linalg::{det, identity};
use crate::symbols::{classify_symbol, MatrixSymbol};

pub const DEFAULT_N_INIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Exterior,
    Boundary,
}

/// A symbol together with its traced boundary curve.
#[derive(Debug, Clone)]
pub struct WindingContext {
    pub f: MatrixSymbol,
    pub trace: CurveTrace,
    /// Minimum distance to the curve for an argument-principle evaluation.
    pub clearance: f64,
}

impl WindingContext {
    pub fn new(f: &MatrixSymbol) -> Result<Self> {
        let trace = trace_branches(f, DEFAULT_N_INIT)?;
        Ok(Self::with_trace(f, trace))
    }

    pub fn with_trace(f: &MatrixSymbol, trace: CurveTrace) -> Self {
        let bb = trace.bounding_box();
        let scale = 1.0 + bb.iter().map(|v| v.abs()).fold(0.0, f64::max);
        WindingContext { f: f.clone(), trace, clearance: 1e-8 * scale }
    }

    /// `(1/2π) Δ arg det(F(e^{iθ}) - z0 I)` over one turn.
    pub fn winding_number(&self, z0: Complex64) -> Result<i64> {
        let d = self.trace.distance(z0);
        if d <= self.clearance {
            return Err(Error::TooCloseToBoundary { distance: d, clearance: self.clearance });
        }
        Ok(det_winding(&self.f, z0))
    }

    pub fn membership(&self, z: Complex64, tol: f64) -> Result<Membership> {
        if self.trace.distance(z) <= tol.max(self.clearance) {
            return Ok(Membership::Boundary);
        }
        Ok(if self.winding_number(z)? == 1 { Membership::Interior } else { Membership::Exterior })
    }
}

fn shifted_det(f: &MatrixSymbol, z0: Complex64, theta: f64) -> Complex64 {
    let m = f.size();
    det(&(f.eval(Complex64::from_polar(1.0, theta)) - identity(m) * z0))
}

/// Argument increment with adaptive bisection keeping each step below π/2.
fn det_winding(f: &MatrixSymbol, z0: Complex64) -> i64 {
    const N: usize = 256;
    const MAX_DEPTH: usize = 40;
    fn segment(f: &MatrixSymbol, z0: Complex64, ta: f64, ga: Complex64, tb: f64, gb: Complex64, depth: usize) -> f64 {
        let step = (gb / ga).arg();
        if step.abs() < FRAC_PI_2 || depth >= MAX_DEPTH {
            return step;
        }
        let tm = 0.5 * (ta + tb);
        let gm = shifted_det(f, z0, tm);
        segment(f, z0, ta, ga, tm, gm, depth + 1) + segment(f, z0, tm, gm, tb, gb, depth + 1)
    }
    let g0 = shifted_det(f, z0, 0.0);
    let mut prev = (0.0, g0);
    let mut total = 0.0;
    for k in 1..=N {
        let t = TAU * k as f64 / N as f64;
        let g = if k == N { g0 } else { shifted_det(f, z0, t) };
        total += segment(f, z0, prev.0, prev.1, t, g, 0);
        prev = (t, g);
    }
    (total / TAU).round() as i64
}

pub fn winding_number(f: &MatrixSymbol, z0: Complex64) -> Result<i64> {
    WindingContext::new(f)?.winding_number(z0)
}

pub fn membership(f: &MatrixSymbol, z: Complex64, tol: f64) -> Result<Membership> {
    WindingContext::new(f)?.membership(z, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainConditions {
    /// The boundary of the winding-one region is the curve.
    pub boundary_is_curve: bool,
    /// Winding one on the region.
    pub winding_one_inside: bool,
    /// Winding zero off its closure.
    pub winding_zero_outside: bool,
}

impl DomainConditions {
    pub fn all(&self) -> bool {
        self.boundary_is_curve && self.winding_one_inside && self.winding_zero_outside
    }
}

#[derive(Debug, Clone)]
pub struct DomainReport {
    pub boundary: CurveTrace,
    pub grid: Grid,
    /// Winding number per cell center, row-major.
    pub labels: Vec<i32>,
    /// Cells within the boundary band (excluded from the conditions).
    pub band: Vec<bool>,
    pub conditions: DomainConditions,
    /// Bounded components of the winding-zero region.
    pub connectivity_estimate: usize,
    pub winding_values: Vec<i32>,
}

impl DomainReport {
    pub fn passes(&self) -> bool {
        self.conditions.all()
    }

    fn samples_with(&self, label: i32) -> impl Iterator<Item = Complex64> + '_ {
        self.labels.iter().enumerate().filter(move |(k, &l)| l == label && !self.band[*k]).map(|(k, _)| {
            self.grid.center(k % self.grid.width, k / self.grid.width)
        })
    }

    pub fn interior_samples(&self) -> Vec<Complex64> {
        self.samples_with(1).collect()
    }

    pub fn exterior_samples(&self) -> Vec<Complex64> {
        self.samples_with(0).collect()
    }

    /// Run-length encoded labels; the boundary band is encoded as `null`.
    pub fn labels_rle(&self) -> Vec<(Option<i32>, usize)> {
        let mut out: Vec<(Option<i32>, usize)> = Vec::new();
        for (k, &l) in self.labels.iter().enumerate() {
            let v = if self.band[k] { None } else { Some(l) };
            match out.last_mut() {
                Some((last, n)) if *last == v => *n += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "conditions": self.conditions,
            "passes": self.passes(),
            "connectivity_estimate": self.connectivity_estimate,
            "component_count": self.boundary.component_count,
            "winding_values": self.winding_values,
            "grid": self.grid,
            "labels_rle": self.labels_rle(),
        })
    }
}

/// Labels a grid around the traced curve by winding number and evaluates
/// the three domain conditions.
pub fn verify_generates_domain(f: &MatrixSymbol, grid: GridSpec) -> Result<DomainReport> {
    let class = classify_symbol(f);
    if !class.ndarn_member.is_true() {
        return Err(Error::PreconditionViolation(format!(
            "symbol is not a non-degenerate analytic rational normal symbol ({class:?})"
        )));
    }
    let trace = trace_branches(f, DEFAULT_N_INIT)?;
    verify_with_trace(trace, grid)
}

pub fn verify_with_trace(trace: CurveTrace, spec: GridSpec) -> Result<DomainReport> {
    let grid = Grid::covering(trace.bounding_box(), 0.2, spec);
    let polys = trace.polylines();
    let labels = label_grid(&polys, &grid);
    let band = boundary_band(&polys, &grid, 1);
    let (w, h) = (grid.width, grid.height);

    let mut winding_values: Vec<i32> =
        labels.iter().zip(&band).filter(|(_, &b)| !b).map(|(&l, _)| l).collect();
    winding_values.sort_unstable();
    winding_values.dedup();
    let labels_ok = winding_values.iter().all(|&v| v == 0 || v == 1);

    let ones: Vec<bool> = labels.iter().zip(&band).map(|(&l, &b)| !b && l == 1).collect();
    let (_, one_components) = components(&ones, w, h);
    let region_ok = one_components == 1;
    // Both statements rest on the same grid facts: only the labels 0 and 1
    // occur and the winding-one cells form one nonempty connected region.
    let winding_one_inside = labels_ok && region_ok;
    let winding_zero_outside = labels_ok && region_ok;

    let boundary_is_curve = !adjacent_mismatch(&labels, &band, w, h) && curve_separates(&trace, &grid);

    let zeros: Vec<bool> = labels.iter().zip(&band).map(|(&l, &b)| !b && l == 0).collect();
    let (zero_id, zero_count) = components(&zeros, w, h);
    let mut touches = vec![false; zero_count];
    for j in 0..h {
        for i in 0..w {
            if i == 0 || j == 0 || i + 1 == w || j + 1 == h {
                let c = zero_id[j * w + i];
                if c != usize::MAX {
                    touches[c] = true;
                }
            }
        }
    }
    let connectivity_estimate = touches.iter().filter(|t| !**t).count();

    Ok(DomainReport {
        boundary: trace,
        grid,
        labels,
        band,
        conditions: DomainConditions { boundary_is_curve, winding_one_inside, winding_zero_outside },
        connectivity_estimate,
        winding_values,
    })
}

/// True when two 4-adjacent off-band cells carry different windings, which
/// would put a piece of the region boundary away from the curve.
fn adjacent_mismatch(labels: &[i32], band: &[bool], w: usize, h: usize) -> bool {
    for j in 0..h {
        for i in 0..w {
            let k = j * w + i;
            if band[k] {
                continue;
            }
            if i + 1 < w && !band[k + 1] && labels[k + 1] != labels[k] {
                return true;
            }
            if j + 1 < h && !band[k + w] && labels[k + w] != labels[k] {
                return true;
            }
        }
    }
    false
}

/// At every sampled curve point the winding is one just to the left of the
/// curve and zero just to the right, so no arc of the curve lies inside the
/// region or outside its closure. The offset is a quarter cell, which
/// resolves features thinner than the grid's boundary band.
fn curve_separates(trace: &CurveTrace, grid: &Grid) -> bool {
    let delta = 0.25 * grid.dx.min(grid.dy);
    let polys = trace.polylines();
    for poly in &polys {
        let n = poly.len() - 1;
        let step = (n / 1024).max(1);
        for k in (0..n).step_by(step) {
            let tangent = poly[k + 1] - poly[(k + n - 1) % n];
            if tangent.norm() == 0.0 {
                continue;
            }
            let normal = Complex64::new(0.0, 1.0) * tangent / tangent.norm();
            let left = polyline_winding(&polys, poly[k] + normal * delta);
            let right = polyline_winding(&polys, poly[k] - normal * delta);
            if left != 1 || right != 0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::c64;
    use crate::numkernel::{CPoly, CRatFun};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t_pow(k: usize) -> MatrixSymbol {
        MatrixSymbol::scalar(CRatFun::from_poly(CPoly::monomial(c64(1.0, 0.0), k)))
    }

    #[test]
    fn argument_principle_basics() {
        assert_eq!(winding_number(&t_pow(1), c64(0.0, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&t_pow(1), c64(2.0, 0.0)).unwrap(), 0);
        assert_eq!(winding_number(&t_pow(2), c64(0.0, 0.0)).unwrap(), 2);
        assert!(matches!(winding_number(&t_pow(1), c64(1.0, 0.0)), Err(Error::TooCloseToBoundary { .. })));
    }

    #[test]
    fn membership_of_disc() {
        let f = t_pow(1);
        assert_eq!(membership(&f, c64(0.0, 0.0), 1e-6).unwrap(), Membership::Interior);
        assert_eq!(membership(&f, c64(1.0, 0.0), 1e-6).unwrap(), Membership::Boundary);
        assert_eq!(membership(&f, c64(1.5, 0.0), 1e-6).unwrap(), Membership::Exterior);
    }

    #[test]
    fn disc_is_generated_square_is_not() {
        let rep = verify_generates_domain(&t_pow(1), GridSpec { width: 128, height: 128 }).unwrap();
        assert!(rep.passes(), "{:?}", rep.conditions);
        assert_eq!(rep.connectivity_estimate, 0);
        let rep2 = verify_generates_domain(&t_pow(2), GridSpec { width: 128, height: 128 }).unwrap();
        assert!(!rep2.passes());
        assert!(rep2.winding_values.contains(&2));
    }

    #[test]
    fn trace_winding_agrees_with_det_winding() {
        let f = t_pow(2);
        let ctx = WindingContext::new(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..16 {
            let z = c64(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            if ctx.trace.distance(z) < 1e-3 {
                continue;
            }
            assert_eq!(ctx.winding_number(z).unwrap(), ctx.trace.winding_from_branches(z));
        }
    }

    #[test]
    fn rle_round_trip_counts() {
        let rep = verify_generates_domain(&t_pow(1), GridSpec { width: 64, height: 64 }).unwrap();
        let total: usize = rep.labels_rle().iter().map(|r| r.1).sum();
        assert_eq!(total, 64 * 64);
        let json = rep.to_json();
        assert_eq!(json["passes"], serde_json::Value::Bool(true));
    }

    fn example1(a: Complex64, beta: Complex64) -> MatrixSymbol {
        let one = c64(1.0, 0.0);
        MatrixSymbol::scalar(CRatFun::new_unreduced(CPoly::new(vec![beta, -a, one]), CPoly::new(vec![-a, one])).unwrap())
    }

    proptest::proptest! {
        #![proptest_config(crate::prop_config(64))]

        /// The winding number is constant on discs avoiding the curve.
        #[test]
        fn winding_is_locally_constant(
            r in 1.3f64..3.0, th in 0.0f64..6.28, br in 0.0f64..0.5, bth in 0.0f64..6.28,
            zr in 0.0f64..2.5, zth in 0.0f64..6.28, ur in 0.0f64..0.45, uth in 0.0f64..6.28,
        ) {
            let f = example1(Complex64::from_polar(r, th), Complex64::from_polar(br.max(1e-3), bth));
            let ctx = WindingContext::new(&f).unwrap();
            let z = Complex64::from_polar(zr, zth);
            let dist = ctx.trace.distance(z);
            proptest::prop_assume!(dist > 1e-3);
            let nearby = z + Complex64::from_polar(ur * dist, uth);
            let w0 = ctx.winding_number(z).unwrap();
            proptest::prop_assert_eq!(w0, ctx.winding_number(nearby).unwrap());
            proptest::prop_assert_eq!(w0, ctx.trace.winding_from_branches(z));
        }
    }
}
