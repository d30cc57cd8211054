//! Area integrals over the region bounded by closed polygons: midpoint rule
//! on a winding-labelled grid. Cells touching the boundary are split into
//! sub-rows, each integrated over its exactly covered x-intervals.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::winding::grid::{boundary_band, label_grid, row_crossings, Grid, GridSpec};
use crate::winding::trace::distance_to_polyline;

/// Sub-rows per cell in cells touching the boundary.
const SUB: usize = 8;

pub use crate::winding::grid::polyline_winding as polygon_winding;

pub fn polygon_distance(polys: &[Vec<Complex64>], z: Complex64) -> f64 {
    polys.iter().map(|p| distance_to_polyline(z, p)).fold(f64::INFINITY, f64::min)
}

pub fn bounding_box(polys: &[Vec<Complex64>]) -> [f64; 4] {
    let mut bb = [f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY];
    for z in polys.iter().flatten() {
        bb[0] = bb[0].min(z.re);
        bb[1] = bb[1].max(z.re);
        bb[2] = bb[2].min(z.im);
        bb[3] = bb[3].max(z.im);
    }
    bb
}

/// `∬ f dx dy` over the winding-one region, on a `spec` grid covering the
/// polygons' bounding box.
pub fn region_integral(polys: &[Vec<Complex64>], spec: GridSpec, f: &(dyn Fn(Complex64) -> Complex64 + Sync)) -> Complex64 {
    let grid = Grid::covering(bounding_box(polys), 0.05, spec);
    let labels = label_grid(polys, &grid);
    let band = boundary_band(polys, &grid, 1);
    let w = grid.width;
    let rows: Vec<Complex64> = (0..grid.height)
        .into_par_iter()
        .map(|j| {
            let mut acc = Complex64::new(0.0, 0.0);
            let band_cells: Vec<usize> = (0..w).filter(|&i| band[j * w + i]).collect();
            for i in 0..w {
                if !band[j * w + i] && labels[j * w + i] == 1 {
                    acc += f(grid.center(i, j));
                }
            }
            acc *= grid.cell_area();
            if band_cells.is_empty() {
                return acc;
            }
            // Band cells: SUB rows per cell, each integrated exactly in x over
            // the covered intervals (midpoint value per interval).
            let mut fine = Complex64::new(0.0, 0.0);
            for s in 0..SUB {
                let y = grid.y0 + (j as f64 + (s as f64 + 0.5) / SUB as f64) * grid.dy;
                let cross = row_crossings(polys, y);
                // suffix[k] = Σ signs of crossings k.. (sorted by x)
                let mut suffix = vec![0i32; cross.len() + 1];
                for k in (0..cross.len()).rev() {
                    suffix[k] = suffix[k + 1] + cross[k].1;
                }
                for &i in &band_cells {
                    let xl = grid.x0 + i as f64 * grid.dx;
                    let xr = xl + grid.dx;
                    let mut k = cross.partition_point(|c| c.0 <= xl);
                    let mut u = xl;
                    loop {
                        let v = if k < cross.len() && cross[k].0 < xr { cross[k].0 } else { xr };
                        if suffix[k] == 1 && v > u {
                            fine += f(Complex64::new(0.5 * (u + v), y)) * (v - u);
                        }
                        if v >= xr {
                            break;
                        }
                        u = v;
                        k += 1;
                    }
                }
            }
            acc + fine * (grid.dy / SUB as f64)
        })
        .collect();
    rows.iter().sum()
}

/// Whether a closed polygon (last point equal to the first) has no
/// self-intersections other than shared endpoints of adjacent edges.
pub fn is_simple_polygon(poly: &[Complex64]) -> bool {
    let n = poly.len() - 1;
    if n < 3 {
        return false;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |k: usize| poly[k].re.min(poly[k + 1].re);
    let xmax = |k: usize| poly[k].re.max(poly[k + 1].re);
    order.sort_by(|&a, &b| xmin(a).partial_cmp(&xmin(b)).unwrap());
    // Sweep in x: only edges with overlapping x-ranges are compared.
    for (pos, &a) in order.iter().enumerate() {
        for &b in &order[pos + 1..] {
            if xmin(b) > xmax(a) {
                break;
            }
            let adjacent = a.abs_diff(b) == 1 || a.abs_diff(b) == n - 1;
            if !adjacent && segments_intersect(poly[a], poly[a + 1], poly[b], poly[b + 1]) {
                return false;
            }
        }
    }
    true
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

fn segments_intersect(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(r: f64, n: usize) -> Vec<Complex64> {
        (0..=n).map(|k| Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn disc_moments() {
        let polys = vec![circle(1.0, 8192)];
        let spec = GridSpec { width: 512, height: 512 };
        let area = region_integral(&polys, spec, &|_| Complex64::new(1.0, 0.0));
        assert!((area.re - std::f64::consts::PI).abs() < 1e-4, "{area}");
        // ∬ z² = 0 and ∬ |z|² = π/2 over the unit disc.
        let z2 = region_integral(&polys, spec, &|z| z * z);
        assert!(z2.norm() < 1e-4);
        let r2 = region_integral(&polys, spec, &|z| Complex64::new(z.norm_sqr(), 0.0));
        assert!((r2.re - std::f64::consts::FRAC_PI_2).abs() < 1e-4);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple_polygon(&circle(1.0, 100)));
        // Figure eight.
        let eight: Vec<Complex64> = (0..=200)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / 200.0;
                Complex64::new((t + 0.01).sin(), (2.0 * t + 0.02).sin())
            })
            .collect();
        assert!(!is_simple_polygon(&eight));
    }

    #[test]
    fn winding_of_annulus() {
        let mut inner = circle(0.5, 100);
        inner.reverse();
        let polys = vec![circle(1.0, 100), inner];
        assert_eq!(polygon_winding(&polys, Complex64::new(0.7, 0.01)), 1);
        assert_eq!(polygon_winding(&polys, Complex64::new(0.1, 0.01)), 0);
        assert_eq!(polygon_winding(&polys, Complex64::new(1.5, 0.01)), 0);
    }
}
