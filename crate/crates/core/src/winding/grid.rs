//! Rectangular grids labelled by the winding number of closed polygons,
//! computed by a signed-crossing sweep along each row.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { width: 512, height: 512 }
    }
}

/// Cell `(i, j)` (column, row) has center `(x0 + (i + ½)dx, y0 + (j + ½)dy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub width: usize,
    pub height: usize,
}

impl Grid {
    /// Covers `[x_min, x_max, y_min, y_max]` enlarged by `inflate` (0.2
    /// makes each side 20% longer) around its center.
    pub fn covering(bbox: [f64; 4], inflate: f64, spec: GridSpec) -> Grid {
        let cx = 0.5 * (bbox[0] + bbox[1]);
        let cy = 0.5 * (bbox[2] + bbox[3]);
        let w = (bbox[1] - bbox[0]).max(1e-12) * (1.0 + inflate);
        let h = (bbox[3] - bbox[2]).max(1e-12) * (1.0 + inflate);
        Grid {
            x0: cx - 0.5 * w,
            y0: cy - 0.5 * h,
            dx: w / spec.width as f64,
            dy: h / spec.height as f64,
            width: spec.width,
            height: spec.height,
        }
    }

    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x0 + (i as f64 + 0.5) * self.dx, self.y0 + (j as f64 + 0.5) * self.dy)
    }

    pub fn row_y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let fi = ((z.re - self.x0) / self.dx).floor();
        let fj = ((z.im - self.y0) / self.dy).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.width as f64 || fj >= self.height as f64 {
            return None;
        }
        Some((fi as usize, fj as usize))
    }

    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Signed crossings `(x, ±1)` of the horizontal line at height `y` with
/// closed polygons, sorted by `x`. Upward edges count `+1`.
pub fn row_crossings(polylines: &[Vec<Complex64>], y: f64) -> Vec<(f64, i32)> {
    let mut out = Vec::new();
    for poly in polylines {
        for w in poly.windows(2) {
            push_crossing(w[0], w[1], y, &mut out);
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Winding number of closed polygons about `z` by the crossing rule used
/// for grid labels.
pub fn polyline_winding(polylines: &[Vec<Complex64>], z: Complex64) -> i32 {
    row_crossings(polylines, z.im).iter().filter(|(x, _)| *x > z.re).map(|(_, s)| s).sum()
}

fn push_crossing(p: Complex64, q: Complex64, y: f64, out: &mut Vec<(f64, i32)>) {
    let up = p.im <= y && y < q.im;
    let down = q.im <= y && y < p.im;
    if up || down {
        let s = (y - p.im) / (q.im - p.im);
        out.push((p.re + s * (q.re - p.re), if up { 1 } else { -1 }));
    }
}

/// Winding number at every cell center, row-major (`j * width + i`).
pub fn label_grid(polylines: &[Vec<Complex64>], grid: &Grid) -> Vec<i32> {
    // Bucket edges by the rows they can cross.
    let mut buckets: Vec<Vec<(Complex64, Complex64)>> = vec![Vec::new(); grid.height];
    for poly in polylines {
        for w in poly.windows(2) {
            let (lo, hi) = (w[0].im.min(w[1].im), w[0].im.max(w[1].im));
            let j_lo = ((lo - grid.y0) / grid.dy - 0.5).ceil().max(0.0);
            let j_hi = ((hi - grid.y0) / grid.dy - 0.5).floor().min(grid.height as f64 - 1.0);
            if j_hi < j_lo {
                continue;
            }
            for j in j_lo as usize..=j_hi as usize {
                buckets[j].push((w[0], w[1]));
            }
        }
    }
    let rows: Vec<Vec<i32>> = buckets
        .par_iter()
        .enumerate()
        .map(|(j, edges)| {
            let y = grid.row_y(j);
            let mut cross = Vec::new();
            for &(p, q) in edges {
                push_crossing(p, q, y, &mut cross);
            }
            cross.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut labels = vec![0i32; grid.width];
            let mut acc: i32 = 0;
            let mut k = cross.len();
            for i in (0..grid.width).rev() {
                let x = grid.x0 + (i as f64 + 0.5) * grid.dx;
                while k > 0 && cross[k - 1].0 > x {
                    acc += cross[k - 1].1;
                    k -= 1;
                }
                labels[i] = acc;
            }
            labels
        })
        .collect();
    rows.concat()
}

/// Cells touched by any polygon edge, dilated by `dilate` cells.
pub fn boundary_band(polylines: &[Vec<Complex64>], grid: &Grid, dilate: usize) -> Vec<bool> {
    let mut hit = vec![false; grid.len()];
    let step = 0.5 * grid.dx.min(grid.dy);
    for poly in polylines {
        for w in poly.windows(2) {
            let len = (w[1] - w[0]).norm();
            let n = (len / step).ceil().max(1.0) as usize;
            for s in 0..=n {
                let z = w[0] + (w[1] - w[0]) * (s as f64 / n as f64);
                if let Some((i, j)) = grid.cell_of(z) {
                    hit[j * grid.width + i] = true;
                }
            }
        }
    }
    if dilate == 0 {
        return hit;
    }
    let mut out = hit.clone();
    let d = dilate as isize;
    for j in 0..grid.height as isize {
        for i in 0..grid.width as isize {
            if !hit[j as usize * grid.width + i as usize] {
                continue;
            }
            for dj in -d..=d {
                for di in -d..=d {
                    let (ii, jj) = (i + di, j + dj);
                    if ii >= 0 && jj >= 0 && (ii as usize) < grid.width && (jj as usize) < grid.height {
                        out[jj as usize * grid.width + ii as usize] = true;
                    }
                }
            }
        }
    }
    out
}

/// 4-connected components of the cells selected by `mask`; returns a
/// component id per cell (`usize::MAX` when unselected) and the count.
pub fn components(mask: &[bool], width: usize, height: usize) -> (Vec<usize>, usize) {
    let mut id = vec![usize::MAX; mask.len()];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..mask.len() {
        if !mask[start] || id[start] != usize::MAX {
            continue;
        }
        id[start] = count;
        stack.push(start);
        while let Some(c) = stack.pop() {
            let (i, j) = (c % width, c / width);
            let mut visit = |n: usize| {
                if mask[n] && id[n] == usize::MAX {
                    id[n] = count;
                    stack.push(n);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < width {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - width);
            }
            if j + 1 < height {
                visit(c + width);
            }
        }
        count += 1;
    }
    (id, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(center: Complex64, r: f64, n: usize, ccw: bool) -> Vec<Complex64> {
        (0..=n)
            .map(|k| {
                let th = std::f64::consts::TAU * k as f64 / n as f64;
                center + Complex64::from_polar(r, if ccw { th } else { -th })
            })
            .collect()
    }

    #[test]
    fn annulus_labels() {
        let polys = vec![
            circle(Complex64::new(0.0, 0.0), 1.0, 400, true),
            circle(Complex64::new(0.0, 0.0), 0.4, 400, false),
        ];
        let grid = Grid::covering([-1.0, 1.0, -1.0, 1.0], 0.2, GridSpec { width: 200, height: 200 });
        let labels = label_grid(&polys, &grid);
        for (k, &l) in labels.iter().enumerate() {
            let z = grid.center(k % grid.width, k / grid.width);
            let r = z.norm();
            if (r - 1.0).abs() > 0.02 && (r - 0.4).abs() > 0.02 {
                let want = if r < 1.0 && r > 0.4 { 1 } else { 0 };
                assert_eq!(l, want, "at {z}");
            }
        }
        let ones: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        assert_eq!(components(&ones, grid.width, grid.height).1, 1);
        let zeros: Vec<bool> = labels.iter().map(|&l| l == 0).collect();
        assert_eq!(components(&zeros, grid.width, grid.height).1, 2);
    }

    #[test]
    fn crossings_are_signed() {
        let poly = circle(Complex64::new(0.0, 0.0), 1.0, 64, true);
        let c = row_crossings(&[poly], 0.1);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].1, -1);
        assert_eq!(c[1].1, 1);
    }

    #[test]
    fn band_covers_curve() {
        let poly = circle(Complex64::new(0.0, 0.0), 1.0, 64, true);
        let grid = Grid::covering([-1.0, 1.0, -1.0, 1.0], 0.2, GridSpec { width: 50, height: 50 });
        let band = boundary_band(&[poly.clone()], &grid, 0);
        for z in poly {
            let (i, j) = grid.cell_of(z).unwrap();
            assert!(band[j * grid.width + i]);
        }
    }
}
