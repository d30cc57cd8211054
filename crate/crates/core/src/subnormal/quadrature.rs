//! Vector functions sampled on a uniform grid of the unit circle. The
//! trapezoidal rule is exact for trigonometric polynomials below the grid
//! size, and rational functions with poles away from the circle are
//! resolved to rounding error at the default size.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::numkernel::linalg::{CMat, CVec};

pub const QUAD_POINTS: usize = 4096;

/// Samples `x(t_s)` of a `C^m`-valued function at `t_s = e^{2πis/n}`.
pub type Samples = Vec<CVec>;

pub struct CircleQuad {
    nodes: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
}

impl CircleQuad {
    pub fn new(n: usize) -> Self {
        let nodes = (0..n)
            .map(|s| Complex64::from_polar(1.0, std::f64::consts::TAU * s as f64 / n as f64))
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(n);
        CircleQuad { nodes, fft }
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn sample(&self, f: impl Fn(Complex64) -> CVec) -> Samples {
        self.nodes.iter().map(|&t| f(t)).collect()
    }

    /// Pointwise `G(t_s) x(t_s)` for a sampled matrix function.
    pub fn apply(g: &[CMat], x: &Samples) -> Samples {
        g.iter().zip(x).map(|(g, x)| g * x).collect()
    }

    /// `⟨x, y⟩ = (1/n) Σ y(t_s)* x(t_s)`, linear in `x`.
    pub fn inner(x: &Samples, y: &Samples) -> Complex64 {
        let s: Complex64 = x.iter().zip(y).map(|(x, y)| y.dotc(x)).sum();
        s / x.len() as f64
    }

    /// Mean of the samples, the zeroth Fourier coefficient.
    pub fn mean(x: &Samples) -> CVec {
        let m = x.first().map_or(0, |v| v.len());
        x.iter().fold(CVec::zeros(m), |acc, v| acc + v) / Complex64::new(x.len() as f64, 0.0)
    }

    /// Fourier coefficients of each component: `out[r][k] = c_k(x_r)`, with
    /// `k ≥ n/2` standing for the negative index `k - n`.
    pub fn coeffs(&self, x: &Samples) -> Vec<Vec<Complex64>> {
        let n = self.len();
        let m = x.first().map_or(0, |v| v.len());
        (0..m)
            .map(|r| {
                let mut buf: Vec<Complex64> = x.iter().map(|v| v[r]).collect();
                self.fft.process(&mut buf);
                buf.iter_mut().for_each(|z| *z /= n as f64);
                buf
            })
            .collect()
    }

    /// The coefficients `c_{-1}, …, c_{-n/2}` of every component stacked into
    /// one vector; inner products of these are inner products of `P_- x`.
    pub fn anti_analytic(&self, x: &Samples) -> CVec {
        let n = self.len();
        let half = n / 2;
        let c = self.coeffs(x);
        let mut out = Vec::with_capacity(c.len() * half);
        for comp in &c {
            out.extend((1..=half).map(|k| comp[n - k]));
        }
        CVec::from_vec(out)
    }

    /// The coefficients `c_0, …, c_{len-1}` of every component (Taylor
    /// coefficients when `x` is analytic), stacked block-wise by index.
    pub fn analytic_head(&self, x: &Samples, len: usize) -> CVec {
        let c = self.coeffs(x);
        let m = c.len();
        CVec::from_fn(len * m, |i, _| c[i % m][i / m])
    }

    /// Gram matrix `[⟨x_j, x_i⟩]`.
    pub fn gram(xs: &[Samples]) -> CMat {
        let d = xs.len();
        CMat::from_fn(d, d, |i, j| Self::inner(&xs[j], &xs[i]))
    }
}

impl Default for CircleQuad {
    fn default() -> Self {
        CircleQuad::new(QUAD_POINTS)
    }
}
