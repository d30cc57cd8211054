//! Fourier coefficients of a symbol on the unit circle, computed from
//! partial fractions and cross-checked against an FFT.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::symbol::MatrixSymbol;
use crate::error::{Error, Result};
use crate::numkernel::linalg::CMat;

pub const BOUNDARY_CLEARANCE: f64 = 1e-8;
pub const CROSS_CHECK_TOL: f64 = 1e-9;
const MAX_FFT_LEN: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct FourierCoeffs {
    pub n_min: i64,
    pub n_max: i64,
    coeffs: Vec<CMat>,
    /// Largest entrywise disagreement between the two routes, relative to
    /// `1 + max |c|`.
    pub cross_check: f64,
    /// FFT length used for the cross-check.
    pub fft_len: usize,
}

impl FourierCoeffs {
    /// Coefficient of `t^n`; zero outside the computed range.
    pub fn get(&self, n: i64) -> CMat {
        if n < self.n_min || n > self.n_max {
            let m = self.coeffs.first().map_or(1, |c| c.nrows());
            return CMat::zeros(m, m);
        }
        self.coeffs[(n - self.n_min) as usize].clone()
    }
}

/// Coefficients `c_n`, `n_min ≤ n ≤ n_max`, of `F(t) = Σ c_n t^n` on `|t| = 1`.
pub fn fourier_coeffs(f: &MatrixSymbol, n_min: i64, n_max: i64) -> Result<FourierCoeffs> {
    f.require_no_boundary_pole(BOUNDARY_CLEARANCE)?;
    if n_max < n_min {
        return Err(Error::DegenerateInput("empty Fourier index range".into()));
    }
    let m = f.size();
    let pf: Vec<_> = f.entries().iter().map(|e| e.partial_fractions()).collect();
    let coeffs: Vec<CMat> = (n_min..=n_max)
        .map(|n| CMat::from_fn(m, m, |i, j| pf[i * m + j].laurent_coeff(n)))
        .collect();

    let fft_len = fft_length(f, n_min, n_max);
    let fft = fft_coeffs(f, fft_len);
    let scale = 1.0 + coeffs.iter().flat_map(|c| c.iter()).map(|z| z.norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for (idx, n) in (n_min..=n_max).enumerate() {
        let slot = n.rem_euclid(fft_len as i64) as usize;
        for e in 0..m * m {
            worst = worst.max((coeffs[idx][(e / m, e % m)] - fft[e][slot]).norm());
        }
    }
    let cross_check = worst / scale;
    if cross_check > CROSS_CHECK_TOL {
        return Err(Error::FourierMismatch(cross_check));
    }
    Ok(FourierCoeffs { n_min, n_max, coeffs, cross_check, fft_len })
}

/// Smallest power of two making the aliasing error negligible for the
/// requested index range.
fn fft_length(f: &MatrixSymbol, n_min: i64, n_max: i64) -> usize {
    let reach = n_min.unsigned_abs().max(n_max.unsigned_abs()) as usize;
    let poly_deg = f
        .entries()
        .iter()
        .map(|e| e.num().degree().unwrap_or(0).saturating_sub(e.den().degree().unwrap_or(0)))
        .max()
        .unwrap_or(0);
    let rho = f
        .poles()
        .iter()
        .map(|(p, _)| if p.norm() < 1.0 { p.norm() } else { 1.0 / p.norm() })
        .fold(0.0, f64::max);
    let decay = if rho > 0.0 { (1e-17f64.ln() / rho.ln()).ceil() as usize + 8 } else { 0 };
    let need = 2 * (reach + poly_deg) + decay + reach + 1;
    need.next_power_of_two().clamp(64, MAX_FFT_LEN)
}

/// Entry-major table of `(1/N) Σ_k F(ω^k) ω^{-kn}`, indexed by `n mod N`.
fn fft_coeffs(f: &MatrixSymbol, len: usize) -> Vec<Vec<Complex64>> {
    let m = f.size();
    let mut planner = FftPlanner::<f64>::new();
    let fft: Arc<dyn Fft<f64>> = planner.plan_fft_forward(len);
    let nodes: Vec<Complex64> =
        (0..len).map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / len as f64)).collect();
    (0..m * m)
        .map(|e| {
            let entry = &f.entries()[e];
            let mut buf: Vec<Complex64> = nodes.iter().map(|t| entry.eval(t)).collect();
            fft.process(&mut buf);
            let inv = 1.0 / len as f64;
            buf.iter_mut().for_each(|z| *z *= inv);
            buf
        })
        .collect()
}

/// Uniform samples of `F` on the circle, `F(e^{2πik/n})`.
pub fn boundary_samples(f: &MatrixSymbol, n: usize) -> Vec<CMat> {
    (0..n)
        .map(|k| f.eval(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::linalg::{c64, frobenius, identity};
    use crate::numkernel::{CPoly, CRatFun};
    use proptest::prelude::*;

    fn example1(a: f64, beta: f64) -> MatrixSymbol {
        // t + β/(t - a) = (t² - a t + β)/(t - a)
        let num = CPoly::new(vec![c64(beta, 0.0), c64(-a, 0.0), c64(1.0, 0.0)]);
        let den = CPoly::new(vec![c64(-a, 0.0), c64(1.0, 0.0)]);
        MatrixSymbol::scalar(CRatFun::new_unreduced(num, den).unwrap())
    }

    #[test]
    fn shift_times_identity() {
        let f = MatrixSymbol::diagonal_poly(2, &CPoly::x());
        let c = fourier_coeffs(&f, -3, 3).unwrap();
        for n in -3..=3 {
            let want = if n == 1 { identity(2) } else { CMat::zeros(2, 2) };
            assert!(frobenius(&(c.get(n) - want)) < 1e-14);
        }
    }

    #[test]
    fn example1_geometric_series() {
        let (a, beta) = (2.0, 0.3);
        let c = fourier_coeffs(&example1(a, beta), -4, 10).unwrap();
        for n in -4..=10i64 {
            let want = match n {
                n if n < 0 => 0.0,
                0 => -beta / a,
                1 => 1.0 - beta / (a * a),
                n => -beta / a.powi(n as i32 + 1),
            };
            assert!((c.get(n)[(0, 0)] - c64(want, 0.0)).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn example1_boundary_adjoint_series() {
        let (a, beta) = (2.0, 0.3);
        let fs = example1(a, beta).boundary_adjoint();
        let c = fourier_coeffs(&fs, -6, 6).unwrap();
        // F_*(t) = 1/t + β t/(1 - a t). With |a| > 1 the pole 1/a lies inside
        // the disc, so on the circle only nonpositive powers occur and
        // c_n(F_*) = conj(c_{-n}(F)).
        for n in -6..=6i64 {
            let want = match n {
                -1 => 1.0 - beta / (a * a),
                n if n <= -2 => -beta / a.powi((1 - n) as i32),
                0 => -beta / a,
                _ => 0.0,
            };
            assert!((c.get(n)[(0, 0)] - c64(want, 0.0)).norm() < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn pole_on_circle_rejected() {
        let f = MatrixSymbol::scalar(
            CRatFun::new_unreduced(CPoly::one(), CPoly::new(vec![c64(-1.0, 0.0), c64(1.0, 0.0)])).unwrap(),
        );
        assert!(matches!(fourier_coeffs(&f, 0, 3), Err(Error::BoundaryPole { .. })));
    }

    proptest! {
        #![proptest_config(crate::prop_config(64))]
        #[test]
        fn residue_and_fft_agree(
            p1 in (0.1f64..0.85, 0.0f64..6.28),
            p2 in (1.2f64..3.0, 0.0f64..6.28),
            c in proptest::collection::vec(-2.0f64..2.0, 6),
        ) {
            let inner = Complex64::from_polar(p1.0, p1.1);
            let outer = Complex64::from_polar(p2.0, p2.1);
            let num = CPoly::new(vec![c64(c[0], c[1]), c64(c[2], c[3]), c64(c[4], c[5])]);
            let den = CPoly::from_roots(&[inner, outer]);
            let f = MatrixSymbol::scalar(CRatFun::new_unreduced(num, den).unwrap());
            let poles = 2;
            let res = fourier_coeffs(&f, -(2 * poles + 16), 2 * poles + 16);
            prop_assert!(res.is_ok(), "{:?}", res.err());
            prop_assert!(res.unwrap().cross_check <= CROSS_CHECK_TOL);
        }
    }
}
