use num_complex::Complex;

use super::fourier::{fft_forward, fft_inverse};
use super::DenseSignal;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub(crate) fn check_grids<T: Real>(a: &DenseSignal<T>, b: &DenseSignal<T>) -> Result<()> {
    let (l, r) = (a.grid_step(), b.grid_step());
    if (l - r).abs() > T::lit(1e-12) * l.max(r) {
        return Err(Error::GridMismatch {
            left: l.to_f64_lossy(),
            right: r.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Linear convolution `Δ·Σ h[m]·s[n-m]`, a Riemann approximation of
/// `∫ h(τ) s(t-τ) dτ`. The result starts at `t0(h) + t0(s)` and has
/// `len(h) + len(s) - 1` samples. Computed with zero-padded FFTs.
pub fn convolve<T: Real>(h: &DenseSignal<T>, s: &DenseSignal<T>) -> Result<DenseSignal<T>> {
    check_grids(h, s)?;
    let out_len = h.len() + s.len() - 1;
    let n = out_len.next_power_of_two();
    let mut a = h.samples().to_vec();
    a.resize(n, Complex::default());
    let mut b = s.samples().to_vec();
    b.resize(n, Complex::default());
    fft_forward(&mut a);
    fft_forward(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * *y;
    }
    fft_inverse(&mut a);
    let scale = h.grid_step() / T::from_count(n);
    a.truncate(out_len);
    for z in &mut a {
        *z = *z * scale;
    }
    Ok(DenseSignal::from_parts_unchecked(
        a,
        h.grid_step(),
        h.t0() + s.t0(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn scaled_delta_is_identity() {
        let dt = 0.01;
        let delta = DenseSignal::new(vec![c(1.0 / dt)], dt, 0.0).unwrap();
        let s = DenseSignal::from_fn(50, dt, 0.3, |t| Complex::new(t.sin(), t * t)).unwrap();
        let y = convolve(&delta, &s).unwrap();
        assert_eq!(y.len(), s.len());
        assert!((y.t0() - s.t0()).abs() < 1e-15);
        for (a, b) in y.samples().iter().zip(s.samples()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn support_adds_up() {
        let dt = 0.5;
        let h = DenseSignal::new(vec![c(1.0); 4], dt, 0.0).unwrap();
        let s = DenseSignal::new(vec![c(1.0); 6], dt, 1.0).unwrap();
        let y = convolve(&h, &s).unwrap();
        // [0, 1.5] + [1, 3.5] -> [1, 5]
        assert_eq!(y.t0(), 1.0);
        assert!((y.end_time() - 5.0).abs() < 1e-12);
        // Trapezoid-shaped output peaks at min(4, 6)·Δ.
        let peak = y.samples().iter().map(|z| z.re).fold(0.0, f64::max);
        assert!((peak - 4.0 * dt).abs() < 1e-12);
    }

    #[test]
    fn mismatched_grids_fail() {
        let a = DenseSignal::new(vec![c(1.0)], 0.5, 0.0).unwrap();
        let b = DenseSignal::new(vec![c(1.0)], 0.25, 0.0).unwrap();
        assert!(matches!(convolve(&a, &b), Err(Error::GridMismatch { .. })));
    }
}
