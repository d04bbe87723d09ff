use num_complex::Complex;

use super::fourier::{fft_forward, fft_inverse, signed_index};
use super::{DenseSignal, GRID_SNAP};
use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

/// Bandlimited (trigonometric) interpolation of a dense signal.
///
/// The signal is read as one period of a periodic, bandlimited function;
/// the interpolant passes through every grid sample and has no content
/// above the grid's Nyquist frequency. For even lengths the Nyquist bin is
/// split evenly between `±1/(2Δ)`, which keeps real signals real.
///
/// Construction costs one FFT. Arbitrary instants cost `O(nnz)` each, where
/// `nnz` is the number of nonzero bins, and [`Interpolator::shifted`] /
/// [`Interpolator::lattice`] reuse the spectrum for whole-grid fractional
/// shifts.
#[derive(Debug, Clone)]
pub struct Interpolator<T> {
    signal: DenseSignal<T>,
    /// FFT-order coefficients, already divided by `N`.
    coeffs: Vec<Complex<T>>,
    /// `(signed index, coefficient)` for nonzero bins, Nyquist excluded.
    active: Vec<(isize, Complex<T>)>,
    nyquist: Complex<T>,
}

impl<T: Real> Interpolator<T> {
    pub fn new(x: &DenseSignal<T>) -> Self {
        let n = x.len();
        let mut coeffs = x.samples().to_vec();
        fft_forward(&mut coeffs);
        let scale = T::one() / T::from_count(n);
        for z in &mut coeffs {
            *z = *z * scale;
        }
        let mut active = Vec::new();
        let mut nyquist = Complex::default();
        for (j, &z) in coeffs.iter().enumerate() {
            if n % 2 == 0 && j == n / 2 {
                nyquist = z;
            } else if z.re != T::zero() || z.im != T::zero() {
                active.push((signed_index(j, n), z));
            }
        }
        Interpolator {
            signal: x.clone(),
            coeffs,
            active,
            nyquist,
        }
    }

    pub fn signal(&self) -> &DenseSignal<T> {
        &self.signal
    }

    fn check_time(&self, t: T) -> Result<()> {
        let start = self.signal.t0();
        let end = self.signal.end_time();
        let slack = T::lit(GRID_SNAP) * self.signal.grid_step();
        if !(t >= start - slack && t <= end + slack) {
            return Err(Error::TimeOutOfRange {
                time: t.to_f64_lossy(),
                start: start.to_f64_lossy(),
                end: end.to_f64_lossy(),
            });
        }
        Ok(())
    }

    /// Value at time `t`; grid instants return the stored sample exactly.
    pub fn eval(&self, t: T) -> Result<Complex<T>> {
        self.check_time(t)?;
        if let Some(n) = self.signal.index_of(t) {
            return Ok(self.signal.samples()[n]);
        }
        let u = (t - self.signal.t0()) / self.signal.grid_step();
        Ok(self.eval_offset(u))
    }

    /// Interpolant at fractional grid position `u` (no range check).
    fn eval_offset(&self, u: T) -> Complex<T> {
        let n = T::from_count(self.signal.len());
        let two_pi = T::TAU();
        let mut acc = Complex::default();
        for &(s, c) in &self.active {
            // Reduce the cycle count before scaling by 2π to keep the phase
            // accurate far from the origin.
            let cycles = T::lit(s as f64) * u / n;
            acc = acc + c * cis(two_pi * (cycles - cycles.round()));
        }
        if self.nyquist.re != T::zero() || self.nyquist.im != T::zero() {
            let half = u / T::lit(2.0);
            acc = acc + self.nyquist * (two_pi * (half - half.round())).cos();
        }
        acc
    }

    pub fn eval_many(&self, times: &[T]) -> Result<Vec<Complex<T>>> {
        times.iter().map(|&t| self.eval(t)).collect()
    }

    /// The signal delayed by `delay` seconds, `y(t) = x(t - delay)`, on the
    /// same grid. Circular: content pushed past one end re-enters at the
    /// other.
    pub fn shifted(&self, delay: T) -> DenseSignal<T> {
        let n = self.signal.len();
        let nn = T::from_count(n);
        let u = delay / self.signal.grid_step();
        let two_pi = T::TAU();
        let mut buf = self.coeffs.clone();
        for (j, z) in buf.iter_mut().enumerate() {
            if n % 2 == 0 && j == n / 2 {
                let half = u / T::lit(2.0);
                *z = *z * (two_pi * (half - half.round())).cos();
            } else {
                let cycles = T::lit(signed_index(j, n) as f64) * u / nn;
                *z = *z * cis(-two_pi * (cycles - cycles.round()));
            }
        }
        fft_inverse(&mut buf);
        DenseSignal::from_parts_unchecked(buf, self.signal.grid_step(), self.signal.t0())
    }

    /// Values at `origin + j·spacing` for `j` in `first..first + count`.
    ///
    /// When `spacing` is an integer number of grid steps this costs a single
    /// fractional shift followed by strided reads; otherwise each instant is
    /// evaluated on its own.
    pub fn lattice(
        &self,
        origin: T,
        spacing: T,
        first: i64,
        count: usize,
    ) -> Result<Vec<Complex<T>>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        let at = |j: i64| origin + T::lit(j as f64) * spacing;
        let last = first + count as i64 - 1;
        self.check_time(at(first))?;
        self.check_time(at(last))?;

        let dt = self.signal.grid_step();
        let ratio = spacing / dt;
        let r = ratio.round();
        if !(r >= T::one() && (ratio - r).abs() <= T::lit(GRID_SNAP) * r) {
            return (first..=last).map(|j| self.eval(at(j))).collect();
        }
        let stride = r.to_usize().unwrap_or(1);
        let u0 = (at(first) - self.signal.t0()) / dt;
        let mut base = u0.floor();
        let mut frac = u0 - base;
        if T::one() - frac <= T::lit(GRID_SNAP) {
            base = base + T::one();
            frac = T::zero();
        }
        let base = base.max(T::zero()).to_usize().unwrap_or(0);
        let grid: std::borrow::Cow<'_, [Complex<T>]> = if frac <= T::lit(GRID_SNAP) {
            self.signal.samples().into()
        } else {
            // z[n] = x(t0 + (n + frac)Δ)
            self.shifted(-frac * dt).into_samples().into()
        };
        let n = grid.len();
        Ok((0..count)
            .map(|j| grid[(base + j * stride).min(n - 1)])
            .collect())
    }
}

/// Bandlimited interpolation of `x` at arbitrary `times`; exact on the grid.
pub fn sample_at<T: Real>(x: &DenseSignal<T>, times: &[T]) -> Result<Vec<Complex<T>>> {
    Interpolator::new(x).eval_many(times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigkit::lowpass_signal;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn bandlimited(n: usize, seed: u64) -> DenseSignal<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = (0..n)
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let x = DenseSignal::new(s, 0.5, 2.0).unwrap();
        lowpass_signal(&x, 0.5).unwrap()
    }

    #[test]
    fn on_grid_instants_are_exact() {
        let x = bandlimited(128, 1);
        let times: Vec<f64> = (0..128).map(|n| x.time(n)).collect();
        let y = sample_at(&x, &times).unwrap();
        assert_eq!(y, x.samples());
    }

    #[test]
    fn sinc_zero_crossings() {
        // sinc of bandwidth B = 1/(4Δ) centred at t = 0.
        let dt = 1e-3;
        let b = 1.0 / (4.0 * dt);
        let x = DenseSignal::from_fn(1024, dt, -512.0 * dt, |t| {
            let a = PI * b * t;
            Complex::new(if t == 0.0 { 1.0 } else { a.sin() / a }, 0.0)
        })
        .unwrap();
        let interp = Interpolator::new(&x);
        assert!((interp.eval(0.0).unwrap() - Complex::new(1.0, 0.0)).norm() < 1e-8);
        for k in [-3i32, -1, 1, 2, 7] {
            assert!(interp.eval(k as f64 / b).unwrap().norm() < 1e-8);
        }
    }

    #[test]
    fn out_of_range_time_is_rejected() {
        let x = bandlimited(16, 2);
        assert!(matches!(
            sample_at(&x, &[x.t0() - 1.0]),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(sample_at(&x, &[x.end_time() + 0.1]).is_err());
    }

    #[test]
    fn shift_agrees_with_pointwise_evaluation() {
        let x = bandlimited(64, 3);
        let interp = Interpolator::new(&x);
        let delay = 0.37 * x.grid_step();
        let y = interp.shifted(delay);
        for n in 5..60 {
            let direct = interp.eval(x.time(n) - delay).unwrap();
            assert!((y.samples()[n] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn shift_round_trip() {
        let x = bandlimited(100, 4);
        let d = 0.813 * x.grid_step();
        let back = Interpolator::new(&Interpolator::new(&x).shifted(d)).shifted(-d);
        for (a, b) in x.samples().iter().zip(back.samples()) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn lattice_fast_path_matches_slow_path() {
        let x = bandlimited(96, 5);
        let interp = Interpolator::new(&x);
        let dt = x.grid_step();
        for (origin, spacing) in [
            (x.t0() + 3.3 * dt, 4.0 * dt),
            (x.t0() + 2.0 * dt, 3.0 * dt),
            (x.t0() + 1.1 * dt, 2.5 * dt),
        ] {
            let fast = interp.lattice(origin, spacing, 0, 20).unwrap();
            for (j, v) in fast.iter().enumerate() {
                let direct = interp.eval(origin + j as f64 * spacing).unwrap();
                assert!((v - direct).norm() < 1e-12, "{origin} {spacing} {j}");
            }
        }
        assert!(interp.lattice(x.t0(), 4.0 * dt, 0, 100).is_err());
        assert!(interp.lattice(x.t0(), dt, 0, 0).unwrap().is_empty());
    }
}
