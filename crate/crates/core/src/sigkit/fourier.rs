use num_complex::Complex;
use rustfft::FftPlanner;

use super::DenseSignal;
use crate::scalar::{abs2, Real};

/// Discrete approximation of the Fourier transform of a [`DenseSignal`].
///
/// Bins are stored in ascending frequency order: `bins[k]` sits at
/// `f0 + k·freq_step` with `f0 = -floor(N/2)·freq_step`. Each bin is
/// `Δ·Σ x[n]·e^{-j2π f n Δ}`, i.e. the phase reference is the first sample
/// at `t0`, which the spectrum remembers so that [`idft`] can rebuild the
/// signal on its original grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    bins: Vec<Complex<T>>,
    freq_step: T,
    f0: T,
    t0: T,
}

impl<T: Real> Spectrum<T> {
    pub(crate) fn from_parts(bins: Vec<Complex<T>>, freq_step: T, f0: T, t0: T) -> Self {
        Spectrum {
            bins,
            freq_step,
            f0,
            t0,
        }
    }

    pub fn bins(&self) -> &[Complex<T>] {
        &self.bins
    }

    pub fn freq_step(&self) -> T {
        self.freq_step
    }

    pub fn f0(&self) -> T {
        self.f0
    }

    /// Start time of the signal this spectrum was taken from.
    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn frequency(&self, k: usize) -> T {
        self.f0 + T::from_count(k) * self.freq_step
    }

    /// Index of the bin at frequency `f`, if `f` is a bin frequency.
    pub fn bin_of(&self, f: T) -> Option<usize> {
        let u = (f - self.f0) / self.freq_step;
        let r = u.round();
        if (u - r).abs() > T::lit(super::GRID_SNAP) || r < T::zero() {
            return None;
        }
        r.to_usize().filter(|&k| k < self.len())
    }

    /// Frequency-domain energy `df·Σ|X[k]|²`.
    pub fn energy(&self) -> T {
        self.freq_step * self.bins.iter().map(|&z| abs2(z)).sum::<T>()
    }

    /// Grid step of the time-domain signal, `1/(N·df)`.
    pub fn grid_step(&self) -> T {
        T::one() / (T::from_count(self.len()) * self.freq_step)
    }
}

/// Signed frequency index of FFT-order position `j` on an `n`-point grid.
/// For even `n` the Nyquist bin maps to `-n/2`.
#[inline]
pub(crate) fn signed_index(j: usize, n: usize) -> isize {
    if j <= (n - 1) / 2 {
        j as isize
    } else {
        j as isize - n as isize
    }
}

pub(crate) fn fft_forward<T: Real>(buf: &mut [Complex<T>]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// Unnormalized inverse FFT.
pub(crate) fn fft_inverse<T: Real>(buf: &mut [Complex<T>]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

/// Transforms `x` into its [`Spectrum`].
pub fn dft<T: Real>(x: &DenseSignal<T>) -> Spectrum<T> {
    let n = x.len();
    let dt = x.grid_step();
    let mut buf = x.samples().to_vec();
    fft_forward(&mut buf);
    let half = n / 2;
    let mut bins = vec![Complex::default(); n];
    for (j, z) in buf.into_iter().enumerate() {
        let k = (signed_index(j, n) + half as isize) as usize;
        bins[k] = z * dt;
    }
    let freq_step = T::one() / (T::from_count(n) * dt);
    Spectrum {
        bins,
        freq_step,
        f0: -T::from_count(half) * freq_step,
        t0: x.t0(),
    }
}

/// Inverse of [`dft`]: rebuilds the signal on its original grid.
pub fn idft<T: Real>(s: &Spectrum<T>) -> DenseSignal<T> {
    let n = s.len();
    let half = n / 2;
    let dt = s.grid_step();
    let mut buf = vec![Complex::default(); n];
    for (j, slot) in buf.iter_mut().enumerate() {
        let k = (signed_index(j, n) + half as isize) as usize;
        *slot = s.bins[k];
    }
    fft_inverse(&mut buf);
    // Forward scaled by Δ, inverse FFT scales by N: undo both.
    let scale = T::one() / (T::from_count(n) * dt);
    for z in &mut buf {
        *z = *z * scale;
    }
    DenseSignal::from_parts_unchecked(buf, dt, s.t0)
}
