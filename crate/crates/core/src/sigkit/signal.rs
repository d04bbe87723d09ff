use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs2, Real};

/// Complex samples on a uniform grid `t0 + n·grid_step`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSignal<T> {
    samples: Vec<Complex<T>>,
    grid_step: T,
    t0: T,
}

impl<T: Real> DenseSignal<T> {
    pub fn new(samples: Vec<Complex<T>>, grid_step: T, t0: T) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSignal("no samples".into()));
        }
        if !(grid_step > T::zero() && grid_step.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "grid step must be positive and finite, got {grid_step:e}"
            )));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidSignal("start time is not finite".into()));
        }
        if samples
            .iter()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidSignal("non-finite sample".into()));
        }
        Ok(DenseSignal {
            samples,
            grid_step,
            t0,
        })
    }

    pub fn zeros(len: usize, grid_step: T, t0: T) -> Result<Self> {
        Self::new(vec![Complex::default(); len], grid_step, t0)
    }

    /// Samples `f(t)` at `t0 + n·grid_step` for `n < len`.
    pub fn from_fn(
        len: usize,
        grid_step: T,
        t0: T,
        mut f: impl FnMut(T) -> Complex<T>,
    ) -> Result<Self> {
        let samples = (0..len)
            .map(|n| f(t0 + T::from_count(n) * grid_step))
            .collect();
        Self::new(samples, grid_step, t0)
    }

    pub(crate) fn from_parts_unchecked(samples: Vec<Complex<T>>, grid_step: T, t0: T) -> Self {
        debug_assert!(!samples.is_empty());
        DenseSignal {
            samples,
            grid_step,
            t0,
        }
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    pub fn grid_step(&self) -> T {
        self.grid_step
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; a signal holds at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, n: usize) -> T {
        self.t0 + T::from_count(n) * self.grid_step
    }

    /// Time of the last sample.
    pub fn end_time(&self) -> T {
        self.time(self.len() - 1)
    }

    /// Grid index of `t` if it lies on the grid (within a small relative
    /// snap tolerance) and inside the represented span.
    pub fn index_of(&self, t: T) -> Option<usize> {
        let u = (t - self.t0) / self.grid_step;
        let r = u.round();
        if (u - r).abs() > T::lit(super::GRID_SNAP) || r < T::zero() {
            return None;
        }
        let n = r.to_usize()?;
        (n < self.len()).then_some(n)
    }

    /// Left Riemann energy `Δ·Σ|x[n]|²`.
    pub fn energy(&self) -> T {
        self.grid_step * self.samples.iter().map(|&z| abs2(z)).sum::<T>()
    }

    /// Zero-pads with `before` samples ahead of the first sample and `after`
    /// behind the last one; `t0` moves back accordingly.
    pub fn padded(&self, before: usize, after: usize) -> Self {
        let mut samples = Vec::with_capacity(before + self.len() + after);
        samples.resize(before, Complex::default());
        samples.extend_from_slice(&self.samples);
        samples.resize(before + self.len() + after, Complex::default());
        DenseSignal {
            samples,
            grid_step: self.grid_step,
            t0: self.t0 - T::from_count(before) * self.grid_step,
        }
    }

    /// Multiplies every sample by `factor`.
    pub fn scaled(mut self, factor: T) -> Self {
        for z in &mut self.samples {
            *z = *z * factor;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.samples
            .iter()
            .all(|z| z.re == T::zero() && z.im == T::zero())
    }
}

/// `energy(x) = Δ·Σ|x[n]|²`; zero iff `x` is identically zero.
pub fn energy<T: Real>(x: &DenseSignal<T>) -> T {
    x.energy()
}

/// A channel impulse response that vanishes outside `[0, delay_spread]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpulseResponse<T> {
    signal: DenseSignal<T>,
    delay_spread: T,
}

impl<T: Real> ImpulseResponse<T> {
    /// Validates the support constraint: every sample whose time falls
    /// outside `[0, delay_spread]` must be exactly zero.
    pub fn new(signal: DenseSignal<T>, delay_spread: T) -> Result<Self> {
        if !(delay_spread > T::zero() && delay_spread.is_finite()) {
            return Err(Error::InvalidSignal(format!(
                "delay spread must be positive, got {delay_spread:e}"
            )));
        }
        let slack = T::lit(super::GRID_SNAP) * signal.grid_step();
        for (n, z) in signal.samples().iter().enumerate() {
            let t = signal.time(n);
            let outside = t < -slack || t > delay_spread + slack;
            if outside && (z.re != T::zero() || z.im != T::zero()) {
                return Err(Error::InvalidSignal(format!(
                    "nonzero sample at {:e} s outside support [0, {:e}] s",
                    t.to_f64_lossy(),
                    delay_spread.to_f64_lossy()
                )));
            }
        }
        Ok(ImpulseResponse {
            signal,
            delay_spread,
        })
    }

    /// Builds a response from samples starting at `t = 0`; samples past
    /// `delay_spread` are dropped (hard truncation).
    pub fn truncated(mut samples: Vec<Complex<T>>, grid_step: T, delay_spread: T) -> Result<Self> {
        let keep = support_len(grid_step, delay_spread);
        samples.truncate(keep);
        samples.resize(keep, Complex::default());
        Self::new(
            DenseSignal::new(samples, grid_step, T::zero())?,
            delay_spread,
        )
    }

    pub fn signal(&self) -> &DenseSignal<T> {
        &self.signal
    }

    pub fn delay_spread(&self) -> T {
        self.delay_spread
    }

    pub fn grid_step(&self) -> T {
        self.signal.grid_step()
    }

    pub fn energy(&self) -> T {
        self.signal.energy()
    }

    /// Rescales to unit energy.
    pub fn normalized(self) -> Result<Self> {
        let e = self.energy();
        if e <= T::zero() {
            return Err(Error::ZeroEnergyInput);
        }
        Ok(ImpulseResponse {
            signal: self.signal.scaled(T::one() / e.sqrt()),
            delay_spread: self.delay_spread,
        })
    }

    /// The same response delayed by `samples` grid steps; fails if the
    /// delayed response leaves `[0, delay_spread]`.
    pub fn delayed(&self, samples: usize) -> Result<Self> {
        let x = &self.signal;
        let mut s = vec![Complex::default(); samples];
        s.extend_from_slice(x.samples());
        let keep = x.len();
        if s[keep..]
            .iter()
            .any(|z| z.re != T::zero() || z.im != T::zero())
        {
            return Err(Error::InvalidSignal(
                "delayed response leaves its support".into(),
            ));
        }
        s.truncate(keep);
        Self::new(
            DenseSignal::new(s, x.grid_step(), x.t0())?,
            self.delay_spread,
        )
    }
}

/// Number of grid samples `n·Δ` (n ≥ 0) with `n·Δ ≤ ds`.
pub(crate) fn support_len<T: Real>(grid_step: T, ds: T) -> usize {
    let u = ds / grid_step;
    let r = u.round();
    let n = if (u - r).abs() <= T::lit(super::GRID_SNAP) * r.max(T::one()) {
        r
    } else {
        u.floor()
    };
    n.to_usize().unwrap_or(0) + 1
}

/// A response lowpass filtered to bandwidth `W`; carries `T = 1/W`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveResponse<T> {
    signal: DenseSignal<T>,
    bandwidth: T,
    sample_time: T,
    delay_spread: T,
}

impl<T: Real> EffectiveResponse<T> {
    pub(crate) fn new(signal: DenseSignal<T>, bandwidth: T, delay_spread: T) -> Self {
        EffectiveResponse {
            signal,
            bandwidth,
            sample_time: T::one() / bandwidth,
            delay_spread,
        }
    }

    /// Wraps an already bandlimited signal, e.g. one produced by
    /// [`super::lowpass_signal`]. `delay_spread` is the support length of
    /// the physical response it came from.
    pub fn from_bandlimited(signal: DenseSignal<T>, bandwidth: T, delay_spread: T) -> Result<Self> {
        if !(bandwidth > T::zero() && bandwidth.is_finite()) {
            return Err(Error::InvalidSignal("bandwidth must be positive".into()));
        }
        if delay_spread < T::zero() {
            return Err(Error::InvalidSignal(
                "delay spread must be nonnegative".into(),
            ));
        }
        Ok(Self::new(signal, bandwidth, delay_spread))
    }

    pub fn signal(&self) -> &DenseSignal<T> {
        &self.signal
    }

    pub fn bandwidth(&self) -> T {
        self.bandwidth
    }

    pub fn sample_time(&self) -> T {
        self.sample_time
    }

    /// Support length `Ds` of the originating impulse response.
    pub fn delay_spread(&self) -> T {
        self.delay_spread
    }

    pub fn energy(&self) -> T {
        self.signal.energy()
    }
}
