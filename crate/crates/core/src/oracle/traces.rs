use num_complex::Complex;

use crate::candidates::{tap_count, CandidateSampler};
use crate::error::{Error, Result};
use crate::scalar::{abs2, Real};
use crate::sigkit::{
    ideal_lowpass, lowpass_signal, DenseSignal, EffectiveResponse, ImpulseResponse, Interpolator,
    GRID_SNAP,
};

/// Discrepancy measured along a strictly decreasing parameter ladder
/// (`T`, `T'` or `δ`).
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace<T> {
    pub parameters: Vec<T>,
    pub discrepancies: Vec<T>,
    /// Log-log least-squares slope of discrepancy against parameter; `None`
    /// with fewer than four positive rungs.
    pub fitted_order: Option<T>,
}

impl<T: Real> ConvergenceTrace<T> {
    pub fn new(parameters: Vec<T>, discrepancies: Vec<T>) -> Result<Self> {
        if parameters.len() != discrepancies.len() {
            return Err(Error::Config(
                "ladder and discrepancy lengths differ".into(),
            ));
        }
        if parameters.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config("ladder must be strictly decreasing".into()));
        }
        if discrepancies.iter().any(|d| !(*d >= T::zero())) {
            return Err(Error::Config("discrepancies must be nonnegative".into()));
        }
        let fitted_order = fit_decay_order(&parameters, &discrepancies);
        Ok(ConvergenceTrace {
            parameters,
            discrepancies,
            fitted_order,
        })
    }

    /// Each rung at most `slack` above the previous one.
    pub fn is_nonincreasing(&self, slack: T) -> bool {
        self.discrepancies.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    /// Successive ratios `d[i] / d[i+1]`.
    pub fn ratios(&self) -> Vec<T> {
        self.discrepancies.windows(2).map(|w| w[0] / w[1]).collect()
    }

    pub fn last(&self) -> Option<T> {
        self.discrepancies.last().copied()
    }
}

/// Slope of `ln d` against `ln p` over the rungs with `d > 0`.
pub fn fit_decay_order<T: Real>(parameters: &[T], discrepancies: &[T]) -> Option<T> {
    let pts: Vec<(T, T)> = parameters
        .iter()
        .zip(discrepancies)
        .filter(|(p, d)| **p > T::zero() && **d > T::zero() && d.is_finite())
        .map(|(p, d)| (p.ln(), d.ln()))
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let n = T::from_count(pts.len());
    let mx = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: T = pts.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > T::zero()).then(|| sxy / sxx)
}

/// Trapezoid rule for `∫_a^b |y(t)|² dt` on the grid of `grid`.
///
/// Interior nodes are the grid instants strictly inside `(a, b)`; the end
/// points use the grid sample when they sit on the grid and `endpoint`
/// otherwise.
pub fn window_integral<T: Real>(
    grid: &DenseSignal<T>,
    a: T,
    b: T,
    endpoint: impl Fn(T) -> Result<Complex<T>>,
) -> Result<T> {
    if !(b > a) {
        return Ok(T::zero());
    }
    let value = |t: T| match grid.index_of(t) {
        Some(n) => Ok(grid.samples()[n]),
        None => endpoint(t),
    };
    let dt = grid.grid_step();
    let snap = T::lit(GRID_SNAP);
    let ua = (a - grid.t0()) / dt;
    let ub = (b - grid.t0()) / dt;
    let first = (ua + snap).floor() + T::one();
    let last = (ub - snap).ceil() - T::one();

    let mut prev_t = a;
    let mut prev_p = abs2(value(a)?);
    let mut acc = T::zero();
    if first <= last {
        let lo = first.to_usize().ok_or_else(|| out_of_range(grid, a))?;
        let hi = last.to_usize().ok_or_else(|| out_of_range(grid, b))?;
        if hi >= grid.len() {
            return Err(out_of_range(grid, b));
        }
        for n in lo..=hi {
            let t = grid.time(n);
            let p = abs2(grid.samples()[n]);
            acc = acc + (t - prev_t) * (p + prev_p) / T::lit(2.0);
            prev_t = t;
            prev_p = p;
        }
    }
    let p = abs2(value(b)?);
    acc = acc + (b - prev_t) * (p + prev_p) / T::lit(2.0);
    Ok(acc)
}

fn out_of_range<T: Real>(grid: &DenseSignal<T>, t: T) -> Error {
    Error::TimeOutOfRange {
        time: t.to_f64_lossy(),
        start: grid.t0().to_f64_lossy(),
        end: grid.end_time().to_f64_lossy(),
    }
}

/// `∫_0^Ds |h_T(t - δ)|² dt`.
fn shifted_window<T: Real>(interp: &Interpolator<T>, ds: T, delay: T) -> Result<T> {
    if delay == T::zero() {
        return window_integral(interp.signal(), T::zero(), ds, |t| interp.eval(t));
    }
    let y = interp.shifted(delay);
    window_integral(&y, T::zero(), ds, |t| interp.eval(t - delay))
}

/// Lowpass energy deficit `E(h) - E(lowpass(h, W))` along increasing
/// bandwidths. The parameter ladder is `T = 1/W`.
///
/// All rungs filter the same grid, so the passbands are nested and the
/// deficit (which equals `∫|h - h_T|²`) cannot grow. Pad `h` beforehand if
/// wrap-around matters.
pub fn approximation1_trace<T: Real>(
    h: &DenseSignal<T>,
    bandwidths: &[T],
) -> Result<ConvergenceTrace<T>> {
    let e = h.energy();
    let mut params = Vec::with_capacity(bandwidths.len());
    let mut disc = Vec::with_capacity(bandwidths.len());
    for &w in bandwidths {
        let filtered = lowpass_signal(h, w)?;
        params.push(T::one() / w);
        disc.push((e - filtered.energy()).max(T::zero()));
    }
    ConvergenceTrace::new(params, disc)
}

/// Windowed translation gap `|∫_0^Ds |h_T|² - ∫_0^Ds |h_T(t - δ)|²|` along a
/// decreasing offset ladder.
pub fn approximation2_trace<T: Real>(
    response: &EffectiveResponse<T>,
    offsets: &[T],
) -> Result<ConvergenceTrace<T>> {
    let interp = Interpolator::new(response.signal());
    let ds = response.delay_spread();
    let base = shifted_window(&interp, ds, T::zero())?;
    let disc = offsets
        .iter()
        .map(|&d| shifted_window(&interp, ds, d).map(|v| (base - v).abs()))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new(offsets.to_vec(), disc)
}

/// Riemann-sum gap `|∫_0^Ds |h_T(t - δ)|² dt - Σ_{l<L'} T'|h_T(lT' - δ)|²|`
/// with `L' = floor(Ds/T')`, along a decreasing spacing ladder.
pub fn approximation3_trace<T: Real>(
    response: &EffectiveResponse<T>,
    offset: T,
    spacings: &[T],
) -> Result<ConvergenceTrace<T>> {
    let interp = Interpolator::new(response.signal());
    let ds = response.delay_spread();
    let reference = shifted_window(&interp, ds, offset)?;
    let disc = spacings
        .iter()
        .map(|&sp| {
            let taps = tap_count(ds, T::one() / sp);
            let v = interp.lattice(-offset, sp, 0, taps)?;
            let sum = sp * v.iter().map(|&z| abs2(z)).sum::<T>();
            Ok((reference - sum).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new(spacings.to_vec(), disc)
}

/// The gap between `‖h‖²` and the gain of the `k = 0` candidate, split into
/// the three approximation steps at a single `(W, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainBreakdown<T> {
    pub energy: T,
    pub gain: T,
    /// `|‖h‖² - ∫_0^Ds |h_T|²|`
    pub lowpass: T,
    /// `|∫_0^Ds |h_T|² - ∫_0^Ds |h_T(· - δ)|²|`
    pub translation: T,
    /// `|∫_0^Ds |h_T(· - δ)|² - gain|`
    pub riemann: T,
}

impl<T: Real> ChainBreakdown<T> {
    pub fn gap(&self) -> T {
        (self.energy - self.gain).abs()
    }

    pub fn bound(&self) -> T {
        self.lowpass + self.translation + self.riemann
    }

    pub fn holds(&self, slack: T) -> bool {
        self.gap() <= self.bound() + slack
    }
}

pub fn proof_chain<T: Real>(
    h: &ImpulseResponse<T>,
    bandwidth: T,
    offset: T,
) -> Result<ChainBreakdown<T>> {
    let response = ideal_lowpass(h, bandwidth)?;
    let sampler = CandidateSampler::new(&response);
    let gain = sampler.candidate(offset, 0)?.gain;
    let interp = Interpolator::new(response.signal());
    let ds = h.delay_spread();
    let energy = h.energy();
    let window = shifted_window(&interp, ds, T::zero())?;
    let shifted = shifted_window(&interp, ds, offset)?;
    Ok(ChainBreakdown {
        energy,
        gain,
        lowpass: (energy - window).abs(),
        translation: (window - shifted).abs(),
        riemann: (shifted - gain).abs(),
    })
}
