//! Channel candidates, their gains, energy-based acquisition and the
//! sampling-phase penalty.
//!
//! For an effective response `h_T` of bandwidth `W = 1/T`, the candidate at
//! sub-sample offset `δ ∈ [0, T)` and coarse offset `k` has taps
//! `h_T(kT + lT - δ)` for `0 ≤ l < L`, `L = floor(Ds·W)`, and gain
//! `T·Σ|tap|²`.

use std::ops::RangeInclusive;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs2, Real};
use crate::sigkit::{ideal_lowpass, EffectiveResponse, ImpulseResponse, Interpolator, GRID_SNAP};

/// `L = floor(Ds·W)`. Products within a relative `1e-9` of an integer snap
/// to it, so `Ds = 1 µs, W = 3 MHz` gives 3 even when the floating product
/// lands just below.
pub fn tap_count<T: Real>(delay_spread: T, bandwidth: T) -> usize {
    if !(delay_spread > T::zero()) || !(bandwidth > T::zero()) {
        return 0;
    }
    let x = delay_spread * bandwidth;
    let r = x.round();
    let n = if (x - r).abs() <= T::lit(GRID_SNAP) * r.max(T::one()) {
        r
    } else {
        x.floor()
    };
    n.to_usize().unwrap_or(0)
}

/// `L` taps observed at offset `δ` and coarse offset `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCandidate<T> {
    pub taps: Vec<Complex<T>>,
    pub offset: T,
    pub coarse_offset: i64,
    pub sample_time: T,
    pub gain: T,
}

impl<T: Real> ChannelCandidate<T> {
    fn from_taps(taps: Vec<Complex<T>>, offset: T, coarse_offset: i64, sample_time: T) -> Self {
        let gain = sample_time * taps.iter().map(|&z| abs2(z)).sum::<T>();
        ChannelCandidate {
            taps,
            offset,
            coarse_offset,
            sample_time,
            gain,
        }
    }

    pub fn tap_count(&self) -> usize {
        self.taps.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionResult<T> {
    pub best_k: i64,
    pub candidate: ChannelCandidate<T>,
}

/// Gains of one realization at `M` sampling phases and the resulting
/// worst-case relative loss `1 - min g / max g`.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyRecord<T> {
    pub id: usize,
    pub gains: Vec<T>,
    pub max_penalty: T,
}

impl<T: Real> PenaltyRecord<T> {
    /// Zero when all gains are equal, including the all-zero case.
    pub fn from_gains(id: usize, gains: Vec<T>) -> Self {
        let max_penalty = penalty_from_gains(&gains);
        PenaltyRecord {
            id,
            gains,
            max_penalty,
        }
    }
}

pub fn penalty_from_gains<T: Real>(gains: &[T]) -> T {
    let hi = gains.iter().copied().fold(T::zero(), T::max);
    let lo = gains.iter().copied().fold(T::infinity(), T::min);
    if hi <= T::zero() {
        return T::zero();
    }
    (T::one() - lo / hi).max(T::zero()).min(T::one())
}

/// Candidate extraction for one effective response, reusing its spectrum
/// across offsets.
#[derive(Debug, Clone)]
pub struct CandidateSampler<'a, T> {
    response: &'a EffectiveResponse<T>,
    interp: Interpolator<T>,
    taps: usize,
}

impl<'a, T: Real> CandidateSampler<'a, T> {
    pub fn new(response: &'a EffectiveResponse<T>) -> Self {
        let taps = tap_count(response.delay_spread(), response.bandwidth());
        CandidateSampler {
            response,
            interp: Interpolator::new(response.signal()),
            taps,
        }
    }

    /// `L` for this response.
    pub fn tap_count(&self) -> usize {
        self.taps
    }

    /// Default acquisition window `[-L, L]`.
    pub fn default_window(&self) -> RangeInclusive<i64> {
        let l = self.taps as i64;
        -l..=l
    }

    fn check_offset(&self, offset: T) -> Result<()> {
        let period = self.response.sample_time();
        if !(offset >= T::zero() && offset < period) {
            return Err(Error::OffsetOutOfRange {
                offset: offset.to_f64_lossy(),
                period: period.to_f64_lossy(),
            });
        }
        Ok(())
    }

    pub fn candidate(&self, offset: T, k: i64) -> Result<ChannelCandidate<T>> {
        self.check_offset(offset)?;
        let period = self.response.sample_time();
        let origin = T::lit(k as f64) * period - offset;
        let taps = self.interp.lattice(origin, period, 0, self.taps)?;
        Ok(ChannelCandidate::from_taps(taps, offset, k, period))
    }

    /// Coarse offset in `window` maximizing the gain; ties go to the
    /// smallest `k`.
    pub fn acquire(&self, offset: T, window: RangeInclusive<i64>) -> Result<AcquisitionResult<T>> {
        self.check_offset(offset)?;
        let (k_lo, k_hi) = (*window.start(), *window.end());
        if k_hi < k_lo {
            return Err(Error::EmptyWindow);
        }
        let period = self.response.sample_time();
        let span = (k_hi - k_lo) as usize + 1;
        let l = self.taps;
        let origin = T::lit(k_lo as f64) * period - offset;
        // One lattice covers every window position.
        let values = self
            .interp
            .lattice(origin, period, 0, span + l.saturating_sub(1))?;
        let power: Vec<T> = values.iter().map(|&z| abs2(z)).collect();
        let mut best = 0usize;
        let mut best_sum = T::neg_infinity();
        for j in 0..span {
            let s: T = power[j..j + l].iter().copied().sum();
            if s > best_sum {
                best_sum = s;
                best = j;
            }
        }
        let k = k_lo + best as i64;
        let taps = values[best..best + l].to_vec();
        Ok(AcquisitionResult {
            best_k: k,
            candidate: ChannelCandidate::from_taps(taps, offset, k, period),
        })
    }

    /// Acquired gains at offsets `ε + mT/M`, `m = 0..M`, over the default
    /// window.
    pub fn phase_penalty(&self, id: usize, eps: T, phases: usize) -> Result<PenaltyRecord<T>> {
        if phases < 2 {
            return Err(Error::Config(format!(
                "phase count must be at least 2, got {phases}"
            )));
        }
        let period = self.response.sample_time();
        let step = period / T::from_count(phases);
        if !(eps >= T::zero() && eps < step) {
            return Err(Error::OffsetOutOfRange {
                offset: eps.to_f64_lossy(),
                period: step.to_f64_lossy(),
            });
        }
        let gains = (0..phases)
            .map(|m| {
                let offset = eps + T::from_count(m) * step;
                self.acquire(offset, self.default_window())
                    .map(|a| a.candidate.gain)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PenaltyRecord::from_gains(id, gains))
    }
}

/// Candidate with taps `h_T(kT + lT - δ)`, `0 ≤ l < L`.
pub fn extract_candidate<T: Real>(
    response: &EffectiveResponse<T>,
    offset: T,
    k: i64,
) -> Result<ChannelCandidate<T>> {
    CandidateSampler::new(response).candidate(offset, k)
}

/// Energy-based coarse acquisition: the `k` in `window` with the largest
/// candidate gain.
pub fn acquire<T: Real>(
    response: &EffectiveResponse<T>,
    offset: T,
    window: RangeInclusive<i64>,
) -> Result<AcquisitionResult<T>> {
    CandidateSampler::new(response).acquire(offset, window)
}

/// Filters `h` to bandwidth `W` and measures the gain spread over the `M`
/// sampling phases `ε + mT/M`; requires `0 ≤ ε < T/M` and `M ≥ 2`.
pub fn phase_penalty<T: Real>(
    h: &ImpulseResponse<T>,
    bandwidth: T,
    eps: T,
    phases: usize,
) -> Result<PenaltyRecord<T>> {
    let response = ideal_lowpass(h, bandwidth)?;
    CandidateSampler::new(&response).phase_penalty(0, eps, phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigkit::{lowpass_signal, DenseSignal};
    use std::f64::consts::PI;

    #[test]
    fn tap_counts_for_table_ladder() {
        let ds = 279e-9;
        let got: Vec<usize> = (0..9).map(|j| tap_count(ds, 4e6 * 2f64.powi(j))).collect();
        assert_eq!(got, vec![1, 2, 4, 8, 17, 35, 71, 142, 285]);
        assert_eq!(tap_count(0.0, 1e6), 0);
        assert_eq!(tap_count(1e-6, 3e6), 3);
    }

    #[test]
    fn penalty_arithmetic() {
        let p: f64 = penalty_from_gains(&[1.0, 0.8, 0.9, 0.95]);
        assert!((p - 0.2).abs() < 1e-15);
        assert_eq!(penalty_from_gains(&[0.5; 4]), 0.0);
        assert_eq!(penalty_from_gains(&[0.0; 4]), 0.0);
    }

    /// sinc of bandwidth `w` centred at `t = 0` on a dense grid.
    fn sinc_response(w: f64, dt: f64, half: usize, ds: f64) -> EffectiveResponse<f64> {
        let x = DenseSignal::from_fn(2 * half, dt, -(half as f64) * dt, |t| {
            let a = PI * w * t;
            Complex::new(if t == 0.0 { 1.0 } else { a.sin() / a }, 0.0)
        })
        .unwrap();
        let x = lowpass_signal(&x, w * 1.01).unwrap();
        EffectiveResponse::from_bandlimited(x, w, ds).unwrap()
    }

    #[test]
    fn on_grid_candidate_equals_grid_samples() {
        let dt = 1e-9;
        let w = 1.0 / (8.0 * dt);
        let ht = sinc_response(w, dt, 256, 80.0 * dt);
        let c = extract_candidate(&ht, 0.0, 0).unwrap();
        assert_eq!(c.tap_count(), 10);
        for (l, tap) in c.taps.iter().enumerate() {
            let n = ht.signal().index_of(l as f64 * 8.0 * dt).unwrap();
            assert_eq!(*tap, ht.signal().samples()[n]);
        }
    }

    #[test]
    fn zero_response_gives_zero_gain_and_leftmost_k() {
        let x = DenseSignal::<f64>::zeros(512, 1e-9, -256e-9).unwrap();
        let ht = EffectiveResponse::from_bandlimited(x, 50e6, 60e-9).unwrap();
        let c = extract_candidate(&ht, 0.0, 0).unwrap();
        assert_eq!(c.gain, 0.0);
        let a = acquire(&ht, 0.0, -2..=2).unwrap();
        assert_eq!(a.best_k, -2);
        assert_eq!(a.candidate.gain, 0.0);
    }

    #[test]
    fn offset_and_window_validation() {
        let ht = sinc_response(1e8, 1e-9, 128, 40e-9);
        assert!(matches!(
            extract_candidate(&ht, 1e-8, 0),
            Err(Error::OffsetOutOfRange { .. })
        ));
        assert!(matches!(
            extract_candidate(&ht, -1e-12, 0),
            Err(Error::OffsetOutOfRange { .. })
        ));
        #[allow(clippy::reversed_empty_ranges)]
        let empty = 1..=0;
        assert!(matches!(acquire(&ht, 0.0, empty), Err(Error::EmptyWindow)));
        let s = CandidateSampler::new(&ht);
        assert!(s.phase_penalty(0, 0.0, 1).is_err());
        assert!(s.phase_penalty(0, 0.3e-8, 4).is_err());
    }

    #[test]
    fn aligned_sinc_acquires_at_zero() {
        let ht = sinc_response(1e8, 1e-9, 256, 40e-9);
        let a = acquire(&ht, 0.0, -2..=2).unwrap();
        assert_eq!(a.best_k, 0);
    }

    #[test]
    fn single_tap_penalty_matches_direct_phase_evaluation() {
        // L = 1: each phase gain is T·|h_T(kT - δ)|² maximized over k.
        let dt = 1e-9;
        let w = 1.0 / (64.0 * dt);
        let ht = sinc_response(w, dt, 1024, 70.0 * dt);
        let t = 1.0 / w;
        let eps = 0.1 * t;
        let rec = CandidateSampler::new(&ht).phase_penalty(3, eps, 4).unwrap();
        let interp = Interpolator::new(ht.signal());
        let direct: Vec<f64> = (0..4)
            .map(|m| {
                let d = eps + m as f64 * t / 4.0;
                (-1..=1)
                    .map(|k| t * interp.eval(k as f64 * t - d).unwrap().norm_sqr())
                    .fold(0.0, f64::max)
            })
            .collect();
        for (g, d) in rec.gains.iter().zip(&direct) {
            assert!((g - d).abs() < 1e-12);
        }
        assert!((rec.max_penalty - penalty_from_gains(&direct)).abs() < 1e-12);
        assert_eq!(rec.id, 3);
    }
}
