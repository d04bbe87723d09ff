use num_complex::Complex;

use super::fourier::{fft_forward, fft_inverse, signed_index};
use super::{DenseSignal, EffectiveResponse, ImpulseResponse, GRID_SNAP};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Passband membership of the unit-gain brick wall: `|f| < W/2`.
///
/// The band edge itself is excluded so that sampling the filtered signal at
/// rate `W` is an orthogonal expansion (the `±W/2` bins would alias onto
/// each other).
pub fn in_passband<T: Real>(f: T, bandwidth: T) -> bool {
    f.abs() < bandwidth / T::lit(2.0) * (T::one() - T::lit(GRID_SNAP))
}

fn check_bandwidth<T: Real>(bandwidth: T, grid_step: T) -> Result<()> {
    let limit = T::one() / (T::lit(2.0) * grid_step);
    if !(bandwidth > T::zero() && bandwidth.is_finite()) {
        return Err(Error::InvalidSignal(format!(
            "bandwidth must be positive, got {bandwidth:e}"
        )));
    }
    if bandwidth > limit * (T::one() + T::lit(GRID_SNAP)) {
        return Err(Error::BandwidthExceedsGrid {
            bandwidth: bandwidth.to_f64_lossy(),
            limit: limit.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Brick-wall projection of `x` onto `(-W/2, W/2)` on its own periodic grid.
///
/// Passband bins keep gain exactly one and all others are set to zero, so
/// the operation is idempotent. No padding is added; see [`ideal_lowpass`]
/// for the padded variant used on impulse responses.
pub fn lowpass_signal<T: Real>(x: &DenseSignal<T>, bandwidth: T) -> Result<DenseSignal<T>> {
    check_bandwidth(bandwidth, x.grid_step())?;
    let n = x.len();
    let df = T::one() / (T::from_count(n) * x.grid_step());
    let mut buf = x.samples().to_vec();
    fft_forward(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        let f = T::lit(signed_index(j, n) as f64) * df;
        if !in_passband(f, bandwidth) {
            *z = Complex::default();
        }
    }
    fft_inverse(&mut buf);
    let scale = T::one() / T::from_count(n);
    for z in &mut buf {
        *z = *z * scale;
    }
    Ok(DenseSignal::from_parts_unchecked(
        buf,
        x.grid_step(),
        x.t0(),
    ))
}

/// Zero-padding (samples before, samples after) applied to `h` before it is
/// filtered to bandwidth `W`.
///
/// Each side gets a guard of at least `Ds + T` so that every instant
/// `kT + lT - δ` with `|k| ≤ L`, `0 ≤ l < L` stays clear of the wrap-around,
/// and the padded length is at least three times the support. When `T` is
/// an integer number of grid steps the padded length is an odd multiple of
/// it, so the `T`-lattice tiles the period exactly. In every case no DFT bin
/// of the padded signal sits on the band edge `±W/2`; the passband then holds
/// exactly `N·Δ·W` bins when that product is an integer.
pub fn lowpass_padding<T: Real>(h: &ImpulseResponse<T>, bandwidth: T) -> (usize, usize) {
    let dt = h.grid_step();
    let period = T::one() / bandwidth;
    let n_sup = h.signal().len();
    let guard = ((h.delay_spread() + period) / dt)
        .ceil()
        .to_usize()
        .unwrap_or(0)
        + 1;
    let total = (n_sup + 2 * guard).max(3 * n_sup);
    let ratio = period / dt;
    let r = ratio.round();
    let padded_len = if r >= T::one() && (ratio - r).abs() <= T::lit(GRID_SNAP) * r {
        let r = r.to_usize().unwrap_or(1);
        (total.div_ceil(r) | 1) * r
    } else {
        let n = total.next_power_of_two();
        let half_bins = T::from_count(n) * dt * bandwidth / T::lit(2.0);
        if (half_bins - half_bins.round()).abs() <= T::lit(GRID_SNAP) * half_bins.max(T::one()) {
            n + 1
        } else {
            n
        }
    };
    let extra = padded_len - n_sup;
    let before = guard + (extra - 2 * guard) / 2;
    (before, extra - before)
}

/// Effective response `h_T`: `h` zero-padded (see [`lowpass_padding`]) and
/// projected onto `(-W/2, W/2)` with unit passband gain. The output keeps
/// the dense grid.
pub fn ideal_lowpass<T: Real>(
    h: &ImpulseResponse<T>,
    bandwidth: T,
) -> Result<EffectiveResponse<T>> {
    check_bandwidth(bandwidth, h.grid_step())?;
    let (before, after) = lowpass_padding(h, bandwidth);
    let padded = h.signal().padded(before, after);
    let filtered = lowpass_signal(&padded, bandwidth)?;
    Ok(EffectiveResponse::new(
        filtered,
        bandwidth,
        h.delay_spread(),
    ))
}
