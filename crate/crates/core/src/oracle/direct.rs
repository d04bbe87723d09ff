use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs2, cis, Real};
use crate::sigkit::{dft, DenseSignal, Spectrum};

/// Largest input accepted by the `O(n²)` routines.
pub const SIZE_GUARD: usize = 4096;

fn guard(len: usize) -> Result<()> {
    if len > SIZE_GUARD {
        return Err(Error::SizeGuardExceeded {
            len,
            limit: SIZE_GUARD,
        });
    }
    Ok(())
}

/// Double-loop Riemann convolution `y[n] = Δ·Σ_m h[m]·s[n-m]`.
pub fn direct_convolve<T: Real>(h: &DenseSignal<T>, s: &DenseSignal<T>) -> Result<DenseSignal<T>> {
    guard(h.len())?;
    guard(s.len())?;
    crate::sigkit::check_grids(h, s)?;
    let mut out = vec![Complex::default(); h.len() + s.len() - 1];
    for (m, &a) in h.samples().iter().enumerate() {
        for (k, &b) in s.samples().iter().enumerate() {
            out[m + k] = out[m + k] + a * b;
        }
    }
    let dt = h.grid_step();
    for z in &mut out {
        *z = *z * dt;
    }
    DenseSignal::new(out, dt, h.t0() + s.t0())
}

/// Definition-level transform, `X(f_k) = Δ·Σ_n x[n]·e^{-j2π k n / N}` with
/// the same centred layout as [`crate::sigkit::dft`]. Phases are reduced
/// with integer arithmetic before the trigonometric call.
pub fn direct_dft<T: Real>(x: &DenseSignal<T>) -> Result<Spectrum<T>> {
    let n = x.len();
    guard(n)?;
    let half = (n / 2) as i64;
    let nn = n as i64;
    let step = T::TAU() / T::from_count(n);
    let bins = (0..nn)
        .map(|k| {
            let s = k - half;
            let acc = x
                .samples()
                .iter()
                .enumerate()
                .fold(Complex::default(), |acc, (m, &v)| {
                    let r = (s * m as i64).rem_euclid(nn);
                    acc + v * cis(-step * T::lit(r as f64))
                });
            acc * x.grid_step()
        })
        .collect();
    let freq_step = T::one() / (T::from_count(n) * x.grid_step());
    Ok(Spectrum::from_parts(
        bins,
        freq_step,
        -T::lit(half as f64) * freq_step,
        x.t0(),
    ))
}

/// Trapezoid rule for `∫|x(t)|² dt` over the grid span.
pub fn trapezoid_energy<T: Real>(x: &DenseSignal<T>) -> T {
    let s = x.samples();
    let inner: T = s.iter().map(|&z| abs2(z)).sum();
    let ends = (abs2(s[0]) + abs2(s[s.len() - 1])) / T::lit(2.0);
    x.grid_step() * (inner - ends)
}

/// Periodized sinc kernel: `Σ_m sinc(v - mN)` summed symmetrically over all
/// images, i.e. `sin(πv)/(N·tan(πv/N))` for even `N` and
/// `sin(πv)/(N·sin(πv/N))` for odd `N`.
fn periodic_sinc<T: Real>(v: T, n: usize) -> T {
    let nn = T::from_count(n);
    // The kernel is N-periodic; reduce to [-N/2, N/2).
    let mut w = v - (v / nn).round() * nn;
    if w >= nn / T::lit(2.0) {
        w = w - nn;
    }
    let r = w.round();
    let frac = w - r;
    if r == T::zero() && frac.abs() < T::lit(1e-14) {
        return T::one();
    }
    let sign = if r.to_i64().unwrap_or(0) % 2 == 0 {
        T::one()
    } else {
        -T::one()
    };
    let num = sign * (T::PI() * frac).sin();
    let arg = T::PI() * w / nn;
    let den = if n % 2 == 0 { arg.tan() } else { arg.sin() };
    num / (nn * den)
}

/// Shannon interpolation of the periodic extension of `x` at time `t`:
/// `Σ_n x[n]·Σ_m sinc((t - t0)/Δ - n - mN)`.
///
/// The series is truncated to the `N` samples of one period; the sum over
/// the periodic images `m` is carried out exactly through the closed form of
/// the periodized sinc, so no further truncation error is introduced. For an
/// even `N` this corresponds to splitting the Nyquist bin evenly.
pub fn shannon_interpolate<T: Real>(x: &DenseSignal<T>, t: T) -> Result<Complex<T>> {
    let start = x.t0();
    let end = x.end_time();
    if !(t >= start && t <= end) {
        return Err(Error::TimeOutOfRange {
            time: t.to_f64_lossy(),
            start: start.to_f64_lossy(),
            end: end.to_f64_lossy(),
        });
    }
    let u = (t - start) / x.grid_step();
    let n = x.len();
    Ok(x.samples()
        .iter()
        .enumerate()
        .fold(Complex::default(), |acc, (k, &v)| {
            acc + v * periodic_sinc(u - T::from_count(k), n)
        }))
}

/// `|E_time - E_freq| / E_time`. Uses [`direct_dft`] up to [`SIZE_GUARD`]
/// samples and the FFT beyond.
pub fn plancherel_check<T: Real>(x: &DenseSignal<T>) -> Result<T> {
    let e_time = x.energy();
    if e_time <= T::zero() {
        return Err(Error::ZeroEnergyInput);
    }
    let spectrum = if x.len() <= SIZE_GUARD {
        direct_dft(x)?
    } else {
        dft(x)
    };
    Ok((e_time - spectrum.energy()).abs() / e_time)
}
