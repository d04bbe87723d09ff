//! Bandlimited signal toolkit.
//!
//! Continuous-time signals are stood in for by complex samples on a dense,
//! uniform grid. Spectral operations treat the grid as one period of a
//! periodic signal, so callers pad with zeros (see [`ideal_lowpass`]) before
//! filtering or shifting anything that must not wrap around.

mod convolve;
mod fourier;
mod interp;
mod lowpass;
mod signal;

pub(crate) use convolve::check_grids;
pub use convolve::convolve;
pub use fourier::{dft, idft, Spectrum};
pub use interp::{sample_at, Interpolator};
pub use lowpass::{ideal_lowpass, in_passband, lowpass_padding, lowpass_signal};
pub(crate) use signal::support_len;
pub use signal::{energy, DenseSignal, EffectiveResponse, ImpulseResponse};

/// Relative tolerance used when deciding whether a time or ratio lands on
/// the grid.
pub(crate) const GRID_SNAP: f64 = 1e-9;
