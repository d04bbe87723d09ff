//! Energy capture of a bandlimited receiver over a multipath channel.
//!
//! A physical channel `h` supported on `[0, Ds]` is lowpass filtered to a
//! bandwidth `W = 1/T`, sampled at instants `kT + lT - δ` and truncated to
//! `L = floor(Ds·W)` taps. The captured energy (channel gain) depends on the
//! sub-sample offset `δ` at narrow bandwidths and becomes offset-independent
//! as `W` grows. This crate measures that effect:
//!
//! * [`sigkit`]: dense-grid signals, DFT, brick-wall lowpass, bandlimited
//!   interpolation, convolution, energy.
//! * [`chanmodel`]: cluster/ray multipath generator and the CIR text format.
//! * [`candidates`]: channel candidates, gains, energy-based acquisition and
//!   sampling-phase penalties.
//! * [`oracle`]: brute-force reference implementations and convergence traces.
//! * [`experiment`]: the seeded Monte-Carlo sweep, its reports and the CLI.
//!
//! All numeric types are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which is what the tools use.

pub mod candidates;
pub mod chanmodel;
pub mod error;
pub mod experiment;
pub mod oracle;
pub mod scalar;
pub mod sigkit;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type DenseSignal64 = sigkit::DenseSignal<f64>;
pub type Spectrum64 = sigkit::Spectrum<f64>;
pub type ImpulseResponse64 = sigkit::ImpulseResponse<f64>;
pub type EffectiveResponse64 = sigkit::EffectiveResponse<f64>;
pub type ChannelCandidate64 = candidates::ChannelCandidate<f64>;
pub type PenaltyRecord64 = candidates::PenaltyRecord<f64>;
pub type CirRecord64 = chanmodel::CirRecord<f64>;
pub type PenaltyReport64 = experiment::PenaltyReport<f64>;

pub type DenseSignal32 = sigkit::DenseSignal<f32>;
pub type ImpulseResponse32 = sigkit::ImpulseResponse<f32>;
pub type EffectiveResponse32 = sigkit::EffectiveResponse<f32>;
