//! Brute-force references and convergence traces.
//!
//! The direct routines here share no code path with the FFT-based
//! implementations in [`crate::sigkit`]; they exist to check them. The
//! traces measure, on concrete inputs, the three limits that together make
//! the captured energy independent of the sampling offset as the bandwidth
//! grows: lowpass energy deficit, translation of the windowed energy, and
//! the Riemann sum of the tap energies.

mod direct;
pub mod suite;
mod traces;

pub use direct::{
    direct_convolve, direct_dft, plancherel_check, shannon_interpolate, trapezoid_energy,
    SIZE_GUARD,
};
pub use traces::{
    approximation1_trace, approximation2_trace, approximation3_trace, fit_decay_order, proof_chain,
    window_integral, ChainBreakdown, ConvergenceTrace,
};
