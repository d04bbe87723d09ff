use std::path::PathBuf;

use crate::chanmodel::ClusterModelParams;
use crate::error::{Error, Result};

/// 4, 8, ..., 1024 MHz.
pub const TABLE_BANDWIDTHS: [f64; 9] = [4e6, 8e6, 16e6, 32e6, 64e6, 128e6, 256e6, 512e6, 1024e6];

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSource {
    /// Draw realizations from the cluster model; its `rng_seed` is replaced
    /// by the sweep's master seed.
    Generator(ClusterModelParams),
    /// Read realizations from a `#cirv1` file; the file's `ds` wins.
    CirFile(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Ascending, in Hz.
    pub bandwidths: Vec<f64>,
    pub realizations: usize,
    pub master_seed: u64,
    /// Sampling phases `M` per sample period.
    pub phases: usize,
    /// Dense-grid oversampling `Q`: `Δ = 1/(Q·max W)`.
    pub oversample: usize,
    /// Support length `Ds` in seconds.
    pub delay_spread: f64,
    pub source: ChannelSource,
    pub output_path: Option<PathBuf>,
    /// Draw one uniform per realization and reuse it (scaled by `T/M`) at
    /// every bandwidth instead of a fresh draw per `(i, W)`.
    pub fixed_eps: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            bandwidths: TABLE_BANDWIDTHS.to_vec(),
            realizations: 100,
            master_seed: 7,
            phases: 4,
            oversample: 16,
            delay_spread: 279e-9,
            source: ChannelSource::Generator(ClusterModelParams::default()),
            output_path: None,
            fixed_eps: false,
            threads: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.bandwidths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return bad("bandwidths must be positive".into());
        }
        if self.bandwidths.windows(2).any(|w| w[1] <= w[0]) {
            return bad("bandwidths must be strictly ascending".into());
        }
        if self.realizations == 0 {
            return bad("need at least one realization".into());
        }
        if self.phases < 2 {
            return bad(format!(
                "phase count must be at least 2, got {}",
                self.phases
            ));
        }
        if self.oversample < 2 {
            return bad(format!(
                "oversampling must be at least 2, got {}",
                self.oversample
            ));
        }
        if !(self.delay_spread > 0.0 && self.delay_spread.is_finite()) {
            return bad("delay spread must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("thread count must be at least 1".into());
        }
        if let Some(w) = self.bandwidths.last() {
            if self.grid_step() >= self.delay_spread {
                return bad(format!(
                    "max bandwidth {w:e} Hz is too low for Ds = {:e} s",
                    self.delay_spread
                ));
            }
        }
        Ok(())
    }

    /// `Δ = 1/(Q·max W)`; infinite for an empty ladder.
    pub fn grid_step(&self) -> f64 {
        match self.bandwidths.last() {
            Some(w) => 1.0 / (self.oversample as f64 * w),
            None => f64::INFINITY,
        }
    }
}

/// Parses `a..bxk` (geometric: `a, a·k, a·k², ...` up to `b`) or a
/// comma-separated list.
pub fn parse_bandwidths(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("invalid number `{s}` in bandwidths")))
    };
    if let Some((start, rest)) = text.split_once("..") {
        let (end, factor) = rest
            .split_once('x')
            .ok_or_else(|| Error::Config(format!("expected `a..bxk`, got `{text}`")))?;
        let (a, b, k) = (num(start)?, num(end)?, num(factor)?);
        if !(a > 0.0 && b >= a && k > 1.0) {
            return Err(Error::Config(format!(
                "need 0 < a <= b and k > 1 in `{text}`"
            )));
        }
        let mut out = Vec::new();
        for j in 0.. {
            let w = a * k.powi(j);
            if w > b * (1.0 + 1e-9) {
                break;
            }
            out.push(w);
        }
        return Ok(out);
    }
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(num).collect()
}
