//! The battery of checks behind `wbsync verify`.
//!
//! Each check returns one or more [`CheckRow`]s. Inputs are drawn from a
//! seeded generator, so a given seed always yields the same table.

use std::fmt::Write as _;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    approximation1_trace, approximation2_trace, approximation3_trace, direct_convolve, direct_dft,
    plancherel_check, proof_chain, shannon_interpolate, ConvergenceTrace,
};
use crate::chanmodel::{generate_one, ClusterModelParams};
use crate::error::Result;
use crate::sigkit::{
    convolve, dft, ideal_lowpass, lowpass_padding, lowpass_signal, sample_at, DenseSignal,
    EffectiveResponse, ImpulseResponse,
};

/// Instances per randomized equivalence check.
pub const INSTANCES: usize = 100;
/// Evaluation instants per signal in the interpolation check.
pub const TIMES_PER_INSTANCE: usize = 1000;

pub const DFT_TOL: f64 = 1e-10;
pub const CONVOLVE_TOL: f64 = 1e-9;
pub const SAMPLE_AT_TOL: f64 = 1e-7;
pub const PLANCHEREL_TOL: f64 = 1e-6;
pub const IDEMPOTENCE_TOL: f64 = 1e-12;
/// Allowed rise between successive trace rungs.
pub const TRACE_SLACK: f64 = 1e-9;
pub const MIN_RIEMANN_ORDER: f64 = 1.0;
/// Band for the per-rung error ratio of the Riemann trace.
pub const RIEMANN_RATIO: (f64, f64) = (1.5, 4.0);
pub const SMOOTH_INPUTS: usize = 5;
pub const COMBINATION_SLACK: f64 = 1e-8;
pub const COMBINATION_CIRS: usize = 10;
pub const COMBINATION_BANDWIDTH: f64 = 256e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub check: String,
    pub metric: String,
    pub value: f64,
    pub limit: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl CheckRow {
    pub fn at_most(check: &str, metric: &str, value: f64, limit: f64) -> Self {
        CheckRow {
            check: check.into(),
            metric: metric.into(),
            value,
            limit,
            bound: Bound::AtMost,
            pass: value <= limit,
        }
    }

    pub fn at_least(check: &str, metric: &str, value: f64, limit: f64) -> Self {
        CheckRow {
            check: check.into(),
            metric: metric.into(),
            value,
            limit,
            bound: Bound::AtLeast,
            pass: value >= limit,
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_signal(r: &mut ChaCha8Rng, lens: std::ops::RangeInclusive<usize>) -> DenseSignal<f64> {
    let len = r.random_range(lens);
    let dt = r.random_range(0.25..4.0);
    let t0 = r.random_range(-50.0..50.0) * dt;
    let samples = (0..len)
        .map(|_| Complex::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    DenseSignal::new(samples, dt, t0).expect("finite samples")
}

fn max_abs(z: &[Complex<f64>]) -> f64 {
    z.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn max_rel_diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
    let scale = max_abs(b).max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Worst relative deviation of [`dft`] from [`direct_dft`].
pub fn dft_agreement(seed: u64, instances: usize) -> Result<f64> {
    let mut r = rng(seed, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let x = random_signal(&mut r, 1..=512);
        let fast = dft(&x);
        let slow = direct_dft(&x)?;
        worst = worst.max(max_rel_diff(fast.bins(), slow.bins()));
    }
    Ok(worst)
}

/// Worst relative deviation of [`convolve`] from [`direct_convolve`].
pub fn convolve_agreement(seed: u64, instances: usize) -> Result<f64> {
    let mut r = rng(seed, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let h = random_signal(&mut r, 1..=256);
        let s = DenseSignal::new(
            random_signal(&mut r, 1..=256).into_samples(),
            h.grid_step(),
            r.random_range(-20.0..20.0) * h.grid_step(),
        )?;
        let fast = convolve(&h, &s)?;
        let slow = direct_convolve(&h, &s)?;
        worst = worst.max(max_rel_diff(fast.samples(), slow.samples()));
    }
    Ok(worst)
}

/// Worst relative deviation of [`sample_at`] from [`shannon_interpolate`],
/// with instants drawn uniformly over each signal's span.
pub fn sample_at_agreement(seed: u64, instances: usize, times: usize) -> Result<f64> {
    let mut r = rng(seed, 3);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let x = random_signal(&mut r, 2..=128);
        let (a, b) = (x.t0(), x.end_time());
        let ts: Vec<f64> = (0..times).map(|_| r.random_range(a..=b)).collect();
        let fast = sample_at(&x, &ts)?;
        let slow = ts
            .iter()
            .map(|&t| shannon_interpolate(&x, t))
            .collect::<Result<Vec<_>>>()?;
        worst = worst.max(max_rel_diff(&fast, &slow));
    }
    Ok(worst)
}

/// Worst relative deviation between one and two passes of
/// [`lowpass_signal`] at random bandwidths.
pub fn lowpass_idempotence(seed: u64, instances: usize) -> Result<f64> {
    let mut r = rng(seed, 4);
    let mut worst: f64 = 0.0;
    for _ in 0..instances {
        let x = random_signal(&mut r, 8..=512);
        let w = r.random_range(0.05..0.5) / x.grid_step();
        let once = lowpass_signal(&x, w)?;
        let twice = lowpass_signal(&once, w)?;
        if once.is_zero() {
            continue;
        }
        worst = worst.max(max_rel_diff(twice.samples(), once.samples()));
    }
    Ok(worst)
}

/// Rectangle of amplitude `a` over `[0, tau)`, zero-padded on both sides.
pub fn rectangle(a: f64, tau: f64, dt: f64) -> DenseSignal<f64> {
    let n = (tau / dt).round() as usize;
    let samples = (0..3 * n)
        .map(|k| {
            if (n..2 * n).contains(&k) {
                Complex::new(a, 0.0)
            } else {
                Complex::default()
            }
        })
        .collect();
    DenseSignal::new(samples, dt, -tau).expect("finite samples")
}

/// `sinc(B·t)` sampled over `±span/2`.
pub fn sinc_pulse(b: f64, span: f64, dt: f64) -> DenseSignal<f64> {
    let n = (span / dt).round() as usize;
    DenseSignal::from_fn(n, dt, -span / 2.0, |t| {
        let x = std::f64::consts::PI * b * t;
        Complex::new(if x == 0.0 { 1.0 } else { x.sin() / x }, 0.0)
    })
    .expect("finite samples")
}

/// Grid used by the channel-based checks: `Q = 16` at 1024 MHz.
pub const CHANNEL_GRID: f64 = 1.0 / (16.0 * 1024e6);

/// Generated channel realization `index` with the default model.
pub fn channel(seed: u64, index: usize, grid_step: f64) -> Result<ImpulseResponse<f64>> {
    let params = ClusterModelParams {
        rng_seed: seed,
        ..Default::default()
    };
    Ok(generate_one::<f64>(&params, index, grid_step)?.response)
}

/// A smooth response: generated channel `index` (`Ds = 256 ns`,
/// `Δ = 1/16 ns`) passed through a 64 MHz lowpass.
pub fn smooth_response(seed: u64, index: usize) -> Result<EffectiveResponse<f64>> {
    let params = ClusterModelParams {
        rng_seed: seed,
        delay_spread: 256e-9,
        ..Default::default()
    };
    let h = generate_one::<f64>(&params, index, 0.0625e-9)?.response;
    ideal_lowpass(&h, 64e6)
}

/// The W-doubling ladder 4 MHz … 1024 MHz.
pub fn doubling_ladder() -> Vec<f64> {
    (0..9).map(|j| 4e6 * f64::powi(2.0, j)).collect()
}

/// Minimum that propagates NaN.
fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

fn max_rise(trace: &ConvergenceTrace<f64>) -> f64 {
    trace
        .discrepancies
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max)
}

/// Lowpass deficit of a generated channel over the doubling ladder.
pub fn approximation1_check(seed: u64) -> Result<ConvergenceTrace<f64>> {
    let h = channel(seed, 0, CHANNEL_GRID)?;
    let (before, after) = lowpass_padding(&h, 4e6);
    approximation1_trace(&h.signal().padded(before, after), &doubling_ladder())
}

/// Translation gap of a channel at 256 MHz along `δ = T/2 … T/64`.
pub fn approximation2_check(seed: u64) -> Result<ConvergenceTrace<f64>> {
    let h = channel(seed, 1, CHANNEL_GRID)?;
    let response = ideal_lowpass(&h, COMBINATION_BANDWIDTH)?;
    let t = response.sample_time();
    let offsets: Vec<f64> = (1..=6).map(|j| t / f64::powi(2.0, j)).collect();
    approximation2_trace(&response, &offsets)
}

/// Riemann gaps of the first [`SMOOTH_INPUTS`] smooth responses along
/// `T' = 2, 1, 0.5, 0.25 ns` at a fixed off-grid offset.
pub fn approximation3_check(seed: u64) -> Result<Vec<ConvergenceTrace<f64>>> {
    (0..SMOOTH_INPUTS)
        .map(|i| {
            approximation3_trace(
                &smooth_response(seed, i)?,
                0.37e-9,
                &[2e-9, 1e-9, 0.5e-9, 0.25e-9],
            )
        })
        .collect()
}

/// Largest `gap - bound` of the three-step chain over random channels and
/// offsets at 256 MHz.
pub fn combination_excess(seed: u64, cirs: usize) -> Result<f64> {
    let mut r = rng(seed, 5);
    let t = 1.0 / COMBINATION_BANDWIDTH;
    let mut worst = f64::NEG_INFINITY;
    for i in 0..cirs {
        let h = channel(seed, 100 + i, CHANNEL_GRID)?;
        let delta = r.random_range(0.0..t);
        let chain = proof_chain(&h, COMBINATION_BANDWIDTH, delta)?;
        worst = worst.max(chain.gap() - chain.bound());
    }
    Ok(worst)
}

/// Runs every check.
pub fn run_all(seed: u64) -> Result<Vec<CheckRow>> {
    let mut rows = vec![
        CheckRow::at_most(
            "dft_vs_direct",
            "max_rel_error",
            dft_agreement(seed, INSTANCES)?,
            DFT_TOL,
        ),
        CheckRow::at_most(
            "convolve_vs_direct",
            "max_rel_error",
            convolve_agreement(seed, INSTANCES)?,
            CONVOLVE_TOL,
        ),
        CheckRow::at_most(
            "sample_at_vs_shannon",
            "max_rel_error",
            sample_at_agreement(seed, INSTANCES, TIMES_PER_INSTANCE)?,
            SAMPLE_AT_TOL,
        ),
        CheckRow::at_most(
            "lowpass_idempotence",
            "max_rel_error",
            lowpass_idempotence(seed, INSTANCES)?,
            IDEMPOTENCE_TOL,
        ),
    ];

    let rect = rectangle(1.5, 40.0, 0.5);
    let analytic = 1.5f64 * 1.5 * 40.0;
    rows.push(CheckRow::at_most(
        "plancherel_rectangle",
        "rel_discrepancy",
        plancherel_check(&rect)?,
        PLANCHEREL_TOL,
    ));
    rows.push(CheckRow::at_most(
        "plancherel_rectangle",
        "analytic_rel_error",
        (rect.energy() - analytic).abs() / analytic,
        PLANCHEREL_TOL,
    ));
    rows.push(CheckRow::at_most(
        "plancherel_cir",
        "rel_discrepancy",
        plancherel_check(channel(seed, 0, CHANNEL_GRID)?.signal())?,
        PLANCHEREL_TOL,
    ));
    rows.push(CheckRow::at_most(
        "plancherel_sinc",
        "rel_discrepancy",
        plancherel_check(&sinc_pulse(0.25, 400.0, 0.5))?,
        PLANCHEREL_TOL,
    ));

    let a1 = approximation1_check(seed)?;
    rows.push(CheckRow::at_most(
        "approximation1",
        "max_rise",
        max_rise(&a1),
        TRACE_SLACK,
    ));
    let a2 = approximation2_check(seed)?;
    rows.push(CheckRow::at_most(
        "approximation2",
        "max_rise",
        max_rise(&a2),
        TRACE_SLACK,
    ));
    let a3 = approximation3_check(seed)?;
    let fold = |f: fn(&ConvergenceTrace<f64>) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
        a3.iter().map(f).fold(init, pick)
    };
    rows.push(CheckRow::at_most(
        "approximation3",
        "max_rise",
        fold(max_rise, 0.0, f64::max),
        TRACE_SLACK,
    ));
    rows.push(CheckRow::at_least(
        "approximation3",
        "min_ratio",
        fold(
            |t| t.ratios().into_iter().fold(f64::INFINITY, f64::min),
            f64::INFINITY,
            f64::min,
        ),
        RIEMANN_RATIO.0,
    ));
    rows.push(CheckRow::at_most(
        "approximation3",
        "max_ratio",
        fold(
            |t| t.ratios().into_iter().fold(0.0, f64::max),
            0.0,
            f64::max,
        ),
        RIEMANN_RATIO.1,
    ));
    rows.push(CheckRow::at_least(
        "approximation3",
        "min_fitted_order",
        fold(
            |t| t.fitted_order.unwrap_or(f64::NAN),
            f64::INFINITY,
            nan_min,
        ),
        MIN_RIEMANN_ORDER,
    ));
    rows.push(CheckRow::at_most(
        "combination_bound",
        "max_excess",
        combination_excess(seed, COMBINATION_CIRS)?,
        COMBINATION_SLACK,
    ));
    Ok(rows)
}

/// `check,metric,value,limit,pass`
pub fn to_csv(rows: &[CheckRow]) -> String {
    let mut out = String::from("check,metric,value,limit,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:e},{:e},{}",
            r.check, r.metric, r.value, r.limit, r.pass
        );
    }
    out
}

/// Fixed-width pass/fail table.
pub fn format_table(rows: &[CheckRow]) -> String {
    let mut out = format!(
        "{:<22} {:<20} {:>12}    {:>10}  {}\n",
        "check", "metric", "value", "limit", "result"
    );
    for r in rows {
        let op = match r.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let _ = writeln!(
            out,
            "{:<22} {:<20} {:>12.3e} {} {:>10.1e}  {}",
            r.check,
            r.metric,
            r.value,
            op,
            r.limit,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    out
}
