use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ChannelSource, SweepConfig};
use crate::candidates::{tap_count, CandidateSampler, PenaltyRecord};
use crate::chanmodel::{generate, ingest, CirRecord, ClusterModelParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sigkit::ideal_lowpass;

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult<T> {
    /// Drawn offset `ε` in seconds.
    pub eps: T,
    pub record: PenaltyRecord<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthRow<T> {
    pub bandwidth: T,
    pub taps: usize,
    /// `P_T = max_i P^(i)`
    pub worst: T,
    /// `P̄_T = mean_i P^(i)`
    pub mean: T,
    pub realizations: Vec<RealizationResult<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyReport<T> {
    pub phases: usize,
    pub delay_spread: T,
    pub rows: Vec<BandwidthRow<T>>,
}

impl<T: Real> PenaltyReport<T> {
    pub fn row(&self, bandwidth: T) -> Option<&BandwidthRow<T>> {
        self.rows
            .iter()
            .find(|r| (r.bandwidth - bandwidth).abs() <= T::lit(1e-9) * bandwidth)
    }
}

const EPS_TAG: u64 = 0x6570_735f_7374_7265; // "eps_stre"

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` from the substream `(seed, W, index)`; with
/// `bandwidth = None` the stream is shared by all bandwidths.
pub fn draw_unit(seed: u64, bandwidth: Option<f64>, index: usize) -> f64 {
    let key = splitmix(seed ^ EPS_TAG) ^ splitmix(bandwidth.map_or(0, f64::to_bits));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index as u64);
    rng.random::<f64>()
}

/// Loads or generates the channel set and runs [`run_sweep_on`].
pub fn run_sweep<T: Real>(config: &SweepConfig) -> Result<PenaltyReport<T>> {
    config.validate()?;
    if config.bandwidths.is_empty() {
        return Ok(PenaltyReport {
            phases: config.phases,
            delay_spread: T::lit(config.delay_spread),
            rows: Vec::new(),
        });
    }
    let records = match &config.source {
        ChannelSource::Generator(params) => {
            let params = ClusterModelParams {
                rng_seed: config.master_seed,
                delay_spread: config.delay_spread,
                ..*params
            };
            in_pool(config.threads, || {
                generate(&params, config.realizations, config.grid_step())
            })??
        }
        ChannelSource::CirFile(path) => ingest(path, config.grid_step())?,
    };
    run_sweep_on(config, &records)
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub(super) fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Sweeps `records` over the configured bandwidths. Cells `(i, W)` run in
/// parallel; each draws `ε` from its own substream, so the report does not
/// depend on the schedule.
pub fn run_sweep_on<T: Real>(
    config: &SweepConfig,
    records: &[CirRecord<T>],
) -> Result<PenaltyReport<T>> {
    config.validate()?;
    let ds = match records.first() {
        Some(r) => r.response.delay_spread(),
        None => return Err(Error::Config("no channel realizations".into())),
    };
    if records.iter().any(|r| r.response.delay_spread() != ds) {
        return Err(Error::Config(
            "realizations disagree on the delay spread".into(),
        ));
    }
    let phases = config.phases;
    let cells = |rec: &CirRecord<T>| -> Result<Vec<RealizationResult<T>>> {
        config
            .bandwidths
            .iter()
            .map(|&w| {
                let bw = T::lit(w);
                let response = ideal_lowpass(&rec.response, bw)?;
                let step = response.sample_time() / T::from_count(phases);
                let u = draw_unit(config.master_seed, (!config.fixed_eps).then_some(w), rec.id);
                let eps = (T::lit(u) * step).min(step * (T::one() - T::epsilon()));
                let record = CandidateSampler::new(&response).phase_penalty(rec.id, eps, phases)?;
                Ok(RealizationResult { eps, record })
            })
            .collect()
    };
    let per_record: Vec<Vec<RealizationResult<T>>> = in_pool(config.threads, || {
        records.par_iter().map(cells).collect::<Result<Vec<_>>>()
    })??;

    let count = T::from_count(records.len());
    let rows = config
        .bandwidths
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            let realizations: Vec<_> = per_record.iter().map(|cells| cells[j].clone()).collect();
            let worst = realizations
                .iter()
                .map(|r| r.record.max_penalty)
                .fold(T::zero(), T::max);
            let mean = realizations.iter().map(|r| r.record.max_penalty).sum::<T>() / count;
            BandwidthRow {
                bandwidth: T::lit(w),
                taps: tap_count(ds, T::lit(w)),
                worst,
                mean,
                realizations,
            }
        })
        .collect();
    Ok(PenaltyReport {
        phases,
        delay_spread: ds,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_streams_are_independent_and_stable() {
        let a = draw_unit(1, Some(4e6), 0);
        assert_eq!(a, draw_unit(1, Some(4e6), 0));
        assert_ne!(a, draw_unit(1, Some(8e6), 0));
        assert_ne!(a, draw_unit(1, Some(4e6), 1));
        assert_ne!(a, draw_unit(2, Some(4e6), 0));
        assert!((0.0..1.0).contains(&a));
        assert_eq!(draw_unit(1, None, 3), draw_unit(1, None, 3));
    }

    #[test]
    fn small_sweep_is_consistent() {
        let config = SweepConfig {
            bandwidths: vec![16e6, 64e6],
            realizations: 3,
            oversample: 8,
            ..Default::default()
        };
        let report = run_sweep::<f64>(&config).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.realizations.len(), 3);
            assert!(row.mean <= row.worst && row.worst <= 1.0 && row.mean >= 0.0);
            let step = 1.0 / row.bandwidth / 4.0;
            assert!(row
                .realizations
                .iter()
                .all(|r| r.eps >= 0.0 && r.eps < step));
            assert!(row.realizations.iter().all(|r| r.record.gains.len() == 4));
        }
        assert_eq!(report.rows[0].taps, 4);
        assert_eq!(report.rows[1].taps, 17);
    }

    #[test]
    fn fixed_eps_reuses_the_unit_draw() {
        let config = SweepConfig {
            bandwidths: vec![16e6, 32e6],
            realizations: 2,
            oversample: 4,
            fixed_eps: true,
            ..Default::default()
        };
        let report = run_sweep::<f64>(&config).unwrap();
        for i in 0..2 {
            let a = report.rows[0].realizations[i].eps * 16e6;
            let b = report.rows[1].realizations[i].eps * 32e6;
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_ladder_gives_empty_report() {
        let config = SweepConfig {
            bandwidths: vec![],
            ..Default::default()
        };
        assert!(run_sweep::<f64>(&config).unwrap().rows.is_empty());
    }
}
