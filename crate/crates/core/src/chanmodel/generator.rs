use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rayon::prelude::*;

use super::{CirRecord, RecordSource};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sigkit::ImpulseResponse;

/// Cluster/ray arrival model.
///
/// Clusters arrive as a Poisson process of rate `cluster_rate` starting with
/// one at `t = 0`; inside each cluster rays arrive at rate `ray_rate`,
/// again starting with one at the cluster start. A ray at cluster time `Tc`
/// and intra-cluster delay `τ` gets a circular complex Gaussian amplitude of
/// mean power `exp(-Tc/cluster_decay)·exp(-τ/ray_decay)`. Anything past
/// `delay_spread` is discarded.
///
/// Rates are in 1/s, decays and the delay spread in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterModelParams {
    pub cluster_rate: f64,
    pub ray_rate: f64,
    pub cluster_decay: f64,
    pub ray_decay: f64,
    pub delay_spread: f64,
    pub rng_seed: u64,
}

impl Default for ClusterModelParams {
    /// Residential line-of-sight magnitudes, truncated at 279 ns.
    fn default() -> Self {
        ClusterModelParams {
            cluster_rate: 0.047e9,
            ray_rate: 1.54e9,
            cluster_decay: 22.6e-9,
            ray_decay: 12.5e-9,
            delay_spread: 279e-9,
            rng_seed: 0,
        }
    }
}

impl ClusterModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("cluster_rate", self.cluster_rate),
            ("ray_rate", self.ray_rate),
            ("cluster_decay", self.cluster_decay),
            ("ray_decay", self.ray_decay),
            ("delay_spread", self.delay_spread),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::DegenerateParams(format!(
                    "{name} must be positive, got {v:e}"
                )));
            }
        }
        // Poisson arrivals expected inside the window, not counting the
        // deterministic first cluster and first ray.
        let expected = (self.cluster_rate + self.ray_rate) * self.delay_spread;
        if expected < 1.0 {
            return Err(Error::DegenerateParams(format!(
                "expected {expected:.3} arrivals in [0, Ds]; need at least 1"
            )));
        }
        Ok(())
    }
}

/// Realization `index` of the model on a grid of step `grid_step`.
///
/// Each ray of amplitude `a` at delay `t` adds `a/Δ` to the nearest grid
/// sample, so the dense signal integrates to the ray amplitude. The result
/// is unit-energy normalized. The random stream depends only on
/// `(params.rng_seed, index)`.
pub fn generate_one<T: Real>(
    params: &ClusterModelParams,
    index: usize,
    grid_step: f64,
) -> Result<CirRecord<T>> {
    params.validate()?;
    if !(grid_step > 0.0 && grid_step < params.delay_spread) {
        return Err(Error::Config(format!(
            "grid step {grid_step:e} s must be positive and below the delay spread"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    rng.set_stream(index as u64);
    let cluster_gap = Exp::new(params.cluster_rate).expect("validated rate");
    let ray_gap = Exp::new(params.ray_rate).expect("validated rate");

    let ds = params.delay_spread;
    let len = crate::sigkit::support_len(grid_step, ds);
    let mut samples = vec![Complex::<f64>::default(); len];
    let mut cluster_t = 0.0;
    while cluster_t <= ds {
        let cluster_power = (-cluster_t / params.cluster_decay).exp();
        let mut tau = 0.0;
        while cluster_t + tau <= ds {
            let power = cluster_power * (-tau / params.ray_decay).exp();
            let sigma = (power / 2.0).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let n = (((cluster_t + tau) / grid_step).round() as usize).min(len - 1);
            samples[n] += Complex::new(re, im) * (sigma / grid_step);
            tau += ray_gap.sample(&mut rng);
        }
        cluster_t += cluster_gap.sample(&mut rng);
    }

    let samples = samples
        .into_iter()
        .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
        .collect();
    let response =
        ImpulseResponse::truncated(samples, T::lit(grid_step), T::lit(ds))?.normalized()?;
    Ok(CirRecord {
        id: index,
        response,
        source: RecordSource::Generated(*params),
    })
}

/// `count` independent realizations `0..count`, generated in parallel.
/// The output does not depend on thread count or scheduling.
pub fn generate<T: Real>(
    params: &ClusterModelParams,
    count: usize,
    grid_step: f64,
) -> Result<Vec<CirRecord<T>>> {
    if count == 0 {
        return Err(Error::Config("realization count must be at least 1".into()));
    }
    params.validate()?;
    (0..count)
        .into_par_iter()
        .map(|i| generate_one(params, i, grid_step))
        .collect()
}
