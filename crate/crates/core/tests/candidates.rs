use proptest::prelude::*;
use wbsync::candidates::{acquire, extract_candidate, phase_penalty, tap_count, CandidateSampler};
use wbsync::chanmodel::{generate_one, ClusterModelParams};
use wbsync::sigkit::{ideal_lowpass, sample_at, EffectiveResponse, ImpulseResponse, Interpolator};
use wbsync::Complex;

const DS: f64 = 279e-9;
const DT: f64 = 1.0 / (16.0 * 1024e6);
const LADDER: [f64; 9] = [4e6, 8e6, 16e6, 32e6, 64e6, 128e6, 256e6, 512e6, 1024e6];

fn channel(seed: u64, index: usize) -> ImpulseResponse<f64> {
    let params = ClusterModelParams {
        rng_seed: seed,
        ..Default::default()
    };
    generate_one::<f64>(&params, index, DT).unwrap().response
}

/// Three Hann-windowed Gaussian bumps between 40 and 200 ns.
fn smooth_channel() -> ImpulseResponse<f64> {
    let n = (DS / DT) as usize + 1;
    let bumps = [
        (60e-9, 8e-9, Complex::new(1.0, 0.3)),
        (110e-9, 12e-9, Complex::new(-0.4, 0.6)),
        (170e-9, 6e-9, Complex::new(0.2, -0.5)),
    ];
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 * DT;
            let hann = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * t / DS).cos();
            bumps
                .iter()
                .map(|&(c, s, a)| a * (-((t - c) / s).powi(2) / 2.0).exp())
                .sum::<Complex<f64>>()
                * hann
        })
        .collect();
    ImpulseResponse::truncated(samples, DT, DS)
        .unwrap()
        .normalized()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gain_never_exceeds_filtered_or_physical_energy(
        index in 0usize..200,
        rung in 0usize..9,
        frac in 0.0f64..1.0,
        kf in -1.0f64..1.0,
    ) {
        let h = channel(11, index);
        let ht = ideal_lowpass(&h, LADDER[rung]).unwrap();
        let k = (kf * tap_count(DS, LADDER[rung]) as f64).round() as i64;
        let delta = frac * ht.sample_time();
        let c = extract_candidate(&ht, delta, k).unwrap();
        prop_assert!(c.gain <= ht.energy() + 1e-9);
        prop_assert!(ht.energy() <= h.energy() + 1e-9);
        prop_assert_eq!(c.tap_count(), tap_count(DS, LADDER[rung]));
    }

    #[test]
    fn coarse_offset_steps_shift_the_taps(index in 0usize..200, rung in 0usize..7, frac in 0.0f64..1.0, kf in -1.0f64..1.0) {
        let ht = ideal_lowpass(&channel(5, index), LADDER[rung]).unwrap();
        let l = tap_count(DS, LADDER[rung]) as i64;
        let k = ((kf * l as f64).round() as i64).min(l - 1);
        let t = ht.sample_time();
        let delta = frac * t;
        let a = extract_candidate(&ht, delta, k).unwrap();
        let b = extract_candidate(&ht, delta, k + 1).unwrap();
        let scale = a.taps.iter().chain(&b.taps).map(|z| z.norm()).fold(1e-300, f64::max);
        for l in 0..a.taps.len() - 1 {
            prop_assert!((b.taps[l] - a.taps[l + 1]).norm() <= 1e-9 * scale);
        }
        // Same instants written as offset δ - T with one more coarse step.
        let times: Vec<f64> = (0..b.taps.len()).map(|l| (k + 1) as f64 * t + l as f64 * t - delta).collect();
        let direct = sample_at(ht.signal(), &times).unwrap();
        for (x, y) in b.taps.iter().zip(&direct) {
            prop_assert!((x - y).norm() <= 1e-9 * scale);
        }
    }
}

#[test]
fn wideband_gain_converges_to_the_channel_energy() {
    let h = smooth_channel();
    let e = h.energy();
    let mut worst = Vec::new();
    for &w in &LADDER {
        let ht = ideal_lowpass(&h, w).unwrap();
        let sampler = CandidateSampler::new(&ht);
        let t = ht.sample_time();
        let gap = (0..16)
            .map(|j| {
                let delta = j as f64 * t / 16.0;
                let gain = sampler
                    .acquire(delta, sampler.default_window())
                    .unwrap()
                    .candidate
                    .gain;
                (e - gain) / e
            })
            .fold(f64::NEG_INFINITY, f64::max);
        worst.push(gap);
    }
    for pair in worst.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-9, "{worst:?}");
    }
    assert!(*worst.last().unwrap() < 0.02, "{worst:?}");
    assert!(worst[0] > 0.5);
}

#[test]
fn acquisition_undoes_whole_period_delays() {
    let w = 64e6;
    let t = 1.0 / w;
    let r = (t / DT).round() as usize;
    // Energy of this channel sits in the first ~150 ns, leaving room to delay.
    let mut h = channel(2, 7);
    let samples: Vec<_> = h
        .signal()
        .samples()
        .iter()
        .enumerate()
        .map(|(n, &z)| {
            if (n as f64) * DT < 100e-9 {
                z
            } else {
                Complex::default()
            }
        })
        .collect();
    h = ImpulseResponse::truncated(samples, DT, DS).unwrap();
    let shifted = h.delayed(3 * r).unwrap();

    let base = ideal_lowpass(&h, w).unwrap();
    let moved = ideal_lowpass(&shifted, w).unwrap();
    let delta = 0.3 * t;
    let a = acquire(&base, delta, -17..=17).unwrap();
    let b = acquire(&moved, delta, -17..=17).unwrap();

    // Exhaustive oracle over the window.
    let best = (-17..=17)
        .map(|k| (k, extract_candidate(&moved, delta, k).unwrap().gain))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    assert_eq!(b.best_k, best.0);
    assert_eq!(b.best_k, a.best_k + 3);
    assert!((b.candidate.gain - a.candidate.gain).abs() <= 1e-9 * a.candidate.gain);

    let eps = 0.1 * t / 4.0;
    let pa = phase_penalty(&h, w, eps, 4).unwrap();
    let pb = phase_penalty(&shifted, w, eps, 4).unwrap();
    assert!((pa.max_penalty - pb.max_penalty).abs() <= 1e-9);
    for (x, y) in pa.gains.iter().zip(&pb.gains) {
        assert!((x - y).abs() <= 1e-9 * x);
    }
}

#[test]
fn pre_shifted_response_is_found_three_periods_late() {
    let w = 32e6;
    let t = 1.0 / w;
    let r = (t / DT).round() as usize;
    let taps = tap_count(DS, w);
    // On-grid rays at every tap instant: only the k = 0 window holds them all.
    let mut samples = vec![Complex::default(); (DS / DT) as usize + 1];
    for l in 0..taps {
        samples[l * r] = Complex::new(1.0 / (l as f64 + 1.0), 0.3) / DT;
    }
    let aligned = ideal_lowpass(&ImpulseResponse::truncated(samples, DT, DS).unwrap(), w).unwrap();
    let moved = Interpolator::new(aligned.signal()).shifted(3.0 * t);
    let shifted = EffectiveResponse::from_bandlimited(moved, w, DS).unwrap();

    let a = acquire(&aligned, 0.0, -2..=2).unwrap();
    assert_eq!(a.best_k, 0);
    let b = acquire(&shifted, 0.0, -(taps as i64)..=taps as i64).unwrap();
    assert_eq!(b.best_k, 3);
    assert!((b.candidate.gain - a.candidate.gain).abs() <= 1e-9 * a.candidate.gain);
    let exhaustive = (-(taps as i64)..=taps as i64)
        .map(|k| extract_candidate(&shifted, 0.0, k).unwrap().gain)
        .fold(f64::NEG_INFINITY, f64::max);
    assert_eq!(b.candidate.gain, exhaustive);
}
