use std::f64::consts::PI;

use modsep::synth::{gen_am_fm, gen_corpus, gen_multicomponent, AmFmParams};
use modsep::Tag;
use proptest::prelude::*;

const FS: f64 = 22050.0;

fn params() -> impl Strategy<Value = AmFmParams> {
    (0.1f64..2.0, 300.0f64..5000.0, 0.0f64..200.0, 0.5f64..20.0, 0.0f64..0.9, 0.5f64..10.0, 0.0f64..std::f64::consts::TAU).prop_map(
        |(amplitude, carrier_hz, fm_dev_hz, fm_rate_hz, am_depth, am_rate_hz, phase)| AmFmParams {
            amplitude,
            carrier_hz,
            fm_dev_hz,
            fm_rate_hz,
            am_depth,
            am_rate_hz,
            phase,
        },
    )
}

/// Phase written out independently of the generator.
fn phase(p: &AmFmParams, t: f64) -> f64 {
    2.0 * PI * p.carrier_hz * t + p.fm_dev_hz / p.fm_rate_hz * (2.0 * PI * p.fm_rate_hz * t).sin() + p.phase
}

proptest! {
    #[test]
    fn truth_frequency_is_phase_derivative(p in params()) {
        let (_, truth) = gen_am_fm(&p, 0.05, FS).unwrap();
        let h = 1e-6;
        for n in (0..truth.len()).step_by(37) {
            let t = n as f64 / FS;
            let fd = (phase(&p, t + h) - phase(&p, t - h)) / (2.0 * h) / (2.0 * PI);
            prop_assert!((fd - truth.inst_freq_hz()[n]).abs() < 0.01);
        }
    }

    #[test]
    fn output_bounded_by_peak_envelope(p in params()) {
        let (x, truth) = gen_am_fm(&p, 0.05, FS).unwrap();
        let bound = p.amplitude * (1.0 + p.am_depth) + 1e-12;
        for (v, a) in x.samples().iter().zip(truth.inst_amp()) {
            prop_assert!(v.abs() <= a + 1e-12);
            prop_assert!(v.abs() <= bound);
        }
    }

    #[test]
    fn multicomponent_is_sum_of_parts(ps in prop::collection::vec(params(), 1..5)) {
        let sum = gen_multicomponent(&ps, 0.02, FS).unwrap();
        let mut expect = vec![0.0; sum.len()];
        for p in &ps {
            let (x, _) = gen_am_fm(p, 0.02, FS).unwrap();
            for (e, v) in expect.iter_mut().zip(x.samples()) {
                *e += v;
            }
        }
        for (a, b) in sum.samples().iter().zip(&expect) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn harmonic_stack_autocorrelation_peaks_at_period() {
    let f0 = 245.0;
    let comps: Vec<AmFmParams> = (1..=4)
        .map(|k| AmFmParams::tone(1.0 / k as f64, k as f64 * f0, 0.3 * k as f64))
        .collect();
    let x = gen_multicomponent(&comps, 0.5, FS).unwrap();
    let s = x.samples();
    let r = |lag: usize| (0..s.len() - lag).map(|i| s[i] * s[i + lag]).sum::<f64>() / (s.len() - lag) as f64;
    // Search lags covering 150-350 Hz.
    let best = (63..=147).max_by(|&a, &b| r(a).total_cmp(&r(b))).unwrap();
    assert!((best as f64 - FS / f0).abs() <= 1.0, "lag {best}");
}

#[test]
fn corpus_layout_and_determinism() {
    let a = gen_corpus(4, 3, 0.25, FS, 9).unwrap();
    let b = gen_corpus(4, 3, 0.25, FS, 9).unwrap();
    let c = gen_corpus(4, 3, 0.25, FS, 10).unwrap();
    assert_eq!(a.len(), 7);
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        assert_eq!(x.tag, if i < 4 { Tag::Voice } else { Tag::Music });
        assert_eq!(x.signal.len(), 5513);
        assert_eq!(x.signal.samples(), y.signal.samples());
        assert_eq!(x.source_id, y.source_id);
    }
    assert!(a.iter().zip(&c).all(|(x, y)| x.signal.samples() != y.signal.samples()));
    // Components sum to 0.5 in amplitude; 30 dB noise cannot push far past it.
    for s in &a {
        assert!(s.signal.samples().iter().all(|v| v.abs() < 0.7));
    }
}

#[test]
fn corpus_prefix_is_stable() {
    // Segment i depends only on (seed, i), not on how many follow it.
    let small = gen_corpus(2, 0, 0.1, FS, 5).unwrap();
    let large = gen_corpus(5, 3, 0.1, FS, 5).unwrap();
    for (x, y) in small.iter().zip(&large) {
        assert_eq!(x.signal.samples(), y.signal.samples());
    }
}

#[test]
fn corpus_rejects_low_rate() {
    assert!(gen_corpus(1, 1, 0.1, 8000.0, 0).is_err());
}
