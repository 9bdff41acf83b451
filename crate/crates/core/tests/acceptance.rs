//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use modsep::classifier::{assign_folds, cross_validate, CrossValidation, FeaturePipeline, ReferenceModel};
use modsep::esa::{desa1, teo};
use modsep::gabor::{gabor_kernel, default_bands};
use modsep::histogram::{kl_divergence, FreqHistogram, HistogramConfig};
use modsep::synth::{gen_am_fm, gen_corpus, AmFmParams};
use modsep::{ClassificationResult, DesaOptions, FreqHistogram as Hist, LabeledSegment, Tag};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FS: f64 = 22050.0;
const CORPUS_SEED: u64 = 1;
const CV_SEED: u64 = 0;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_runtime(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    check(
        elapsed.as_secs_f64() < limit_s,
        format!("runtime {:.2} s exceeds {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn pipeline() -> FeaturePipeline {
    let fb = default_bands();
    FeaturePipeline::new(fb, HistogramConfig::for_sample_rate(FS), DesaOptions::default()).unwrap()
}

/// DTFT magnitude of a kernel whose center tap is at `half`.
fn dtft_mag(kernel: &[f64], half: usize, f: f64) -> f64 {
    let w = 2.0 * PI * f / FS;
    let (mut re, mut im) = (0.0, 0.0);
    for (i, &k) in kernel.iter().enumerate() {
        let m = i as f64 - half as f64;
        re += k * (w * m).cos();
        im -= k * (w * m).sin();
    }
    re.hypot(im)
}

fn ac1_teo_closed_form() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        for w in [0.1, 0.3, 0.5, 1.0, 1.5] {
            for theta in [0.0, 1.0] {
                let x: Vec<f64> = (0..2048).map(|n| a * (w * n as f64 + theta).cos()).collect();
                let expect = a * a * f64::sin(w).powi(2);
                for v in teo(&x).unwrap().values {
                    worst = worst.max(((v - expect) / expect).abs());
                }
            }
        }
    }
    check(worst < 1e-9, format!("max relative error {worst:.3e} >= 1e-9"))?;
    within_runtime(start.elapsed(), 1.0)?;
    Ok(format!("max relative error {worst:.2e}"))
}

fn ac2_desa_sinusoid_sweep() -> Outcome {
    let start = Instant::now();
    let (mut worst_f, mut worst_a) = (0.0f64, 0.0f64);
    for frac in [0.05, 0.1, 0.2, 0.3, 0.45] {
        let w = frac * PI;
        for a in [0.5, 1.0, 2.0] {
            let x: Vec<f64> = (0..4096).map(|n| a * (w * n as f64 + 0.3).cos()).collect();
            let t = desa1(&x, FS).unwrap();
            let (mut ef, mut ea, mut count) = (0.0, 0.0, 0usize);
            for i in 0..t.len() {
                if t.valid()[i] {
                    let w_hat = t.inst_freq_hz()[i] * 2.0 * PI / FS;
                    ef += (w_hat - w).abs() / w;
                    ea += (t.inst_amp()[i] - a).abs() / a;
                    count += 1;
                }
            }
            check(count > 0, format!("no valid samples at W={w}, A={a}"))?;
            worst_f = worst_f.max(ef / count as f64);
            worst_a = worst_a.max(ea / count as f64);
        }
    }
    check(worst_f < 1e-3, format!("mean relative frequency error {worst_f:.3e}"))?;
    check(worst_a < 5e-3, format!("mean relative amplitude error {worst_a:.3e}"))?;
    within_runtime(start.elapsed(), 5.0)?;
    Ok(format!("worst mean rel. error: freq {worst_f:.2e}, amp {worst_a:.2e}"))
}

fn ac3_am_fm_tracking() -> Outcome {
    let start = Instant::now();
    let params = AmFmParams {
        amplitude: 1.0,
        carrier_hz: 738.0,
        fm_dev_hz: 50.0,
        fm_rate_hz: 7.0,
        am_depth: 0.3,
        am_rate_hz: 3.0,
        phase: 0.0,
    };
    let (x, truth) = gen_am_fm(&params, 1.0, FS).unwrap();
    let t = desa1(x.samples(), FS).unwrap();
    let (mut sf, mut sa, mut n) = (0.0, 0.0, 0usize);
    for i in 0..t.len() {
        if t.valid()[i] {
            sf += (t.inst_freq_hz()[i] - truth.inst_freq_hz()[i]).powi(2);
            sa += (t.inst_amp()[i] - truth.inst_amp()[i]).powi(2);
            n += 1;
        }
    }
    check(n + 4 >= t.len(), format!("only {n} of {} samples valid", t.len()))?;
    let (rf, ra) = ((sf / n as f64).sqrt(), (sa / n as f64).sqrt());
    check(rf < 2.0, format!("frequency RMS error {rf:.4} Hz"))?;
    check(ra < 0.02, format!("amplitude RMS error {ra:.5}"))?;
    within_runtime(start.elapsed(), 2.0)?;
    Ok(format!("RMS error: freq {rf:.4} Hz, amp {ra:.2e} over {n} samples"))
}

fn ac4_gabor_gain() -> Outcome {
    let mut detail = Vec::new();
    for band in default_bands().bands {
        let k = gabor_kernel(band.center_hz, band.bandwidth_hz, FS, 4.0).unwrap();
        let at_center = dtft_mag(k.kernel(), k.half_len(), band.center_hz);
        let far = dtft_mag(k.kernel(), k.half_len(), band.center_hz + 5.0 * band.bandwidth_hz);
        check(
            (at_center - 1.0).abs() <= 1e-3,
            format!("{} Hz: gain at center {at_center}", band.center_hz),
        )?;
        check(far <= 0.01, format!("{} Hz: gain at +5 sigma {far}", band.center_hz))?;
        detail.push(format!("{}Hz {:.6}/{:.1e}", band.center_hz, at_center, far));
    }
    Ok(detail.join(", "))
}

fn random_histogram(rng: &mut ChaCha8Rng, config: HistogramConfig) -> FreqHistogram {
    let counts: Vec<u64> = (0..config.n_bins).map(|_| rng.random_range(0..1000)).collect();
    FreqHistogram::from_counts(&counts, config).unwrap()
}

fn ac5_kl_checks() -> Outcome {
    let two = HistogramConfig {
        n_bins: 2,
        f_min_hz: 0.0,
        f_max_hz: 1.0,
        smoothing_alpha: 1e-12,
    };
    let p1 = FreqHistogram::from_counts(&[1, 1], two).unwrap();
    let p2 = FreqHistogram::from_counts(&[1, 3], two).unwrap();
    let same = kl_divergence(&p1, &p1).unwrap();
    check(same == 0.0, format!("D(p, p) = {same}"))?;
    let d = kl_divergence(&p1, &p2).unwrap();
    check((d - 0.14384).abs() <= 1e-5, format!("2-bin case = {d}"))?;
    // Hand computation: 0.5 ln 2 + 0.5 ln(2/3).
    let hand = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    check((d - hand).abs() <= 1e-9, format!("2-bin case {d} vs {hand}"))?;

    let config = HistogramConfig {
        n_bins: 32,
        f_min_hz: 0.0,
        f_max_hz: FS / 2.0,
        smoothing_alpha: 1e-6,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut min_d = f64::INFINITY;
    let mut asymmetric = false;
    for _ in 0..1000 {
        let a = random_histogram(&mut rng, config);
        let b = random_histogram(&mut rng, config);
        let dab = kl_divergence(&a, &b).unwrap();
        let dba = kl_divergence(&b, &a).unwrap();
        min_d = min_d.min(dab);
        asymmetric |= dab != dba;
    }
    check(min_d >= -1e-12, format!("negative divergence {min_d}"))?;
    check(asymmetric, "no asymmetric pair found")?;
    Ok(format!("D(p,p)=0, 2-bin {d:.9}, min over 1000 pairs {min_d:.3e}"))
}

fn scale_invariance_run() -> Result<Vec<(f64, Vec<ClassificationResult>)>, String> {
    let p = pipeline();
    let reference = gen_corpus(3, 3, 2.0, FS, 11).unwrap();
    let model = ReferenceModel::build(&reference, &p).map_err(|e| e.to_string())?;
    let segments = gen_corpus(10, 10, 2.0, FS, 12).unwrap();
    let mut out = Vec::new();
    for c in [1.0, 0.1, 3.0] {
        let results = segments
            .iter()
            .map(|s| model.classify(&s.signal.scaled(c).unwrap()).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        out.push((c, results));
    }
    // Bin-exact histograms.
    for s in &segments {
        let base: Vec<Hist> = p.featurize(&s.signal).map_err(|e| e.to_string())?;
        for c in [0.1, 3.0] {
            let scaled = p.featurize(&s.signal.scaled(c).unwrap()).map_err(|e| e.to_string())?;
            check(scaled == base, format!("{}: histogram differs at c = {c}", s.source_id))?;
        }
    }
    Ok(out)
}

fn ac6_scale_invariance() -> Outcome {
    let runs = scale_invariance_run()?;
    let base = &runs[0].1;
    for (c, results) in &runs[1..] {
        for (i, (a, b)) in base.iter().zip(results).enumerate() {
            check(
                a.per_band == b.per_band && a.score_voice == b.score_voice && a.score_music == b.score_music,
                format!("segment {i}: scores differ at c = {c}"),
            )?;
            check(a.predicted == b.predicted, format!("segment {i}: prediction differs at c = {c}"))?;
        }
    }
    Ok("20 segments x c in {0.1, 3.0}: identical histograms, scores, predictions".into())
}

fn corpus_gate_run() -> Result<(CrossValidation, Duration), String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| {
        let start = Instant::now();
        let corpus = gen_corpus(100, 100, 2.0, FS, CORPUS_SEED).map_err(|e| e.to_string())?;
        let cv = cross_validate(&corpus, &pipeline(), 5, CV_SEED).map_err(|e| e.to_string())?;
        Ok((cv, start.elapsed()))
    })
}

fn ac7_corpus_gate() -> Outcome {
    let (cv, elapsed) = corpus_gate_run()?;
    let (v, m) = (cv.accuracy(Tag::Voice), cv.accuracy(Tag::Music));
    let summary = format!(
        "Voice {:.1} %, Music {:.1} %, {:.1} s single-threaded",
        100.0 * v,
        100.0 * m,
        elapsed.as_secs_f64()
    );
    check(v >= 0.9 && m >= 0.9, format!("per-class accuracy below 90 %: {summary}"))?;
    within_runtime(elapsed, 60.0)?;
    Ok(summary)
}

fn protocol_corpus() -> Vec<LabeledSegment> {
    gen_corpus(150, 100, 0.25, FS, 3).unwrap()
}

fn ac8_protocol_arithmetic() -> Outcome {
    let corpus = protocol_corpus();
    let folds = assign_folds(&corpus, 5, CV_SEED).map_err(|e| e.to_string())?;
    for (f, (music, voice)) in folds[Tag::Music.index()].iter().zip(&folds[Tag::Voice.index()]).enumerate() {
        check(
            music.len() == 20 && voice.len() == 30,
            format!("fold {f} reference sizes"),
        )?;
    }
    let cv = cross_validate(&corpus, &pipeline(), 5, CV_SEED).map_err(|e| e.to_string())?;
    for fold in &cv.folds {
        check(
            fold.reference_music == 20 && fold.reference_voice == 30,
            format!("fold {}: {} M + {} V references", fold.fold, fold.reference_music, fold.reference_voice),
        )?;
        check(
            fold.tested_music == 80 && fold.tested_voice == 120,
            format!("fold {}: {} M + {} V tested", fold.fold, fold.tested_music, fold.tested_voice),
        )?;
        check(
            fold.confusion.row_sum(Tag::Music) == 80 && fold.confusion.row_sum(Tag::Voice) == 120,
            format!("fold {} confusion rows", fold.fold),
        )?;
    }
    check(
        cv.aggregate.row_sum(Tag::Music) == 400 && cv.aggregate.row_sum(Tag::Voice) == 600,
        "aggregate rows differ from (k-1) x class counts",
    )?;
    Ok("5 folds of 20 M + 30 V references, 80 M + 120 V tests; aggregate rows 400/600".into())
}

fn bits(results: &[ClassificationResult]) -> Vec<u64> {
    results
        .iter()
        .flat_map(|r| {
            [r.score_voice.to_bits(), r.score_music.to_bits()]
                .into_iter()
                .chain(r.per_band.iter().flat_map(|d| [d.0.to_bits(), d.1.to_bits()]))
        })
        .collect()
}

fn ac9_determinism() -> Outcome {
    let a = scale_invariance_run()?;
    let b = scale_invariance_run()?;
    for ((ca, ra), (_, rb)) in a.iter().zip(&b) {
        check(bits(ra) == bits(rb), format!("criterion 6 scores differ between runs at c = {ca}"))?;
        check(
            ra.iter().map(|r| r.predicted).eq(rb.iter().map(|r| r.predicted)),
            "criterion 6 predictions differ",
        )?;
    }
    let (cv1, _) = corpus_gate_run()?;
    let (cv2, _) = corpus_gate_run()?;
    check(cv1 == cv2, "criterion 7 reports differ between runs")?;
    let corpus = protocol_corpus();
    check(corpus == protocol_corpus(), "protocol corpus differs between runs")?;
    let p = pipeline();
    let x = cross_validate(&corpus, &p, 5, CV_SEED).map_err(|e| e.to_string())?;
    let y = cross_validate(&corpus, &p, 5, CV_SEED).map_err(|e| e.to_string())?;
    check(x == y, "criterion 8 reports differ between runs")?;
    Ok("criteria 6-8 bit-identical across two runs".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 TEO closed form", ac1_teo_closed_form),
        ("AC2 DESA-1 sinusoid recovery", ac2_desa_sinusoid_sweep),
        ("AC3 AM-FM tracking", ac3_am_fm_tracking),
        ("AC4 Gabor gain", ac4_gabor_gain),
        ("AC5 KL checks", ac5_kl_checks),
        ("AC6 scale invariance end-to-end", ac6_scale_invariance),
        ("AC7 synthetic corpus gate", ac7_corpus_gate),
        ("AC8 protocol arithmetic", ac8_protocol_arithmetic),
        ("AC9 determinism", ac9_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({ms} ms)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({ms} ms)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
