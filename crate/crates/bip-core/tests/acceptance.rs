//! Acceptance suite: one test per release criterion. Run with
//! `cargo test --test acceptance -- --nocapture` to see the per-criterion
//! PASS lines and the measured numbers behind them.

mod common;

use std::time::Instant;

use bip_core::*;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn pass(id: u32, name: &str, detail: &str) {
    println!("acceptance criterion {id} ({name}): PASS [{detail}]");
}

/// Criterion 1: on random tree factor graphs the engine's final biases
/// reproduce the exact marginal gaps after diameter+2 undamped iterations.
#[test]
fn criterion_01_tree_exactness() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let (graph, diameter) = random_tree_graph(0x7EE0 + trial);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED + trial);
        let gamma: Vec<f64> = (0..graph.n()).map(|_| rng.gen_range(0.3..=2.0)).collect();
        let s = random_source_word(graph.n(), 0xBADCAFE + trial);

        let mut params = BipParams::with_gamma_vec(gamma.clone(), graph.m());
        params.max_iter = diameter + 2;
        params.start_damp = params.max_iter + 1; // never damp
        params.clamp_eps = 1e-12;

        let residual = ResidualState::new(&graph, &s).unwrap();
        let mut msgs = MessageState::init(&graph, &residual, &params);
        engine::propagate(&graph, &residual, &mut msgs, &params);
        let biases = msgs.final_biases(&graph, &residual, params.clamp_eps);

        let exact = exact_distribution(&graph, &s, &gamma).unwrap();
        for i in 0..graph.m() {
            let diff = (biases[i] - exact.bias_gaps[i]).abs();
            worst = worst.max(diff);
            assert!(
                diff <= 1e-9,
                "trial {trial}: bit {i} bias {} vs exact {} (n={}, m={}, diameter={diameter})",
                biases[i],
                exact.bias_gaps[i],
                graph.n(),
                graph.m(),
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, limit 10 s");
    pass(1, "tree exactness", &format!("200 trees, worst gap {worst:.2e}, {elapsed:?}"));
}

/// Criterion 2: the engine never beats the exhaustive optimum.
#[test]
fn criterion_02_oracle_dominance() {
    let start = Instant::now();
    let mut gaps = Vec::new();
    for trial in 0..200u64 {
        let graph = random_loopy_graph(0x10_0000 + trial);
        let (n, m) = (graph.n(), graph.m());
        let profile = if trial % 2 == 0 { Profile::uniform(n) } else { linear_profile(n) };
        let gamma = [0.8, 1.07, 1.5][(trial % 3) as usize];
        let params = BipParams::uniform(gamma, n, m);
        let s = random_source_word(n, 0x51D + trial);

        let approx = quantize(&graph, &s, &params, &profile).unwrap();
        let (_, best) = exhaustive_quantize(&graph, &s, &profile).unwrap();
        assert!(
            approx.distortion >= best - 1e-12,
            "trial {trial}: engine {} beat the oracle {best}",
            approx.distortion
        );
        gaps.push(approx.distortion - best);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, limit 60 s");
    pass(
        2,
        "oracle dominance",
        &format!("200 instances, mean gap {:.5}, {elapsed:?}", mean(&gaps)),
    );
}

/// Criterion 3: shifting the source by a codeword shifts the output word
/// by the same information word and leaves the distortion unchanged,
/// whenever no selection-time bias is exactly zero.
#[test]
fn criterion_03_gauge_covariance() {
    let start = Instant::now();
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for trial in 0..100u64 {
        let graph = random_loopy_graph(0x20_0000 + trial);
        let (n, m) = (graph.n(), graph.m());
        let params = BipParams::uniform(1.07, n, m);
        let profile = Profile::uniform(n);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6A6E + trial);
        let s = random_source_word(n, 0xACE + trial);
        let w0: Vec<u8> = (0..m).map(|_| rng.gen_range(0..2u8)).collect();
        let shift = graph.encode(&w0).unwrap();
        let s_shifted: Vec<u8> = s.iter().zip(&shift).map(|(&a, &b)| a ^ b).collect();

        let base = quantize(&graph, &s, &params, &profile).unwrap();
        let moved = quantize(&graph, &s_shifted, &params, &profile).unwrap();
        if base.min_fixed_abs_bias == 0.0 || moved.min_fixed_abs_bias == 0.0 {
            skipped += 1;
            continue;
        }
        checked += 1;
        let expected: Vec<u8> = base.w.iter().zip(&w0).map(|(&a, &b)| a ^ b).collect();
        assert_eq!(moved.w, expected, "trial {trial}: word not covariant");
        assert_eq!(moved.distortion, base.distortion, "trial {trial}: distortion moved");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, limit 30 s");
    assert!(checked >= 50, "only {checked} instances were checkable");
    pass(
        3,
        "gauge covariance",
        &format!("{checked} checked, {skipped} skipped on zero bias, {elapsed:?}"),
    );
}

fn mean_distortion_over_trials(
    graph: &FactorGraph,
    params: &BipParams,
    profile: &Profile,
    trials: u64,
    source_seed: u64,
) -> Vec<f64> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let s = random_source_word(graph.n(), source_seed + trial);
            quantize(graph, &s, params, profile).unwrap().distortion
        })
        .collect()
}

/// Criterion 4: mean distortion of the shipped codes at n = 10^4 sits
/// between the rate-distortion bound and bound + 0.015 for every rate,
/// and inside [0.110, 0.125] for rate 0.5.
#[test]
fn criterion_04_rate_distortion_uniform_profile() {
    let start = Instant::now();
    let gamma_by_rate = [(0.37, 0.8), (0.50, 1.07), (0.65, 1.3), (0.75, 1.5)];
    let n = 10_000usize;
    let trials = 20u64;
    let mut summary = String::new();
    for ((rate, gamma), (labeled, check, info)) in gamma_by_rate.iter().zip(shipped_pairs()) {
        assert_eq!(*rate, labeled);
        let m = (rate * n as f64).round() as usize;
        let graph = graph::sample_graph(n, m, &check, &info, 0xC0DE).unwrap();
        let params = BipParams::uniform(*gamma, n, m);
        let profile = Profile::uniform(n);
        let ds = mean_distortion_over_trials(&graph, &params, &profile, trials, 0x4000);
        let mean_d = mean(&ds);
        let bound = shannon_distortion(*rate).unwrap();
        assert!(
            mean_d >= bound && mean_d <= bound + 0.015,
            "rate {rate}: mean D {mean_d:.4} outside [{bound:.4}, {:.4}]",
            bound + 0.015
        );
        if (*rate - 0.5).abs() < 1e-9 {
            assert!(
                (0.110..=0.125).contains(&mean_d),
                "rate 0.5: mean D {mean_d:.4} outside [0.110, 0.125]"
            );
        }
        summary.push_str(&format!("R={rate}: D={mean_d:.4} (bound {bound:.4}); "));
    }
    pass(4, "rate-distortion, uniform profile", &format!("{summary}{:?}", start.elapsed()));
}

/// Criterion 5: distortion does not get worse with code length.
#[test]
fn criterion_05_length_scaling() {
    let start = Instant::now();
    let pairs = shipped_pairs();
    let (_, check, info) = &pairs[1];
    let trials = 10u64;
    let profile_of = |n: usize| Profile::uniform(n);

    let small_n = 2_000usize;
    let graph = graph::sample_graph(small_n, small_n / 2, check, info, 0xA1).unwrap();
    let params = BipParams::uniform(1.07, small_n, small_n / 2);
    let d_small = mean(&mean_distortion_over_trials(
        &graph,
        &params,
        &profile_of(small_n),
        trials,
        0x5000,
    ));

    let large_n = 100_000usize;
    let graph = graph::sample_graph(large_n, large_n / 2, check, info, 0xA2).unwrap();
    let params = BipParams::uniform(1.07, large_n, large_n / 2);
    let d_large = mean(&mean_distortion_over_trials(
        &graph,
        &params,
        &profile_of(large_n),
        trials,
        0x6000,
    ));

    assert!(
        d_large <= d_small,
        "mean D at n=10^5 ({d_large:.4}) exceeds mean D at n=2000 ({d_small:.4})"
    );
    pass(
        5,
        "length scaling",
        &format!("D(n=2e3)={d_small:.4} >= D(n=1e5)={d_large:.4}, {:?}", start.elapsed()),
    );
}

/// Criterion 6: with the cubic strength profile, weighted quantization of
/// the linear profile at rate 0.5 stays under 0.10 mean weighted
/// distortion and beats the uniform-strength run under the same norm.
#[test]
fn criterion_06_weighted_case() {
    let start = Instant::now();
    let pairs = shipped_pairs();
    let (_, check, info) = &pairs[1];
    let n = 10_000usize;
    let m = n / 2;
    let trials = 20u64;
    let graph = graph::sample_graph(n, m, check, info, 0xD06).unwrap();
    let profile = linear_profile(n);

    let model = GammaModel { coeffs: [0.0792, -0.0841, -0.7925, 1.3378], fitted_n: n };
    let tuned = BipParams::with_gamma_vec(tuner::eval_gamma(&model, n), m);
    let d_tuned = mean(&mean_distortion_over_trials(&graph, &tuned, &profile, trials, 0x7000));

    let flat = BipParams::uniform(1.07, n, m);
    let d_flat = mean(&mean_distortion_over_trials(&graph, &flat, &profile, trials, 0x7000));

    assert!(d_tuned <= 0.10, "weighted mean D {d_tuned:.4} above 0.10");
    assert!(
        d_tuned < d_flat,
        "tuned strengths ({d_tuned:.4}) should beat uniform strengths ({d_flat:.4})"
    );
    pass(
        6,
        "weighted case",
        &format!("tuned D={d_tuned:.4} < uniform D={d_flat:.4}, {:?}", start.elapsed()),
    );
}

/// Criterion 7: the solved scale for the linear profile at rate 0.5
/// reproduces the reference value 4.544 within 2%.
#[test]
fn criterion_07_zeta_regression() {
    let zeta = solve_zeta(&linear_profile(10_000), 0.5).unwrap();
    let rel = (zeta - 4.544).abs() / 4.544;
    assert!(rel <= 0.02, "zeta {zeta:.4} is {:.2}% from 4.544", rel * 100.0);
    pass(7, "zeta regression", &format!("zeta={zeta:.4}, {:.3}% off", rel * 100.0));
}

/// Criterion 8: the shipped distribution pairs realize their labeled
/// design rates within 0.01.
#[test]
fn criterion_08_design_rates() {
    let mut detail = String::new();
    for (labeled, check, info) in shipped_pairs() {
        let rate = design_rate(&check, &info);
        assert!(
            (rate - labeled).abs() <= 0.01,
            "pair labeled {labeled} has design rate {rate:.4}"
        );
        detail.push_str(&format!("{labeled}:{rate:.4} "));
    }
    pass(8, "design rates", detail.trim());
}

/// Criterion 9: single-round decimation is strictly worse than the full
/// schedule on the irregular rate-0.5 code.
#[test]
fn criterion_09_single_round_mode() {
    let start = Instant::now();
    let pairs = shipped_pairs();
    let (_, check, info) = &pairs[1];
    let n = 2_000usize;
    let m = n / 2;
    let graph = graph::sample_graph(n, m, check, info, 0x51).unwrap();
    let params = BipParams::uniform(1.07, n, m);
    let profile = Profile::uniform(n);

    let mut multi = Vec::new();
    let mut single = Vec::new();
    for trial in 0..10u64 {
        let s = random_source_word(n, 0x8000 + trial);
        multi.push(quantize(&graph, &s, &params, &profile).unwrap().distortion);
        single.push(quantize_single_round(&graph, &s, &params, &profile).unwrap().distortion);
    }
    let (m_mean, s_mean) = (mean(&multi), mean(&single));
    assert!(
        s_mean > m_mean,
        "single-round mean {s_mean:.4} should exceed multi-round mean {m_mean:.4}"
    );
    pass(
        9,
        "single-round mode",
        &format!("single {s_mean:.4} > multi {m_mean:.4}, {:?}", start.elapsed()),
    );
}

/// Criterion 10: throughput scales near-linearly in code length; the
/// per-bit cost at n = 10^4 stays within 3x of n = 2*10^3.
#[test]
fn criterion_10_throughput_scaling() {
    let pairs = shipped_pairs();
    let (_, check, info) = &pairs[1];
    let profile_thpt = |n: usize, seed: u64| -> f64 {
        let m = n / 2;
        let graph = graph::sample_graph(n, m, check, info, seed).unwrap();
        let params = BipParams::uniform(1.07, n, m);
        let profile = Profile::uniform(n);
        let trials = 5u64;
        let mut rates = Vec::new();
        for trial in 0..trials {
            let s = random_source_word(n, 0x9000 + trial);
            let t = Instant::now();
            let _ = quantize(&graph, &s, &params, &profile).unwrap();
            rates.push(n as f64 / t.elapsed().as_secs_f64());
        }
        mean(&rates)
    };
    let thpt_small = profile_thpt(2_000, 0x71);
    let thpt_large = profile_thpt(10_000, 0x72);
    let ratio = thpt_large / thpt_small;
    assert!(
        (1.0 / 3.0..=3.0).contains(&ratio),
        "throughput ratio {ratio:.2} outside [1/3, 3] ({thpt_large:.0} vs {thpt_small:.0} bits/s)"
    );
    pass(
        10,
        "throughput scaling",
        &format!("{thpt_small:.0} bits/s @2e3, {thpt_large:.0} bits/s @1e4, ratio {ratio:.2}"),
    );
}

/// Criterion 11: the numerical identities behind the engine hold tightly:
/// both damping routes agree, the entropy inverse round-trips, and both
/// closed forms of the Gibbs weight give the same probabilities.
#[test]
fn criterion_11_numerical_identities() {
    // Damping: ratio-geometric-mean route vs atanh-mean route.
    let grid: Vec<f64> = (-999..=999)
        .step_by(37)
        .map(|k| k as f64 / 1000.0)
        .chain([-0.999, -0.5, 0.0, 0.5, 0.999])
        .collect();
    let mut worst_damp = 0.0f64;
    for &x in &grid {
        for &y in &grid {
            let via_ratio = engine::damp(x, y, 1e-12);
            let via_atanh = ((x.atanh() + y.atanh()) / 2.0).tanh();
            worst_damp = worst_damp.max((via_ratio - via_atanh).abs());
        }
    }
    assert!(worst_damp <= 1e-12, "damping routes differ by {worst_damp:.2e}");

    // Entropy inverse round-trip and monotonicity.
    let mut worst_h = 0.0f64;
    let mut prev = -1.0f64;
    for k in 0..=1000 {
        let h = k as f64 / 1000.0;
        let p = inverse_binary_entropy(h).unwrap();
        assert!(p >= prev, "inverse entropy not monotone at h={h}");
        prev = p;
        worst_h = worst_h.max((binary_entropy(p).unwrap() - h).abs());
    }
    assert!(worst_h <= 1e-10, "entropy round-trip off by {worst_h:.2e}");

    // Gibbs weight: per-check factor form vs exponent-of-disagreement
    // form, as normalized probabilities over all words.
    let mut worst_p = 0.0f64;
    for trial in 0..40u64 {
        let graph = random_loopy_graph(0x30_0000 + trial);
        if graph.m() > 8 {
            continue;
        }
        let (n, m) = (graph.n(), graph.m());
        let mut rng = ChaCha8Rng::seed_from_u64(0xE0 + trial);
        let gamma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0)).collect();
        let s = random_source_word(n, 0xF00 + trial);

        let psi_logs = oracle::enumerate_log_weights(&graph, &s, &gamma).unwrap();
        let exp_logs: Vec<f64> = (0..1usize << m)
            .map(|k| {
                let w: Vec<u8> = (0..m).map(|i| (k >> i & 1) as u8).collect();
                let c = graph.encode(&w).unwrap();
                (0..n)
                    .map(|a| if c[a] != s[a] { -2.0 * gamma[a] } else { 0.0 })
                    .sum()
            })
            .collect();
        let normalize = |logs: &[f64]| -> Vec<f64> {
            let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let total: f64 = logs.iter().map(|&l| (l - max).exp()).sum();
            logs.iter().map(|&l| (l - max).exp() / total).collect()
        };
        for (p1, p2) in normalize(&psi_logs).iter().zip(normalize(&exp_logs)) {
            worst_p = worst_p.max((p1 - p2).abs());
        }
    }
    assert!(worst_p <= 1e-12, "dual-form probabilities differ by {worst_p:.2e}");

    pass(
        11,
        "numerical identities",
        &format!("damp {worst_damp:.1e}, entropy {worst_h:.1e}, dual-form {worst_p:.1e}"),
    );
}
