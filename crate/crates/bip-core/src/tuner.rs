//! Iterative calibration of per-check strengths for nonuniform profiles.
//!
//! For a weighted profile the best flip probability differs per position
//! ([`crate::distortion::target_flip_probs`]), so a single scalar strength
//! no longer fits. The tuner measures the empirical flip rate of each
//! position over a batch of quantized random sources, smooths the noisy
//! estimate with a moving average, and nudges each strength by the
//! mean-centered gap between estimate and target. The tuned vector can be
//! compressed into a cubic polynomial over the standardized position for
//! compact storage and reuse at other lengths.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::distortion::{solve_zeta, target_flip_probs, DistortionError, Profile};
use crate::engine::{quantize, BipParams, QuantizeError};
use crate::graph::FactorGraph;
use crate::math;

pub const DEFAULT_SOURCES_PER_ITER: usize = 100;
pub const DEFAULT_STEP: f64 = 3.0;
pub const DEFAULT_ITERATIONS: usize = 10;
pub const DEFAULT_WINDOW: usize = 101;

/// Scale of the standardized position `x = (a - n/2) / (SCALE * n)` used
/// by the cubic model.
pub const CENTER_SCALE: f64 = 0.2886;

/// Tuning schedule. The strengths start from `base.gamma`; every other
/// knob of `base` is reused unchanged for the quantization runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TunerConfig {
    /// Random sources quantized per tuning iteration.
    pub sources_per_iter: usize,
    /// Step constant multiplying the mean-centered estimate gap.
    pub step: f64,
    pub iterations: usize,
    /// Moving-average width (odd, at most `n`).
    pub window: usize,
    pub base: BipParams,
    pub seed: u64,
}

impl TunerConfig {
    pub fn new(base: BipParams, seed: u64) -> Self {
        Self {
            sources_per_iter: DEFAULT_SOURCES_PER_ITER,
            step: DEFAULT_STEP,
            iterations: DEFAULT_ITERATIONS,
            window: DEFAULT_WINDOW,
            base,
            seed,
        }
    }
}

/// Cubic strength model over the standardized position, stored highest
/// power first, together with the length it was fitted at.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaModel {
    /// `(a3, a2, a1, a0)` for `f(x) = a3 x^3 + a2 x^2 + a1 x + a0`.
    pub coeffs: [f64; 4],
    /// Length the samples came from.
    pub fitted_n: usize,
}

/// Final strengths plus the mean absolute target error measured before
/// each step (and once more after the last).
#[derive(Debug, Clone, PartialEq)]
pub struct TuningResult {
    pub gamma: Vec<f64>,
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TunerError {
    LengthMismatch { expected: usize, found: usize },
    TooFewSamples { found: usize },
    WindowNotOdd { window: usize },
    WindowTooWide { window: usize, n: usize },
    InvalidStep { step: f64 },
    ZeroSources,
    MalformedModel,
    Quantize(QuantizeError),
    Distortion(DistortionError),
}

impl fmt::Display for TunerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(f, "length {found} does not match {expected}")
            }
            Self::TooFewSamples { found } => {
                write!(f, "cubic fit needs at least 4 samples, got {found}")
            }
            Self::WindowNotOdd { window } => write!(f, "window {window} must be odd"),
            Self::WindowTooWide { window, n } => {
                write!(f, "window {window} exceeds sequence length {n}")
            }
            Self::InvalidStep { step } => write!(f, "step constant {step} must be positive"),
            Self::ZeroSources => write!(f, "need at least one source per iteration"),
            Self::MalformedModel => write!(f, "expected one line \"a3 a2 a1 a0 n\""),
            Self::Quantize(e) => write!(f, "{e}"),
            Self::Distortion(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TunerError {}

impl From<QuantizeError> for TunerError {
    fn from(e: QuantizeError) -> Self {
        Self::Quantize(e)
    }
}

impl From<DistortionError> for TunerError {
    fn from(e: DistortionError) -> Self {
        Self::Distortion(e)
    }
}

/// Centered moving average with the window truncated at the boundaries.
/// The window must be odd and no wider than the sequence.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>, TunerError> {
    if window % 2 == 0 || window == 0 {
        return Err(TunerError::WindowNotOdd { window });
    }
    if window > values.len() {
        return Err(TunerError::WindowTooWide { window, n: values.len() });
    }
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0f64);
    for &v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    let out = (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(values.len() - 1);
            (prefix[hi + 1] - prefix[lo]) / (hi + 1 - lo) as f64
        })
        .collect();
    Ok(out)
}

/// Empirical flip probability of each source position: quantize
/// `sources_per_iter` seeded random sources with the given parameters and
/// count, per check, how often the codeword disagrees with the source;
/// then smooth with the moving average. Deterministic in `seed`.
pub fn estimate_flip_probs(
    graph: &FactorGraph,
    params: &BipParams,
    sources_per_iter: usize,
    window: usize,
    seed: u64,
) -> Result<Vec<f64>, TunerError> {
    if sources_per_iter == 0 {
        return Err(TunerError::ZeroSources);
    }
    let n = graph.n();
    let profile = Profile::uniform(n);
    let mut flips = vec![0u32; n];
    for run in 0..sources_per_iter {
        let s = crate::graph::random_source_word(n, seed.wrapping_add(run as u64));
        let result = quantize(graph, &s, params, &profile)?;
        for a in 0..n {
            if result.c[a] != s[a] {
                flips[a] += 1;
            }
        }
    }
    let raw: Vec<f64> = flips
        .iter()
        .map(|&f| f as f64 / sources_per_iter as f64)
        .collect();
    moving_average(&raw, window)
}

/// One strength update: `gamma_a + step * (est_a - target_a - (mean(est)
/// - mean(target)))`, floored at zero. Mean-centering keeps the average
/// strength in place; only the shape moves.
pub fn tuner_step(
    gamma: &[f64],
    estimated: &[f64],
    target: &[f64],
    step: f64,
) -> Result<Vec<f64>, TunerError> {
    if estimated.len() != gamma.len() || target.len() != gamma.len() {
        return Err(TunerError::LengthMismatch {
            expected: gamma.len(),
            found: if estimated.len() != gamma.len() {
                estimated.len()
            } else {
                target.len()
            },
        });
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(TunerError::InvalidStep { step });
    }
    let n = gamma.len() as f64;
    let mean_gap: f64 = estimated
        .iter()
        .zip(target)
        .map(|(&e, &t)| e - t)
        .sum::<f64>()
        / n;
    Ok(gamma
        .iter()
        .zip(estimated.iter().zip(target))
        .map(|(&g, (&e, &t))| (g + step * (e - t - mean_gap)).max(0.0))
        .collect())
}

fn mean_abs_gap(estimated: &[f64], target: &[f64]) -> f64 {
    estimated
        .iter()
        .zip(target)
        .map(|(&e, &t)| math::abs(e - t))
        .sum::<f64>()
        / estimated.len() as f64
}

fn iteration_seed(seed: u64, iteration: usize) -> u64 {
    // Spread iteration batches across the seed space so each one sees
    // fresh sources.
    seed.wrapping_add((iteration as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Alternate flip-rate estimation and strength updates for the configured
/// number of iterations, driving the estimates toward the targets implied
/// by `(profile, rate)`.
pub fn run_tuning(
    graph: &FactorGraph,
    profile: &Profile,
    rate: f64,
    config: &TunerConfig,
) -> Result<TuningResult, TunerError> {
    if profile.len() != graph.n() {
        return Err(TunerError::LengthMismatch { expected: graph.n(), found: profile.len() });
    }
    let zeta = solve_zeta(profile, rate)?;
    let target = target_flip_probs(profile, zeta);

    let mut params = config.base.clone();
    let mut history = Vec::with_capacity(config.iterations + 1);
    for iteration in 0..=config.iterations {
        let estimated = estimate_flip_probs(
            graph,
            &params,
            config.sources_per_iter,
            config.window,
            iteration_seed(config.seed, iteration),
        )?;
        history.push(mean_abs_gap(&estimated, &target));
        if iteration < config.iterations {
            params.gamma = tuner_step(&params.gamma, &estimated, &target, config.step)?;
        }
    }
    Ok(TuningResult { gamma: params.gamma, history })
}

#[inline]
fn standardized_position(a: usize, n: usize) -> f64 {
    (a as f64 - n as f64 / 2.0) / (CENTER_SCALE * n as f64)
}

/// Least-squares cubic through `(x_a, samples[a])` with `x_a` the
/// standardized position. Needs at least 4 samples.
pub fn fit_cubic(samples: &[f64]) -> Result<GammaModel, TunerError> {
    let n = samples.len();
    if n < 4 {
        return Err(TunerError::TooFewSamples { found: n });
    }
    // Normal equations over powers x^0 .. x^3.
    let mut moments = [0.0f64; 7];
    let mut rhs = [0.0f64; 4];
    for (a, &y) in samples.iter().enumerate() {
        let x = standardized_position(a, n);
        let mut p = 1.0;
        for (k, moment) in moments.iter_mut().enumerate() {
            *moment += p;
            if k < 4 {
                rhs[k] += y * p;
            }
            p *= x;
        }
    }
    let mut a = [[0.0f64; 5]; 4];
    for (j, row) in a.iter_mut().enumerate() {
        for (k, cell) in row.iter_mut().take(4).enumerate() {
            *cell = moments[j + k];
        }
        row[4] = rhs[j];
    }
    // Gaussian elimination with partial pivoting on the 4x4 system.
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&r1, &r2| math::abs(a[r1][col]).partial_cmp(&math::abs(a[r2][col])).unwrap())
            .unwrap();
        a.swap(col, pivot);
        let lead = a[col][col];
        if math::abs(lead) < 1e-300 {
            return Err(TunerError::TooFewSamples { found: n });
        }
        for row in 0..4 {
            if row == col {
                continue;
            }
            let factor = a[row][col] / lead;
            for k in col..5 {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    let c: Vec<f64> = (0..4).map(|j| a[j][4] / a[j][j]).collect();
    Ok(GammaModel { coeffs: [c[3], c[2], c[1], c[0]], fitted_n: n })
}

/// Evaluate a cubic model at every position of a length-`n` code, floored
/// at zero. The standardized position makes the model scale-free, so `n`
/// need not equal the fitted length.
pub fn eval_gamma(model: &GammaModel, n: usize) -> Vec<f64> {
    let [a3, a2, a1, a0] = model.coeffs;
    (0..n)
        .map(|a| {
            let x = standardized_position(a, n);
            (((a3 * x + a2) * x + a1) * x + a0).max(0.0)
        })
        .collect()
}

impl GammaModel {
    /// One line: `a3 a2 a1 a0 n`.
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let [a3, a2, a1, a0] = self.coeffs;
        let _ = writeln!(out, "{a3} {a2} {a1} {a0} {}", self.fitted_n);
        out
    }

    pub fn parse(text: &str) -> Result<Self, TunerError> {
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or(TunerError::MalformedModel)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(TunerError::MalformedModel);
        }
        let mut coeffs = [0.0f64; 4];
        for (slot, field) in coeffs.iter_mut().zip(&fields[..4]) {
            *slot = field.parse().map_err(|_| TunerError::MalformedModel)?;
        }
        let fitted_n: usize = fields[4].parse().map_err(|_| TunerError::MalformedModel)?;
        Ok(Self { coeffs, fitted_n })
    }
}
