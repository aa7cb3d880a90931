//! Brute-force ground truth for small instances.
//!
//! Both operations enumerate all `2^m` information words in Gray-code
//! order, so each step flips a single bit and touches only that bit's
//! adjacent checks. [`exhaustive_quantize`] finds the true nearest
//! codeword; [`exact_distribution`] evaluates the Gibbs distribution the
//! message-passing engine approximates, in log-sum form, yielding the
//! exact partition function and per-bit marginal gaps.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::distortion::{weighted_distortion, DistortionError, Profile};
use crate::graph::FactorGraph;
use crate::math;

/// Enumeration refuses instances with more information bits than this.
pub const MAX_ENUMERATION_BITS: usize = 20;

/// Window within which incrementally tracked distortions are re-verified
/// with a full recomputation before accepting a new optimum.
const CANDIDATE_SLACK: f64 = 1e-9;

/// Exact evaluation of the Gibbs distribution over information words.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    /// Log of the partition function in the per-check factor form (each
    /// check contributes `e^{+gamma}` on agreement, `e^{-gamma}` on
    /// disagreement). With all strengths zero this is `m * ln 2`.
    pub log_partition: f64,
    /// Per-bit marginal gap `P(w_i = 0 | s) - P(w_i = 1 | s)`.
    pub bias_gaps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    TooManyBits { m: usize, limit: usize },
    LengthMismatch { expected: usize, found: usize },
    InvalidBitValue { value: u8 },
    Distortion(DistortionError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooManyBits { m, limit } => {
                write!(f, "enumeration over m={m} bits exceeds the limit of {limit}")
            }
            Self::LengthMismatch { expected, found } => {
                write!(f, "length {found} does not match n={expected}")
            }
            Self::InvalidBitValue { value } => write!(f, "bit value {value} is not 0 or 1"),
            Self::Distortion(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

impl From<DistortionError> for OracleError {
    fn from(e: DistortionError) -> Self {
        Self::Distortion(e)
    }
}

fn validate_inputs(graph: &FactorGraph, s: &[u8], per_check_len: usize) -> Result<(), OracleError> {
    if graph.m() > MAX_ENUMERATION_BITS {
        return Err(OracleError::TooManyBits { m: graph.m(), limit: MAX_ENUMERATION_BITS });
    }
    if s.len() != graph.n() {
        return Err(OracleError::LengthMismatch { expected: graph.n(), found: s.len() });
    }
    if let Some(&value) = s.iter().find(|&&b| b > 1) {
        return Err(OracleError::InvalidBitValue { value });
    }
    if per_check_len != graph.n() {
        return Err(OracleError::LengthMismatch { expected: graph.n(), found: per_check_len });
    }
    Ok(())
}

/// Drive a Gray-code walk over all `2^m` words. `step(bit, w)` is called
/// after each single-bit flip with the flipped bit and the current word.
fn gray_walk(m: usize, mut step: impl FnMut(usize, &[u8])) {
    let mut w = vec![0u8; m];
    let total: u64 = 1u64 << m;
    for g in 1..total {
        let bit = g.trailing_zeros() as usize;
        w[bit] ^= 1;
        step(bit, &w);
    }
}

/// True nearest codeword: minimize the weighted distortion of
/// `encode(graph, w)` against `s` over all `2^m` words. Ties go to the
/// numerically smallest `w` read as a big-endian bit string. Limited to
/// `m <= 20`.
pub fn exhaustive_quantize(
    graph: &FactorGraph,
    s: &[u8],
    profile: &Profile,
) -> Result<(Vec<u8>, f64), OracleError> {
    validate_inputs(graph, s, profile.len())?;
    let n = graph.n();
    let m = graph.m();
    let per_check: Vec<f64> = profile.weights().iter().map(|&w| w / n as f64).collect();

    let mut c = vec![0u8; n];
    let mut dist: f64 = weighted_distortion(s, &c, profile)?;
    let mut best_w = vec![0u8; m];
    let mut best_c = c.clone();
    let mut best_dist = dist;

    gray_walk(m, |bit, w| {
        for &a in graph.bit_neighbors(bit) {
            let a = a as usize;
            c[a] ^= 1;
            if c[a] == s[a] {
                dist -= per_check[a];
            } else {
                dist += per_check[a];
            }
        }
        if dist <= best_dist + CANDIDATE_SLACK {
            // The incremental value drifts; settle candidates exactly.
            let exact = weighted_distortion(s, &c, profile).unwrap();
            if exact < best_dist || (exact == best_dist && w < &best_w[..]) {
                best_dist = exact;
                best_w.copy_from_slice(w);
                best_c.copy_from_slice(&c);
            }
        }
    });
    Ok((best_w, best_dist))
}

/// Per-word log-weights of the Gibbs distribution in the per-check factor
/// form: entry `k` (bit `i` of `k` is `w_i`) holds
/// `sum_a gamma_a * (+1 on agreement, -1 on disagreement)`. Limited to
/// `m <= 20`.
pub fn enumerate_log_weights(
    graph: &FactorGraph,
    s: &[u8],
    gamma: &[f64],
) -> Result<Vec<f64>, OracleError> {
    validate_inputs(graph, s, gamma.len())?;
    let n = graph.n();
    let m = graph.m();

    let mut c = vec![0u8; n];
    let mut log_weight: f64 = (0..n)
        .map(|a| if s[a] == 0 { gamma[a] } else { -gamma[a] })
        .sum();
    let mut out = vec![0.0f64; 1usize << m];
    out[0] = log_weight;
    let mut windex = 0usize;
    gray_walk(m, |bit, _| {
        windex ^= 1usize << bit;
        for &a in graph.bit_neighbors(bit) {
            let a = a as usize;
            c[a] ^= 1;
            if c[a] == s[a] {
                log_weight += 2.0 * gamma[a];
            } else {
                log_weight -= 2.0 * gamma[a];
            }
        }
        out[windex] = log_weight;
    });
    Ok(out)
}

struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Exact partition function and per-bit marginal gaps of the Gibbs
/// distribution, accumulated stably around the maximum log-weight.
/// Limited to `m <= 20`.
pub fn exact_distribution(
    graph: &FactorGraph,
    s: &[u8],
    gamma: &[f64],
) -> Result<ExactDistribution, OracleError> {
    validate_inputs(graph, s, gamma.len())?;
    let n = graph.n();
    let m = graph.m();

    let base: f64 = (0..n)
        .map(|a| if s[a] == 0 { gamma[a] } else { -gamma[a] })
        .sum();

    // Pass 1: maximum log-weight, for the stable shift.
    let mut c = vec![0u8; n];
    let mut log_weight = base;
    let mut max_log = log_weight;
    gray_walk(m, |bit, _| {
        for &a in graph.bit_neighbors(bit) {
            let a = a as usize;
            c[a] ^= 1;
            if c[a] == s[a] {
                log_weight += 2.0 * gamma[a];
            } else {
                log_weight -= 2.0 * gamma[a];
            }
        }
        max_log = max_log.max(log_weight);
    });

    // Pass 2: shifted sums, split per bit by the bit's value.
    let mut total = Kahan::new();
    let mut zero_side: Vec<Kahan> = (0..m).map(|_| Kahan::new()).collect();
    let mut one_side: Vec<Kahan> = (0..m).map(|_| Kahan::new()).collect();
    let mut accumulate = |w: &[u8], log_weight: f64| {
        let weight = math::exp(log_weight - max_log);
        total.add(weight);
        for (i, &wi) in w.iter().enumerate() {
            if wi == 0 {
                zero_side[i].add(weight);
            } else {
                one_side[i].add(weight);
            }
        }
    };
    c.iter_mut().for_each(|x| *x = 0);
    log_weight = base;
    accumulate(&vec![0u8; m], log_weight);
    gray_walk(m, |bit, w| {
        for &a in graph.bit_neighbors(bit) {
            let a = a as usize;
            c[a] ^= 1;
            if c[a] == s[a] {
                log_weight += 2.0 * gamma[a];
            } else {
                log_weight -= 2.0 * gamma[a];
            }
        }
        accumulate(w, log_weight);
    });

    let bias_gaps = (0..m)
        .map(|i| (zero_side[i].sum - one_side[i].sum) / total.sum)
        .collect();
    Ok(ExactDistribution {
        log_partition: max_log + math::ln(total.sum),
        bias_gaps,
    })
}
