//! The bias-propagation quantizer.
//!
//! Messages live in bias form: a value in `[-1, 1]` equal to the difference
//! of the two probabilities the message assigns to 0 and 1. Each check `a`
//! contributes a constant source message `(-1)^{s_a} * tanh(gamma_a)`
//! whose magnitude encodes the check's strength. One message-passing
//! iteration updates bit-to-check biases from the previous iteration's
//! check-to-bit satisfactions, then satisfactions from the fresh biases.
//!
//! Quantization runs in rounds: `max_iter` iterations, then the most
//! biased undecided bits are fixed by sign and decimated out of the
//! residual graph. Satisfaction messages survive decimation, so later
//! rounds resume from the previous round's fixed point rather than from
//! scratch. Oscillation on loopy graphs is suppressed by damping: from
//! iteration `start_damp` onward the new outgoing bias is blended with the
//! previous one through the geometric mean of their likelihood ratios.
//!
//! All updates are deterministic and run in index order; two runs with
//! identical inputs produce bit-identical results.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::distortion::{weighted_distortion, DistortionError, Profile};
use crate::graph::{FactorGraph, GraphError, ResidualState};
use crate::math;

/// Factor magnitude below which product-form updates switch to the
/// log-domain path.
const GUARD_EPS: f64 = 1e-30;

/// Largest representable bias magnitude accepted by the log-domain path.
const MAX_FINITE_BIAS: f64 = 1.0 - f64::EPSILON;

pub const DEFAULT_THRESHOLD: f64 = 0.8;
pub const DEFAULT_MAX_ITER: usize = 25;
pub const DEFAULT_START_DAMP: usize = 10;
pub const DEFAULT_CLAMP_EPS: f64 = 1e-7;
pub const NUM_MIN_FRACTION: f64 = 0.001;
pub const NUM_MAX_FRACTION: f64 = 0.01;

/// Per-check strengths plus the decimation schedule knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct BipParams {
    /// Strength of each check node; length must equal the graph's `n`.
    pub gamma: Vec<f64>,
    /// Bias threshold deciding how many bits a round wants to fix.
    pub t: f64,
    /// Message-passing iterations per round.
    pub max_iter: usize,
    /// First damped iteration index (1-based within each round).
    pub start_damp: usize,
    /// Fewest bits fixed per round (while that many remain).
    pub num_min: usize,
    /// Most bits fixed per round.
    pub num_max: usize,
    /// Stored messages are clamped into `[-(1-eps), 1-eps]`.
    pub clamp_eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    GammaLength { expected: usize, found: usize },
    InvalidGamma { index: usize, value: f64 },
    ThresholdRange { t: f64 },
    ZeroMaxIter,
    ZeroStartDamp,
    FixCountRange { num_min: usize, num_max: usize, m: usize },
    ClampRange { eps: f64 },
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::GammaLength { expected, found } => {
                write!(f, "gamma length {found} does not match n={expected}")
            }
            Self::InvalidGamma { index, value } => {
                write!(f, "gamma[{index}] = {value} is not a finite nonnegative number")
            }
            Self::ThresholdRange { t } => write!(f, "threshold t={t} outside (0, 1)"),
            Self::ZeroMaxIter => write!(f, "max_iter must be at least 1"),
            Self::ZeroStartDamp => write!(f, "start_damp must be at least 1"),
            Self::FixCountRange { num_min, num_max, m } => write!(
                f,
                "need 1 <= num_min <= num_max <= m, got num_min={num_min} num_max={num_max} m={m}"
            ),
            Self::ClampRange { eps } => write!(f, "clamp_eps={eps} outside (0, 1e-3)"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

impl BipParams {
    /// Standard schedule with a uniform strength vector: `t = 0.8`,
    /// `max_iter = 25`, `start_damp = 10`, and per-round fix counts of
    /// 0.1% to 1% of `m` (rounded up).
    pub fn uniform(gamma: f64, n: usize, m: usize) -> Self {
        Self::with_gamma_vec(vec![gamma; n], m)
    }

    /// Standard schedule around an explicit per-check strength vector.
    pub fn with_gamma_vec(gamma: Vec<f64>, m: usize) -> Self {
        let num_min = (math::ceil(NUM_MIN_FRACTION * m as f64) as usize).max(1);
        let num_max = (math::ceil(NUM_MAX_FRACTION * m as f64) as usize).max(num_min);
        Self {
            gamma,
            t: DEFAULT_THRESHOLD,
            max_iter: DEFAULT_MAX_ITER,
            start_damp: DEFAULT_START_DAMP,
            num_min,
            num_max: num_max.min(m.max(1)),
            clamp_eps: DEFAULT_CLAMP_EPS,
        }
    }

    pub fn validate(&self, graph: &FactorGraph) -> Result<(), ParamError> {
        if self.gamma.len() != graph.n() {
            return Err(ParamError::GammaLength {
                expected: graph.n(),
                found: self.gamma.len(),
            });
        }
        if let Some((index, &value)) = self
            .gamma
            .iter()
            .enumerate()
            .find(|&(_, &g)| !(g.is_finite() && g >= 0.0))
        {
            return Err(ParamError::InvalidGamma { index, value });
        }
        if !(self.t > 0.0 && self.t < 1.0) {
            return Err(ParamError::ThresholdRange { t: self.t });
        }
        if self.max_iter == 0 {
            return Err(ParamError::ZeroMaxIter);
        }
        if self.start_damp == 0 {
            return Err(ParamError::ZeroStartDamp);
        }
        if !(1 <= self.num_min && self.num_min <= self.num_max && self.num_max <= graph.m()) {
            return Err(ParamError::FixCountRange {
                num_min: self.num_min,
                num_max: self.num_max,
                m: graph.m(),
            });
        }
        if !(self.clamp_eps > 0.0 && self.clamp_eps < 1e-3) {
            return Err(ParamError::ClampRange { eps: self.clamp_eps });
        }
        Ok(())
    }
}

#[inline(always)]
fn clamp_bias(b: f64, eps: f64) -> f64 {
    let lim = 1.0 - eps;
    b.clamp(-lim, lim)
}

/// Constant message a check's source bit sends: `(-1)^{s_a} tanh(gamma_a)`,
/// clamped.
#[inline]
pub fn source_message(s_a: u8, gamma_a: f64, clamp_eps: f64) -> f64 {
    debug_assert!(gamma_a >= 0.0);
    let v = math::tanh(gamma_a);
    clamp_bias(if s_a & 1 == 1 { -v } else { v }, clamp_eps)
}

/// Log-domain bias combination: `tanh(sum_b atanh(S_b))`, skipping index
/// `skip` when it is in range. Equals the product form exactly.
fn combine_log_domain(incoming: &[f64], skip: usize) -> f64 {
    let mut acc = 0.0f64;
    for (k, &s) in incoming.iter().enumerate() {
        if k == skip {
            continue;
        }
        acc += math::atanh(s.clamp(-MAX_FINITE_BIAS, MAX_FINITE_BIAS));
    }
    math::tanh(acc)
}

#[inline]
fn product_form_gap(plus: f64, minus: f64, incoming: &[f64], skip: usize, guarded: bool) -> f64 {
    let denom = plus + minus;
    if guarded || !denom.is_finite() || denom == 0.0 {
        combine_log_domain(incoming, skip)
    } else {
        (plus - minus) / denom
    }
}

/// Combined bias of satisfactions arriving at a bit, excluding none:
/// `[prod(1+S) - prod(1-S)] / [prod(1+S) + prod(1-S)]`, clamped. An empty
/// input yields 0. Factors below 1e-30 in magnitude reroute the update
/// through the log domain.
pub fn bit_update(incoming: &[f64], clamp_eps: f64) -> f64 {
    let mut plus = 1.0f64;
    let mut minus = 1.0f64;
    let mut guarded = false;
    for &s in incoming {
        let p = 1.0 + s;
        let q = 1.0 - s;
        if p < GUARD_EPS || q < GUARD_EPS {
            guarded = true;
        }
        plus *= p;
        minus *= q;
    }
    clamp_bias(
        product_form_gap(plus, minus, incoming, usize::MAX, guarded),
        clamp_eps,
    )
}

/// Final bias of a bit from all its active incoming satisfactions; same
/// combination rule as [`bit_update`].
pub fn final_bias(incoming: &[f64], clamp_eps: f64) -> f64 {
    bit_update(incoming, clamp_eps)
}

/// Damped outgoing bias: the geometric mean of the likelihood ratios of
/// the new and previous messages, i.e. the atanh-domain arithmetic mean.
/// Inputs must already be clamped.
#[inline]
pub fn damp(b_new: f64, b_prev: f64, clamp_eps: f64) -> f64 {
    let r = math::sqrt(((1.0 - b_new) * (1.0 - b_prev)) / ((1.0 + b_new) * (1.0 + b_prev)));
    clamp_bias((1.0 - r) / (1.0 + r), clamp_eps)
}

/// Satisfaction a check sends to one neighbor: the product of its source
/// message and the biases from all other active neighbors.
pub fn check_update(incoming: &[f64], source_msg: f64) -> f64 {
    incoming.iter().fold(source_msg, |acc, &b| acc * b)
}

/// One decimation report.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundReport {
    /// Zero-based round index.
    pub round: usize,
    pub bits_fixed: usize,
    /// Largest final-bias magnitude over active bits.
    pub max_abs_bias: f64,
    /// Whether some active bit cleared the threshold `t`.
    pub converged: bool,
    /// Smallest final-bias magnitude among the bits fixed this round.
    pub min_fixed_abs_bias: f64,
}

/// Outcome of a quantization run.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationResult {
    /// Fixed information word, length `m`.
    pub w: Vec<u8>,
    /// Its codeword, length `n`.
    pub c: Vec<u8>,
    /// Weighted distortion against the original source word.
    pub distortion: f64,
    pub rounds: Vec<RoundReport>,
    pub iterations_total: usize,
    /// Smallest selection-time bias magnitude over the whole run. A zero
    /// here means some bit was fixed by the tie rule rather than by an
    /// actual preference.
    pub min_fixed_abs_bias: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantizeError {
    Params(ParamError),
    Graph(GraphError),
    Profile(DistortionError),
}

impl fmt::Display for QuantizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Params(e) => write!(f, "invalid parameters: {e}"),
            Self::Graph(e) => write!(f, "{e}"),
            Self::Profile(e) => write!(f, "invalid profile: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuantizeError {}

impl From<ParamError> for QuantizeError {
    fn from(e: ParamError) -> Self {
        Self::Params(e)
    }
}

impl From<GraphError> for QuantizeError {
    fn from(e: GraphError) -> Self {
        Self::Graph(e)
    }
}

/// Live part of the graph, compacted once per round so the iteration loop
/// runs branch-free over dense slot lists.
#[derive(Debug, Clone, Default)]
struct LiveTopology {
    /// Per live bit: range into the bit-side slot lists.
    bit_ptr: Vec<u32>,
    /// Bit-major slot of each live edge (satisfaction reads).
    bit_sat_slot: Vec<u32>,
    /// Check-major slot of the same edge (bias writes, damping reads).
    bit_bias_slot: Vec<u32>,
    /// Per live check: range into the check-side slot lists.
    check_ptr: Vec<u32>,
    /// Source message of each live check.
    check_src: Vec<f64>,
    /// Check-major slot of each live edge (bias reads).
    check_bias_slot: Vec<u32>,
    /// Bit-major slot of the same edge (satisfaction writes).
    check_sat_slot: Vec<u32>,
}

impl LiveTopology {
    fn rebuild(&mut self, graph: &FactorGraph, residual: &ResidualState, src: &[f64]) {
        self.bit_ptr.clear();
        self.bit_sat_slot.clear();
        self.bit_bias_slot.clear();
        self.bit_ptr.push(0);
        for i in 0..graph.m() {
            if !residual.bit_is_active(i) {
                continue;
            }
            let range = graph.bit_slot_range(i);
            for (k, &a) in graph.bit_neighbors(i).iter().enumerate() {
                if residual.check_is_active(a as usize) {
                    let bslot = range.start + k;
                    self.bit_sat_slot.push(bslot as u32);
                    self.bit_bias_slot.push(graph.check_slot_of_bit_slot(bslot) as u32);
                }
            }
            // Bits whose checks are all dead contribute no live range.
            if *self.bit_ptr.last().unwrap() as usize != self.bit_sat_slot.len() {
                self.bit_ptr.push(self.bit_sat_slot.len() as u32);
            }
        }

        self.check_ptr.clear();
        self.check_src.clear();
        self.check_bias_slot.clear();
        self.check_sat_slot.clear();
        self.check_ptr.push(0);
        for a in 0..graph.n() {
            if !residual.check_is_active(a) {
                continue;
            }
            let range = graph.check_slot_range(a);
            for (k, &i) in graph.check_neighbors(a).iter().enumerate() {
                if residual.bit_is_active(i as usize) {
                    let cslot = range.start + k;
                    self.check_bias_slot.push(cslot as u32);
                    self.check_sat_slot.push(graph.bit_slot_of_check_slot(cslot) as u32);
                }
            }
            debug_assert!(*self.check_ptr.last().unwrap() as usize != self.check_bias_slot.len());
            self.check_ptr.push(self.check_bias_slot.len() as u32);
            self.check_src.push(src[a]);
        }
    }
}

/// Per-edge message storage plus reusable scratch. Bias values double as
/// the previous-iteration store: each slot is read (for damping) just
/// before it is overwritten.
#[derive(Debug, Clone)]
pub struct MessageState {
    /// Check-to-bit satisfactions, indexed by bit-major edge slot.
    sat: Vec<f64>,
    /// Bit-to-check biases, indexed by check-major edge slot.
    bias: Vec<f64>,
    /// Per-check source message.
    src: Vec<f64>,
    live: LiveTopology,
    vals: Vec<f64>,
    prefix_plus: Vec<f64>,
    prefix_minus: Vec<f64>,
}

impl MessageState {
    /// Messages for the start of a run: every satisfaction carries its
    /// check's source message, outgoing biases start at zero.
    pub fn init(graph: &FactorGraph, residual: &ResidualState, params: &BipParams) -> Self {
        let edges = graph.num_edges();
        let mut state = Self {
            sat: vec![0.0; edges],
            bias: vec![0.0; edges],
            src: vec![0.0; graph.n()],
            live: LiveTopology::default(),
            vals: Vec::new(),
            prefix_plus: Vec::new(),
            prefix_minus: Vec::new(),
        };
        state.refresh_sources(graph, residual, params);
        for i in 0..graph.m() {
            let range = graph.bit_slot_range(i);
            for (k, &a) in graph.bit_neighbors(i).iter().enumerate() {
                state.sat[range.start + k] = state.src[a as usize];
            }
        }
        state
    }

    fn refresh_sources(&mut self, graph: &FactorGraph, residual: &ResidualState, params: &BipParams) {
        let s = residual.residual_source();
        for a in 0..graph.n() {
            if residual.check_is_active(a) {
                self.src[a] = source_message(s[a], params.gamma[a], params.clamp_eps);
            }
        }
    }

    /// Satisfaction currently stored on the edge from check `a` to bit `i`.
    pub fn satisfaction(&self, graph: &FactorGraph, a: usize, i: usize) -> Option<f64> {
        let range = graph.bit_slot_range(i);
        graph
            .bit_neighbors(i)
            .iter()
            .position(|&b| b as usize == a)
            .map(|k| self.sat[range.start + k])
    }

    fn bit_phase(&mut self, eps: f64, damping: bool) {
        let Self { sat, bias, live, vals, prefix_plus, prefix_minus, .. } = self;
        let max_degree = live
            .bit_ptr
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
            .max()
            .unwrap_or(0);
        vals.resize(max_degree, 0.0);
        prefix_plus.resize(max_degree + 1, 0.0);
        prefix_minus.resize(max_degree + 1, 0.0);

        for bi in 0..live.bit_ptr.len() - 1 {
            let lo = live.bit_ptr[bi] as usize;
            let hi = live.bit_ptr[bi + 1] as usize;
            let d = hi - lo;

            prefix_plus[0] = 1.0;
            prefix_minus[0] = 1.0;
            let mut guarded = false;
            for k in 0..d {
                let s = sat[live.bit_sat_slot[lo + k] as usize];
                vals[k] = s;
                let p = 1.0 + s;
                let q = 1.0 - s;
                if p < GUARD_EPS || q < GUARD_EPS {
                    guarded = true;
                }
                prefix_plus[k + 1] = prefix_plus[k] * p;
                prefix_minus[k + 1] = prefix_minus[k] * q;
            }

            let mut suffix_plus = 1.0f64;
            let mut suffix_minus = 1.0f64;
            for k in (0..d).rev() {
                let plus = prefix_plus[k] * suffix_plus;
                let minus = prefix_minus[k] * suffix_minus;
                let bhat = clamp_bias(
                    product_form_gap(plus, minus, &vals[..d], k, guarded),
                    eps,
                );
                let cslot = live.bit_bias_slot[lo + k] as usize;
                let out = if damping { damp(bhat, bias[cslot], eps) } else { bhat };
                bias[cslot] = out;
                suffix_plus *= 1.0 + vals[k];
                suffix_minus *= 1.0 - vals[k];
            }
        }
    }

    fn check_phase(&mut self) {
        let Self { sat, bias, live, vals, prefix_plus, .. } = self;
        let max_degree = live
            .check_ptr
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
            .max()
            .unwrap_or(0);
        vals.resize(max_degree, 0.0);
        prefix_plus.resize(max_degree + 1, 0.0);

        for ci in 0..live.check_ptr.len() - 1 {
            let lo = live.check_ptr[ci] as usize;
            let hi = live.check_ptr[ci + 1] as usize;
            let d = hi - lo;

            prefix_plus[0] = 1.0;
            for k in 0..d {
                let b = bias[live.check_bias_slot[lo + k] as usize];
                vals[k] = b;
                prefix_plus[k + 1] = prefix_plus[k] * b;
            }
            let src = live.check_src[ci];
            let mut suffix = 1.0f64;
            for k in (0..d).rev() {
                let out = src * prefix_plus[k] * suffix;
                sat[live.check_sat_slot[lo + k] as usize] = out;
                suffix *= vals[k];
            }
        }
    }

    /// Final bias of every bit from the current satisfactions; inactive
    /// bits and bits with no live checks read 0.
    pub fn final_biases(
        &mut self,
        graph: &FactorGraph,
        residual: &ResidualState,
        clamp_eps: f64,
    ) -> Vec<f64> {
        let mut out = vec![0.0f64; graph.m()];
        for i in 0..graph.m() {
            if !residual.bit_is_active(i) {
                continue;
            }
            self.vals.clear();
            let range = graph.bit_slot_range(i);
            for (k, &a) in graph.bit_neighbors(i).iter().enumerate() {
                if residual.check_is_active(a as usize) {
                    self.vals.push(self.sat[range.start + k]);
                }
            }
            out[i] = bit_update(&self.vals, clamp_eps);
        }
        out
    }
}

/// Run `params.max_iter` message-passing iterations over the active part
/// of the graph, refreshing source messages from the residual source
/// first. Damping applies from iteration `start_damp` onward.
pub fn propagate(
    graph: &FactorGraph,
    residual: &ResidualState,
    msgs: &mut MessageState,
    params: &BipParams,
) {
    msgs.refresh_sources(graph, residual, params);
    let MessageState { live, src, .. } = msgs;
    live.rebuild(graph, residual, src);
    for iteration in 1..=params.max_iter {
        let damping = iteration >= params.start_damp;
        msgs.bit_phase(params.clamp_eps, damping);
        msgs.check_phase();
    }
}

/// Pick the bits to fix this round from `(bit, final_bias)` pairs over the
/// active bits: sort by bias magnitude (descending, ties to the lower
/// index), count how many clear the threshold `t`, clamp that count into
/// `[num_min, num_max]` and by the number of candidates, and fix the top
/// of the order. A positive bias fixes the bit to 0, anything else to 1.
pub fn select_fixes(biases: &[(usize, f64)], params: &BipParams) -> Vec<(usize, u8)> {
    let mut order: Vec<(usize, f64)> = biases.to_vec();
    order.sort_by(|a, b| {
        math::abs(b.1)
            .partial_cmp(&math::abs(a.1))
            .unwrap()
            .then(a.0.cmp(&b.0))
    });
    let qualified = order
        .iter()
        .take_while(|&&(_, b)| math::abs(b) >= params.t)
        .count();
    let count = qualified
        .max(params.num_min)
        .min(params.num_max)
        .min(order.len());
    order[..count]
        .iter()
        .map(|&(i, b)| (i, if b > 0.0 { 0u8 } else { 1u8 }))
        .collect()
}

/// One round: propagate, read final biases, and select fixes. The caller
/// applies the fixes through [`ResidualState::decimate`]. Requires at
/// least one active bit.
pub fn run_round(
    graph: &FactorGraph,
    residual: &ResidualState,
    msgs: &mut MessageState,
    params: &BipParams,
    round_index: usize,
) -> (RoundReport, Vec<(usize, u8)>) {
    propagate(graph, residual, msgs, params);
    let biases = msgs.final_biases(graph, residual, params.clamp_eps);
    let active: Vec<(usize, f64)> = (0..graph.m())
        .filter(|&i| residual.bit_is_active(i))
        .map(|i| (i, biases[i]))
        .collect();
    debug_assert!(!active.is_empty());
    let fixes = select_fixes(&active, params);
    let max_abs_bias = active
        .iter()
        .fold(0.0f64, |acc, &(_, b)| acc.max(math::abs(b)));
    let min_fixed_abs_bias = fixes
        .iter()
        .fold(f64::INFINITY, |acc, &(i, _)| acc.min(math::abs(biases[i])));
    let report = RoundReport {
        round: round_index,
        bits_fixed: fixes.len(),
        max_abs_bias,
        converged: max_abs_bias > params.t,
        min_fixed_abs_bias,
    };
    (report, fixes)
}

fn validate_run(
    graph: &FactorGraph,
    params: &BipParams,
    profile: &Profile,
) -> Result<(), QuantizeError> {
    params.validate(graph)?;
    if profile.len() != graph.n() {
        return Err(QuantizeError::Profile(DistortionError::LengthMismatch {
            expected: graph.n(),
            found: profile.len(),
        }));
    }
    Ok(())
}

fn finish(
    graph: &FactorGraph,
    s: &[u8],
    profile: &Profile,
    w: Vec<u8>,
    rounds: Vec<RoundReport>,
    iterations_total: usize,
    min_fixed_abs_bias: f64,
) -> QuantizationResult {
    let c = graph.encode(&w).expect("w has length m");
    let distortion = weighted_distortion(s, &c, profile).expect("validated lengths");
    QuantizationResult {
        w,
        c,
        distortion,
        rounds,
        iterations_total,
        min_fixed_abs_bias,
    }
}

/// Quantize `s` onto the code: run rounds of message passing and
/// decimation until every information bit is fixed. Distortion is
/// measured against the original `s` under `profile`.
pub fn quantize(
    graph: &FactorGraph,
    s: &[u8],
    params: &BipParams,
    profile: &Profile,
) -> Result<QuantizationResult, QuantizeError> {
    validate_run(graph, params, profile)?;
    let mut residual = ResidualState::new(graph, s)?;
    let mut msgs = MessageState::init(graph, &residual, params);

    let mut w = vec![0u8; graph.m()];
    let mut rounds = Vec::new();
    let mut iterations_total = 0usize;
    let mut min_fixed = f64::INFINITY;
    while residual.active_bit_count() > 0 {
        let (report, fixes) = run_round(graph, &residual, &mut msgs, params, rounds.len());
        iterations_total += params.max_iter;
        for &(i, v) in &fixes {
            w[i] = v;
        }
        min_fixed = min_fixed.min(report.min_fixed_abs_bias);
        residual
            .decimate(graph, &fixes)
            .expect("fixes come from the active set");
        rounds.push(report);
    }
    Ok(finish(graph, s, profile, w, rounds, iterations_total, min_fixed))
}

/// Single-round mode: one block of `max_iter` iterations, then every bit
/// is fixed at once by the sign of its final bias, ignoring the threshold.
pub fn quantize_single_round(
    graph: &FactorGraph,
    s: &[u8],
    params: &BipParams,
    profile: &Profile,
) -> Result<QuantizationResult, QuantizeError> {
    validate_run(graph, params, profile)?;
    let residual = ResidualState::new(graph, s)?;
    let mut msgs = MessageState::init(graph, &residual, params);
    propagate(graph, &residual, &mut msgs, params);
    let biases = msgs.final_biases(graph, &residual, params.clamp_eps);

    let w: Vec<u8> = biases.iter().map(|&b| if b > 0.0 { 0u8 } else { 1u8 }).collect();
    let max_abs_bias = biases.iter().fold(0.0f64, |acc, &b| acc.max(math::abs(b)));
    let min_fixed = biases
        .iter()
        .fold(f64::INFINITY, |acc, &b| acc.min(math::abs(b)));
    let report = RoundReport {
        round: 0,
        bits_fixed: graph.m(),
        max_abs_bias,
        converged: max_abs_bias > params.t,
        min_fixed_abs_bias: min_fixed,
    };
    Ok(finish(
        graph,
        s,
        profile,
        w,
        vec![report],
        params.max_iter,
        min_fixed,
    ))
}
