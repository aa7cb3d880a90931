//! Binary quantization onto LDGM codewords via bias propagation.
//!
//! Given a Bernoulli(1/2) source word `s` of length `n` and a sparse
//! generator matrix `G` (represented as a bipartite factor graph of `n`
//! check nodes and `m` information bits), the quantizer searches for an
//! information word `w` whose codeword `c = Gw` is close to `s` under a
//! weighted per-position distortion. The search runs belief propagation
//! in bias form over the factor graph, repeatedly fixing the most biased
//! information bits and shrinking the residual problem until every bit
//! is decided.
//!
//! The crate is split along the natural seams of that pipeline:
//!
//! - [`degree`]: edge-perspective degree distributions and their
//!   realization as concrete per-node degree counts.
//! - [`graph`]: factor-graph construction (configuration model), GF(2)
//!   encoding, decimation bookkeeping, and the text graph format.
//! - [`engine`]: the message-passing quantizer itself.
//! - [`distortion`]: distortion measures, profiles, binary entropy, and
//!   flip-probability targets for weighted quantization.
//! - [`tuner`]: iterative calibration of per-check strengths for
//!   nonuniform profiles, plus cubic compression of the tuned values.
//! - [`oracle`]: brute-force ground truth for small instances.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default
//! `std` feature and enable `libm` for freestanding builds. All
//! randomized operations take explicit 64-bit seeds and are bit-exactly
//! reproducible.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("bip-core requires either the `std` or the `libm` feature");

mod math;

pub mod degree;
pub mod distortion;
pub mod engine;
pub mod graph;
pub mod oracle;
pub mod tuner;

pub use degree::{design_rate, EdgeDegreeDistribution, NodeDegreeAssignment};
pub use distortion::{
    binary_entropy, inverse_binary_entropy, linear_profile, shannon_distortion, solve_zeta,
    target_flip_probs, weighted_distortion, Profile,
};
pub use engine::{
    quantize, quantize_single_round, BipParams, MessageState, QuantizationResult, RoundReport,
};
pub use graph::{random_source_word, FactorGraph, ResidualState};
pub use oracle::{exact_distribution, exhaustive_quantize, ExactDistribution};
pub use tuner::{fit_cubic, run_tuning, GammaModel, TunerConfig, TuningResult};
