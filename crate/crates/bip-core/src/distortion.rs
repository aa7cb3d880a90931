//! Distortion measures, weight profiles, binary entropy utilities, and
//! flip-probability targets for weighted quantization.
//!
//! A [`Profile`] assigns a nonnegative weight to each source position; the
//! distortion between a source word and a codeword is the weighted mean of
//! their disagreement indicators. The uniform profile recovers the Hamming
//! fraction. For a rate `R` the best achievable per-position flip
//! probabilities follow a logistic curve in the weights, parameterized by a
//! single scalar found by bisection on a mean-entropy constraint.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Per-position distortion weights. Weights are finite and nonnegative;
/// zero-weight positions are free to disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistortionError {
    LengthMismatch { expected: usize, found: usize },
    InvalidWeight { value: f64, line: usize },
    EmptyProfile,
    MalformedLine { line: usize },
    ArgumentOutOfRange { value: f64 },
    /// No scale parameter satisfies the entropy constraint for this
    /// profile/rate combination.
    RateUnachievable { rate: f64 },
}

impl fmt::Display for DistortionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(f, "length {found} does not match profile length {expected}")
            }
            Self::InvalidWeight { value, line } => {
                write!(f, "line {line}: weight {value} is not a finite nonnegative number")
            }
            Self::EmptyProfile => write!(f, "profile has no weights"),
            Self::MalformedLine { line } => write!(f, "line {line}: expected a decimal weight"),
            Self::ArgumentOutOfRange { value } => write!(f, "argument {value} out of range"),
            Self::RateUnachievable { rate } => {
                write!(f, "rate {rate} not achievable for this profile")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DistortionError {}

impl Profile {
    /// Build a profile from explicit weights.
    pub fn new(weights: Vec<f64>) -> Result<Self, DistortionError> {
        if weights.is_empty() {
            return Err(DistortionError::EmptyProfile);
        }
        for (idx, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(DistortionError::InvalidWeight { value: w, line: idx + 1 });
            }
        }
        Ok(Self { weights })
    }

    /// All-ones profile of length `n`.
    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().fold(0.0f64, |acc, &w| acc.max(w))
    }

    /// Parse the text form: one decimal weight per line, blank lines and
    /// `#` comments ignored.
    pub fn parse(text: &str) -> Result<Self, DistortionError> {
        let mut weights = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let w: f64 = content
                .parse()
                .map_err(|_| DistortionError::MalformedLine { line })?;
            if !(w.is_finite() && w >= 0.0) {
                return Err(DistortionError::InvalidWeight { value: w, line });
            }
            weights.push(w);
        }
        Self::new(weights)
    }

    /// Render the text form parsed by [`Profile::parse`].
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for &w in &self.weights {
            let _ = writeln!(out, "{w}");
        }
        out
    }
}

/// Weight profile decreasing linearly from almost 2 to exactly 0:
/// position `i` (1-based) carries weight `2(n-i)/n`.
pub fn linear_profile(n: usize) -> Profile {
    let weights = (1..=n).map(|i| 2.0 * (n - i) as f64 / n as f64).collect();
    Profile { weights }
}

/// Weighted mean disagreement between `s` and `c`:
/// `(1/n) * sum_i weight_i * |s_i - c_i|`.
pub fn weighted_distortion(s: &[u8], c: &[u8], profile: &Profile) -> Result<f64, DistortionError> {
    if s.len() != c.len() || s.len() != profile.len() {
        return Err(DistortionError::LengthMismatch {
            expected: profile.len(),
            found: if s.len() != profile.len() { s.len() } else { c.len() },
        });
    }
    let mut acc = 0.0f64;
    for ((&a, &b), &w) in s.iter().zip(c).zip(profile.weights()) {
        if a != b {
            acc += w;
        }
    }
    Ok(acc / s.len() as f64)
}

/// Binary entropy in bits; `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> Result<f64, DistortionError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(DistortionError::ArgumentOutOfRange { value: p });
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * math::log2(p) - (1.0 - p) * math::log2(1.0 - p))
}

/// Inverse of [`binary_entropy`] on `[0, 1/2]`, by bisection to 1e-12.
pub fn inverse_binary_entropy(h: f64) -> Result<f64, DistortionError> {
    if !(0.0..=1.0).contains(&h) {
        return Err(DistortionError::ArgumentOutOfRange { value: h });
    }
    // The entropy saturates to 1.0 in f64 well before p reaches 1/2, so
    // bisection cannot pin the upper endpoint on its own.
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid).unwrap() < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Distortion at which the rate-distortion bound `R(D) = 1 - H(D)` meets
/// the given rate.
pub fn shannon_distortion(rate: f64) -> Result<f64, DistortionError> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(DistortionError::ArgumentOutOfRange { value: rate });
    }
    inverse_binary_entropy(1.0 - rate)
}

#[inline]
fn logistic_flip(weight: f64, zeta: f64) -> f64 {
    let e = math::exp(-zeta * weight);
    e / (1.0 + e)
}

/// Optimal per-position flip probabilities for the profile at scale `zeta`:
/// `p_i = e^{-zeta * w_i} / (1 + e^{-zeta * w_i})` with weights scaled to a
/// unit maximum. Values lie in `(0, 1/2]`; zero-weight positions map to 1/2.
///
/// The unit-maximum scaling makes `zeta` comparable across profiles that
/// differ only by a constant factor; the probabilities themselves are what
/// [`solve_zeta`] pins down, and they are scale-invariant.
pub fn target_flip_probs(profile: &Profile, zeta: f64) -> Vec<f64> {
    let max = profile.max_weight();
    let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
    profile
        .weights()
        .iter()
        .map(|&w| logistic_flip(w * scale, zeta))
        .collect()
}

fn mean_flip_entropy(profile: &Profile, zeta: f64) -> f64 {
    let probs = target_flip_probs(profile, zeta);
    let sum: f64 = probs
        .iter()
        .map(|&p| binary_entropy(p).unwrap())
        .sum();
    sum / profile.len() as f64
}

/// Scale parameter at which the mean entropy of [`target_flip_probs`]
/// equals `1 - rate`, by bisection to 1e-9. Errors when the rate is outside
/// `(0, 1)` or not achievable for the profile (the mean entropy is floored
/// by the fraction of zero-weight positions).
pub fn solve_zeta(profile: &Profile, rate: f64) -> Result<f64, DistortionError> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(DistortionError::ArgumentOutOfRange { value: rate });
    }
    let target = 1.0 - rate;
    const ZETA_CAP: f64 = 1e4;
    if mean_flip_entropy(profile, ZETA_CAP) > target + 1e-9 {
        return Err(DistortionError::RateUnachievable { rate });
    }
    let (mut lo, mut hi) = (0.0f64, ZETA_CAP);
    // Mean entropy decreases in zeta; keep the target bracketed.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mean_flip_entropy(profile, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distortion_zero_on_equal_words() {
        let p = Profile::uniform(5);
        assert_eq!(weighted_distortion(&[1, 0, 1, 0, 1], &[1, 0, 1, 0, 1], &p).unwrap(), 0.0);
    }

    #[test]
    fn distortion_uniform_is_hamming_fraction() {
        let p = Profile::uniform(4);
        let d = weighted_distortion(&[0, 0, 0, 0], &[1, 0, 1, 0], &p).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn distortion_weighted_example() {
        let p = Profile::new(vec![1.0, 1.0, 0.5, 0.0]).unwrap();
        let d = weighted_distortion(&[0, 0, 0, 0], &[1, 1, 1, 1], &p).unwrap();
        assert!((d - 0.625).abs() < 1e-15);
    }

    #[test]
    fn distortion_rejects_length_mismatch() {
        let p = Profile::uniform(3);
        assert!(weighted_distortion(&[0, 0], &[0, 0, 0], &p).is_err());
    }

    #[test]
    fn entropy_endpoints_and_midpoint() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.1).is_err());
    }

    #[test]
    fn inverse_entropy_values() {
        assert!((inverse_binary_entropy(1.0).unwrap() - 0.5).abs() < 1e-10);
        // H(p) = 0.5 at p = 0.110027864438...
        assert!((inverse_binary_entropy(0.5).unwrap() - 0.110027864438).abs() < 1e-9);
        assert!(inverse_binary_entropy(0.0).unwrap() < 1e-10);
    }

    #[test]
    fn shannon_distortion_values() {
        assert!(shannon_distortion(1.0).unwrap() < 1e-10);
        assert!((shannon_distortion(0.5).unwrap() - 0.110027864438).abs() < 1e-9);
        assert!((shannon_distortion(0.37).unwrap() - 0.158205829694).abs() < 1e-9);
        assert!(shannon_distortion(0.0).is_err());
    }

    #[test]
    fn linear_profile_values() {
        assert_eq!(linear_profile(2).weights(), &[1.0, 0.0]);
        assert_eq!(linear_profile(4).weights(), &[1.5, 1.0, 0.5, 0.0]);
        let p = linear_profile(1000);
        assert_eq!(*p.weights().last().unwrap(), 0.0);
    }

    #[test]
    fn flip_prob_values() {
        let p = Profile::new(vec![0.0, 1.0]).unwrap();
        let probs = target_flip_probs(&p, 4.544);
        assert_eq!(probs[0], 0.5);
        assert!((probs[1] - 0.0105189731).abs() < 1e-9);
        // Large scale drives positive-weight probabilities to zero.
        let probs = target_flip_probs(&p, 500.0);
        assert_eq!(probs[0], 0.5);
        assert!(probs[1] < 1e-200);
    }

    #[test]
    fn solve_zeta_uniform_rate_half() {
        let p = Profile::uniform(100);
        let zeta = solve_zeta(&p, 0.5).unwrap();
        assert!((zeta - 2.0904565071).abs() < 1e-6, "zeta = {zeta}");
        let probs = target_flip_probs(&p, zeta);
        assert!((probs[0] - 0.110027864438).abs() < 1e-8);
    }

    #[test]
    fn solve_zeta_meets_entropy_constraint() {
        for rate in [0.2, 0.5, 0.8] {
            let p = linear_profile(500);
            let zeta = solve_zeta(&p, rate).unwrap();
            assert!((mean_flip_entropy(&p, zeta) - (1.0 - rate)).abs() < 1e-8);
        }
    }

    #[test]
    fn solve_zeta_rejects_unachievable_rate() {
        // Half the positions have zero weight, flooring the mean entropy
        // at 1/2, so rates above 1/2 are out of reach.
        let p = Profile::new(vec![0.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            solve_zeta(&p, 0.7),
            Err(DistortionError::RateUnachievable { .. })
        ));
        assert!(solve_zeta(&p, 0.3).is_ok());
        assert!(solve_zeta(&Profile::uniform(4), 1.0).is_err());
    }

    #[test]
    fn profile_parse_and_serialize() {
        let p = Profile::parse("1.5\n# c\n1.0\n\n0.5\n0\n").unwrap();
        assert_eq!(p.weights(), &[1.5, 1.0, 0.5, 0.0]);
        let back = Profile::parse(&p.serialize()).unwrap();
        assert_eq!(back, p);
        assert!(Profile::parse("1.0\n-2\n").is_err());
        assert!(Profile::parse("abc\n").is_err());
        assert!(Profile::parse("# only comments\n").is_err());
    }
}
