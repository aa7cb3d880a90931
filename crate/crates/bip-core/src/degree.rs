//! Edge-perspective degree distributions and node-level degree assignments.
//!
//! A distribution is a list of `(degree, edge_fraction)` terms: the fraction
//! of all edges attached to nodes of that degree. The polynomial view
//! (coefficient of `x^{d-1}` is the fraction on degree `d`) maps one-to-one
//! onto the term list. Realizing a distribution on a finite node set goes
//! through [`node_degree_assignment`], which converts edge fractions into
//! integer node counts and can reconcile the resulting socket total against
//! a prescribed one.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Sum-to-one tolerance accepted when constructing a distribution; inputs
/// inside the tolerance are renormalized exactly.
pub const SUM_TOLERANCE: f64 = 1e-6;

/// An edge-perspective degree distribution.
///
/// Terms are stored sorted by degree. Fractions are strictly positive,
/// degrees distinct and at least 1, and the fractions sum to 1 (inputs
/// within [`SUM_TOLERANCE`] of 1 are renormalized on construction).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDegreeDistribution {
    terms: Vec<(u32, f64)>,
}

/// Integer node counts per degree realizing a distribution on a finite
/// node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDegreeAssignment {
    counts: Vec<(u32, usize)>,
    total_nodes: usize,
    total_edge_sockets: usize,
}

/// Errors from distribution construction and parsing. `line` is 1-based;
/// line 0 marks values constructed programmatically rather than parsed.
#[derive(Debug, Clone, PartialEq)]
pub enum DistributionError {
    NoTerms,
    MalformedLine { line: usize },
    ZeroDegree { line: usize },
    DuplicateDegree { degree: u32, line: usize },
    FractionOutOfRange { value: f64, line: usize },
    SumMismatch { sum: f64 },
}

impl fmt::Display for DistributionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoTerms => write!(f, "distribution has no terms"),
            Self::MalformedLine { line } => {
                write!(f, "line {line}: expected \"degree fraction\"")
            }
            Self::ZeroDegree { line } => write!(f, "line {line}: degree must be at least 1"),
            Self::DuplicateDegree { degree, line } => {
                write!(f, "line {line}: duplicate degree {degree}")
            }
            Self::FractionOutOfRange { value, line } => {
                write!(f, "line {line}: edge fraction {value} outside (0, 1]")
            }
            Self::SumMismatch { sum } => {
                write!(f, "edge fractions sum to {sum}, expected 1")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DistributionError {}

/// Errors from realizing a distribution on a finite node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssignmentError {
    ZeroNodes,
    /// The requested socket total cannot be reached: it is below
    /// `total_nodes * min_degree`.
    InfeasibleSocketTarget { target: usize, minimum: usize },
}

impl fmt::Display for AssignmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ZeroNodes => write!(f, "assignment needs at least one node"),
            Self::InfeasibleSocketTarget { target, minimum } => write!(
                f,
                "socket target {target} infeasible: minimum reachable is {minimum}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AssignmentError {}

impl EdgeDegreeDistribution {
    /// Build a distribution from `(degree, edge_fraction)` terms.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (u32, f64)>,
    ) -> Result<Self, DistributionError> {
        let mut terms: Vec<(u32, f64)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Err(DistributionError::NoTerms);
        }
        terms.sort_by_key(|&(d, _)| d);
        for (k, &(degree, fraction)) in terms.iter().enumerate() {
            if degree == 0 {
                return Err(DistributionError::ZeroDegree { line: 0 });
            }
            if k > 0 && terms[k - 1].0 == degree {
                return Err(DistributionError::DuplicateDegree { degree, line: 0 });
            }
            if !(fraction > 0.0 && fraction <= 1.0) {
                return Err(DistributionError::FractionOutOfRange {
                    value: fraction,
                    line: 0,
                });
            }
        }
        let sum: f64 = terms.iter().map(|&(_, f)| f).sum();
        if math::abs(sum - 1.0) > SUM_TOLERANCE {
            return Err(DistributionError::SumMismatch { sum });
        }
        // Renormalize real deviations but leave rounding-level ones alone,
        // so parse(serialize(d)) reproduces the stored terms exactly.
        if math::abs(sum - 1.0) > 1e-12 {
            for term in &mut terms {
                term.1 /= sum;
            }
        }
        Ok(Self { terms })
    }

    /// Parse the text form: one "degree fraction" pair per line, blank
    /// lines and `#` comment lines ignored. Errors name the offending
    /// 1-based line.
    pub fn parse(text: &str) -> Result<Self, DistributionError> {
        let mut terms: Vec<(u32, f64, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let (Some(deg_str), Some(frac_str), None) =
                (fields.next(), fields.next(), fields.next())
            else {
                return Err(DistributionError::MalformedLine { line });
            };
            let degree: u32 = deg_str
                .parse()
                .map_err(|_| DistributionError::MalformedLine { line })?;
            let fraction: f64 = frac_str
                .parse()
                .map_err(|_| DistributionError::MalformedLine { line })?;
            if degree == 0 {
                return Err(DistributionError::ZeroDegree { line });
            }
            if !(fraction > 0.0 && fraction <= 1.0) {
                return Err(DistributionError::FractionOutOfRange {
                    value: fraction,
                    line,
                });
            }
            if let Some(&(dup, _, _)) = terms.iter().find(|&&(d, _, _)| d == degree) {
                debug_assert_eq!(dup, degree);
                return Err(DistributionError::DuplicateDegree { degree, line });
            }
            terms.push((degree, fraction, line));
        }
        Self::from_terms(terms.into_iter().map(|(d, f, _)| (d, f)))
    }

    /// Render the text form parsed by [`EdgeDegreeDistribution::parse`].
    /// Fractions use the shortest round-trip float representation, so
    /// parse(serialize(d)) reproduces the terms exactly.
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        for &(degree, fraction) in &self.terms {
            let _ = writeln!(out, "{degree} {fraction}");
        }
        out
    }

    /// Terms as `(degree, edge_fraction)`, sorted by degree.
    pub fn terms(&self) -> &[(u32, f64)] {
        &self.terms
    }

    /// Largest degree carrying edges.
    pub fn max_degree(&self) -> u32 {
        self.terms.last().map(|&(d, _)| d).unwrap_or(0)
    }

    /// Smallest degree carrying edges.
    pub fn min_degree(&self) -> u32 {
        self.terms.first().map(|&(d, _)| d).unwrap_or(0)
    }

    /// Average node degree, `1 / sum_d(fraction_d / d)`.
    pub fn average_degree(&self) -> f64 {
        let inv: f64 = self
            .terms
            .iter()
            .map(|&(d, f)| f / d as f64)
            .sum();
        1.0 / inv
    }
}

/// Design rate implied by a (check, info) distribution pair. Balancing the
/// edge count `n * avg_check = m * avg_info` gives
/// `R = m / n = avg_check / avg_info`.
pub fn design_rate(check_dist: &EdgeDegreeDistribution, info_dist: &EdgeDegreeDistribution) -> f64 {
    check_dist.average_degree() / info_dist.average_degree()
}

impl NodeDegreeAssignment {
    /// Counts as `(degree, node_count)`, sorted by degree; zero counts are
    /// dropped.
    pub fn counts(&self) -> &[(u32, usize)] {
        &self.counts
    }

    pub fn total_nodes(&self) -> usize {
        self.total_nodes
    }

    pub fn total_edge_sockets(&self) -> usize {
        self.total_edge_sockets
    }

    /// One degree per node, ascending by degree. Length equals
    /// `total_nodes()`.
    pub fn node_degrees(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.total_nodes);
        for &(degree, count) in &self.counts {
            out.extend(core::iter::repeat(degree).take(count));
        }
        out
    }
}

/// Realize `dist` on `total_nodes` nodes.
///
/// Node fractions are proportional to `edge_fraction_d / d` and rounded to
/// integers by the largest-remainder rule (remainder ties go to the smaller
/// degree). When `target_sockets` is given, nodes of the currently highest
/// degree gain or lose one socket at a time until the socket total matches;
/// the reachable minimum is `total_nodes * min_degree`.
pub fn node_degree_assignment(
    dist: &EdgeDegreeDistribution,
    total_nodes: usize,
    target_sockets: Option<usize>,
) -> Result<NodeDegreeAssignment, AssignmentError> {
    if total_nodes == 0 {
        return Err(AssignmentError::ZeroNodes);
    }
    let weights: Vec<(u32, f64)> = dist
        .terms()
        .iter()
        .map(|&(d, f)| (d, f / d as f64))
        .collect();
    let weight_sum: f64 = weights.iter().map(|&(_, w)| w).sum();

    // Largest-remainder rounding of the ideal node counts.
    let mut counts: Vec<(u32, usize)> = Vec::with_capacity(weights.len());
    let mut remainders: Vec<(f64, u32, usize)> = Vec::with_capacity(weights.len());
    let mut assigned = 0usize;
    for (slot, &(degree, weight)) in weights.iter().enumerate() {
        let ideal = total_nodes as f64 * weight / weight_sum;
        let base = math::floor(ideal) as usize;
        counts.push((degree, base));
        remainders.push((ideal - base as f64, degree, slot));
        assigned += base;
    }
    let mut leftover = total_nodes - assigned;
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, _, slot) in remainders.iter() {
        if leftover == 0 {
            break;
        }
        counts[slot].1 += 1;
        leftover -= 1;
    }
    debug_assert_eq!(counts.iter().map(|&(_, c)| c).sum::<usize>(), total_nodes);

    let mut sockets: usize = counts.iter().map(|&(d, c)| d as usize * c).sum();

    if let Some(target) = target_sockets {
        let floor = dist.min_degree();
        let minimum = total_nodes * floor as usize;
        if target < minimum {
            return Err(AssignmentError::InfeasibleSocketTarget { target, minimum });
        }
        // Hand out (or take back) one socket per node, highest-degree
        // nodes first, sweeping again if one pass is not enough. Spreading
        // the adjustment keeps any single node's degree change minimal.
        let mut map: alloc::collections::BTreeMap<u32, usize> = counts
            .iter()
            .filter(|&&(_, c)| c > 0)
            .map(|&(d, c)| (d, c))
            .collect();
        while sockets != target {
            let snapshot: Vec<(u32, usize)> = map.iter().rev().map(|(&d, &c)| (d, c)).collect();
            let before = sockets;
            for (d, c) in snapshot {
                if sockets == target {
                    break;
                }
                let (next, step) = if sockets < target {
                    (d + 1, target - sockets)
                } else {
                    if d <= floor {
                        continue;
                    }
                    (d - 1, sockets - target)
                };
                let moved = c.min(step);
                *map.get_mut(&d).unwrap() -= moved;
                if map[&d] == 0 {
                    map.remove(&d);
                }
                *map.entry(next).or_insert(0) += moved;
                if next > d {
                    sockets += moved;
                } else {
                    sockets -= moved;
                }
            }
            debug_assert_ne!(before, sockets, "reconciliation sweep made no progress");
        }
        counts = map.into_iter().collect();
    }

    counts.retain(|&(_, c)| c > 0);
    Ok(NodeDegreeAssignment {
        counts,
        total_nodes,
        total_edge_sockets: sockets,
    })
}

/// Degree assignments for both sides of a bipartite graph, sharing one
/// socket count.
///
/// The check side is pinned to its own ideal edge count
/// `round(n * avg_degree)` (largest-remainder rounding alone can drift by
/// up to the maximum degree, which the concentrated info side may not be
/// able to follow). The info side then reconciles to that count and fails
/// if its own floor `m * min_degree` lies above it.
pub fn reconciled_assignments(
    check_dist: &EdgeDegreeDistribution,
    n: usize,
    info_dist: &EdgeDegreeDistribution,
    m: usize,
) -> Result<(NodeDegreeAssignment, NodeDegreeAssignment), AssignmentError> {
    let ideal = math::round(n as f64 * check_dist.average_degree()) as usize;
    let checks = node_degree_assignment(check_dist, n, Some(ideal))?;
    let bits = node_degree_assignment(info_dist, m, Some(checks.total_edge_sockets()))?;
    Ok((checks, bits))
}
