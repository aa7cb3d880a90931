//! LDGM factor graphs: construction, GF(2) encoding, decimation state, and
//! the text serialization format.
//!
//! A graph has `n` check nodes (each owning one source-bit slot) and `m`
//! information bits. Check `a` is adjacent to the information bits whose
//! generator-matrix column has a 1 in row `a`; a check's degree counts only
//! information bits, never the source bit. Adjacency is stored in CSR form
//! from both sides along with slot cross-maps, so message-passing code can
//! read one direction contiguously and scatter into the other.
//!
//! Decimation never deletes edges: [`ResidualState`] masks fixed bits and
//! dead checks so per-edge messages keep stable identities across rounds.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::degree::{reconciled_assignments, AssignmentError, EdgeDegreeDistribution};

/// Bipartite check/info-bit adjacency with per-check source-bit slot.
/// Immutable once built; cheap to share across concurrent quantizations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorGraph {
    n: usize,
    m: usize,
    check_ptr: Vec<usize>,
    check_adj: Vec<u32>,
    bit_ptr: Vec<usize>,
    bit_adj: Vec<u32>,
    // Edge slot cross-maps between the two CSR orderings.
    bit_slot_of_check_slot: Vec<u32>,
    check_slot_of_bit_slot: Vec<u32>,
}

/// Mask over a [`FactorGraph`] tracking which bits are still undecided,
/// which checks still see an undecided bit, and the source word as updated
/// by decimation.
#[derive(Debug, Clone)]
pub struct ResidualState {
    active_bit: Vec<bool>,
    active_check: Vec<bool>,
    live_degree: Vec<u32>,
    residual_source: Vec<u8>,
    active_bits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    /// Word length does not match the graph dimension.
    LengthMismatch { expected: usize, found: usize },
    /// Word contains a value other than 0 or 1.
    InvalidBitValue { value: u8 },
    MalformedHeader,
    MalformedLine { line: usize },
    LineCount { expected: usize, found: usize },
    IndexOutOfRange { line: usize, index: usize, m: usize },
    DuplicateEdge { check: usize, bit: usize },
    IsolatedBit { bit: usize },
    /// Degree assignments could not be reconciled to a common socket count.
    Reconcile(AssignmentError),
    /// Parallel-edge removal gave up; try another seed.
    SwapRetriesExhausted,
    ZeroDimension,
    /// Decimation touched a bit that is not active.
    BitAlreadyFixed { bit: usize },
    BitOutOfRange { bit: usize },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LengthMismatch { expected, found } => {
                write!(f, "word length {found} does not match graph dimension {expected}")
            }
            Self::InvalidBitValue { value } => write!(f, "bit value {value} is not 0 or 1"),
            Self::MalformedHeader => write!(f, "expected header \"ldgm 1\" and \"n m\""),
            Self::MalformedLine { line } => write!(f, "line {line}: malformed adjacency line"),
            Self::LineCount { expected, found } => {
                write!(f, "expected {expected} adjacency lines, found {found}")
            }
            Self::IndexOutOfRange { line, index, m } => {
                write!(f, "line {line}: bit index {index} out of range for m={m}")
            }
            Self::DuplicateEdge { check, bit } => {
                write!(f, "duplicate edge between check {check} and bit {bit}")
            }
            Self::IsolatedBit { bit } => write!(f, "information bit {bit} has no edges"),
            Self::Reconcile(e) => write!(f, "cannot reconcile socket counts: {e}"),
            Self::SwapRetriesExhausted => {
                write!(f, "parallel-edge resolution failed; try a different seed")
            }
            Self::ZeroDimension => write!(f, "graph needs n >= 1 and m >= 1"),
            Self::BitAlreadyFixed { bit } => write!(f, "bit {bit} is already fixed"),
            Self::BitOutOfRange { bit } => write!(f, "bit index {bit} out of range"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GraphError {}

impl From<AssignmentError> for GraphError {
    fn from(e: AssignmentError) -> Self {
        Self::Reconcile(e)
    }
}

fn validate_word(word: &[u8], expected: usize) -> Result<(), GraphError> {
    if word.len() != expected {
        return Err(GraphError::LengthMismatch { expected, found: word.len() });
    }
    if let Some(&value) = word.iter().find(|&&b| b > 1) {
        return Err(GraphError::InvalidBitValue { value });
    }
    Ok(())
}

impl FactorGraph {
    /// Build a graph from per-check neighbor lists. Lists are sorted
    /// internally; duplicate edges and isolated bits are rejected.
    pub fn from_check_adjacency(m: usize, checks: Vec<Vec<u32>>) -> Result<Self, GraphError> {
        let n = checks.len();
        if n == 0 || m == 0 {
            return Err(GraphError::ZeroDimension);
        }
        let mut check_ptr = Vec::with_capacity(n + 1);
        check_ptr.push(0usize);
        let mut check_adj: Vec<u32> = Vec::new();
        let mut bit_degree = vec![0usize; m];
        for (a, mut row) in checks.into_iter().enumerate() {
            row.sort_unstable();
            for (k, &i) in row.iter().enumerate() {
                if i as usize >= m {
                    return Err(GraphError::IndexOutOfRange {
                        line: a + 3,
                        index: i as usize,
                        m,
                    });
                }
                if k > 0 && row[k - 1] == i {
                    return Err(GraphError::DuplicateEdge { check: a, bit: i as usize });
                }
                bit_degree[i as usize] += 1;
            }
            check_adj.extend_from_slice(&row);
            check_ptr.push(check_adj.len());
        }
        if let Some(bit) = bit_degree.iter().position(|&d| d == 0) {
            return Err(GraphError::IsolatedBit { bit });
        }

        let edges = check_adj.len();
        let mut bit_ptr = Vec::with_capacity(m + 1);
        bit_ptr.push(0usize);
        for &d in &bit_degree {
            bit_ptr.push(bit_ptr.last().unwrap() + d);
        }
        let mut fill = vec![0usize; m];
        let mut bit_adj = vec![0u32; edges];
        let mut bit_slot_of_check_slot = vec![0u32; edges];
        let mut check_slot_of_bit_slot = vec![0u32; edges];
        for a in 0..n {
            for cslot in check_ptr[a]..check_ptr[a + 1] {
                let i = check_adj[cslot] as usize;
                let bslot = bit_ptr[i] + fill[i];
                fill[i] += 1;
                bit_adj[bslot] = a as u32;
                bit_slot_of_check_slot[cslot] = bslot as u32;
                check_slot_of_bit_slot[bslot] = cslot as u32;
            }
        }

        Ok(Self {
            n,
            m,
            check_ptr,
            check_adj,
            bit_ptr,
            bit_adj,
            bit_slot_of_check_slot,
            check_slot_of_bit_slot,
        })
    }

    /// Number of check nodes (codeword/source length).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of information bits.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_edges(&self) -> usize {
        self.check_adj.len()
    }

    /// Information bits adjacent to check `a`, ascending.
    pub fn check_neighbors(&self, a: usize) -> &[u32] {
        &self.check_adj[self.check_ptr[a]..self.check_ptr[a + 1]]
    }

    /// Checks adjacent to information bit `i`, ascending.
    pub fn bit_neighbors(&self, i: usize) -> &[u32] {
        &self.bit_adj[self.bit_ptr[i]..self.bit_ptr[i + 1]]
    }

    pub fn check_degree(&self, a: usize) -> usize {
        self.check_ptr[a + 1] - self.check_ptr[a]
    }

    pub fn bit_degree(&self, i: usize) -> usize {
        self.bit_ptr[i + 1] - self.bit_ptr[i]
    }

    pub(crate) fn check_slot_range(&self, a: usize) -> core::ops::Range<usize> {
        self.check_ptr[a]..self.check_ptr[a + 1]
    }

    pub(crate) fn bit_slot_range(&self, i: usize) -> core::ops::Range<usize> {
        self.bit_ptr[i]..self.bit_ptr[i + 1]
    }

    pub(crate) fn bit_slot_of_check_slot(&self, cslot: usize) -> usize {
        self.bit_slot_of_check_slot[cslot] as usize
    }

    pub(crate) fn check_slot_of_bit_slot(&self, bslot: usize) -> usize {
        self.check_slot_of_bit_slot[bslot] as usize
    }

    /// Codeword of `w`: bit `a` is the XOR of `w` over the neighbors of
    /// check `a`.
    pub fn encode(&self, w: &[u8]) -> Result<Vec<u8>, GraphError> {
        validate_word(w, self.m)?;
        let mut c = vec![0u8; self.n];
        for a in 0..self.n {
            let mut acc = 0u8;
            for &i in self.check_neighbors(a) {
                acc ^= w[i as usize];
            }
            c[a] = acc;
        }
        Ok(c)
    }

    /// Text form: `ldgm 1`, `n m`, then one sorted adjacency line per check.
    pub fn serialize(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "ldgm 1");
        let _ = writeln!(out, "{} {}", self.n, self.m);
        for a in 0..self.n {
            let row = self.check_neighbors(a);
            let _ = write!(out, "{}", row.len());
            for &i in row {
                let _ = write!(out, " {i}");
            }
            let _ = writeln!(out);
        }
        out
    }

    /// Parse the text form produced by [`FactorGraph::serialize`].
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let header = lines.next().map(|(_, l)| l.trim());
        if header != Some("ldgm 1") {
            return Err(GraphError::MalformedHeader);
        }
        let dims = lines.next().map(|(_, l)| l.trim()).unwrap_or("");
        let mut parts = dims.split_whitespace();
        let (Some(n_str), Some(m_str), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(GraphError::MalformedHeader);
        };
        let n: usize = n_str.parse().map_err(|_| GraphError::MalformedHeader)?;
        let m: usize = m_str.parse().map_err(|_| GraphError::MalformedHeader)?;
        if n == 0 || m == 0 {
            return Err(GraphError::ZeroDimension);
        }

        let mut checks: Vec<Vec<u32>> = Vec::with_capacity(n);
        for (idx, raw) in lines {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() {
                continue;
            }
            if checks.len() == n {
                return Err(GraphError::LineCount { expected: n, found: n + 1 });
            }
            let mut fields = content.split_whitespace();
            let degree: usize = fields
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or(GraphError::MalformedLine { line })?;
            let mut row = Vec::with_capacity(degree);
            for _ in 0..degree {
                let index: usize = fields
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or(GraphError::MalformedLine { line })?;
                if index >= m {
                    return Err(GraphError::IndexOutOfRange { line, index, m });
                }
                row.push(index as u32);
            }
            if fields.next().is_some() {
                return Err(GraphError::MalformedLine { line });
            }
            checks.push(row);
        }
        if checks.len() != n {
            return Err(GraphError::LineCount { expected: n, found: checks.len() });
        }
        Self::from_check_adjacency(m, checks)
    }
}

/// Sample a random factor graph by the configuration model.
///
/// Check-side degrees realize `check_dist` on `n` nodes; bit-side degrees
/// realize `info_dist` on `m` nodes reconciled to the check-side socket
/// count. Degrees are assigned to node ids in random order, sockets paired
/// through a random permutation, and parallel edges removed by random edge
/// swaps (degree-preserving on both sides). Deterministic in all inputs.
pub fn sample_graph(
    n: usize,
    m: usize,
    check_dist: &EdgeDegreeDistribution,
    info_dist: &EdgeDegreeDistribution,
    seed: u64,
) -> Result<FactorGraph, GraphError> {
    if n == 0 || m == 0 {
        return Err(GraphError::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (check_assign, bit_assign) = reconciled_assignments(check_dist, n, info_dist, m)?;
    let sockets = check_assign.total_edge_sockets();
    debug_assert_eq!(bit_assign.total_edge_sockets(), sockets);

    let mut check_degrees = check_assign.node_degrees();
    let mut bit_degrees = bit_assign.node_degrees();
    check_degrees.shuffle(&mut rng);
    bit_degrees.shuffle(&mut rng);

    let mut check_sockets: Vec<u32> = Vec::with_capacity(sockets);
    for (a, &d) in check_degrees.iter().enumerate() {
        check_sockets.extend(core::iter::repeat(a as u32).take(d as usize));
    }
    let mut bit_sockets: Vec<u32> = Vec::with_capacity(sockets);
    for (i, &d) in bit_degrees.iter().enumerate() {
        bit_sockets.extend(core::iter::repeat(i as u32).take(d as usize));
    }
    bit_sockets.shuffle(&mut rng);

    let mut edges: Vec<(u32, u32)> = check_sockets
        .into_iter()
        .zip(bit_sockets)
        .collect();

    resolve_parallel_edges(&mut edges, &mut rng)?;

    let mut checks: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, i) in &edges {
        checks[a as usize].push(i);
    }
    FactorGraph::from_check_adjacency(m, checks)
}

/// Replace duplicate (check, bit) pairs by random degree-preserving edge
/// swaps. Fails after a bounded number of attempts.
fn resolve_parallel_edges(
    edges: &mut [(u32, u32)],
    rng: &mut ChaCha8Rng,
) -> Result<(), GraphError> {
    let total = edges.len();
    let mut seen: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut resolved = vec![false; total];
    let mut pending: Vec<usize> = Vec::new();
    for (k, &e) in edges.iter().enumerate() {
        if seen.insert(e) {
            resolved[k] = true;
        } else {
            pending.push(k);
        }
    }
    if pending.is_empty() {
        return Ok(());
    }

    let mut budget = 10_000usize + 100 * total;
    while let Some(k) = pending.pop() {
        loop {
            if budget == 0 {
                return Err(GraphError::SwapRetriesExhausted);
            }
            budget -= 1;
            let j = rng.gen_range(0..total);
            if j == k || !resolved[j] {
                continue;
            }
            let (a, i) = edges[k];
            let (b, jbit) = edges[j];
            if a == b || i == jbit {
                continue;
            }
            let e1 = (a, jbit);
            let e2 = (b, i);
            if seen.contains(&e1) || seen.contains(&e2) {
                continue;
            }
            seen.remove(&(b, jbit));
            seen.insert(e1);
            seen.insert(e2);
            edges[k] = e1;
            edges[j] = e2;
            resolved[k] = true;
            break;
        }
    }
    Ok(())
}

/// Uniform random word of `n` bits from a seeded counter-based generator.
/// The stream depends only on `(n, seed)`.
pub fn random_source_word(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.next_u32() & 1) as u8).collect()
}

impl ResidualState {
    /// Fresh state over `graph` for source word `source`: every bit active,
    /// every check with at least one neighbor active.
    pub fn new(graph: &FactorGraph, source: &[u8]) -> Result<Self, GraphError> {
        validate_word(source, graph.n())?;
        let live_degree: Vec<u32> = (0..graph.n()).map(|a| graph.check_degree(a) as u32).collect();
        let active_check = live_degree.iter().map(|&d| d > 0).collect();
        Ok(Self {
            active_bit: vec![true; graph.m()],
            active_check,
            live_degree,
            residual_source: source.to_vec(),
            active_bits: graph.m(),
        })
    }

    pub fn bit_is_active(&self, i: usize) -> bool {
        self.active_bit[i]
    }

    pub fn check_is_active(&self, a: usize) -> bool {
        self.active_check[a]
    }

    pub fn live_degree(&self, a: usize) -> u32 {
        self.live_degree[a]
    }

    /// Source word as updated by decimation so far.
    pub fn residual_source(&self) -> &[u8] {
        &self.residual_source
    }

    pub fn active_bit_count(&self) -> usize {
        self.active_bits
    }

    /// Fix the given bits: deactivate them, XOR their values into the
    /// residual source of adjacent checks, and retire checks whose live
    /// degree reaches zero.
    pub fn decimate(
        &mut self,
        graph: &FactorGraph,
        fixes: &[(usize, u8)],
    ) -> Result<(), GraphError> {
        for &(bit, value) in fixes {
            if bit >= graph.m() {
                return Err(GraphError::BitOutOfRange { bit });
            }
            if value > 1 {
                return Err(GraphError::InvalidBitValue { value });
            }
            if !self.active_bit[bit] {
                return Err(GraphError::BitAlreadyFixed { bit });
            }
            self.active_bit[bit] = false;
            self.active_bits -= 1;
            for &a in graph.bit_neighbors(bit) {
                let a = a as usize;
                self.residual_source[a] ^= value;
                debug_assert!(self.live_degree[a] > 0);
                self.live_degree[a] -= 1;
                if self.live_degree[a] == 0 {
                    self.active_check[a] = false;
                }
            }
        }
        Ok(())
    }
}

/// The six-check, three-bit graph used across the test suite.
#[cfg(test)]
pub(crate) fn demo_graph() -> FactorGraph {
    FactorGraph::from_check_adjacency(
        3,
        vec![vec![0], vec![1], vec![0, 2], vec![0, 1, 2], vec![2], vec![2]],
    )
    .unwrap()
}
