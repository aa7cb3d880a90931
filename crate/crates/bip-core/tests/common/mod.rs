//! Shared fixtures for the integration suites.

#![allow(dead_code)]

use bip_core::degree::EdgeDegreeDistribution;
use bip_core::graph::FactorGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const RATE_037_CHECK: &str = include_str!("../../../../data/rate-0.37.check.dist");
pub const RATE_037_INFO: &str = include_str!("../../../../data/rate-0.37.info.dist");
pub const RATE_05_CHECK: &str = include_str!("../../../../data/rate-0.5.check.dist");
pub const RATE_05_INFO: &str = include_str!("../../../../data/rate-0.5.info.dist");
pub const RATE_065_CHECK: &str = include_str!("../../../../data/rate-0.65.check.dist");
pub const RATE_065_INFO: &str = include_str!("../../../../data/rate-0.65.info.dist");
pub const RATE_075_CHECK: &str = include_str!("../../../../data/rate-0.75.check.dist");
pub const RATE_075_INFO: &str = include_str!("../../../../data/rate-0.75.info.dist");

/// The shipped `(rate, check, info)` distribution pairs.
pub fn shipped_pairs() -> Vec<(f64, EdgeDegreeDistribution, EdgeDegreeDistribution)> {
    [
        (0.37, RATE_037_CHECK, RATE_037_INFO),
        (0.50, RATE_05_CHECK, RATE_05_INFO),
        (0.65, RATE_065_CHECK, RATE_065_INFO),
        (0.75, RATE_075_CHECK, RATE_075_INFO),
    ]
    .into_iter()
    .map(|(r, c, i)| {
        (
            r,
            EdgeDegreeDistribution::parse(c).unwrap(),
            EdgeDegreeDistribution::parse(i).unwrap(),
        )
    })
    .collect()
}

/// Random alternating tree: every added node hangs off an existing node of
/// the other kind, so the factor graph is connected and loop-free.
/// Returns the graph and its diameter in edge hops.
pub fn random_tree_graph(seed: u64) -> (FactorGraph, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m_target = rng.gen_range(1..=12usize);
    let n_target = rng.gen_range(1..=20usize);

    let mut checks: Vec<Vec<u32>> = vec![vec![0]];
    let mut bits = 1usize;
    while bits < m_target || checks.len() < n_target {
        let grow_bit = bits < m_target && (checks.len() >= n_target || rng.gen_bool(0.5));
        if grow_bit {
            let host = rng.gen_range(0..checks.len());
            checks[host].push(bits as u32);
            bits += 1;
        } else {
            let host = rng.gen_range(0..bits);
            checks.push(vec![host as u32]);
        }
    }
    let graph = FactorGraph::from_check_adjacency(bits, checks).unwrap();
    let diameter = tree_diameter(&graph);
    (graph, diameter)
}

fn tree_diameter(graph: &FactorGraph) -> usize {
    // Nodes 0..n are checks, n..n+m are bits.
    let far = bfs_farthest(graph, 0);
    bfs_farthest(graph, far.0).1
}

fn bfs_farthest(graph: &FactorGraph, start: usize) -> (usize, usize) {
    let total = graph.n() + graph.m();
    let mut dist = vec![usize::MAX; total];
    let mut queue = std::collections::VecDeque::new();
    dist[start] = 0;
    queue.push_back(start);
    let mut far = (start, 0);
    while let Some(u) = queue.pop_front() {
        let neighbors: Vec<usize> = if u < graph.n() {
            graph.check_neighbors(u).iter().map(|&i| graph.n() + i as usize).collect()
        } else {
            graph.bit_neighbors(u - graph.n()).iter().map(|&a| a as usize).collect()
        };
        for v in neighbors {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                if dist[v] > far.1 {
                    far = (v, dist[v]);
                }
                queue.push_back(v);
            }
        }
    }
    far
}

/// Random loopy instance with `m <= 12`, `n <= 24`: checks draw 1-3
/// distinct neighbors, then isolated bits are patched onto random checks.
pub fn random_loopy_graph(seed: u64) -> FactorGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(2..=12usize);
    let n = rng.gen_range(m.max(8)..=24usize);
    let mut edges = std::collections::BTreeSet::new();
    let mut checks: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (a, row) in checks.iter_mut().enumerate() {
        let degree = rng.gen_range(1..=3usize).min(m);
        while row.len() < degree {
            let i = rng.gen_range(0..m) as u32;
            if edges.insert((a, i)) {
                row.push(i);
            }
        }
    }
    let mut bit_degree = vec![0usize; m];
    for row in &checks {
        for &i in row {
            bit_degree[i as usize] += 1;
        }
    }
    for (i, &d) in bit_degree.iter().enumerate() {
        if d == 0 {
            loop {
                let a = rng.gen_range(0..n);
                if edges.insert((a, i as u32)) {
                    checks[a].push(i as u32);
                    break;
                }
            }
        }
    }
    FactorGraph::from_check_adjacency(m, checks).unwrap()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
