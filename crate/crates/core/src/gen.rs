//! Seeded random instances.
//!
//! Every generator draws from a [`ChaCha8Rng`] seeded with
//! `seed_from_u64(seed)`, so outputs replicate across runs and platforms.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::reduction::ThreeDMInstance;
use crate::tree_model::TreeModel;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` distinct triples drawn uniformly from `[n]^3`.
pub fn random_3dm(rng: &mut SeededRng, n: usize, m: usize) -> Result<ThreeDMInstance> {
    if n == 0 || m == 0 || m > n.pow(3) {
        return Err(Error::instance(format!("cannot draw {m} distinct triples over n = {n}")));
    }
    let mut all: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|p| (0..n).flat_map(move |q| (0..n).map(move |r| (p, q, r))))
        .collect();
    all.shuffle(rng);
    all.truncate(m);
    ThreeDMInstance::new(n, all)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(rng: &mut SeededRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("edges are distinct and in range")
}

/// Random tree on `t` nodes: node `i > 0` hangs off a uniform earlier node.
pub fn random_tree(rng: &mut SeededRng, t: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..t).map(|i| (rng.random_range(0..i), i)).collect();
    Graph::new(t, edges).expect("tree edges are distinct")
}

/// Connected undirected path graph on `n` vertices with a path model on a
/// random host tree of `t` nodes: each vertex gets the host path between
/// two uniform nodes. Redraws until the realised graph is connected.
pub fn random_up(rng: &mut SeededRng, n: usize, t: usize) -> (Graph, TreeModel) {
    assert!(n > 0 && t > 0);
    let host = random_tree(rng, t);
    loop {
        let paths: Vec<VertexSet> = (0..n)
            .map(|_| {
                let a = rng.random_range(0..t);
                let b = rng.random_range(0..t);
                VertexSet::new(host.shortest_path(a, b).expect("host is a tree"))
            })
            .collect();
        let model = TreeModel::new(host.clone(), paths).expect("paths are in range");
        let g = model.realized_graph();
        if g.is_connected() {
            return (g, model);
        }
    }
}

/// Uniform random subset of `pool` of size `k`, sorted.
pub fn random_subset(rng: &mut SeededRng, pool: &[usize], k: usize) -> VertexSet {
    VertexSet::new(pool.choose_multiple(rng, k).copied())
}
