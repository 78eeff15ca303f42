//! Shared fixtures for the benchmarks.

use wgspec_core::random::{self, ChaCha8Rng};
use wgspec_core::{ComplexMatrix, WeightedGraph};

pub fn graph(n: usize, seed: u64) -> WeightedGraph {
    random::random_graph(&mut random::rng(seed), n, 0.3).expect("random graph is valid")
}

pub fn matrix(n: usize, seed: u64) -> ComplexMatrix {
    random::random_matrix(&mut random::rng(seed), n, 1.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    random::rng(seed)
}
