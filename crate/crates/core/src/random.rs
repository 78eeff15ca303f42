//! Seeded generators for randomized suites. Everything draws from
//! [`ChaCha8Rng`], so a seed fixes the output on every platform.

use num_complex::Complex64;
use rand::seq::SliceRandom;
pub use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::covering::{voltage_cover, CoveringMap, Voltages};
use crate::error::Result;
use crate::graph::{Arc, WeightedGraph};
use crate::operator::ComplexMatrix;
use crate::orbital::{GroupAlgebraElement, Word};
use crate::perm::Permutation;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the closed unit disk.
pub fn unit_disk(rng: &mut impl Rng) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

/// Random multigraph on `n` vertices: each unordered pair and each vertex
/// carries edges with probability `density`, sometimes doubled. Both arcs of
/// an edge get independent weights, so the operator is not self-adjoint.
pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> Result<WeightedGraph> {
    let width = n.saturating_sub(1).to_string().len();
    let vertices = (0..n).map(|i| format!("v{i:0width$}")).collect();
    let mut arcs = Vec::new();
    let mut pairing = Vec::new();
    for u in 0..n {
        for v in u..n {
            if !rng.random_bool(density) {
                continue;
            }
            let copies = if rng.random_bool(0.2) { 2 } else { 1 };
            for _ in 0..copies {
                let k = arcs.len();
                if u == v && rng.random_bool(0.5) {
                    arcs.push(Arc::new(u, u, unit_disk(rng)));
                    pairing.push(k);
                } else {
                    arcs.push(Arc::new(u, v, unit_disk(rng)));
                    arcs.push(Arc::new(v, u, unit_disk(rng)));
                    pairing.extend([k + 1, k]);
                }
            }
        }
    }
    WeightedGraph::new(vertices, arcs, pairing)
}

pub fn random_permutation(rng: &mut impl Rng, degree: usize) -> Permutation {
    let mut image: Vec<usize> = (0..degree).collect();
    image.shuffle(rng);
    Permutation::from_images(image).expect("shuffle is a bijection")
}

/// Product of disjoint transpositions on a random subset of points.
pub fn random_involution(rng: &mut impl Rng, degree: usize) -> Permutation {
    let mut points: Vec<usize> = (0..degree).collect();
    points.shuffle(rng);
    let mut image: Vec<usize> = (0..degree).collect();
    for pair in points.chunks_exact(2) {
        if rng.random_bool(0.5) {
            image.swap(pair[0], pair[1]);
        }
    }
    Permutation::from_images(image).expect("swaps form a bijection")
}

/// Voltage assignment: a random permutation per edge (its inverse on the
/// reverse arc) and a random involution on each self-paired loop.
pub fn random_voltages(rng: &mut impl Rng, base: &WeightedGraph, degree: usize) -> Result<Voltages> {
    let mut volt = Voltages::trivial(base, degree);
    for k in 0..base.arc_count() {
        let p = base.pair_of(k);
        if p < k {
            continue;
        }
        let perm = if p == k {
            random_involution(rng, degree)
        } else {
            random_permutation(rng, degree)
        };
        volt.set_edge(base, k, perm)?;
    }
    Ok(volt)
}

/// Random base graph with `1..=max_n` vertices lifted along random voltages
/// of degree `1..=max_d`.
pub fn random_voltage_cover(rng: &mut impl Rng, max_n: usize, max_d: usize) -> Result<(Voltages, CoveringMap)> {
    let n = rng.random_range(1..=max_n.max(1));
    let d = rng.random_range(1..=max_d.max(1));
    let density = rng.random_range(0.2..0.7);
    let base = random_graph(rng, n, density)?;
    let volt = random_voltages(rng, &base, d)?;
    let (_, map) = voltage_cover(&base, &volt)?;
    Ok((volt, map))
}

/// Dense matrix with entries uniform in the unit disk, zeroed with
/// probability `1 − density`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, density: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        if rng.random_bool(density) {
            unit_disk(rng)
        } else {
            Complex64::default()
        }
    })
}

/// Upper triangular random matrix; non-normal whenever an off-diagonal entry is nonzero.
pub fn random_triangular(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |i, j| if i <= j { unit_disk(rng) } else { Complex64::default() })
}

/// Random element supported on up to `terms` words of length ≤ `max_len`
/// over `generators`.
pub fn random_element(
    rng: &mut impl Rng,
    generators: &[&str],
    terms: usize,
    max_len: usize,
) -> Result<GroupAlgebraElement> {
    let mut m = GroupAlgebraElement::new();
    while m.len() < terms.max(1) {
        let len = rng.random_range(1..=max_len.max(1));
        let tokens: Vec<String> = (0..len)
            .map(|_| {
                let g = generators[rng.random_range(0..generators.len())];
                if rng.random_bool(0.5) {
                    format!("{g}'")
                } else {
                    g.to_string()
                }
            })
            .collect();
        let word = Word::parse_tokens(tokens.iter().map(String::as_str))?;
        m.add_term(word, unit_disk(rng));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_replay() {
        let a = random_graph(&mut rng(5), 7, 0.5).unwrap();
        let b = random_graph(&mut rng(5), 7, 0.5).unwrap();
        assert_eq!(a, b);
        assert_eq!(random_matrix(&mut rng(1), 4, 0.7), random_matrix(&mut rng(1), 4, 0.7));
    }

    #[test]
    fn involutions_and_voltages() {
        let mut r = rng(9);
        for _ in 0..20 {
            assert!(random_involution(&mut r, 5).is_involution());
        }
        let g = random_graph(&mut r, 6, 0.6).unwrap();
        let v = random_voltages(&mut r, &g, 3).unwrap();
        for k in 0..g.arc_count() {
            assert!(v.get(k).after(v.get(g.pair_of(k))).is_identity());
        }
    }

    #[test]
    fn triangular_is_triangular() {
        let m = random_triangular(&mut rng(2), 5);
        assert!((0..5).all(|i| (0..i).all(|j| m[(i, j)] == Complex64::default())));
    }
}
