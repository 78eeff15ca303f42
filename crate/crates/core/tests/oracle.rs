//! Hand-written eigensolvers against nalgebra.

use nalgebra::DMatrix;
use wgspec_core::random::{self, Rng};
use wgspec_core::{eigen, spectrum, Complex64, ComplexMatrix};

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}

/// Greedy nearest matching of two multisets; the largest matched distance.
fn matching_gap(ours: &[Complex64], theirs: &[Complex64]) -> f64 {
    assert_eq!(ours.len(), theirs.len());
    let mut used = vec![false; theirs.len()];
    let mut worst: f64 = 0.0;
    for z in ours {
        let (k, d) = theirs
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, w)| (k, (z - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

#[test]
fn general_eigenvalues_match_schur() {
    let mut rng = random::rng(11);
    for _ in 0..60 {
        let n = rng.random_range(1..=25);
        let density = rng.random_range(0.3..=1.0);
        let m = random::random_matrix(&mut rng, n, density);
        let ours = eigen::general_eigenvalues(&m).unwrap();
        let theirs: Vec<Complex64> = to_nalgebra(&m).schur().eigenvalues().unwrap().iter().copied().collect();
        let gap = matching_gap(&ours, &theirs);
        assert!(gap <= 1e-8 * m.norm_bound().max(1.0), "n={n} gap={gap:e}");
    }
}

#[test]
fn hermitian_eigenvalues_match_symmetric_eigen() {
    let mut rng = random::rng(12);
    for _ in 0..60 {
        let n = rng.random_range(1..=30);
        let a = random::random_matrix(&mut rng, n, 0.8);
        let h = a.add(&a.adjoint());
        let mut ours = eigen::hermitian_eigenvalues(&h).unwrap();
        let mut theirs: Vec<f64> = to_nalgebra(&h).symmetric_eigenvalues().iter().copied().collect();
        ours.sort_by(f64::total_cmp);
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            assert!((x - y).abs() <= 1e-10 * h.norm_bound().max(1.0), "{x} vs {y}");
        }
    }
}

#[test]
fn triangular_spectrum_is_the_diagonal() {
    let mut rng = random::rng(13);
    for _ in 0..30 {
        let n = rng.random_range(1..=20);
        let m = random::random_triangular(&mut rng, n);
        let diag: Vec<Complex64> = (0..n).map(|i| m[(i, i)]).collect();
        let s = spectrum(&m).unwrap();
        assert!(matching_gap(s.values(), &diag) <= 1e-9);
    }
}
