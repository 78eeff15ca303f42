//! Spectra of finite operators and spectral membership tests.
//!
//! [`membership_by_deficiency`] decides whether `λ ∈ σ(A)` for an arbitrary,
//! possibly non-normal, operator by checking both deficiency operators
//!
//! ```text
//! D_left  = I − (A − λ)(A − λ)* / R²
//! D_right = I − (A − λ)*(A − λ) / R²
//! ```
//!
//! and asking whether `1` lies in the spectrum of either. With `R ≥ 2‖A‖`
//! and `|λ| ≤ ‖A‖` both are positive contractions. Checking only one side is
//! not enough: for the one-sided shift `S`, `S*S = I` so `D_right` never
//! has `1` in its spectrum, yet `0 ∈ σ(S)`. Square truncations of `S` make
//! `SS*` and `S*S` isospectral and hide this, so the demonstration works on
//! the exact streamed operator.
//!
//! The bound on `R` only matters for the `[0, 1]` range; `λ ∈ σ(A)` iff `1`
//! is in one of the two spectra for every `R > 0`. The bound is still
//! enforced.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigen;
use crate::error::{Error, Result};
use crate::graph::Side;
use crate::operator::{shift_graph, ComplexMatrix, FinSuppVector, ShiftDirection, SparseOperator, DENSE_CAP};

/// Default tolerance for "1 ∈ σ(D)".
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Default tolerance for spectral inclusion.
pub const SUBSET_TOL: f64 = 1e-8;
/// Entrywise threshold for treating a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Canonical order on complex numbers: real part, then imaginary part.
pub fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Finite multiset of eigenvalues in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSet {
    values: Vec<Complex64>,
    tolerance: f64,
}

impl SpectralSet {
    pub fn new(mut values: Vec<Complex64>, tolerance: f64) -> Self {
        values.sort_by(canonical_cmp);
        SpectralSet { values, tolerance }
    }

    pub fn from_real(values: impl IntoIterator<Item = f64>) -> Self {
        Self::new(values.into_iter().map(Complex64::from).collect(), 0.0)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Distance from `z` to the nearest point of the set.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.values
            .iter()
            .map(|w| (w - z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_matrix(m: &ComplexMatrix) -> Result<()> {
    if m.dim() > DENSE_CAP {
        return Err(Error::DimensionCap {
            dim: m.dim(),
            cap: DENSE_CAP,
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// All eigenvalues with multiplicity. Hermitian inputs go through the
/// tridiagonal solver and come back exactly real.
pub fn spectrum(m: &ComplexMatrix) -> Result<SpectralSet> {
    check_matrix(m)?;
    let values = if m.is_hermitian(HERMITIAN_TOL) {
        eigen::hermitian_eigenvalues(m)?
            .into_iter()
            .map(Complex64::from)
            .collect()
    } else {
        eigen::general_eigenvalues(m)?
    };
    // Backward error of the solvers is a few ulps of ‖M‖.
    let tol = 64.0 * f64::EPSILON * m.norm_bound().max(f64::MIN_POSITIVE);
    Ok(SpectralSet::new(values, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessSide {
    Left,
    Right,
    None,
}

impl std::fmt::Display for WitnessSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WitnessSide::Left => "left",
            WitnessSide::Right => "right",
            WitnessSide::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub lambda: Complex64,
    pub member: bool,
    /// `Left` whenever the left side witnesses, so `Right` means only the
    /// right side does; see the per-side distances for both.
    pub witness_side: WitnessSide,
    /// Distance from 1 to the union of both deficiency spectra.
    pub witness_value: f64,
    pub left_distance: f64,
    pub right_distance: f64,
    pub radius: f64,
    pub tolerance: f64,
}

impl MembershipVerdict {
    pub fn witnessed_by(&self, side: Side) -> bool {
        match side {
            Side::Left => self.left_distance <= self.tolerance,
            Side::Right => self.right_distance <= self.tolerance,
        }
    }
}

/// Both deficiency operators of `m` at `lambda`, built as dense matrices.
pub fn deficiency_matrices(m: &ComplexMatrix, lambda: Complex64, radius: f64) -> (ComplexMatrix, ComplexMatrix) {
    let b = m.shift(lambda);
    let b_adj = b.adjoint();
    let inv = Complex64::from(-1.0 / (radius * radius));
    let id = ComplexMatrix::identity(m.dim());
    let left = id.add(&(&b * &b_adj).scale(inv));
    let right = id.add(&(&b_adj * &b).scale(inv));
    (left, right)
}

pub fn deficiency_matrix(m: &ComplexMatrix, lambda: Complex64, radius: f64, side: Side) -> ComplexMatrix {
    let (left, right) = deficiency_matrices(m, lambda, radius);
    match side {
        Side::Left => left,
        Side::Right => right,
    }
}

fn distance_from_one(d: &ComplexMatrix) -> Result<f64> {
    Ok(eigen::hermitian_eigenvalues(d)?
        .into_iter()
        .map(|x| (1.0 - x).abs())
        .fold(f64::INFINITY, f64::min))
}

/// Decides `λ ∈ σ(M)` through the two deficiency operators.
///
/// Requires `R ≥ 2·norm_bound(M)`; membership itself does not depend on
/// `R`, but the bound keeps both deficiency spectra inside `[0, 1]`.
pub fn membership_by_deficiency(
    m: &ComplexMatrix,
    lambda: Complex64,
    radius: f64,
    tol: f64,
) -> Result<MembershipVerdict> {
    check_matrix(m)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::NonPositiveRadius(radius));
    }
    let bound = m.norm_bound();
    if radius < 2.0 * bound * (1.0 - 1e-12) {
        return Err(Error::RadiusTooSmall {
            radius,
            norm_bound: bound,
        });
    }
    let (left, right) = deficiency_matrices(m, lambda, radius);
    let left_distance = distance_from_one(&left)?;
    let right_distance = distance_from_one(&right)?;
    let witness_side = if left_distance <= tol {
        WitnessSide::Left
    } else if right_distance <= tol {
        WitnessSide::Right
    } else {
        WitnessSide::None
    };
    Ok(MembershipVerdict {
        lambda,
        member: witness_side != WitnessSide::None,
        witness_side,
        witness_value: left_distance.min(right_distance),
        left_distance,
        right_distance,
        radius,
        tolerance: tol,
    })
}

/// [`membership_by_deficiency`] over many points in parallel; results are
/// returned in input order.
pub fn membership_sweep(
    m: &ComplexMatrix,
    lambdas: &[Complex64],
    radius: f64,
    tol: f64,
) -> Result<Vec<MembershipVerdict>> {
    lambdas
        .par_iter()
        .map(|&z| membership_by_deficiency(m, z, radius, tol))
        .collect()
}

fn directed_hausdorff(a: &SpectralSet, b: &SpectralSet) -> f64 {
    a.values
        .iter()
        .map(|&z| b.distance_to(z))
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two finite point sets in the complex plane.
pub fn hausdorff_distance(a: &SpectralSet, b: &SpectralSet) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    Ok(directed_hausdorff(a, b).max(directed_hausdorff(b, a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsetReport {
    pub included: bool,
    /// Largest distance from a point of the first set to the second.
    pub max_deviation: f64,
    /// Point of the first set realizing `max_deviation`.
    pub worst: Option<Complex64>,
}

/// Whether every point of `a` lies within `tol` of some point of `b`.
pub fn subset_check(a: &SpectralSet, b: &SpectralSet, tol: f64) -> Result<SubsetReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::NonPositiveTolerance(tol));
    }
    let mut worst = None;
    let mut max_deviation = 0.0;
    for &z in &a.values {
        let d = b.distance_to(z);
        if worst.is_none() || d > max_deviation {
            max_deviation = d;
            worst = Some(z);
        }
    }
    Ok(SubsetReport {
        included: max_deviation <= tol,
        max_deviation,
        worst,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub depth: u64,
    pub radius: f64,
    pub checks: Vec<CheckLine>,
    /// The single point of `σ(I − S*S/R²)`.
    pub one_sided_value: f64,
    pub one_sided_claims_invertible: bool,
    pub left_witness: bool,
    pub narrative: Vec<String>,
}

impl ShiftReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn random_finsupp(rng: &mut ChaCha8Rng, max_index: u64) -> FinSuppVector<u64> {
    let len = rng.random_range(1..=8);
    FinSuppVector::from_entries((0..len).map(|_| {
        let k = rng.random_range(0..=max_index);
        let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        (k, z)
    }))
}

/// Exact structural checks on the streamed one-sided shift, showing why the
/// membership test must look at both deficiency operators.
pub fn shift_counterexample_report(depth: u64, samples: usize, seed: u64) -> Result<ShiftReport> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be at least 1".into()));
    }
    let s = shift_graph(ShiftDirection::Forward);
    let s_adj = shift_graph(ShiftDirection::Adjoint);
    let radius = 2.0 * s.norm_bound()?;
    let inv_r2 = 1.0 / (radius * radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let bad = (0..=depth).find(|&k| {
        let d = FinSuppVector::delta(k);
        s_adj.apply(&s.apply(&d)) != d
    });
    checks.push(CheckLine {
        name: "S*S delta_k = delta_k".into(),
        passed: bad.is_none(),
        detail: match bad {
            None => format!("k = 0..={depth}"),
            Some(k) => format!("fails at k = {k}"),
        },
    });

    let ss_adj_0 = s.apply(&s_adj.apply(&FinSuppVector::delta(0)));
    checks.push(CheckLine {
        name: "SS* delta_0 = 0".into(),
        passed: ss_adj_0.is_zero(),
        detail: format!("support size {}", ss_adj_0.len()),
    });

    let delta0 = FinSuppVector::delta(0u64);
    let mut orth_fail = 0;
    let mut isometry_fail = 0;
    for _ in 0..samples {
        let f = random_finsupp(&mut rng, depth);
        let sf = s.apply(&f);
        if sf.inner(&delta0) != Complex64::ZERO {
            orth_fail += 1;
        }
        if s_adj.apply(&sf) != f {
            isometry_fail += 1;
        }
    }
    checks.push(CheckLine {
        name: "<S f, delta_0> = 0".into(),
        passed: orth_fail == 0,
        detail: format!("{samples} random vectors, {orth_fail} failures"),
    });
    checks.push(CheckLine {
        name: "S*S f = f".into(),
        passed: isometry_fail == 0,
        detail: format!("{samples} random vectors, {isometry_fail} failures"),
    });

    // Right deficiency: S*S = I, so it is (1 − 1/R²)·I on every vector.
    let one_sided_value = 1.0 - inv_r2;
    let right_ok = (0..=depth).all(|k| {
        let d = FinSuppVector::delta(k);
        let image = d.sub(&s_adj.apply(&s.apply(&d)).scale(Complex64::from(inv_r2)));
        image == d.scale(Complex64::from(one_sided_value))
    });
    checks.push(CheckLine {
        name: "I - S*S/R^2 = (1 - 1/R^2) I".into(),
        passed: right_ok,
        detail: format!("R = {radius}, value {one_sided_value}"),
    });

    // Left deficiency fixes delta_0: 1 is an eigenvalue.
    let left_image = delta0.sub(&s.apply(&s_adj.apply(&delta0)).scale(Complex64::from(inv_r2)));
    let left_witness = left_image == delta0;
    checks.push(CheckLine {
        name: "(I - SS*/R^2) delta_0 = delta_0".into(),
        passed: left_witness,
        detail: "left deficiency has eigenvalue 1".into(),
    });

    let one_sided_claims_invertible = (1.0 - one_sided_value).abs() > MEMBERSHIP_TOL;
    let narrative = vec![
        format!("A = S (one-sided shift on l2(N)), lambda = 0, R = {radius}."),
        format!(
            "The right deficiency I - A*A/R^2 equals {one_sided_value} * I; 1 is not in its spectrum."
        ),
        "A test using only this side reports that A - 0 is invertible.".into(),
        "But delta_0 is orthogonal to the range of S, so S is not onto and 0 lies in sigma(S).".into(),
        "The left deficiency I - AA*/R^2 fixes delta_0, so 1 lies in its spectrum.".into(),
        format!(
            "WARNING: the one-sided deficiency test is unsound for non-normal A; \
             the two-sided test detects 0 in sigma(S) via side=left{}.",
            if left_witness { "" } else { " (check failed)" }
        ),
    ];

    Ok(ShiftReport {
        depth,
        radius,
        checks,
        one_sided_value,
        one_sided_claims_invertible,
        left_witness,
        narrative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn swap_matrix_spectrum() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let s = spectrum(&m).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s.values()[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((s.values()[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nilpotent_spectrum() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(spectrum(&m).unwrap().values(), &[Complex64::ZERO; 2]);
    }

    #[test]
    fn spectrum_rejects_non_finite() {
        let m = ComplexMatrix::from_real_rows(&[&[f64::NAN]]).unwrap();
        assert_eq!(spectrum(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn spectrum_rejects_oversized() {
        let m = ComplexMatrix::zeros(DENSE_CAP + 1);
        assert!(matches!(spectrum(&m), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn nilpotent_membership_at_zero_is_left() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let v = membership_by_deficiency(&m, Complex64::ZERO, 2.0, MEMBERSHIP_TOL).unwrap();
        assert!(v.member);
        assert_eq!(v.witness_side, WitnessSide::Left);
        assert_eq!(v.left_distance, 0.0);
        // Both products of a singular square matrix are singular.
        assert!(v.witnessed_by(Side::Right));
    }

    #[test]
    fn nilpotent_membership_at_half_is_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let v = membership_by_deficiency(&m, c(0.5, 0.0), 2.0, MEMBERSHIP_TOL).unwrap();
        assert!(!v.member);
        assert_eq!(v.witness_side, WitnessSide::None);
    }

    #[test]
    fn diagonal_membership_both_sides() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        let v = membership_by_deficiency(&m, c(2.0, 0.0), 4.0, MEMBERSHIP_TOL).unwrap();
        assert!(v.member);
        assert!(v.witnessed_by(Side::Left) && v.witnessed_by(Side::Right));
    }

    #[test]
    fn membership_preconditions() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap();
        assert!(matches!(
            membership_by_deficiency(&m, Complex64::ZERO, 3.0, 1e-9),
            Err(Error::RadiusTooSmall { .. })
        ));
        assert!(matches!(
            membership_by_deficiency(&m, Complex64::ZERO, 4.0, 0.0),
            Err(Error::NonPositiveTolerance(_))
        ));
    }

    #[test]
    fn hausdorff_examples() {
        let a = SpectralSet::from_real([0.0]);
        let b = SpectralSet::from_real([1.0]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 1.0);
        let empty = SpectralSet::new(Vec::new(), 0.0);
        assert_eq!(hausdorff_distance(&a, &empty).unwrap_err(), Error::EmptySpectrum);
    }

    #[test]
    fn subset_examples() {
        let small = SpectralSet::from_real([-2.0, 2.0]);
        let big = SpectralSet::from_real([-2.0, 0.0, 0.0, 2.0]);
        assert!(subset_check(&small, &big, SUBSET_TOL).unwrap().included);

        let r = subset_check(&SpectralSet::from_real([0.5]), &SpectralSet::from_real([0.0, 1.0]), 0.4).unwrap();
        assert!(!r.included);
        assert_eq!(r.max_deviation, 0.5);
        assert_eq!(r.worst, Some(c(0.5, 0.0)));
    }

    #[test]
    fn shift_report_passes() {
        for depth in [1, 100] {
            let r = shift_counterexample_report(depth, 100, 7).unwrap();
            assert!(r.all_passed(), "{:?}", r.checks);
            assert!(r.one_sided_claims_invertible);
            assert!(r.left_witness);
            assert!(r.narrative.iter().any(|l| l.contains("unsound")));
        }
        assert!(shift_counterexample_report(0, 1, 0).is_err());
    }
}
