//! Dense eigenvalue solvers for complex matrices.
//!
//! General matrices: Householder reduction to upper Hessenberg form, then
//! implicit single-shift QR with Wilkinson shifts and Givens rotations.
//! Hermitian matrices: Householder reduction to a real symmetric
//! tridiagonal matrix, then implicit QL with Wilkinson shifts.
//!
//! Only eigenvalues are computed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::ComplexMatrix;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

struct Dense {
    n: usize,
    a: Vec<Complex64>,
}

impl Dense {
    fn from(m: &ComplexMatrix) -> Self {
        Dense {
            n: m.dim(),
            a: m.as_slice().to_vec(),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }
}

/// Householder vector for `x`: returns `(v, alpha)` with `‖v‖ = 1` and
/// `(I − 2vv*) x = alpha e₁`, or `None` when `x` is already a multiple of `e₁`.
fn householder(x: &[Complex64]) -> Option<(Vec<Complex64>, Complex64)> {
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        return None;
    }
    let norm = (x[0].norm_sqr() + tail).sqrt();
    let phase = if x[0] == Complex64::ZERO {
        Complex64::ONE
    } else {
        x[0] / x[0].norm()
    };
    let alpha = -phase * norm;
    let mut v = x.to_vec();
    v[0] -= alpha;
    let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= vn;
    }
    Some((v, alpha))
}

/// Reduces to upper Hessenberg form in place by unitary similarity.
fn hessenberg(h: &mut Dense) {
    let n = h.n;
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h.at(i, k)).collect();
        let Some((v, _)) = householder(&x) else {
            continue;
        };
        // Left: rows k+1.., columns k..
        for j in k..n {
            let t: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h.at(k + 1 + r, j))
                .sum();
            for (r, vr) in v.iter().enumerate() {
                *h.at_mut(k + 1 + r, j) -= 2.0 * vr * t;
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let t: Complex64 = v
                .iter()
                .enumerate()
                .map(|(c, vc)| h.at(i, k + 1 + c) * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                *h.at_mut(i, k + 1 + c) -= 2.0 * t * vc.conj();
            }
        }
        for i in k + 2..n {
            *h.at_mut(i, k) = Complex64::ZERO;
        }
    }
}

/// Rotation `[[c, s], [−s̄, c]]` mapping `(x, y)` to `(r, 0)`.
#[derive(Clone, Copy)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    fn zeroing(x: Complex64, y: Complex64) -> Self {
        if y == Complex64::ZERO {
            return Givens {
                c: 1.0,
                s: Complex64::ZERO,
            };
        }
        let ax = x.norm();
        let rho = ax.hypot(y.norm());
        if ax == 0.0 {
            return Givens {
                c: 0.0,
                s: y.conj() / y.norm(),
            };
        }
        Givens {
            c: ax / rho,
            s: (x / ax) * y.conj() / rho,
        }
    }

    fn rows(&self, h: &mut Dense, k: usize, cols: std::ops::RangeInclusive<usize>) {
        for j in cols {
            let u = h.at(k, j);
            let v = h.at(k + 1, j);
            *h.at_mut(k, j) = self.c * u + self.s * v;
            *h.at_mut(k + 1, j) = -self.s.conj() * u + self.c * v;
        }
    }

    fn cols(&self, h: &mut Dense, k: usize, rows: std::ops::RangeInclusive<usize>) {
        for i in rows {
            let p = h.at(i, k);
            let q = h.at(i, k + 1);
            *h.at_mut(i, k) = p * self.c + q * self.s.conj();
            *h.at_mut(i, k + 1) = -p * self.s + q * self.c;
        }
    }
}

/// Eigenvalue of the 2×2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square complex matrix, with multiplicity.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let mut h = Dense::from(m);
    let n = h.n;
    if n == 0 {
        return Ok(Vec::new());
    }
    hessenberg(&mut h);
    let scale = h.a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(vec![Complex64::ZERO; n]);
    }

    let mut eig = vec![Complex64::ZERO; n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h.at(0, 0);
            break;
        }
        // Deflate negligible subdiagonals.
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).norm();
            let mut diag = h.at(lo - 1, lo - 1).norm() + h.at(lo, lo).norm();
            if diag == 0.0 {
                diag = scale;
            }
            if sub <= f64::EPSILON * diag {
                *h.at_mut(lo, lo - 1) = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h.at(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }

        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(Error::NoConvergence);
        }
        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h.at(hi, hi) + 0.75 * h.at(hi, hi - 1).re.abs()
        } else {
            wilkinson_shift(
                h.at(hi - 1, hi - 1),
                h.at(hi - 1, hi),
                h.at(hi, hi - 1),
                h.at(hi, hi),
            )
        };

        // Implicit single-shift sweep on the active block lo..=hi.
        let g = Givens::zeroing(h.at(lo, lo) - mu, h.at(lo + 1, lo));
        g.rows(&mut h, lo, lo..=hi);
        g.cols(&mut h, lo, lo..=(lo + 2).min(hi));
        for k in lo + 1..hi {
            let g = Givens::zeroing(h.at(k, k - 1), h.at(k + 1, k - 1));
            g.rows(&mut h, k, k - 1..=hi);
            *h.at_mut(k + 1, k - 1) = Complex64::ZERO;
            g.cols(&mut h, k, lo..=(k + 2).min(hi));
        }
    }
    Ok(eig)
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read; the upper triangle is taken as its conjugate.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = Dense::from(m);
    for i in 0..n {
        let d = a.at(i, i).re;
        *a.at_mut(i, i) = Complex64::from(d);
        for j in 0..i {
            let z = a.at(i, j);
            *a.at_mut(j, i) = z.conj();
        }
    }

    // Tridiagonalize: after step k, column k below the subdiagonal is zero.
    let mut off = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a.at(i, k)).collect();
        let Some((v, alpha)) = householder(&x) else {
            off[k] = x[0].norm();
            continue;
        };
        off[k] = alpha.norm();
        let len = v.len();
        let base = k + 1;
        // w = A₂₂ v, beta = v* w, q = w − beta v; A₂₂ ← A₂₂ − 2vq* − 2qv*.
        let w: Vec<Complex64> = (0..len)
            .map(|r| (0..len).map(|c| a.at(base + r, base + c) * v[c]).sum())
            .collect();
        let beta: Complex64 = v.iter().zip(&w).map(|(vi, wi)| vi.conj() * wi).sum();
        let q: Vec<Complex64> = w.iter().zip(&v).map(|(wi, vi)| wi - beta.re * vi).collect();
        for r in 0..len {
            for c in 0..len {
                let upd = 2.0 * (v[r] * q[c].conj() + q[r] * v[c].conj());
                *a.at_mut(base + r, base + c) -= upd;
            }
        }
    }
    let mut diag: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    off[n - 1] = 0.0;
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e[i]` couples `i` and `i+1`,
/// `e[n−1] = 0`). Eigenvalues are left in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn empty_and_scalar() {
        assert!(general_eigenvalues(&ComplexMatrix::zeros(0)).unwrap().is_empty());
        let m = ComplexMatrix::from_rows(vec![vec![Complex64::new(2.0, -1.0)]]).unwrap();
        assert_eq!(general_eigenvalues(&m).unwrap(), vec![Complex64::new(2.0, -1.0)]);
        assert_eq!(hermitian_eigenvalues(&ComplexMatrix::identity(1)).unwrap(), vec![1.0]);
    }

    #[test]
    fn nilpotent_two_by_two() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(general_eigenvalues(&m).unwrap(), vec![Complex64::ZERO; 2]);
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let ev = sorted(general_eigenvalues(&m).unwrap());
        assert!((ev[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((ev[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn cyclic_permutation_gives_roots_of_unity() {
        let n = 7;
        let m = ComplexMatrix::from_fn(n, |i, j| if j == (i + 1) % n { Complex64::ONE } else { Complex64::ZERO });
        let ev = general_eigenvalues(&m).unwrap();
        for k in 0..n {
            let root = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
            let best = ev.iter().map(|z| (z - root).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12, "root {k} missed by {best}");
        }
    }

    #[test]
    fn hermitian_path_graph() {
        // Path on n vertices: 2 cos(πk/(n+1)).
        let n = 9;
        let m = ComplexMatrix::from_fn(n, |i, j| if i.abs_diff(j) == 1 { Complex64::ONE } else { Complex64::ZERO });
        let ev = hermitian_eigenvalues(&m).unwrap();
        let mut expected: Vec<f64> = (1..=n).map(|k| 2.0 * (PI * k as f64 / (n + 1) as f64).cos()).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn hermitian_complex_two_by_two() {
        // [[1, i], [−i, 1]] has eigenvalues 0 and 2.
        let i = Complex64::I;
        let m = ComplexMatrix::from_rows(vec![vec![Complex64::ONE, i], vec![-i, Complex64::ONE]]).unwrap();
        let ev = hermitian_eigenvalues(&m).unwrap();
        assert!(ev[0].abs() < 1e-15 && (ev[1] - 2.0).abs() < 1e-15);
    }
}
