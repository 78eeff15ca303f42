//! Laplace-type operators: dense materialization of finite graphs, exact
//! sparse application, norm bounds, and streamed operators on infinite
//! vertex sets such as the one-sided shift.
//!
//! Matrix convention: `entry[u][w]` is the sum of the weights of all arcs
//! `u → w`, so `(H f)(u) = Σ_w entry[u][w] · f(w)` and rows index the
//! vertex being evaluated. Indices follow the graph's sorted vertex order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// Largest dimension accepted for dense storage.
pub const DENSE_CAP: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
    labels: Vec<VertexId>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
            labels: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        ComplexMatrix {
            dim,
            data,
            labels: Vec::new(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::MalformedMatrix);
        }
        Ok(ComplexMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
            labels: Vec::new(),
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::from(x)).collect())
                .collect(),
        )
    }

    /// Attaches a vertex ordering; `labels.len()` must equal the dimension.
    pub fn with_labels(mut self, labels: Vec<VertexId>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::MalformedMatrix);
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row/column labels, or `0..n` when none were attached.
    pub fn labels(&self) -> Vec<VertexId> {
        if self.labels.is_empty() {
            (0..self.dim).map(|i| i.to_string()).collect()
        } else {
            self.labels.clone()
        }
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::from_fn(self.dim, |i, j| self[(j, i)].conj());
        out.labels = self.labels.clone();
        out
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        self.map(|z| z * lambda)
    }

    /// `self − λ I`.
    pub fn shift(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] -= lambda;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::from(-1.0)))
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out.labels = self.labels.clone();
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Conjugate symmetry checked entrywise against `tol · max(1, max|entry|)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = tol * self.max_abs().max(1.0);
        (0..self.dim).all(|i| (i..self.dim).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= scale))
    }

    /// Schur-type bound `sqrt(max row abs-sum · max column abs-sum) ≥ ‖M‖₂`.
    pub fn norm_bound(&self) -> f64 {
        let n = self.dim;
        let mut rows = vec![0.0; n];
        let mut cols = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)].norm();
                rows[i] += a;
                cols[j] += a;
            }
        }
        let r = rows.into_iter().fold(0.0, f64::max);
        let c = cols.into_iter().fold(0.0, f64::max);
        (r * c).sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Dense matrix of the Laplace-type operator of a finite graph.
pub fn materialize(graph: &WeightedGraph) -> Result<ComplexMatrix> {
    let n = graph.vertex_count();
    if n > DENSE_CAP {
        return Err(Error::DimensionCap { dim: n, cap: DENSE_CAP });
    }
    let mut m = ComplexMatrix::zeros(n);
    for a in graph.arcs() {
        m[(a.source, a.target)] += a.weight;
    }
    m.with_labels(graph.vertices().to_vec())
}

/// `sqrt((max_v Σ_out |w|) · (max_v Σ_in |w|))`, an upper bound on `‖H_Γ‖`.
pub fn norm_bound(graph: &WeightedGraph) -> f64 {
    let n = graph.vertex_count();
    let mut out = vec![0.0; n];
    let mut inc = vec![0.0; n];
    for a in graph.arcs() {
        let w = a.weight.norm();
        out[a.source] += w;
        inc[a.target] += w;
    }
    let r = out.into_iter().fold(0.0, f64::max);
    let c = inc.into_iter().fold(0.0, f64::max);
    (r * c).sqrt()
}

/// Finitely supported vector. Only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinSuppVector<K: Ord> {
    entries: BTreeMap<K, Complex64>,
}

impl<K: Ord> Default for FinSuppVector<K> {
    fn default() -> Self {
        FinSuppVector {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FinSuppVector<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(k: K) -> Self {
        let mut v = Self::new();
        v.set(k, Complex64::ONE);
        v
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (K, Complex64)>) -> Self {
        let mut v = Self::new();
        for (k, z) in entries {
            v.add_at(k, z);
        }
        v
    }

    pub fn get(&self, k: &K) -> Complex64 {
        self.entries.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn set(&mut self, k: K, z: Complex64) {
        if z == Complex64::ZERO {
            self.entries.remove(&k);
        } else {
            self.entries.insert(k, z);
        }
    }

    pub fn add_at(&mut self, k: K, z: Complex64) {
        let v = self.get(&k) + z;
        self.set(k, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `⟨self, other⟩ = Σ self(k) · conj(other(k))`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.entries
            .iter()
            .map(|(k, z)| z * other.get(k).conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self::from_entries(self.entries.iter().map(|(k, z)| (k.clone(), z * lambda)))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, z) in &other.entries {
            out.add_at(k.clone(), -z);
        }
        out
    }

    /// Relabels the support through `f`.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> FinSuppVector<J> {
        FinSuppVector::from_entries(self.entries.iter().map(|(k, z)| (f(k), *z)))
    }
}

/// Exact application to finitely supported vectors.
pub trait SparseOperator<K: Ord + Clone> {
    fn apply(&self, f: &FinSuppVector<K>) -> FinSuppVector<K>;
}

impl SparseOperator<VertexId> for WeightedGraph {
    fn apply(&self, f: &FinSuppVector<VertexId>) -> FinSuppVector<VertexId> {
        let values: Vec<Complex64> = self.vertices().iter().map(|v| f.get(v)).collect();
        let mut acc = vec![Complex64::ZERO; self.vertex_count()];
        for a in self.arcs() {
            let x = values[a.target];
            if x != Complex64::ZERO {
                acc[a.source] += a.weight * x;
            }
        }
        FinSuppVector::from_entries(
            self.vertices()
                .iter()
                .cloned()
                .zip(acc)
                .filter(|(_, z)| *z != Complex64::ZERO),
        )
    }
}

/// Declared bounds for a streamed operator's row and column absolute sums.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamBounds {
    pub max_out_sum: f64,
    pub max_in_sum: f64,
}

type ArcRule<K> = Box<dyn Fn(&K) -> Vec<(K, Complex64)> + Send + Sync>;

/// A graph on a possibly infinite vertex set, given by local rules.
///
/// `out_arcs(v)` lists `(w, weight)` for arcs `v → w`, so
/// `(H f)(v) = Σ weight · f(w)`. `in_arcs(w)` lists `(v, weight)` for the
/// same arcs seen from their target; the two rules must agree.
pub struct StreamedGraph<K> {
    out_rule: ArcRule<K>,
    in_rule: ArcRule<K>,
    bounds: Option<StreamBounds>,
}

impl<K> fmt::Debug for StreamedGraph<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StreamedGraph")
            .field("bounds", &self.bounds)
            .finish_non_exhaustive()
    }
}

impl<K: Ord + Clone> StreamedGraph<K> {
    pub fn new(
        out_rule: impl Fn(&K) -> Vec<(K, Complex64)> + Send + Sync + 'static,
        in_rule: impl Fn(&K) -> Vec<(K, Complex64)> + Send + Sync + 'static,
    ) -> Self {
        StreamedGraph {
            out_rule: Box::new(out_rule),
            in_rule: Box::new(in_rule),
            bounds: None,
        }
    }

    pub fn with_bounds(mut self, bounds: StreamBounds) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn out_arcs(&self, v: &K) -> Vec<(K, Complex64)> {
        (self.out_rule)(v)
    }

    pub fn in_arcs(&self, w: &K) -> Vec<(K, Complex64)> {
        (self.in_rule)(w)
    }

    /// `(H f)(v)` read off the out-arcs of `v`.
    pub fn evaluate(&self, v: &K, f: &FinSuppVector<K>) -> Complex64 {
        self.out_arcs(v).iter().map(|(w, a)| a * f.get(w)).sum()
    }

    pub fn norm_bound(&self) -> Result<f64> {
        self.bounds
            .map(|b| (b.max_out_sum * b.max_in_sum).sqrt())
            .ok_or(Error::BoundsUndeclared)
    }
}

impl<K: Ord + Clone> SparseOperator<K> for StreamedGraph<K> {
    fn apply(&self, f: &FinSuppVector<K>) -> FinSuppVector<K> {
        let mut out = FinSuppVector::new();
        for (w, x) in f.iter() {
            for (v, a) in self.in_arcs(w) {
                out.add_at(v, a * x);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftDirection {
    Forward,
    Adjoint,
}

/// The one-sided shift on `l²(ℕ)`: `Forward` is `(S f)(n) = f(n−1)` with
/// `(S f)(0) = 0`; `Adjoint` is `(S* f)(n) = f(n+1)`.
pub fn shift_graph(direction: ShiftDirection) -> StreamedGraph<u64> {
    let back = |n: &u64| match n.checked_sub(1) {
        Some(m) => vec![(m, Complex64::ONE)],
        None => Vec::new(),
    };
    let ahead = |n: &u64| vec![(n + 1, Complex64::ONE)];
    let g = match direction {
        ShiftDirection::Forward => StreamedGraph::new(back, ahead),
        ShiftDirection::Adjoint => StreamedGraph::new(ahead, back),
    };
    g.with_bounds(StreamBounds {
        max_out_sum: 1.0,
        max_in_sum: 1.0,
    })
}
