//! Weighted multigraphs and their algebra.
//!
//! A graph is a sorted vertex list plus a list of directed arcs. Every arc
//! carries a complex weight and is paired with its reversal by an involution
//! on arc indices, so an undirected edge `e = {v, w}` with per-endpoint
//! weights `α(v,e)`, `α(w,e)` is the arc pair `v → w`, `w → v`. A loop is
//! usually paired with itself.
//!
//! The Laplace-type operator of a graph acts by
//! `(H f)(v) = Σ_{arcs a: v → w} weight(a) · f(w)`, so every operation below
//! is mirrored by the matching operation on operators:
//!
//! | graph                 | operator            |
//! |-----------------------|---------------------|
//! | `g.scale(λ)`          | `λ H`               |
//! | `g.add_scalar(λ)`     | `λ I + H`           |
//! | `g.adjoint()`         | `H*`                |
//! | `g.compose(&h)`       | `H_g H_h`           |
//!
//! A loop arc contributes its weight exactly once.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Opaque vertex identifier. Ordered lexicographically.
pub type VertexId = String;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub weight: Complex64,
}

impl Arc {
    pub fn new(source: usize, target: usize, weight: Complex64) -> Self {
        Arc {
            source,
            target,
            weight,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Which product the deficiency operator is built from.
///
/// `Left` is `I − (A−λ)(A−λ)*/R²`, `Right` is `I − (A−λ)*(A−λ)/R²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(format!("expected `left` or `right`, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    arcs: Vec<Arc>,
    pairing: Vec<usize>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.chars().any(char::is_whitespace)
}

/// Builds a graph from named arcs `(source, target, weight)`.
pub fn make_graph<S: AsRef<str>>(
    vertices: &[S],
    arcs: &[(S, S, Complex64)],
    pairing: Vec<usize>,
) -> Result<WeightedGraph> {
    let ids: Vec<VertexId> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
    let lookup: HashMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_ref(), i))
        .collect();
    let mut indexed = Vec::with_capacity(arcs.len());
    for (k, (s, t, w)) in arcs.iter().enumerate() {
        let find = |name: &S| {
            lookup
                .get(name.as_ref())
                .copied()
                .ok_or_else(|| Error::DanglingVertex {
                    arc: k,
                    vertex: name.as_ref().to_string(),
                })
        };
        indexed.push(Arc::new(find(s)?, find(t)?, *w));
    }
    WeightedGraph::new(ids, indexed, pairing)
}

impl WeightedGraph {
    /// Validates and builds a graph. Arc endpoints index into `vertices` as
    /// given; the vertex list is then sorted and the arcs remapped.
    pub fn new(vertices: Vec<VertexId>, arcs: Vec<Arc>, pairing: Vec<usize>) -> Result<Self> {
        for v in &vertices {
            if !valid_id(v) {
                return Err(Error::InvalidVertexId(v.clone()));
            }
        }
        let n = vertices.len();
        for (k, a) in arcs.iter().enumerate() {
            for end in [a.source, a.target] {
                if end >= n {
                    return Err(Error::DanglingVertex {
                        arc: k,
                        vertex: format!("#{end}"),
                    });
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut remap = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<VertexId> = order.iter().map(|&i| vertices[i].clone()).collect();
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateVertex(pair[0].clone()));
            }
        }
        let arcs = arcs
            .into_iter()
            .map(|a| Arc::new(remap[a.source], remap[a.target], a.weight))
            .collect();
        Self::from_sorted(sorted, arcs, pairing)
    }

    /// Builds from an already sorted, duplicate-free vertex list.
    pub(crate) fn from_sorted(
        vertices: Vec<VertexId>,
        arcs: Vec<Arc>,
        pairing: Vec<usize>,
    ) -> Result<Self> {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let g = WeightedGraph {
            vertices,
            index,
            arcs,
            pairing,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let m = self.arcs.len();
        if self.pairing.len() != m {
            return Err(Error::PairingLength {
                pairing: self.pairing.len(),
                arcs: m,
            });
        }
        for (k, a) in self.arcs.iter().enumerate() {
            if a.source >= self.vertices.len() || a.target >= self.vertices.len() {
                return Err(Error::DanglingVertex {
                    arc: k,
                    vertex: format!("#{}", a.source.max(a.target)),
                });
            }
            let p = self.pairing[k];
            if p >= m {
                return Err(Error::PairingOutOfRange { arc: k, target: p });
            }
            if self.pairing[p] != k {
                return Err(Error::PairingNotInvolutive { arc: k });
            }
            let b = &self.arcs[p];
            if b.source != a.target || b.target != a.source {
                return Err(Error::PairingEndpointMismatch { arc: k, pair: p });
            }
        }
        Ok(())
    }

    /// One self-paired loop of weight 1 at each vertex.
    pub fn identity(vertices: Vec<VertexId>) -> Result<Self> {
        let n = vertices.len();
        let arcs = (0..n).map(|i| Arc::new(i, i, Complex64::ONE)).collect();
        Self::new(vertices, arcs, (0..n).collect())
    }

    /// Undirected graph from `(u, v, weight)` edges; both arcs of an edge get
    /// the same weight and a loop `(v, v, w)` becomes one self-paired arc.
    pub fn undirected(vertices: Vec<VertexId>, edges: &[(usize, usize, Complex64)]) -> Result<Self> {
        let mut arcs = Vec::new();
        let mut pairing = Vec::new();
        for &(u, v, w) in edges {
            let k = arcs.len();
            if u == v {
                arcs.push(Arc::new(u, u, w));
                pairing.push(k);
            } else {
                arcs.push(Arc::new(u, v, w));
                arcs.push(Arc::new(v, u, w));
                pairing.extend([k + 1, k]);
            }
        }
        Self::new(vertices, arcs, pairing)
    }

    /// The `n`-cycle on vertices `c00, c01, …` with constant weight.
    pub fn cycle(n: usize, weight: Complex64) -> Result<Self> {
        let width = n.to_string().len();
        let names = (0..n).map(|i| format!("c{i:0width$}")).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, weight)).collect();
        Self::undirected(names, &edges)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn pair_of(&self, arc: usize) -> usize {
        self.pairing[arc]
    }

    /// Out-arc indices of every vertex, ascending.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertices.len()];
        for (k, a) in self.arcs.iter().enumerate() {
            out[a.source].push(k);
        }
        out
    }

    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (k, a) in self.arcs.iter().enumerate() {
            inc[a.target].push(k);
        }
        inc
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_arcs().iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_abs_weight(&self) -> f64 {
        self.arcs.iter().map(|a| a.weight.norm()).fold(0.0, f64::max)
    }

    /// True when both graphs have the same vertices, arc endpoints and
    /// pairing, differing at most in weights.
    pub fn same_skeleton(&self, other: &WeightedGraph) -> bool {
        self.vertices == other.vertices
            && self.pairing == other.pairing
            && self
                .arcs
                .iter()
                .zip(&other.arcs)
                .all(|(a, b)| a.source == b.source && a.target == b.target)
    }

    pub(crate) fn with_arcs(&self, arcs: Vec<Arc>, pairing: Vec<usize>) -> Self {
        let g = WeightedGraph {
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            arcs,
            pairing,
        };
        debug_assert!(g.validate().is_ok());
        g
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc::new(a.source, a.target, a.weight * lambda))
            .collect();
        self.with_arcs(arcs, self.pairing.clone())
    }

    /// Appends one self-paired loop of weight `lambda` per vertex, in vertex
    /// order, after the existing arcs.
    pub fn add_scalar(&self, lambda: Complex64) -> Self {
        let m = self.arcs.len();
        let mut arcs = self.arcs.clone();
        let mut pairing = self.pairing.clone();
        for v in 0..self.vertices.len() {
            arcs.push(Arc::new(v, v, lambda));
            pairing.push(m + v);
        }
        self.with_arcs(arcs, pairing)
    }

    /// Each arc takes the conjugated weight of its reverse.
    pub fn adjoint(&self) -> Self {
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .map(|(k, a)| Arc::new(a.source, a.target, self.arcs[self.pairing[k]].weight.conj()))
            .collect();
        self.with_arcs(arcs, self.pairing.clone())
    }

    /// One arc `v → u` of weight `α(a)·α̃(b)` for every arc `a = v → w` of
    /// `self` followed by an arc `b = w → u` of `other`.
    ///
    /// When both graphs share a skeleton the path `(a, b)` is paired with
    /// `(pair(b), pair(a))`. Otherwise no such reversal need exist, and each
    /// path arc is instead paired with an appended zero-weight reverse arc.
    pub fn compose(&self, other: &WeightedGraph) -> Result<Self> {
        if self.vertices != other.vertices {
            return Err(Error::VertexSetMismatch);
        }
        let layout = CompositionLayout::new(self, other);
        let mut arcs = Vec::with_capacity(layout.arc_count());
        for &(a, b) in &layout.paths {
            let (x, y) = (&self.arcs[a], &other.arcs[b]);
            arcs.push(Arc::new(x.source, y.target, x.weight * y.weight));
        }
        let pairing = if layout.mirrored {
            layout
                .paths
                .iter()
                .map(|&(a, b)| layout.index_of(other.pairing[b], self.pairing[a]))
                .collect()
        } else {
            let p = layout.paths.len();
            for k in 0..p {
                let fwd = arcs[k];
                arcs.push(Arc::new(fwd.target, fwd.source, Complex64::ZERO));
            }
            (0..p).map(|k| k + p).chain(0..p).collect()
        };
        Ok(self.with_arcs(arcs, pairing))
    }

    /// `1 − (1/R²)·(Γ−λ)*∘(Γ−λ)` for `Right`, factors swapped for `Left`,
    /// assembled from the four graph operations.
    pub fn deficiency(&self, lambda: Complex64, radius: f64, side: Side) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::NonPositiveRadius(radius));
        }
        let shifted = self.add_scalar(-lambda);
        let adj = shifted.adjoint();
        let product = match side {
            Side::Right => adj.compose(&shifted)?,
            Side::Left => shifted.compose(&adj)?,
        };
        Ok(product
            .scale(Complex64::from(-1.0 / (radius * radius)))
            .add_scalar(Complex64::ONE))
    }

    /// Merges parallel arcs with equal endpoints by summing weights. The
    /// operator is unchanged; the combinatorics are not.
    pub fn normalize(&self) -> Self {
        let mut slot: HashMap<(usize, usize), usize> = HashMap::new();
        let mut arcs: Vec<Arc> = Vec::new();
        for a in &self.arcs {
            match slot.get(&(a.source, a.target)) {
                Some(&k) => arcs[k].weight += a.weight,
                None => {
                    slot.insert((a.source, a.target), arcs.len());
                    arcs.push(*a);
                }
            }
        }
        // Reverse arcs always exist in a valid graph, so this lookup succeeds.
        let pairing = arcs.iter().map(|a| slot[&(a.target, a.source)]).collect();
        self.with_arcs(arcs, pairing)
    }
}

/// Arc indexing of `g ∘ h`: path arcs `(a, b)` enumerated by `a` ascending,
/// then `b` ascending among the out-arcs of `target(a)` in `h`. When the two
/// graphs do not share a skeleton, zero-weight reverses follow at
/// `paths.len() + k`.
#[derive(Debug, Clone)]
pub(crate) struct CompositionLayout {
    pub paths: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    out: Vec<Vec<usize>>,
    targets: Vec<usize>,
    pub mirrored: bool,
}

impl CompositionLayout {
    pub fn new(g: &WeightedGraph, h: &WeightedGraph) -> Self {
        let out = h.out_arcs();
        let mut paths = Vec::new();
        let mut offsets = Vec::with_capacity(g.arcs.len());
        for (a, arc) in g.arcs.iter().enumerate() {
            offsets.push(paths.len());
            paths.extend(out[arc.target].iter().map(|&b| (a, b)));
        }
        CompositionLayout {
            paths,
            offsets,
            out,
            targets: g.arcs.iter().map(|a| a.target).collect(),
            mirrored: g.same_skeleton(h),
        }
    }

    pub fn arc_count(&self) -> usize {
        if self.mirrored {
            self.paths.len()
        } else {
            2 * self.paths.len()
        }
    }

    /// Index of the path arc `(a, b)`; panics if `b` does not leave `target(a)`.
    pub fn index_of(&self, a: usize, b: usize) -> usize {
        let row = &self.out[self.targets[a]];
        let pos = row
            .binary_search(&b)
            .expect("arc does not continue the path");
        self.offsets[a] + pos
    }

    /// Index of the zero-weight reverse of path arc `k`, if reverses exist.
    pub fn reverse_of(&self, k: usize) -> Option<usize> {
        (!self.mirrored).then_some(self.paths.len() + k)
    }
}
