//! Coverings of weighted graphs.
//!
//! A covering `Γ₁ → Γ₂` is a vertex map `φ` and an arc map `Ψ` that respect
//! endpoints, the reversal pairing and weights, and restrict to a bijection
//! from the out-arcs of each `v` onto the out-arcs of `φ(v)`. Coverings are
//! preserved by scaling, adding a scalar, taking adjoints and composing two
//! coverings that share `φ`; [`induced_covering`] builds the transported
//! maps. For finite graphs the pullback `P f = f ∘ φ` intertwines the two
//! operators, which forces `σ(H₂) ⊆ σ(H₁)`. Infinite covers are out of reach:
//! with an infinite `Γ₂` of subexponential growth there is no finite
//! certificate to check.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Arc, CompositionLayout, Side, VertexId, WeightedGraph};
use crate::operator::materialize;
use crate::perm::Permutation;
use crate::spectra::{spectrum, subset_check, SpectralSet, SubsetReport};
use crate::{eigen, spectra};

#[derive(Debug, Clone, PartialEq)]
pub struct CoveringMap {
    cover: WeightedGraph,
    base: WeightedGraph,
    vertex_map: Vec<usize>,
    arc_map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `φ(source(a)) ≠ source(Ψ(a))` or likewise for targets.
    Endpoint { arc: usize },
    /// `Ψ(pair(a)) ≠ pair(Ψ(a))`.
    Pairing { arc: usize },
    /// `weight(Ψ(a)) ≠ weight(a)`.
    Weight { arc: usize },
    /// `Ψ` is not a bijection from the out-arcs of the vertex onto those of its image.
    LocalBijection { vertex: usize },
    /// The base vertex has no preimage.
    NotSurjective { base_vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Endpoint { arc } => write!(f, "endpoint compatibility fails at cover arc {arc}"),
            Violation::Pairing { arc } => write!(f, "pairing compatibility fails at cover arc {arc}"),
            Violation::Weight { arc } => write!(f, "weight preservation fails at cover arc {arc}"),
            Violation::LocalBijection { vertex } => {
                write!(f, "local bijectivity fails at cover vertex {vertex}")
            }
            Violation::NotSurjective { base_vertex } => {
                write!(f, "base vertex {base_vertex} has no preimage")
            }
        }
    }
}

impl Violation {
    pub fn invariant(&self) -> &'static str {
        match self {
            Violation::Endpoint { .. } => "endpoint",
            Violation::Pairing { .. } => "pairing",
            Violation::Weight { .. } => "weight",
            Violation::LocalBijection { .. } => "local_bijection",
            Violation::NotSurjective { .. } => "surjective",
        }
    }
}

impl CoveringMap {
    /// Checks index ranges only; use [`verify_covering`] for the covering
    /// conditions themselves.
    pub fn new(
        cover: WeightedGraph,
        base: WeightedGraph,
        vertex_map: Vec<usize>,
        arc_map: Vec<usize>,
    ) -> Result<Self> {
        if vertex_map.len() != cover.vertex_count() {
            return Err(Error::CoveringIndex {
                what: "cover vertex",
                index: vertex_map.len(),
            });
        }
        if arc_map.len() != cover.arc_count() {
            return Err(Error::CoveringIndex {
                what: "cover arc",
                index: arc_map.len(),
            });
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= base.vertex_count()) {
            return Err(Error::CoveringIndex {
                what: "base vertex",
                index: v,
            });
        }
        if let Some(&a) = arc_map.iter().find(|&&a| a >= base.arc_count()) {
            return Err(Error::CoveringIndex {
                what: "base arc",
                index: a,
            });
        }
        Ok(CoveringMap {
            cover,
            base,
            vertex_map,
            arc_map,
        })
    }

    /// Builds from vertex ids: `vertex_map` pairs cover ids with base ids.
    pub fn from_named(
        cover: WeightedGraph,
        base: WeightedGraph,
        vertex_map: &[(VertexId, VertexId)],
        arc_map: Vec<usize>,
    ) -> Result<Self> {
        let mut vm = vec![usize::MAX; cover.vertex_count()];
        for (c, b) in vertex_map {
            let ci = cover.vertex_index(c).ok_or_else(|| Error::UnknownPoint(c.clone()))?;
            let bi = base.vertex_index(b).ok_or_else(|| Error::UnknownPoint(b.clone()))?;
            vm[ci] = bi;
        }
        if let Some(missing) = vm.iter().position(|&v| v == usize::MAX) {
            return Err(Error::InvalidCovering(format!(
                "cover vertex {:?} is not mapped",
                cover.vertices()[missing]
            )));
        }
        Self::new(cover, base, vm, arc_map)
    }

    pub fn identity(graph: &WeightedGraph) -> Self {
        CoveringMap {
            cover: graph.clone(),
            base: graph.clone(),
            vertex_map: (0..graph.vertex_count()).collect(),
            arc_map: (0..graph.arc_count()).collect(),
        }
    }

    pub fn cover(&self) -> &WeightedGraph {
        &self.cover
    }

    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn arc_map(&self) -> &[usize] {
        &self.arc_map
    }

    /// Returns a copy with one cover arc's weight replaced; used to build
    /// deliberately broken maps.
    pub fn with_cover_weight(&self, arc: usize, weight: Complex64) -> Result<Self> {
        let mut arcs = self.cover.arcs().to_vec();
        arcs.get_mut(arc)
            .ok_or(Error::CoveringIndex { what: "cover arc", index: arc })?
            .weight = weight;
        let cover = self.cover.with_arcs(arcs, self.cover.pairing().to_vec());
        Ok(CoveringMap { cover, ..self.clone() })
    }
}

/// Every violated covering condition; empty means the map is a covering.
pub fn verify_covering(c: &CoveringMap) -> Vec<Violation> {
    let (g1, g2) = (&c.cover, &c.base);
    let (phi, psi) = (&c.vertex_map, &c.arc_map);
    let mut out = Vec::new();
    for (k, a) in g1.arcs().iter().enumerate() {
        let b = &g2.arcs()[psi[k]];
        if phi[a.source] != b.source || phi[a.target] != b.target {
            out.push(Violation::Endpoint { arc: k });
        }
        if psi[g1.pair_of(k)] != g2.pair_of(psi[k]) {
            out.push(Violation::Pairing { arc: k });
        }
        if a.weight != b.weight {
            out.push(Violation::Weight { arc: k });
        }
    }
    let base_out = g2.out_arcs();
    for (v, arcs) in g1.out_arcs().iter().enumerate() {
        let mut images: Vec<usize> = arcs.iter().map(|&a| psi[a]).collect();
        images.sort_unstable();
        if images != base_out[phi[v]] {
            out.push(Violation::LocalBijection { vertex: v });
        }
    }
    let mut hit = vec![false; g2.vertex_count()];
    for &v in phi {
        hit[v] = true;
    }
    out.extend(
        hit.iter()
            .enumerate()
            .filter(|(_, &h)| !h)
            .map(|(v, _)| Violation::NotSurjective { base_vertex: v }),
    );
    out
}

#[derive(Debug, Clone, Copy)]
pub enum CoverOp<'a> {
    Scale(Complex64),
    AddScalar(Complex64),
    Adjoint,
    /// Compose with a second covering sharing the vertex map: the result
    /// covers `base ∘ other.base` by `cover ∘ other.cover`.
    Compose(&'a CoveringMap),
}

/// The covering between transformed graphs that a graph operation induces.
pub fn induced_covering(c: &CoveringMap, op: CoverOp<'_>) -> Result<CoveringMap> {
    match op {
        CoverOp::Scale(lambda) => Ok(CoveringMap {
            cover: c.cover.scale(lambda),
            base: c.base.scale(lambda),
            ..c.clone()
        }),
        CoverOp::Adjoint => Ok(CoveringMap {
            cover: c.cover.adjoint(),
            base: c.base.adjoint(),
            ..c.clone()
        }),
        CoverOp::AddScalar(lambda) => {
            let (m1, m2) = (c.cover.arc_count(), c.base.arc_count());
            let mut arc_map = c.arc_map.clone();
            arc_map.extend(c.vertex_map.iter().map(|&b| m2 + b));
            debug_assert_eq!(arc_map.len(), m1 + c.cover.vertex_count());
            Ok(CoveringMap {
                cover: c.cover.add_scalar(lambda),
                base: c.base.add_scalar(lambda),
                vertex_map: c.vertex_map.clone(),
                arc_map,
            })
        }
        CoverOp::Compose(other) => compose_coverings(c, other),
    }
}

fn compose_coverings(c: &CoveringMap, d: &CoveringMap) -> Result<CoveringMap> {
    if c.vertex_map != d.vertex_map
        || c.cover.vertices() != d.cover.vertices()
        || c.base.vertices() != d.base.vertices()
    {
        return Err(Error::VertexMapMismatch);
    }
    let upper = CompositionLayout::new(&c.cover, &d.cover);
    let lower = CompositionLayout::new(&c.base, &d.base);
    if upper.mirrored != lower.mirrored {
        return Err(Error::InvalidCovering(
            "cover and base pairs differ in whether they share a skeleton".into(),
        ));
    }
    let mut arc_map = vec![0; upper.arc_count()];
    for (k, &(a, b)) in upper.paths.iter().enumerate() {
        let (pa, pb) = (c.arc_map[a], d.arc_map[b]);
        if c.base.arcs()[pa].target != d.base.arcs()[pb].source {
            return Err(Error::InvalidCovering(format!(
                "images of cover arcs {a} and {b} do not form a path"
            )));
        }
        let image = lower.index_of(pa, pb);
        arc_map[k] = image;
        if let (Some(rk), Some(ri)) = (upper.reverse_of(k), lower.reverse_of(image)) {
            arc_map[rk] = ri;
        }
    }
    Ok(CoveringMap {
        cover: c.cover.compose(&d.cover)?,
        base: c.base.compose(&d.base)?,
        vertex_map: c.vertex_map.clone(),
        arc_map,
    })
}

/// Voltage assignment: one permutation of the sheets per base arc.
#[derive(Debug, Clone, PartialEq)]
pub struct Voltages {
    degree: usize,
    perms: Vec<Permutation>,
}

impl Voltages {
    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidVoltage("degree must be positive".into()));
        }
        if let Some(k) = perms.iter().position(|p| p.degree() != degree) {
            return Err(Error::InvalidVoltage(format!(
                "arc {k} has a permutation of degree {}, expected {degree}",
                perms[k].degree()
            )));
        }
        Ok(Voltages { degree, perms })
    }

    pub fn trivial(base: &WeightedGraph, degree: usize) -> Self {
        Voltages {
            degree,
            perms: vec![Permutation::identity(degree); base.arc_count()],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, arc: usize) -> &Permutation {
        &self.perms[arc]
    }

    /// Sets the voltage on an arc and its inverse on the paired arc.
    pub fn set_edge(&mut self, base: &WeightedGraph, arc: usize, perm: Permutation) -> Result<()> {
        let pair = base.pair_of(arc);
        if pair == arc && !perm.is_involution() {
            return Err(Error::VoltageInverse { arc });
        }
        self.perms[pair] = perm.inverse();
        self.perms[arc] = perm;
        Ok(())
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

/// Cover vertex id for base vertex `v` on 1-based sheet `sheet`.
pub fn sheet_id(v: &str, sheet: usize) -> VertexId {
    format!("{v}.{sheet}")
}

/// Lifts `base` along `voltages`. Cover arc `a·d + i` is the lift of base
/// arc `a` starting on sheet `i`: `(s(a), i) → (t(a), σ_a(i))`.
pub fn voltage_cover(base: &WeightedGraph, voltages: &Voltages) -> Result<(WeightedGraph, CoveringMap)> {
    let d = voltages.degree;
    if voltages.perms.len() != base.arc_count() {
        return Err(Error::InvalidVoltage(format!(
            "{} voltages for {} arcs",
            voltages.perms.len(),
            base.arc_count()
        )));
    }
    for k in 0..base.arc_count() {
        let p = base.pair_of(k);
        if voltages.perms[p] != voltages.perms[k].inverse() {
            return Err(Error::VoltageInverse { arc: k });
        }
    }

    let names: Vec<VertexId> = base
        .vertices()
        .iter()
        .flat_map(|v| (1..=d).map(move |i| sheet_id(v, i)))
        .collect();
    let lifted = |v: usize, i: usize| v * d + i;
    let mut arcs = Vec::with_capacity(base.arc_count() * d);
    let mut pairing = Vec::with_capacity(base.arc_count() * d);
    let mut arc_map = Vec::with_capacity(base.arc_count() * d);
    for (k, a) in base.arcs().iter().enumerate() {
        let sigma = &voltages.perms[k];
        for i in 0..d {
            arcs.push(Arc::new(lifted(a.source, i), lifted(a.target, sigma.apply(i)), a.weight));
            pairing.push(base.pair_of(k) * d + sigma.apply(i));
            arc_map.push(k);
        }
    }
    let cover = WeightedGraph::new(names.clone(), arcs, pairing)?;
    let mut vertex_map = vec![0; cover.vertex_count()];
    for (pos, name) in names.iter().enumerate() {
        let idx = cover.vertex_index(name).expect("lifted vertex exists");
        vertex_map[idx] = pos / d;
    }
    let map = CoveringMap::new(cover.clone(), base.clone(), vertex_map, arc_map)?;
    Ok((cover, map))
}

/// `max |H₁P − PH₂|` for the pullback `P[v₁][v₂] = [φ(v₁) = v₂]`.
pub fn intertwining_residual(c: &CoveringMap) -> Result<f64> {
    let h1 = materialize(&c.cover)?;
    let h2 = materialize(&c.base)?;
    let (n1, n2) = (h1.dim(), h2.dim());
    let mut worst: f64 = 0.0;
    let mut lhs = vec![Complex64::ZERO; n2];
    for v1 in 0..n1 {
        lhs.iter_mut().for_each(|z| *z = Complex64::ZERO);
        for w1 in 0..n1 {
            lhs[c.vertex_map[w1]] += h1[(v1, w1)];
        }
        let base_row = h2.row(c.vertex_map[v1]);
        for (l, r) in lhs.iter().zip(base_row) {
            worst = worst.max((l - r).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub subset: SubsetReport,
    pub intertwining_residual: f64,
    pub base_spectrum: SpectralSet,
    pub cover_spectrum: SpectralSet,
}

impl InclusionReport {
    pub fn included(&self) -> bool {
        self.subset.included
    }
}

fn require_valid(c: &CoveringMap) -> Result<()> {
    match verify_covering(c).first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidCovering(v.to_string())),
    }
}

/// Checks `σ(H_base) ⊆ σ(H_cover)` within `tol`, together with the
/// intertwining residual that forces it.
pub fn spectral_inclusion_check(c: &CoveringMap, tol: f64) -> Result<InclusionReport> {
    require_valid(c)?;
    let base_spectrum = spectrum(&materialize(&c.base)?)?;
    let cover_spectrum = spectrum(&materialize(&c.cover)?)?;
    let subset = subset_check(&base_spectrum, &cover_spectrum, tol)?;
    Ok(InclusionReport {
        subset,
        intertwining_residual: intertwining_residual(c)?,
        base_spectrum,
        cover_spectrum,
    })
}

/// Induced covering between the deficiency graphs of cover and base,
/// assembled from the same chain of operations as
/// [`WeightedGraph::deficiency`].
pub fn deficiency_covering(c: &CoveringMap, lambda: Complex64, radius: f64, side: Side) -> Result<CoveringMap> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::NonPositiveRadius(radius));
    }
    let shifted = induced_covering(c, CoverOp::AddScalar(-lambda))?;
    let adj = induced_covering(&shifted, CoverOp::Adjoint)?;
    let product = match side {
        Side::Right => induced_covering(&adj, CoverOp::Compose(&shifted))?,
        Side::Left => induced_covering(&shifted, CoverOp::Compose(&adj))?,
    };
    let scaled = induced_covering(&product, CoverOp::Scale(Complex64::from(-1.0 / (radius * radius))))?;
    induced_covering(&scaled, CoverOp::AddScalar(Complex64::ONE))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficiencyTransfer {
    pub lambda: Complex64,
    pub radius: f64,
    pub side: Side,
    pub violations: Vec<Violation>,
    /// Distance from 1 to `σ(H_{Γ₂′})`.
    pub base_distance: f64,
    /// Distance from 1 to `σ(H_{Γ₁′})`.
    pub cover_distance: f64,
    pub cover_member: bool,
}

impl DeficiencyTransfer {
    /// `1 ∈ σ(H_{Γ₂′})` carried over to `1 ∈ σ(H_{Γ₁′})` and `λ ∈ σ(H₁)`.
    pub fn transferred(&self, tol: f64) -> bool {
        self.violations.is_empty()
            && (self.base_distance > tol || (self.cover_distance <= tol && self.cover_member))
    }
}

/// Runs the deficiency-graph route: builds `Γᵢ′ = deficiency(Γᵢ, λ, R, side)`
/// with the induced covering, then checks whether `1` lies in both spectra
/// and whether `λ` is certified in `σ(H₁)`.
pub fn deficiency_transfer(
    c: &CoveringMap,
    lambda: Complex64,
    radius: f64,
    side: Side,
    tol: f64,
) -> Result<DeficiencyTransfer> {
    require_valid(c)?;
    let dc = deficiency_covering(c, lambda, radius, side)?;
    let violations = verify_covering(&dc);
    let distance = |g: &WeightedGraph| -> Result<f64> {
        let m = materialize(g)?;
        Ok(eigen::hermitian_eigenvalues(&m)?
            .into_iter()
            .map(|x| (1.0 - x).abs())
            .fold(f64::INFINITY, f64::min))
    };
    let base_distance = distance(dc.base())?;
    let cover_distance = distance(dc.cover())?;
    let verdict = spectra::membership_by_deficiency(&materialize(&c.cover)?, lambda, radius, tol)?;
    Ok(DeficiencyTransfer {
        lambda,
        radius,
        side,
        violations,
        base_distance,
        cover_distance,
        cover_member: verdict.member,
    })
}
