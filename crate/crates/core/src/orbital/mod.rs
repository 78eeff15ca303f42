//! Group actions, orbital graphs weighted by group-algebra elements, and the
//! transfer of spectral data between locally isomorphic orbital graphs.
//!
//! Convention: `ρ(g)δ_z = δ_{g·z}`. With the operator convention of
//! [`crate::graph`] this means one arc `g·z → z` of weight `m(g)` for each
//! orbit point `z` and support word `g`, so `materialize` of the orbital
//! graph is `Σ m(g)·P_g` with `P_g` the permutation matrix of `g`.
//!
//! Orbits are taken under the subgroup generated by `supp(m)`. The operator
//! of the full group orbit is block diagonal over these smaller orbits, so
//! the restriction keeps the relevant block. Other blocks can have other
//! spectra; this is used as a modelling choice, not proved here.
//!
//! In the transfer argument every operator is built on a single side:
//! `ρ_y(s) = I − (ρ_y(m) − α)(ρ_y(m) − α)*/R²`, compared through
//! `⟨ρ_x(s)η, η⟩ = ⟨ρ_y(s)η′, η′⟩` with `η′` the transported vector, and the
//! conclusion is `1 ∈ σ(ρ_y(s))`. Mixing `x` and `y` inside `s`, or swapping
//! `η` and `η′`, does not give a valid statement.

mod action;
mod ball;
mod element;

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use action::{GroupAction, Letter, MealyAutomaton, Word, IDENTITY_TOKEN, LEVEL_CAP};
pub use ball::{ball, ball_isomorphism, local_iso_check, LocalIsoReport, RadiusVerdict, RootMatch};
pub use element::{default_radius_bound, GroupAlgebraElement};

use crate::error::{Error, Result};
use crate::graph::{Arc, Side, VertexId, WeightedGraph};
use crate::operator::{materialize, FinSuppVector, SparseOperator};
use crate::perm::Permutation;
use crate::spectra::{self, MembershipVerdict, SpectralSet};

fn bfs_orbit(n: usize, start: usize, perms: &[(Permutation, Permutation)]) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut order = vec![start];
    let mut queue = VecDeque::from([start]);
    while let Some(z) = queue.pop_front() {
        for (p, inv) in perms {
            for next in [p.apply(z), inv.apply(z)] {
                if !seen[next] {
                    seen[next] = true;
                    order.push(next);
                    queue.push_back(next);
                }
            }
        }
    }
    order
}

fn word_perms(action: &GroupAction, words: &[Word]) -> Result<Vec<(Permutation, Permutation)>> {
    words
        .iter()
        .map(|w| {
            let p = action.word_permutation(w)?;
            let inv = p.inverse();
            Ok((p, inv))
        })
        .collect()
}

/// Points reachable from `x` by the listed words and their inverses, in BFS order.
pub fn orbit(action: &GroupAction, x: &str, words: &[Word]) -> Result<Vec<String>> {
    if words.is_empty() {
        return Err(Error::Precondition("orbit needs at least one word".into()));
    }
    let start = action.point_index(x)?;
    let perms = word_perms(action, words)?;
    Ok(bfs_orbit(action.points().len(), start, &perms)
        .into_iter()
        .map(|i| action.points()[i].clone())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcKind {
    /// The arc `g·z → z` of a support word.
    Action,
    /// Zero-weight reverse arc completing the pairing; carries no label.
    Formal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ArcLabel {
    /// Index into [`LabeledOrbitalGraph::words`].
    pub word: usize,
    pub kind: ArcKind,
}

/// Orbital graph of a point: the weighted graph of `ρ_x(m)` together with
/// the word labels and the labeled step maps `z ↦ g·z`, `z ↦ g⁻¹·z`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledOrbitalGraph {
    base: WeightedGraph,
    element: GroupAlgebraElement,
    words: Vec<Word>,
    labels: Vec<ArcLabel>,
    root: usize,
    forward: Vec<Vec<Option<usize>>>,
    backward: Vec<Vec<Option<usize>>>,
}

impl LabeledOrbitalGraph {
    pub fn base(&self) -> &WeightedGraph {
        &self.base
    }

    pub fn element(&self) -> &GroupAlgebraElement {
        &self.element
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn labels(&self) -> &[ArcLabel] {
        &self.labels
    }

    pub fn root(&self) -> &VertexId {
        &self.base.vertices()[self.root]
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    /// `g·v` for the `word`-th support word, if it lies in this graph.
    pub fn step(&self, word: usize, v: &str) -> Result<Option<&VertexId>> {
        let i = self.index_of(v)?;
        Ok(self.forward[word][i].map(|j| &self.base.vertices()[j]))
    }

    /// Same graph rooted elsewhere.
    pub fn rerooted(&self, v: &str) -> Result<Self> {
        let root = self.index_of(v)?;
        Ok(LabeledOrbitalGraph { root, ..self.clone() })
    }

    fn index_of(&self, v: &str) -> Result<usize> {
        self.base
            .vertex_index(v)
            .ok_or_else(|| Error::UnknownPoint(v.to_string()))
    }

    /// Labeled steps out of `v`: for each word, `g·v` then `g⁻¹·v`.
    fn neighbors(&self, v: usize) -> impl Iterator<Item = Option<usize>> + '_ {
        self.forward
            .iter()
            .zip(&self.backward)
            .flat_map(move |(f, b)| [f[v], b[v]])
    }
}

/// Builds the orbital graph of `x` for the element `m`.
pub fn orbital_graph(action: &GroupAction, x: &str, m: &GroupAlgebraElement) -> Result<LabeledOrbitalGraph> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    let words: Vec<Word> = m.support().cloned().collect();
    let perms = word_perms(action, &words)?;
    let start = action.point_index(x)?;
    let mut points = bfs_orbit(action.points().len(), start, &perms);
    points.sort_by(|&a, &b| action.points()[a].cmp(&action.points()[b]));
    let n = points.len();
    let local: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let forward: Vec<Vec<usize>> = perms
        .iter()
        .map(|(p, _)| points.iter().map(|&u| local[&p.apply(u)]).collect())
        .collect();
    let backward: Vec<Vec<usize>> = perms
        .iter()
        .map(|(_, inv)| points.iter().map(|&u| local[&inv.apply(u)]).collect())
        .collect();

    // Pair each word with a word acting as its inverse on the orbit,
    // preferring the formal inverse, then the word itself.
    let k = words.len();
    let mut partner: Vec<Option<usize>> = vec![None; k];
    for w in 0..k {
        if partner[w].is_some() {
            continue;
        }
        let formal = words.iter().position(|u| *u == words[w].inverse());
        let candidates = formal
            .into_iter()
            .chain(std::iter::once(w))
            .chain(0..k);
        let found = candidates
            .filter(|&h| partner[h].is_none())
            .find(|&h| forward[h] == backward[w]);
        if let Some(h) = found {
            partner[w] = Some(h);
            partner[h] = Some(w);
        }
    }

    let mut arcs = Vec::with_capacity(k * n);
    let mut labels = Vec::with_capacity(k * n);
    let mut pairing = vec![0; k * n];
    for (w, word) in words.iter().enumerate() {
        let c = m.coefficient(word);
        for z in 0..n {
            arcs.push(Arc::new(forward[w][z], z, c));
            labels.push(ArcLabel {
                word: w,
                kind: ArcKind::Action,
            });
        }
    }
    for w in 0..k {
        for z in 0..n {
            let idx = w * n + z;
            match partner[w] {
                Some(h) => pairing[idx] = h * n + forward[w][z],
                None => {
                    let formal = arcs.len();
                    arcs.push(Arc::new(z, forward[w][z], Complex64::default()));
                    labels.push(ArcLabel {
                        word: w,
                        kind: ArcKind::Formal,
                    });
                    pairing[idx] = formal;
                    pairing.push(idx);
                }
            }
        }
    }
    let vertices: Vec<VertexId> = points.iter().map(|&u| action.points()[u].clone()).collect();
    let base = WeightedGraph::from_sorted(vertices, arcs, pairing)?;
    let wrap = |s: Vec<Vec<usize>>| s.into_iter().map(|r| r.into_iter().map(Some).collect()).collect();
    Ok(LabeledOrbitalGraph {
        base,
        element: m.clone(),
        words,
        labels,
        root: local[&start],
        forward: wrap(forward),
        backward: wrap(backward),
    })
}

fn check_positive_element_args(m: &GroupAlgebraElement, alpha: Complex64, radius: f64) -> Result<()> {
    let bound = default_radius_bound(m)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::NonPositiveRadius(radius));
    }
    let slack = 1.0 - 1e-12;
    if radius < bound * slack {
        return Err(Error::RadiusTooSmall {
            radius,
            norm_bound: bound / 2.0,
        });
    }
    if alpha.norm() * slack > radius / 2.0 {
        return Err(Error::Precondition(format!("|alpha| = {} exceeds R/2 = {}", alpha.norm(), radius / 2.0)));
    }
    Ok(())
}

/// Graph of `ρ_x(s) = I − (ρ_x(m) − α)(ρ_x(m) − α)*/R²`, a positive
/// contraction when `R ≥ 2Σ|m(g)|` and `|α| ≤ R/2`.
pub fn positive_element_graph(
    g: &LabeledOrbitalGraph,
    m: &GroupAlgebraElement,
    alpha: Complex64,
    radius: f64,
) -> Result<WeightedGraph> {
    if *m != g.element {
        return Err(Error::Precondition("element differs from the one the graph was built for".into()));
    }
    check_positive_element_args(m, alpha, radius)?;
    g.base.deficiency(alpha, radius, Side::Left)
}

/// Operator built from an orbital graph, with the graph distance it can move support.
pub trait OrbitalOperator {
    fn reach(&self) -> usize;
    fn build(&self, g: &LabeledOrbitalGraph) -> Result<WeightedGraph>;
}

/// `ρ(m)` itself.
#[derive(Debug, Clone, Copy, Default)]
pub struct ElementOperator;

impl OrbitalOperator for ElementOperator {
    fn reach(&self) -> usize {
        1
    }

    fn build(&self, g: &LabeledOrbitalGraph) -> Result<WeightedGraph> {
        Ok(g.base.clone())
    }
}

/// The positive element `s` of [`positive_element_graph`].
#[derive(Debug, Clone, Copy)]
pub struct PositiveElement {
    pub alpha: Complex64,
    pub radius: f64,
}

impl OrbitalOperator for PositiveElement {
    fn reach(&self) -> usize {
        2
    }

    fn build(&self, g: &LabeledOrbitalGraph) -> Result<WeightedGraph> {
        positive_element_graph(g, &g.element, self.alpha, self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferValues {
    pub value_x: f64,
    pub value_y: f64,
}

impl TransferValues {
    pub fn gap(&self) -> f64 {
        (self.value_x - self.value_y).abs()
    }
}

fn rayleigh(op: &WeightedGraph, eta: &FinSuppVector<VertexId>) -> f64 {
    op.apply(eta).inner(eta).re
}

/// `⟨ρ_x(s)η, η⟩` and `⟨ρ_y(s)η′, η′⟩`, where `η′` is `η` carried along a
/// ball isomorphism of radius at least `l + reach`.
pub fn rayleigh_transfer(
    gx: &LabeledOrbitalGraph,
    gy: &LabeledOrbitalGraph,
    op: &dyn OrbitalOperator,
    eta: &FinSuppVector<VertexId>,
    l: usize,
    matched: &RootMatch,
) -> Result<TransferValues> {
    if matched.radius < l + op.reach() {
        return Err(Error::MatchRadiusInsufficient {
            radius: matched.radius,
        });
    }
    let root = gx.index_of(&matched.x_root)?;
    let inside: std::collections::HashSet<&VertexId> = ball::ball_vertices(gx, root, l)
        .into_iter()
        .map(|v| &gx.base.vertices()[v])
        .collect();
    if eta.support().any(|v| !inside.contains(v)) {
        return Err(Error::SupportOutsideBall { radius: l });
    }
    if eta.is_zero() {
        return Ok(TransferValues {
            value_x: 0.0,
            value_y: 0.0,
        });
    }
    let eta_y = eta.map_keys(|v| matched.image(v).expect("ball vertex is matched").clone());
    Ok(TransferValues {
        value_x: rayleigh(&op.build(gx)?, eta),
        value_y: rayleigh(&op.build(gy)?, &eta_y),
    })
}

/// Random unit-scale vectors supported on `B_l(x)`, carried to `y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferSweep {
    pub radius: usize,
    pub samples: usize,
    pub max_gap: f64,
    pub max_value: f64,
}

/// Runs [`rayleigh_transfer`] for `samples` seeded random vectors on the
/// radius-`l` ball around the roots of `gx` and `gy`.
pub fn transfer_sweep(
    gx: &LabeledOrbitalGraph,
    gy: &LabeledOrbitalGraph,
    op: &dyn OrbitalOperator,
    l: usize,
    samples: usize,
    seed: u64,
) -> Result<TransferSweep> {
    let matched = ball_isomorphism(gx, gx.root(), gy, gy.root(), l + op.reach())?
        .ok_or(Error::MatchRadiusInsufficient { radius: l + op.reach() })?;
    let support: Vec<VertexId> = ball::ball_vertices(gx, gx.root, l)
        .into_iter()
        .map(|v| gx.base.vertices()[v].clone())
        .collect();
    let sx = op.build(gx)?;
    let sy = op.build(gy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap: f64 = 0.0;
    let mut max_value: f64 = 0.0;
    for _ in 0..samples {
        let eta = FinSuppVector::from_entries(support.iter().map(|v| {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (v.clone(), z)
        }));
        let eta_y = eta.map_keys(|v| matched.image(v).expect("ball vertex is matched").clone());
        let vx = rayleigh(&sx, &eta);
        let vy = rayleigh(&sy, &eta_y);
        max_gap = max_gap.max((vx - vy).abs());
        max_value = max_value.max(vx.abs());
    }
    Ok(TransferSweep {
        radius: l,
        samples,
        max_gap,
        max_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitComparison {
    pub orbit_x: usize,
    pub orbit_y: usize,
    pub radius: f64,
    pub spectrum_x: SpectralSet,
    pub spectrum_y: SpectralSet,
    pub hausdorff: f64,
    pub local_iso: LocalIsoReport,
    pub local_iso_radius: Option<usize>,
    /// Eigenvalues of the first operator tested against the second.
    pub x_in_y: Vec<MembershipVerdict>,
    pub y_in_x: Vec<MembershipVerdict>,
}

fn distinct(s: &SpectralSet, tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &z in s.values() {
        if out.iter().all(|w| (w - z).norm() > tol) {
            out.push(z);
        }
    }
    out
}

/// Spectra of `ρ_x(m)` and `ρ_y(m)`, their distance, local isomorphism up to
/// `max_radius`, and cross membership checks at `R = 2Σ|m(g)|`.
pub fn spectra_compare_orbits(
    ax: &GroupAction,
    x: &str,
    ay: &GroupAction,
    y: &str,
    m: &GroupAlgebraElement,
    tol: f64,
    max_radius: usize,
) -> Result<OrbitComparison> {
    let gx = orbital_graph(ax, x, m)?;
    let gy = orbital_graph(ay, y, m)?;
    let mx = materialize(&gx.base)?;
    let my = materialize(&gy.base)?;
    let spectrum_x = spectra::spectrum(&mx)?;
    let spectrum_y = spectra::spectrum(&my)?;
    let hausdorff = spectra::hausdorff_distance(&spectrum_x, &spectrum_y)?;
    let local_iso = local_iso_check(&gx, &gy, max_radius)?;
    let radius = default_radius_bound(m)?;
    let x_in_y = spectra::membership_sweep(&my, &distinct(&spectrum_x, tol), radius, tol)?;
    let y_in_x = spectra::membership_sweep(&mx, &distinct(&spectrum_y, tol), radius, tol)?;
    Ok(OrbitComparison {
        orbit_x: gx.vertex_count(),
        orbit_y: gy.vertex_count(),
        radius,
        spectrum_x,
        spectrum_y,
        hausdorff,
        local_iso_radius: local_iso.max_passing_radius(),
        local_iso,
        x_in_y,
        y_in_x,
    })
}
