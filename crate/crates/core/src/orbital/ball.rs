use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::LabeledOrbitalGraph;
use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// Vertex indices within combinatorial distance `radius` of `root`, in BFS order.
pub(crate) fn ball_vertices(g: &LabeledOrbitalGraph, root: usize, radius: usize) -> Vec<usize> {
    let mut dist: HashMap<usize, usize> = HashMap::from([(root, 0)]);
    let mut order = vec![root];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let d = dist[&v];
        if d == radius {
            continue;
        }
        for n in g.neighbors(v).flatten() {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(n) {
                e.insert(d + 1);
                order.push(n);
            }
        }
    }
    order
}

/// Induced labeled subgraph on the radius-`l` ball around `v`, rooted at `v`.
pub fn ball(g: &LabeledOrbitalGraph, v: &str, l: usize) -> Result<LabeledOrbitalGraph> {
    let root = g
        .base
        .vertex_index(v)
        .ok_or_else(|| Error::UnknownPoint(v.to_string()))?;
    let mut members = ball_vertices(g, root, l);
    members.sort_unstable();
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    let mut arc_local = vec![usize::MAX; g.base.arc_count()];
    let mut kept = Vec::new();
    for (k, a) in g.base.arcs().iter().enumerate() {
        if local.contains_key(&a.source) && local.contains_key(&a.target) {
            arc_local[k] = kept.len();
            kept.push(k);
        }
    }
    let arcs = kept
        .iter()
        .map(|&k| {
            let a = g.base.arcs()[k];
            crate::graph::Arc::new(local[&a.source], local[&a.target], a.weight)
        })
        .collect();
    let pairing = kept.iter().map(|&k| arc_local[g.base.pair_of(k)]).collect();
    let vertices: Vec<VertexId> = members.iter().map(|&u| g.base.vertices()[u].clone()).collect();
    let base = WeightedGraph::from_sorted(vertices, arcs, pairing)?;

    let restrict = |steps: &Vec<Vec<Option<usize>>>| -> Vec<Vec<Option<usize>>> {
        steps
            .iter()
            .map(|row| {
                members
                    .iter()
                    .map(|&u| row[u].and_then(|t| local.get(&t).copied()))
                    .collect()
            })
            .collect()
    };
    Ok(LabeledOrbitalGraph {
        base,
        element: g.element.clone(),
        words: g.words.clone(),
        labels: kept.iter().map(|&k| g.labels[k]).collect(),
        root: local[&root],
        forward: restrict(&g.forward),
        backward: restrict(&g.backward),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Token {
    Vertex(u32),
    Outside,
    Missing,
}

struct Traversal {
    order: Vec<usize>,
    signature: Vec<Token>,
}

/// Canonical BFS of the rooted ball. Labeled steps are deterministic, so two
/// rooted balls are isomorphic exactly when their signatures agree, and the
/// isomorphism pairs the discovery orders.
fn traverse(g: &LabeledOrbitalGraph, root: usize, radius: usize) -> Traversal {
    let mut id: HashMap<usize, (u32, usize)> = HashMap::from([(root, (0, 0))]);
    let mut order = vec![root];
    let mut signature = Vec::new();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let d = id[&v].1;
        for step in g.neighbors(v) {
            let token = match step {
                None => Token::Missing,
                Some(n) => match id.get(&n) {
                    Some(&(k, _)) => Token::Vertex(k),
                    None if d < radius => {
                        let k = order.len() as u32;
                        id.insert(n, (k, d + 1));
                        order.push(n);
                        Token::Vertex(k)
                    }
                    None => Token::Outside,
                },
            };
            signature.push(token);
        }
    }
    Traversal { order, signature }
}

/// Isomorphism of rooted labeled balls, as a map between vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RootMatch {
    pub radius: usize,
    pub x_root: VertexId,
    pub y_root: VertexId,
    map: HashMap<VertexId, VertexId>,
}

impl RootMatch {
    /// Image of a vertex of the first ball.
    pub fn image(&self, v: &str) -> Option<&VertexId> {
        self.map.get(v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn check_alphabets(gx: &LabeledOrbitalGraph, gy: &LabeledOrbitalGraph) -> Result<()> {
    if gx.words != gy.words {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// The isomorphism `B_r(x) → B_r(y)` if one exists.
pub fn ball_isomorphism(
    gx: &LabeledOrbitalGraph,
    x: &str,
    gy: &LabeledOrbitalGraph,
    y: &str,
    radius: usize,
) -> Result<Option<RootMatch>> {
    check_alphabets(gx, gy)?;
    let xi = gx.index_of(x)?;
    let yi = gy.index_of(y)?;
    let tx = traverse(gx, xi, radius);
    let ty = traverse(gy, yi, radius);
    if tx.signature != ty.signature {
        return Ok(None);
    }
    let map = tx
        .order
        .iter()
        .zip(&ty.order)
        .map(|(&a, &b)| (gx.base.vertices()[a].clone(), gy.base.vertices()[b].clone()))
        .collect();
    Ok(Some(RootMatch {
        radius,
        x_root: x.to_string(),
        y_root: y.to_string(),
        map,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusVerdict {
    pub radius: usize,
    /// Every ball of the first graph occurs in the second.
    pub forward: bool,
    /// Every ball of the second graph occurs in the first.
    pub backward: bool,
    /// For each root of the first graph with a match: the root of the same
    /// name if it matches, else the first matching root.
    pub matches: Vec<(VertexId, VertexId)>,
}

impl RadiusVerdict {
    pub fn passed(&self) -> bool {
        self.forward && self.backward
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalIsoReport {
    pub radii: Vec<RadiusVerdict>,
}

impl LocalIsoReport {
    /// Largest `L` such that every radius `0..=L` passes.
    pub fn max_passing_radius(&self) -> Option<usize> {
        self.radii.iter().take_while(|r| r.passed()).last().map(|r| r.radius)
    }

    pub fn all_passed(&self) -> bool {
        self.radii.iter().all(RadiusVerdict::passed)
    }
}

fn signatures(g: &LabeledOrbitalGraph, radius: usize) -> Vec<Vec<Token>> {
    (0..g.base.vertex_count())
        .into_par_iter()
        .map(|v| traverse(g, v, radius).signature)
        .collect()
}

/// Compares rooted labeled balls of every radius `0..=max_radius`.
pub fn local_iso_check(
    gx: &LabeledOrbitalGraph,
    gy: &LabeledOrbitalGraph,
    max_radius: usize,
) -> Result<LocalIsoReport> {
    check_alphabets(gx, gy)?;
    let radii = (0..=max_radius)
        .map(|l| {
            let sx = signatures(gx, l);
            let sy = signatures(gy, l);
            let mut first_y: HashMap<&[Token], usize> = HashMap::new();
            for (v, s) in sy.iter().enumerate() {
                first_y.entry(s.as_slice()).or_insert(v);
            }
            let in_x: std::collections::HashSet<&[Token]> = sx.iter().map(Vec::as_slice).collect();
            let matches: Vec<(VertexId, VertexId)> = sx
                .iter()
                .enumerate()
                .filter_map(|(v, s)| {
                    let name = &gx.base.vertices()[v];
                    let same = gy.base.vertex_index(name).filter(|&w| sy[w] == *s);
                    same.or_else(|| first_y.get(s.as_slice()).copied())
                        .map(|w| (name.clone(), gy.base.vertices()[w].clone()))
                })
                .collect();
            RadiusVerdict {
                radius: l,
                forward: matches.len() == sx.len(),
                backward: sy.iter().all(|s| in_x.contains(s.as_slice())),
                matches,
            }
        })
        .collect();
    Ok(LocalIsoReport { radii })
}
