//! Versioned line-oriented text formats.
//!
//! Every file starts with a header line `<kind> v1`. Blank lines and lines
//! starting with `#` are ignored. Floats are written with the shortest
//! representation that parses back to the same bits.
//!
//! | kind       | body                                                            |
//! |------------|-----------------------------------------------------------------|
//! | `wgraph`   | `vertex <id>` lines, then `arc <src> <tgt> <re> <im> <pair>`    |
//! | `matrix`   | header `matrix v1 <n>`, `order <ids…>`, `n` rows of `re,im`     |
//! | `covering` | `cover <path>`, `base <path>`, `vmap <v> -> <w>`, `amap <i> -> <j>` |
//! | `voltage`  | `degree <d>`, `arc <index> <one-line permutation>`              |
//! | `action`   | `perm <n>` + `gen <name> <one-line>`, or `mealy <k>` + `state <name> <out> <next> …` + `level <n>` |
//! | `element`  | `<word> <re> <im>`                                              |

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::covering::{CoveringMap, Voltages};
use crate::error::{Error, Result};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::parse(line, message)
}
use crate::graph::{Arc, VertexId, WeightedGraph};
use crate::operator::ComplexMatrix;
use crate::orbital::{GroupAction, GroupAlgebraElement, MealyAutomaton, Word};
use crate::perm::Permutation;

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    kind: &str,
) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines.next().ok_or_else(|| perr(1, format!("missing `{kind} v1` header")))?;
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() < 2 || tokens[0] != kind {
        return Err(perr(no, format!("expected `{kind} v1` header, found {line:?}")));
    }
    if tokens[1] != "v1" {
        return Err(perr(no, format!("unsupported {kind} format version {:?}", tokens[1])));
    }
    Ok((no, tokens[2..].to_vec()))
}

fn real(no: usize, s: &str) -> Result<f64> {
    let x: f64 = s.parse().map_err(|_| perr(no, format!("invalid number {s:?}")))?;
    if !x.is_finite() {
        return Err(perr(no, format!("non-finite number {s:?}")));
    }
    Ok(x)
}

fn index(no: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| perr(no, format!("invalid index {s:?}")))
}

fn arity(no: usize, tokens: &[&str], n: usize, usage: &str) -> Result<()> {
    if tokens.len() != n {
        return Err(perr(no, format!("expected `{usage}`")));
    }
    Ok(())
}

fn with_line(no: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => perr(no, other.to_string()),
    }
}

/// Fixed-point with 12 decimals, trailing zeros trimmed, `-0` shown as `0`.
pub fn fmt_real(x: f64) -> String {
    let mut s = format!("{x:.12}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `a+bi` / `a-bi` using [`fmt_real`] for both parts.
pub fn fmt_complex(z: Complex64) -> String {
    let im = fmt_real(z.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{}i", fmt_real(z.re), abs),
        None => format!("{}+{}i", fmt_real(z.re), im),
    }
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi` and `a,b`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Precondition(format!("invalid complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let finite = |z: Complex64| if z.is_finite() { Ok(z) } else { Err(bad()) };
    if let Some((a, b)) = t.split_once(',') {
        return finite(Complex64::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let Some(body) = t.strip_suffix('i') else {
        return finite(Complex64::new(t.parse().map_err(|_| bad())?, 0.0));
    };
    // Split at the last sign that is not the leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let coefficient = |c: &str| -> Result<f64> {
        match c {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => c.parse().map_err(|_| bad()),
        }
    };
    let z = match split {
        Some(i) => Complex64::new(body[..i].parse().map_err(|_| bad())?, coefficient(&body[i..])?),
        None => Complex64::new(0.0, coefficient(body)?),
    };
    finite(z)
}

pub fn write_graph(g: &WeightedGraph) -> String {
    let mut out = String::from("wgraph v1\n");
    for v in g.vertices() {
        writeln!(out, "vertex {v}").unwrap();
    }
    for (k, a) in g.arcs().iter().enumerate() {
        writeln!(
            out,
            "arc {} {} {} {} {}",
            g.vertices()[a.source],
            g.vertices()[a.target],
            a.weight.re,
            a.weight.im,
            g.pair_of(k)
        )
        .unwrap();
    }
    out
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "wgraph")?;
    let mut vertices: Vec<VertexId> = Vec::new();
    let mut ids = std::collections::HashMap::new();
    let mut arcs = Vec::new();
    let mut pairing = Vec::new();
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "vertex" => {
                arity(no, &tokens, 2, "vertex <id>")?;
                if ids.insert(tokens[1].to_string(), vertices.len()).is_some() {
                    return Err(perr(no, format!("duplicate vertex {:?}", tokens[1])));
                }
                vertices.push(tokens[1].to_string());
            }
            "arc" => {
                arity(no, &tokens, 6, "arc <src> <tgt> <re> <im> <pair>")?;
                let end = |s: &str| {
                    ids.get(s)
                        .copied()
                        .ok_or_else(|| perr(no, format!("arc endpoint {s:?} is not a declared vertex")))
                };
                let w = Complex64::new(real(no, tokens[3])?, real(no, tokens[4])?);
                arcs.push(Arc::new(end(tokens[1])?, end(tokens[2])?, w));
                pairing.push(index(no, tokens[5])?);
            }
            other => return Err(perr(no, format!("unknown record {other:?}"))),
        }
    }
    WeightedGraph::new(vertices, arcs, pairing).map_err(|e| with_line(last, e))
}

pub fn write_matrix(m: &ComplexMatrix) -> String {
    let n = m.dim();
    let mut out = format!("matrix v1 {n}\norder");
    for l in m.labels() {
        write!(out, " {l}").unwrap();
    }
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = m.row(i).iter().map(|z| format!("{},{}", z.re, z.im)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut lines = content_lines(text);
    let (hno, rest) = expect_header(&mut lines, "matrix")?;
    arity(hno, &rest, 1, "matrix v1 <n>")?;
    let n = index(hno, rest[0])?;
    let mut labels = None;
    let mut rows = Vec::with_capacity(n);
    let mut last = hno;
    for (no, line) in lines {
        last = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] == "order" {
            if labels.is_some() || !rows.is_empty() {
                return Err(perr(no, "`order` must appear once, before the rows"));
            }
            arity(no, &tokens, n + 1, "order <one id per row>")?;
            labels = Some(tokens[1..].iter().map(|s| s.to_string()).collect::<Vec<_>>());
            continue;
        }
        if rows.len() == n {
            return Err(perr(no, format!("more than {n} rows")));
        }
        if tokens.len() != n {
            return Err(perr(no, format!("expected {n} entries, found {}", tokens.len())));
        }
        let row = tokens
            .iter()
            .map(|t| {
                let (re, im) = t
                    .split_once(',')
                    .ok_or_else(|| perr(no, format!("entry {t:?} is not `re,im`")))?;
                Ok(Complex64::new(real(no, re)?, real(no, im)?))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(perr(last, format!("expected {n} rows, found {}", rows.len())));
    }
    let m = ComplexMatrix::from_rows(rows).map_err(|e| with_line(last, e))?;
    match labels {
        Some(l) => m.with_labels(l).map_err(|e| with_line(last, e)),
        None => Ok(m),
    }
}

/// Contents of a covering file; graph paths are kept as written.
#[derive(Debug, Clone, PartialEq)]
pub struct CoveringFile {
    pub cover: String,
    pub base: String,
    pub vertex_map: Vec<(VertexId, VertexId)>,
    pub arc_map: Vec<(usize, usize)>,
}

impl CoveringFile {
    /// Resolves against the loaded graphs.
    pub fn into_map(self, cover: WeightedGraph, base: WeightedGraph) -> Result<CoveringMap> {
        let mut arcs = vec![usize::MAX; cover.arc_count()];
        for (i, j) in &self.arc_map {
            *arcs.get_mut(*i).ok_or(Error::CoveringIndex {
                what: "cover arc",
                index: *i,
            })? = *j;
        }
        if let Some(i) = arcs.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidCovering(format!("cover arc {i} is not mapped")));
        }
        CoveringMap::from_named(cover, base, &self.vertex_map, arcs)
    }
}

pub fn write_covering(c: &CoveringMap, cover_path: &str, base_path: &str) -> String {
    let mut out = format!("covering v1\ncover {cover_path}\nbase {base_path}\n");
    for (v, &w) in c.vertex_map().iter().enumerate() {
        writeln!(out, "vmap {} -> {}", c.cover().vertices()[v], c.base().vertices()[w]).unwrap();
    }
    for (i, &j) in c.arc_map().iter().enumerate() {
        writeln!(out, "amap {i} -> {j}").unwrap();
    }
    out
}

pub fn parse_covering(text: &str) -> Result<CoveringFile> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "covering")?;
    let (mut cover, mut base) = (None, None);
    let mut vertex_map = Vec::new();
    let mut arc_map = Vec::new();
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "cover" | "base" => {
                arity(no, &tokens, 2, "cover|base <path>")?;
                let slot = if tokens[0] == "cover" { &mut cover } else { &mut base };
                if slot.replace(tokens[1].to_string()).is_some() {
                    return Err(perr(no, format!("duplicate `{}` line", tokens[0])));
                }
            }
            "vmap" => {
                if tokens.len() != 4 || tokens[2] != "->" {
                    return Err(perr(no, "expected `vmap <cover vertex> -> <base vertex>`"));
                }
                vertex_map.push((tokens[1].to_string(), tokens[3].to_string()));
            }
            "amap" => {
                if tokens.len() != 4 || tokens[2] != "->" {
                    return Err(perr(no, "expected `amap <cover arc> -> <base arc>`"));
                }
                arc_map.push((index(no, tokens[1])?, index(no, tokens[3])?));
            }
            other => return Err(perr(no, format!("unknown record {other:?}"))),
        }
    }
    Ok(CoveringFile {
        cover: cover.ok_or_else(|| perr(last, "missing `cover <path>`"))?,
        base: base.ok_or_else(|| perr(last, "missing `base <path>`"))?,
        vertex_map,
        arc_map,
    })
}

/// Only non-identity voltages are written.
pub fn write_voltages(v: &Voltages) -> String {
    let mut out = format!("voltage v1\ndegree {}\n", v.degree());
    for (k, p) in v.perms().iter().enumerate() {
        if !p.is_identity() {
            writeln!(out, "arc {k} {p}").unwrap();
        }
    }
    out
}

/// Unlisted arcs get the inverse of their partner's voltage if the partner
/// is listed, and the identity otherwise.
pub fn parse_voltages(text: &str, base: &WeightedGraph) -> Result<Voltages> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "voltage")?;
    let mut degree = None;
    let mut listed: Vec<Option<(usize, Permutation)>> = vec![None; base.arc_count()];
    let mut last = 1;
    for (no, line) in lines {
        last = no;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "degree" => {
                arity(no, &tokens, 2, "degree <d>")?;
                if degree.replace(index(no, tokens[1])?).is_some() {
                    return Err(perr(no, "duplicate `degree` line"));
                }
            }
            "arc" => {
                let d = degree.ok_or_else(|| perr(no, "`degree` must precede arc voltages"))?;
                arity(no, &tokens, d + 2, "arc <index> <one-line permutation of degree d>")?;
                let k = index(no, tokens[1])?;
                let line = tokens[2..]
                    .iter()
                    .map(|t| index(no, t))
                    .collect::<Result<Vec<_>>>()?;
                let perm = Permutation::from_one_line(&line).map_err(|e| with_line(no, e))?;
                let slot = listed
                    .get_mut(k)
                    .ok_or_else(|| perr(no, format!("arc {k} out of range ({} arcs)", base.arc_count())))?;
                if slot.replace((no, perm)).is_some() {
                    return Err(perr(no, format!("arc {k} listed twice")));
                }
            }
            other => return Err(perr(no, format!("unknown record {other:?}"))),
        }
    }
    let d = degree.ok_or_else(|| perr(last, "missing `degree <d>`"))?;
    if d == 0 {
        return Err(perr(last, "degree must be positive"));
    }
    let mut perms = Vec::with_capacity(base.arc_count());
    for k in 0..base.arc_count() {
        let p = base.pair_of(k);
        let perm = match (&listed[k], &listed[p]) {
            (Some((no, perm)), Some((_, other))) => {
                if *other != perm.inverse() {
                    return Err(perr(*no, format!("voltage of arc {k} is not inverse to that of its pair {p}")));
                }
                perm.clone()
            }
            (Some((_, perm)), None) => perm.clone(),
            (None, Some((_, other))) => other.inverse(),
            (None, None) => Permutation::identity(d),
        };
        perms.push(perm);
    }
    Voltages::new(d, perms).map_err(|e| with_line(last, e))
}

/// Parsed action file: the action plus the automaton it came from, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionFile {
    pub action: GroupAction,
    pub automaton: Option<(MealyAutomaton, usize)>,
}

pub fn write_mealy(a: &MealyAutomaton, level: usize) -> String {
    let mut out = format!("action v1\nmealy {}\n", a.alphabet());
    for (name, row) in a.states().iter().zip(a.table()) {
        write!(out, "state {name}").unwrap();
        for &(y, next) in row {
            write!(out, " {y} {}", a.states()[next]).unwrap();
        }
        out.push('\n');
    }
    writeln!(out, "level {level}").unwrap();
    out
}

pub fn write_permutation_action(action: &GroupAction) -> String {
    let mut out = format!("action v1\nperm {}\n", action.points().len());
    for name in action.generator_names() {
        let p = action.generator(name).expect("listed generator");
        writeln!(out, "gen {name} {p}").unwrap();
    }
    out
}

/// `level_override` replaces the file's `level` line for automaton actions.
pub fn parse_action(text: &str, level_override: Option<usize>) -> Result<ActionFile> {
    let mut lines = content_lines(text).peekable();
    expect_header(&mut lines, "action")?;
    let (no, kind_line) = lines.next().ok_or_else(|| perr(1, "expected `perm <n>` or `mealy <k>`"))?;
    let kind: Vec<&str> = kind_line.split_whitespace().collect();
    arity(no, &kind, 2, "perm <n> | mealy <k>")?;
    let size = index(no, kind[1])?;
    match kind[0] {
        "perm" => {
            let mut gens = Vec::new();
            let mut last = no;
            for (no, line) in lines {
                last = no;
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens[0] != "gen" {
                    return Err(perr(no, format!("unknown record {:?}", tokens[0])));
                }
                arity(no, &tokens, size + 2, "gen <name> <one-line permutation>")?;
                let line = tokens[2..]
                    .iter()
                    .map(|t| index(no, t))
                    .collect::<Result<Vec<_>>>()?;
                let perm = Permutation::from_one_line(&line).map_err(|e| with_line(no, e))?;
                gens.push((tokens[1].to_string(), perm));
            }
            let points = (1..=size).map(|i| i.to_string()).collect();
            let action = GroupAction::from_permutations(points, gens).map_err(|e| with_line(last, e))?;
            Ok(ActionFile {
                action,
                automaton: None,
            })
        }
        "mealy" => {
            let mut states: Vec<(usize, String, Vec<(usize, String)>)> = Vec::new();
            let mut level = None;
            let mut last = no;
            for (no, line) in lines {
                last = no;
                let tokens: Vec<&str> = line.split_whitespace().collect();
                match tokens[0] {
                    "state" => {
                        arity(no, &tokens, 2 + 2 * size, "state <name> (<out> <next>) per letter")?;
                        let row = tokens[2..]
                            .chunks_exact(2)
                            .map(|c| Ok((index(no, c[0])?, c[1].to_string())))
                            .collect::<Result<Vec<_>>>()?;
                        states.push((no, tokens[1].to_string(), row));
                    }
                    "level" => {
                        arity(no, &tokens, 2, "level <n>")?;
                        if level.replace(index(no, tokens[1])?).is_some() {
                            return Err(perr(no, "duplicate `level` line"));
                        }
                    }
                    other => return Err(perr(no, format!("unknown record {other:?}"))),
                }
            }
            let names: Vec<String> = states.iter().map(|(_, n, _)| n.clone()).collect();
            let mut table = Vec::with_capacity(states.len());
            for (no, name, row) in &states {
                let mut out = Vec::with_capacity(row.len());
                for (y, next) in row {
                    let q = names
                        .iter()
                        .position(|n| n == next)
                        .ok_or_else(|| perr(*no, format!("state {name} moves to undeclared state {next:?}")))?;
                    out.push((*y, q));
                }
                table.push(out);
            }
            let automaton = MealyAutomaton::new(size, names, table).map_err(|e| with_line(last, e))?;
            let level = level_override
                .or(level)
                .ok_or_else(|| perr(last, "missing `level <n>` (or pass a level explicitly)"))?;
            let action = GroupAction::from_mealy(&automaton, level).map_err(|e| with_line(last, e))?;
            Ok(ActionFile {
                action,
                automaton: Some((automaton, level)),
            })
        }
        other => Err(perr(no, format!("unknown action kind {other:?}"))),
    }
}

pub fn write_element(m: &GroupAlgebraElement) -> String {
    let mut out = String::from("element v1\n");
    for (w, c) in m.terms() {
        writeln!(out, "{w} {} {}", c.re, c.im).unwrap();
    }
    out
}

pub fn parse_element(text: &str) -> Result<GroupAlgebraElement> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "element")?;
    let mut terms = Vec::new();
    for (no, line) in lines {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 3 {
            return Err(perr(no, "expected `<word> <re> <im>`"));
        }
        let (word, coeff) = tokens.split_at(tokens.len() - 2);
        let w = Word::parse_tokens(word.iter().copied()).map_err(|e| with_line(no, e))?;
        terms.push((w, Complex64::new(real(no, coeff[0])?, real(no, coeff[1])?)));
    }
    let m = GroupAlgebraElement::from_terms(terms);
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::voltage_cover;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(-1e-15), "0");
        assert_eq!(fmt_real(1.5), "1.5");
        assert_eq!(fmt_real(2.0), "2");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_complex(Complex64::new(1.0, -2.0)), "1-2i");
        assert_eq!(fmt_complex(Complex64::new(0.0, -0.0)), "0+0i");
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("0+0i").unwrap(), Complex64::new(0.0, 0.0));
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), Complex64::new(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), Complex64::new(0.0, 1.0));
        assert_eq!(parse_complex("1e-3-4.5i").unwrap(), Complex64::new(1e-3, -4.5));
        assert_eq!(parse_complex("-1,2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn graph_round_trip_is_exact() {
        let g = WeightedGraph::cycle(5, Complex64::new(0.1, -1.0 / 3.0)).unwrap();
        let back = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn graph_errors_carry_lines() {
        let text = "wgraph v1\nvertex a\n\narc a b 1 0 0\n";
        assert!(matches!(parse_graph(text), Err(Error::Parse { line: 4, .. })));
        let text = "wgraph v2\n";
        assert!(matches!(parse_graph(text), Err(Error::Parse { line: 1, .. })));
        let text = "wgraph v1\nvertex a\narc a a 1 0 1\n";
        assert!(matches!(parse_graph(text), Err(Error::Parse { line: 3, .. })));
        let text = "wgraph v1\nvertex a\narc a a x 0 0\n";
        assert!(matches!(parse_graph(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn matrix_round_trip() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(i as f64 - 0.7, j as f64 * 1e-17));
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m.clone().with_labels(m.labels()).unwrap());
        assert!(matches!(parse_matrix("matrix v1 2\n1,0 0,0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn voltage_round_trip_and_pair_completion() {
        let base = WeightedGraph::cycle(3, Complex64::ONE).unwrap();
        let text = "voltage v1\ndegree 2\narc 0 2 1\n";
        let v = parse_voltages(text, &base).unwrap();
        assert!(!v.get(base.pair_of(0)).is_identity());
        let (_, c) = voltage_cover(&base, &v).unwrap();
        assert_eq!(c.cover().vertex_count(), 6);
        assert_eq!(parse_voltages(&write_voltages(&v), &base).unwrap(), v);
        let bad = format!("voltage v1\ndegree 3\narc 0 2 3 1\narc {} 2 3 1\n", base.pair_of(0));
        assert!(matches!(parse_voltages(&bad, &base), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn covering_round_trip() {
        let g = WeightedGraph::cycle(4, Complex64::ONE).unwrap();
        let c = CoveringMap::identity(&g);
        let f = parse_covering(&write_covering(&c, "g.wg", "g.wg")).unwrap();
        assert_eq!(f.cover, "g.wg");
        assert_eq!(f.into_map(g.clone(), g).unwrap(), c);
    }

    #[test]
    fn action_files() {
        let odo = MealyAutomaton::binary_odometer();
        let parsed = parse_action(&write_mealy(&odo, 3), None).unwrap();
        assert_eq!(parsed.action.points().len(), 8);
        assert_eq!(parsed.automaton.unwrap().0, odo);
        assert_eq!(parse_action(&write_mealy(&odo, 3), Some(4)).unwrap().action.points().len(), 16);
        let perm = GroupAction::from_one_line(3, &[("a", &[2, 3, 1])]).unwrap();
        assert_eq!(parse_action(&write_permutation_action(&perm), None).unwrap().action, perm);
        let bad = "action v1\nmealy 2\nstate a 1 e 0 a\nlevel 2\n";
        assert!(matches!(parse_action(bad, None), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn element_round_trip() {
        let m = GroupAlgebraElement::parse_terms(&[("a b'", Complex64::new(0.5, -1.0)), ("1", Complex64::ONE)])
            .unwrap();
        assert_eq!(parse_element(&write_element(&m)).unwrap(), m);
        assert!(matches!(parse_element("element v1\na 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
