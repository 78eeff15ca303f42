use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use wgspec_core::format::{self, ActionFile};
use wgspec_core::{materialize, ComplexMatrix, CoveringMap, GroupAlgebraElement, WeightedGraph};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

pub fn graph(path: &Path) -> Result<WeightedGraph> {
    format::parse_graph(&read(path)?).with_context(|| format!("invalid graph file {}", path.display()))
}

/// Matrix of a graph or matrix file, and whether it came from a graph.
pub fn operator(path: &Path) -> Result<(ComplexMatrix, bool)> {
    let text = read(path)?;
    let is_matrix = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .is_some_and(|l| l.starts_with("matrix"));
    if is_matrix {
        let m = format::parse_matrix(&text).with_context(|| format!("invalid matrix file {}", path.display()))?;
        Ok((m, false))
    } else {
        let g = format::parse_graph(&text).with_context(|| format!("invalid graph file {}", path.display()))?;
        Ok((materialize(&g)?, true))
    }
}

/// Resolves graph paths relative to the covering file.
pub fn covering(path: &Path) -> Result<CoveringMap> {
    let spec = format::parse_covering(&read(path)?).with_context(|| format!("invalid covering file {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new(""));
    let cover = graph(&dir.join(&spec.cover))?;
    let base = graph(&dir.join(&spec.base))?;
    spec.into_map(cover, base)
        .with_context(|| format!("covering file {} does not match its graphs", path.display()))
}

pub fn action(path: &Path, level: Option<usize>) -> Result<ActionFile> {
    format::parse_action(&read(path)?, level).with_context(|| format!("invalid action file {}", path.display()))
}

pub fn element(path: &Path) -> Result<GroupAlgebraElement> {
    format::parse_element(&read(path)?).with_context(|| format!("invalid element file {}", path.display()))
}

/// `dir/stem_suffix.ext` next to `input`.
pub fn sibling(input: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    input.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

/// Path of `target` as written inside a file stored at `from`: relative when
/// both share a directory, absolute otherwise.
pub fn reference(from: &Path, target: &Path) -> Result<String> {
    let parent = |p: &Path| p.parent().map(Path::to_path_buf).unwrap_or_default();
    if parent(from) == parent(target) {
        if let Some(name) = target.file_name().and_then(|n| n.to_str()) {
            return Ok(name.to_string());
        }
    }
    let abs = fs::canonicalize(target).with_context(|| format!("cannot resolve {}", target.display()))?;
    Ok(abs.to_string_lossy().into_owned())
}
