use std::collections::BTreeMap;

use num_complex::Complex64;

use super::action::Word;
use crate::error::{Error, Result};

/// Finite combination `Σ m(g)·g` of group words. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GroupAlgebraElement {
    terms: BTreeMap<Word, Complex64>,
}

impl GroupAlgebraElement {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums coefficients of repeated words.
    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Complex64)>) -> Self {
        let mut m = Self::new();
        for (w, c) in terms {
            m.add_term(w, c);
        }
        m
    }

    /// Parses `[("a", 1+0i), ("a'", 1+0i)]`-style pairs.
    pub fn parse_terms(terms: &[(&str, Complex64)]) -> Result<Self> {
        terms
            .iter()
            .map(|(w, c)| Ok((w.parse::<Word>()?, *c)))
            .collect::<Result<Vec<_>>>()
            .map(Self::from_terms)
    }

    pub fn add_term(&mut self, word: Word, coefficient: Complex64) {
        let c = self.terms.get(&word).copied().unwrap_or_default() + coefficient;
        if c == Complex64::default() {
            self.terms.remove(&word);
        } else {
            self.terms.insert(word, c);
        }
    }

    pub fn coefficient(&self, word: &Word) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ |m(g)|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Formal adjoint `Σ conj(m(g))·g⁻¹`.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (w.inverse(), c.conj())))
    }

    /// Generator names occurring in the support, sorted.
    pub fn alphabet(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flat_map(|w| w.letters().iter().map(|l| l.generator.clone()))
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

/// `2·Σ|m(g)|`, at least twice the norm of `ρ_x(m)` for every permutation
/// representation.
pub fn default_radius_bound(m: &GroupAlgebraElement) -> Result<f64> {
    if m.is_zero() {
        return Err(Error::ZeroElement);
    }
    Ok(2.0 * m.l1_norm())
}
