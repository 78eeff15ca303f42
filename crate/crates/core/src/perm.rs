use std::fmt;

use crate::error::{Error, Result};

/// Permutation of `{0, …, d−1}`. Files use one-line notation on `{1, …, d}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            image: (0..degree).collect(),
        }
    }

    /// From 0-based images.
    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let d = image.len();
        let mut seen = vec![false; d];
        for &i in &image {
            if i >= d || seen[i] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection of 0..{d}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(line: &[usize]) -> Result<Self> {
        if line.contains(&0) {
            return Err(Error::InvalidPermutation("one-line notation is 1-based".into()));
        }
        Self::from_images(line.iter().map(|i| i - 1).collect())
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..degree).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Permutation) -> Self {
        Permutation {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| self.image[j] == i)
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.image.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.one_line() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        Ok(())
    }
}
