use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest universe a level action may produce.
pub const LEVEL_CAP: usize = 2048;

/// Token for the empty word.
pub const IDENTITY_TOKEN: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Letter {
    pub generator: String,
    pub inverse: bool,
}

/// Word in generator names and their formal inverses. `a b` acts as `a ∘ b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Word(Vec<Letter>);

fn valid_generator(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(name: &str) -> Self {
        Word(vec![Letter {
            generator: name.to_string(),
            inverse: false,
        }])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(
            self.0
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator.clone(),
                    inverse: !l.inverse,
                })
                .collect(),
        )
    }

    /// Parses tokens such as `a`, `b'`; the single token `1` is the empty word.
    pub fn parse_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let tokens: Vec<&str> = tokens.into_iter().collect();
        if tokens == [IDENTITY_TOKEN] {
            return Ok(Word::identity());
        }
        if tokens.is_empty() {
            return Err(Error::Precondition("empty word".into()));
        }
        let mut letters = Vec::with_capacity(tokens.len());
        for t in tokens {
            let (name, inverse) = match t.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (t, false),
            };
            if !valid_generator(name) {
                return Err(Error::UnknownGenerator(t.to_string()));
            }
            letters.push(Letter {
                generator: name.to_string(),
                inverse,
            });
        }
        Ok(Word(letters))
    }
}

impl std::str::FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse_tokens(s.split_whitespace())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str(IDENTITY_TOKEN);
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&l.generator)?;
            if l.inverse {
                f.write_str("'")?;
            }
        }
        Ok(())
    }
}

/// Invertible Mealy automaton over the alphabet `{0, …, k−1}`.
///
/// `table[q][x] = (y, q')`: in state `q`, reading `x` writes `y` and moves
/// to `q'`. The state acts on words by `q(x w) = y · q'(w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MealyAutomaton {
    alphabet: usize,
    states: Vec<String>,
    table: Vec<Vec<(usize, usize)>>,
}

impl MealyAutomaton {
    pub fn new(alphabet: usize, states: Vec<String>, table: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidAutomaton("alphabet must be nonempty".into()));
        }
        if states.len() != table.len() || states.is_empty() {
            return Err(Error::InvalidAutomaton("one table row per state required".into()));
        }
        for (q, row) in states.iter().zip(&table) {
            if !valid_generator(q) {
                return Err(Error::InvalidAutomaton(format!("invalid state name {q:?}")));
            }
            if row.len() != alphabet {
                return Err(Error::InvalidAutomaton(format!("state {q} needs {alphabet} transitions")));
            }
            if row.iter().any(|&(y, next)| y >= alphabet || next >= states.len()) {
                return Err(Error::InvalidAutomaton(format!("state {q} has an out-of-range transition")));
            }
            if Permutation::from_images(row.iter().map(|&(y, _)| y).collect()).is_err() {
                return Err(Error::InvalidAutomaton(format!(
                    "output of state {q} is not a permutation of the alphabet"
                )));
            }
        }
        let mut sorted = states.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != states.len() {
            return Err(Error::InvalidAutomaton("duplicate state names".into()));
        }
        Ok(MealyAutomaton {
            alphabet,
            states,
            table,
        })
    }

    /// The adding machine: `a(0w) = 1w`, `a(1w) = 0·a(w)`, `e` trivial.
    pub fn binary_odometer() -> Self {
        Self::new(
            2,
            vec!["a".into(), "e".into()],
            vec![vec![(1, 1), (0, 0)], vec![(0, 1), (1, 1)]],
        )
        .expect("odometer is valid")
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn table(&self) -> &[Vec<(usize, usize)>] {
        &self.table
    }

    /// Image of a word (as letters) under state `q`.
    pub fn act(&self, mut q: usize, word: &[usize]) -> Vec<usize> {
        word.iter()
            .map(|&x| {
                let (y, next) = self.table[q][x];
                q = next;
                y
            })
            .collect()
    }
}

/// A group acting on a finite ordered universe through named generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAction {
    points: Vec<String>,
    index: HashMap<String, usize>,
    generators: BTreeMap<String, (Permutation, Permutation)>,
}

impl GroupAction {
    pub fn from_permutations(points: Vec<String>, generators: Vec<(String, Permutation)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if p.is_empty() || p.chars().any(char::is_whitespace) {
                return Err(Error::InvalidVertexId(p.clone()));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(p.clone()));
            }
        }
        let mut gens = BTreeMap::new();
        for (name, perm) in generators {
            if !valid_generator(&name) {
                return Err(Error::UnknownGenerator(name));
            }
            if perm.degree() != points.len() {
                return Err(Error::InvalidPermutation(format!(
                    "generator {name} has degree {}, universe has {} points",
                    perm.degree(),
                    points.len()
                )));
            }
            let inv = perm.inverse();
            if gens.insert(name.clone(), (perm, inv)).is_some() {
                return Err(Error::Precondition(format!("generator {name} defined twice")));
            }
        }
        Ok(GroupAction {
            points,
            index,
            generators: gens,
        })
    }

    /// Points are `1..=n`; generators are given in 1-based one-line notation.
    pub fn from_one_line(n: usize, generators: &[(&str, &[usize])]) -> Result<Self> {
        let points = (1..=n).map(|i| i.to_string()).collect();
        let gens = generators
            .iter()
            .map(|(name, line)| Ok((name.to_string(), Permutation::from_one_line(line)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_permutations(points, gens)
    }

    /// Action of every state on the words of length `level`. Points are the
    /// words written as digit strings (dot-separated when `k > 10`), in
    /// lexicographic order.
    pub fn from_mealy(automaton: &MealyAutomaton, level: usize) -> Result<Self> {
        let k = automaton.alphabet;
        let size = k.saturating_pow(u32::try_from(level).unwrap_or(u32::MAX));
        if size > LEVEL_CAP {
            return Err(Error::DimensionCap {
                dim: size,
                cap: LEVEL_CAP,
            });
        }
        let decode = |mut idx: usize| {
            let mut w = vec![0; level];
            for slot in w.iter_mut().rev() {
                *slot = idx % k;
                idx /= k;
            }
            w
        };
        let encode = |w: &[usize]| w.iter().fold(0, |acc, &x| acc * k + x);
        let sep = if k > 10 { "." } else { "" };
        let points = (0..size)
            .map(|i| {
                let w = decode(i);
                if w.is_empty() {
                    "()".to_string()
                } else {
                    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
                }
            })
            .collect();
        let generators = automaton
            .states
            .iter()
            .enumerate()
            .map(|(q, name)| {
                let image = (0..size).map(|i| encode(&automaton.act(q, &decode(i)))).collect();
                Ok((name.clone(), Permutation::from_images(image)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_permutations(points, generators)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, p: &str) -> Result<usize> {
        self.index.get(p).copied().ok_or_else(|| Error::UnknownPoint(p.to_string()))
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn generator(&self, name: &str) -> Result<&Permutation> {
        self.generators
            .get(name)
            .map(|(p, _)| p)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Permutation of the universe realizing `word`; the rightmost letter acts first.
    pub fn word_permutation(&self, word: &Word) -> Result<Permutation> {
        let mut acc = Permutation::identity(self.points.len());
        for l in word.letters() {
            let (p, inv) = self
                .generators
                .get(&l.generator)
                .ok_or_else(|| Error::UnknownGenerator(l.generator.clone()))?;
            acc = acc.after(if l.inverse { inv } else { p });
        }
        Ok(acc)
    }
}
