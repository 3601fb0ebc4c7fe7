//! Vertices of the rooted tree `X*`, eventually periodic boundary points and
//! permutations of the alphabet.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of the alphabet `{0, .., k-1}`.
pub type Letter = u8;

/// Largest supported alphabet.
pub const MAX_ARITY: usize = 255;

/// The alphabet `X = {0, .., k-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_ARITY {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.0).map(|x| x as Letter)
    }

    /// Number of vertices on level `n`, if it fits in a `u64`.
    pub fn level_size(self, n: usize) -> Option<u64> {
        (self.0 as u64).checked_pow(u32::try_from(n).ok()?)
    }

    pub fn check(self, letter: Letter) -> Result<()> {
        if (letter as usize) < self.0 {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter: letter as usize,
                arity: self.0,
            })
        }
    }
}

/// A finite word over the alphabet, read from the root downwards.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Vertex(Vec<Letter>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Vertex(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Vertex(letters)
    }

    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        self.0.iter().try_for_each(|&x| alphabet.check(x))
    }

    /// Vertex at position `index` of level `len` in lexicographic order
    /// (first letter most significant).
    pub fn from_index(mut index: u64, len: usize, arity: usize) -> Vertex {
        let mut letters = vec![0; len];
        for slot in letters.iter_mut().rev() {
            *slot = (index % arity as u64) as Letter;
            index /= arity as u64;
        }
        Vertex(letters)
    }
}

impl From<Vec<Letter>> for Vertex {
    fn from(letters: Vec<Letter>) -> Self {
        Vertex(letters)
    }
}

impl From<&[Letter]> for Vertex {
    fn from(letters: &[Letter]) -> Self {
        Vertex(letters.to_vec())
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.iter().all(|&x| x < 10) {
        for x in letters {
            write!(f, "{x}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = letters.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<Letter>()
                    .map_err(|_| Error::InvalidWord(format!("bad letter `{t}`")))
            })
            .collect()
    } else {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Letter)
                    .ok_or_else(|| Error::InvalidWord(format!("bad letter `{c}`")))
            })
            .collect()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Digits (`"011"`) or comma-separated letters (`"0,11,2"`).
    fn from_str(s: &str) -> Result<Self> {
        parse_letters(s).map(Vertex)
    }
}

/// An eventually periodic point `pre · per^ω` of the boundary `X^ω`.
///
/// Always stored canonically: the period is primitive, and the preperiod is
/// as short as possible (its last letter differs from the last letter of
/// the period).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BoundaryPoint {
    pre: Vec<Letter>,
    per: Vec<Letter>,
}

impl BoundaryPoint {
    pub fn new(pre: Vec<Letter>, per: Vec<Letter>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::InvalidBoundaryPoint("empty period".into()));
        }
        let mut pre = pre;
        let mut per = primitive_root(&per).to_vec();
        while let (Some(&a), Some(&b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(BoundaryPoint { pre, per })
    }

    /// The constant sequence `x^ω`.
    pub fn constant(x: Letter) -> Self {
        BoundaryPoint {
            pre: Vec::new(),
            per: vec![x],
        }
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.pre
    }

    pub fn period(&self) -> &[Letter] {
        &self.per
    }

    /// The `i`-th letter (0-based).
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    /// The beginning of length `n`.
    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex((0..n).map(|i| self.letter(i)).collect())
    }

    /// The point with its first `n` letters removed.
    pub fn tail(&self, n: usize) -> BoundaryPoint {
        if n <= self.pre.len() {
            return BoundaryPoint {
                pre: self.pre[n..].to_vec(),
                per: self.per.clone(),
            };
        }
        let shift = (n - self.pre.len()) % self.per.len();
        let mut per = self.per.clone();
        per.rotate_left(shift);
        BoundaryPoint { pre: Vec::new(), per }
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        self.pre
            .iter()
            .chain(self.per.iter())
            .try_for_each(|&x| alphabet.check(x))
    }
}

/// Shortest `r` with `word = r^m`.
pub(crate) fn primitive_root<T: PartialEq>(word: &[T]) -> &[T] {
    let n = word.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| word[i] == word[i - d]) {
            return &word[..d];
        }
    }
    word
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.pre)?;
        write!(f, ":")?;
        write_letters(f, &self.per)
    }
}

impl FromStr for BoundaryPoint {
    type Err = Error;

    /// `PRE:PER`, e.g. `:0` for `0^ω` and `1:10` for `1(10)^ω`.
    fn from_str(s: &str) -> Result<Self> {
        let (pre, per) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidBoundaryPoint(format!("expected PRE:PER, got `{s}`")))?;
        let pre = parse_letters(pre).map_err(|e| Error::InvalidBoundaryPoint(e.to_string()))?;
        let per = parse_letters(per).map_err(|e| Error::InvalidBoundaryPoint(e.to_string()))?;
        BoundaryPoint::new(pre, per)
    }
}

/// A permutation of the alphabet, stored as the list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<Letter>);

impl Permutation {
    pub fn new(images: Vec<Letter>) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_ARITY {
            return Err(Error::InvalidPermutation(format!("size {n}")));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).map(|x| x as Letter).collect())
    }

    pub fn images(&self) -> &[Letter] {
        &self.0
    }

    pub fn apply(&self, x: Letter) -> Letter {
        self.0[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as Letter;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn after(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl From<$t> for String {
            fn from(x: $t) -> String {
                x.to_string()
            }
        }

        impl TryFrom<String> for $t {
            type Error = Error;

            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }
    };
}

string_serde!(Vertex);
string_serde!(BoundaryPoint);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_point_canonical_form() {
        let w = BoundaryPoint::new(vec![1, 1], vec![1, 1]).unwrap();
        assert_eq!(w, BoundaryPoint::constant(1));
        let w = BoundaryPoint::new(vec![0, 1], vec![0, 1]).unwrap();
        assert_eq!(w.preperiod(), &[] as &[Letter]);
        assert_eq!(w.period(), &[0, 1]);
        let w = BoundaryPoint::new(vec![1], vec![0, 1]).unwrap();
        assert_eq!(w.preperiod(), &[] as &[Letter]);
        assert_eq!(w.period(), &[1, 0]);
        assert!(BoundaryPoint::new(vec![], vec![]).is_err());
    }

    #[test]
    fn boundary_point_letters_and_tail() {
        // 0(10)^ω = (01)^ω
        let w: BoundaryPoint = "0:10".parse().unwrap();
        assert_eq!(w.to_string(), ":01");
        assert_eq!(w.prefix(5), "01010".parse().unwrap());
        assert_eq!(w.tail(1), ":10".parse().unwrap());
        assert_eq!(w.tail(2), w);
        let w: BoundaryPoint = "11:0".parse().unwrap();
        assert_eq!(w.tail(1), "1:0".parse().unwrap());
        assert_eq!(w.tail(3), BoundaryPoint::constant(0));
    }

    #[test]
    fn vertex_parsing() {
        let v: Vertex = "011".parse().unwrap();
        assert_eq!(v.letters(), &[0, 1, 1]);
        let v: Vertex = "0,11,2".parse().unwrap();
        assert_eq!(v.letters(), &[0, 11, 2]);
        assert_eq!(v.to_string(), "0,11,2");
        assert!("0x".parse::<Vertex>().is_err());
        assert_eq!("".parse::<Vertex>().unwrap(), Vertex::root());
    }

    #[test]
    fn permutation_checks() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        assert!(p.after(&p.inverse()).is_identity());
        assert_eq!(p.after(&p).images(), &[2, 0, 1]);
    }
}
