//! Words over named generators and their inverses, with the free-group
//! operations used by the relation search and the kernel-witness recipes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One letter of a group word: a generator name and whether it is inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WordLetter {
    pub name: String,
    pub inverse: bool,
}

impl WordLetter {
    pub fn new(name: impl Into<String>, inverse: bool) -> Self {
        WordLetter {
            name: name.into(),
            inverse,
        }
    }

    pub fn inverted(&self) -> Self {
        WordLetter {
            name: self.name.clone(),
            inverse: !self.inverse,
        }
    }

    fn cancels(&self, other: &WordLetter) -> bool {
        self.name == other.name && self.inverse != other.inverse
    }
}

/// A freely reduced word; the product is read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct GroupWord(Vec<WordLetter>);

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    /// Builds a word and freely reduces it.
    pub fn new(letters: Vec<WordLetter>) -> Self {
        let mut out: Vec<WordLetter> = Vec::with_capacity(letters.len());
        for l in letters {
            if out.last().is_some_and(|last| last.cancels(&l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord(out)
    }

    pub fn generator(name: impl Into<String>) -> Self {
        GroupWord(vec![WordLetter::new(name, false)])
    }

    pub fn letters(&self) -> &[WordLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(WordLetter::inverted).collect())
    }

    pub fn mul(&self, other: &GroupWord) -> Self {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        GroupWord::new(letters)
    }

    pub fn pow(&self, m: i64) -> Self {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * m.unsigned_abs() as usize);
        for _ in 0..m.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        GroupWord::new(letters)
    }

    /// `[x, y] = x y x⁻¹ y⁻¹`, reduced.
    pub fn commutator(x: &GroupWord, y: &GroupWord) -> Self {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    /// Splits off a maximal conjugator: returns `(c, core)` with
    /// `self = c · core · c⁻¹` and `core` cyclically reduced.
    pub fn cyclic_decomposition(&self) -> (GroupWord, GroupWord) {
        let n = self.0.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.0[i].cancels(&self.0[n - 1 - i]) {
            i += 1;
        }
        (
            GroupWord(self.0[..i].to_vec()),
            GroupWord(self.0[i..n - i].to_vec()),
        )
    }

    pub fn cyclically_reduced(&self) -> Self {
        self.cyclic_decomposition().1
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || !self.0[0].cancels(&self.0[self.0.len() - 1])
    }

    /// Primitive root: `(r, m)` with `self = r^m`, `m ≥ 1` and `r` not a
    /// proper power. `None` for the empty word.
    pub fn primitive_root(&self) -> Option<(GroupWord, u64)> {
        if self.is_empty() {
            return None;
        }
        let (c, core) = self.cyclic_decomposition();
        let root = crate::tree::primitive_root(&core.0);
        let m = (core.len() / root.len()) as u64;
        let root = c.mul(&GroupWord(root.to_vec())).mul(&c.inverse());
        Some((root, m))
    }

    /// Canonical representative of the cyclic word of `self` up to rotation
    /// and inversion: the least rotation of the cyclic reduction or of its
    /// inverse.
    pub fn cyclic_canonical(&self) -> GroupWord {
        let core = self.cyclically_reduced();
        let inv = core.inverse();
        let n = core.len();
        let mut best: Option<Vec<WordLetter>> = None;
        for base in [&core, &inv] {
            for r in 0..n.max(1) {
                let mut rot = base.0.clone();
                rot.rotate_left(r);
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        GroupWord(best.unwrap_or_default())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.name)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;

    /// Tokens separated by whitespace or `*`; each token is `name`,
    /// `name^-1` or `name^m` for an integer `m`.
    fn from_str(s: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in s
            .split(|c: char| c.is_whitespace() || c == '*')
            .filter(|t| !t.is_empty())
        {
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp
                        .parse()
                        .map_err(|_| Error::InvalidWord(format!("bad exponent in `{token}`")))?;
                    (name, exp)
                }
                None => (token, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidWord(format!("bad generator name in `{token}`")));
            }
            let l = WordLetter::new(name, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(l.clone());
            }
        }
        Ok(GroupWord::new(letters))
    }
}

impl From<GroupWord> for String {
    fn from(w: GroupWord) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for GroupWord {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(w("a a^-1 b"), w("b"));
        assert_eq!(w("a^3").len(), 3);
        assert_eq!(w("x^2 * y").to_string(), "x x y");
        assert!(w("").is_empty());
        assert!("a^q".parse::<GroupWord>().is_err());
        assert!("a-b".parse::<GroupWord>().is_err());
    }

    #[test]
    fn cyclic_reduction() {
        let (c, core) = w("a b c b^-1 a^-1").cyclic_decomposition();
        assert_eq!(c, w("a b"));
        assert_eq!(core, w("c"));
        assert!(w("a b").is_cyclically_reduced());
        assert!(!w("a b a^-1").is_cyclically_reduced());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(w("x x x").primitive_root(), Some((w("x"), 3)));
        assert_eq!(w("y x x y^-1").primitive_root(), Some((w("y x y^-1"), 2)));
        assert_eq!(w("x y x y").primitive_root(), Some((w("x y"), 2)));
        assert_eq!(w("x y").primitive_root(), Some((w("x y"), 1)));
        assert_eq!(GroupWord::empty().primitive_root(), None);
    }

    #[test]
    fn cyclic_canonical_identifies_rotations_and_inverses() {
        assert_eq!(w("b a").cyclic_canonical(), w("a b").cyclic_canonical());
        assert_eq!(w("a^-1 a^-1").cyclic_canonical(), w("a a"));
        assert_eq!(w("c a b a^-1 c^-1").cyclic_canonical(), w("b"));
    }
}
