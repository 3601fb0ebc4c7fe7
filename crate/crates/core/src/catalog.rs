//! Built-in wreath recursions and the integer model of the `tullio` group.

use std::collections::HashMap;

use serde::Serialize;

use crate::activity::ActivityKind;
use crate::automaton::Automorphism;
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::tree::{Letter, Vertex};
use crate::word::GroupWord;

/// Properties the test suites re-derive for each entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedProperties {
    /// Activity class of each generator, in generator order.
    pub activity: Vec<(&'static str, ActivityKind)>,
    /// `Some(size)` when the group is contracting with a nucleus of that
    /// size; `None` when it is not contracting.
    pub nucleus_size: Option<usize>,
    /// Short relators, as cyclic words.
    pub relators: Vec<&'static str>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub provenance: &'static str,
    pub source: &'static str,
    pub generators: GeneratorSet,
    pub expected: ExpectedProperties,
}

pub const NAMES: [&str; 6] = [
    "adding_machine",
    "tullio",
    "grigorchuk",
    "basilica",
    "gupta_sidki_3",
    "aleshin",
];

const ADDING_MACHINE: &str = "\
# binary odometer: a(0v) = 1v, a(1v) = 0a(v)
alphabet 2
state a
perm 1 0
on 0 -> e
on 1 -> a
initial a
";

const TULLIO: &str = "\
# a(n) = n + 1 and b(2^k(2n+1)) = 2^k(2n+3) on LSB-first binary integers
alphabet 2
state a
perm 1 0
on 0 -> e
on 1 -> a
state b
perm 0 1
on 0 -> b
on 1 -> a
initial a
initial b
";

const GRIGORCHUK: &str = "\
# a = σ, b = (a, c), c = (a, d), d = (1, b)
alphabet 2
state a
perm 1 0
on 0 -> e
on 1 -> e
state b
perm 0 1
on 0 -> a
on 1 -> c
state c
perm 0 1
on 0 -> a
on 1 -> d
state d
perm 0 1
on 0 -> e
on 1 -> b
initial a
initial b
initial c
initial d
";

const BASILICA: &str = "\
# a = (1, b), b = σ(1, a)
alphabet 2
state a
perm 0 1
on 0 -> e
on 1 -> b
state b
perm 1 0
on 0 -> e
on 1 -> a
initial a
initial b
";

const GUPTA_SIDKI_3: &str = "\
# a = (0 1 2), t = (a, a^-1, t)
alphabet 3
state a
perm 1 2 0
on 0 -> e
on 1 -> e
on 2 -> e
state ai
perm 2 0 1
on 0 -> e
on 1 -> e
on 2 -> e
state t
perm 0 1 2
on 0 -> a
on 1 -> ai
on 2 -> t
initial a
initial t
";

const ALESHIN: &str = "\
# a = σ(b, c), b = σ(c, b), c = (a, a)
alphabet 2
state a
perm 1 0
on 0 -> b
on 1 -> c
state b
perm 1 0
on 0 -> c
on 1 -> b
state c
perm 0 1
on 0 -> a
on 1 -> a
initial a
initial b
initial c
";

/// The built-in entry `name`.
pub fn builtin(name: &str) -> Result<CatalogEntry> {
    let (source, provenance, expected) = match name {
        "adding_machine" => (
            ADDING_MACHINE,
            "binary adding machine (odometer), n -> n + 1 on LSB-first integers",
            ExpectedProperties {
                activity: vec![("a", ActivityKind::Bounded)],
                nucleus_size: Some(3),
                relators: vec![],
            },
        ),
        "tullio" => (
            TULLIO,
            "the permutations a(n) = n + 1 and b(0) = 0, b(2^k(2n+1)) = 2^k(2n+3) of Z",
            ExpectedProperties {
                activity: vec![
                    ("a", ActivityKind::Bounded),
                    ("b", ActivityKind::Polynomial { degree: 1 }),
                ],
                nucleus_size: None,
                relators: vec![],
            },
        ),
        "grigorchuk" => (
            GRIGORCHUK,
            "first Grigorchuk group (R. Grigorchuk, 1980; intermediate growth)",
            ExpectedProperties {
                activity: vec![
                    ("a", ActivityKind::Finitary { depth: 1 }),
                    ("b", ActivityKind::Bounded),
                    ("c", ActivityKind::Bounded),
                    ("d", ActivityKind::Bounded),
                ],
                nucleus_size: Some(5),
                relators: vec!["a a", "b b", "c c", "d d", "b c d^-1"],
            },
        ),
        "basilica" => (
            BASILICA,
            "Basilica group, iterated monodromy group of z^2 - 1 (Grigorchuk and Zuk, 2002)",
            ExpectedProperties {
                activity: vec![("a", ActivityKind::Bounded), ("b", ActivityKind::Bounded)],
                nucleus_size: Some(7),
                relators: vec![],
            },
        ),
        "gupta_sidki_3" => (
            GUPTA_SIDKI_3,
            "Gupta-Sidki 3-group (N. Gupta and S. Sidki, 1983)",
            ExpectedProperties {
                activity: vec![
                    ("a", ActivityKind::Finitary { depth: 1 }),
                    ("t", ActivityKind::Bounded),
                ],
                nucleus_size: Some(5),
                relators: vec!["a a a", "t t t"],
            },
        ),
        "aleshin" => (
            ALESHIN,
            "Aleshin automaton generating a free group of rank 3 (M. Vorobets and Y. Vorobets, 2007)",
            ExpectedProperties {
                activity: vec![
                    ("a", ActivityKind::Exponential),
                    ("b", ActivityKind::Exponential),
                    ("c", ActivityKind::Exponential),
                ],
                nucleus_size: None,
                relators: vec![],
            },
        ),
        other => return Err(Error::UnknownCatalogEntry(other.to_string())),
    };
    let generators = GeneratorSet::parse(source)?;
    Ok(CatalogEntry {
        name: NAMES.iter().copied().find(|n| *n == name).unwrap_or("unknown"),
        provenance,
        source,
        generators,
        expected,
    })
}

/// All entries, in catalog order.
pub fn all() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| builtin(n).expect("catalog entries parse"))
        .collect()
}

/// `b` on the integers: `b(0) = 0`, `b(2^k(2n+1)) = 2^k(2n+3)`.
fn b_step(n: i64, inverse: bool) -> Result<i64> {
    if n == 0 {
        return Ok(0);
    }
    let unit = 1i64 << n.trailing_zeros();
    let shift = unit.checked_mul(if inverse { -2 } else { 2 }).ok_or(Error::Overflow)?;
    n.checked_add(shift).ok_or(Error::Overflow)
}

/// Applies a word over `{a, b}` to an integer through the explicit integer
/// permutations. The rightmost letter acts first.
pub fn tullio_integer_action(word: &GroupWord, n: i64) -> Result<i64> {
    let mut value = n;
    for letter in word.letters().iter().rev() {
        value = match letter.name.as_str() {
            "a" if letter.inverse => value.checked_sub(1).ok_or(Error::Overflow)?,
            "a" => value.checked_add(1).ok_or(Error::Overflow)?,
            "b" => b_step(value, letter.inverse)?,
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
    }
    Ok(value)
}

/// LSB-first binary digits of `n mod 2^depth`.
pub fn encode_lsb(n: i64, depth: usize) -> Vertex {
    Vertex::new((0..depth).map(|i| ((n >> i) & 1) as Letter).collect())
}

pub fn decode_lsb(v: &Vertex) -> u64 {
    v.letters()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x as u64) << i)
        .sum()
}

/// Checks that the tree automorphism of `word` on level `depth` agrees with
/// the integer action, reduced modulo `2^depth`.
pub fn integer_tree_crosscheck(word: &GroupWord, n: i64, depth: usize) -> Result<bool> {
    CrossChecker::new()?.check(word, n, depth)
}

/// [`integer_tree_crosscheck`] with the evaluated words kept between calls.
pub struct CrossChecker {
    gens: GeneratorSet,
    cache: HashMap<GroupWord, Automorphism>,
}

impl CrossChecker {
    pub fn new() -> Result<Self> {
        Ok(CrossChecker {
            gens: builtin("tullio")?.generators,
            cache: HashMap::new(),
        })
    }

    pub fn check(&mut self, word: &GroupWord, n: i64, depth: usize) -> Result<bool> {
        if depth == 0 || depth > 62 {
            return Err(Error::DepthOverflow(format!("depth {depth} not in 1..=62")));
        }
        let modulus = 1i64 << depth;
        if !(0..modulus).contains(&n) {
            return Err(Error::DepthOverflow(format!("{n} does not fit in {depth} bits")));
        }
        let g = match self.cache.get(word) {
            Some(g) => g,
            None => {
                let g = self.gens.evaluate(word)?;
                self.cache.entry(word.clone()).or_insert(g)
            }
        };
        let image = g.apply(&encode_lsb(n, depth))?;
        let expected = tullio_integer_action(word, n)?.rem_euclid(modulus);
        Ok(decode_lsb(&image) == expected as u64)
    }
}
