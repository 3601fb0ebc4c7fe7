//! Named generating sets and the automaton text format.
//!
//! ```text
//! alphabet 2
//! state a
//! perm 1 0
//! on 0 -> e
//! on 1 -> a
//! initial a
//! ```
//!
//! `e` is the reserved identity state. Each `initial <name>` line exports
//! the state `<name>` as a generator. `#` starts a comment.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::automaton::{Automorphism, StateId, StateTable};
use crate::error::{Error, Result};
use crate::tree::{Alphabet, Letter, Permutation};
use crate::word::{GroupWord, WordLetter};

/// Name of the reserved identity state.
pub const IDENTITY_NAME: &str = "e";

/// A generator or the inverse of one, as used in word searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub generator: usize,
    pub inverse: bool,
}

impl Symbol {
    pub fn inverted(self) -> Symbol {
        Symbol {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// An ordered set of named automorphisms over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    alphabet: Alphabet,
    names: Vec<String>,
    elements: Vec<Automorphism>,
    inverses: Vec<Automorphism>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl GeneratorSet {
    pub fn new(alphabet: Alphabet) -> Self {
        GeneratorSet {
            alphabet,
            names: Vec::new(),
            elements: Vec::new(),
            inverses: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, g: Automorphism) -> Result<()> {
        let name = name.into();
        if !valid_name(&name) || name == IDENTITY_NAME {
            return Err(Error::InvalidWord(format!("invalid generator name `{name}`")));
        }
        if self.names.contains(&name) {
            return Err(Error::InvalidWord(format!("duplicate generator `{name}`")));
        }
        if g.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.size(),
                right: g.arity(),
            });
        }
        self.inverses.push(g.invert());
        self.elements.push(g);
        self.names.push(name);
        Ok(())
    }

    pub fn with(mut self, name: impl Into<String>, g: Automorphism) -> Result<Self> {
        self.push(name, g)?;
        Ok(self)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Automorphism)> {
        self.names.iter().map(String::as_str).zip(self.elements.iter())
    }

    pub fn get(&self, name: &str) -> Option<&Automorphism> {
        self.index_of(name).map(|i| &self.elements[i])
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Generators followed by their inverses: `g_0, g_0⁻¹, g_1, g_1⁻¹, ..`.
    pub fn symbols(&self) -> Vec<Symbol> {
        (0..self.len())
            .flat_map(|generator| {
                [false, true].map(|inverse| Symbol { generator, inverse })
            })
            .collect()
    }

    pub fn symbol_element(&self, s: Symbol) -> &Automorphism {
        if s.inverse {
            &self.inverses[s.generator]
        } else {
            &self.elements[s.generator]
        }
    }

    pub fn symbol_letter(&self, s: Symbol) -> WordLetter {
        WordLetter::new(self.names[s.generator].clone(), s.inverse)
    }

    pub fn symbol_name(&self, s: Symbol) -> String {
        if s.inverse {
            format!("{}^-1", self.names[s.generator])
        } else {
            self.names[s.generator].clone()
        }
    }

    pub fn word_from_symbols(&self, symbols: &[Symbol]) -> GroupWord {
        GroupWord::new(symbols.iter().map(|&s| self.symbol_letter(s)).collect())
    }

    pub fn symbols_from_word(&self, word: &GroupWord) -> Result<Vec<Symbol>> {
        word.letters()
            .iter()
            .map(|l| {
                self.index_of(&l.name)
                    .map(|generator| Symbol {
                        generator,
                        inverse: l.inverse,
                    })
                    .ok_or_else(|| Error::UnknownGenerator(l.name.clone()))
            })
            .collect()
    }

    /// The symmetric generating set `S = S⁻¹`: generators and inverses with
    /// repeated elements removed, in symbol order.
    pub fn symmetric(&self) -> Vec<(String, Automorphism)> {
        let mut out: Vec<(String, Automorphism)> = Vec::new();
        for s in self.symbols() {
            let g = self.symbol_element(s);
            if !out.iter().any(|(_, h)| h == g) {
                out.push((self.symbol_name(s), g.clone()));
            }
        }
        out
    }

    /// Product of the word's letters, read left to right.
    pub fn evaluate(&self, word: &GroupWord) -> Result<Automorphism> {
        let symbols = self.symbols_from_word(word)?;
        self.evaluate_symbols(&symbols)
    }

    pub fn evaluate_symbols(&self, symbols: &[Symbol]) -> Result<Automorphism> {
        let mut acc = Automorphism::identity(self.alphabet);
        for &s in symbols {
            acc = acc.compose(self.symbol_element(s))?;
        }
        Ok(acc)
    }

    /// Parses the automaton text format.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().parse(text)
    }

    /// Writes the generators in the automaton text format. Shared sections
    /// are emitted once; sections that are generators keep their names.
    pub fn to_text(&self) -> String {
        let k = self.alphabet.size();
        let mut names: HashMap<Automorphism, String> = HashMap::new();
        names.insert(Automorphism::identity(self.alphabet), IDENTITY_NAME.to_string());
        for (name, g) in self.iter() {
            names.entry(g.clone()).or_insert_with(|| name.to_string());
        }
        let mut fresh = 0usize;
        let mut order: Vec<Automorphism> = Vec::new();
        let mut queue: VecDeque<Automorphism> = self.elements.iter().cloned().collect();
        let mut emitted: HashMap<Automorphism, ()> = HashMap::new();
        while let Some(g) = queue.pop_front() {
            if g.is_identity() || emitted.contains_key(&g) {
                continue;
            }
            emitted.insert(g.clone(), ());
            order.push(g.clone());
            for x in 0..k as Letter {
                let s = g.state_automorphism(g.next_state(g.initial(), x));
                if !names.contains_key(&s) {
                    let name = loop {
                        fresh += 1;
                        let candidate = format!("s{fresh}");
                        if !self.names.contains(&candidate) {
                            break candidate;
                        }
                    };
                    names.insert(s.clone(), name);
                }
                queue.push_back(s);
            }
        }

        let mut out = String::new();
        let _ = writeln!(out, "alphabet {k}");
        for g in &order {
            let _ = writeln!(out, "state {}", names[g]);
            let perm: Vec<String> = g.root_perm().images().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "perm {}", perm.join(" "));
            for x in 0..k as Letter {
                let s = g.state_automorphism(g.next_state(g.initial(), x));
                let _ = writeln!(out, "on {x} -> {}", names[&s]);
            }
        }
        // generators equal to an earlier name are exported as their own state
        let mut aliases = BTreeMap::new();
        for (name, g) in self.iter() {
            if names[g] != name {
                aliases.insert(name.to_string(), g.clone());
            }
        }
        for (name, g) in &aliases {
            let _ = writeln!(out, "state {name}");
            let perm: Vec<String> = g.root_perm().images().iter().map(|x| x.to_string()).collect();
            let _ = writeln!(out, "perm {}", perm.join(" "));
            for x in 0..k as Letter {
                let s = g.state_automorphism(g.next_state(g.initial(), x));
                let _ = writeln!(out, "on {x} -> {}", names[&s]);
            }
        }
        for name in &self.names {
            let _ = writeln!(out, "initial {name}");
        }
        out
    }
}

#[derive(Default)]
struct Parser {
    alphabet: Option<Alphabet>,
    states: Vec<PendingState>,
    by_name: HashMap<String, usize>,
    initials: Vec<(String, usize, usize)>,
}

struct PendingState {
    name: String,
    line: usize,
    perm: Option<Permutation>,
    on: Vec<Option<(String, usize, usize)>>,
}

fn perr(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl Parser {
    fn parse(mut self, text: &str) -> Result<GeneratorSet> {
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = tokenize(content);
            if tokens.is_empty() {
                continue;
            }
            self.line(line_no, &tokens)?;
        }
        self.finish()
    }

    fn alphabet(&self, line: usize, column: usize) -> Result<Alphabet> {
        self.alphabet
            .ok_or_else(|| perr(line, column, "`alphabet` must come first"))
    }

    fn line(&mut self, line: usize, tokens: &[(usize, &str)]) -> Result<()> {
        let (col, keyword) = tokens[0];
        match keyword {
            "alphabet" => {
                if self.alphabet.is_some() {
                    return Err(perr(line, col, "duplicate `alphabet`"));
                }
                let (c, v) = *tokens
                    .get(1)
                    .ok_or_else(|| perr(line, col, "expected alphabet size"))?;
                let k: usize = v
                    .parse()
                    .map_err(|_| perr(line, c, format!("bad alphabet size `{v}`")))?;
                let a = Alphabet::new(k).map_err(|e| perr(line, c, e.to_string()))?;
                expect_end(line, tokens, 2)?;
                self.alphabet = Some(a);
            }
            "state" => {
                let a = self.alphabet(line, col)?;
                let (c, name) = *tokens
                    .get(1)
                    .ok_or_else(|| perr(line, col, "expected state name"))?;
                if !valid_name(name) {
                    return Err(perr(line, c, format!("invalid state name `{name}`")));
                }
                if name == IDENTITY_NAME {
                    return Err(perr(line, c, "`e` is the reserved identity state"));
                }
                if self.by_name.contains_key(name) {
                    return Err(perr(line, c, format!("duplicate state `{name}`")));
                }
                expect_end(line, tokens, 2)?;
                self.by_name.insert(name.to_string(), self.states.len());
                self.states.push(PendingState {
                    name: name.to_string(),
                    line,
                    perm: None,
                    on: vec![None; a.size()],
                });
            }
            "perm" => {
                let a = self.alphabet(line, col)?;
                let state = self
                    .states
                    .last_mut()
                    .ok_or_else(|| perr(line, col, "`perm` outside a state block"))?;
                if state.perm.is_some() {
                    return Err(perr(line, col, "duplicate `perm`"));
                }
                if tokens.len() != a.size() + 1 {
                    return Err(perr(
                        line,
                        col,
                        format!("expected {} images, got {}", a.size(), tokens.len() - 1),
                    ));
                }
                let mut images = Vec::with_capacity(a.size());
                for &(c, t) in &tokens[1..] {
                    let x: usize = t
                        .parse()
                        .map_err(|_| perr(line, c, format!("bad letter `{t}`")))?;
                    if x >= a.size() {
                        return Err(perr(line, c, format!("letter {x} outside alphabet")));
                    }
                    images.push(x as Letter);
                }
                let perm = Permutation::new(images).map_err(|e| perr(line, col, e.to_string()))?;
                state.perm = Some(perm);
            }
            "on" => {
                let a = self.alphabet(line, col)?;
                let state = self
                    .states
                    .last_mut()
                    .ok_or_else(|| perr(line, col, "`on` outside a state block"))?;
                if tokens.len() != 4 || tokens[2].1 != "->" {
                    return Err(perr(line, col, "expected `on <letter> -> <state>`"));
                }
                let (c, t) = tokens[1];
                let x: usize = t
                    .parse()
                    .map_err(|_| perr(line, c, format!("bad letter `{t}`")))?;
                if x >= a.size() {
                    return Err(perr(line, c, format!("letter {x} outside alphabet")));
                }
                if state.on[x].is_some() {
                    return Err(perr(line, c, format!("duplicate transition on {x}")));
                }
                let (c, target) = tokens[3];
                state.on[x] = Some((target.to_string(), line, c));
            }
            "initial" => {
                self.alphabet(line, col)?;
                let (c, name) = *tokens
                    .get(1)
                    .ok_or_else(|| perr(line, col, "expected state name"))?;
                expect_end(line, tokens, 2)?;
                self.initials.push((name.to_string(), line, c));
            }
            other => return Err(perr(line, col, format!("unknown keyword `{other}`"))),
        }
        Ok(())
    }

    fn finish(self) -> Result<GeneratorSet> {
        let alphabet = self
            .alphabet
            .ok_or_else(|| perr(1, 1, "missing `alphabet` line"))?;
        let k = alphabet.size();
        let mut table = StateTable::new(alphabet);
        let identity = self.states.len() as StateId;
        let resolve = |name: &str, line: usize, col: usize| -> Result<StateId> {
            if name == IDENTITY_NAME {
                return Ok(identity);
            }
            self.by_name
                .get(name)
                .map(|&i| i as StateId)
                .ok_or_else(|| perr(line, col, format!("undefined state `{name}`")))
        };
        for s in &self.states {
            let perm = s
                .perm
                .clone()
                .ok_or_else(|| perr(s.line, 1, format!("state `{}` has no `perm`", s.name)))?;
            let mut next = Vec::with_capacity(k);
            for (x, on) in s.on.iter().enumerate() {
                let (target, line, col) = on.as_ref().ok_or_else(|| {
                    perr(s.line, 1, format!("state `{}` has no transition on {x}", s.name))
                })?;
                next.push(resolve(target, *line, *col)?);
            }
            table.push_state(perm, next)?;
        }
        table.push_identity();
        let mut set = GeneratorSet::new(alphabet);
        for (name, line, col) in &self.initials {
            if name == IDENTITY_NAME {
                return Err(perr(*line, *col, "the identity `e` cannot be exported by name"));
            }
            let q = resolve(name, *line, *col)?;
            let g = table.minimize(q);
            set.push(name.clone(), g).map_err(|e| perr(*line, *col, e.to_string()))?;
        }
        Ok(set)
    }
}

fn tokenize(content: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in content.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &content[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &content[s..]));
    }
    // columns are 1-based character positions
    out.into_iter()
        .map(|(s, t)| (content[..s].chars().count() + 1, t))
        .collect()
}

fn expect_end(line: usize, tokens: &[(usize, &str)], n: usize) -> Result<()> {
    match tokens.get(n) {
        Some(&(c, t)) => Err(perr(line, c, format!("unexpected token `{t}`"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Vertex;

    const TULLIO: &str = "\
# the adding machine and its companion
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

    #[test]
    fn parses_and_evaluates() {
        let gens = GeneratorSet::parse(TULLIO).unwrap();
        assert_eq!(gens.names(), &["a", "b"]);
        let a = gens.get("a").unwrap();
        assert_eq!(a.apply(&"011".parse().unwrap()).unwrap(), "111".parse::<Vertex>().unwrap());
        let aaa = gens.evaluate(&"a a a".parse().unwrap()).unwrap();
        // 3 + 3 = 6, LSB first
        assert_eq!(aaa.apply(&"110".parse().unwrap()).unwrap(), "011".parse::<Vertex>().unwrap());
        assert!(gens.evaluate(&GroupWord::empty()).unwrap().is_identity());
        assert!(matches!(
            gens.evaluate(&"c".parse().unwrap()),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn section_of_a_product() {
        let gens = GeneratorSet::parse(TULLIO).unwrap();
        let ba = gens.evaluate(&"b a".parse().unwrap()).unwrap();
        let s = ba.section(&"1".parse().unwrap()).unwrap();
        assert_eq!(s, ba);
    }

    #[test]
    fn round_trip() {
        let gens = GeneratorSet::parse(TULLIO).unwrap();
        let again = GeneratorSet::parse(&gens.to_text()).unwrap();
        assert_eq!(gens, again);
        assert_eq!(gens.to_text(), again.to_text());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = GeneratorSet::parse("alphabet 2\nstate a\nperm 1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, column: 1, .. }), "{err}");
        let err = GeneratorSet::parse("alphabet 2\nstate a\nperm 1 0\non 0 -> e\non 1 -> zz\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 5, column: 9, .. }), "{err}");
        let err = GeneratorSet::parse("state a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = GeneratorSet::parse("alphabet 2\nstate e\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 7, .. }));
        let err = GeneratorSet::parse("alphabet 2\nstate a\nperm 1 0\non 0 -> e\ninitial a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn symmetric_set_drops_repeats() {
        let text = "alphabet 2\nstate a\nperm 1 0\non 0 -> e\non 1 -> e\ninitial a\n";
        let gens = GeneratorSet::parse(text).unwrap();
        assert_eq!(gens.symmetric().len(), 1);
        let gens = GeneratorSet::parse(TULLIO).unwrap();
        assert_eq!(gens.symmetric().len(), 4);
    }
}
