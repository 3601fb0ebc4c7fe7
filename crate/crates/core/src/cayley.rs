//! Interned group elements and bounded word enumeration.

use std::collections::HashMap;

use crate::automaton::Automorphism;
use crate::error::{Error, Result};
use crate::group::{GeneratorSet, Symbol};

/// Distinct elements met during a search, with memoized right
/// multiplication by generator symbols. Element 0 is the identity.
pub struct ElementStore<'a> {
    gens: &'a GeneratorSet,
    elements: Vec<Automorphism>,
    index: HashMap<Automorphism, usize>,
    products: HashMap<(usize, Symbol), usize>,
    budget: usize,
}

impl<'a> ElementStore<'a> {
    pub fn new(gens: &'a GeneratorSet, budget: usize) -> Self {
        let e = Automorphism::identity(gens.alphabet());
        let mut index = HashMap::new();
        index.insert(e.clone(), 0);
        ElementStore {
            gens,
            elements: vec![e],
            index,
            products: HashMap::new(),
            budget,
        }
    }

    pub fn generators(&self) -> &GeneratorSet {
        self.gens
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: usize) -> &Automorphism {
        &self.elements[id]
    }

    pub fn lookup(&self, g: &Automorphism) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Interns `g`, returning `(id, newly added)`.
    pub fn intern(&mut self, g: Automorphism) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&g) {
            return Ok((id, false));
        }
        if self.elements.len() >= self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        let id = self.elements.len();
        self.index.insert(g.clone(), id);
        self.elements.push(g);
        Ok((id, true))
    }

    /// `x · s`, memoized.
    pub fn step(&mut self, x: usize, s: Symbol) -> Result<usize> {
        if let Some(&y) = self.products.get(&(x, s)) {
            return Ok(y);
        }
        let g = self.elements[x].compose(self.gens.symbol_element(s))?;
        let (y, _) = self.intern(g)?;
        self.products.insert((x, s), y);
        Ok(y)
    }
}

/// The ball of a given radius in the Cayley graph, built breadth first.
pub struct Ball<'a> {
    pub store: ElementStore<'a>,
    /// Shortest word of each element; ties broken by symbol order.
    pub words: Vec<Vec<Symbol>>,
    /// Every element of the group was reached (a sphere came out empty).
    pub exhausted: bool,
    /// The element budget stopped the search early.
    pub truncated: bool,
    pub radius: usize,
}

/// An edge `x --s--> y` of the Cayley graph met while building a ball.
pub struct BallEdge {
    pub from: usize,
    pub symbol: Symbol,
    pub to: usize,
    pub discovered: bool,
}

/// Builds the ball of `radius`, calling `on_edge` for every edge explored
/// from an element of the inner ball.
pub fn ball_with<'a>(
    gens: &'a GeneratorSet,
    radius: usize,
    budget: usize,
    mut on_edge: impl FnMut(&Ball<'a>, &BallEdge),
) -> Ball<'a> {
    let mut ball = Ball {
        store: ElementStore::new(gens, budget),
        words: vec![Vec::new()],
        exhausted: false,
        truncated: false,
        radius,
    };
    let symbols = gens.symbols();
    let mut sphere = vec![0usize];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &x in &sphere {
            for &s in &symbols {
                let before = ball.store.len();
                let y = match ball.store.step(x, s) {
                    Ok(y) => y,
                    Err(_) => {
                        ball.truncated = true;
                        return ball;
                    }
                };
                let discovered = ball.store.len() > before && y == before;
                if discovered {
                    let mut w = ball.words[x].clone();
                    w.push(s);
                    ball.words.push(w);
                    next.push(y);
                }
                on_edge(
                    &ball,
                    &BallEdge {
                        from: x,
                        symbol: s,
                        to: y,
                        discovered,
                    },
                );
            }
        }
        if next.is_empty() {
            ball.exhausted = true;
            return ball;
        }
        sphere = next;
    }
    // the group is exhausted when the last sphere has no new neighbours
    ball
}

pub fn ball(gens: &GeneratorSet, radius: usize, budget: usize) -> Ball<'_> {
    ball_with(gens, radius, budget, |_, _| {})
}

/// Outcome of enumerating reduced words.
pub struct WordEnumeration {
    /// `(word, element id)` for every visited nonempty reduced word, in
    /// order of length, then symbol order.
    pub words: Vec<(Vec<Symbol>, usize)>,
    pub complete: bool,
}

/// Visits every nonempty freely reduced word of length `≤ max_len`,
/// keeping those accepted by `keep`.
pub fn reduced_words(
    store: &mut ElementStore<'_>,
    max_len: usize,
    mut keep: impl FnMut(&mut ElementStore<'_>, &[Symbol], usize) -> Result<bool>,
) -> WordEnumeration {
    let symbols = store.generators().symbols();
    let mut out = Vec::new();
    let mut frontier: Vec<(Vec<Symbol>, usize)> = vec![(Vec::new(), 0)];
    let mut complete = true;
    'levels: for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, x) in &frontier {
            for &s in &symbols {
                if word.last().is_some_and(|&l| l == s.inverted()) {
                    continue;
                }
                let y = match store.step(*x, s) {
                    Ok(y) => y,
                    Err(_) => {
                        complete = false;
                        break 'levels;
                    }
                };
                let mut w = word.clone();
                w.push(s);
                match keep(store, &w, y) {
                    Ok(true) => out.push((w.clone(), y)),
                    Ok(false) => {}
                    Err(_) => {
                        complete = false;
                        break 'levels;
                    }
                }
                next.push((w, y));
            }
        }
        frontier = next;
    }
    WordEnumeration {
        words: out,
        complete,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn finite_group_is_exhausted() {
        // a = σ on the binary tree generates Z/2
        let gens = GeneratorSet::parse("alphabet 2\nstate a\nperm 1 0\non 0 -> e\non 1 -> e\ninitial a\n").unwrap();
        let b = ball(&gens, 10, 100);
        assert!(b.exhausted);
        assert_eq!(b.store.len(), 2);
    }

    #[test]
    fn adding_machine_ball_is_a_path() {
        let gens = catalog::builtin("adding_machine").unwrap().generators;
        let b = ball(&gens, 5, 1000);
        assert_eq!(b.store.len(), 11);
        assert!(!b.exhausted);
        assert!(!b.truncated);
    }

    #[test]
    fn reduced_word_counts() {
        let gens = catalog::builtin("tullio").unwrap().generators;
        let mut store = ElementStore::new(&gens, 10_000);
        let e = reduced_words(&mut store, 3, |_, _, _| Ok(true));
        assert!(e.complete);
        // 4 + 12 + 36
        assert_eq!(e.words.len(), 52);
    }
}
