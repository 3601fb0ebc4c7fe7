//! Self-similarity, the nucleus of a contracting group, and germs at
//! eventually periodic boundary points.
//!
//! Sections of an element at words longer than its number of states are
//! exactly the states reachable from a cycle of its machine ("deep"
//! sections). The nucleus is the least set `N` containing the deep sections
//! of the generators and their inverses and the deep sections of every
//! product `gh` with `g, h ∈ N`; it is reached by fixed-point iteration,
//! which terminates exactly when the group is contracting.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::automaton::{Automorphism, StateId, IDENTITY_STATE};
use crate::cayley;
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::tree::{BoundaryPoint, Letter};
use crate::word::GroupWord;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SelfSimilarity {
    /// Every first-level section of every generator, with a word for it.
    Yes { witness: Vec<SectionWitness> },
    /// A section lies outside the (finite, fully enumerated) group.
    No { generator: String, letter: Letter },
    /// A section was not found among words of length `≤ max_len`.
    Inconclusive {
        generator: String,
        letter: Letter,
        max_len: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionWitness {
    pub generator: String,
    pub letter: Letter,
    pub word: GroupWord,
}

/// Checks `g|_x ∈ G` for generators `g` and letters `x` by searching words
/// of length `≤ max_len`.
pub fn is_self_similar(gens: &GeneratorSet, max_len: usize, budget: usize) -> SelfSimilarity {
    let ball = cayley::ball(gens, max_len, budget);
    let mut witness = Vec::new();
    for (name, g) in gens.iter() {
        for x in 0..gens.alphabet().size() as Letter {
            let s = g.state_automorphism(g.next_state(g.initial(), x));
            match ball.store.lookup(&s) {
                Some(id) => witness.push(SectionWitness {
                    generator: name.to_string(),
                    letter: x,
                    word: gens.word_from_symbols(&ball.words[id]),
                }),
                None if ball.exhausted => {
                    return SelfSimilarity::No {
                        generator: name.to_string(),
                        letter: x,
                    }
                }
                None => {
                    return SelfSimilarity::Inconclusive {
                        generator: name.to_string(),
                        letter: x,
                        max_len,
                    }
                }
            }
        }
    }
    SelfSimilarity::Yes { witness }
}

/// States of `g` reachable from a cycle of its machine, i.e. the sections
/// `g|_v` that occur for arbitrarily long `v`.
pub fn deep_sections(g: &Automorphism) -> Vec<Automorphism> {
    deep_states(g)
        .into_iter()
        .map(|q| g.state_automorphism(q))
        .collect()
}

fn deep_states(g: &Automorphism) -> Vec<StateId> {
    let states = g.reachable_states();
    let n = g.num_states() as usize;
    let k = g.arity() as Letter;
    // a state is deep if it is reachable by a path of length ≥ n
    let mut current = vec![false; n];
    current[g.initial() as usize] = true;
    for _ in 0..n {
        let mut next = vec![false; n];
        for &q in &states {
            if current[q as usize] {
                for x in 0..k {
                    next[g.next_state(q, x) as usize] = true;
                }
            }
        }
        current = next;
    }
    // closure under transitions of the level-n frontier
    let mut deep = current.clone();
    let mut stack: Vec<StateId> = (0..n as StateId).filter(|&q| current[q as usize]).collect();
    while let Some(q) = stack.pop() {
        for x in 0..k {
            let t = g.next_state(q, x);
            if !deep[t as usize] {
                deep[t as usize] = true;
                stack.push(t);
            }
        }
    }
    (0..n as StateId).filter(|&q| deep[q as usize]).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NucleusStatus {
    Found,
    ExceededSize,
    ExceededDepth,
}

#[derive(Debug, Clone, Serialize)]
pub struct NucleusResult {
    pub status: NucleusStatus,
    /// Canonical elements, identity first, then by machine.
    #[serde(skip)]
    pub elements: Vec<Automorphism>,
    pub generations: usize,
    /// Largest number of states among the products examined; sections at
    /// this depth are deep.
    pub stabilization_depth: usize,
}

impl NucleusResult {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn is_found(&self) -> bool {
        self.status == NucleusStatus::Found
    }

    pub fn contains(&self, g: &Automorphism) -> bool {
        self.elements.contains(g)
    }
}

/// Fixed-point iteration for the nucleus, bounded by `max_size` elements
/// and `max_depth` iterations.
pub fn nucleus(gens: &GeneratorSet, max_size: usize, max_depth: usize) -> Result<NucleusResult> {
    let mut set: HashSet<Automorphism> = HashSet::new();
    set.insert(Automorphism::identity(gens.alphabet()));
    for s in gens.symbols() {
        set.extend(deep_sections(gens.symbol_element(s)));
    }
    let mut depth = 0;
    let mut generations = 0;
    let mut checked: HashSet<(Automorphism, Automorphism)> = HashSet::new();
    loop {
        if set.len() > max_size {
            return Ok(finish(NucleusStatus::ExceededSize, set, generations, depth));
        }
        if generations >= max_depth {
            return Ok(finish(NucleusStatus::ExceededDepth, set, generations, depth));
        }
        generations += 1;
        let current: Vec<Automorphism> = sorted(&set);
        let mut added = Vec::new();
        for g in &current {
            for h in &current {
                if !checked.insert((g.clone(), h.clone())) {
                    continue;
                }
                let gh = g.compose(h)?;
                depth = depth.max(gh.num_states() as usize);
                for s in deep_sections(&gh) {
                    if !set.contains(&s) && !added.contains(&s) {
                        added.push(s);
                    }
                }
                if set.len() + added.len() > max_size {
                    set.extend(added);
                    return Ok(finish(NucleusStatus::ExceededSize, set, generations, depth));
                }
            }
        }
        if added.is_empty() {
            return Ok(finish(NucleusStatus::Found, set, generations, depth));
        }
        set.extend(added);
    }
}

fn sorted(set: &HashSet<Automorphism>) -> Vec<Automorphism> {
    let mut v: Vec<Automorphism> = set.iter().cloned().collect();
    v.sort_by(|a, b| (a.num_states(), a).cmp(&(b.num_states(), b)));
    v
}

fn finish(status: NucleusStatus, set: HashSet<Automorphism>, generations: usize, depth: usize) -> NucleusResult {
    NucleusResult {
        status,
        elements: sorted(&set),
        generations,
        stabilization_depth: depth,
    }
}

/// Whether `set` contains the deep sections of every generator, inverse
/// and pairwise product of its own elements.
pub fn is_nucleus_closed(gens: &GeneratorSet, set: &[Automorphism]) -> Result<bool> {
    let members: HashSet<&Automorphism> = set.iter().collect();
    for s in gens.symbols() {
        if !deep_sections(gens.symbol_element(s)).iter().all(|d| members.contains(d)) {
            return Ok(false);
        }
    }
    for g in set {
        for h in set {
            if !deep_sections(&g.compose(h)?).iter().all(|d| members.contains(d)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `g` fixes the boundary point `w`.
pub fn stabilizes(g: &Automorphism, w: &BoundaryPoint) -> Result<bool> {
    Ok(g.apply_boundary(w)? == *w)
}

/// Whether `g` acts trivially on some neighbourhood `p·X^ω` of `w`, i.e. a
/// section of `g` along `w` is trivial. Requires `g(w) = w`.
pub fn germ_is_trivial(g: &Automorphism, w: &BoundaryPoint) -> Result<bool> {
    if !stabilizes(g, w)? {
        return Err(Error::Precondition(format!("the automorphism does not fix {w}")));
    }
    Ok(sections_along(g, w).contains(&IDENTITY_STATE))
}

/// States `g|_p` for all beginnings `p` of `w` (each state once).
fn sections_along(g: &Automorphism, w: &BoundaryPoint) -> Vec<StateId> {
    let mut q = g.initial();
    let mut out = vec![q];
    for &x in w.preperiod() {
        q = g.next_state(q, x);
        out.push(q);
    }
    let mut seen = HashSet::new();
    let period = w.period();
    while seen.insert(q) {
        for &x in period {
            q = g.next_state(q, x);
            out.push(q);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Germ classes of the stabilizer of `w`.
#[derive(Debug, Clone, Serialize)]
pub struct GermClassTable {
    pub point: BoundaryPoint,
    /// A shortest word found for each class; the identity class first.
    pub representatives: Vec<GroupWord>,
    #[serde(skip)]
    pub classes: Vec<Automorphism>,
    /// `multiplication[i][j]` is the class of `classes[i] · classes[j]`.
    pub multiplication: Vec<Vec<usize>>,
    pub class_of_identity: usize,
    /// Words of length `≤ search_length` were examined.
    pub search_length: usize,
    /// Whether every element of the group was examined.
    pub complete: bool,
}

impl GermClassTable {
    pub fn order(&self) -> usize {
        self.classes.len()
    }
}

/// Enumerates germ classes at `w` of stabilizer elements of length
/// `≤ max_len`, then closes them under multiplication.
pub fn germ_group(
    gens: &GeneratorSet,
    nucleus: &NucleusResult,
    w: &BoundaryPoint,
    max_len: usize,
    budget: usize,
) -> Result<GermClassTable> {
    if !nucleus.is_found() {
        return Err(Error::Precondition("germ groups need a found nucleus".into()));
    }
    w.check(gens.alphabet())?;
    let ball = cayley::ball(gens, max_len, budget);
    let mut classes: Vec<Automorphism> = vec![Automorphism::identity(gens.alphabet())];
    let mut representatives: Vec<GroupWord> = vec![GroupWord::empty()];
    let class_of = |classes: &[Automorphism], g: &Automorphism| -> Result<Option<usize>> {
        for (i, c) in classes.iter().enumerate() {
            if germ_is_trivial(&g.compose(&c.invert())?, w)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    };
    for id in 0..ball.store.len() {
        let g = ball.store.get(id);
        if !stabilizes(g, w)? {
            continue;
        }
        if class_of(&classes, g)?.is_none() {
            classes.push(g.clone());
            representatives.push(gens.word_from_symbols(&ball.words[id]));
        }
    }
    // close under products; the bound |N| caps the loop for contracting
    // groups
    let cap = nucleus.size().max(1);
    let mut multiplication: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < classes.len() {
        let mut row = Vec::new();
        let mut j = 0;
        while j < classes.len() {
            let p = classes[i].compose(&classes[j])?;
            let c = match class_of(&classes, &p)? {
                Some(c) => c,
                None => {
                    if classes.len() >= cap {
                        return Err(Error::Precondition(format!(
                            "more than {cap} germ classes: the nucleus does not bound this group"
                        )));
                    }
                    classes.push(p);
                    representatives.push(representatives[i].mul(&representatives[j]));
                    classes.len() - 1
                }
            };
            row.push(c);
            j += 1;
        }
        multiplication.push(row);
        i += 1;
    }
    // rows computed before later classes were appended are short
    for (i, row) in multiplication.iter_mut().enumerate() {
        while row.len() < classes.len() {
            let p = classes[i].compose(&classes[row.len()])?;
            row.push(class_of(&classes, &p)?.expect("closed under products"));
        }
    }
    Ok(GermClassTable {
        point: w.clone(),
        representatives,
        classes,
        multiplication,
        class_of_identity: 0,
        search_length: max_len,
        complete: ball.exhausted,
    })
}

/// Germ classes by brute force: two stabilizers share a germ iff their
/// sections agree at some beginning of `w` of length `≤ depth`.
pub fn same_germ_at_depth(g: &Automorphism, h: &Automorphism, w: &BoundaryPoint, depth: usize) -> Result<bool> {
    let p = w.prefix(depth);
    Ok(g.section(&p)? == h.section(&p)?)
}

/// The nucleus as a generating set named `n0, n1, ..` (identity omitted),
/// suitable for the text format.
pub fn nucleus_generators(gens: &GeneratorSet, result: &NucleusResult) -> Result<GeneratorSet> {
    let mut out = GeneratorSet::new(gens.alphabet());
    let known: HashMap<&Automorphism, &str> = gens.iter().map(|(n, g)| (g, n)).collect();
    let mut fresh = 0;
    for g in result.elements.iter().filter(|g| !g.is_identity()) {
        let name = match known.get(g) {
            Some(n) if out.index_of(n).is_none() => n.to_string(),
            _ => loop {
                let candidate = format!("n{fresh}");
                fresh += 1;
                if gens.index_of(&candidate).is_none() {
                    break candidate;
                }
            },
        };
        out.push(name, g.clone())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gens(name: &str) -> GeneratorSet {
        catalog::builtin(name).unwrap().generators
    }

    #[test]
    fn self_similarity() {
        for name in ["adding_machine", "tullio", "grigorchuk"] {
            assert!(matches!(is_self_similar(&gens(name), 3, 10_000), SelfSimilarity::Yes { .. }), "{name}");
        }
        let id_only = GeneratorSet::parse("alphabet 2\nstate i\nperm 0 1\non 0 -> e\non 1 -> e\ninitial i\n").unwrap();
        assert!(matches!(is_self_similar(&id_only, 1, 10), SelfSimilarity::Yes { .. }));
        // a single generator with a section outside ⟨a⟩ (finite group)
        let g = GeneratorSet::parse(
            "alphabet 2\nstate a\nperm 1 0\non 0 -> s\non 1 -> s\nstate s\nperm 0 1\non 0 -> t\non 1 -> e\nstate t\nperm 1 0\non 0 -> e\non 1 -> e\ninitial a\n",
        )
        .unwrap();
        assert!(!matches!(is_self_similar(&g, 4, 100), SelfSimilarity::Yes { .. }));
    }

    #[test]
    fn adding_machine_nucleus() {
        let g = gens("adding_machine");
        let n = nucleus(&g, 16, 10).unwrap();
        assert!(n.is_found());
        assert_eq!(n.size(), 3);
        let a = g.get("a").unwrap();
        assert!(n.contains(a) && n.contains(&a.invert()));
        assert!(is_nucleus_closed(&g, &n.elements).unwrap());
    }

    #[test]
    fn trivial_group_nucleus() {
        let g = GeneratorSet::new(crate::tree::Alphabet::new(2).unwrap());
        let n = nucleus(&g, 16, 10).unwrap();
        assert!(n.is_found());
        assert_eq!(n.size(), 1);
    }

    #[test]
    fn grigorchuk_nucleus() {
        let g = gens("grigorchuk");
        let n = nucleus(&g, 16, 10).unwrap();
        assert_eq!(n.status, NucleusStatus::Found);
        assert_eq!(n.size(), 5);
        for (_, x) in g.iter() {
            assert!(n.contains(x));
        }
    }

    #[test]
    fn non_contracting_exceeds() {
        let n = nucleus(&gens("tullio"), 16, 10).unwrap();
        assert_ne!(n.status, NucleusStatus::Found);
    }

    #[test]
    fn stabilizers_and_germs() {
        let t = gens("tullio");
        let (a, b) = (t.get("a").unwrap(), t.get("b").unwrap());
        let zero = BoundaryPoint::constant(0);
        let one = BoundaryPoint::constant(1);
        assert!(stabilizes(b, &zero).unwrap());
        assert!(!stabilizes(a, &one).unwrap());
        let e = Automorphism::identity(a.alphabet());
        assert!(stabilizes(&e, &one).unwrap());
        assert!(germ_is_trivial(&e, &one).unwrap());
        assert!(!germ_is_trivial(b, &zero).unwrap());
        assert!(germ_is_trivial(a, &zero).is_err());
        // σ acting at vertex 1 only: (1, σ)
        let sigma = Automorphism::rooted(crate::tree::Permutation::new(vec![1, 0]).unwrap()).unwrap();
        let g = Automorphism::from_recursion(crate::tree::Permutation::identity(2), &[e.clone(), sigma]).unwrap();
        assert!(germ_is_trivial(&g, &zero).unwrap());
    }

    #[test]
    fn adding_machine_germs() {
        let g = gens("adding_machine");
        let n = nucleus(&g, 16, 10).unwrap();
        let table = germ_group(&g, &n, &BoundaryPoint::constant(1), 8, 10_000).unwrap();
        assert_eq!(table.order(), 1);
        assert!(!table.complete);
    }

    #[test]
    fn grigorchuk_germs() {
        let g = gens("grigorchuk");
        let n = nucleus(&g, 16, 10).unwrap();
        let table = germ_group(&g, &n, &BoundaryPoint::constant(1), 6, 100_000).unwrap();
        assert!(table.order() <= n.size());
        assert_eq!(table.order(), 4);
        // group law: identity row and column
        for i in 0..table.order() {
            assert_eq!(table.multiplication[0][i], i);
            assert_eq!(table.multiplication[i][0], i);
            assert!(table.multiplication[i].contains(&0));
        }
    }
}
