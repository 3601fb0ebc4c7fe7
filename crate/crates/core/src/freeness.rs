//! Relation mining, boundary stabilizers, germ probes and the kernel
//! witnesses for pairs of free words. Everything here is bounded search:
//! reports carry their bound and whether the search ran to completion.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::automaton::Automorphism;
use crate::cayley::{self, ElementStore};
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::nucleus::{germ_is_trivial, stabilizes};
use crate::schreier;
use crate::tree::BoundaryPoint;
use crate::word::GroupWord;

pub const DEFAULT_RELATION_LENGTH: usize = 10;
pub const DEFAULT_STABILIZER_LENGTH: usize = 8;
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// Cyclically reduced relators, one per cyclic word up to inversion,
    /// sorted by length and then letters.
    pub relators: Vec<GroupWord>,
    pub complete: bool,
    pub searched_length: usize,
}

/// Relators of length `≤ max_len`.
///
/// Grows the Cayley ball of radius `⌈max_len / 2⌉` breadth first. Every
/// closed path of length `≤ max_len` through the identity stays inside it
/// and uses an edge outside the breadth-first tree; each such edge
/// `x --s--> y` with `|x| + |y| + 1 ≤ max_len` yields the relator
/// `w_x s w_y⁻¹`. No relator is reported exactly when none of length
/// `≤ max_len` exists; otherwise the list generates every relator of
/// length `≤ max_len` as a normal subgroup.
pub fn find_relations(gens: &GeneratorSet, max_len: usize, budget: usize) -> Result<RelationReport> {
    if max_len == 0 {
        return Err(Error::Precondition("max_len must be at least 1".into()));
    }
    let radius = max_len.div_ceil(2);
    let mut found: BTreeSet<(usize, GroupWord)> = BTreeSet::new();
    let ball = cayley::ball_with(gens, radius, budget, |ball, edge| {
        if edge.discovered {
            return;
        }
        let (wx, wy) = (&ball.words[edge.from], &ball.words[edge.to]);
        if wx.len() + wy.len() + 1 > max_len {
            return;
        }
        // the reverse of a tree edge
        if wx.last() == Some(&edge.symbol.inverted()) && wx.len() == wy.len() + 1 && wx[..wy.len()] == wy[..] {
            return;
        }
        let mut symbols = wx.clone();
        symbols.push(edge.symbol);
        symbols.extend(wy.iter().rev().map(|s| s.inverted()));
        let word = gens.word_from_symbols(&symbols).cyclic_canonical();
        if !word.is_empty() {
            found.insert((word.len(), word));
        }
    });
    Ok(RelationReport {
        searched_length: max_len,
        relators: found.into_iter().map(|(_, w)| w).collect(),
        complete: !ball.truncated,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub point: BoundaryPoint,
    pub searched_length: usize,
    /// Nonempty reduced words fixing the point, by length and then
    /// generator order (inverse after its generator).
    pub words: Vec<GroupWord>,
    pub complete: bool,
}

/// Every nonempty reduced word of length `≤ max_len` whose element fixes
/// `w`.
pub fn stabilizer_search(gens: &GeneratorSet, w: &BoundaryPoint, max_len: usize, budget: usize) -> Result<StabilizerReport> {
    Ok(stabilizer_elements(gens, w, max_len, budget)?.0)
}

/// The stabilizer report with the element of each word.
fn stabilizer_elements(
    gens: &GeneratorSet,
    w: &BoundaryPoint,
    max_len: usize,
    budget: usize,
) -> Result<(StabilizerReport, Vec<Automorphism>)> {
    w.check(gens.alphabet())?;
    let mut store = ElementStore::new(gens, budget);
    let mut fixes: HashMap<usize, bool> = HashMap::new();
    let found = cayley::reduced_words(&mut store, max_len, |store, _, id| {
        if let Some(&f) = fixes.get(&id) {
            return Ok(f);
        }
        let f = stabilizes(store.get(id), w)?;
        fixes.insert(id, f);
        Ok(f)
    });
    let elements = found.words.iter().map(|&(_, id)| store.get(id).clone()).collect();
    let report = StabilizerReport {
        point: w.clone(),
        searched_length: max_len,
        words: found.words.iter().map(|(s, _)| gens.word_from_symbols(s)).collect(),
        complete: found.complete,
    };
    Ok((report, elements))
}

/// Germs along one commutator chain `c_1 = [x, y]`, `c_{i+1} = [x, c_i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorChain {
    pub x: GroupWord,
    pub y: GroupWord,
    /// Germ nontriviality of `c_1, c_2, ..` while the words stay short.
    pub nontrivial: Vec<bool>,
    /// Every probed commutator has a nontrivial germ.
    pub survives: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GermProbe {
    pub point: BoundaryPoint,
    pub searched_length: usize,
    pub germ_trivial: Vec<GroupWord>,
    pub germ_nontrivial: Vec<GroupWord>,
    pub chains: Vec<CommutatorChain>,
    /// Some pair of germ-nontrivial words has only germ-nontrivial probed
    /// commutators.
    pub free_like_pair: bool,
    pub complete: bool,
}

/// Commutator words longer than this are not probed.
const CHAIN_WORD_LIMIT: usize = 64;
/// Distinct germ-nontrivial elements paired in the probe.
const PROBE_ELEMENTS: usize = 6;
const CHAIN_DEPTH: usize = 4;

/// Splits the stabilizer words of `w` by germ triviality and probes short
/// commutator chains of germ-nontrivial pairs.
pub fn germ_faithfulness_probe(gens: &GeneratorSet, w: &BoundaryPoint, max_len: usize, budget: usize) -> Result<GermProbe> {
    let (stab, stab_elements) = stabilizer_elements(gens, w, max_len, budget)?;
    let mut germ_trivial = Vec::new();
    let mut germ_nontrivial = Vec::new();
    let mut elements: Vec<(GroupWord, Automorphism)> = Vec::new();
    let mut trivial: HashMap<&Automorphism, bool> = HashMap::new();
    for (word, g) in stab.words.iter().zip(&stab_elements) {
        let t = match trivial.get(g) {
            Some(&t) => t,
            None => {
                let t = germ_is_trivial(g, w)?;
                trivial.insert(g, t);
                t
            }
        };
        if t {
            germ_trivial.push(word.clone());
        } else {
            germ_nontrivial.push(word.clone());
            if elements.len() < PROBE_ELEMENTS && !elements.iter().any(|(_, h)| h == g) {
                elements.push((word.clone(), g.clone()));
            }
        }
    }
    let mut chains = Vec::new();
    for (i, (x, gx)) in elements.iter().enumerate() {
        for (y, gy) in elements.iter().skip(i + 1) {
            let mut nontrivial = Vec::new();
            let (mut c, mut gc) = (GroupWord::commutator(x, y), commutator(gx, gy)?);
            for _ in 0..CHAIN_DEPTH {
                if c.len() > CHAIN_WORD_LIMIT {
                    break;
                }
                let alive = !germ_is_trivial(&gc, w)?;
                nontrivial.push(alive);
                if !alive {
                    break;
                }
                gc = commutator(gx, &gc)?;
                c = GroupWord::commutator(x, &c);
            }
            chains.push(CommutatorChain {
                x: x.clone(),
                y: y.clone(),
                survives: !nontrivial.is_empty() && nontrivial.iter().all(|&b| b),
                nontrivial,
            });
        }
    }
    Ok(GermProbe {
        point: w.clone(),
        searched_length: max_len,
        free_like_pair: chains.iter().any(|c| c.survives),
        germ_trivial,
        germ_nontrivial,
        chains,
        complete: stab.complete,
    })
}

fn commutator(g: &Automorphism, h: &Automorphism) -> Result<Automorphism> {
    g.compose(h)?.compose(&g.invert())?.compose(&h.invert())
}

/// The least common power of `r1` and `r2` when both are powers of one
/// word, else `None`.
pub fn kernel_witness_power(r1: &GroupWord, r2: &GroupWord) -> Option<GroupWord> {
    let (root1, m1) = r1.primitive_root()?;
    let (root2, m2) = r2.primitive_root()?;
    let (root, m1, m2) = if root1 == root2 {
        (root1, m1 as i64, m2 as i64)
    } else if root1 == root2.inverse() {
        (root1, m1 as i64, -(m2 as i64))
    } else {
        return None;
    };
    let l = num_integer::lcm(m1, m2);
    Some(root.pow(l.abs()))
}

/// `r1 r2 r1⁻¹ r2⁻¹`, reduced; rejects pairs sharing a root, since those
/// commute.
pub fn kernel_witness_commutator(r1: &GroupWord, r2: &GroupWord) -> Result<GroupWord> {
    if r1.is_empty() || r2.is_empty() || kernel_witness_power(r1, r2).is_some() {
        return Err(Error::CommutingInputs(format!("{r1} and {r2} are powers of one word")));
    }
    Ok(GroupWord::commutator(r1, r2))
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEvidence {
    pub point: BoundaryPoint,
    pub stabilizer: StabilizerReport,
    pub germs: GermProbe,
    /// Følner profile along the point at the last few levels.
    pub folner_tail: Vec<schreier::ProfileEntry>,
}

/// Which branches of the trichotomy the bounded evidence is consistent
/// with. None of these is a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchIndicators {
    /// No free non-abelian subgroup: relators were found or the
    /// generators commute.
    pub no_free_subgroup: bool,
    /// Some basepoint had no stabilizer word up to the bound.
    pub trivial_stabilizer: bool,
    /// Some basepoint had a pair of germs with surviving commutators.
    pub free_germs: bool,
    pub abelian: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrichotomyEvidence {
    pub searched_length: usize,
    pub relations: RelationReport,
    pub points: Vec<PointEvidence>,
    pub summary: BranchIndicators,
    pub complete: bool,
}

/// Levels of the Følner profile kept per basepoint.
const FOLNER_TAIL: usize = 3;
const FOLNER_MAX_LEVEL: usize = 6;

pub fn free_subgroup_certificate(
    gens: &GeneratorSet,
    basepoints: &[BoundaryPoint],
    max_len: usize,
    budget: usize,
) -> Result<TrichotomyEvidence> {
    let relations = find_relations(gens, max_len.max(1), budget)?;
    let stab_len = max_len.min(DEFAULT_STABILIZER_LENGTH);
    let mut points = Vec::new();
    for w in basepoints {
        let stabilizer = stabilizer_search(gens, w, stab_len, budget)?;
        let germs = germ_faithfulness_probe(gens, w, stab_len.min(4), budget)?;
        let folner_tail = if gens.is_empty() {
            Vec::new()
        } else {
            let profile = schreier::isoperimetric_profile(gens, w, FOLNER_MAX_LEVEL, budget)?;
            profile[profile.len().saturating_sub(FOLNER_TAIL)..].to_vec()
        };
        points.push(PointEvidence {
            point: w.clone(),
            stabilizer,
            germs,
            folner_tail,
        });
    }
    let abelian = is_abelian(gens)?;
    let summary = BranchIndicators {
        no_free_subgroup: abelian || !relations.relators.is_empty(),
        trivial_stabilizer: points.iter().any(|p| p.stabilizer.words.is_empty()),
        free_germs: points.iter().any(|p| p.germs.free_like_pair),
        abelian,
    };
    let complete = relations.complete && points.iter().all(|p| p.stabilizer.complete && p.germs.complete);
    Ok(TrichotomyEvidence {
        searched_length: max_len,
        relations,
        points,
        summary,
        complete,
    })
}

fn is_abelian(gens: &GeneratorSet) -> Result<bool> {
    let elements = gens.elements();
    for (i, g) in elements.iter().enumerate() {
        for h in &elements[i + 1..] {
            if g.compose(h)? != h.compose(g)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gens(name: &str) -> GeneratorSet {
        catalog::builtin(name).unwrap().generators
    }

    fn w(s: &str) -> GroupWord {
        s.parse().unwrap()
    }

    fn names(words: &[GroupWord]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn grigorchuk_involutions() {
        let g = gens("grigorchuk");
        let r = find_relations(&g, 2, 100_000).unwrap();
        assert_eq!(names(&r.relators), ["a a", "b b", "c c", "d d"]);
        assert!(r.complete);
        let r = find_relations(&g, 3, 100_000).unwrap();
        assert!(r.relators.contains(&w("b c d^-1")));
        for rel in &r.relators {
            assert!(g.evaluate(rel).unwrap().is_identity());
        }
    }

    #[test]
    fn adding_machine_has_no_relators() {
        let r = find_relations(&gens("adding_machine"), 10, 100_000).unwrap();
        assert!(r.relators.is_empty());
        assert!(r.complete);
        let empty = GeneratorSet::new(crate::tree::Alphabet::new(2).unwrap());
        let r = find_relations(&empty, 4, 10).unwrap();
        assert!(r.relators.is_empty());
        assert!(find_relations(&empty, 0, 10).is_err());
    }

    #[test]
    fn finite_cyclic_group_relator() {
        let z3 = GeneratorSet::parse("alphabet 3\nstate a\nperm 1 2 0\non 0 -> e\non 1 -> e\non 2 -> e\ninitial a\n").unwrap();
        let r = find_relations(&z3, 3, 100).unwrap();
        assert_eq!(names(&r.relators), ["a a a"]);
    }

    #[test]
    fn stabilizers() {
        let t = gens("tullio");
        let zero = BoundaryPoint::constant(0);
        let only_a = GeneratorSet::new(t.alphabet()).with("a", t.get("a").unwrap().clone()).unwrap();
        assert!(stabilizer_search(&only_a, &zero, 6, 1000).unwrap().words.is_empty());
        let only_b = GeneratorSet::new(t.alphabet()).with("b", t.get("b").unwrap().clone()).unwrap();
        let s = stabilizer_search(&only_b, &zero, 3, 1000).unwrap();
        assert_eq!(names(&s.words), ["b", "b^-1", "b b", "b^-1 b^-1", "b b b", "b^-1 b^-1 b^-1"]);
        assert!(s.complete);
        let empty = GeneratorSet::new(t.alphabet());
        assert!(stabilizer_search(&empty, &zero, 5, 10).unwrap().words.is_empty());
    }

    #[test]
    fn cyclic_germ_probe() {
        let t = gens("tullio");
        let only_b = GeneratorSet::new(t.alphabet()).with("b", t.get("b").unwrap().clone()).unwrap();
        let p = germ_faithfulness_probe(&only_b, &BoundaryPoint::constant(0), 4, 1000).unwrap();
        assert!(p.germ_trivial.is_empty());
        assert_eq!(p.germ_nontrivial.len(), 8);
        assert!(!p.free_like_pair);
        assert!(p.chains.iter().all(|c| c.nontrivial == [false]));
    }

    #[test]
    fn grigorchuk_germ_probe() {
        let p = germ_faithfulness_probe(&gens("grigorchuk"), &BoundaryPoint::constant(1), 6, 100_000).unwrap();
        assert!(!p.germ_nontrivial.is_empty());
        assert!(!p.free_like_pair);
    }

    #[test]
    fn power_witness() {
        assert_eq!(kernel_witness_power(&w("x^2"), &w("x^3")), Some(w("x^6")));
        assert_eq!(kernel_witness_power(&w("x"), &w("x")), Some(w("x")));
        assert_eq!(kernel_witness_power(&w("x"), &w("y")), None);
        assert_eq!(kernel_witness_power(&w("x^2"), &w("x^-3")), Some(w("x^6")));
        assert_eq!(kernel_witness_power(&w("y x y^-1"), &w("y x^2 y^-1")), Some(w("y x^2 y^-1")));
    }

    #[test]
    fn commutator_witness() {
        assert_eq!(kernel_witness_commutator(&w("x"), &w("y")).unwrap(), w("x y x^-1 y^-1"));
        let c = kernel_witness_commutator(&w("x y"), &w("y x")).unwrap();
        assert!(!c.is_empty() && c.len() <= 8);
        assert!(matches!(kernel_witness_commutator(&w("x"), &w("x^2")), Err(Error::CommutingInputs(_))));
    }

    #[test]
    fn certificates() {
        let e = free_subgroup_certificate(&gens("adding_machine"), &[BoundaryPoint::constant(0)], 6, 100_000).unwrap();
        assert!(e.summary.abelian && e.summary.no_free_subgroup);
        let e = free_subgroup_certificate(&gens("grigorchuk"), &[BoundaryPoint::constant(1)], 4, 100_000).unwrap();
        assert!(e.summary.no_free_subgroup);
        assert!(!e.summary.abelian);
    }
}
