//! Finite-state automorphisms of `X*` in canonical (minimized) form.
//!
//! An automorphism is a Mealy machine with a distinguished initial state.
//! Every state `q` carries the root permutation of the section it represents
//! and one transition per letter: `g(xu) = π_g(x) · g|_x(u)`. Values of
//! [`Automorphism`] are immutable and always minimized, so two automorphisms
//! are equal exactly when their machines are structurally equal.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tree::{Alphabet, BoundaryPoint, Letter, Permutation, Vertex};

/// State index inside a machine.
pub type StateId = u32;

/// Index of the trivial state in every canonical machine.
pub const IDENTITY_STATE: StateId = 0;

/// An unminimized transition table. States are arbitrary; several of them
/// may describe the same automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTable {
    alphabet: Alphabet,
    perms: Vec<Permutation>,
    next: Vec<StateId>,
}

impl StateTable {
    pub fn new(alphabet: Alphabet) -> Self {
        StateTable {
            alphabet,
            perms: Vec::new(),
            next: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Adds a state; transitions may point at states added later, and are
    /// validated by [`StateTable::automorphism`].
    pub fn push_state(&mut self, perm: Permutation, next: Vec<StateId>) -> Result<StateId> {
        let k = self.alphabet.size();
        if perm.images().len() != k {
            return Err(Error::AlphabetMismatch {
                left: k,
                right: perm.images().len(),
            });
        }
        if next.len() != k {
            return Err(Error::AlphabetMismatch {
                left: k,
                right: next.len(),
            });
        }
        self.perms.push(perm);
        self.next.extend(next);
        Ok((self.perms.len() - 1) as StateId)
    }

    pub fn push_identity(&mut self) -> StateId {
        let id = self.perms.len() as StateId;
        self.perms.push(Permutation::identity(self.alphabet.size()));
        self.next
            .extend(std::iter::repeat_n(id, self.alphabet.size()));
        id
    }

    fn validate(&self) -> Result<()> {
        let n = self.perms.len() as StateId;
        if let Some(&bad) = self.next.iter().find(|&&t| t >= n) {
            return Err(Error::Precondition(format!(
                "transition to undefined state {bad}"
            )));
        }
        Ok(())
    }

    /// The automorphism defined by `initial`, in canonical form.
    pub fn automorphism(&self, initial: StateId) -> Result<Automorphism> {
        self.validate()?;
        if initial as usize >= self.perms.len() {
            return Err(Error::Precondition(format!("undefined initial state {initial}")));
        }
        Ok(self.minimize(initial))
    }

    /// Moore partition refinement on the states reachable from `initial`
    /// plus an adjoined trivial state, followed by breadth-first
    /// renumbering. Behaviorally equal states merge, and every state
    /// equivalent to the identity collapses onto [`IDENTITY_STATE`].
    pub fn minimize(&self, initial: StateId) -> Automorphism {
        let k = self.alphabet.size();
        let mut table = self.clone();
        let trivial = table.push_identity();

        // reachable states from the initial state and the trivial state
        let mut seen = vec![false; table.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([initial, trivial]);
        seen[initial as usize] = true;
        seen[trivial as usize] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for x in 0..k {
                let t = table.next[q as usize * k + x];
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }

        let mut class = vec![u32::MAX; table.len()];
        let mut by_perm: HashMap<&Permutation, u32> = HashMap::new();
        for &q in &order {
            let n = by_perm.len() as u32;
            class[q as usize] = *by_perm.entry(&table.perms[q as usize]).or_insert(n);
        }
        let mut count = by_perm.len();
        loop {
            let mut by_sig: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut refined = vec![u32::MAX; table.len()];
            for &q in &order {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[q as usize]);
                sig.extend((0..k).map(|x| class[table.next[q as usize * k + x] as usize]));
                let n = by_sig.len() as u32;
                refined[q as usize] = *by_sig.entry(sig).or_insert(n);
            }
            let new_count = by_sig.len();
            class = refined;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // canonical numbering: identity class first, then BFS from initial
        let trivial_class = class[trivial as usize];
        let mut number = vec![u32::MAX; count];
        number[trivial_class as usize] = IDENTITY_STATE;
        let mut reps: Vec<StateId> = vec![trivial];
        let mut queue = VecDeque::new();
        if class[initial as usize] != trivial_class {
            number[class[initial as usize] as usize] = 1;
            reps.push(initial);
            queue.push_back(initial);
        }
        while let Some(q) = queue.pop_front() {
            for x in 0..k {
                let t = table.next[q as usize * k + x];
                let c = class[t as usize] as usize;
                if number[c] == u32::MAX {
                    number[c] = reps.len() as u32;
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }

        let mut perms = Vec::with_capacity(reps.len());
        let mut next = Vec::with_capacity(reps.len() * k);
        for &q in &reps {
            perms.push(table.perms[q as usize].clone());
            next.extend((0..k).map(|x| number[class[table.next[q as usize * k + x] as usize] as usize]));
        }
        let initial = if reps.len() > 1 { 1 } else { IDENTITY_STATE };
        Automorphism(Arc::new(Machine {
            alphabet: self.alphabet,
            perms,
            next,
            initial,
        }))
    }
}

#[derive(Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Machine {
    alphabet: Alphabet,
    perms: Vec<Permutation>,
    next: Vec<StateId>,
    initial: StateId,
}

/// A finite-state automorphism of the tree, in canonical form.
///
/// State [`IDENTITY_STATE`] is always the trivial state; the initial state
/// is state 1 unless the automorphism is trivial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism(Arc<Machine>);

impl Automorphism {
    pub fn identity(alphabet: Alphabet) -> Self {
        let mut table = StateTable::new(alphabet);
        let q = table.push_identity();
        table.minimize(q)
    }

    /// An automorphism acting by `perm` at the root and trivially below.
    pub fn rooted(perm: Permutation) -> Result<Self> {
        let alphabet = Alphabet::new(perm.images().len())?;
        let mut table = StateTable::new(alphabet);
        let id = table.push_identity();
        let q = table.push_state(perm, vec![id; alphabet.size()])?;
        table.automorphism(q)
    }

    /// The automorphism `π · (g_0, .., g_{k-1})` given by its wreath
    /// recursion.
    pub fn from_recursion(perm: Permutation, sections: &[Automorphism]) -> Result<Self> {
        let alphabet = Alphabet::new(perm.images().len())?;
        if sections.len() != alphabet.size() {
            return Err(Error::AlphabetMismatch {
                left: alphabet.size(),
                right: sections.len(),
            });
        }
        let mut table = StateTable::new(alphabet);
        table.push_state(perm, vec![0; alphabet.size()])?;
        let mut roots = Vec::new();
        for s in sections {
            s.check_alphabet(alphabet)?;
            let offset = table.len() as StateId;
            for q in 0..s.num_states() {
                let next = (0..alphabet.size())
                    .map(|x| offset + s.next_state(q, x as Letter))
                    .collect();
                table.push_state(s.state_perm(q).clone(), next)?;
            }
            roots.push(offset + s.initial());
        }
        table.next[..alphabet.size()].copy_from_slice(&roots);
        table.automorphism(0)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.0.alphabet
    }

    pub fn arity(&self) -> usize {
        self.0.alphabet.size()
    }

    pub fn num_states(&self) -> StateId {
        self.0.perms.len() as StateId
    }

    pub fn initial(&self) -> StateId {
        self.0.initial
    }

    pub fn identity_state(&self) -> StateId {
        IDENTITY_STATE
    }

    pub fn state_perm(&self, q: StateId) -> &Permutation {
        &self.0.perms[q as usize]
    }

    pub fn next_state(&self, q: StateId, x: Letter) -> StateId {
        self.0.next[q as usize * self.arity() + x as usize]
    }

    /// Root permutation of the automorphism itself.
    pub fn root_perm(&self) -> &Permutation {
        self.state_perm(self.initial())
    }

    /// The automorphism represented by state `q` of this machine.
    pub fn state_automorphism(&self, q: StateId) -> Automorphism {
        if q == self.initial() {
            return self.clone();
        }
        self.table().minimize(q)
    }

    /// The machine as a raw table (state numbering preserved).
    pub fn table(&self) -> StateTable {
        StateTable {
            alphabet: self.0.alphabet,
            perms: self.0.perms.clone(),
            next: self.0.next.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.initial() == IDENTITY_STATE
    }

    fn check_alphabet(&self, alphabet: Alphabet) -> Result<()> {
        if self.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch {
                left: alphabet.size(),
                right: self.arity(),
            });
        }
        Ok(())
    }

    /// `gh`, acting as `(gh)(v) = g(h(v))`, built from the reachable pairs
    /// `(p, q)` with `(p, q)|_x = (p|_{π_q(x)}, q|_x)`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        other.check_alphabet(self.alphabet())?;
        if self.is_identity() {
            return Ok(other.clone());
        }
        if other.is_identity() {
            return Ok(self.clone());
        }
        let k = self.arity();
        let mut table = StateTable::new(self.alphabet());
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pending = Vec::new();
        let start = (self.initial(), other.initial());
        index.insert(start, 0);
        pending.push(start);
        let mut rows: Vec<(Permutation, Vec<StateId>)> = Vec::new();
        let mut cursor = 0;
        while cursor < pending.len() {
            let (p, q) = pending[cursor];
            cursor += 1;
            let pq = other.state_perm(q);
            let perm = self.state_perm(p).after(pq);
            let mut next = Vec::with_capacity(k);
            for x in 0..k as Letter {
                let pair = (self.next_state(p, pq.apply(x)), other.next_state(q, x));
                let id = match index.get(&pair) {
                    Some(&id) => id,
                    None => {
                        let id = index.len() as StateId;
                        index.insert(pair, id);
                        pending.push(pair);
                        id
                    }
                };
                next.push(id);
            }
            rows.push((perm, next));
        }
        for (perm, next) in rows {
            table.perms.push(perm);
            table.next.extend(next);
        }
        Ok(table.minimize(0))
    }

    /// `g⁻¹`, using `g⁻¹|_{g(x)} = (g|_x)⁻¹`.
    pub fn invert(&self) -> Automorphism {
        if self.is_identity() {
            return self.clone();
        }
        let k = self.arity();
        let mut table = StateTable::new(self.alphabet());
        for q in 0..self.num_states() {
            let perm = self.state_perm(q);
            let inv = perm.inverse();
            table.perms.push(inv.clone());
            table
                .next
                .extend((0..k as Letter).map(|y| self.next_state(q, inv.apply(y))));
        }
        table.minimize(self.initial())
    }

    fn state_after(&self, v: &[Letter]) -> Result<StateId> {
        let mut q = self.initial();
        for &x in v {
            self.alphabet().check(x)?;
            q = self.next_state(q, x);
        }
        Ok(q)
    }

    /// The section `g|_v`.
    pub fn section(&self, v: &Vertex) -> Result<Automorphism> {
        let q = self.state_after(v.letters())?;
        Ok(self.state_automorphism(q))
    }

    /// State of this machine representing `g|_v`.
    pub fn section_state(&self, v: &[Letter]) -> Result<StateId> {
        self.state_after(v)
    }

    /// The image `g(v)`.
    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        let mut out = Vec::with_capacity(v.len());
        let mut q = self.initial();
        for &x in v.letters() {
            self.alphabet().check(x)?;
            out.push(self.state_perm(q).apply(x));
            q = self.next_state(q, x);
        }
        Ok(Vertex::new(out))
    }

    /// Image and section in one pass: `(g(v), state of g|_v)`.
    pub fn apply_with_state(&self, v: &[Letter]) -> (Vec<Letter>, StateId) {
        let mut out = Vec::with_capacity(v.len());
        let mut q = self.initial();
        for &x in v {
            out.push(self.state_perm(q).apply(x));
            q = self.next_state(q, x);
        }
        (out, q)
    }

    /// Image of an eventually periodic point, found by tracking
    /// `(state, period phase)` pairs until one repeats.
    pub fn apply_boundary(&self, w: &BoundaryPoint) -> Result<BoundaryPoint> {
        w.check(self.alphabet())?;
        let mut q = self.initial();
        let mut out = Vec::new();
        for &x in w.preperiod() {
            out.push(self.state_perm(q).apply(x));
            q = self.next_state(q, x);
        }
        let period = w.period();
        let mut seen: HashMap<(StateId, usize), usize> = HashMap::new();
        let mut tail = Vec::new();
        let mut phase = 0;
        loop {
            if phase == 0 {
                if let Some(&start) = seen.get(&(q, 0)) {
                    let mut pre = out;
                    pre.extend_from_slice(&tail[..start]);
                    return BoundaryPoint::new(pre, tail[start..].to_vec());
                }
                seen.insert((q, 0), tail.len());
            }
            let x = period[phase];
            tail.push(self.state_perm(q).apply(x));
            q = self.next_state(q, x);
            phase = (phase + 1) % period.len();
        }
    }

    /// States reachable from the initial state, in canonical order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        // canonical machines contain only reachable states, plus the
        // identity state which may be unreachable
        let mut seen = vec![false; self.num_states() as usize];
        let mut out = Vec::new();
        let mut queue = VecDeque::from([self.initial()]);
        seen[self.initial() as usize] = true;
        while let Some(q) = queue.pop_front() {
            out.push(q);
            for x in 0..self.arity() as Letter {
                let t = self.next_state(q, x);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        out
    }

    /// Whether the trivial state is reachable from the initial state.
    pub fn reaches_identity(&self) -> bool {
        self.reachable_states().contains(&IDENTITY_STATE)
    }

    /// Every section `g|_v` as a distinct automorphism.
    pub fn all_sections(&self) -> Vec<Automorphism> {
        self.reachable_states()
            .into_iter()
            .map(|q| self.state_automorphism(q))
            .collect()
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Automorphism[k={}; ", self.arity())?;
        for q in 0..self.num_states() {
            if q > 0 {
                write!(f, "; ")?;
            }
            let marker = if q == self.initial() { "*" } else { "" };
            write!(f, "{marker}{q}:{:?}->", self.state_perm(q).images())?;
            let next: Vec<_> = (0..self.arity() as Letter)
                .map(|x| self.next_state(q, x))
                .collect();
            write!(f, "{next:?}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    fn swap() -> Permutation {
        Permutation::new(vec![1, 0]).unwrap()
    }

    /// a(0v)=1v, a(1v)=0a(v); b(0v)=0b(v), b(1v)=1a(v)
    fn tullio() -> (Automorphism, Automorphism) {
        let mut t = StateTable::new(bin());
        let id = t.push_identity();
        let a = t.push_state(swap(), vec![id, 1]).unwrap();
        let b = t
            .push_state(Permutation::identity(2), vec![2, a])
            .unwrap();
        (t.automorphism(a).unwrap(), t.automorphism(b).unwrap())
    }

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_one_state() {
        let e = Automorphism::identity(bin());
        assert!(e.is_identity());
        assert_eq!(e.num_states(), 1);
        assert_eq!(e.invert(), e);
    }

    #[test]
    fn duplicate_identity_states_merge() {
        let mut t = StateTable::new(bin());
        let e1 = t.push_identity();
        let e2 = t.push_identity();
        let q = t.push_state(swap(), vec![e1, e2]).unwrap();
        let g = t.automorphism(q).unwrap();
        assert_eq!(g.num_states(), 2);
        assert_eq!(t.automorphism(e2).unwrap(), Automorphism::identity(bin()));
        // a loop of trivial permutations is trivial
        let mut t = StateTable::new(bin());
        t.push_state(Permutation::identity(2), vec![1, 0]).unwrap();
        t.push_state(Permutation::identity(2), vec![0, 0]).unwrap();
        assert!(t.automorphism(0).unwrap().is_identity());
    }

    #[test]
    fn adding_machine_action() {
        let (a, _) = tullio();
        assert_eq!(a.apply(&v("011")).unwrap(), v("111"));
        assert_eq!(a.apply(&v("111")).unwrap(), v("000"));
        assert_eq!(a.invert().apply(&v("000")).unwrap(), v("111"));
        assert!(a.section(&v("0")).unwrap().is_identity());
        assert_eq!(a.section(&v("1")).unwrap(), a);
        assert_eq!(a.section(&Vertex::root()).unwrap(), a);
    }

    #[test]
    fn tullio_sections() {
        let (a, b) = tullio();
        assert_eq!(b.section(&v("0")).unwrap(), b);
        assert_eq!(b.section(&v("1")).unwrap(), a);
        assert_eq!(b.invert().invert(), b);
        assert!(a.section(&v("2")).is_err());
    }

    #[test]
    fn square_of_adding_machine() {
        let (a, _) = tullio();
        let a2 = a.compose(&a).unwrap();
        assert!(a2.root_perm().is_identity());
        assert_eq!(a2.section(&v("0")).unwrap(), a);
        assert_eq!(a2.section(&v("1")).unwrap(), a);
        let built = Automorphism::from_recursion(Permutation::identity(2), &[a.clone(), a.clone()]).unwrap();
        assert_eq!(a2, built);
        assert!(a.compose(&a.invert()).unwrap().is_identity());
    }

    #[test]
    fn pair_machine_minimizes_to_three_states() {
        // the raw table with a, b and two redundant copies
        let mut t = StateTable::new(bin());
        let id = t.push_identity();
        let id2 = t.push_identity();
        let a = t.push_state(swap(), vec![id2, 2]).unwrap();
        let a_copy = t.push_state(swap(), vec![id, a]).unwrap();
        let b = t.push_state(Permutation::identity(2), vec![4, a_copy]).unwrap();
        let g = t.minimize(b);
        assert_eq!(g.num_states(), 3);
        assert_eq!(g, tullio().1);
    }

    #[test]
    fn boundary_images() {
        let (a, b) = tullio();
        let one = BoundaryPoint::constant(1);
        let zero = BoundaryPoint::constant(0);
        assert_eq!(a.apply_boundary(&one).unwrap(), zero);
        assert_eq!(b.apply_boundary(&zero).unwrap(), zero);
        let w: BoundaryPoint = ":10".parse().unwrap();
        // -1/3 + 1 = 2/3 in the 2-adic integers
        assert_eq!(a.apply_boundary(&w).unwrap(), "01:10".parse().unwrap());
        assert_eq!(a.apply_boundary(&zero).unwrap(), "1:0".parse().unwrap());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let (a, _) = tullio();
        let e3 = Automorphism::identity(Alphabet::new(3).unwrap());
        assert!(matches!(a.compose(&e3), Err(Error::AlphabetMismatch { .. })));
    }
}
