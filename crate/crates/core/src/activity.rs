//! Activity growth `θ_g(n)`, the finitary / bounded / polynomial /
//! exponential classification, direction sets and the exact measure of the
//! singular set.
//!
//! All computations run on the canonical machine. The nontrivial states
//! reachable from the initial state form a directed graph (an edge per
//! letter whose target is nontrivial). Its strongly connected components
//! decide the class: a component with more internal edges than states makes
//! `θ` grow exponentially; otherwise every nontrivial component is a simple
//! cycle and the degree is the largest number of cycles met along one path,
//! minus one.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::automaton::{Automorphism, StateId, IDENTITY_STATE};
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::schreier;
use crate::tree::{BoundaryPoint, Letter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum ActivityKind {
    /// `θ_g(n) = 0` for all `n ≥ depth`.
    Finitary { depth: usize },
    Bounded,
    Polynomial { degree: usize },
    Exponential,
}

impl ActivityKind {
    /// `-1` for finitary, `0` for bounded, `d` for degree `d`; `None` for
    /// exponential growth.
    pub fn degree(self) -> Option<i64> {
        match self {
            ActivityKind::Finitary { .. } => Some(-1),
            ActivityKind::Bounded => Some(0),
            ActivityKind::Polynomial { degree } => Some(degree as i64),
            ActivityKind::Exponential => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ActivityKind::Finitary { .. } => "finitary",
            ActivityKind::Bounded => "bounded",
            ActivityKind::Polynomial { .. } => "polynomial",
            ActivityKind::Exponential => "exponential",
        }
    }
}

/// A simple cycle of nontrivial states, listed from its least state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateCycle {
    pub states: Vec<StateId>,
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActivityClass {
    pub kind: ActivityKind,
    /// Simple cycles of the nontrivial-state graph (empty for exponential
    /// growth).
    pub cycles: Vec<StateCycle>,
    /// Indices into `cycles` along a path meeting the most cycles.
    pub chain: Vec<usize>,
    /// A component that is not a simple cycle, when the growth is
    /// exponential.
    pub branching_component: Option<Vec<StateId>>,
}

struct NontrivialGraph {
    /// reachable nontrivial states, ascending
    states: Vec<StateId>,
    /// component id per machine state (`usize::MAX` outside the graph)
    comp: Vec<usize>,
    /// components in reverse topological order (sinks first)
    components: Vec<Vec<StateId>>,
}

fn nontrivial_graph(g: &Automorphism) -> NontrivialGraph {
    let mut states: Vec<StateId> = g
        .reachable_states()
        .into_iter()
        .filter(|&q| q != IDENTITY_STATE)
        .collect();
    states.sort_unstable();
    let n = g.num_states() as usize;
    let k = g.arity() as Letter;

    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut components = Vec::new();
    let mut counter = 0;
    for &root in &states {
        if index[root as usize] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, Letter)> = vec![(root, 0)];
        index[root as usize] = counter;
        low[root as usize] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (q, ref mut x)) = call.last_mut() {
            if *x < k {
                let t = g.next_state(q, *x);
                *x += 1;
                if t == IDENTITY_STATE {
                    continue;
                }
                if index[t as usize] == usize::MAX {
                    index[t as usize] = counter;
                    low[t as usize] = counter;
                    counter += 1;
                    stack.push(t);
                    on_stack[t as usize] = true;
                    call.push((t, 0));
                } else if on_stack[t as usize] {
                    low[q as usize] = low[q as usize].min(index[t as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[q as usize]);
                }
                if low[q as usize] == index[q as usize] {
                    let id = components.len();
                    let mut members = Vec::new();
                    while let Some(t) = stack.pop() {
                        on_stack[t as usize] = false;
                        comp[t as usize] = id;
                        members.push(t);
                        if t == q {
                            break;
                        }
                    }
                    members.sort_unstable();
                    components.push(members);
                }
            }
        }
    }
    NontrivialGraph {
        states,
        comp,
        components,
    }
}

/// Classifies the activity growth of `g`.
pub fn classify_activity(g: &Automorphism) -> ActivityClass {
    let graph = nontrivial_graph(g);
    let k = g.arity() as Letter;
    let internal_edges = |members: &[StateId], id: usize| -> usize {
        members
            .iter()
            .map(|&q| {
                (0..k)
                    .filter(|&x| {
                        let t = g.next_state(q, x);
                        t != IDENTITY_STATE && graph.comp[t as usize] == id
                    })
                    .count()
            })
            .sum()
    };

    let mut cycles = Vec::new();
    let mut cycle_of_comp = vec![None; graph.components.len()];
    for (id, members) in graph.components.iter().enumerate() {
        let edges = internal_edges(members, id);
        if edges > members.len() {
            return ActivityClass {
                kind: ActivityKind::Exponential,
                cycles: Vec::new(),
                chain: Vec::new(),
                branching_component: Some(members.clone()),
            };
        }
        if edges == members.len() {
            // a strongly connected component with as many edges as states
            // is one simple cycle
            let start = members[0];
            let mut states = vec![start];
            let mut letters = Vec::new();
            let mut q = start;
            loop {
                let x = (0..k)
                    .find(|&x| {
                        let t = g.next_state(q, x);
                        t != IDENTITY_STATE && graph.comp[t as usize] == id
                    })
                    .expect("cycle edge");
                letters.push(x);
                q = g.next_state(q, x);
                if q == start {
                    break;
                }
                states.push(q);
            }
            cycle_of_comp[id] = Some(cycles.len());
            cycles.push(StateCycle { states, letters });
        }
    }

    // components come out sinks first, so a single pass computes longest
    // chains: (cycles met, states met, next component on the best path)
    let mut best: Vec<(usize, usize, Option<usize>)> = vec![(0, 0, None); graph.components.len()];
    for (id, members) in graph.components.iter().enumerate() {
        let own_cycles = usize::from(cycle_of_comp[id].is_some());
        let own_states = members.len();
        let mut choice = (0usize, 0usize, None);
        for &q in members {
            for x in 0..k {
                let t = g.next_state(q, x);
                if t == IDENTITY_STATE {
                    continue;
                }
                let c = graph.comp[t as usize];
                if c == id {
                    continue;
                }
                let (bc, bs, _) = best[c];
                if (bc, bs) > (choice.0, choice.1) {
                    choice = (bc, bs, Some(c));
                }
            }
        }
        best[id] = (own_cycles + choice.0, own_states + choice.1, choice.2);
    }

    if graph.states.is_empty() {
        return ActivityClass {
            kind: ActivityKind::Finitary { depth: 0 },
            cycles,
            chain: Vec::new(),
            branching_component: None,
        };
    }
    let root = graph.comp[g.initial() as usize];
    let mut chain = Vec::new();
    let mut cursor = Some(root);
    while let Some(c) = cursor {
        if let Some(i) = cycle_of_comp[c] {
            chain.push(i);
        }
        cursor = best[c].2;
    }
    let (cycle_count, state_count, _) = best[root];
    let kind = match cycle_count {
        0 => ActivityKind::Finitary { depth: state_count },
        1 => ActivityKind::Bounded,
        d => ActivityKind::Polynomial { degree: d - 1 },
    };
    ActivityClass {
        kind,
        cycles,
        chain,
        branching_component: None,
    }
}

/// `θ_g(n)`: number of level-`n` vertices with a nontrivial section. Counts
/// length-`n` paths from the initial state that avoid the trivial state.
pub fn theta(g: &Automorphism, n: usize) -> BigUint {
    theta_sequence(g, n).pop().unwrap_or_default()
}

/// `θ_g(0), .., θ_g(n_max)`.
pub fn theta_sequence(g: &Automorphism, n_max: usize) -> Vec<BigUint> {
    let states = g.num_states() as usize;
    let k = g.arity() as Letter;
    let mut counts = vec![BigUint::zero(); states];
    if !g.is_identity() {
        counts[g.initial() as usize] = BigUint::one();
    }
    let mut out = Vec::with_capacity(n_max + 1);
    for level in 0..=n_max {
        out.push(counts.iter().sum());
        if level == n_max {
            break;
        }
        let mut next = vec![BigUint::zero(); states];
        for (q, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for x in 0..k {
                let t = g.next_state(q as StateId, x) as usize;
                if t != IDENTITY_STATE as usize {
                    next[t] += c;
                }
            }
        }
        counts = next;
    }
    out
}

/// Relative growth `θ_{g,T}(n)`: active vertices among the orbit of the
/// length-`n` beginning of `seed` under `gens`.
pub fn theta_relative(
    gens: &GeneratorSet,
    g: &Automorphism,
    seed: &BoundaryPoint,
    n: usize,
    budget: usize,
) -> Result<u64> {
    let orbit = schreier::orbit(gens, &seed.prefix(n), budget)?;
    Ok(orbit
        .iter()
        .filter(|v| g.section_state(v.letters()).map(|q| q != IDENTITY_STATE).unwrap_or(false))
        .count() as u64)
}

/// Directions of a finitary or bounded automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionSet {
    pub directions: Vec<BoundaryPoint>,
    pub finitary_depth: usize,
}

/// The boundary points along which the active sections of a bounded `g`
/// cycle, and the largest finitary depth of a section off those points.
pub fn directions(g: &Automorphism) -> Result<DirectionSet> {
    let class = classify_activity(g);
    match class.kind {
        ActivityKind::Finitary { .. } | ActivityKind::Bounded => {}
        other => {
            return Err(Error::NotBounded(format!(
                "automorphism of class {}",
                other.name()
            )))
        }
    }
    let n = g.num_states() as usize;
    let k = g.arity() as Letter;
    let mut on_cycle: Vec<Option<usize>> = vec![None; n];
    for (i, c) in class.cycles.iter().enumerate() {
        for &q in &c.states {
            on_cycle[q as usize] = Some(i);
        }
    }

    // states that can reach a cycle, and finitary depth of the others
    let graph = nontrivial_graph(g);
    let mut reaches = vec![false; n];
    let mut depth = vec![0usize; n];
    for members in &graph.components {
        for &q in members {
            if on_cycle[q as usize].is_some() {
                reaches[q as usize] = true;
            }
        }
        for &q in members {
            for x in 0..k {
                let t = g.next_state(q, x);
                if t == IDENTITY_STATE || graph.comp[t as usize] == graph.comp[q as usize] {
                    continue;
                }
                reaches[q as usize] |= reaches[t as usize];
                depth[q as usize] = depth[q as usize].max(depth[t as usize]);
            }
            if !reaches[q as usize] {
                depth[q as usize] += 1;
            }
        }
    }
    let finitary_depth = graph
        .states
        .iter()
        .filter(|&&q| !reaches[q as usize])
        .map(|&q| depth[q as usize])
        .max()
        .unwrap_or(0);

    let mut found = BTreeSet::new();
    if !g.is_identity() && reaches[g.initial() as usize] {
        let mut stack: Vec<(StateId, Vec<Letter>)> = vec![(g.initial(), Vec::new())];
        while let Some((q, path)) = stack.pop() {
            if let Some(i) = on_cycle[q as usize] {
                let cycle = &class.cycles[i];
                let pos = cycle.states.iter().position(|&s| s == q).expect("state on cycle");
                let mut per = cycle.letters.clone();
                per.rotate_left(pos);
                found.insert(BoundaryPoint::new(path, per)?);
                continue;
            }
            for x in 0..k {
                let t = g.next_state(q, x);
                if t != IDENTITY_STATE && reaches[t as usize] {
                    let mut p = path.clone();
                    p.push(x);
                    stack.push((t, p));
                }
            }
        }
    }
    Ok(DirectionSet {
        directions: found.into_iter().collect(),
        finitary_depth,
    })
}

/// Exact measure of the set of points none of whose beginnings has a
/// trivial section: one minus the probability that the uniform random walk
/// on letters reaches the identity state.
pub fn singular_measure(g: &Automorphism) -> BigRational {
    BigRational::one() - absorption_probability(g)
}

/// Probability of reaching the trivial state from the initial state.
pub fn absorption_probability(g: &Automorphism) -> BigRational {
    if g.is_identity() {
        return BigRational::one();
    }
    let n = g.num_states() as usize;
    let k = g.arity() as Letter;
    let states = g.reachable_states();
    // states that can reach the identity
    let mut can_reach = vec![false; n];
    can_reach[IDENTITY_STATE as usize] = true;
    loop {
        let mut changed = false;
        for &q in &states {
            if !can_reach[q as usize] && (0..k).any(|x| can_reach[g.next_state(q, x) as usize]) {
                can_reach[q as usize] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !can_reach[g.initial() as usize] {
        return BigRational::zero();
    }
    let unknowns: Vec<StateId> = states
        .iter()
        .copied()
        .filter(|&q| q != IDENTITY_STATE && can_reach[q as usize])
        .collect();
    let mut position = vec![usize::MAX; n];
    for (i, &q) in unknowns.iter().enumerate() {
        position[q as usize] = i;
    }
    let m = unknowns.len();
    let weight = BigRational::new(1.into(), (k as u64).into());
    // rows: x_q - (1/k) Σ x_t = (1/k) · #{x : t = id}
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for &q in &unknowns {
        let mut row = vec![BigRational::zero(); m + 1];
        row[position[q as usize]] += BigRational::one();
        for x in 0..k {
            let t = g.next_state(q, x);
            if t == IDENTITY_STATE {
                row[m] += &weight;
            } else if can_reach[t as usize] {
                row[position[t as usize]] -= &weight;
            }
        }
        rows.push(row);
    }
    let solution = solve(rows);
    solution[position[g.initial() as usize]].clone()
}

/// Gauss-Jordan elimination on an augmented, nonsingular system.
fn solve(mut rows: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let m = rows.len();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .expect("absorption system is nonsingular");
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
    }
    rows.into_iter().map(|mut r| r.pop().unwrap_or_default()).collect()
}

/// `θ_g(n) / k^n` for `n = 0..=n_max`.
pub fn empirical_measure_sequence(g: &Automorphism, n_max: usize) -> Vec<BigRational> {
    let k = BigUint::from(g.arity());
    let mut denom = BigUint::one();
    theta_sequence(g, n_max)
        .into_iter()
        .map(|t| {
            let r = BigRational::new(t.into(), denom.clone().into());
            denom *= &k;
            r
        })
        .collect()
}

/// Classes of `g`, `h`, `gh` and `g⁻¹`, and whether the product and the
/// inverse stay bounded with finitary depth at most that of the inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductClosureReport {
    pub left: ActivityKind,
    pub right: ActivityKind,
    pub product: ActivityKind,
    pub inverse: ActivityKind,
    pub input_depth: usize,
    pub product_depth: usize,
    pub inverse_depth: usize,
    pub holds: bool,
}

pub fn is_bounded_closed_under_product(
    g: &Automorphism,
    h: &Automorphism,
) -> Result<ProductClosureReport> {
    let dg = directions(g)?;
    let dh = directions(h)?;
    let gh = g.compose(h)?;
    let gi = g.invert();
    let product = classify_activity(&gh).kind;
    let inverse = classify_activity(&gi).kind;
    let bounded = |k: ActivityKind| matches!(k, ActivityKind::Finitary { .. } | ActivityKind::Bounded);
    let product_depth = directions(&gh).map(|d| d.finitary_depth).unwrap_or(usize::MAX);
    let inverse_depth = directions(&gi).map(|d| d.finitary_depth).unwrap_or(usize::MAX);
    let input_depth = dg.finitary_depth.max(dh.finitary_depth);
    Ok(ProductClosureReport {
        left: classify_activity(g).kind,
        right: classify_activity(h).kind,
        product,
        inverse,
        input_depth,
        product_depth,
        inverse_depth,
        holds: bounded(product)
            && bounded(inverse)
            && product_depth <= input_depth
            && inverse_depth <= input_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::StateTable;
    use crate::catalog;
    use crate::tree::{Alphabet, Permutation, Vertex};

    fn tullio() -> (Automorphism, Automorphism) {
        let gens = catalog::builtin("tullio").unwrap().generators;
        (gens.get("a").unwrap().clone(), gens.get("b").unwrap().clone())
    }

    /// g = σ(g, g)
    fn full_swap() -> Automorphism {
        let mut t = StateTable::new(Alphabet::new(2).unwrap());
        t.push_state(Permutation::new(vec![1, 0]).unwrap(), vec![0, 0]).unwrap();
        t.automorphism(0).unwrap()
    }

    fn brute_theta(g: &Automorphism, n: usize) -> u64 {
        let k = g.arity();
        (0..(k as u64).pow(n as u32))
            .filter(|&i| !g.section(&Vertex::from_index(i, n, k)).unwrap().is_identity())
            .count() as u64
    }

    #[test]
    fn tullio_classes() {
        let (a, b) = tullio();
        assert_eq!(classify_activity(&a).kind, ActivityKind::Bounded);
        let cb = classify_activity(&b);
        assert_eq!(cb.kind, ActivityKind::Polynomial { degree: 1 });
        assert_eq!(cb.chain.len(), 2);
        assert_eq!(classify_activity(&full_swap()).kind, ActivityKind::Exponential);
        let e = Automorphism::identity(a.alphabet());
        assert_eq!(classify_activity(&e).kind, ActivityKind::Finitary { depth: 0 });
        let sigma = Automorphism::rooted(Permutation::new(vec![1, 0]).unwrap()).unwrap();
        assert_eq!(classify_activity(&sigma).kind, ActivityKind::Finitary { depth: 1 });
    }

    #[test]
    fn theta_matches_enumeration() {
        let (a, b) = tullio();
        for n in 0..=10 {
            assert_eq!(theta(&a, n), BigUint::from(brute_theta(&a, n)));
            assert_eq!(theta(&b, n), BigUint::from(brute_theta(&b, n)));
            assert_eq!(theta(&full_swap(), n), BigUint::from(1u64 << n));
        }
        assert_eq!(theta(&b, 3), BigUint::from(4u32));
        assert_eq!(theta(&a, 7), BigUint::one());
    }

    #[test]
    fn direction_sets() {
        let (a, b) = tullio();
        let d = directions(&a).unwrap();
        assert_eq!(d.directions, vec![BoundaryPoint::constant(1)]);
        assert_eq!(d.finitary_depth, 0);
        let a2 = a.compose(&a).unwrap();
        let d = directions(&a2).unwrap();
        let expected: Vec<BoundaryPoint> = vec!["0:1".parse().unwrap(), ":1".parse().unwrap()];
        let mut got = d.directions.clone();
        got.sort();
        let mut want = expected;
        want.sort();
        assert_eq!(got, want);
        assert!(directions(&b).is_err());
        let e = Automorphism::identity(a.alphabet());
        assert_eq!(directions(&e).unwrap().directions, vec![]);
    }

    #[test]
    fn measures() {
        let (a, b) = tullio();
        assert!(singular_measure(&a).is_zero());
        assert!(singular_measure(&b).is_zero());
        assert!(singular_measure(&Automorphism::identity(a.alphabet())).is_zero());
        assert!(singular_measure(&full_swap()).is_one());
        let seq = empirical_measure_sequence(&b, 4);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        assert_eq!(seq, vec![r(1, 1), r(1, 1), r(3, 4), r(4, 8), r(5, 16)]);
    }

    #[test]
    fn measure_of_half_singular_machine() {
        // g = (σ-everywhere, id): the 0-subtree is fully singular
        let mut t = StateTable::new(Alphabet::new(2).unwrap());
        let id = t.push_identity();
        let s = t.push_state(Permutation::new(vec![1, 0]).unwrap(), vec![1, 1]).unwrap();
        let g = t.push_state(Permutation::identity(2), vec![s, id]).unwrap();
        let g = t.automorphism(g).unwrap();
        assert_eq!(singular_measure(&g), BigRational::new(1.into(), 2.into()));
        assert_eq!(classify_activity(&g).kind, ActivityKind::Exponential);
    }

    #[test]
    fn product_closure() {
        let (a, _) = tullio();
        let r = is_bounded_closed_under_product(&a, &a).unwrap();
        assert_eq!(r.product, ActivityKind::Bounded);
        assert_eq!(r.product_depth, 0);
        assert!(r.holds);
        let r = is_bounded_closed_under_product(&a, &a.invert()).unwrap();
        assert_eq!(r.product, ActivityKind::Finitary { depth: 0 });
        assert!(r.holds);
    }
}
