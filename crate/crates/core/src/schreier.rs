//! Level Schreier graphs, the trivial-section subgraph and Følner candidates.
//!
//! For a symmetric generating set `S`, the level graph `Γ_n` has one edge
//! `v → s(v)` per `(s, v)`. The subgraph `Γ'_n` keeps the edges with
//! `s|_v = 1`. A component `Φ` of `Γ'_n` lifts to the set
//! `F_n = {v·u : v ∈ Φ}` of boundary points sharing the tail `u`; an edge
//! `(s, v)` leaves `F_n` exactly when `s(v) ∉ Φ` or `s|_v(u) ≠ u`.

use std::collections::{HashMap, VecDeque};

use num_rational::Ratio;
use serde::Serialize;

use crate::automaton::{Automorphism, IDENTITY_STATE};
use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::tree::{BoundaryPoint, Vertex};
use crate::word::GroupWord;

/// Default cap on the number of vertices in an orbit.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// The orbit of `v` under the group generated by `gens`, sorted.
pub fn orbit(gens: &GeneratorSet, v: &Vertex, budget: usize) -> Result<Vec<Vertex>> {
    v.check(gens.alphabet())?;
    let symmetric = gens.symmetric();
    let mut seen: HashMap<Vertex, ()> = HashMap::new();
    let mut queue = VecDeque::from([v.clone()]);
    seen.insert(v.clone(), ());
    while let Some(u) = queue.pop_front() {
        for (_, s) in &symmetric {
            let t = s.apply(&u)?;
            if !seen.contains_key(&t) {
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                seen.insert(t.clone(), ());
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Vertex> = seen.into_keys().collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchreierEdge {
    /// Index into [`SchreierLevelGraph::generators`].
    pub generator: usize,
    pub source: usize,
    pub target: usize,
    pub trivial_section: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchreierLevelGraph {
    pub level: usize,
    /// Names of the symmetric generating set, e.g. `a`, `a^-1`.
    pub generators: Vec<String>,
    #[serde(skip)]
    pub elements: Vec<Automorphism>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<SchreierEdge>,
}

impl SchreierLevelGraph {
    pub fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    /// Number of edges with a nontrivial section, i.e. `Σ_s θ_{s,T}(n)`.
    pub fn nontrivial_edges(&self) -> usize {
        self.edges.iter().filter(|e| !e.trivial_section).count()
    }
}

/// `Γ_n` on the orbit of `seed` (level `|seed|`).
pub fn schreier_level_graph(
    gens: &GeneratorSet,
    seed: &Vertex,
    budget: usize,
) -> Result<SchreierLevelGraph> {
    let vertices = orbit(gens, seed, budget)?;
    let symmetric = gens.symmetric();
    let index: HashMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut edges = Vec::with_capacity(symmetric.len() * vertices.len());
    for (gi, (_, s)) in symmetric.iter().enumerate() {
        for (source, v) in vertices.iter().enumerate() {
            let (image, state) = s.apply_with_state(v.letters());
            let target = index[&Vertex::new(image)];
            edges.push(SchreierEdge {
                generator: gi,
                source,
                target,
                trivial_section: state == IDENTITY_STATE,
            });
        }
    }
    Ok(SchreierLevelGraph {
        level: seed.len(),
        generators: symmetric.iter().map(|(n, _)| n.clone()).collect(),
        elements: symmetric.into_iter().map(|(_, g)| g).collect(),
        vertices,
        edges,
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Connected components of `Γ'_n` as sorted lists of vertex indices,
/// ordered by their least vertex.
pub fn gamma_prime_component_indices(graph: &SchreierLevelGraph) -> Vec<Vec<usize>> {
    let n = graph.vertices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for e in graph.edges.iter().filter(|e| e.trivial_section) {
        let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// Connected components `Φ_1, .., Φ_k` of `Γ'_n`.
pub fn gamma_prime_components(graph: &SchreierLevelGraph) -> Vec<Vec<Vertex>> {
    gamma_prime_component_indices(graph)
        .into_iter()
        .map(|c| c.into_iter().map(|i| graph.vertices[i].clone()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub size: usize,
    /// Edges leaving the lifted set `F_n`.
    pub boundary: usize,
    /// Edges of `Γ_n` leaving `Φ`.
    pub level_boundary: usize,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: Ratio<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FolnerReport {
    pub level: usize,
    pub orbit_size: usize,
    pub components: Vec<ComponentSummary>,
    /// Index of the selected component.
    pub best: usize,
    pub best_component: Vec<Vertex>,
    pub boundary_size: usize,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: Ratio<u64>,
    /// `Σ_s θ_{s,T}(n) / |L_n|`.
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub bound: Ratio<u64>,
    /// The common tail `u` of the lifted set `F_n = {v·u : v ∈ Φ}`.
    pub tail: BoundaryPoint,
}

fn summarize(
    graph: &SchreierLevelGraph,
    component: &[usize],
    member: &[bool],
    tail: &BoundaryPoint,
) -> Result<ComponentSummary> {
    let n = graph.vertices.len();
    let mut boundary = 0;
    let mut level_boundary = 0;
    for &v in component {
        // edges are stored generator-major
        for e in (0..graph.generators.len()).map(|g| &graph.edges[g * n + v]) {
            if !member[e.target] {
                boundary += 1;
                level_boundary += 1;
            } else if !e.trivial_section {
                let s = &graph.elements[e.generator];
                let section = s.section(&graph.vertices[v])?;
                if section.apply_boundary(tail)? != *tail {
                    boundary += 1;
                }
            }
        }
    }
    Ok(ComponentSummary {
        size: component.len(),
        boundary,
        level_boundary,
        ratio: Ratio::new(boundary as u64, component.len() as u64),
    })
}

/// Builds `Γ_n` on the orbit of the length-`n` beginning of `seed` and
/// picks the component of `Γ'_n` with the least boundary ratio; ties go to
/// the larger component, then to the least vertex.
pub fn folner_candidate(
    gens: &GeneratorSet,
    seed: &BoundaryPoint,
    n: usize,
    budget: usize,
) -> Result<FolnerReport> {
    if n == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    seed.check(gens.alphabet())?;
    let graph = schreier_level_graph(gens, &seed.prefix(n), budget)?;
    let tail = seed.tail(n);
    let components = gamma_prime_component_indices(&graph);
    let mut summaries = Vec::with_capacity(components.len());
    let mut member = vec![false; graph.vertices.len()];
    for c in &components {
        for &v in c {
            member[v] = true;
        }
        summaries.push(summarize(&graph, c, &member, &tail)?);
        for &v in c {
            member[v] = false;
        }
    }
    let best = (0..components.len())
        .min_by(|&i, &j| {
            summaries[i]
                .ratio
                .cmp(&summaries[j].ratio)
                .then(summaries[j].size.cmp(&summaries[i].size))
                .then(components[i][0].cmp(&components[j][0]))
        })
        .expect("orbit is nonempty");
    let orbit_size = graph.vertices.len();
    Ok(FolnerReport {
        level: n,
        orbit_size,
        best,
        best_component: components[best].iter().map(|&i| graph.vertices[i].clone()).collect(),
        boundary_size: summaries[best].boundary,
        ratio: summaries[best].ratio,
        bound: Ratio::new(graph.nontrivial_edges() as u64, orbit_size as u64),
        components: summaries,
        tail,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileEntry {
    pub level: usize,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub ratio: Ratio<u64>,
    #[serde(serialize_with = "crate::report::ser_ratio")]
    pub bound: Ratio<u64>,
}

/// Best ratio and bound for levels `1..=n_max`.
pub fn isoperimetric_profile(
    gens: &GeneratorSet,
    seed: &BoundaryPoint,
    n_max: usize,
    budget: usize,
) -> Result<Vec<ProfileEntry>> {
    (1..=n_max)
        .map(|n| {
            let r = folner_candidate(gens, seed, n, budget)?;
            Ok(ProfileEntry {
                level: n,
                ratio: r.ratio,
                bound: r.bound,
            })
        })
        .collect()
}

/// For each vertex of a `Γ'_n` component, a word whose element carries
/// `anchor` to it with trivial section there (a path of trivial edges).
pub fn lifting_words(
    graph: &SchreierLevelGraph,
    anchor: &Vertex,
) -> Result<Vec<(Vertex, GroupWord)>> {
    let start = graph
        .vertex_index(anchor)
        .ok_or_else(|| Error::Precondition(format!("{anchor} is not in the graph")))?;
    let n = graph.vertices.len();
    let mut words: Vec<Option<GroupWord>> = vec![None; n];
    words[start] = Some(GroupWord::empty());
    let mut queue = VecDeque::from([start]);
    let mut by_source: Vec<Vec<&SchreierEdge>> = vec![Vec::new(); n];
    for e in graph.edges.iter().filter(|e| e.trivial_section) {
        by_source[e.source].push(e);
    }
    while let Some(v) = queue.pop_front() {
        for e in &by_source[v] {
            if words[e.target].is_none() {
                let step: GroupWord = graph.generators[e.generator].parse()?;
                // the new letter acts after the path so far
                words[e.target] = Some(step.mul(words[v].as_ref().expect("visited")));
                queue.push_back(e.target);
            }
        }
    }
    Ok(words
        .into_iter()
        .enumerate()
        .filter_map(|(i, w)| w.map(|w| (graph.vertices[i].clone(), w)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn gens(name: &str) -> GeneratorSet {
        catalog::builtin(name).unwrap().generators
    }

    #[test]
    fn orbits() {
        let g = gens("adding_machine");
        assert_eq!(orbit(&g, &"00".parse().unwrap(), 100).unwrap().len(), 4);
        let t = gens("tullio");
        assert_eq!(orbit(&t, &"0".parse().unwrap(), 100).unwrap().len(), 2);
        let empty = GeneratorSet::new(g.alphabet());
        assert_eq!(orbit(&empty, &"01".parse().unwrap(), 10).unwrap(), vec!["01".parse().unwrap()]);
        assert!(matches!(
            orbit(&g, &"00000".parse().unwrap(), 8),
            Err(Error::BudgetExceeded { budget: 8 })
        ));
    }

    #[test]
    fn adding_machine_graph() {
        let g = gens("adding_machine");
        let graph = schreier_level_graph(&g, &"000".parse().unwrap(), 100).unwrap();
        assert_eq!(graph.vertices.len(), 8);
        assert_eq!(graph.generators, vec!["a", "a^-1"]);
        let nontrivial: Vec<_> = graph.edges.iter().filter(|e| !e.trivial_section).collect();
        assert_eq!(nontrivial.len(), 2);
        let a_edge = nontrivial.iter().find(|e| e.generator == 0).unwrap();
        assert_eq!(graph.vertices[a_edge.source], "111".parse().unwrap());
        assert_eq!(gamma_prime_components(&graph).len(), 1);
    }

    #[test]
    fn folner_adding_machine() {
        let g = gens("adding_machine");
        for n in 1..=6 {
            let r = folner_candidate(&g, &BoundaryPoint::constant(0), n, 1000).unwrap();
            assert_eq!(r.ratio, Ratio::new(2, 1 << n));
            assert_eq!(r.bound, Ratio::new(2, 1 << n));
            assert_eq!(r.components[r.best].level_boundary, 0);
        }
    }

    #[test]
    fn lifting_words_carry_anchor() {
        let g = gens("tullio");
        let graph = schreier_level_graph(&g, &"000".parse().unwrap(), 1000).unwrap();
        let anchor: Vertex = "000".parse().unwrap();
        for (v, w) in lifting_words(&graph, &anchor).unwrap() {
            let h = g.evaluate(&w).unwrap();
            assert_eq!(h.apply(&anchor).unwrap(), v);
            assert!(h.section(&anchor).unwrap().is_identity());
        }
    }
}
