//! Local state spaces, interactions on `S × S`, and conserved quantities.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::Zero;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::linalg::Eliminator;
use crate::rational::{self, Scalar};

pub type StateIdx = usize;
pub type StatePair = (StateIdx, StateIdx);
/// A directed edge `((s1, s2), (t1, t2))` of the graph `(S × S, φ)`.
pub type PhiEdge = (StatePair, StatePair);
/// A pair of state labels, as written in interaction files.
pub type LabelPair<'a> = (&'a str, &'a str);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSpace {
    labels: Vec<String>,
    base: Option<StateIdx>,
}

impl StateSpace {
    pub fn new<I, T>(labels: I, base: Option<&str>) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyStateSpace);
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateState(l.clone()));
            }
        }
        let mut space = StateSpace { labels, base: None };
        if let Some(b) = base {
            space.base = Some(space.index(b)?);
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: StateIdx) -> &str {
        &self.labels[s]
    }

    pub fn index(&self, label: &str) -> Result<StateIdx> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownState(label.to_string()))
    }

    pub fn base(&self) -> Option<StateIdx> {
        self.base
    }

    pub fn with_base(&self, base: StateIdx) -> Self {
        assert!(base < self.len());
        StateSpace { labels: self.labels.clone(), base: Some(base) }
    }

    /// The declared base, or the first state when none is declared.
    pub fn base_or_first(&self) -> StateIdx {
        self.base.unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Missing reverse edges are added.
    Lenient,
    /// Missing reverse edges are an error.
    Strict,
}

/// An interaction `(S, φ)`: a symmetric digraph on `S × S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    states: StateSpace,
    edges: BTreeSet<PhiEdge>,
}

impl Interaction {
    pub fn new(
        states: StateSpace,
        edges: impl IntoIterator<Item = PhiEdge>,
        symmetry: Symmetry,
    ) -> Result<Self> {
        let n = states.len();
        let mut set = BTreeSet::new();
        for e @ ((a, b), (c, d)) in edges {
            if [a, b, c, d].iter().any(|&s| s >= n) {
                return Err(Error::UnknownState(format!("index out of range in {e:?}")));
            }
            set.insert(e);
        }
        let missing: Vec<PhiEdge> =
            set.iter().filter(|(x, y)| !set.contains(&(*y, *x))).copied().collect();
        if let Some(&(x, y)) = missing.first() {
            if symmetry == Symmetry::Strict {
                let fmt_pair = |p: StatePair| format!("({},{})", states.label(p.0), states.label(p.1));
                return Err(Error::Asymmetric(format!("{} -> {}", fmt_pair(x), fmt_pair(y))));
            }
        }
        for (x, y) in missing {
            set.insert((y, x));
        }
        Ok(Interaction { states, edges: set })
    }

    /// Builds an interaction from `((a, b), (c, d))` label edges.
    pub fn from_labels(
        states: StateSpace,
        edges: &[(LabelPair, LabelPair)],
        symmetry: Symmetry,
    ) -> Result<Self> {
        let idx = |l: &str| states.index(l);
        let mut out = Vec::with_capacity(edges.len());
        for &((a, b), (c, d)) in edges {
            out.push(((idx(a)?, idx(b)?), (idx(c)?, idx(d)?)));
        }
        Interaction::new(states, out, symmetry)
    }

    /// `S = {0,1}`, a particle hops to a vacant neighbour.
    pub fn exclusion() -> Self {
        Self::multispecies(1)
    }

    /// `S = {0,…,κ}`, `((j,k),(k,j))` for all `j ≠ k`.
    pub fn multispecies(kappa: usize) -> Self {
        assert!(kappa >= 1, "multispecies needs kappa >= 1");
        let labels: Vec<String> = (0..=kappa).map(|j| j.to_string()).collect();
        let states = StateSpace::new(labels, Some("0")).expect("distinct labels");
        let edges = (0..=kappa)
            .flat_map(|j| (0..=kappa).filter(move |&k| k != j).map(move |k| ((j, k), (k, j))));
        Interaction::new(states, edges, Symmetry::Strict).expect("symmetric by construction")
    }

    /// Two-species exclusion with annihilation and creation on `{-1, 0, 1}`.
    pub fn two_species_ac() -> Self {
        let states = StateSpace::new(["-1", "0", "1"], Some("0")).expect("distinct labels");
        Interaction::from_labels(
            states,
            &[
                (("-1", "0"), ("0", "-1")),
                (("1", "0"), ("0", "1")),
                (("1", "-1"), ("-1", "1")),
                (("1", "-1"), ("0", "0")),
                (("0", "0"), ("-1", "1")),
            ],
            Symmetry::Lenient,
        )
        .expect("valid labels")
    }

    /// Two-colour exclusion: `multispecies(2)` without `(1,2) ↔ (2,1)`.
    pub fn quastel2() -> Self {
        let ms = Self::multispecies(2);
        let edges = ms
            .edges
            .iter()
            .copied()
            .filter(|&(a, b)| !matches!((a, b), ((1, 2), (2, 1)) | ((2, 1), (1, 2))));
        Interaction::new(ms.states.clone(), edges, Symmetry::Strict).expect("still symmetric")
    }

    /// Resolves a built-in id: `exclusion`, `multispecies:<κ>`, `two-species-ac`, `quastel2`.
    pub fn builtin(id: &str) -> Option<Self> {
        match id {
            "exclusion" => Some(Self::exclusion()),
            "two-species-ac" => Some(Self::two_species_ac()),
            "quastel2" => Some(Self::quastel2()),
            _ => {
                let kappa: usize = id.strip_prefix("multispecies:")?.parse().ok()?;
                (kappa >= 1).then(|| Self::multispecies(kappa))
            }
        }
    }

    pub fn states(&self) -> &StateSpace {
        &self.states
    }

    pub fn edges(&self) -> &BTreeSet<PhiEdge> {
        &self.edges
    }

    pub fn contains(&self, edge: &PhiEdge) -> bool {
        self.edges.contains(edge)
    }

    /// Targets of φ-edges leaving `from`, in lexicographic order.
    pub fn successors(&self, from: StatePair) -> impl Iterator<Item = StatePair> + '_ {
        let n = self.states.len();
        self.edges
            .range((from, (0, 0))..=(from, (n, n)))
            .map(|&(_, to)| to)
    }

    fn pair_index(&self, p: StatePair) -> usize {
        p.0 * self.states.len() + p.1
    }

    fn pair_of(&self, i: usize) -> StatePair {
        let n = self.states.len();
        (i / n, i % n)
    }

    pub fn pair_components(&self) -> PairComponents {
        let n = self.states.len();
        let mut dsu = DisjointSets::new(n * n);
        for &(a, b) in &self.edges {
            dsu.union(self.pair_index(a), self.pair_index(b));
        }
        PairComponents { states: n, count: dsu.count(), component_id: dsu.labels() }
    }

    pub fn is_exchangeable(&self) -> bool {
        let comps = self.pair_components();
        let n = self.states.len();
        (0..n).all(|a| (0..n).all(|b| comps.id((a, b)) == comps.id((b, a))))
    }

    /// Shortest φ-path from `(s1, s2)` to `(s2, s1)`.
    pub fn pair_exchange_path(&self, s1: StateIdx, s2: StateIdx) -> Result<Vec<PhiEdge>> {
        let n = self.states.len();
        if s1 >= n || s2 >= n {
            return Err(Error::UnknownState(format!("index {}", s1.max(s2))));
        }
        if s1 == s2 {
            return Ok(Vec::new());
        }
        let start = (s1, s2);
        let goal = (s2, s1);
        let mut prev: Vec<Option<usize>> = vec![None; n * n];
        let mut seen = vec![false; n * n];
        seen[self.pair_index(start)] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            if p == goal {
                break;
            }
            for q in self.successors(p) {
                let qi = self.pair_index(q);
                if !seen[qi] {
                    seen[qi] = true;
                    prev[qi] = Some(self.pair_index(p));
                    queue.push_back(q);
                }
            }
        }
        if !seen[self.pair_index(goal)] {
            return Err(Error::NotExchangeable(
                self.states.label(s1).to_string(),
                self.states.label(s2).to_string(),
            ));
        }
        let mut path = Vec::new();
        let mut cur = self.pair_index(goal);
        while let Some(p) = prev[cur] {
            path.push((self.pair_of(p), self.pair_of(cur)));
            cur = p;
        }
        path.reverse();
        Ok(path)
    }

    /// Basis of `Consv^φ(S)` modulo constants, normalized to vanish at `base`.
    ///
    /// Solves `ξ(s1)+ξ(s2) = ξ(t1)+ξ(t2)` over every φ-edge together with
    /// `ξ(base) = 0`. Each basis vector has a 1 at one free state and 0 at the
    /// other free states, free states taken in declared order.
    pub fn consv_basis(&self, base: StateIdx) -> Vec<ConservedQuantity> {
        let n = self.states.len();
        let mut elim = Eliminator::new(n);
        let mut base_row = vec![Scalar::zero(); n];
        base_row[base] = rational::one();
        elim.insert_dense(&base_row);
        for &((s1, s2), (t1, t2)) in &self.edges {
            let mut row = vec![Scalar::zero(); n];
            row[s1] += rational::one();
            row[s2] += rational::one();
            row[t1] -= rational::one();
            row[t2] -= rational::one();
            elim.insert_dense(&row);
        }
        elim.nullspace().into_iter().map(|values| ConservedQuantity { values }).collect()
    }
}

/// Connected components of `(S × S, φ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairComponents {
    states: usize,
    count: usize,
    component_id: Vec<usize>,
}

impl PairComponents {
    pub fn id(&self, p: StatePair) -> usize {
        self.component_id[p.0 * self.states + p.1]
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Members of each component, components ordered by smallest member.
    pub fn groups(&self) -> Vec<Vec<StatePair>> {
        let mut groups = vec![Vec::new(); self.count];
        for (i, &c) in self.component_id.iter().enumerate() {
            groups[c].push((i / self.states, i % self.states));
        }
        groups
    }
}

/// A function `ξ: S → ℚ`, stored as one value per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConservedQuantity {
    values: Vec<Scalar>,
}

impl ConservedQuantity {
    pub fn new(values: Vec<Scalar>) -> Self {
        ConservedQuantity { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ConservedQuantity { values: values.iter().map(|&v| rational::int(v)).collect() }
    }

    pub fn zero(states: usize) -> Self {
        ConservedQuantity { values: vec![Scalar::zero(); states] }
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, s: StateIdx) -> &Scalar {
        &self.values[s]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_normalized(&self, base: StateIdx) -> bool {
        self.values[base].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `ξ̃(s1, s2) = ξ(s1) + ξ(s2)`.
    pub fn pair_sum(&self, p: StatePair) -> Scalar {
        &self.values[p.0] + &self.values[p.1]
    }

    /// First φ-edge along which `ξ̃` changes, if any.
    pub fn conservation_violation(&self, phi: &Interaction) -> Option<PhiEdge> {
        phi.edges().iter().copied().find(|&(a, b)| self.pair_sum(a) != self.pair_sum(b))
    }

    pub fn is_conserved(&self, phi: &Interaction) -> bool {
        self.conservation_violation(phi).is_none()
    }
}

impl fmt::Display for ConservedQuantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(rational::format).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use std::collections::BTreeMap;

    /// BFS over all |S|² vertices with an explicit adjacency list.
    fn bfs_components(phi: &Interaction) -> Vec<BTreeSet<StatePair>> {
        let n = phi.states().len();
        let mut adj: BTreeMap<StatePair, Vec<StatePair>> = BTreeMap::new();
        for &(a, b) in phi.edges() {
            adj.entry(a).or_default().push(b);
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if seen.contains(&(a, b)) {
                    continue;
                }
                let mut comp = BTreeSet::new();
                let mut queue = VecDeque::from([(a, b)]);
                seen.insert((a, b));
                while let Some(p) = queue.pop_front() {
                    comp.insert(p);
                    for &q in adj.get(&p).into_iter().flatten() {
                        if seen.insert(q) {
                            queue.push_back(q);
                        }
                    }
                }
                out.push(comp);
            }
        }
        out
    }

    fn label_groups(phi: &Interaction) -> Vec<Vec<(String, String)>> {
        let s = phi.states();
        phi.pair_components()
            .groups()
            .into_iter()
            .map(|g| g.into_iter().map(|(a, b)| (s.label(a).into(), s.label(b).into())).collect())
            .collect()
    }

    fn pairs(items: &[(&str, &str)]) -> Vec<(String, String)> {
        items.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn state_space_rejects_duplicates_and_unknown_base() {
        assert_eq!(StateSpace::new(["a", "a"], None), Err(Error::DuplicateState("a".into())));
        assert_eq!(StateSpace::new(["a"], Some("b")), Err(Error::UnknownState("b".into())));
        assert_eq!(StateSpace::new(Vec::<String>::new(), None), Err(Error::EmptyStateSpace));
    }

    #[test]
    fn lenient_and_strict_symmetry() {
        let s = StateSpace::new(["0", "1"], Some("0")).unwrap();
        let edge = [(("1", "0"), ("0", "1"))];
        let phi = Interaction::from_labels(s.clone(), &edge, Symmetry::Lenient).unwrap();
        assert_eq!(phi.edges().len(), 2);
        assert_eq!(phi, Interaction::exclusion());
        let err = Interaction::from_labels(s, &edge, Symmetry::Strict).unwrap_err();
        assert_eq!(err.code(), "asymmetric");
    }

    #[test]
    fn two_species_ac_has_ten_directed_edges() {
        let phi = Interaction::two_species_ac();
        assert_eq!(phi.edges().len(), 10);
        assert!(phi.edges().iter().all(|(a, b)| phi.contains(&(*b, *a))));
    }

    #[test]
    fn exclusion_components_match_bfs() {
        let phi = Interaction::exclusion();
        let comps = phi.pair_components();
        assert_eq!(comps.count(), 3);
        assert_eq!(
            label_groups(&phi),
            vec![pairs(&[("0", "0")]), pairs(&[("0", "1"), ("1", "0")]), pairs(&[("1", "1")])]
        );
        assert_eq!(bfs_components(&phi).len(), 3);
    }

    #[test]
    fn empty_interaction_has_singletons() {
        let s = StateSpace::new(["0", "1"], Some("0")).unwrap();
        let phi = Interaction::new(s, [], Symmetry::Strict).unwrap();
        assert_eq!(phi.pair_components().count(), 4);
        assert!(!phi.is_exchangeable());
    }

    #[test]
    fn two_species_components() {
        let phi = Interaction::two_species_ac();
        let mut groups: Vec<BTreeSet<(String, String)>> =
            label_groups(&phi).into_iter().map(|g| g.into_iter().collect()).collect();
        groups.sort();
        let mut expected: Vec<BTreeSet<(String, String)>> = vec![
            pairs(&[("0", "0"), ("1", "-1"), ("-1", "1")]).into_iter().collect(),
            pairs(&[("-1", "0"), ("0", "-1")]).into_iter().collect(),
            pairs(&[("1", "0"), ("0", "1")]).into_iter().collect(),
            pairs(&[("-1", "-1")]).into_iter().collect(),
            pairs(&[("1", "1")]).into_iter().collect(),
        ];
        expected.sort();
        assert_eq!(groups, expected);
        assert_eq!(bfs_components(&phi).len(), 5);
    }

    #[test]
    fn union_find_agrees_with_bfs_on_builtins() {
        for id in ["exclusion", "multispecies:2", "multispecies:3", "two-species-ac", "quastel2"] {
            let phi = Interaction::builtin(id).unwrap();
            let comps = phi.pair_components();
            let bfs = bfs_components(&phi);
            assert_eq!(comps.count(), bfs.len(), "{id}");
            for c in &bfs {
                let first = *c.iter().next().unwrap();
                assert!(c.iter().all(|&p| comps.id(p) == comps.id(first)), "{id}");
            }
        }
    }

    #[test]
    fn exchangeability_of_builtins() {
        assert!(Interaction::exclusion().is_exchangeable());
        assert!(Interaction::multispecies(3).is_exchangeable());
        assert!(Interaction::two_species_ac().is_exchangeable());
        assert!(!Interaction::quastel2().is_exchangeable());
    }

    #[test]
    fn consv_bases() {
        let ex = Interaction::exclusion().consv_basis(0);
        assert_eq!(ex, vec![ConservedQuantity::from_ints(&[0, 1])]);
        for kappa in 1..=3 {
            let basis = Interaction::multispecies(kappa).consv_basis(0);
            assert_eq!(basis.len(), kappa);
            for (i, xi) in basis.iter().enumerate() {
                for j in 1..=kappa {
                    let expected = if i + 1 == j { int(1) } else { int(0) };
                    assert_eq!(xi.value(j), &expected);
                }
                assert!(xi.is_normalized(0));
            }
        }
        let ac = Interaction::two_species_ac();
        let basis = ac.consv_basis(ac.states().index("0").unwrap());
        assert_eq!(basis, vec![ConservedQuantity::from_ints(&[-1, 0, 1])]);
    }

    #[test]
    fn complete_pair_graph_has_no_conserved_quantity() {
        let s = StateSpace::new(["0", "1"], Some("0")).unwrap();
        let all: Vec<StatePair> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
        let edges = all
            .iter()
            .flat_map(|&a| all.iter().filter(move |&&b| b != a).map(move |&b| (a, b)));
        let phi = Interaction::new(s, edges, Symmetry::Strict).unwrap();
        assert!(phi.consv_basis(0).is_empty());
    }

    #[test]
    fn basis_vectors_satisfy_every_edge() {
        for id in ["exclusion", "multispecies:3", "two-species-ac", "quastel2"] {
            let phi = Interaction::builtin(id).unwrap();
            for base in 0..phi.states().len() {
                for xi in phi.consv_basis(base) {
                    assert!(xi.is_conserved(&phi));
                    assert!(xi.is_normalized(base));
                }
            }
        }
    }

    #[test]
    fn basis_dimension_independent_of_base() {
        for id in ["exclusion", "multispecies:3", "two-species-ac", "quastel2"] {
            let phi = Interaction::builtin(id).unwrap();
            let n = phi.states().len();
            let b0 = phi.consv_basis(0);
            for base in 1..n {
                let b = phi.consv_basis(base);
                assert_eq!(b.len(), b0.len(), "{id}");
                // each rebased vector is ξ - ξ(base): span must coincide
                for xi in &b0 {
                    let shifted: Vec<Scalar> =
                        xi.values().iter().map(|v| v - xi.value(base)).collect();
                    let mut rows: Vec<Vec<Scalar>> = b.iter().map(|v| v.values().to_vec()).collect();
                    let r = crate::linalg::rank(&rows, n);
                    rows.push(shifted);
                    assert_eq!(crate::linalg::rank(&rows, n), r, "{id}");
                }
            }
        }
    }

    #[test]
    fn exchange_paths() {
        let ex = Interaction::exclusion();
        assert_eq!(ex.pair_exchange_path(1, 0).unwrap(), vec![((1, 0), (0, 1))]);
        assert!(ex.pair_exchange_path(1, 1).unwrap().is_empty());
        let ac = Interaction::two_species_ac();
        let (m, p) = (ac.states().index("-1").unwrap(), ac.states().index("1").unwrap());
        assert_eq!(ac.pair_exchange_path(p, m).unwrap(), vec![((p, m), (m, p))]);
        let q = Interaction::quastel2();
        assert_eq!(q.pair_exchange_path(1, 2).unwrap_err().code(), "not_exchangeable");
    }

    #[test]
    fn exchange_paths_replay_for_all_pairs() {
        for id in ["exclusion", "multispecies:3", "two-species-ac"] {
            let phi = Interaction::builtin(id).unwrap();
            let n = phi.states().len();
            for a in 0..n {
                for b in 0..n {
                    let path = phi.pair_exchange_path(a, b).unwrap();
                    let mut cur = (a, b);
                    for e in &path {
                        assert_eq!(e.0, cur);
                        assert!(phi.contains(e));
                        cur = e.1;
                    }
                    assert_eq!(cur, (b, a));
                }
            }
        }
    }

    #[test]
    fn builtin_ids() {
        assert!(Interaction::builtin("multispecies:0").is_none());
        assert!(Interaction::builtin("nope").is_none());
        assert_eq!(Interaction::builtin("multispecies:1"), Some(Interaction::exclusion()));
    }
}
