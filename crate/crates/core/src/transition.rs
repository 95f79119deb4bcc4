//! The configuration space with transition structure `(S^X, Φ_E)`.
//!
//! Enumeration is always restricted to a finite window of directed edges,
//! since interactions that fire on base-state pairs have infinitely many
//! transitions out of every configuration on an infinite lattice.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Site, SiteGraph};
use crate::rational::Scalar;
use crate::state::{Interaction, PhiEdge};
use crate::uniform::{Configuration, UniformFunction};

pub type Edge = (Site, Site);

/// One step `(η, η') ∈ Φ_E`, fired along `edge` by `phi_edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    before: Configuration,
    after: Configuration,
    edge: Edge,
    phi_edge: PhiEdge,
}

impl Transition {
    /// Fires `phi_edge` on `edge`, checking that it applies to `before`.
    pub fn fire(phi: &Interaction, before: &Configuration, edge: Edge, phi_edge: PhiEdge) -> Result<Self> {
        let (x, y) = edge;
        if !before.graph().contains_edge(x, y) {
            return Err(Error::UnknownVertex(format!("edge ({x},{y})")));
        }
        if !phi.contains(&phi_edge) {
            return Err(Error::Invalid(format!("{phi_edge:?} is not an edge of the interaction")));
        }
        if (before.state_at(x), before.state_at(y)) != phi_edge.0 {
            return Err(Error::Invalid(format!("{phi_edge:?} does not apply at edge ({x},{y})")));
        }
        let ((_, _), (t1, t2)) = phi_edge;
        let after = before.with(x, t1).with(y, t2);
        Ok(Transition { before: before.clone(), after, edge, phi_edge })
    }

    pub fn before(&self) -> &Configuration {
        &self.before
    }

    pub fn after(&self) -> &Configuration {
        &self.after
    }

    pub fn edge(&self) -> Edge {
        self.edge
    }

    pub fn phi_edge(&self) -> PhiEdge {
        self.phi_edge
    }
}

fn check_states(phi: &Interaction, eta: &Configuration) -> Result<()> {
    if phi.states().len() != eta.num_states() {
        return Err(Error::Mismatch("interaction and configuration have different state spaces".into()));
    }
    Ok(())
}

/// Every directed edge of the graph.
pub fn full_window(graph: &SiteGraph) -> Vec<Edge> {
    graph.edges().collect()
}

/// Transitions out of `eta` fired on window edges, one per distinct target,
/// in (edge, φ-edge) order.
pub fn neighbors(phi: &Interaction, eta: &Configuration, window: &[Edge]) -> Result<Vec<Transition>> {
    check_states(phi, eta)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &(x, y) in window {
        if !eta.graph().contains_edge(x, y) {
            return Err(Error::UnknownVertex(format!("window edge ({x},{y})")));
        }
        let from = (eta.state_at(x), eta.state_at(y));
        for to in phi.successors(from) {
            let t = Transition::fire(phi, eta, (x, y), (from, to))?;
            if seen.insert(t.after.clone()) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BfsOutcome {
    Complete(BTreeSet<Configuration>),
    /// The search stopped after visiting `limit` configurations.
    Truncated { visited: BTreeSet<Configuration>, limit: usize },
}

impl BfsOutcome {
    pub fn configurations(&self) -> &BTreeSet<Configuration> {
        match self {
            BfsOutcome::Complete(c) => c,
            BfsOutcome::Truncated { visited, .. } => visited,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, BfsOutcome::Complete(_))
    }
}

/// Connected component of `eta` in the windowed transition graph.
pub fn component_bfs(phi: &Interaction, eta: &Configuration, window: &[Edge], max_states: usize) -> Result<BfsOutcome> {
    if max_states == 0 {
        return Err(Error::Invalid("max_states must be positive".into()));
    }
    check_states(phi, eta)?;
    let mut visited = BTreeSet::from([eta.clone()]);
    let mut queue = VecDeque::from([eta.clone()]);
    while let Some(cur) = queue.pop_front() {
        for t in neighbors(phi, &cur, window)? {
            if visited.contains(&t.after) {
                continue;
            }
            if visited.len() >= max_states {
                return Ok(BfsOutcome::Truncated { visited, limit: max_states });
            }
            visited.insert(t.after.clone());
            queue.push_back(t.after);
        }
    }
    Ok(BfsOutcome::Complete(visited))
}

/// Exchanges the states across one graph edge using the shortest φ-path.
fn adjacent_exchange(phi: &Interaction, eta: &Configuration, edge: Edge) -> Result<Vec<Transition>> {
    let (u, v) = edge;
    let mut cur = eta.clone();
    let mut out = Vec::new();
    for phi_edge in phi.pair_exchange_path(eta.state_at(u), eta.state_at(v))? {
        let t = Transition::fire(phi, &cur, edge, phi_edge)?;
        cur = t.after.clone();
        out.push(t);
    }
    Ok(out)
}

/// Transitions from `eta` to `η^{x,y}`.
///
/// Along a shortest site path `e¹, …, e^N` from `x` to `y`, exchanges across
/// `e¹ … e^N` and then back across `e^{N-1} … e¹`.
pub fn swap_path(phi: &Interaction, eta: &Configuration, x: Site, y: Site) -> Result<Vec<Transition>> {
    check_states(phi, eta)?;
    require_exchangeable(phi)?;
    let path = eta.graph().shortest_path(x, y)?;
    let edges: Vec<Edge> = path.windows(2).map(|w| (w[0], w[1])).collect();
    let order = edges.iter().chain(edges.iter().rev().skip(1));
    let mut cur = eta.clone();
    let mut out = Vec::new();
    for &edge in order {
        let steps = adjacent_exchange(phi, &cur, edge)?;
        if let Some(last) = steps.last() {
            cur = last.after.clone();
        }
        out.extend(steps);
    }
    debug_assert_eq!(cur, eta.swapped(x, y));
    Ok(out)
}

fn require_exchangeable(phi: &Interaction) -> Result<()> {
    let n = phi.states().len();
    for a in 0..n {
        for b in a + 1..n {
            phi.pair_exchange_path(a, b)?;
        }
    }
    Ok(())
}

/// Transitions from `eta` to `η^σ` (`η^σ_x = η_{σ(x)}`).
///
/// Each cycle `(x, σx, σ²x, …)`, taken in order of its smallest site, is
/// realized by the swaps `(x, σx), (σx, σ²x), …`.
pub fn permutation_path(phi: &Interaction, eta: &Configuration, sigma: &BTreeMap<Site, Site>) -> Result<Vec<Transition>> {
    check_states(phi, eta)?;
    let domain: BTreeSet<Site> = sigma.keys().copied().collect();
    let image: BTreeSet<Site> = sigma.values().copied().collect();
    if domain != image || image.len() != sigma.len() {
        return Err(Error::NotBijection("image differs from domain".into()));
    }
    for &x in &domain {
        eta.graph().check(x)?;
    }
    if sigma.iter().any(|(x, y)| x != y) {
        require_exchangeable(phi)?;
    }
    let mut done = BTreeSet::new();
    let mut cur = eta.clone();
    let mut out = Vec::new();
    for &start in &domain {
        if !done.insert(start) {
            continue;
        }
        let mut a = start;
        loop {
            let b = sigma[&a];
            if done.contains(&b) {
                break;
            }
            done.insert(b);
            let steps = swap_path(phi, &cur, a, b)?;
            if let Some(last) = steps.last() {
                cur = last.after.clone();
            }
            out.extend(steps);
            a = b;
        }
    }
    debug_assert_eq!(cur, eta.permuted(sigma));
    Ok(out)
}

/// Walks `path` from `start`, checking each step begins where the last ended.
pub fn replay(start: &Configuration, path: &[Transition]) -> Result<Configuration> {
    let mut cur = start.clone();
    for (i, t) in path.iter().enumerate() {
        if t.before != cur {
            return Err(Error::Invalid(format!("transition {i} does not start at the current configuration")));
        }
        cur = t.after.clone();
    }
    Ok(cur)
}

#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// First transition with nonzero difference, and that difference.
    pub witness: Option<(Transition, Scalar)>,
    pub probes_checked: usize,
    pub transitions_checked: usize,
}

impl InvarianceReport {
    /// The check covers only transitions out of the probe configurations.
    pub const EXHAUSTIVE_OVER_PROBES_ONLY: bool = true;
}

/// Checks `f(η') − f(η) = 0` on every windowed transition out of each probe.
pub fn is_invariant(
    f: &UniformFunction,
    phi: &Interaction,
    window: &[Edge],
    probes: &[Configuration],
) -> Result<InvarianceReport> {
    let mut transitions_checked = 0;
    for (i, eta) in probes.iter().enumerate() {
        for t in neighbors(phi, eta, window)? {
            transitions_checked += 1;
            let d = f.difference(&t.before, &t.after)?;
            if !d.is_zero() {
                return Ok(InvarianceReport {
                    invariant: false,
                    witness: Some((t, d)),
                    probes_checked: i + 1,
                    transitions_checked,
                });
            }
        }
    }
    Ok(InvarianceReport { invariant: true, witness: None, probes_checked: probes.len(), transitions_checked })
}
