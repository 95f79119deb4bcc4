//! Cohomology of the configuration space: finite `H⁰`/`H¹`, extraction of a
//! conserved quantity from an invariant uniform function, and a windowed
//! invariance kernel standing in for `H⁰_unif` on the infinite lattice.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::caps::Caps;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{lattice_distance, Site, SiteGraph};
use crate::linalg::{Eliminator, SparseRow};
use crate::local::{ExactSupportFunction, SiteSet};
use crate::rational::{self, Scalar};
use crate::state::{ConservedQuantity, Interaction, PhiEdge, StateIdx};
use crate::transition::{self, Edge, Transition};
use crate::uniform::{Configuration, UniformFunction};

/// Dimensions of the cochain complex `C(S^X) → C¹(S^X)` of a finite graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainSpaceSummary {
    pub dim_c0: usize,
    /// Unordered pairs `{η, η'}` with `η ≠ η'` joined by a transition.
    pub dim_c1: usize,
    pub rank_d: usize,
    pub h0: usize,
    pub h1: usize,
    /// Connected components of `(S^X, Φ_E)`, counted by union-find.
    pub components: usize,
}

impl CochainSpaceSummary {
    /// `h0` from the kernel rank agrees with the component count.
    pub fn cross_check(&self) -> bool {
        self.h0 == self.components
    }
}

/// Exhausts `S^X` for a finite graph and computes `h⁰` and `h¹`.
pub fn h0_h1_finite(phi: &Interaction, graph: &SiteGraph) -> Result<CochainSpaceSummary> {
    let n = phi.states().len();
    let sites = graph.vertices();
    let total = (n as u128).checked_pow(sites.len() as u32).unwrap_or(u128::MAX);
    let cap = Caps::current().max_configurations;
    if total > cap {
        return Err(Error::CapExceeded(format!("|S|^|X| = {total} exceeds {cap} configurations")));
    }
    let total = total as usize;
    let position: BTreeMap<Site, usize> = sites.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // first vertex most significant
    let weight: Vec<usize> = (0..sites.len()).map(|i| n.pow((sites.len() - 1 - i) as u32)).collect();
    let edges: Vec<(usize, usize)> = graph.edges().map(|(x, y)| (position[&x], position[&y])).collect();

    let mut pairs = HashSet::new();
    let mut digits = vec![0; sites.len()];
    for index in 0..total {
        let mut rest = index;
        for (d, w) in digits.iter_mut().zip(&weight) {
            *d = rest / w;
            rest %= w;
        }
        for &(px, py) in &edges {
            let (sx, sy) = (digits[px], digits[py]);
            for (tx, ty) in phi.successors((sx, sy)) {
                let target = index + tx * weight[px] + ty * weight[py] - sx * weight[px] - sy * weight[py];
                if target != index {
                    pairs.insert((index.min(target), index.max(target)));
                }
            }
        }
    }

    let mut dsu = DisjointSets::new(total);
    let mut elim = Eliminator::new(total);
    let mut sorted: Vec<_> = pairs.into_iter().collect();
    sorted.sort_unstable();
    for &(i, j) in &sorted {
        dsu.union(i, j);
        let row: SparseRow = [(i, -Scalar::one()), (j, Scalar::one())].into();
        elim.insert(&row);
    }
    let rank_d = elim.rank();
    Ok(CochainSpaceSummary {
        dim_c0: total,
        dim_c1: sorted.len(),
        rank_d,
        h0: total - rank_d,
        h1: sorted.len() - rank_d,
        components: dsu.count(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Two single-site components differ as tables on `S`.
    UnequalSingleSite,
    /// A component with at least two sites is nonzero.
    NonzeroMultiSite,
    /// The common single-site table breaks a φ-edge constraint.
    NotConservedPair,
    /// A probed transition changes the function.
    NotInvariant,
}

impl ViolationKind {
    pub fn code(self) -> &'static str {
        match self {
            ViolationKind::UnequalSingleSite => "unequal_single_site",
            ViolationKind::NonzeroMultiSite => "nonzero_multi_site",
            ViolationKind::NotConservedPair => "not_conserved_pair",
            ViolationKind::NotInvariant => "not_invariant",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Witness {
    Sites(Site, Site),
    Support(SiteSet),
    PhiEdge(PhiEdge),
    Transition(Box<Transition>, Scalar),
}

#[derive(Debug, Clone)]
pub enum ExtractionResult {
    Conserved(ConservedQuantity),
    Violation { kind: ViolationKind, witness: Witness },
}

impl ExtractionResult {
    pub fn conserved(&self) -> Option<&ConservedQuantity> {
        match self {
            ExtractionResult::Conserved(xi) => Some(xi),
            ExtractionResult::Violation { .. } => None,
        }
    }

    pub fn violation(&self) -> Option<ViolationKind> {
        match self {
            ExtractionResult::Conserved(_) => None,
            ExtractionResult::Violation { kind, .. } => Some(*kind),
        }
    }
}

fn single_site_table(c: Option<&ExactSupportFunction>, states: usize) -> Vec<Scalar> {
    match c {
        Some(c) => c.as_local().table().to_vec(),
        None => vec![Scalar::zero(); states],
    }
}

/// Decides whether `f = ξ_X` for a conserved quantity `ξ`.
///
/// The checks run in order: equal single-site tables, vanishing multi-site
/// components, then the φ-edge constraints. For explicit families every
/// vertex of the graph is compared; a translated family has one single-site
/// template shared by all sites. A `Conserved` result has been verified
/// against `ξ_X` component by component.
pub fn extract_conserved(f: &UniformFunction, phi: &Interaction) -> Result<ExtractionResult> {
    let states = f.num_states();
    if phi.states().len() != states {
        return Err(Error::Mismatch("interaction and function have different state spaces".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::NotNormalized(format!("f*_∅ = {}", rational::format(&f.constant_term()))));
    }
    let components = f.components();
    let xi_table = if f.is_translated() {
        single_site_table(components.get(&SiteSet::from([0])), states)
    } else {
        // compare sites carrying a table first, so the witness names two of them when possible
        let vertices = f.graph().vertices();
        let table_at = |x: Site| single_site_table(components.get(&SiteSet::from([x])), states);
        let (carrying, bare): (Vec<Site>, Vec<Site>) =
            vertices.iter().partition(|&&x| components.contains_key(&SiteSet::from([x])));
        let first = carrying.first().copied().unwrap_or(vertices[0]);
        let reference = table_at(first);
        for &x in carrying.iter().chain(&bare) {
            if table_at(x) != reference {
                return Ok(ExtractionResult::Violation {
                    kind: ViolationKind::UnequalSingleSite,
                    witness: Witness::Sites(first, x),
                });
            }
        }
        reference
    };
    if let Some((lambda, _)) = components.iter().find(|(l, c)| l.len() >= 2 && !c.is_zero()) {
        return Ok(ExtractionResult::Violation {
            kind: ViolationKind::NonzeroMultiSite,
            witness: Witness::Support(lambda.clone()),
        });
    }
    let xi = ConservedQuantity::new(xi_table);
    if let Some(edge) = xi.conservation_violation(phi) {
        return Ok(ExtractionResult::Violation { kind: ViolationKind::NotConservedPair, witness: Witness::PhiEdge(edge) });
    }
    if !equals_xi_x(f, &xi)? {
        return Err(Error::Invalid("extracted ξ does not reproduce f".into()));
    }
    Ok(ExtractionResult::Conserved(xi))
}

/// Like [`extract_conserved`], after first checking invariance on the
/// windowed transitions out of `probes`.
pub fn extract_conserved_probed(
    f: &UniformFunction,
    phi: &Interaction,
    window: &[Edge],
    probes: &[Configuration],
) -> Result<ExtractionResult> {
    let report = transition::is_invariant(f, phi, window, probes)?;
    if let Some((t, d)) = report.witness {
        return Ok(ExtractionResult::Violation {
            kind: ViolationKind::NotInvariant,
            witness: Witness::Transition(Box::new(t), d),
        });
    }
    extract_conserved(f, phi)
}

/// Whether `f` and `ξ_X` have the same components.
pub fn equals_xi_x(f: &UniformFunction, xi: &ConservedQuantity) -> Result<bool> {
    let g = UniformFunction::xi_x(xi, f.graph().clone(), f.base())?;
    if f.is_translated() == g.is_translated() {
        return Ok(f.components() == g.components());
    }
    Ok(f.to_explicit()?.components() == g.to_explicit()?.components())
}

/// Parameters of an invariance-kernel run on the window `[a, b]` of `(ℤ, 𝔼_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSetup {
    pub radius: u64,
    pub k: u64,
    pub window: (Site, Site),
    pub base: StateIdx,
    /// Largest `|Supp η|` among probe configurations.
    pub probe_bound: usize,
}

impl KernelSetup {
    /// Default probe bound `R + 3`.
    pub fn new(radius: u64, k: u64, window: (Site, Site), base: StateIdx) -> Self {
        KernelSetup { radius, k, window, base, probe_bound: radius as usize + 3 }
    }

    pub fn with_probe_bound(mut self, p: usize) -> Self {
        self.probe_bound = p;
        self
    }

    fn reach(&self) -> Site {
        (self.k * self.radius) as Site
    }

    /// `[a + kR, b − kR]`: every component used by a constraint lies here.
    pub fn inner_window(&self) -> (Site, Site) {
        (self.window.0 + self.reach(), self.window.1 - self.reach())
    }

    /// Sites whose radius-`R` neighbourhood lies in the inner window.
    pub fn constraint_zone(&self) -> (Site, Site) {
        (self.window.0 + 2 * self.reach(), self.window.1 - 2 * self.reach())
    }

    /// Whether a transition changing the sites `delta` yields a constraint.
    pub fn admits(&self, delta: &SiteSet) -> bool {
        let (lo, hi) = self.constraint_zone();
        !delta.is_empty() && delta.sites().iter().all(|&x| lo <= x && x <= hi)
    }
}

#[derive(Debug, Clone)]
pub struct KernelReport {
    pub setup: KernelSetup,
    pub dimension: usize,
    /// Kernel basis projected onto components meeting the constraint zone.
    pub basis: Vec<UniformFunction>,
    pub unknowns: usize,
    /// Distinct constraint rows.
    pub constraints: usize,
    pub rank: usize,
}

/// One unknown: the value of `f*_Λ` at a tuple avoiding the base state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Unknown {
    support: SiteSet,
    tuple: Vec<StateIdx>,
}

struct UnknownIndex {
    unknowns: Vec<Unknown>,
    column: BTreeMap<(SiteSet, Vec<StateIdx>), usize>,
    /// Supports containing each site.
    supports_at: BTreeMap<Site, Vec<SiteSet>>,
}

impl UnknownIndex {
    fn build(setup: &KernelSetup, states: usize) -> Result<Self> {
        let (a, b) = setup.window;
        let reach = setup.reach();
        let nonbase: Vec<StateIdx> = (0..states).filter(|&s| s != setup.base).collect();
        let cap = Caps::current().max_unknowns;
        let mut supports = BTreeSet::new();
        for m in a..=b {
            let tail: Vec<Site> = (m + 1..=(m + reach).min(b)).collect();
            for mask in 0u64..(1 << tail.len()) {
                let sites = std::iter::once(m).chain(tail.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
                let lambda = SiteSet::new(sites);
                if lattice_diameter(setup.k, &lambda) <= setup.radius {
                    supports.insert(lambda);
                }
            }
        }
        let mut unknowns = Vec::new();
        for lambda in &supports {
            let count = (nonbase.len() as u128).checked_pow(lambda.len() as u32).unwrap_or(u128::MAX);
            if unknowns.len() as u128 + count > cap as u128 {
                return Err(Error::CapExceeded(format!("more than {cap} unknowns")));
            }
            for index in 0..count as usize {
                let mut rest = index;
                let mut tuple = vec![0; lambda.len()];
                for slot in tuple.iter_mut().rev() {
                    *slot = nonbase[rest % nonbase.len()];
                    rest /= nonbase.len();
                }
                unknowns.push(Unknown { support: lambda.clone(), tuple });
            }
        }
        let column = unknowns.iter().enumerate().map(|(i, u)| ((u.support.clone(), u.tuple.clone()), i)).collect();
        let mut supports_at: BTreeMap<Site, Vec<SiteSet>> = BTreeMap::new();
        for lambda in &supports {
            for &x in lambda.sites() {
                supports_at.entry(x).or_default().push(lambda.clone());
            }
        }
        Ok(UnknownIndex { unknowns, column, supports_at })
    }

    /// Coefficients of `f(η') − f(η)` in the unknowns.
    fn difference_row(&self, eta: &Configuration, eta_prime: &Configuration, delta: &SiteSet, base: StateIdx) -> Vec<(usize, i64)> {
        let mut touched = BTreeSet::new();
        for x in delta.sites() {
            if let Some(list) = self.supports_at.get(x) {
                touched.extend(list.iter());
            }
        }
        let mut row: BTreeMap<usize, i64> = BTreeMap::new();
        for lambda in touched {
            for (config, sign) in [(eta_prime, 1), (eta, -1)] {
                let tuple: Vec<StateIdx> = lambda.sites().iter().map(|&x| config.state_at(x)).collect();
                if tuple.contains(&base) {
                    continue;
                }
                *row.entry(self.column[&(lambda.clone(), tuple)]).or_default() += sign;
            }
        }
        row.into_iter().filter(|&(_, v)| v != 0).collect()
    }
}

fn lattice_diameter(k: u64, lambda: &SiteSet) -> u64 {
    match (lambda.sites().first(), lambda.sites().last()) {
        (Some(&lo), Some(&hi)) => lattice_distance(k, lo, hi),
        _ => 0,
    }
}

/// Every configuration supported in the window with at most `p` non-base sites.
pub fn probe_configurations(graph: &Arc<SiteGraph>, states: usize, base: StateIdx, p: usize) -> Result<Vec<Configuration>> {
    let sites = graph.vertices().to_vec();
    let nonbase: Vec<StateIdx> = (0..states).filter(|&s| s != base).collect();
    let cap = Caps::current().max_configurations;
    let mut out = Vec::new();
    let mut chosen: Vec<(Site, StateIdx)> = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn walk(
        graph: &Arc<SiteGraph>,
        states: usize,
        base: StateIdx,
        sites: &[Site],
        nonbase: &[StateIdx],
        p: usize,
        cap: u128,
        chosen: &mut Vec<(Site, StateIdx)>,
        out: &mut Vec<Configuration>,
    ) -> Result<()> {
        if out.len() as u128 >= cap {
            return Err(Error::CapExceeded(format!("more than {cap} probe configurations")));
        }
        out.push(Configuration::new(graph.clone(), states, base, chosen.iter().copied())?);
        if chosen.len() == p {
            return Ok(());
        }
        for (i, &x) in sites.iter().enumerate() {
            for &s in nonbase {
                chosen.push((x, s));
                walk(graph, states, base, &sites[i + 1..], nonbase, p, cap, chosen, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    walk(graph, states, base, &sites, &nonbase, p, cap, &mut chosen, &mut out)?;
    out.sort();
    Ok(out)
}

/// Transitions out of the probes whose changed sites lie in the constraint zone.
pub fn constraint_transitions(phi: &Interaction, setup: &KernelSetup, probes: &[Configuration]) -> Result<Vec<Transition>> {
    let mut out = Vec::new();
    let Some(first) = probes.first() else { return Ok(out) };
    let window = transition::full_window(first.graph());
    for eta in probes {
        for t in transition::neighbors(phi, eta, &window)? {
            if setup.admits(&t.before().difference_set(t.after())?) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Dimension of the space of uniform functions of radius `R` on the window
/// that are invariant under every transition away from its boundary.
///
/// Unknowns are the non-base table entries of `f*_Λ` for nonempty `Λ` of
/// diameter at most `R`. Each probe transition inside the constraint zone
/// gives `f(η') − f(η) = 0`; for exchangeable interactions so does every
/// swap `η ↦ η^{x,y}` inside the zone. The kernel is projected onto the
/// components meeting the zone, since the rest are never constrained.
pub fn invariance_kernel(phi: &Interaction, setup: &KernelSetup) -> Result<KernelReport> {
    let states = phi.states().len();
    if setup.base >= states {
        return Err(Error::UnknownState(format!("index {}", setup.base)));
    }
    let (a, b) = setup.window;
    if b < a || ((b - a + 1) as u64) < 4 * (setup.radius + 1) {
        return Err(Error::WindowTooSmall(format!("[{a}, {b}] with R = {} needs at least {} sites", setup.radius, 4 * (setup.radius + 1))));
    }
    let (zlo, zhi) = setup.constraint_zone();
    if zlo > zhi {
        return Err(Error::WindowTooSmall(format!("[{a}, {b}] leaves no constraint zone for R = {}, k = {}", setup.radius, setup.k)));
    }
    let graph = Arc::new(SiteGraph::lattice_z(setup.k, a, b)?);
    let index = UnknownIndex::build(setup, states)?;
    let probes = probe_configurations(&graph, states, setup.base, setup.probe_bound)?;

    let mut rows: BTreeSet<Vec<(usize, i64)>> = BTreeSet::new();
    let mut add = |eta: &Configuration, eta_prime: &Configuration, delta: &SiteSet| {
        let mut row = index.difference_row(eta, eta_prime, delta, setup.base);
        if let Some(&(_, lead)) = row.first() {
            if lead < 0 {
                row.iter_mut().for_each(|(_, v)| *v = -*v);
            }
            rows.insert(row);
        }
    };
    for t in constraint_transitions(phi, setup, &probes)? {
        let delta = t.before().difference_set(t.after())?;
        add(t.before(), t.after(), &delta);
    }
    if phi.is_exchangeable() {
        for eta in &probes {
            for x in zlo..=zhi {
                for y in x + 1..=zhi {
                    if eta.state_at(x) != eta.state_at(y) {
                        add(eta, &eta.swapped(x, y), &SiteSet::from([x, y]));
                    }
                }
            }
        }
    }

    let n = index.unknowns.len();
    let mut elim = Eliminator::new(n);
    for row in &rows {
        let sparse: SparseRow = row.iter().map(|&(c, v)| (c, rational::int(v))).collect();
        elim.insert(&sparse);
    }
    let rank = elim.rank();

    let inner: Vec<usize> = (0..n)
        .filter(|&i| index.unknowns[i].support.sites().iter().any(|&x| zlo <= x && x <= zhi))
        .collect();
    let mut projected = Eliminator::new(inner.len());
    for v in elim.nullspace() {
        let row: SparseRow = inner.iter().enumerate().filter(|(_, &c)| !v[c].is_zero()).map(|(j, &c)| (j, v[c].clone())).collect();
        projected.insert(&row);
    }
    let mut basis = Vec::new();
    for row in projected.reduced_rows().into_values() {
        let mut by_support: BTreeMap<SiteSet, BTreeMap<Vec<StateIdx>, Scalar>> = BTreeMap::new();
        for (j, value) in row {
            let u = &index.unknowns[inner[j]];
            by_support.entry(u.support.clone()).or_default().insert(u.tuple.clone(), value);
        }
        let comps = by_support
            .into_iter()
            .map(|(lambda, values)| {
                ExactSupportFunction::from_nonbase_values(states, lambda, setup.base, |t| {
                    values.get(t).cloned().unwrap_or_else(Scalar::zero)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        basis.push(UniformFunction::explicit(graph.clone(), states, setup.base, setup.radius, comps)?);
    }
    Ok(KernelReport { setup: setup.clone(), dimension: basis.len(), basis, unknowns: n, constraints: rows.len(), rank })
}
