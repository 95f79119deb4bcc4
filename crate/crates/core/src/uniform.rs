//! Uniform functions: families `{Λ ↦ f*_Λ}` of exact-support components with
//! bounded diameter, together with finite-support configurations.
//!
//! Two finite descriptions are supported. An *explicit* family lists its
//! components. A *translated* family, on lattice graphs only, lists templates
//! `Λ₀` with `min Λ₀ = 0` and stands for every integer translate `Λ₀ + t` in
//! the infinite lattice the window views.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{lattice_distance, Site, SiteGraph};
use crate::local::{ExactSupportFunction, Expansion, LocalFunction, SiteSet};
use crate::rational::{self, Scalar};
use crate::state::{ConservedQuantity, StateIdx};

/// An element of `S^X` equal to `base` at all but finitely many sites.
///
/// Sites outside the graph read as `base`, which lets a lattice window stand
/// for the infinite lattice.
#[derive(Debug, Clone)]
pub struct Configuration {
    graph: Arc<SiteGraph>,
    states: usize,
    base: StateIdx,
    assignments: BTreeMap<Site, StateIdx>,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.assignments == other.assignments
    }
}

impl Eq for Configuration {}

impl std::hash::Hash for Configuration {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.base.hash(state);
        self.assignments.hash(state);
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Configuration {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.base, &self.assignments).cmp(&(other.base, &other.assignments))
    }
}

impl Configuration {
    pub fn new(
        graph: Arc<SiteGraph>,
        states: usize,
        base: StateIdx,
        assignments: impl IntoIterator<Item = (Site, StateIdx)>,
    ) -> Result<Self> {
        if base >= states {
            return Err(Error::UnknownState(format!("index {base}")));
        }
        let mut map = BTreeMap::new();
        for (x, s) in assignments {
            graph.check(x)?;
            if s >= states {
                return Err(Error::UnknownState(format!("index {s}")));
            }
            if s != base {
                map.insert(x, s);
            } else {
                map.remove(&x);
            }
        }
        Ok(Configuration { graph, states, base, assignments: map })
    }

    /// The all-base configuration `⋆`.
    pub fn star(graph: Arc<SiteGraph>, states: usize, base: StateIdx) -> Self {
        Configuration { graph, states, base, assignments: BTreeMap::new() }
    }

    /// One state per vertex, in vertex order.
    pub fn from_dense(graph: Arc<SiteGraph>, states: usize, base: StateIdx, dense: &[StateIdx]) -> Result<Self> {
        if dense.len() != graph.len() {
            return Err(Error::Invalid(format!("expected {} states, got {}", graph.len(), dense.len())));
        }
        let pairs: Vec<(Site, StateIdx)> = graph.vertices().iter().copied().zip(dense.iter().copied()).collect();
        Configuration::new(graph, states, base, pairs)
    }

    pub fn graph(&self) -> &Arc<SiteGraph> {
        &self.graph
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn base(&self) -> StateIdx {
        self.base
    }

    pub fn assignments(&self) -> &BTreeMap<Site, StateIdx> {
        &self.assignments
    }

    pub fn state_at(&self, x: Site) -> StateIdx {
        self.assignments.get(&x).copied().unwrap_or(self.base)
    }

    /// `Supp(η) = { x : η_x ≠ * }`.
    pub fn support(&self) -> SiteSet {
        SiteSet::new(self.assignments.keys().copied())
    }

    /// Canonical encoding: sorted `(site, state)` pairs.
    pub fn key(&self) -> Vec<(Site, StateIdx)> {
        self.assignments.iter().map(|(&x, &s)| (x, s)).collect()
    }

    pub fn with(&self, x: Site, s: StateIdx) -> Self {
        let mut out = self.clone();
        if s == self.base {
            out.assignments.remove(&x);
        } else {
            out.assignments.insert(x, s);
        }
        out
    }

    /// `η^{x,y}`: states at `x` and `y` exchanged.
    pub fn swapped(&self, x: Site, y: Site) -> Self {
        let (sx, sy) = (self.state_at(x), self.state_at(y));
        self.with(x, sy).with(y, sx)
    }

    /// `η^σ` with `η^σ_x = η_{σ(x)}` on the domain of `σ`.
    pub fn permuted(&self, sigma: &BTreeMap<Site, Site>) -> Self {
        let mut out = self.clone();
        for (&x, &sx) in sigma {
            out = out.with(x, self.state_at(sx));
        }
        out
    }

    /// `Δ_{η,η'} = { x : η_x ≠ η'_x }`.
    pub fn difference_set(&self, other: &Configuration) -> Result<SiteSet> {
        if self.base != other.base {
            return Err(Error::Mismatch("configurations have different base states".into()));
        }
        let keys: BTreeSet<Site> = self.assignments.keys().chain(other.assignments.keys()).copied().collect();
        Ok(SiteSet::new(keys.into_iter().filter(|&x| self.state_at(x) != other.state_at(x))))
    }

    /// The same element of `S^X` written against another base; finite graphs only.
    pub fn rebased(&self, new_base: StateIdx) -> Result<Self> {
        if self.graph.is_window_of_infinite() && new_base != self.base {
            return Err(Error::Mismatch("cannot rebase a configuration on an infinite lattice".into()));
        }
        let pairs: Vec<(Site, StateIdx)> = self.graph.vertices().iter().map(|&x| (x, self.state_at(x))).collect();
        Configuration::new(self.graph.clone(), self.states, new_base, pairs)
    }

    pub(crate) fn same_graph(&self, graph: &SiteGraph) -> bool {
        std::ptr::eq(self.graph.as_ref(), graph) || self.graph.as_ref() == graph
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Explicit(Expansion),
    Translated(Expansion),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformFunction {
    graph: Arc<SiteGraph>,
    states: usize,
    base: StateIdx,
    radius: u64,
    family: Family,
}

impl UniformFunction {
    pub fn explicit(
        graph: Arc<SiteGraph>,
        states: usize,
        base: StateIdx,
        radius: u64,
        components: impl IntoIterator<Item = ExactSupportFunction>,
    ) -> Result<Self> {
        let mut family = Expansion::new();
        for c in components {
            let c = check_component(c, states, base)?;
            for &x in c.support().sites() {
                graph.check(x)?;
            }
            let diameter = graph.diameter_of(c.support().sites())?;
            if diameter > radius {
                return Err(Error::RadiusViolation { support: c.support().to_string(), diameter, radius });
            }
            accumulate(&mut family, c);
        }
        family.retain(|_, c| !c.is_zero());
        Ok(UniformFunction { graph, states, base, radius, family: Family::Explicit(family) })
    }

    pub fn translated(
        graph: Arc<SiteGraph>,
        states: usize,
        base: StateIdx,
        radius: u64,
        templates: impl IntoIterator<Item = ExactSupportFunction>,
    ) -> Result<Self> {
        let k = graph.lattice_range().ok_or(Error::NotLattice)?;
        let mut family = Expansion::new();
        for c in templates {
            let c = check_component(c, states, base)?;
            let Some(min) = c.support().first_site() else {
                return Err(Error::Invalid("translated templates must have nonempty support".into()));
            };
            let c = c.shifted(-min);
            let diameter = lattice_diameter(k, c.support());
            if diameter > radius {
                return Err(Error::RadiusViolation { support: c.support().to_string(), diameter, radius });
            }
            accumulate(&mut family, c);
        }
        family.retain(|_, c| !c.is_zero());
        Ok(UniformFunction { graph, states, base, radius, family: Family::Translated(family) })
    }

    pub fn zero(graph: Arc<SiteGraph>, states: usize, base: StateIdx) -> Self {
        UniformFunction { graph, states, base, radius: 0, family: Family::Explicit(Expansion::new()) }
    }

    /// `ξ_X = Σ_x ξ_x`: one template `{0} ↦ ξ` on lattices, `{x} ↦ ξ` per vertex otherwise.
    pub fn xi_x(xi: &ConservedQuantity, graph: Arc<SiteGraph>, base: StateIdx) -> Result<Self> {
        if !xi.is_normalized(base) {
            return Err(Error::NotNormalized(format!("ξ(base) = {}", rational::format(xi.value(base)))));
        }
        let states = xi.len();
        let single = |x: Site| {
            ExactSupportFunction::from_nonbase_values(states, SiteSet::from([x]), base, |t| xi.value(t[0]).clone())
        };
        if graph.is_window_of_infinite() {
            UniformFunction::translated(graph, states, base, 0, [single(0)?])
        } else {
            let comps = graph.vertices().iter().map(|&x| single(x)).collect::<Result<Vec<_>>>()?;
            UniformFunction::explicit(graph, states, base, 0, comps)
        }
    }

    pub fn graph(&self) -> &Arc<SiteGraph> {
        &self.graph
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn base(&self) -> StateIdx {
        self.base
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn is_translated(&self) -> bool {
        matches!(self.family, Family::Translated(_))
    }

    /// Explicit components or translation templates.
    pub fn components(&self) -> &Expansion {
        match &self.family {
            Family::Explicit(e) | Family::Translated(e) => e,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components().is_empty()
    }

    /// `f*_∅ = f(⋆)`.
    pub fn constant_term(&self) -> Scalar {
        self.components()
            .get(&SiteSet::empty())
            .map(|c| c.as_local().table()[0].clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn same_family(&self, other: &UniformFunction) -> bool {
        self.base == other.base && self.family == other.family
    }

    /// Translates `Λ₀ + t` of templates meeting `sites` (translated families only).
    fn translates_meeting<'a>(&'a self, sites: &'a SiteSet) -> impl Iterator<Item = (Site, &'a ExactSupportFunction)> + 'a {
        self.components().values().flat_map(move |c| {
            let shifts: BTreeSet<Site> =
                sites.sites().iter().flat_map(|&d| c.support().sites().iter().map(move |&o| d - o)).collect();
            shifts.into_iter().map(move |t| (t, c))
        })
    }

    fn check_config(&self, eta: &Configuration) -> Result<()> {
        if !eta.same_graph(&self.graph) {
            return Err(Error::Mismatch("configuration lives on a different graph".into()));
        }
        if eta.states != self.states {
            return Err(Error::Mismatch("state counts differ".into()));
        }
        Ok(())
    }

    /// `f(η) = Σ_{Λ ⊆ Supp η} f*_Λ(η)`.
    pub fn evaluate(&self, eta: &Configuration) -> Result<Scalar> {
        self.check_config(eta)?;
        if eta.base != self.base {
            return Err(Error::Mismatch("configuration and function use different base states".into()));
        }
        let supp = eta.support();
        let at = |x: Site| eta.state_at(x);
        let mut total = Scalar::zero();
        match &self.family {
            Family::Explicit(e) => {
                for (lambda, c) in e {
                    if lambda.is_subset(&supp) {
                        total += c.eval_with(at);
                    }
                }
            }
            Family::Translated(e) => {
                for c in e.values() {
                    for &t in supp.sites() {
                        if c.support().shifted(t).is_subset(&supp) {
                            total += c.eval_with(|x| at(x + t));
                        }
                    }
                }
            }
        }
        Ok(total)
    }

    /// `f(η') − f(η) = Σ_{Λ ∩ Δ ≠ ∅} (f*_Λ(η') − f*_Λ(η))`.
    ///
    /// Defined for translated families on unbounded lattices, and for
    /// configurations written against a base other than the function's.
    pub fn difference(&self, eta: &Configuration, eta_prime: &Configuration) -> Result<Scalar> {
        self.check_config(eta)?;
        self.check_config(eta_prime)?;
        let delta = eta.difference_set(eta_prime)?;
        let mut total = Scalar::zero();
        if delta.is_empty() {
            return Ok(total);
        }
        match &self.family {
            Family::Explicit(e) => {
                for (lambda, c) in e {
                    if lambda.intersects(&delta) {
                        total += c.eval_with(|x| eta_prime.state_at(x));
                        total -= c.eval_with(|x| eta.state_at(x));
                    }
                }
            }
            Family::Translated(_) => {
                for (t, c) in self.translates_meeting(&delta) {
                    total += c.eval_with(|x| eta_prime.state_at(x + t));
                    total -= c.eval_with(|x| eta.state_at(x + t));
                }
            }
        }
        Ok(total)
    }

    /// The same uniform function realized at `new_base`.
    ///
    /// Each component is re-expanded at the new base and the pieces with
    /// nonempty support are summed per support; the constant term is kept.
    pub fn rebase(&self, new_base: StateIdx) -> Result<UniformFunction> {
        if new_base >= self.states {
            return Err(Error::UnknownState(format!("index {new_base}")));
        }
        let mut out = Expansion::new();
        for (lambda, c) in self.components() {
            if lambda.is_empty() {
                let constant = ExactSupportFunction::new(c.as_local().clone(), new_base)?;
                accumulate(&mut out, constant);
                continue;
            }
            for (sub, part) in c.as_local().expand(new_base)? {
                if sub.is_empty() {
                    continue;
                }
                let part = match self.family {
                    Family::Translated(_) => part.shifted(-sub.first_site().unwrap()),
                    Family::Explicit(_) => part,
                };
                accumulate(&mut out, part);
            }
        }
        out.retain(|_, c| !c.is_zero());
        let family = match self.family {
            Family::Explicit(_) => Family::Explicit(out),
            Family::Translated(_) => Family::Translated(out),
        };
        Ok(UniformFunction { graph: self.graph.clone(), states: self.states, base: new_base, radius: self.radius, family })
    }

    /// Explicit family of all translates lying inside the lattice window.
    pub fn to_explicit(&self) -> Result<UniformFunction> {
        match &self.family {
            Family::Explicit(_) => Ok(self.clone()),
            Family::Translated(e) => {
                let (a, b) = self.graph.window().ok_or(Error::UnboundedFamily)?;
                let mut comps = Vec::new();
                for c in e.values() {
                    let width = c.support().sites().last().copied().unwrap_or(0);
                    for t in a..=b - width {
                        comps.push(c.shifted(t));
                    }
                }
                UniformFunction::explicit(self.graph.clone(), self.states, self.base, self.radius, comps)
            }
        }
    }

    /// `f_x = Σ_{Λ ∋ x} f*_Λ / |Λ|`, each local at `x` with radius `R + 1`.
    pub fn to_uniformly_local(&self) -> Result<BTreeMap<Site, LocalFunction>> {
        if !self.constant_term().is_zero() {
            return Err(Error::NotNormalized("f(⋆) must be 0".into()));
        }
        let explicit = self.to_explicit()?;
        let mut system = BTreeMap::new();
        for &x in self.graph.vertices() {
            let mut f = LocalFunction::zero(self.states, SiteSet::empty())?;
            for (lambda, c) in explicit.components() {
                if lambda.contains(x) {
                    let weight = rational::frac(1, lambda.len() as i64);
                    f = f.plus(&c.as_local().scaled(&weight))?;
                }
            }
            system.insert(x, f);
        }
        Ok(system)
    }

    /// `f = Σ_x f_x` for a system local at each `x` with radius `radius`
    /// (supports inside `B(x, radius)`) and normalized `f_x(⋆) = 0`.
    ///
    /// Components are `f*_Λ = Σ_{x : Λ ⊆ B(x, R)} (f_x)*_Λ`; the result's
    /// radius is the largest component diameter, at most `2R`.
    pub fn sum_of_uniformly_local(
        system: &BTreeMap<Site, LocalFunction>,
        radius: u64,
        graph: Arc<SiteGraph>,
        states: usize,
        base: StateIdx,
    ) -> Result<UniformFunction> {
        let r = rational::int(radius as i64);
        let mut family = Expansion::new();
        for (&x, f) in system {
            let ball = graph.ball(x, &r)?;
            if f.num_states() != states {
                return Err(Error::Mismatch("state counts differ".into()));
            }
            if !f.support().sites().iter().all(|y| ball.contains(y)) {
                return Err(Error::LocalityViolation { site: graph.site_label(x), radius });
            }
            let at_star = f.eval_with(|_| base);
            if !at_star.is_zero() {
                return Err(Error::NotNormalized(format!(
                    "f_{}(⋆) = {}",
                    graph.site_label(x),
                    rational::format(at_star)
                )));
            }
            for (lambda, part) in f.expand(base)? {
                if !lambda.is_empty() {
                    accumulate(&mut family, part);
                }
            }
        }
        family.retain(|_, c| !c.is_zero());
        let mut diameter = 0;
        for lambda in family.keys() {
            diameter = diameter.max(graph.diameter_of(lambda.sites())?);
        }
        Ok(UniformFunction { graph, states, base, radius: diameter, family: Family::Explicit(family) })
    }
}

fn check_component(c: ExactSupportFunction, states: usize, base: StateIdx) -> Result<ExactSupportFunction> {
    if c.as_local().num_states() != states {
        return Err(Error::Mismatch("state counts differ".into()));
    }
    if c.base() == base {
        Ok(c)
    } else {
        ExactSupportFunction::new(c.into_local(), base)
    }
}

fn accumulate(family: &mut Expansion, c: ExactSupportFunction) {
    let key = c.support().clone();
    match family.get_mut(&key) {
        Some(existing) => existing.add_assign(&c),
        None => {
            family.insert(key, c);
        }
    }
}

fn lattice_diameter(k: u64, sites: &SiteSet) -> u64 {
    match (sites.sites().first(), sites.sites().last()) {
        (Some(&a), Some(&b)) => lattice_distance(k, a, b),
        _ => 0,
    }
}
