//! Functions on `S^Λ` for finite `Λ`, restriction to sub-supports, and the
//! unique expansion into exact-support components.
//!
//! Tables are dense and indexed in mixed radix: for support `[x_0, …, x_{m-1}]`
//! (sorted) the tuple `(s_0, …, s_{m-1})` lives at `Σ s_i · |S|^(m-1-i)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::graph::Site;
use crate::rational::Scalar;
use crate::state::StateIdx;

/// A finite, sorted set of sites, ordered by cardinality then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SiteSet(Vec<Site>);

impl SiteSet {
    pub fn new(sites: impl IntoIterator<Item = Site>) -> Self {
        let mut v: Vec<Site> = sites.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        SiteSet(v)
    }

    pub fn empty() -> Self {
        SiteSet(Vec::new())
    }

    pub fn sites(&self) -> &[Site] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Site) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &SiteSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn intersects(&self, other: &SiteSet) -> bool {
        self.0.iter().any(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &SiteSet) -> SiteSet {
        SiteSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    pub fn union(&self, other: &SiteSet) -> SiteSet {
        SiteSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn shifted(&self, by: Site) -> SiteSet {
        SiteSet(self.0.iter().map(|x| x + by).collect())
    }

    pub fn first_site(&self) -> Option<Site> {
        self.0.first().copied()
    }

    pub fn position(&self, x: Site) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    /// All subsets, by cardinality then lexicographically.
    pub fn subsets(&self) -> Vec<SiteSet> {
        let m = self.0.len();
        let mut out: Vec<SiteSet> = (0u64..(1u64 << m))
            .map(|mask| SiteSet((0..m).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect();
        out.sort();
        out
    }
}

impl Ord for SiteSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for SiteSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SiteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl<const N: usize> From<[Site; N]> for SiteSet {
    fn from(sites: [Site; N]) -> Self {
        SiteSet::new(sites)
    }
}

/// A function on `S^Λ` stored as a dense table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalFunction {
    states: usize,
    support: SiteSet,
    table: Vec<Scalar>,
}

fn table_len(states: usize, sites: usize) -> usize {
    states.pow(sites as u32)
}

impl LocalFunction {
    pub fn new(states: usize, support: SiteSet, table: Vec<Scalar>) -> Result<Self> {
        Caps::current().check_table(states, support.len())?;
        let expected = table_len(states, support.len());
        if table.len() != expected {
            return Err(Error::Invalid(format!(
                "table on {support} needs {expected} entries, got {}",
                table.len()
            )));
        }
        Ok(LocalFunction { states, support, table })
    }

    pub fn from_fn(states: usize, support: SiteSet, mut f: impl FnMut(&[StateIdx]) -> Scalar) -> Result<Self> {
        Caps::current().check_table(states, support.len())?;
        let m = support.len();
        let len = table_len(states, m);
        let mut tuple = vec![0; m];
        let mut table = Vec::with_capacity(len);
        for index in 0..len {
            decode_into(index, states, &mut tuple);
            table.push(f(&tuple));
        }
        Ok(LocalFunction { states, support, table })
    }

    pub fn zero(states: usize, support: SiteSet) -> Result<Self> {
        Self::from_fn(states, support, |_| Scalar::zero())
    }

    pub fn constant(states: usize, value: Scalar) -> Self {
        LocalFunction { states, support: SiteSet::empty(), table: vec![value] }
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn support(&self) -> &SiteSet {
        &self.support
    }

    pub fn table(&self) -> &[Scalar] {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Zero::is_zero)
    }

    pub fn encode(&self, tuple: &[StateIdx]) -> usize {
        tuple.iter().fold(0, |acc, &s| acc * self.states + s)
    }

    pub fn decode(&self, index: usize) -> Vec<StateIdx> {
        let mut tuple = vec![0; self.support.len()];
        decode_into(index, self.states, &mut tuple);
        tuple
    }

    /// `(tuple, value)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<StateIdx>, &Scalar)> + '_ {
        self.table.iter().enumerate().map(|(i, v)| (self.decode(i), v))
    }

    pub fn value(&self, tuple: &[StateIdx]) -> &Scalar {
        &self.table[self.encode(tuple)]
    }

    /// Evaluates at the configuration whose state at site `x` is `state_at(x)`.
    pub fn eval_with(&self, state_at: impl Fn(Site) -> StateIdx) -> &Scalar {
        let index = self.support.sites().iter().fold(0, |acc, &x| acc * self.states + state_at(x));
        &self.table[index]
    }

    /// `ι^L_* f`: coordinates outside `L` forced to `base`; support shrinks to `L ∩ supp f`.
    pub fn restrict(&self, sites: &SiteSet, base: StateIdx) -> LocalFunction {
        let kept = self.support.intersection(sites);
        let positions: Vec<usize> = kept.sites().iter().map(|&x| self.support.position(x).unwrap()).collect();
        let m = self.support.len();
        let mut full = vec![base; m];
        LocalFunction::from_fn(self.states, kept, |tuple| {
            full.iter_mut().for_each(|s| *s = base);
            for (&p, &s) in positions.iter().zip(tuple) {
                full[p] = s;
            }
            self.value(&full).clone()
        })
        .expect("restriction never grows the table")
    }

    /// The same function viewed on a larger support.
    pub fn extend_to(&self, support: &SiteSet) -> Result<LocalFunction> {
        if !self.support.is_subset(support) {
            return Err(Error::SupportNotContained(self.support.to_string()));
        }
        let positions: Vec<usize> = self.support.sites().iter().map(|&x| support.position(x).unwrap()).collect();
        let mut sub = vec![0; self.support.len()];
        LocalFunction::from_fn(self.states, support.clone(), |tuple| {
            for (k, &p) in positions.iter().enumerate() {
                sub[k] = tuple[p];
            }
            self.value(&sub).clone()
        })
    }

    pub fn scaled(&self, c: &Scalar) -> LocalFunction {
        LocalFunction { states: self.states, support: self.support.clone(), table: self.table.iter().map(|v| v * c).collect() }
    }

    /// Pointwise sum on the union of supports.
    pub fn plus(&self, other: &LocalFunction) -> Result<LocalFunction> {
        if self.states != other.states {
            return Err(Error::Mismatch("state counts differ".into()));
        }
        let support = self.support.union(&other.support);
        let mut a = self.extend_to(&support)?;
        let b = other.extend_to(&support)?;
        for (x, y) in a.table.iter_mut().zip(b.table) {
            *x += y;
        }
        Ok(a)
    }

    pub(crate) fn add_assign_same_support(&mut self, other: &LocalFunction) {
        debug_assert_eq!(self.support, other.support);
        for (x, y) in self.table.iter_mut().zip(&other.table) {
            *x += y;
        }
    }

    /// True iff `f(η) = 0` whenever some coordinate equals `base`.
    pub fn is_exact_support(&self, base: StateIdx) -> bool {
        self.first_vanishing_violation(base).is_none()
    }

    fn first_vanishing_violation(&self, base: StateIdx) -> Option<usize> {
        let mut tuple = vec![0; self.support.len()];
        (0..self.table.len()).find(|&i| {
            decode_into(i, self.states, &mut tuple);
            tuple.contains(&base) && !self.table[i].is_zero()
        })
    }

    /// Components `{Λ ↦ f*_Λ}` with `ι^Λ_* f = Σ_{Λ'' ⊆ Λ} f*_{Λ''}`, zero components omitted.
    ///
    /// Built by induction on `|Λ|`:
    /// `f*_Λ = ι^Λ_* f − Σ_{Λ'' ⊊ Λ} f*_{Λ''}`.
    pub fn expand(&self, base: StateIdx) -> Result<Expansion> {
        Caps::current().check_table(self.states, self.support.len())?;
        let m = self.support.len();
        let sites = self.support.sites();
        let subset_of = |mask: usize| SiteSet((0..m).filter(|i| mask >> i & 1 == 1).map(|i| sites[i]).collect());
        let mut masks: Vec<usize> = (0..1usize << m).collect();
        masks.sort_by_key(|&mask| subset_of(mask));
        let mut parts: BTreeMap<usize, LocalFunction> = BTreeMap::new();
        for &mask in &masks {
            let lambda = subset_of(mask);
            let mut part = self.restrict(&lambda, base);
            // proper submasks
            let mut sub = mask;
            while sub != 0 {
                sub = (sub - 1) & mask;
                let lower = &parts[&sub];
                if !lower.is_zero() {
                    let extended = lower.extend_to(&lambda)?;
                    for (x, y) in part.table.iter_mut().zip(extended.table) {
                        *x -= y;
                    }
                }
            }
            parts.insert(mask, part);
        }
        let mut out = Expansion::new();
        for (mask, part) in parts {
            if !part.is_zero() {
                out.insert(subset_of(mask), ExactSupportFunction { base, inner: part });
            }
        }
        Ok(out)
    }
}

fn decode_into(mut index: usize, states: usize, tuple: &mut [StateIdx]) {
    for slot in tuple.iter_mut().rev() {
        *slot = index % states;
        index /= states;
    }
}

/// A local function with exact support `Λ` relative to a base state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactSupportFunction {
    base: StateIdx,
    inner: LocalFunction,
}

impl ExactSupportFunction {
    pub fn new(f: LocalFunction, base: StateIdx) -> Result<Self> {
        if f.first_vanishing_violation(base).is_some() {
            return Err(Error::VanishingViolation(f.support.to_string()));
        }
        Ok(ExactSupportFunction { base, inner: f })
    }

    /// Builds the component from its values on tuples avoiding `base`; all
    /// other entries are zero.
    pub fn from_nonbase_values(
        states: usize,
        support: SiteSet,
        base: StateIdx,
        mut value: impl FnMut(&[StateIdx]) -> Scalar,
    ) -> Result<Self> {
        let inner = LocalFunction::from_fn(states, support, |t| {
            if t.contains(&base) {
                Scalar::zero()
            } else {
                value(t)
            }
        })?;
        Ok(ExactSupportFunction { base, inner })
    }

    pub fn base(&self) -> StateIdx {
        self.base
    }

    pub fn support(&self) -> &SiteSet {
        self.inner.support()
    }

    pub fn as_local(&self) -> &LocalFunction {
        &self.inner
    }

    pub fn into_local(self) -> LocalFunction {
        self.inner
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    pub fn value(&self, tuple: &[StateIdx]) -> &Scalar {
        self.inner.value(tuple)
    }

    pub fn eval_with(&self, state_at: impl Fn(Site) -> StateIdx) -> &Scalar {
        self.inner.eval_with(state_at)
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        ExactSupportFunction { base: self.base, inner: self.inner.scaled(c) }
    }

    /// The same table on a translated support.
    pub fn shifted(&self, by: Site) -> Self {
        let inner = LocalFunction {
            states: self.inner.states,
            support: self.inner.support.shifted(by),
            table: self.inner.table.clone(),
        };
        ExactSupportFunction { base: self.base, inner }
    }

    pub(crate) fn add_assign(&mut self, other: &ExactSupportFunction) {
        self.inner.add_assign_same_support(&other.inner);
    }

    /// Entries with no coordinate at base, the only ones that may be nonzero.
    pub fn nonbase_entries(&self) -> impl Iterator<Item = (Vec<StateIdx>, &Scalar)> + '_ {
        self.inner.entries().filter(move |(t, _)| !t.contains(&self.base))
    }
}

pub type Expansion = BTreeMap<SiteSet, ExactSupportFunction>;

/// `Σ_Λ f*_Λ` as a function on `S^L`.
pub fn assemble(states: usize, components: &Expansion, sites: &SiteSet) -> Result<LocalFunction> {
    let mut total = LocalFunction::zero(states, sites.clone())?;
    for (lambda, part) in components {
        if !lambda.is_subset(sites) {
            return Err(Error::SupportNotContained(lambda.to_string()));
        }
        let extended = part.as_local().extend_to(sites)?;
        total.add_assign_same_support(&extended);
    }
    Ok(total)
}
