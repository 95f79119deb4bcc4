//! JSON documents for interactions, graphs, configurations and functions.
//!
//! Rationals are strings `"p/q"` or `"n"`; plain JSON integers are accepted
//! on input. Sites are written by label: vertex names for explicit graphs,
//! decimal integers otherwise. Table keys join the state labels of a tuple
//! with commas, in support order; absent keys are zero.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::graph::{GraphKind, Site, SiteGraph};
use crate::local::{Expansion, ExactSupportFunction, LocalFunction, SiteSet};
use crate::rational::{self, Scalar};
use crate::state::{ConservedQuantity, Interaction, StateIdx, StateSpace, Symmetry};
use crate::transition::Transition;
use crate::uniform::{Configuration, Family, UniformFunction};

pub fn read_json(path: impl AsRef<Path>) -> Result<Value> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    Ok(T::deserialize(v)?)
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) => n
            .as_i64()
            .map(rational::int)
            .ok_or_else(|| Error::Parse(format!("rationals must be strings or integers, got {n}"))),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

pub fn scalar_to_json(x: &Scalar) -> Value {
    Value::String(rational::format(x))
}

#[derive(Deserialize, Default, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum SymmetryDoc {
    #[default]
    Lenient,
    Strict,
}

impl From<SymmetryDoc> for Symmetry {
    fn from(s: SymmetryDoc) -> Self {
        match s {
            SymmetryDoc::Lenient => Symmetry::Lenient,
            SymmetryDoc::Strict => Symmetry::Strict,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InteractionDoc {
    states: Vec<String>,
    base: Option<String>,
    edges: Vec<[[String; 2]; 2]>,
    #[serde(default)]
    symmetry: SymmetryDoc,
}

pub fn interaction_from_json(v: &Value) -> Result<Interaction> {
    let doc: InteractionDoc = from_value(v)?;
    let states = StateSpace::new(doc.states, doc.base.as_deref())?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    for [[a, b], [c, d]] in &doc.edges {
        edges.push(((states.index(a)?, states.index(b)?), (states.index(c)?, states.index(d)?)));
    }
    Interaction::new(states, edges, doc.symmetry.into())
}

/// Lists every directed edge, so the document loads under either symmetry mode.
pub fn interaction_to_json(phi: &Interaction) -> Value {
    let states = phi.states();
    let l = |s: StateIdx| states.label(s);
    let edges: Vec<Value> = phi.edges().iter().map(|&((a, b), (c, d))| json!([[l(a), l(b)], [l(c), l(d)]])).collect();
    let mut out = Map::new();
    out.insert("states".into(), json!(states.labels()));
    if let Some(b) = states.base() {
        out.insert("base".into(), json!(l(b)));
    }
    out.insert("edges".into(), Value::Array(edges));
    out.insert("symmetry".into(), json!("strict"));
    Value::Object(out)
}

/// A built-in id (`exclusion`, `multispecies:<κ>`, `two-species-ac`,
/// `quastel2`) or the path of an interaction file.
pub fn resolve_interaction(desc: &str) -> Result<Interaction> {
    match Interaction::builtin(desc) {
        Some(phi) => Ok(phi),
        None if Path::new(desc).exists() => interaction_from_json(&read_json(desc)?),
        None => Err(Error::Parse(format!("{desc:?} is neither a built-in interaction nor a file"))),
    }
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum GraphDoc {
    Explicit {
        vertices: Vec<String>,
        edges: Vec<[String; 2]>,
        #[serde(default)]
        symmetry: SymmetryDoc,
    },
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    LatticeZ {
        k: u64,
        window: [Site; 2],
    },
}

pub fn graph_from_json(v: &Value) -> Result<SiteGraph> {
    match from_value(v)? {
        GraphDoc::Explicit { vertices, edges, symmetry } => {
            let edges: Vec<(String, String)> = edges.into_iter().map(|[a, b]| (a, b)).collect();
            SiteGraph::explicit(&vertices, &edges, symmetry.into())
        }
        GraphDoc::Path { n } => SiteGraph::path(n),
        GraphDoc::Cycle { n } => SiteGraph::cycle(n),
        GraphDoc::LatticeZ { k, window: [a, b] } => SiteGraph::lattice_z(k, a, b),
    }
}

pub fn graph_to_json(g: &SiteGraph) -> Value {
    match g.kind() {
        GraphKind::Explicit => {
            let mut edges = Vec::new();
            for (x, y) in g.edges() {
                if x < y {
                    edges.push(json!([g.site_label(x), g.site_label(y)]));
                }
            }
            json!({ "kind": "explicit", "vertices": g.names().unwrap_or_default(), "edges": edges, "symmetry": "lenient" })
        }
        GraphKind::Path(n) => json!({ "kind": "path", "n": n }),
        GraphKind::Cycle(n) => json!({ "kind": "cycle", "n": n }),
        GraphKind::LatticeZ { k, window: (a, b) } => json!({ "kind": "lattice_z", "k": k, "window": [a, b] }),
    }
}

/// `path:<n>`, `cycle:<n>`, `lattice-z:<k>:<a>:<b>`, or a graph file.
pub fn resolve_graph(desc: &str) -> Result<SiteGraph> {
    let parts: Vec<&str> = desc.split(':').collect();
    let num = |s: &str| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad number {s:?} in graph {desc:?}")));
    match parts.as_slice() {
        ["path", n] => SiteGraph::path(usize::try_from(num(n)?).map_err(|_| Error::Parse(desc.into()))?),
        ["cycle", n] => SiteGraph::cycle(usize::try_from(num(n)?).map_err(|_| Error::Parse(desc.into()))?),
        ["lattice-z", k, a, b] => {
            SiteGraph::lattice_z(u64::try_from(num(k)?).map_err(|_| Error::Parse(desc.into()))?, num(a)?, num(b)?)
        }
        _ if Path::new(desc).exists() => graph_from_json(&read_json(desc)?),
        _ => Err(Error::Parse(format!("{desc:?} is neither a graph shorthand nor a file"))),
    }
}

fn site_from_json(graph: Option<&SiteGraph>, v: &Value) -> Result<Site> {
    let label = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(Error::Parse(format!("expected a site, got {other}"))),
    };
    match graph {
        Some(g) => g.parse_site(&label),
        None => label.trim().parse().map_err(|_| Error::Parse(format!("bad site {label:?}"))),
    }
}

fn site_label(graph: Option<&SiteGraph>, x: Site) -> String {
    graph.map_or_else(|| x.to_string(), |g| g.site_label(x))
}

fn support_from_json(graph: Option<&SiteGraph>, v: &Value) -> Result<SiteSet> {
    let items = v.as_array().ok_or_else(|| Error::Parse("support must be an array of sites".into()))?;
    let sites = items.iter().map(|s| site_from_json(graph, s)).collect::<Result<Vec<_>>>()?;
    let set = SiteSet::new(sites.iter().copied());
    if set.len() != sites.len() {
        return Err(Error::Parse("support lists a site twice".into()));
    }
    Ok(set)
}

fn support_to_json(graph: Option<&SiteGraph>, support: &SiteSet) -> Value {
    Value::Array(support.sites().iter().map(|&x| Value::String(site_label(graph, x))).collect())
}

pub fn table_key(states: &StateSpace, tuple: &[StateIdx]) -> String {
    tuple.iter().map(|&s| states.label(s)).collect::<Vec<_>>().join(",")
}

fn parse_table_key(states: &StateSpace, key: &str, len: usize) -> Result<Vec<StateIdx>> {
    if len == 0 {
        return if key.is_empty() { Ok(vec![]) } else { Err(Error::Parse(format!("empty support takes the key \"\", got {key:?}"))) };
    }
    let tuple = key.split(',').map(|l| states.index(l.trim())).collect::<Result<Vec<_>>>()?;
    if tuple.len() != len {
        return Err(Error::Parse(format!("table key {key:?} does not have {len} states")));
    }
    Ok(tuple)
}

/// `{"support": [...], "table": {"s1,s2": "q", ...}}`.
pub fn local_from_json(v: &Value, states: &StateSpace, graph: Option<&SiteGraph>) -> Result<LocalFunction> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("local function must be an object".into()))?;
    if let Some(extra) = obj.keys().find(|k| !matches!(k.as_str(), "support" | "table")) {
        return Err(Error::Parse(format!("unknown field {extra:?} in local function")));
    }
    let support = support_from_json(graph, obj.get("support").ok_or_else(|| Error::Parse("missing support".into()))?)?;
    let table = obj.get("table").and_then(Value::as_object).ok_or_else(|| Error::Parse("missing table object".into()))?;
    let mut entries = BTreeMap::new();
    for (key, value) in table {
        entries.insert(parse_table_key(states, key, support.len())?, scalar_from_json(value)?);
    }
    let zero = rational::zero();
    LocalFunction::from_fn(states.len(), support, |t| entries.get(t).unwrap_or(&zero).clone())
}

/// Nonzero entries only.
pub fn local_to_json(f: &LocalFunction, states: &StateSpace, graph: Option<&SiteGraph>) -> Value {
    let mut table = Map::new();
    for (tuple, value) in f.entries() {
        if !num_traits::Zero::is_zero(value) {
            table.insert(table_key(states, &tuple), scalar_to_json(value));
        }
    }
    json!({ "support": support_to_json(graph, f.support()), "table": table })
}

fn components_from_json(v: &Value, states: &StateSpace, graph: Option<&SiteGraph>, base: StateIdx) -> Result<Vec<ExactSupportFunction>> {
    let items = v.as_array().ok_or_else(|| Error::Parse("components must be an array".into()))?;
    items.iter().map(|c| ExactSupportFunction::new(local_from_json(c, states, graph)?, base)).collect()
}

pub fn expansion_to_json(e: &Expansion, states: &StateSpace, graph: Option<&SiteGraph>, base: StateIdx) -> Value {
    let comps: Vec<Value> = e.values().map(|c| local_to_json(c.as_local(), states, graph)).collect();
    json!({ "base": states.label(base), "components": comps })
}

fn base_from(obj: &Map<String, Value>, states: &StateSpace) -> Result<StateIdx> {
    match obj.get("base") {
        Some(Value::String(b)) => states.index(b),
        Some(other) => Err(Error::Parse(format!("base must be a state label, got {other}"))),
        None => states.base().ok_or_else(|| Error::Parse("no base state given".into())),
    }
}

/// `{"base", "radius", "components": [...]}` for explicit families or
/// `{"base", "radius", "templates": [...]}` for translation-invariant ones.
pub fn uniform_from_json(v: &Value, states: &StateSpace, graph: Arc<SiteGraph>) -> Result<UniformFunction> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("uniform function must be an object".into()))?;
    if let Some(extra) = obj.keys().find(|k| !matches!(k.as_str(), "base" | "radius" | "components" | "templates")) {
        return Err(Error::Parse(format!("unknown field {extra:?} in uniform function")));
    }
    let base = base_from(obj, states)?;
    let radius = obj
        .get("radius")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("radius must be a non-negative integer".into()))?;
    match (obj.get("components"), obj.get("templates")) {
        (Some(c), None) => {
            let comps = components_from_json(c, states, Some(&graph), base)?;
            UniformFunction::explicit(graph, states.len(), base, radius, comps)
        }
        (None, Some(t)) => {
            // template sites are offsets, not vertices of the window
            let comps = components_from_json(t, states, None, base)?;
            UniformFunction::translated(graph, states.len(), base, radius, comps)
        }
        _ => Err(Error::Parse("give exactly one of components or templates".into())),
    }
}

pub fn uniform_to_json(f: &UniformFunction, states: &StateSpace) -> Value {
    let (key, graph) = match f.family() {
        Family::Explicit(_) => ("components", Some(f.graph().as_ref())),
        Family::Translated(_) => ("templates", None),
    };
    let comps: Vec<Value> = f.components().values().map(|c| local_to_json(c.as_local(), states, graph)).collect();
    let mut out = Map::new();
    out.insert("base".into(), json!(states.label(f.base())));
    out.insert("radius".into(), json!(f.radius()));
    out.insert(key.into(), Value::Array(comps));
    Value::Object(out)
}

/// `{"base": "0", "sites": {"2": "1"}}`: unlisted sites hold `base`.
pub fn configuration_from_json(v: &Value, states: &StateSpace, graph: Arc<SiteGraph>) -> Result<Configuration> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("configuration must be an object".into()))?;
    if let Some(extra) = obj.keys().find(|k| !matches!(k.as_str(), "base" | "sites")) {
        return Err(Error::Parse(format!("unknown field {extra:?} in configuration")));
    }
    let base = base_from(obj, states)?;
    let sites = match obj.get("sites") {
        Some(Value::Object(m)) => m
            .iter()
            .map(|(x, s)| {
                let s = s.as_str().ok_or_else(|| Error::Parse(format!("state at site {x} must be a label")))?;
                Ok((graph.parse_site(x)?, states.index(s)?))
            })
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
        Some(other) => return Err(Error::Parse(format!("sites must be an object, got {other}"))),
    };
    Configuration::new(graph, states.len(), base, sites)
}

pub fn configuration_to_json(eta: &Configuration, states: &StateSpace) -> Value {
    let sites: Map<String, Value> =
        eta.assignments().iter().map(|(&x, &s)| (eta.graph().site_label(x), json!(states.label(s)))).collect();
    json!({ "base": states.label(eta.base()), "sites": sites })
}

/// `{"<state>": "<value>", ...}` in state order.
pub fn conserved_to_json(xi: &ConservedQuantity, states: &StateSpace) -> Value {
    Value::Object(xi.values().iter().enumerate().map(|(s, v)| (states.label(s).to_string(), scalar_to_json(v))).collect())
}

pub fn conserved_from_json(v: &Value, states: &StateSpace) -> Result<ConservedQuantity> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("conserved quantity must be an object".into()))?;
    let mut values = vec![rational::zero(); states.len()];
    let mut seen = vec![false; states.len()];
    for (label, value) in obj {
        let s = states.index(label)?;
        values[s] = scalar_from_json(value)?;
        seen[s] = true;
    }
    if let Some(s) = seen.iter().position(|&b| !b) {
        return Err(Error::Parse(format!("no value for state {:?}", states.label(s))));
    }
    Ok(ConservedQuantity::new(values))
}

pub fn transition_to_json(t: &Transition, states: &StateSpace) -> Value {
    let g = t.before().graph();
    let ((a, b), (c, d)) = t.phi_edge();
    let l = |s: StateIdx| states.label(s);
    json!({
        "edge": [g.site_label(t.edge().0), g.site_label(t.edge().1)],
        "from": [l(a), l(b)],
        "to": [l(c), l(d)],
        "after": configuration_to_json(t.after(), states),
    })
}

/// Maps site labels to site labels; every value must also be a key.
pub fn permutation_from_json(v: &Value, graph: &SiteGraph) -> Result<BTreeMap<Site, Site>> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("permutation must be an object".into()))?;
    obj.iter()
        .map(|(x, y)| Ok((graph.parse_site(x)?, site_from_json(Some(graph), y)?)))
        .collect()
}
