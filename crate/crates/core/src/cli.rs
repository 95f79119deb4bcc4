//! Batch front end. Every subcommand prints one JSON report:
//! `{"command", "version", "inputs", "output", "verification"}`.
//!
//! Exit status is 0 on success, 2 on a domain violation and 1 on I/O or
//! parse errors; failures print `{"error": {"code", "message"}}` to stderr.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::caps::Caps;
use crate::cohomology::{self, ExtractionResult, KernelSetup, Witness};
use crate::error::{Error, Result};
use crate::formats::{self, scalar_to_json};
use crate::graph::{Site, SiteGraph};
use crate::local::assemble;
use crate::state::{Interaction, StateIdx, StateSpace};
use crate::transition::{self, Edge, Transition};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "latticecalc", version, about = "Exact computations on interactions, uniform functions and configuration spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format; JSON is the stable contract.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Table,
}

#[derive(clap::Args, Debug, Clone)]
struct Phi {
    /// Built-in id (exclusion, multispecies:<k>, two-species-ac, quastel2) or an interaction file.
    #[arg(long)]
    interaction: String,
}

#[derive(clap::Args, Debug, Clone)]
struct OnGraph {
    #[command(flatten)]
    phi: Phi,
    /// path:<n>, cycle:<n>, lattice-z:<k>:<a>:<b>, or a graph file.
    #[arg(long)]
    graph: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Basis of the conserved quantities, normalized at the base state.
    Consv {
        #[command(flatten)]
        phi: Phi,
        #[arg(long)]
        base: Option<String>,
    },
    /// Whether every pair (s, t) connects to (t, s).
    Exchangeable {
        #[command(flatten)]
        phi: Phi,
    },
    /// Exact-support expansion of a local function file.
    Expand {
        #[command(flatten)]
        phi: Phi,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        base: Option<String>,
        /// Resolves vertex names used in the file.
        #[arg(long)]
        graph: Option<String>,
    },
    /// Re-express a uniform function at another base state.
    Rebase {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        base: String,
    },
    /// f(to) − f(from) for a uniform function.
    Diff {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Transitions out of a configuration.
    Neighbors {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        config: PathBuf,
        /// Directed edges to fire on, e.g. `0:1,1:0`; all edges by default.
        #[arg(long)]
        edges: Option<String>,
    },
    /// Connected component of a configuration.
    Component {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        edges: Option<String>,
        #[arg(long)]
        max_states: Option<usize>,
    },
    /// Transitions realizing a swap of two sites, or a permutation file.
    SwapPath {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, required_unless_present = "perm", requires = "y", allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, requires = "x", allow_hyphen_values = true)]
        y: Option<String>,
        /// JSON object mapping each site to its image.
        #[arg(long, conflicts_with_all = ["x", "y"])]
        perm: Option<PathBuf>,
    },
    /// Checks a uniform function on transitions out of probe configurations.
    Invariant {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        function: PathBuf,
        /// JSON array of configurations; defaults to all with at most `--probe-bound` non-base sites.
        #[arg(long)]
        probes: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        probe_bound: usize,
    },
    /// Finite H⁰ and H¹ of the configuration graph.
    H0 {
        #[command(flatten)]
        on: OnGraph,
    },
    /// Recovers ξ with f = ξ_X, or reports the first obstruction.
    Extract {
        #[command(flatten)]
        on: OnGraph,
        #[arg(long)]
        function: PathBuf,
        /// Also check invariance out of all configurations with this many non-base sites.
        #[arg(long)]
        probe_bound: Option<usize>,
    },
    /// Invariant uniform functions of radius R on a lattice window.
    Kernel {
        #[command(flatten)]
        phi: Phi,
        #[arg(long)]
        radius: u64,
        /// `a:b`
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        probe_bound: Option<usize>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Records every input with its digest while loading it.
#[derive(Default)]
struct Inputs {
    entries: Map<String, Value>,
}

impl Inputs {
    fn file(&mut self, name: &str, path: &PathBuf) -> Result<Value> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.entries.insert(name.into(), json!({ "path": path.display().to_string(), "sha256": sha256_hex(&bytes) }));
        serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn named(&mut self, name: &str, desc: &str, canonical: &Value) {
        let digest = sha256_hex(canonical.to_string().as_bytes());
        self.entries.insert(name.into(), json!({ "value": desc, "sha256": digest }));
    }

    fn value(&mut self, name: &str, v: Value) {
        self.entries.insert(name.into(), v);
    }

    fn interaction(&mut self, desc: &str) -> Result<Interaction> {
        if Interaction::builtin(desc).is_some() {
            let phi = formats::resolve_interaction(desc)?;
            self.named("interaction", desc, &formats::interaction_to_json(&phi));
            Ok(phi)
        } else {
            let v = self.file("interaction", &PathBuf::from(desc))?;
            formats::interaction_from_json(&v)
        }
    }

    fn graph(&mut self, desc: &str) -> Result<Arc<SiteGraph>> {
        let g = if std::path::Path::new(desc).is_file() {
            formats::graph_from_json(&self.file("graph", &PathBuf::from(desc))?)?
        } else {
            let g = formats::resolve_graph(desc)?;
            self.named("graph", desc, &formats::graph_to_json(&g));
            g
        };
        Ok(Arc::new(g))
    }
}

struct Report {
    command: &'static str,
    inputs: Inputs,
    output: Value,
    verification: Vec<(String, bool)>,
}

impl Report {
    fn to_json(&self) -> Value {
        let checks: Vec<Value> = self.verification.iter().map(|(n, ok)| json!({ "name": n, "pass": ok })).collect();
        json!({
            "command": self.command,
            "version": VERSION,
            "inputs": Value::Object(self.inputs.entries.clone()),
            "output": self.output,
            "verification": checks,
        })
    }
}

fn state_of(states: &StateSpace, label: Option<&str>) -> Result<StateIdx> {
    match label {
        Some(l) => states.index(l),
        None => Ok(states.base_or_first()),
    }
}

fn parse_edges(desc: &str, graph: &SiteGraph) -> Result<Vec<Edge>> {
    desc.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (x, y) = item.split_once(':').ok_or_else(|| Error::Parse(format!("edge {item:?} is not x:y")))?;
            Ok((graph.parse_site(x.trim())?, graph.parse_site(y.trim())?))
        })
        .collect()
}

fn edge_window(desc: Option<&str>, graph: &SiteGraph) -> Result<Vec<Edge>> {
    match desc {
        Some(s) => parse_edges(s, graph),
        None => Ok(transition::full_window(graph)),
    }
}

fn parse_window(desc: &str) -> Result<(Site, Site)> {
    let (a, b) = desc.split_once(':').ok_or_else(|| Error::Parse(format!("window {desc:?} is not a:b")))?;
    let n = |s: &str| s.trim().parse::<Site>().map_err(|_| Error::Parse(format!("bad window bound {s:?}")));
    Ok((n(a)?, n(b)?))
}

fn transitions_json(ts: &[Transition], states: &StateSpace) -> Value {
    Value::Array(ts.iter().map(|t| formats::transition_to_json(t, states)).collect())
}

fn pair_json(states: &StateSpace, (a, b): (StateIdx, StateIdx)) -> Value {
    json!([states.label(a), states.label(b)])
}

fn execute(cli: &Cli) -> Result<Report> {
    let mut inputs = Inputs::default();
    let mut verification = Vec::new();
    let command: &'static str;
    let output = match &cli.command {
        Command::Consv { phi, base } => {
            command = "consv";
            let phi = inputs.interaction(&phi.interaction)?;
            let states = phi.states();
            let base = state_of(states, base.as_deref())?;
            let basis = phi.consv_basis(base);
            verification.push(("conserved_on_every_phi_edge".into(), basis.iter().all(|xi| xi.is_conserved(&phi))));
            verification.push(("normalized_at_base".into(), basis.iter().all(|xi| xi.is_normalized(base))));
            let basis: Vec<Value> = basis.iter().map(|xi| formats::conserved_to_json(xi, states)).collect();
            json!({ "base": states.label(base), "dimension": basis.len(), "basis": basis })
        }
        Command::Exchangeable { phi } => {
            command = "exchangeable";
            let phi = inputs.interaction(&phi.interaction)?;
            let states = phi.states();
            let comps = phi.pair_components();
            let exchangeable = phi.is_exchangeable();
            if exchangeable {
                let n = states.len();
                let ok = (0..n).all(|a| (0..n).all(|b| phi.pair_exchange_path(a, b).is_ok_and(|p| replays(&p, (a, b)))));
                verification.push(("exchange_paths_replay".into(), ok));
            }
            let groups: Vec<Value> =
                comps.groups().iter().map(|g| Value::Array(g.iter().map(|&p| pair_json(states, p)).collect())).collect();
            json!({ "exchangeable": exchangeable, "pair_components": comps.count(), "components": groups })
        }
        Command::Expand { phi, function, base, graph } => {
            command = "expand";
            let phi = inputs.interaction(&phi.interaction)?;
            let states = phi.states();
            let graph = graph.as_deref().map(|g| inputs.graph(g)).transpose()?;
            let base = state_of(states, base.as_deref())?;
            let f = formats::local_from_json(&inputs.file("function", function)?, states, graph.as_deref())?;
            Caps::current().check_table(states.len(), f.support().len())?;
            let e = f.expand(base)?;
            verification.push(("reconstruction".into(), assemble(states.len(), &e, f.support())? == f));
            verification.push(("exact_support".into(), e.values().all(|c| c.as_local().is_exact_support(base))));
            formats::expansion_to_json(&e, states, graph.as_deref(), base)
        }
        Command::Rebase { on, function, base } => {
            command = "rebase";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let f = formats::uniform_from_json(&inputs.file("function", function)?, states, graph)?;
            let g = f.rebase(states.index(base)?)?;
            verification.push(("roundtrip".into(), g.rebase(f.base())? == f));
            formats::uniform_to_json(&g, states)
        }
        Command::Diff { on, function, from, to } => {
            command = "diff";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let f = formats::uniform_from_json(&inputs.file("function", function)?, states, graph.clone())?;
            let a = formats::configuration_from_json(&inputs.file("from", from)?, states, graph.clone())?;
            let b = formats::configuration_from_json(&inputs.file("to", to)?, states, graph)?;
            let d = f.difference(&a, &b)?;
            if let (Ok(fa), Ok(fb)) = (f.evaluate(&a), f.evaluate(&b)) {
                verification.push(("matches_evaluation".into(), fb - fa == d));
            }
            let is_transition = transition::neighbors(&phi, &a, &transition::full_window(a.graph()))?.iter().any(|t| *t.after() == b);
            json!({ "difference": scalar_to_json(&d), "is_transition": is_transition })
        }
        Command::Neighbors { on, config, edges } => {
            command = "neighbors";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let eta = formats::configuration_from_json(&inputs.file("config", config)?, states, graph.clone())?;
            let window = edge_window(edges.as_deref(), &graph)?;
            if let Some(e) = edges {
                inputs.value("edges", json!(e));
            }
            let ts = transition::neighbors(&phi, &eta, &window)?;
            json!({ "count": ts.len(), "transitions": transitions_json(&ts, states) })
        }
        Command::Component { on, config, edges, max_states } => {
            command = "component";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let eta = formats::configuration_from_json(&inputs.file("config", config)?, states, graph.clone())?;
            let window = edge_window(edges.as_deref(), &graph)?;
            let limit = max_states.unwrap_or(Caps::current().max_bfs_states);
            inputs.value("max_states", json!(limit));
            let out = transition::component_bfs(&phi, &eta, &window, limit)?;
            let configs: Vec<Value> = out.configurations().iter().map(|c| formats::configuration_to_json(c, states)).collect();
            verification.push(("contains_start".into(), out.configurations().contains(&eta)));
            json!({ "complete": out.is_complete(), "size": configs.len(), "configurations": configs })
        }
        Command::SwapPath { on, config, x, y, perm } => {
            command = "swap-path";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let eta = formats::configuration_from_json(&inputs.file("config", config)?, states, graph.clone())?;
            let (path, target) = match (x, y, perm) {
                (Some(x), Some(y), None) => {
                    let (x, y) = (graph.parse_site(x)?, graph.parse_site(y)?);
                    inputs.value("sites", json!([graph.site_label(x), graph.site_label(y)]));
                    (transition::swap_path(&phi, &eta, x, y)?, eta.swapped(x, y))
                }
                (None, None, Some(p)) => {
                    let sigma = formats::permutation_from_json(&inputs.file("perm", p)?, &graph)?;
                    (transition::permutation_path(&phi, &eta, &sigma)?, eta.permuted(&sigma))
                }
                _ => return Err(Error::Parse("give --x and --y, or --perm".into())),
            };
            let end = transition::replay(&eta, &path)?;
            verification.push(("replay_reaches_target".into(), end == target));
            json!({
                "length": path.len(),
                "transitions": transitions_json(&path, states),
                "end": formats::configuration_to_json(&end, states),
            })
        }
        Command::Invariant { on, function, probes, probe_bound } => {
            command = "invariant";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let f = formats::uniform_from_json(&inputs.file("function", function)?, states, graph.clone())?;
            let probes = match probes {
                Some(p) => {
                    let v = inputs.file("probes", p)?;
                    let items = v.as_array().ok_or_else(|| Error::Parse("probes must be an array".into()))?;
                    items.iter().map(|c| formats::configuration_from_json(c, states, graph.clone())).collect::<Result<Vec<_>>>()?
                }
                None => {
                    inputs.value("probe_bound", json!(probe_bound));
                    cohomology::probe_configurations(&graph, states.len(), f.base(), *probe_bound)?
                }
            };
            let r = transition::is_invariant(&f, &phi, &transition::full_window(&graph), &probes)?;
            let witness = match &r.witness {
                Some((t, d)) => json!({ "transition": formats::transition_to_json(t, states), "before": formats::configuration_to_json(t.before(), states), "difference": scalar_to_json(d) }),
                None => Value::Null,
            };
            json!({
                "invariant": r.invariant,
                "probes_checked": r.probes_checked,
                "transitions_checked": r.transitions_checked,
                "witness": witness,
                "caveat": "only transitions out of the probe configurations were checked",
            })
        }
        Command::H0 { on } => {
            command = "h0";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let graph = inputs.graph(&on.graph)?;
            let s = cohomology::h0_h1_finite(&phi, &graph)?;
            verification.push(("h0_components_equals_kernel_rank".into(), s.cross_check()));
            json!({
                "dim_c0": s.dim_c0, "dim_c1": s.dim_c1, "rank_d": s.rank_d,
                "h0": s.h0, "h1": s.h1, "components": s.components,
            })
        }
        Command::Extract { on, function, probe_bound } => {
            command = "extract";
            let phi = inputs.interaction(&on.phi.interaction)?;
            let states = phi.states();
            let graph = inputs.graph(&on.graph)?;
            let f = formats::uniform_from_json(&inputs.file("function", function)?, states, graph.clone())?;
            let result = match probe_bound {
                Some(p) => {
                    inputs.value("probe_bound", json!(p));
                    let probes = cohomology::probe_configurations(&graph, states.len(), f.base(), *p)?;
                    cohomology::extract_conserved_probed(&f, &phi, &transition::full_window(&graph), &probes)?
                }
                None => cohomology::extract_conserved(&f, &phi)?,
            };
            match &result {
                ExtractionResult::Conserved(xi) => {
                    verification.push(("f_equals_xi_X".into(), cohomology::equals_xi_x(&f, xi)?));
                    verification.push(("xi_conserved".into(), xi.is_conserved(&phi)));
                    json!({ "outcome": "conserved", "xi": formats::conserved_to_json(xi, states) })
                }
                ExtractionResult::Violation { kind, witness } => {
                    json!({ "outcome": "violation", "kind": kind.code(), "witness": witness_json(witness, &graph, states) })
                }
            }
        }
        Command::Kernel { phi, radius, window, k, base, probe_bound } => {
            command = "kernel";
            let phi = inputs.interaction(&phi.interaction)?;
            let states = phi.states();
            let base = state_of(states, base.as_deref())?;
            let (a, b) = parse_window(window)?;
            let mut setup = KernelSetup::new(*radius, *k, (a, b), base);
            if let Some(p) = probe_bound {
                setup = setup.with_probe_bound(*p);
            }
            inputs.value("parameters", json!({ "R": radius, "k": k, "window": [a, b], "base": states.label(base), "probe_bound": setup.probe_bound }));
            let r = cohomology::invariance_kernel(&phi, &setup)?;
            if let Some(f) = r.basis.first() {
                let probes = cohomology::probe_configurations(f.graph(), states.len(), base, setup.probe_bound)?;
                let ts = cohomology::constraint_transitions(&phi, &setup, &probes)?;
                let ok = r.basis.iter().all(|f| ts.iter().all(|t| f.difference(t.before(), t.after()).is_ok_and(|d| num_traits::Zero::is_zero(&d))));
                verification.push(("basis_invariant_on_constraints".into(), ok));
            }
            let basis: Vec<Value> = r.basis.iter().map(|f| formats::uniform_to_json(f, states)).collect();
            json!({
                "window": [a, b], "R": radius, "k": k, "base": states.label(base),
                "probe_bound": setup.probe_bound, "unknowns": r.unknowns, "constraints": r.constraints,
                "dimension": r.dimension, "basis": basis,
            })
        }
    };
    Ok(Report { command, inputs, output, verification })
}

fn replays(path: &[crate::state::PhiEdge], (a, b): (StateIdx, StateIdx)) -> bool {
    let mut cur = (a, b);
    for &(from, to) in path {
        if from != cur {
            return false;
        }
        cur = to;
    }
    cur == (b, a)
}

fn witness_json(w: &Witness, graph: &SiteGraph, states: &StateSpace) -> Value {
    match w {
        Witness::Sites(x, y) => json!({ "sites": [graph.site_label(*x), graph.site_label(*y)] }),
        Witness::Support(l) => json!({ "support": l.sites().iter().map(|&x| graph.site_label(x)).collect::<Vec<_>>() }),
        Witness::PhiEdge((p, q)) => json!({ "phi_edge": [pair_json(states, *p), pair_json(states, *q)] }),
        Witness::Transition(t, d) => json!({ "transition": formats::transition_to_json(t, states), "difference": scalar_to_json(d) }),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(prefix, k), x, out)),
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            a.iter().enumerate().for_each(|(i, x)| flatten(&join(prefix, &i.to_string()), x, out))
        }
        Value::String(s) => out.push((prefix.into(), s.clone())),
        other => out.push((prefix.into(), other.to_string())),
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.into()
    } else {
        format!("{prefix}.{key}")
    }
}

fn render_table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:width$}  {v}\n")).collect()
}

fn error_line(e: &Error) -> String {
    json!({ "error": { "code": e.code(), "message": e.to_string() } }).to_string() + "\n"
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: error_line(&Error::Parse(text.trim().to_string())) },
            };
        }
    };
    let failure = |e: Error| Outcome { code: if e.is_input_error() { 1 } else { 2 }, stdout: String::new(), stderr: error_line(&e) };
    let report = match execute(&cli) {
        Ok(r) => r.to_json(),
        Err(e) => return failure(e),
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Table => render_table(&report),
    };
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
            Err(e) => failure(Error::Io(format!("{}: {e}", path.display()))),
        },
        None => Outcome { code: 0, stdout: text, stderr: String::new() },
    }
}
