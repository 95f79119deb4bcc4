//! Acceptance criteria, one line each. Every comparison is exact equality.
//!
//! Runs without the libtest harness so the report is always printed:
//! `cargo test --test acceptance`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use latticecalc::cohomology::{self, equals_xi_x, extract_conserved, ExtractionResult, KernelSetup, ViolationKind};
use latticecalc::graph::{Site, SiteGraph};
use latticecalc::local::{assemble, ExactSupportFunction, Expansion, LocalFunction, SiteSet};
use latticecalc::rational::{frac, int, Scalar};
use latticecalc::state::{ConservedQuantity, Interaction, StateIdx};
use latticecalc::transition::{self, full_window};
use latticecalc::uniform::{Configuration, UniformFunction};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const EXCHANGEABLE: [&str; 5] = ["exclusion", "multispecies:1", "multispecies:2", "multispecies:3", "two-species-ac"];

fn builtin(id: &str) -> Interaction {
    Interaction::builtin(id).expect("built-in interaction")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_scalar(r: &mut ChaCha8Rng) -> Scalar {
    if r.gen_bool(0.2) {
        return Scalar::zero();
    }
    frac(r.gen_range(-9..=9), r.gen_range(1..=4))
}

fn random_sites(r: &mut ChaCha8Rng, pool: &[Site], max: usize) -> SiteSet {
    let n = r.gen_range(0..=max.min(pool.len()));
    SiteSet::new(pool.choose_multiple(r, n).copied())
}

fn criterion_1() -> Check {
    let expected: [(&str, usize); 5] =
        [("exclusion", 1), ("multispecies:1", 1), ("multispecies:2", 2), ("multispecies:3", 3), ("two-species-ac", 1)];
    for (id, dim) in expected {
        let start = Instant::now();
        let phi = builtin(id);
        let base = phi.states().base().unwrap();
        let basis = phi.consv_basis(base);
        ensure!(basis.len() == dim, "{id}: dimension {} != {dim}", basis.len());
        ensure!(start.elapsed() < Duration::from_secs(1), "{id}: took {:?}", start.elapsed());
    }
    // the named quantities themselves
    let ex = builtin("exclusion").consv_basis(0);
    ensure!(ex[0] == ConservedQuantity::from_ints(&[0, 1]), "exclusion: ξ(s) = s expected, got {}", ex[0]);
    for kappa in 1..=3usize {
        let basis = builtin(&format!("multispecies:{kappa}")).consv_basis(0);
        for (i, xi) in basis.iter().enumerate() {
            let standard: Vec<i64> = (0..=kappa).map(|j| i64::from(j == i + 1)).collect();
            ensure!(*xi == ConservedQuantity::from_ints(&standard), "multispecies:{kappa}: not the standard basis");
        }
    }
    let ac = builtin("two-species-ac");
    ensure!(ac.consv_basis(1)[0] == ConservedQuantity::from_ints(&[-1, 0, 1]), "two-species-ac: ξ(j) = j expected");
    Ok(())
}

fn criterion_2() -> Check {
    let start = Instant::now();
    for id in EXCHANGEABLE {
        ensure!(builtin(id).is_exchangeable(), "{id} should be exchangeable");
    }
    ensure!(!builtin("quastel2").is_exchangeable(), "quastel2 should not be exchangeable");
    ensure!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    Ok(())
}

/// `f*_Λ(η) = Σ_{Λ' ⊆ Λ} (−1)^{|Λ \ Λ'|} f(η|_{Λ'})`, straight from the sum.
fn moebius_component(f: &LocalFunction, lambda: &SiteSet, base: StateIdx) -> LocalFunction {
    let support = f.support().clone();
    LocalFunction::from_fn(f.num_states(), lambda.clone(), |t| {
        let mut total = Scalar::zero();
        for mask in 0u32..(1 << lambda.len()) {
            let mut full = vec![base; support.len()];
            for (i, &x) in lambda.sites().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    full[support.position(x).unwrap()] = t[i];
                }
            }
            let sign = if (lambda.len() as u32 - mask.count_ones()).is_multiple_of(2) { 1 } else { -1 };
            total += f.value(&full) * int(sign);
        }
        total
    })
    .unwrap()
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut r = rng(3);
    let pool: Vec<Site> = (-3..=3).collect();
    for trial in 0..200 {
        let states = r.gen_range(1..=3);
        let support = random_sites(&mut r, &pool, 3);
        let f = LocalFunction::from_fn(states, support.clone(), |_| random_scalar(&mut r)).unwrap();
        for base in 0..states {
            let e = f.expand(base).map_err(|e| e.to_string())?;
            ensure!(assemble(states, &e, &support).unwrap() == f, "trial {trial}: reconstruction failed at base {base}");
            for (lambda, c) in &e {
                ensure!(c.as_local().is_exact_support(base), "trial {trial}: {lambda} not exact support");
                ensure!(*c.as_local() == moebius_component(&f, lambda, base), "trial {trial}: {lambda} differs from oracle");
            }
            for sub in support.subsets() {
                let oracle = moebius_component(&f, &sub, base);
                ensure!(
                    e.get(&sub).map_or(oracle.is_zero(), |c| *c.as_local() == oracle),
                    "trial {trial}: missing component {sub}"
                );
                let parts: Expansion = e.iter().filter(|(l, _)| l.is_subset(&sub)).map(|(l, c)| (l.clone(), c.clone())).collect();
                ensure!(assemble(states, &parts, &sub).unwrap() == f.restrict(&sub, base), "trial {trial}: ι identity fails on {sub}");
            }
        }
    }
    ensure!(start.elapsed() < Duration::from_secs(30), "took {:?}", start.elapsed());
    Ok(())
}

fn random_component(r: &mut ChaCha8Rng, states: usize, support: SiteSet, base: StateIdx) -> ExactSupportFunction {
    ExactSupportFunction::from_nonbase_values(states, support, base, |_| random_scalar(r)).unwrap()
}

fn random_uniform(r: &mut ChaCha8Rng, graph: &Arc<SiteGraph>, states: usize, base: StateIdx, translated: bool) -> UniformFunction {
    let radius = r.gen_range(0..=2u64);
    let n = r.gen_range(0..=4);
    if translated {
        let templates: Vec<_> = (0..n)
            .map(|_| {
                let width = r.gen_range(0..=radius as Site);
                let extra: Vec<Site> = (1..=width).filter(|_| r.gen_bool(0.5)).collect();
                let support = SiteSet::new(std::iter::once(0).chain(extra).chain((width > 0).then_some(width)));
                random_component(r, states, support, base)
            })
            .collect();
        UniformFunction::translated(graph.clone(), states, base, radius, templates).unwrap()
    } else {
        let vertices = graph.vertices().to_vec();
        let mut comps = Vec::new();
        for _ in 0..n {
            let x = *vertices.choose(r).unwrap();
            let near: Vec<Site> = graph.bfs_distances(x).into_iter().filter(|&(_, d)| d <= radius).map(|(y, _)| y).collect();
            let mut support = random_sites(r, &near, 3);
            if graph.diameter_of(support.sites()).unwrap() > radius {
                support = SiteSet::from([x]);
            }
            comps.push(random_component(r, states, support, base));
        }
        if r.gen_bool(0.3) {
            comps.push(ExactSupportFunction::new(LocalFunction::constant(states, random_scalar(r)), base).unwrap());
        }
        UniformFunction::explicit(graph.clone(), states, base, radius, comps).unwrap()
    }
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut r = rng(4);
    let graphs = [
        Arc::new(SiteGraph::lattice_z(1, 0, 6).unwrap()),
        Arc::new(SiteGraph::lattice_z(2, -4, 4).unwrap()),
        Arc::new(SiteGraph::cycle(5).unwrap()),
    ];
    let mut nontrivial = 0;
    for trial in 0..100 {
        let graph = graphs[trial % graphs.len()].clone();
        let states = r.gen_range(2..=3);
        let (base, other) = (r.gen_range(0..states), r.gen_range(0..states));
        let translated = graph.is_window_of_infinite() && r.gen_bool(0.5);
        let f = random_uniform(&mut r, &graph, states, base, translated);
        let there = f.rebase(other).map_err(|e| e.to_string())?;
        nontrivial += usize::from(base != other && !f.is_zero());
        let back = there.rebase(base).map_err(|e| e.to_string())?;
        ensure!(back == f, "trial {trial}: rebase {base} → {other} → {base} changed the function");
    }
    ensure!(nontrivial >= 30, "only {nontrivial} trials changed base on a nonzero function");
    ensure!(start.elapsed() < Duration::from_secs(30), "took {:?}", start.elapsed());
    Ok(())
}

fn random_configuration(r: &mut ChaCha8Rng, graph: &Arc<SiteGraph>, states: usize, base: StateIdx, max: usize) -> Configuration {
    let sites = random_sites(r, graph.vertices(), max);
    let assignments: Vec<(Site, StateIdx)> = sites.sites().iter().map(|&x| (x, r.gen_range(0..states))).collect();
    Configuration::new(graph.clone(), states, base, assignments).unwrap()
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut r = rng(5);
    let graph = Arc::new(SiteGraph::lattice_z(1, -8, 8).unwrap());
    let window = full_window(&graph);
    let mut moved = 0;
    for id in EXCHANGEABLE {
        let phi = builtin(id);
        let states = phi.states().len();
        let base = phi.states().base().unwrap();
        let xis: Vec<UniformFunction> =
            phi.consv_basis(base).iter().map(|xi| UniformFunction::xi_x(xi, graph.clone(), base).unwrap()).collect();
        for trial in 0..100 {
            let f = random_uniform(&mut r, &graph, states, base, trial % 2 == 0);
            let start_config = random_configuration(&mut r, &graph, states, base, 6);
            let mut cur = start_config.clone();
            let mut telescoped = Scalar::zero();
            for _ in 0..r.gen_range(0..=20) {
                let ts = transition::neighbors(&phi, &cur, &window).unwrap();
                let Some(t) = ts.choose(&mut r) else { break };
                telescoped += f.difference(t.before(), t.after()).unwrap();
                for xi in &xis {
                    ensure!(xi.difference(t.before(), t.after()).unwrap().is_zero(), "{id}: ξ_X changed along a transition");
                }
                cur = t.after().clone();
            }
            moved += usize::from(!f.is_zero() && cur != start_config);
            let direct = f.difference(&start_config, &cur).unwrap();
            ensure!(telescoped == direct, "{id} trial {trial}: telescoped sum differs from direct difference");
            let evaluated = f.evaluate(&cur).unwrap() - f.evaluate(&start_config).unwrap();
            ensure!(direct == evaluated, "{id} trial {trial}: difference disagrees with evaluation");
        }
    }
    ensure!(moved >= 200, "only {moved} of 500 walks moved under a nonzero function");
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let mut r = rng(6);
    let graph = Arc::new(SiteGraph::lattice_z(1, -6, 6).unwrap());
    let phis: Vec<Interaction> = EXCHANGEABLE.iter().map(|id| builtin(id)).collect();
    let mut changed = 0;
    for trial in 0..500 {
        let phi = &phis[trial % phis.len()];
        let states = phi.states().len();
        let base = phi.states().base().unwrap();
        let eta = random_configuration(&mut r, &graph, states, base, 13);
        let size = r.gen_range(2..=4);
        let domain = SiteSet::new(graph.vertices().choose_multiple(&mut r, size).copied());
        let mut image = domain.sites().to_vec();
        image.shuffle(&mut r);
        let sigma: BTreeMap<Site, Site> = domain.sites().iter().copied().zip(image).collect();
        let path = transition::permutation_path(phi, &eta, &sigma).map_err(|e| e.to_string())?;
        let end = transition::replay(&eta, &path).map_err(|e| e.to_string())?;
        changed += usize::from(end != eta);
        // η^σ_x = η_{σ(x)} on the domain, unchanged elsewhere
        for &x in graph.vertices() {
            let want = eta.state_at(*sigma.get(&x).unwrap_or(&x));
            ensure!(end.state_at(x) == want, "trial {trial}: site {x} holds {} not {want}", end.state_at(x));
        }
        for t in &path {
            ensure!(phi.contains(&t.phi_edge()), "trial {trial}: step is not a φ-edge");
        }
    }
    ensure!(changed >= 150, "only {changed} of 500 permutations moved anything");
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

/// Components of `(S^X, Φ_E)` by BFS over explicit state vectors.
fn component_oracle(phi: &Interaction, graph: &SiteGraph) -> usize {
    let n = phi.states().len();
    let len = graph.len();
    let total = n.pow(len as u32);
    let decode = |mut i: usize| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        v
    };
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for i in 0..total {
        let start = decode(i);
        if !seen.insert(start.clone()) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            for (x, y) in graph.edges() {
                let (x, y) = (x as usize, y as usize);
                for &((a, b), (c, d)) in phi.edges() {
                    if (cur[x], cur[y]) == (a, b) {
                        let mut next = cur.clone();
                        next[x] = c;
                        next[y] = d;
                        if seen.insert(next.clone()) {
                            queue.push_back(next);
                        }
                    }
                }
            }
        }
    }
    count
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let exclusion = builtin("exclusion");
    for n in 2..=4 {
        let g = SiteGraph::path(n).unwrap();
        let s = cohomology::h0_h1_finite(&exclusion, &g).map_err(|e| e.to_string())?;
        ensure!(s.h0 == s.components, "path({n}): kernel-rank h0 {} != component count {}", s.h0, s.components);
        let oracle = component_oracle(&exclusion, &g);
        ensure!(oracle == n + 1, "path({n}): oracle found {oracle} components");
        ensure!(s.h0 == n + 1, "path({n}): h0 = {}", s.h0);
    }
    let ac = builtin("two-species-ac");
    let g = SiteGraph::path(2).unwrap();
    let s = cohomology::h0_h1_finite(&ac, &g).map_err(|e| e.to_string())?;
    ensure!(s.h0 == s.components, "two-species-ac: {} != {}", s.h0, s.components);
    ensure!(s.h0 == component_oracle(&ac, &g) && s.h0 == 5, "two-species-ac: h0 = {}", s.h0);
    ensure!(start.elapsed() < Duration::from_secs(60), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut r = rng(8);
    let graphs = [Arc::new(SiteGraph::lattice_z(1, -5, 5).unwrap()), Arc::new(SiteGraph::cycle(6).unwrap())];
    for id in EXCHANGEABLE {
        let phi = builtin(id);
        let base = phi.states().base().unwrap();
        for xi in phi.consv_basis(base) {
            for graph in &graphs {
                let f = UniformFunction::xi_x(&xi, graph.clone(), base).unwrap();
                let got = extract_conserved(&f, &phi).map_err(|e| e.to_string())?;
                ensure!(got.conserved() == Some(&xi), "{id}: basis element not recovered");
                ensure!(equals_xi_x(&f, &xi).unwrap(), "{id}: f != ξ_X");
                ensure!(phi.edges().iter().all(|&(p, q)| xi.pair_sum(p) == xi.pair_sum(q)), "{id}: ξ not conserved");
                // f(η) = Σ_x ξ(η_x) on random configurations
                for _ in 0..10 {
                    let eta = random_configuration(&mut r, graph, phi.states().len(), base, 6);
                    let direct: Scalar = graph.vertices().iter().map(|&x| xi.value(eta.state_at(x)).clone()).sum();
                    ensure!(f.evaluate(&eta).unwrap() == direct, "{id}: ξ_X evaluates wrongly");
                }
            }
        }
    }

    let lattice = graphs[0].clone();
    let exclusion = builtin("exclusion");
    let single = |x: Site, v: i64| ExactSupportFunction::from_nonbase_values(2, SiteSet::from([x]), 0, move |_| int(v)).unwrap();
    let kind = |f: &UniformFunction, phi: &Interaction| extract_conserved(f, phi).unwrap().violation();
    for (x, y, a, b) in [(0, 1, 1, 2), (-3, 2, 5, -1), (4, -4, 1, 0)] {
        let f = UniformFunction::explicit(lattice.clone(), 2, 0, 0, [single(x, a), single(y, b)]).unwrap();
        ensure!(kind(&f, &exclusion) == Some(ViolationKind::UnequalSingleSite), "unequal single-site not detected");
    }
    for width in 1..=3 {
        let pair = ExactSupportFunction::from_nonbase_values(2, SiteSet::from([0, width]), 0, |_| int(1)).unwrap();
        let f = UniformFunction::translated(lattice.clone(), 2, 0, width as u64, [single(0, 1), pair]).unwrap();
        ensure!(kind(&f, &exclusion) == Some(ViolationKind::NonzeroMultiSite), "two-site term not detected (width {width})");
    }
    let ac = builtin("two-species-ac");
    for (minus, plus) in [(1, 1), (2, -1), (0, 3)] {
        let xi = ConservedQuantity::from_ints(&[minus, 0, plus]);
        let f = UniformFunction::xi_x(&xi, lattice.clone(), 1).unwrap();
        ensure!(kind(&f, &ac) == Some(ViolationKind::NotConservedPair), "ξ = ({minus},0,{plus}) accepted");
        ensure!(matches!(extract_conserved(&f, &ac).unwrap(), ExtractionResult::Violation { .. }), "no violation");
    }
    ensure!(start.elapsed() < Duration::from_secs(10), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_9() -> Check {
    let start = Instant::now();
    // expected dimensions per window length 8, 10, 12
    let pinned: [(&str, [usize; 3]); 2] = [("exclusion", [1, 1, 1]), ("multispecies:2", [2, 2, 2])];
    for (id, expected) in pinned {
        let phi = builtin(id);
        let consv = phi.consv_basis(0).len();
        let mut dims = Vec::new();
        for len in [8, 10, 12] {
            let report = cohomology::invariance_kernel(&phi, &KernelSetup::new(1, 1, (0, len - 1), 0)).map_err(|e| e.to_string())?;
            dims.push(report.dimension);
        }
        ensure!(dims == expected, "{id}: dimensions {dims:?}, pinned {expected:?}");
        ensure!(dims.windows(2).all(|w| w[0] >= w[1]), "{id}: dimensions increase: {dims:?}");
        ensure!(dims[2] == consv, "{id}: length-12 dimension {} != dim Consv {consv}", dims[2]);
    }
    ensure!(start.elapsed() < Duration::from_secs(300), "took {:?}", start.elapsed());
    Ok(())
}

fn criterion_10() -> Check {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.display().to_string()
    };
    let xi = write("xi.json", r#"{"base":"0","radius":0,"templates":[{"support":[0],"table":{"1":"1"}}]}"#);
    let pairs = write("pairs.json", r#"{"base":"0","radius":1,"templates":[{"support":[0,1],"table":{"1,1":"1"}}]}"#);
    let a = write("a.json", r#"{"base":"0","sites":{"0":"1","3":"1"}}"#);
    let b = write("b.json", r#"{"base":"0","sites":{"1":"1","3":"1"}}"#);
    let local = write("local.json", r#"{"support":[0,1],"table":{"1,1":"2","1,0":"1/2","0,0":"3"}}"#);
    let perm = write("perm.json", r#"{"0":"3","3":"-2","-2":"0"}"#);
    let g = "lattice-z:1:-5:5";
    let commands: Vec<Vec<&str>> = vec![
        vec!["consv", "--interaction", "multispecies:2", "--base", "0"],
        vec!["exchangeable", "--interaction", "quastel2"],
        vec!["expand", "--interaction", "exclusion", "--function", &local],
        vec!["rebase", "--interaction", "exclusion", "--graph", g, "--function", &pairs, "--base", "1"],
        vec!["diff", "--interaction", "exclusion", "--graph", g, "--function", &xi, "--from", &a, "--to", &b],
        vec!["neighbors", "--interaction", "exclusion", "--graph", g, "--config", &a],
        vec!["component", "--interaction", "exclusion", "--graph", "lattice-z:1:0:5", "--config", &a],
        vec!["swap-path", "--interaction", "two-species-ac", "--graph", g, "--config", &a, "--x", "0", "--y", "4"],
        vec!["swap-path", "--interaction", "exclusion", "--graph", g, "--config", &a, "--perm", &perm],
        vec!["invariant", "--interaction", "exclusion", "--graph", g, "--function", &pairs],
        vec!["h0", "--interaction", "two-species-ac", "--graph", "path:2"],
        vec!["extract", "--interaction", "exclusion", "--graph", g, "--function", &xi],
        vec!["kernel", "--interaction", "exclusion", "--radius", "1", "--window", "0:7"],
        vec!["h0", "--interaction", "exclusion", "--graph", "path:3", "--format", "table"],
    ];
    let mut outputs = BTreeMap::new();
    for args in &commands {
        let argv: Vec<&str> = std::iter::once("latticecalc").chain(args.iter().copied()).collect();
        let first = latticecalc::cli::run(&argv);
        let second = latticecalc::cli::run(&argv);
        ensure!(first.code == 0, "{}: exit {} ({})", args[0], first.code, first.stderr.trim());
        ensure!(first == second, "{}: reports differ between runs", args[0]);
        outputs.insert(args.join(" "), first.stdout);
    }
    let json = |key: &str| -> serde_json::Value { serde_json::from_str(&outputs[key]).unwrap() };
    let consv = json(&commands[0].join(" "));
    ensure!(consv["output"]["dimension"] == 2, "consv multispecies:2 dimension is not 2");
    let exch = json(&commands[1].join(" "));
    ensure!(exch["output"]["exchangeable"] == false, "quastel2 reported exchangeable");
    let diff = json(&commands[4].join(" "));
    ensure!(diff["output"]["difference"] == "0" && diff["output"]["is_transition"] == true, "diff along a hop is not 0");
    ensure!(start.elapsed() < Duration::from_secs(30), "took {:?}", start.elapsed());
    Ok(())
}

type Criterion = fn() -> Check;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("conserved-quantity dimensions", criterion_1),
        ("exchangeability", criterion_2),
        ("expansion uniqueness and reconstruction", criterion_3),
        ("base-change roundtrip", criterion_4),
        ("potential property", criterion_5),
        ("swap and permutation realization", criterion_6),
        ("finite H0 cross-check", criterion_7),
        ("conserved-quantity extraction", criterion_8),
        ("invariance kernel stabilization", criterion_9),
        ("CLI determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
