//! Exploring the configuration space: neighbours, components, and the
//! transition paths that realize swaps and permutations.

use std::collections::BTreeMap;
use std::sync::Arc;

use latticecalc::graph::SiteGraph;
use latticecalc::state::Interaction;
use latticecalc::transition::{self, full_window};
use latticecalc::uniform::Configuration;

fn show(eta: &Configuration) -> String {
    let (a, b) = eta.graph().window().unwrap_or((0, eta.graph().len() as i64 - 1));
    (a..=b).map(|x| eta.state_at(x).to_string()).collect()
}

fn main() -> latticecalc::error::Result<()> {
    let phi = Interaction::exclusion();
    let g = Arc::new(SiteGraph::lattice_z(1, 0, 7)?);
    let eta = Configuration::new(g.clone(), 2, 0, [(1, 1), (2, 1), (5, 1)])?;

    println!("η = {}", show(&eta));
    for t in transition::neighbors(&phi, &eta, &full_window(&g))? {
        println!("  {:?}: {}", t.edge(), show(t.after()));
    }

    let comp = transition::component_bfs(&phi, &eta, &full_window(&g), 1_000)?;
    println!("component size {} (C(8,3) = 56)", comp.configurations().len());

    let path = transition::swap_path(&phi, &eta, 1, 6)?;
    println!("swap 1 ↔ 6 in {} steps:", path.len());
    for t in &path {
        println!("  {}", show(t.after()));
    }

    let sigma: BTreeMap<i64, i64> = [(0, 7), (7, 5), (5, 0)].into();
    let end = transition::replay(&eta, &transition::permutation_path(&phi, &eta, &sigma)?)?;
    println!("σ-permuted: {} (expected {})", show(&end), show(&eta.permuted(&sigma)));

    // creation and annihilation change the particle count but not the charge
    let ac = Interaction::two_species_ac();
    let star = Configuration::star(g.clone(), 3, 1);
    for t in transition::neighbors(&ac, &star, &[(3, 4)])? {
        println!("⋆ → {:?} at {:?}", t.after().assignments(), t.edge());
    }
    Ok(())
}
