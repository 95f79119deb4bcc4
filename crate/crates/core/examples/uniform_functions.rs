//! Uniform functions: evaluation, differences, change of base and the
//! passage to and from uniformly local systems.

use std::sync::Arc;

use latticecalc::graph::SiteGraph;
use latticecalc::local::{ExactSupportFunction, SiteSet};
use latticecalc::rational::{self, int};
use latticecalc::state::Interaction;
use latticecalc::uniform::{Configuration, UniformFunction};

fn main() -> latticecalc::error::Result<()> {
    let g = Arc::new(SiteGraph::lattice_z(1, 0, 6)?);
    let pair = |x| ExactSupportFunction::from_nonbase_values(2, SiteSet::from([x, x + 1]), 0, |_| int(1));
    let f = UniformFunction::explicit(g.clone(), 2, 0, 1, (0..6).map(pair).collect::<Result<Vec<_>, _>>()?)?;

    let eta = Configuration::new(g.clone(), 2, 0, [(1, 1), (2, 1), (3, 1)])?;
    let hop = eta.with(3, 0).with(4, 1);
    println!("f(η)  = {}", rational::format(&f.evaluate(&eta)?));
    println!("f(η') = {}", rational::format(&f.evaluate(&hop)?));
    println!("f(η') − f(η) = {}", rational::format(&f.difference(&eta, &hop)?));

    // the same function seen from the all-occupied background
    let g1 = f.rebase(1)?;
    println!("at base 1: {} components, f(⋆) = {}", g1.components().len(), rational::format(&g1.constant_term()));
    assert_eq!(g1.rebase(0)?, f);

    let system = f.to_uniformly_local()?;
    let back = UniformFunction::sum_of_uniformly_local(&system, 2, g.clone(), 2, 0)?;
    assert_eq!(back.components(), f.components());
    println!("uniformly local system over {} sites sums back to f", system.len());

    // ξ_X on the unbounded lattice is one translated template
    let xi = &Interaction::exclusion().consv_basis(0)[0];
    let xi_x = UniformFunction::xi_x(xi, Arc::new(SiteGraph::lattice_z(1, -20, 20)?), 0)?;
    let far = Configuration::new(xi_x.graph().clone(), 2, 0, [(-20, 1), (20, 1)])?;
    println!("ξ_X counts {} particles", rational::format(&xi_x.evaluate(&far)?));
    Ok(())
}
