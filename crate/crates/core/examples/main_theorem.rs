//! Invariant uniform functions are sums of a conserved quantity: the
//! extraction procedure on true instances and on three obstructions.

use std::sync::Arc;

use latticecalc::cohomology::{extract_conserved, ExtractionResult};
use latticecalc::graph::SiteGraph;
use latticecalc::local::{ExactSupportFunction, SiteSet};
use latticecalc::rational::int;
use latticecalc::state::{ConservedQuantity, Interaction};
use latticecalc::uniform::UniformFunction;

fn report(name: &str, r: &ExtractionResult) {
    match r {
        ExtractionResult::Conserved(xi) => println!("{name}: conserved, ξ = {xi}"),
        ExtractionResult::Violation { kind, witness } => println!("{name}: {} ({witness:?})", kind.code()),
    }
}

fn main() -> latticecalc::error::Result<()> {
    let g = Arc::new(SiteGraph::lattice_z(1, -8, 8)?);
    for id in ["exclusion", "multispecies:2", "two-species-ac"] {
        let phi = Interaction::builtin(id).unwrap();
        let base = phi.states().base_or_first();
        for xi in phi.consv_basis(base) {
            let f = UniformFunction::xi_x(&xi, g.clone(), base)?;
            report(id, &extract_conserved(&f, &phi)?);
        }
    }

    let phi = Interaction::exclusion();
    let single = |x, v| ExactSupportFunction::from_nonbase_values(2, SiteSet::from([x]), 0, move |_| int(v));
    let uneven = UniformFunction::explicit(g.clone(), 2, 0, 0, [single(0, 1)?, single(1, 2)?])?;
    report("η_0 + 2η_1", &extract_conserved(&uneven, &phi)?);

    let pair = ExactSupportFunction::from_nonbase_values(2, SiteSet::from([0, 1]), 0, |_| int(1))?;
    let pairs = UniformFunction::translated(g.clone(), 2, 0, 1, [pair])?;
    report("Σ η_x η_{x+1}", &extract_conserved(&pairs, &phi)?);

    let ac = Interaction::two_species_ac();
    let occupation = ConservedQuantity::from_ints(&[1, 0, 1]);
    let f = UniformFunction::xi_x(&occupation, g, 1)?;
    report("particle number under creation", &extract_conserved(&f, &ac)?);
    Ok(())
}
