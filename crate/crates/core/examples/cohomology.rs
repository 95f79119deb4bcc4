//! Finite cohomology of configuration graphs and the windowed invariance
//! kernel, whose dimension settles at the number of conserved quantities.

use latticecalc::cohomology::{h0_h1_finite, invariance_kernel, KernelSetup};
use latticecalc::graph::SiteGraph;
use latticecalc::state::Interaction;

fn main() -> latticecalc::error::Result<()> {
    println!("{:<16} {:<9} {:>5} {:>5} {:>5} {:>4} {:>4}", "interaction", "graph", "C0", "C1", "rk∂", "h0", "h1");
    for (id, graph, name) in [
        ("exclusion", SiteGraph::path(2)?, "path(2)"),
        ("exclusion", SiteGraph::path(4)?, "path(4)"),
        ("exclusion", SiteGraph::cycle(4)?, "cycle(4)"),
        ("two-species-ac", SiteGraph::path(2)?, "path(2)"),
        ("two-species-ac", SiteGraph::path(3)?, "path(3)"),
        ("multispecies:2", SiteGraph::path(3)?, "path(3)"),
    ] {
        let s = h0_h1_finite(&Interaction::builtin(id).unwrap(), &graph)?;
        assert!(s.cross_check());
        println!("{id:<16} {name:<9} {:>5} {:>5} {:>5} {:>4} {:>4}", s.dim_c0, s.dim_c1, s.rank_d, s.h0, s.h1);
    }

    println!();
    for id in ["exclusion", "multispecies:2", "two-species-ac", "quastel2"] {
        let phi = Interaction::builtin(id).unwrap();
        let base = phi.states().base_or_first();
        let dims: Vec<String> = [8, 10, 12]
            .iter()
            .map(|&len| {
                let r = invariance_kernel(&phi, &KernelSetup::new(1, 1, (0, len - 1), base))?;
                Ok(format!("L={len}: {}", r.dimension))
            })
            .collect::<latticecalc::error::Result<_>>()?;
        println!("{id:<16} dim Consv = {}   kernel {}", phi.consv_basis(base).len(), dims.join(", "));
    }
    Ok(())
}
