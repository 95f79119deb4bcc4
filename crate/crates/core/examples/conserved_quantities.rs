//! Conserved quantities and exchangeability of the built-in interactions.
//!
//! ```text
//! cargo run --example conserved_quantities
//! ```

use latticecalc::rational;
use latticecalc::state::Interaction;

fn main() {
    for id in ["exclusion", "multispecies:2", "multispecies:3", "two-species-ac", "quastel2"] {
        let phi = Interaction::builtin(id).expect("built-in id");
        let states = phi.states();
        let base = states.base_or_first();
        let basis = phi.consv_basis(base);
        println!("{id}: |S| = {}, |φ| = {} directed edges", states.len(), phi.edges().len());
        println!("  pair components: {}", phi.pair_components().count());
        println!("  exchangeable:    {}", phi.is_exchangeable());
        println!("  dim Consv:       {}", basis.len());
        for xi in &basis {
            let values: Vec<String> = (0..states.len())
                .map(|s| format!("ξ({})={}", states.label(s), rational::format(xi.value(s))))
                .collect();
            println!("    {}", values.join(" "));
        }
    }

    // the shortest route that lets a particle and an antiparticle trade places
    let ac = Interaction::two_species_ac();
    let s = ac.states();
    let (plus, minus) = (s.index("1").unwrap(), s.index("-1").unwrap());
    let path = ac.pair_exchange_path(plus, minus).unwrap();
    for ((a, b), (c, d)) in path {
        println!("({},{}) -> ({},{})", s.label(a), s.label(b), s.label(c), s.label(d));
    }

    let err = Interaction::quastel2().pair_exchange_path(1, 2).unwrap_err();
    println!("quastel2: {err}");
}
