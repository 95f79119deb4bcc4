//! Exact-support expansion of a local function and its reconstruction.

use latticecalc::local::{assemble, LocalFunction, SiteSet};
use latticecalc::rational::{self, frac, int};

fn main() -> latticecalc::error::Result<()> {
    // f(η) = η_0 η_1 + 1/2 η_2 + 3 on {0,1}^{0,1,2}
    let support = SiteSet::from([0, 1, 2]);
    let f = LocalFunction::from_fn(2, support.clone(), |t| {
        int((t[0] * t[1]) as i64) + frac(t[2] as i64, 2) + int(3)
    })?;

    for base in [0, 1] {
        println!("base state {base}:");
        let e = f.expand(base)?;
        for (lambda, c) in &e {
            let entries: Vec<String> = c
                .nonbase_entries()
                .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
                .map(|(t, v)| format!("{t:?}→{}", rational::format(v)))
                .collect();
            println!("  f*_{lambda} = {{{}}}", entries.join(", "));
        }
        assert_eq!(assemble(2, &e, &support)?, f);
        assert!(e.values().all(|c| c.as_local().is_exact_support(base)));
    }
    println!("both expansions reassemble to f");
    Ok(())
}
