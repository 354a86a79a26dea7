//! Why the values need more than `{1, ∞}`: for `δ(q) = X q` the basic update
//! keeps both constant families, so it cannot tell acceptance from rejection.
//! The full construction has exactly one final run, with empty output.

use backdet::backward::{basic_step, Bda};
use backdet::lasso::LassoWord;
use backdet::run::{bda_final_run, cycle_census};
use backdet::value::{Value, ValueFamily};
use backdet::waa::Waa;

fn main() -> backdet::Result<()> {
    let waa = Waa::parse("alphabet: a\nstates: q\ndelta q = X q\n")?;
    let a = waa.letter("a")?;
    for v in [Value::Fin(1), Value::Inf] {
        let f = ValueFamily(vec![v]);
        println!("basic step keeps {}: {}", f.display(&waa), basic_step(&waa, a, &f)? == f);
    }

    let bda = Bda::new(waa.clone())?;
    let w = LassoWord::parse("; a", waa.alphabet())?;
    let census = cycle_census(&bda, &w, 16)?;
    println!("cycles of h: {}, final: {}", census.cycles.len(), census.final_cycles.len());
    let run = bda_final_run(&bda, &w)?;
    println!("final run {} with output {:?}", run.families[0].display(&waa), run.outputs(&bda)[0]);
    Ok(())
}
