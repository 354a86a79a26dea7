//! The final run of a backward deterministic automaton on a lasso: value
//! families, critical values and fired Büchi sets at each position.

use backdet::backward::Bda;
use backdet::lasso::LassoWord;
use backdet::run::{bda_final_run, waa_accepted_sets};
use backdet::waa::Waa;

const WAA: &str = "\
alphabet: a b
states: p q r
recurring: r
delta p = [a] | X q
delta q = [b] & X p
delta r = [b] & X r | X p
";

fn main() -> backdet::Result<()> {
    let waa = Waa::parse(WAA)?;
    let bda = Bda::new(waa.clone())?;
    let w = LassoWord::parse("b ; b a b", waa.alphabet())?;
    let run = bda_final_run(&bda, &w)?;
    let oracle = waa_accepted_sets(&waa, &w);
    let names = |s: &std::collections::BTreeSet<_>| s.iter().map(|q| waa.name(*q)).collect::<Vec<_>>().join(" ");
    for (p, step) in run.steps.iter().enumerate() {
        let fired: Vec<String> = step.fired.iter().map(|b| b.to_string()).collect();
        println!(
            "{p}: {}  critical {:?}  fired [{}]  output {{{}}}  oracle {{{}}}",
            run.families[p].display(&waa),
            step.critical,
            fired.join(" "),
            names(&bda.output(&run.families[p])),
            names(&oracle[p])
        );
    }
    Ok(())
}
