//! A vectorial fixed point formula, its automaton, and its direct evaluation.

use backdet::alphabet::Alphabet;
use backdet::backward::Bda;
use backdet::lasso::LassoWord;
use backdet::nutl::{nutl_eval_lasso, nutl_to_waa_optimized, parse_nutl};
use backdet::run::bda_final_run;

fn main() -> backdet::Result<()> {
    let ab = Alphabet::new(["a", "b"])?;
    // "a at every even position", as a two-variable greatest fixed point.
    let t = parse_nutl("nu_0 (E, D).(a & O D; O E)\n", &ab)?;
    let aut = nutl_to_waa_optimized(&t)?;
    print!("{}", aut.waa.to_text());
    let bda = Bda::new(aut.waa.clone())?;

    for text in ["; a b", "; a", "b ; a", "a ; b a"] {
        let w = LassoWord::parse(text, &ab)?;
        let truth = nutl_eval_lasso(&t, &w)?;
        let outs = bda_final_run(&bda, &w)?.outputs(&bda);
        let via_bda: Vec<bool> = outs.iter().map(|o| o.contains(&aut.root_states[0])).collect();
        let direct: Vec<bool> = truth.iter().map(|s| s.contains(&0)).collect();
        println!("{text:>8}: {direct:?} {via_bda:?}");
    }
    Ok(())
}
