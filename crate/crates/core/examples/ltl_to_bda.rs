//! An LTL formula becomes a very weak automaton and then a backward
//! deterministic one. The final run's outputs say where the formula holds.

use backdet::alphabet::Alphabet;
use backdet::backward::Bda;
use backdet::lasso::LassoWord;
use backdet::ltl::{ltl_eval_lasso, ltl_to_waa, Ltl};
use backdet::run::bda_final_run;

fn main() -> backdet::Result<()> {
    let ab = Alphabet::new(["a", "b"])?;
    let phi = Ltl::parse("G (!a | X b) | F G a", &ab)?;
    let waa = ltl_to_waa(&phi, &ab);
    print!("{}", waa.to_text());

    let bda = Bda::new(waa.clone())?;
    println!("families: {}, Büchi sets: {}", bda.state_space_size().unwrap(), bda.num_buchi_sets());

    for text in ["; a b", "a ; a", "b ; b a a"] {
        let w = LassoWord::parse(text, &ab)?;
        let run = bda_final_run(&bda, &w)?;
        let truth = ltl_eval_lasso(&phi, &w);
        for (p, out) in run.outputs(&bda).iter().enumerate() {
            let root = out.contains(&waa.initial().unwrap()[0]);
            println!("{text:>10} @{p}: {} (semantics {})", root, truth[p]);
        }
    }
    Ok(())
}
