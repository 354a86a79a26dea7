//! From a Büchi automaton to a backward deterministic one through the rank
//! formulas, and a comparison of the two languages on small lassos.

use backdet::lasso::LassoWord;
use backdet::nba::{nba_language_member, nba_to_bda, peel_ranks, Nba};
use backdet::run::bda_language_member;

// Infinitely many b.
const NBA: &str = "\
alphabet: a b
states: q0 q1
initial: q0
buchi: q1
trans q0 a q0
trans q0 b q1
trans q1 a q0
trans q1 b q1
";

fn main() -> backdet::Result<()> {
    let nba = Nba::parse(NBA)?;
    let p = nba_to_bda(&nba, None)?;
    let waa = p.bda.waa();
    let sizes: Vec<usize> = waa.sccs().iter().map(|s| s.size()).collect();
    println!("{} states, SCC sizes {sizes:?}, {} families", waa.num_states(), waa.state_space_bound_string());

    let w = LassoWord::parse("a b ; a", nba.alphabet())?;
    let ranks: Vec<String> = peel_ranks(&nba, &w).iter().map(|r| r.map_or("inf".into(), |r| r.to_string())).collect();
    println!("ranks on {}: {}", w.display(nba.alphabet()), ranks.join(" "));

    let mut agree = 0;
    for w in LassoWord::enumerate(nba.alphabet(), 2, 3) {
        assert_eq!(bda_language_member(&p.bda, &w)?, nba_language_member(&nba, &w));
        agree += 1;
    }
    println!("languages agree on {agree} lassos");
    Ok(())
}
