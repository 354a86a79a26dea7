//! Graphviz output for an automaton and for the period map of its backward
//! deterministic automaton on a lasso.

use backdet::backward::Bda;
use backdet::dot::{h_graph_dot, waa_dot};
use backdet::lasso::LassoWord;
use backdet::waa::Waa;

fn main() -> backdet::Result<()> {
    let waa = Waa::parse("alphabet: a b\nstates: p q\ninitial: p\ndelta p = [a] | X q\ndelta q = X p\n")?;
    print!("{}", waa_dot(&waa));
    let w = LassoWord::parse("; a b", waa.alphabet())?;
    print!("{}", h_graph_dot(&Bda::new(waa)?, &w, 64)?);
    Ok(())
}
