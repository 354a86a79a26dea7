//! Graphviz output.

use std::fmt::Write as _;

use crate::backward::Bda;
use crate::error::Result;
use crate::lasso::LassoWord;
use crate::run::cycle_census;
use crate::waa::{Polarity, Waa};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The transition graph with one cluster per SCC. Recurring states are drawn
/// as double circles, initial states in bold.
pub fn waa_dot(waa: &Waa) -> String {
    let mut out = String::from("digraph waa {\n  rankdir=LR;\n");
    let initial = waa.initial().unwrap_or(&[]);
    for scc in waa.sccs() {
        let pol = match scc.polarity {
            Polarity::NonRecurring => "N",
            Polarity::Recurring => "R",
        };
        let _ = writeln!(out, "  subgraph cluster_{} {{", scc.id.0);
        let _ = writeln!(out, "    label=\"S{} {pol}\";", scc.id.0);
        for &q in &scc.states {
            let shape = if waa.is_recurring(q) { "doublecircle" } else { "circle" };
            let style = if initial.contains(&q) { ", style=bold" } else { "" };
            let _ = writeln!(
                out,
                "    {} [shape={shape}{style}, tooltip={}];",
                quote(waa.name(q)),
                quote(&waa.delta(q).display(waa.alphabet(), waa.state_names()).to_string())
            );
        }
        out.push_str("  }\n");
    }
    for (p, q) in waa.edges() {
        let _ = writeln!(out, "  {} -> {};", quote(waa.name(p)), quote(waa.name(q)));
    }
    out.push_str("}\n");
    out
}

/// The functional graph of the period map `h` of the backward deterministic
/// automaton on `w`, over the whole state space. Final cycles are red.
pub fn h_graph_dot(bda: &Bda, w: &LassoWord, cap: u64) -> Result<String> {
    let census = cycle_census(bda, w, cap)?;
    let waa = bda.waa();
    let on_final: Vec<bool> = {
        let mut v = vec![false; census.h.len()];
        for c in &census.final_cycles {
            for &x in c {
                v[x] = true;
            }
        }
        v
    };
    let mut out = String::new();
    let _ = writeln!(out, "digraph h {{");
    let _ = writeln!(out, "  label={};", quote(&format!("h on {}", w.display(waa.alphabet()))));
    for i in 0..census.h.len() {
        let label = bda.family_at(i as u64).display(waa).to_string();
        let style = if on_final[i] { ", color=red, penwidth=2" } else { "" };
        let _ = writeln!(out, "  f{i} [label={}{style}];", quote(&label));
    }
    for (i, &j) in census.h.iter().enumerate() {
        let style = if on_final[i] && on_final[j] { " [color=red, penwidth=2]" } else { "" };
        let _ = writeln!(out, "  f{i} -> f{j}{style};");
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clusters_and_loops() {
        let w = Waa::parse("alphabet: a b\nstates: q0 q1\ninitial: q0\ndelta q0 = [a] | X q0\ndelta q1 = [a]\n").unwrap();
        let dot = waa_dot(&w);
        assert_eq!(dot.matches("subgraph").count(), 2);
        assert!(dot.contains("\"q0\" -> \"q0\";"));
        assert!(dot.contains("style=bold"));

        let w = Waa::parse("alphabet: a\nstates: p q\nrecurring: p q\ndelta p = X q\ndelta q = X p\n").unwrap();
        let dot = waa_dot(&w);
        assert_eq!(dot.matches("subgraph").count(), 1);
        assert_eq!(dot.matches("doublecircle").count(), 2);
    }

    #[test]
    fn final_cycle_is_highlighted() {
        let waa = Waa::parse("alphabet: a b\nstates: q\ndelta q = [a] | X q\n").unwrap();
        let bda = Bda::new(waa).unwrap();
        let w = LassoWord::parse("; a b", bda.waa().alphabet()).unwrap();
        let dot = h_graph_dot(&bda, &w, 16).unwrap();
        assert!(dot.contains("f0 [label=\"q=1\", color=red, penwidth=2];"), "{dot}");
        assert!(dot.contains("f0 -> f0 [color=red"));
        assert!(dot.contains("f1 -> f0;"));
    }
}
