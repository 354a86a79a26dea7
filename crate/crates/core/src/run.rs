//! Runs on lasso words: the weak-automaton acceptance oracle and the unique
//! final run of the backward deterministic automaton.
//!
//! On a lasso `u v^ω` a run of the backward deterministic automaton is fixed
//! by its families at the period boundaries `|u| + k|v|`, which satisfy
//! `x_k = h(x_{k+1})` for the composition `h` of the transition function over
//! one period. An infinite backward chain of a function on a finite set only
//! visits elements that lie on cycles of `h`, and it runs around one such cycle,
//! so every run on the loop is a rotation of an `h`-cycle. A run is final iff
//! every Büchi set fires somewhere on its cycle. Enumerating the cycles of `h`
//! therefore finds all final runs.
//!
//! The default search exploits that the update of an SCC only reads that SCC
//! and the SCCs below it: SCCs are settled successors-first, and for each one
//! the cycles of `h` restricted to its own coordinates are enumerated
//! exhaustively with the lower coordinates already fixed. [`SearchMode::Exhaustive`]
//! decomposes the functional graph of `h` on the full state space instead.

use std::collections::BTreeSet;
use std::fmt;

use crate::backward::{Bda, SccFiring, TransitionRecord};
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::value::{Value, ValueFamily};
use crate::waa::{Polarity, StateId, Waa};

/// Acceptance table `[position][state]` of the weak automaton on the lasso.
///
/// SCCs are processed successors-first; non-recurring SCCs are solved as
/// least and recurring SCCs as greatest fixed points over (position, state).
pub fn waa_acceptance(waa: &Waa, w: &LassoWord) -> Vec<Vec<bool>> {
    let positions = w.len();
    let mut table = vec![vec![false; waa.num_states()]; positions];
    for scc in waa.sccs() {
        let init = scc.polarity == Polarity::Recurring;
        for row in table.iter_mut() {
            for q in &scc.states {
                row[q.0] = init;
            }
        }
        loop {
            let mut changed = false;
            for p in 0..positions {
                let letter = w.letter(p);
                let next = w.succ(p);
                for &q in &scc.states {
                    let v = waa.delta(q).holds(letter, &|r: StateId| table[next][r.0]);
                    if v != table[p][q.0] {
                        table[p][q.0] = v;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    table
}

/// Whether the suffix at quotient position `pos` is accepted from `q`.
pub fn waa_accepts_lasso(waa: &Waa, q: StateId, w: &LassoWord, pos: usize) -> bool {
    waa_acceptance(waa, w)[pos][q.0]
}

/// `{q : suffix at pos accepted from q}` for every quotient position.
pub fn waa_accepted_sets(waa: &Waa, w: &LassoWord) -> Vec<BTreeSet<StateId>> {
    waa_acceptance(waa, w)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, b)| *b)
                .map(|(i, _)| StateId(i))
                .collect()
        })
        .collect()
}

/// The final run of a backward deterministic automaton on a lasso.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackwardRun {
    /// Family at every quotient position.
    pub families: Vec<ValueFamily>,
    /// `steps[p]` maps the family at `succ(p)` to the family at `p`.
    pub steps: Vec<TransitionRecord>,
    /// Length of the run's cycle on the loop, a multiple of the period length.
    pub cycle_length: usize,
}

impl BackwardRun {
    pub fn outputs(&self, bda: &Bda) -> Vec<BTreeSet<StateId>> {
        self.families.iter().map(|f| bda.output(f)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// SCC by SCC, exhaustive over each SCC's own coordinates.
    Stratified { cap: u64 },
    /// Full functional graph of `h` over the whole state space.
    Exhaustive { cap: u64 },
}

impl Default for SearchMode {
    fn default() -> Self {
        SearchMode::Stratified { cap: 1 << 20 }
    }
}

/// The unique final run, found by stratified cycle search.
pub fn bda_final_run(bda: &Bda, w: &LassoWord) -> Result<BackwardRun> {
    bda_final_run_with(bda, w, SearchMode::default())
}

pub fn bda_final_run_with(bda: &Bda, w: &LassoWord, mode: SearchMode) -> Result<BackwardRun> {
    let loop_start = match mode {
        SearchMode::Stratified { cap } => stratified_loop_start(bda, w, cap)?,
        SearchMode::Exhaustive { cap } => {
            let census = cycle_census(bda, w, cap)?;
            match census.final_cycles.as_slice() {
                [cycle] if cycle.len() == 1 => bda.family_at(cycle[0] as u64),
                [] => {
                    return Err(Error::Determinism(format!(
                        "no final run: none of the {} cycles of h satisfies all Büchi sets",
                        census.cycles.len()
                    )))
                }
                [cycle] => {
                    return Err(Error::Determinism(format!(
                        "the final cycle of h has length {}, so shifting by one period gives a second final run",
                        cycle.len()
                    )))
                }
                cycles => {
                    return Err(Error::Determinism(format!(
                        "multiple final runs: final cycles of lengths {:?}",
                        cycles.iter().map(Vec::len).collect::<Vec<_>>()
                    )))
                }
            }
        }
    };
    Ok(assemble_run(bda, w, loop_start))
}

fn assemble_run(bda: &Bda, w: &LassoWord, loop_start: ValueFamily) -> BackwardRun {
    let n = w.len();
    let mut families = vec![loop_start.clone(); n];
    let mut steps: Vec<Option<TransitionRecord>> = vec![None; n];
    let mut next = loop_start;
    for p in (0..n).rev() {
        let rec = bda.step(w.letter(p), &next);
        families[p] = rec.result.clone();
        next = rec.result.clone();
        steps[p] = Some(rec);
    }
    debug_assert_eq!(families[w.loop_start()], steps[n - 1].as_ref().unwrap().source);
    BackwardRun {
        families,
        steps: steps.into_iter().map(Option::unwrap).collect(),
        cycle_length: w.period().len(),
    }
}

/// Accumulates which levels of one SCC fired along a sequence of transitions.
#[derive(Debug, Clone)]
struct Coverage {
    criticals: Vec<bool>,
    min_max_finite: u32,
}

impl Coverage {
    fn new(size: usize) -> Self {
        Coverage {
            criticals: vec![false; size + 2],
            min_max_finite: u32::MAX,
        }
    }

    fn add(&mut self, f: SccFiring) {
        for level in 1..self.criticals.len() {
            if f.fires_by_critical(level as u32) {
                self.criticals[level] = true;
            }
        }
        self.min_max_finite = self.min_max_finite.min(f.max_finite);
    }

    fn merge(&mut self, other: &Coverage) {
        for (a, b) in self.criticals.iter_mut().zip(&other.criticals) {
            *a |= b;
        }
        self.min_max_finite = self.min_max_finite.min(other.min_max_finite);
    }

    fn complete(&self, size: usize) -> bool {
        (1..=size).all(|level| self.criticals[level] || level as u32 > self.min_max_finite)
    }
}

/// Cycles of a functional graph `f` on `0..f.len()`, each listed from its
/// smallest element in traversal order.
fn functional_cycles(f: &[usize]) -> Vec<Vec<usize>> {
    let n = f.len();
    // 0 = unvisited, 1 = on current path, 2 = done
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = f[x];
        }
        if state[x] == 1 {
            let at = path.iter().position(|&p| p == x).unwrap();
            let mut cycle = path[at..].to_vec();
            let min_at = cycle.iter().enumerate().min_by_key(|(_, v)| **v).unwrap().0;
            cycle.rotate_left(min_at);
            cycles.push(cycle);
        }
        for p in path {
            state[p] = 2;
        }
    }
    cycles
}

fn scc_domain(size: usize) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for _ in 0..size {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=size as u32)
                    .map(Value::Fin)
                    .chain(std::iter::once(Value::Inf))
                    .map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
            })
            .collect();
    }
    out
}

fn stratified_loop_start(bda: &Bda, w: &LassoWord, cap: u64) -> Result<ValueFamily> {
    let waa = bda.waa();
    let period = w.period();
    let len = period.len();
    let mut loop_fams = vec![vec![Value::Inf; waa.num_states()]; len];
    let mut scratch = vec![Value::Inf; waa.num_states()];
    for scc in waa.sccs() {
        let size = scc.size();
        let domain_size = (size as u64 + 1).checked_pow(size as u32);
        if domain_size.is_none_or(|d| d > cap) {
            return Err(Error::CapExceeded {
                bound: format!("({}+1)^{}", size, size),
                cap,
            });
        }
        let domain = scc_domain(size);
        let index = |vals: &[Value]| -> usize {
            vals.iter().fold(0usize, |acc, v| {
                let d = match v {
                    Value::Fin(k) => *k as usize - 1,
                    Value::Inf => size,
                };
                acc * (size + 1) + d
            })
        };
        debug_assert!(domain.iter().enumerate().all(|(i, d)| index(d) == i));
        let mut h = Vec::with_capacity(domain.len());
        let mut cover = Vec::with_capacity(domain.len());
        for x in &domain {
            let mut cur: Vec<Value> = x.clone();
            let mut cov = Coverage::new(size);
            for j in (0..len).rev() {
                let next = &mut loop_fams[(j + 1) % len];
                for (q, v) in scc.states.iter().zip(&cur) {
                    next[q.0] = *v;
                }
                let firing = bda.step_scc(scc.id, period[j], next, &mut scratch);
                cov.add(firing);
                cur = scc.states.iter().map(|q| scratch[q.0]).collect();
            }
            h.push(index(&cur));
            cover.push(cov);
        }
        let cycles = functional_cycles(&h);
        let finals: Vec<&Vec<usize>> = cycles
            .iter()
            .filter(|c| {
                let mut total = Coverage::new(size);
                for &x in c.iter() {
                    total.merge(&cover[x]);
                }
                total.complete(size)
            })
            .collect();
        let chosen = match finals.as_slice() {
            [c] if c.len() == 1 => c[0],
            [] => {
                return Err(Error::Determinism(format!(
                    "no final run on {} for SCC S{} {{{}}}: {} candidate cycles, none fires every Büchi set",
                    w.display(waa.alphabet()),
                    scc.id.0,
                    names(waa, &scc.states),
                    cycles.len()
                )))
            }
            cs => {
                return Err(Error::Determinism(format!(
                    "multiple final runs on {} for SCC S{} {{{}}}: final cycles of lengths {:?}",
                    w.display(waa.alphabet()),
                    scc.id.0,
                    names(waa, &scc.states),
                    cs.iter().map(|c| c.len()).collect::<Vec<_>>()
                )))
            }
        };
        // Write the fixed point into every loop position.
        let mut cur = domain[chosen].clone();
        for (q, v) in scc.states.iter().zip(&cur) {
            loop_fams[0][q.0] = *v;
        }
        for j in (0..len).rev() {
            let next = &mut loop_fams[(j + 1) % len];
            for (q, v) in scc.states.iter().zip(&cur) {
                next[q.0] = *v;
            }
            bda.step_scc(scc.id, period[j], next, &mut scratch);
            cur = scc.states.iter().map(|q| scratch[q.0]).collect();
            for (q, v) in scc.states.iter().zip(&cur) {
                loop_fams[j][q.0] = *v;
            }
        }
    }
    Ok(ValueFamily(loop_fams.swap_remove(0)))
}

fn names(waa: &Waa, states: &[StateId]) -> String {
    states.iter().map(|q| waa.name(*q)).collect::<Vec<_>>().join(", ")
}

/// The functional graph of `h` on the full state space and its final cycles.
#[derive(Debug, Clone)]
pub struct CycleCensus {
    /// `h[i]` is the index of `h(family_at(i))`.
    pub h: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
    /// Cycles on which every Büchi set fires.
    pub final_cycles: Vec<Vec<usize>>,
}

/// Enumerates every family (up to `cap`) and decomposes `h` completely.
pub fn cycle_census(bda: &Bda, w: &LassoWord, cap: u64) -> Result<CycleCensus> {
    let size = bda.check_cap(cap)? as usize;
    let waa = bda.waa();
    let sccs = waa.sccs();
    let period = w.period();
    let mut h = Vec::with_capacity(size);
    let mut cover: Vec<Vec<Coverage>> = Vec::with_capacity(size);
    let mut out = vec![Value::Inf; waa.num_states()];
    for i in 0..size as u64 {
        let mut cur = bda.family_at(i).0;
        let mut cov: Vec<Coverage> = sccs.iter().map(|s| Coverage::new(s.size())).collect();
        for &letter in period.iter().rev() {
            let firing = bda.step_raw(letter, &cur, &mut out);
            for (c, f) in cov.iter_mut().zip(firing) {
                c.add(f);
            }
            std::mem::swap(&mut cur, &mut out);
        }
        h.push(bda.index_of(&cur) as usize);
        cover.push(cov);
    }
    let cycles = functional_cycles(&h);
    let final_cycles = cycles
        .iter()
        .filter(|c| {
            sccs.iter().all(|s| {
                let mut total = Coverage::new(s.size());
                for &x in c.iter() {
                    total.merge(&cover[x][s.id.0]);
                }
                total.complete(s.size())
            })
        })
        .cloned()
        .collect();
    Ok(CycleCensus {
        h,
        cycles,
        final_cycles,
    })
}

/// A disagreement between the final run's outputs and the acceptance oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub lasso: String,
    pub position: usize,
    pub oracle: Vec<String>,
    pub output: Vec<String>,
    pub family: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "on `{}` at position {}: oracle {{{}}} but output {{{}}} (family {})",
            self.lasso,
            self.position,
            self.oracle.join(" "),
            self.output.join(" "),
            self.family
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("mismatch {0}")]
    Mismatch(Box<Mismatch>),
    #[error(transparent)]
    Construction(#[from] Error),
}

/// Checks `λ(r(i)) = {q : suffix at i accepted from q}` at every quotient position.
pub fn cross_validate(waa: &Waa, w: &LassoWord) -> Result<(), ValidationError> {
    let bda = Bda::new(waa.clone())?;
    cross_validate_bda(&bda, w, SearchMode::default())
}

pub fn cross_validate_bda(bda: &Bda, w: &LassoWord, mode: SearchMode) -> Result<(), ValidationError> {
    let waa = bda.waa();
    let run = bda_final_run_with(bda, w, mode)?;
    let oracle = waa_accepted_sets(waa, w);
    for (p, (fam, expected)) in run.families.iter().zip(&oracle).enumerate() {
        let got = bda.output(fam);
        if &got != expected {
            let names = |s: &BTreeSet<StateId>| s.iter().map(|q| waa.name(*q).to_string()).collect();
            return Err(ValidationError::Mismatch(Box::new(Mismatch {
                lasso: w.display(waa.alphabet()).to_string(),
                position: p,
                oracle: names(expected),
                output: names(&got),
                family: fam.display(waa).to_string(),
            })));
        }
    }
    Ok(())
}

/// Whether the word is accepted from some initial state of the weak automaton.
pub fn waa_language_member(waa: &Waa, w: &LassoWord) -> Result<bool> {
    let init = waa.initial().ok_or(Error::MissingInitial)?;
    let table = waa_acceptance(waa, w);
    Ok(init.iter().any(|q| table[0][q.0]))
}

/// `I ∩ λ(r(0)) ≠ ∅` for the unique final run `r`.
pub fn bda_language_member(bda: &Bda, w: &LassoWord) -> Result<bool> {
    let init = bda.waa().initial().ok_or(Error::MissingInitial)?;
    let run = bda_final_run(bda, w)?;
    let out = bda.output(&run.families[0]);
    Ok(init.iter().any(|q| out.contains(q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::LetterId;
    use crate::backward::CriticalRule;

    fn waa(text: &str) -> Waa {
        Waa::parse(text).unwrap()
    }

    fn lasso(text: &str, waa: &Waa) -> LassoWord {
        LassoWord::parse(text, waa.alphabet()).unwrap()
    }

    const F_A: &str = "alphabet: a b\nstates: q\ninitial: q\ndelta q = [a] | X q\n";

    #[test]
    fn oracle_examples() {
        let fa = waa(F_A);
        assert!(waa_accepts_lasso(&fa, StateId(0), &lasso("b ; b a", &fa), 0));
        assert!(!waa_accepts_lasso(&fa, StateId(0), &lasso("; b", &fa), 0));
        let n = waa("alphabet: a b\nstates: q\ndelta q = X q\n");
        let r = waa("alphabet: a b\nstates: q\nrecurring: q\ndelta q = X q\n");
        for w in LassoWord::enumerate(n.alphabet(), 1, 2) {
            for p in 0..w.len() {
                assert!(!waa_accepts_lasso(&n, StateId(0), &w, p));
                assert!(waa_accepts_lasso(&r, StateId(0), &w, p));
            }
        }
    }

    #[test]
    fn final_run_examples() {
        let fa = waa(F_A);
        let bda = Bda::new(fa.clone()).unwrap();
        let run = bda_final_run(&bda, &lasso("; b", &fa)).unwrap();
        assert_eq!(run.families, vec![ValueFamily(vec![Value::Inf])]);
        assert!(run.outputs(&bda)[0].is_empty());

        let run = bda_final_run(&bda, &lasso("; a b", &fa)).unwrap();
        assert_eq!(run.families, vec![ValueFamily(vec![Value::Fin(1)]); 2]);
        assert_eq!(run.steps[0].letter, LetterId(0));
        assert_eq!(run.steps[0].critical, vec![1]);
        assert!(run.outputs(&bda).iter().all(|o| o.contains(&StateId(0))));

        let n = waa("alphabet: a b\nstates: q\ndelta q = X q\n");
        let bda = Bda::new(n.clone()).unwrap();
        let census = cycle_census(&bda, &lasso("; a", &n), 16).unwrap();
        assert_eq!(census.cycles.len(), 2);
        assert_eq!(census.final_cycles.len(), 1);
        let run = bda_final_run(&bda, &lasso("; a", &n)).unwrap();
        assert_eq!(run.families, vec![ValueFamily(vec![Value::Inf])]);
    }

    #[test]
    fn language_membership() {
        let fa = waa(F_A);
        let bda = Bda::new(fa.clone()).unwrap();
        assert!(waa_language_member(&fa, &lasso("; a", &fa)).unwrap());
        assert!(!waa_language_member(&fa, &lasso("; b", &fa)).unwrap());
        assert!(bda_language_member(&bda, &lasso("; a", &fa)).unwrap());
        assert!(!bda_language_member(&bda, &lasso("; b", &fa)).unwrap());
        let no_init = waa("alphabet: a\nstates: q\ndelta q = [a]\n");
        assert_eq!(waa_language_member(&no_init, &lasso("; a", &no_init)), Err(Error::MissingInitial));
    }

    #[test]
    fn exact_critical_rule_loses_the_final_run() {
        let w = waa("alphabet: a b\nstates: q0 q1\ndelta q0 = [a] | X q1\ndelta q1 = X q0\n");
        let l = lasso("; a", &w);
        let exact = Bda::new(w.clone()).unwrap().with_rule(CriticalRule::Exact);
        assert!(matches!(bda_final_run(&exact, &l), Err(Error::Determinism(_))));
        let census = cycle_census(&exact, &l, 16).unwrap();
        assert_eq!(census.cycles.len(), 1);
        assert!(census.final_cycles.is_empty());

        let bda = Bda::new(w).unwrap();
        let run = bda_final_run(&bda, &l).unwrap();
        assert_eq!(run.families[0], ValueFamily(vec![Value::Fin(1), Value::Fin(2)]));
        assert_eq!(run.outputs(&bda)[0].len(), 2);
    }

    #[test]
    fn functional_cycles_of_small_maps() {
        assert_eq!(functional_cycles(&[1, 0, 2, 2]), vec![vec![0, 1], vec![2]]);
        assert_eq!(functional_cycles(&[1, 2, 1]), vec![vec![1, 2]]);
    }

    #[test]
    fn two_state_scc_cross_validates() {
        let w = waa("alphabet: a b\nstates: q0 q1\ndelta q0 = [a] | X q1\ndelta q1 = X q0\n");
        for l in LassoWord::enumerate(w.alphabet(), 2, 3) {
            cross_validate(&w, &l).unwrap();
            let bda = Bda::new(w.clone()).unwrap();
            cross_validate_bda(&bda, &l, SearchMode::Exhaustive { cap: 1 << 12 }).unwrap();
        }
    }
}
