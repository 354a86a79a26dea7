//! Nondeterministic Büchi automata, canonical ranks of their run DAGs on
//! lasso words, the rank formulas `χ_i^j` and the pipeline to a backward
//! deterministic automaton.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use petgraph::graph::DiGraph;

use crate::alphabet::{is_identifier, Alphabet, LetterId};
use crate::backward::Bda;
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::nutl::{dual_nutl, nutl_to_waa_optimized, FixKind, NodeId, NutlAutomaton, NutlTuple, VarId};
use crate::waa::StateId;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: Vec<usize>,
    /// Sorted and free of duplicates.
    trans: Vec<(usize, LetterId, usize)>,
    buchi: Vec<bool>,
}

impl Nba {
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        initial: Vec<usize>,
        mut trans: Vec<(usize, LetterId, usize)>,
        buchi: Vec<bool>,
    ) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::Invalid("an automaton needs at least one state".into()));
        }
        for (i, s) in states.iter().enumerate() {
            if !is_identifier(s) || states[..i].contains(s) {
                return Err(Error::Invalid(format!("bad or duplicate state name `{s}`")));
            }
        }
        if buchi.len() != n || initial.iter().any(|&q| q >= n) {
            return Err(Error::Invalid("state index out of range".into()));
        }
        if trans.iter().any(|&(p, a, q)| p >= n || q >= n || a.0 >= alphabet.len()) {
            return Err(Error::Invalid("transition out of range".into()));
        }
        trans.sort();
        trans.dedup();
        Ok(Nba {
            alphabet,
            states,
            initial,
            trans,
            buchi,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn transitions(&self) -> &[(usize, LetterId, usize)] {
        &self.trans
    }

    pub fn is_buchi(&self, q: usize) -> bool {
        self.buchi[q]
    }

    /// `a`-successors of `q`.
    pub fn successors(&self, q: usize, a: LetterId) -> impl Iterator<Item = usize> + '_ {
        self.trans
            .iter()
            .filter(move |&&(p, b, _)| p == q && b == a)
            .map(|&(_, _, r)| r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names = |qs: &mut dyn Iterator<Item = usize>| qs.map(|q| self.states[q].as_str()).collect::<Vec<_>>().join(" ");
        let _ = writeln!(out, "alphabet: {}", self.alphabet);
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "initial: {}", names(&mut self.initial.iter().copied()));
        let _ = writeln!(out, "buchi: {}", names(&mut (0..self.num_states()).filter(|&q| self.buchi[q])));
        for &(p, a, q) in &self.trans {
            let _ = writeln!(out, "trans {} {} {}", self.states[p], self.alphabet.name(a), self.states[q]);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Nba> {
        let mut alphabet = None;
        let mut states: Option<Vec<String>> = None;
        let mut initial = Vec::new();
        let mut buchi_names = Vec::new();
        let mut trans_lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = i + 1;
            let err = |m: String| Error::parse(lineno, 1, m);
            let words = |rest: &str| rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
            if let Some(rest) = line.strip_prefix("alphabet:") {
                alphabet = Some(Alphabet::new(words(rest)).map_err(|e| err(e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("states:") {
                states = Some(words(rest));
            } else if let Some(rest) = line.strip_prefix("initial:") {
                initial.extend(words(rest).into_iter().map(|s| (lineno, s)));
            } else if let Some(rest) = line.strip_prefix("buchi:") {
                buchi_names.extend(words(rest).into_iter().map(|s| (lineno, s)));
            } else if let Some(rest) = line.strip_prefix("trans ") {
                let w = words(rest);
                if w.len() != 3 {
                    return Err(err("expected `trans <state> <letter> <state>`".into()));
                }
                trans_lines.push((lineno, w));
            } else {
                return Err(err(format!("unrecognised line `{line}`")));
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet:` line"))?;
        let states = states.ok_or_else(|| Error::parse(1, 1, "missing `states:` line"))?;
        let state = |line: usize, s: &str| {
            states
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::parse(line, 1, format!("unknown state `{s}`")))
        };
        let initial = initial.iter().map(|(l, s)| state(*l, s)).collect::<Result<Vec<_>>>()?;
        let mut buchi = vec![false; states.len()];
        for (l, s) in &buchi_names {
            buchi[state(*l, s)?] = true;
        }
        let mut trans = Vec::new();
        for (l, w) in &trans_lines {
            let a = alphabet
                .lookup(&w[1])
                .ok_or_else(|| Error::parse(*l, 1, format!("unknown letter `{}`", w[1])))?;
            trans.push((state(*l, &w[0])?, a, state(*l, &w[2])?));
        }
        Nba::new(alphabet, states, initial, trans, buchi)
    }
}

/// The run DAG of an automaton on a lasso, folded onto the quotient positions.
#[derive(Debug, Clone)]
pub struct QuotientRunDag {
    positions: usize,
    states: usize,
    succ: Vec<Vec<usize>>,
    buchi: Vec<bool>,
}

impl QuotientRunDag {
    pub fn new(nba: &Nba, w: &LassoWord) -> Self {
        let (positions, states) = (w.len(), nba.num_states());
        let mut succ = vec![Vec::new(); positions * states];
        for p in 0..positions {
            let next = w.succ(p);
            for q in 0..states {
                succ[p * states + q] = nba.successors(q, w.letter(p)).map(|r| next * states + r).collect();
            }
        }
        let buchi = (0..positions * states).map(|v| nba.is_buchi(v % states)).collect();
        QuotientRunDag {
            positions,
            states,
            succ,
            buchi,
        }
    }

    fn vertex(&self, pos: usize, q: usize) -> usize {
        pos * self.states + q
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.succ.len()];
        for (v, outs) in self.succ.iter().enumerate() {
            for &u in outs {
                pred[u].push(v);
            }
        }
        pred
    }

    /// Vertices among `alive` with only finitely many descendants in `alive`:
    /// those removed by repeatedly deleting vertices without live successors.
    fn finitary(&self, alive: &[bool], pred: &[Vec<usize>]) -> Vec<bool> {
        let mut live_out: Vec<usize> = self
            .succ
            .iter()
            .map(|outs| outs.iter().filter(|&&u| alive[u]).count())
            .collect();
        let mut fin = vec![false; self.succ.len()];
        let mut queue: VecDeque<usize> = (0..self.succ.len()).filter(|&v| alive[v] && live_out[v] == 0).collect();
        while let Some(v) = queue.pop_front() {
            if fin[v] {
                continue;
            }
            fin[v] = true;
            for &p in &pred[v] {
                if alive[p] && !fin[p] {
                    live_out[p] -= 1;
                    if live_out[p] == 0 {
                        queue.push_back(p);
                    }
                }
            }
        }
        fin
    }

    /// Vertices among `alive` none of whose live descendants is B-tagged.
    fn buchi_free(&self, alive: &[bool], pred: &[Vec<usize>]) -> Vec<bool> {
        let mut reaches = vec![false; self.succ.len()];
        let mut queue: VecDeque<usize> = (0..self.succ.len()).filter(|&v| alive[v] && self.buchi[v]).collect();
        for &v in &queue {
            reaches[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for &p in &pred[v] {
                if alive[p] && !reaches[p] {
                    reaches[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..self.succ.len()).map(|v| alive[v] && !reaches[v]).collect()
    }

    /// Canonical ranks by peeling `n` times; the residue gets `None` (infinite).
    pub fn peel(&self) -> Ranks {
        let pred = self.predecessors();
        let mut alive = vec![true; self.succ.len()];
        let mut rank: Vec<Option<u32>> = vec![None; self.succ.len()];
        for i in 0..self.states as u32 {
            let fin = self.finitary(&alive, &pred);
            for v in 0..fin.len() {
                if fin[v] {
                    rank[v] = Some(2 * i);
                    alive[v] = false;
                }
            }
            let free = self.buchi_free(&alive, &pred);
            for v in 0..free.len() {
                if free[v] {
                    rank[v] = Some(2 * i + 1);
                    alive[v] = false;
                }
            }
        }
        Ranks {
            states: self.states,
            rank,
        }
    }

    /// `liminf` over levels of the number of infinitary, non-B-recurring vertices.
    pub fn ultimate_width(&self, w: &LassoWord) -> usize {
        let pred = self.predecessors();
        let fin = self.finitary(&vec![true; self.succ.len()], &pred);
        let recurring = self.buchi_recurring();
        (w.loop_start()..self.positions)
            .map(|p| {
                (0..self.states)
                    .filter(|&q| {
                        let v = self.vertex(p, q);
                        !fin[v] && !recurring[v]
                    })
                    .count()
            })
            .min()
            .unwrap_or(0)
    }

    /// Vertices from which a path visits B-tagged vertices infinitely often:
    /// those reaching a cycle through a B-tagged vertex.
    pub fn buchi_recurring(&self) -> Vec<bool> {
        let mut graph: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..self.succ.len()).map(|_| graph.add_node(())).collect();
        for (v, outs) in self.succ.iter().enumerate() {
            for &u in outs {
                graph.add_edge(nodes[v], nodes[u], ());
            }
        }
        let mut good = vec![false; self.succ.len()];
        for comp in petgraph::algo::tarjan_scc(&graph) {
            let members: Vec<usize> = comp.iter().map(|ix| ix.index()).collect();
            let cyclic = members.len() > 1 || self.succ[members[0]].contains(&members[0]);
            if cyclic && members.iter().any(|&v| self.buchi[v]) {
                for v in members {
                    good[v] = true;
                }
            }
        }
        let pred = self.predecessors();
        let mut queue: VecDeque<usize> = (0..good.len()).filter(|&v| good[v]).collect();
        while let Some(v) = queue.pop_front() {
            for &p in &pred[v] {
                if !good[p] {
                    good[p] = true;
                    queue.push_back(p);
                }
            }
        }
        good
    }
}

/// Canonical ranks on the quotient; `None` stands for `∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranks {
    states: usize,
    rank: Vec<Option<u32>>,
}

impl Ranks {
    pub fn get(&self, pos: usize, q: usize) -> Option<u32> {
        self.rank[pos * self.states + q]
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<u32>> + '_ {
        self.rank.iter().copied()
    }
}

pub fn peel_ranks(nba: &Nba, w: &LassoWord) -> Ranks {
    QuotientRunDag::new(nba, w).peel()
}

/// Acceptance from every state at every quotient position, indexed `[pos][q]`.
pub fn nba_acceptance(nba: &Nba, w: &LassoWord) -> Vec<Vec<bool>> {
    let rec = QuotientRunDag::new(nba, w).buchi_recurring();
    let n = nba.num_states();
    (0..w.len()).map(|p| rec[p * n..(p + 1) * n].to_vec()).collect()
}

pub fn nba_accepts_lasso(nba: &Nba, w: &LassoWord, q: usize, pos: usize) -> bool {
    nba_acceptance(nba, w)[pos][q]
}

/// Membership of `w` in the language: accepted from some initial state.
pub fn nba_language_member(nba: &Nba, w: &LassoWord) -> bool {
    let acc = nba_acceptance(nba, w);
    nba.initial().iter().any(|&q| acc[0][q])
}

/// The formulas `χ_i^j` for `i < 2n`, `j < n`, all in one tuple, together with
/// the final tuple of their negations at level `2n - 1`.
#[derive(Debug, Clone)]
pub struct RankFormulas {
    /// Roots are `χ_{2n-1}^0, …, χ_{2n-1}^{n-1}`.
    pub chi_tuple: NutlTuple,
    /// `chi[i][j]` is the node of `χ_i^j` in `chi_tuple`.
    pub chi: Vec<Vec<NodeId>>,
    /// Roots are the negations of `χ_{2n-1}^j`: true exactly where `q_j` accepts.
    pub accepting: NutlTuple,
}

pub fn build_rank_formulas(nba: &Nba) -> RankFormulas {
    let n = nba.num_states();
    let mut t = NutlTuple::new(nba.alphabet().clone());
    let vars: Vec<Vec<VarId>> = (0..2 * n)
        .map(|i| {
            (0..n)
                .map(|j| t.variable(&format!("X{i}_{j}")).expect("fresh variable names"))
                .collect()
        })
        .collect();
    // ∨_a (a ∧ ∧_{(q_j, a, q_k)} O X_i^k); an empty conjunction leaves just `a`.
    let step = |t: &mut NutlTuple, i: usize, j: usize| {
        let disjuncts: Vec<NodeId> = nba
            .alphabet()
            .letters()
            .map(|a| {
                let letter = t.letter(a);
                let nexts: Vec<NodeId> = nba
                    .successors(j, a)
                    .map(|k| {
                        let x = t.var(vars[i][k]);
                        t.next(x)
                    })
                    .collect();
                match t.all(nexts) {
                    Some(c) => t.and(letter, c),
                    None => letter,
                }
            })
            .collect();
        t.any(disjuncts).expect("alphabets are non-empty")
    };
    let mut chi: Vec<Vec<NodeId>> = Vec::with_capacity(2 * n);
    for i in 0..2 * n {
        let bodies: Vec<NodeId> = (0..n)
            .map(|j| {
                if i == 0 {
                    step(&mut t, 0, j)
                } else if i % 2 == 1 && nba.is_buchi(j) {
                    chi[i - 1][j]
                } else {
                    let s = step(&mut t, i, j);
                    t.or(chi[i - 1][j], s)
                }
            })
            .collect();
        let kind = if i % 2 == 0 { FixKind::Mu } else { FixKind::Nu };
        let block = t
            .fix_block(kind, vars[i].clone(), bodies)
            .expect("each block binds its own variables");
        chi.push((0..n).map(|j| t.fix(block, j).expect("index in range")).collect());
    }
    for j in 0..n {
        t.push_root(chi[2 * n - 1][j]);
    }
    let accepting = dual_nutl(&t);
    RankFormulas {
        chi_tuple: t,
        chi,
        accepting,
    }
}

/// The backward deterministic automaton obtained from an NBA through the rank
/// formulas and the optimized νTL translation.
#[derive(Debug, Clone)]
pub struct NbaPipeline {
    pub formulas: RankFormulas,
    pub automaton: NutlAutomaton,
    /// Automaton state standing for NBA state `q_j`.
    pub state_of: Vec<StateId>,
    pub bda: Bda,
}

impl NbaPipeline {
    /// NBA states reported accepting by a set of automaton states.
    pub fn nba_states(&self, out: &BTreeSet<StateId>) -> BTreeSet<usize> {
        (0..self.state_of.len()).filter(|j| out.contains(&self.state_of[*j])).collect()
    }
}

/// Fails with [`Error::CapExceeded`] when a cap is given and the full state
/// space of the result is larger.
pub fn nba_to_bda(nba: &Nba, cap: Option<u64>) -> Result<NbaPipeline> {
    let formulas = build_rank_formulas(nba);
    let automaton = nutl_to_waa_optimized(&formulas.accepting)?;
    let state_of = automaton.root_states.clone();
    let initial = nba.initial().iter().map(|&q| state_of[q]).collect();
    let waa = automaton.waa.clone().with_initial(Some(initial));
    let bda = Bda::new(waa)?;
    if let Some(cap) = cap {
        bda.check_cap(cap)?;
    }
    Ok(NbaPipeline {
        formulas,
        automaton,
        state_of,
        bda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nutl::{check_alternation_free, check_guarded, Evaluator};
    use crate::run::{bda_final_run, bda_language_member};

    fn nba(text: &str) -> Nba {
        Nba::parse(text).unwrap()
    }

    fn loop_a(buchi: &str) -> Nba {
        nba(&format!("alphabet: a b\nstates: q0\ninitial: q0\nbuchi: {buchi}\ntrans q0 a q0\n"))
    }

    fn lasso(s: &str, n: &Nba) -> LassoWord {
        LassoWord::parse(s, n.alphabet()).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let text = "alphabet: a b\nstates: p q\ninitial: p\nbuchi: q\ntrans p a q\ntrans q b q\n";
        let a = nba(text);
        assert_eq!(a.to_text(), text);
        assert!(Nba::parse("alphabet: a\nstates: p\ntrans p c p\n").is_err());
    }

    #[test]
    fn acceptance_examples() {
        let a = loop_a("q0");
        assert!(nba_accepts_lasso(&a, &lasso("; a", &a), 0, 0));
        let a = loop_a("");
        assert!(!nba_accepts_lasso(&a, &lasso("; a", &a), 0, 0));
        let a = nba("alphabet: a b\nstates: q0 q1\ninitial: q0\nbuchi: q1\ntrans q0 a q1\ntrans q1 a q1\n");
        assert!(nba_accepts_lasso(&a, &lasso("; a", &a), 0, 0));
        assert!(!nba_language_member(&a, &lasso("; a b", &a)));
    }

    #[test]
    fn peeling_examples() {
        let a = loop_a("q0");
        assert_eq!(peel_ranks(&a, &lasso("; a", &a)).get(0, 0), None);
        let a = loop_a("");
        let w = lasso("a ; a", &a);
        let r = peel_ranks(&a, &w);
        assert!((0..w.len()).all(|p| r.get(p, 0) == Some(1)));
        let w = lasso("; b", &a);
        assert_eq!(peel_ranks(&a, &w).get(0, 0), Some(0));
    }

    #[test]
    fn peeling_two_states() {
        // q0 loops on a and b, q1 is B-tagged and reached on b, then dies.
        let a = nba("alphabet: a b\nstates: q0 q1\ninitial: q0\nbuchi: q1\ntrans q0 a q0\ntrans q0 b q0\ntrans q0 b q1\ntrans q1 a q1\n");
        let w = lasso("; b", &a);
        let r = peel_ranks(&a, &w);
        assert_eq!(r.get(0, 1), Some(0));
        assert_eq!(r.get(0, 0), Some(1));
        let w = lasso("b ; a", &a);
        let r = peel_ranks(&a, &w);
        assert_eq!(r.get(0, 0), None);
        assert_eq!(r.get(1, 1), None);
        assert_eq!(r.get(1, 0), Some(1));
        let dag = QuotientRunDag::new(&a, &w);
        assert_eq!(dag.ultimate_width(&w), 1);
    }

    #[test]
    fn rank_formulas_are_well_formed() {
        let a = nba("alphabet: a b\nstates: q0 q1\ninitial: q0\nbuchi: q1\ntrans q0 a q1\ntrans q1 b q0\ntrans q1 a q1\n");
        let f = build_rank_formulas(&a);
        assert_eq!(f.chi.len(), 4);
        assert_eq!(f.chi_tuple.num_blocks(), 4);
        check_guarded(&f.chi_tuple).unwrap();
        check_alternation_free(&f.chi_tuple).unwrap();
        check_guarded(&f.accepting).unwrap();
        check_alternation_free(&f.accepting).unwrap();
        let aut = nutl_to_waa_optimized(&f.accepting).unwrap();
        assert_eq!(aut.waa.num_states(), 8);
    }

    #[test]
    fn base_formula_renders_empty_conjunction_as_letter() {
        let a = loop_a("");
        let f = build_rank_formulas(&a);
        let t = &f.chi_tuple;
        assert_eq!(t.display(f.chi[0][0]), "mu_0 (X0_0).(a & O X0_0 | b)");
    }

    #[test]
    fn chi_matches_peeling() {
        let a = nba("alphabet: a b\nstates: q0 q1\ninitial: q0\nbuchi: q1\ntrans q0 a q0\ntrans q0 b q1\ntrans q1 a q1\ntrans q1 b q0\n");
        let f = build_rank_formulas(&a);
        for w in LassoWord::enumerate_total(a.alphabet(), 4) {
            let ranks = peel_ranks(&a, &w);
            let mut ev = Evaluator::new(&f.chi_tuple, &w);
            for i in 0..4 {
                for j in 0..2 {
                    let truth = ev.eval_closed(f.chi[i][j]).unwrap();
                    for p in 0..w.len() {
                        let expected = ranks.get(p, j).is_some_and(|r| r as usize <= i);
                        assert_eq!(truth[p], expected, "chi_{i}^{j} at {p} on {}", w.display(a.alphabet()));
                    }
                }
            }
        }
    }

    #[test]
    fn pipeline_on_one_state() {
        let a = loop_a("q0");
        let p = nba_to_bda(&a, Some(16)).unwrap();
        assert_eq!(p.automaton.waa.num_states(), 2);
        assert_eq!(p.automaton.waa.sccs().len(), 2);
        assert_eq!(p.bda.enumerate_state_space(16).unwrap().len(), 4);
        for w in LassoWord::enumerate(a.alphabet(), 2, 2) {
            let run = bda_final_run(&p.bda, &w).unwrap();
            let outs = run.outputs(&p.bda);
            let acc = nba_acceptance(&a, &w);
            for pos in 0..w.len() {
                let expected: BTreeSet<usize> = (0..1).filter(|&q| acc[pos][q]).collect();
                assert_eq!(p.nba_states(&outs[pos]), expected);
            }
            assert_eq!(bda_language_member(&p.bda, &w).unwrap(), nba_language_member(&a, &w));
        }
    }
}
