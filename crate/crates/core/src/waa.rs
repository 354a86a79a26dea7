//! Weak alternating ω-automata, their transition graphs and dualization.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use petgraph::graph::DiGraph;

use crate::alphabet::{is_identifier, Alphabet, LetterId};
use crate::condition::Condition;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SccId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    NonRecurring,
    Recurring,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::NonRecurring => Polarity::Recurring,
            Polarity::Recurring => Polarity::NonRecurring,
        }
    }
}

/// A strongly connected component of the transition graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scc {
    pub id: SccId,
    /// Members in increasing state order.
    pub states: Vec<StateId>,
    /// Polarity of the smallest member; meaningful once the automaton is weak.
    pub polarity: Polarity,
    /// Whether the component contains an edge (a trivial singleton has none).
    pub cyclic: bool,
}

impl Scc {
    pub fn size(&self) -> usize {
        self.states.len()
    }
}

/// A weak alternating automaton with transition conditions.
///
/// SCCs are listed so that every SCC comes after all SCCs it reaches:
/// successors first, the SCCs of `X q'` atoms before the SCC of `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Waa {
    alphabet: Alphabet,
    states: Vec<String>,
    delta: Vec<Condition>,
    recurring: Vec<bool>,
    initial: Option<Vec<StateId>>,
    sccs: Vec<Scc>,
    scc_of: Vec<SccId>,
}

impl Waa {
    /// Builds an automaton. Weakness is not enforced here, see [`Waa::validate_weak`].
    pub fn new(
        alphabet: Alphabet,
        states: Vec<String>,
        delta: Vec<Condition>,
        recurring: Vec<bool>,
        initial: Option<Vec<StateId>>,
    ) -> Result<Self> {
        if delta.len() != states.len() || recurring.len() != states.len() {
            return Err(Error::Invalid(
                "transition function and polarity must be given for every state".into(),
            ));
        }
        for (i, s) in states.iter().enumerate() {
            if !is_identifier(s) {
                return Err(Error::Invalid(format!("`{s}` is not a valid state name")));
            }
            if states[..i].contains(s) {
                return Err(Error::Invalid(format!("duplicate state `{s}`")));
            }
        }
        let full = alphabet.full();
        for cond in &delta {
            for sub in cond.subformulas() {
                match sub {
                    Condition::Letters(b) if !b.is_subset_of(full) => {
                        return Err(Error::Invalid("letter set outside the alphabet".into()))
                    }
                    Condition::Next(q) if q.0 >= states.len() => {
                        return Err(Error::Invalid(format!("undeclared state index {}", q.0)))
                    }
                    _ => {}
                }
            }
        }
        if let Some(init) = &initial {
            if init.iter().any(|q| q.0 >= states.len()) {
                return Err(Error::Invalid("initial state out of range".into()));
            }
        }
        let (sccs, scc_of) = scc_decompose(&delta, &recurring);
        Ok(Waa {
            alphabet,
            states,
            delta,
            recurring,
            initial,
            sccs,
            scc_of,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl DoubleEndedIterator<Item = StateId> + ExactSizeIterator {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn lookup(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn delta(&self, q: StateId) -> &Condition {
        &self.delta[q.0]
    }

    pub fn polarity(&self, q: StateId) -> Polarity {
        if self.recurring[q.0] {
            Polarity::Recurring
        } else {
            Polarity::NonRecurring
        }
    }

    pub fn is_recurring(&self, q: StateId) -> bool {
        self.recurring[q.0]
    }

    pub fn initial(&self) -> Option<&[StateId]> {
        self.initial.as_deref()
    }

    pub fn with_initial(mut self, initial: Option<Vec<StateId>>) -> Self {
        self.initial = initial;
        self
    }

    /// SCCs of the transition graph, successors first.
    pub fn sccs(&self) -> &[Scc] {
        &self.sccs
    }

    pub fn scc_of(&self, q: StateId) -> SccId {
        self.scc_of[q.0]
    }

    pub fn scc(&self, id: SccId) -> &Scc {
        &self.sccs[id.0]
    }

    pub fn same_scc(&self, p: StateId, q: StateId) -> bool {
        self.scc_of[p.0] == self.scc_of[q.0]
    }

    /// Edges `q -> q'` of the transition graph, one per pair.
    pub fn edges(&self) -> Vec<(StateId, StateId)> {
        self.states()
            .flat_map(|q| self.delta(q).successors().into_iter().map(move |p| (q, p)))
            .collect()
    }

    /// Ok iff every SCC is purely recurring or purely non-recurring.
    pub fn validate_weak(&self) -> Result<()> {
        for scc in &self.sccs {
            let first = self.recurring[scc.states[0].0];
            if scc.states.iter().any(|q| self.recurring[q.0] != first) {
                return Err(Error::NotWeak {
                    states: scc.states.iter().map(|q| self.states[q.0].clone()).collect(),
                });
            }
        }
        Ok(())
    }

    /// True iff every SCC is a single state.
    pub fn is_very_weak(&self) -> bool {
        self.sccs.iter().all(|s| s.size() == 1)
    }

    /// The complementary automaton: dual conditions and exchanged polarities.
    pub fn dualize(&self) -> Waa {
        let delta: Vec<Condition> = self.delta.iter().map(|c| c.dual(&self.alphabet)).collect();
        let recurring: Vec<bool> = self.recurring.iter().map(|r| !r).collect();
        let mut sccs = self.sccs.clone();
        for scc in &mut sccs {
            scc.polarity = scc.polarity.flip();
        }
        Waa {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            delta,
            recurring,
            initial: self.initial.clone(),
            sccs,
            scc_of: self.scc_of.clone(),
        }
    }

    /// `∏ (m_i + 1)^{m_i}` over all SCCs, `None` on overflow.
    pub fn state_space_bound(&self) -> Option<u64> {
        self.sccs.iter().try_fold(1u64, |acc, s| {
            let m = s.size() as u64;
            let per = (m + 1).checked_pow(u32::try_from(m).ok()?)?;
            acc.checked_mul(per)
        })
    }

    /// The bound as a decimal string, exact even when it does not fit 64 bits.
    pub fn state_space_bound_string(&self) -> String {
        match self.state_space_bound() {
            Some(b) => b.to_string(),
            None => {
                let log10: f64 = self
                    .sccs
                    .iter()
                    .map(|s| s.size() as f64 * ((s.size() + 1) as f64).log10())
                    .sum();
                format!("~1e{log10:.0}")
            }
        }
    }

    /// Serializes to the line-based text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "alphabet: {}", self.alphabet);
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let rec: Vec<&str> = self
            .states()
            .filter(|q| self.recurring[q.0])
            .map(|q| self.name(q))
            .collect();
        let _ = writeln!(out, "recurring: {}", rec.join(" "));
        if let Some(init) = &self.initial {
            let names: Vec<&str> = init.iter().map(|q| self.name(*q)).collect();
            let _ = writeln!(out, "initial: {}", names.join(" "));
        }
        for q in self.states() {
            let _ = writeln!(
                out,
                "delta {} = {}",
                self.name(q),
                self.delta(q).display(&self.alphabet, &self.states)
            );
        }
        out.lines()
            .map(|l| l.trim_end().to_string() + "\n")
            .collect()
    }

    /// Parses the line-based text format.
    pub fn parse(text: &str) -> Result<Waa> {
        let mut alphabet = None;
        let mut states: Option<Vec<String>> = None;
        let mut recurring_names = Vec::new();
        let mut initial_names: Option<Vec<(usize, String)>> = None;
        let mut deltas: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("delta ") {
                let (name, cond) = rest
                    .split_once('=')
                    .ok_or_else(|| Error::parse(line_no, 1, "expected `delta <state> = <condition>`"))?;
                deltas.push((line_no, name.trim().to_string(), cond.to_string()));
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, 1, "expected `key: value`"))?;
            let items: Vec<String> = value.split_whitespace().map(str::to_string).collect();
            match key.trim() {
                "alphabet" => {
                    alphabet = Some(Alphabet::new(items).map_err(|e| Error::parse(line_no, 1, e.to_string()))?)
                }
                "states" => states = Some(items),
                "recurring" => recurring_names.extend(items.into_iter().map(|s| (line_no, s))),
                "initial" => {
                    initial_names
                        .get_or_insert_with(Vec::new)
                        .extend(items.into_iter().map(|s| (line_no, s)));
                }
                other => return Err(Error::parse(line_no, 1, format!("unknown key `{other}`"))),
            }
        }
        let alphabet = alphabet.ok_or_else(|| Error::parse(1, 1, "missing `alphabet:` line"))?;
        let states = states.ok_or_else(|| Error::parse(1, 1, "missing `states:` line"))?;
        let lookup = |name: &str| states.iter().position(|s| s == name).map(StateId);
        let mut recurring = vec![false; states.len()];
        for (line_no, name) in &recurring_names {
            let q = lookup(name).ok_or_else(|| Error::parse(*line_no, 1, format!("unknown state `{name}`")))?;
            recurring[q.0] = true;
        }
        let initial = match initial_names {
            None => None,
            Some(names) => Some(
                names
                    .iter()
                    .map(|(l, n)| lookup(n).ok_or_else(|| Error::parse(*l, 1, format!("unknown state `{n}`"))))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        let mut delta: Vec<Option<Condition>> = vec![None; states.len()];
        for (line_no, name, cond) in deltas {
            let q = lookup(&name).ok_or_else(|| Error::parse(line_no, 1, format!("unknown state `{name}`")))?;
            if delta[q.0].is_some() {
                return Err(Error::parse(line_no, 1, format!("duplicate transition for `{name}`")));
            }
            delta[q.0] = Some(Condition::parse(&cond, &alphabet, &lookup, line_no)?);
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::Invalid(format!("no transition for state `{}`", states[i]))))
            .collect::<Result<Vec<_>>>()?;
        Waa::new(alphabet, states, delta, recurring, initial)
    }

    /// Convenience: the letter with the given name.
    pub fn letter(&self, name: &str) -> Result<LetterId> {
        self.alphabet.resolve(name)
    }
}

/// Tarjan decomposition of the transition graph. Returns SCCs successors-first
/// and the SCC index of every state.
pub fn scc_decompose(delta: &[Condition], recurring: &[bool]) -> (Vec<Scc>, Vec<SccId>) {
    let n = delta.len();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    let mut has_edge = BTreeSet::new();
    for (q, cond) in delta.iter().enumerate() {
        for p in cond.successors() {
            graph.add_edge(nodes[q], nodes[p.0], ());
            has_edge.insert((q, p.0));
        }
    }
    // petgraph yields components in postorder, i.e. reached components first.
    let comps = petgraph::algo::tarjan_scc(&graph);
    let mut scc_of = vec![SccId(0); n];
    let mut sccs = Vec::with_capacity(comps.len());
    for (i, comp) in comps.into_iter().enumerate() {
        let mut states: Vec<StateId> = comp.into_iter().map(|ix| StateId(ix.index())).collect();
        states.sort();
        for q in &states {
            scc_of[q.0] = SccId(i);
        }
        let cyclic = states
            .iter()
            .any(|p| states.iter().any(|q| has_edge.contains(&(p.0, q.0))));
        let polarity = if recurring[states[0].0] {
            Polarity::Recurring
        } else {
            Polarity::NonRecurring
        };
        sccs.push(Scc {
            id: SccId(i),
            states,
            polarity,
            cyclic,
        });
    }
    (sccs, scc_of)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn waa(text: &str) -> Waa {
        Waa::parse(text).unwrap()
    }

    #[test]
    fn self_loop_is_one_scc() {
        let a = waa("alphabet: a\nstates: q\ndelta q = X q\n");
        assert_eq!(a.sccs().len(), 1);
        assert!(a.sccs()[0].cyclic);
    }

    #[test]
    fn acyclic_chain_lists_successor_first() {
        let a = waa("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = [a]\n");
        assert_eq!(a.sccs().len(), 2);
        assert_eq!(a.sccs()[0].states, vec![StateId(1)]);
        assert_eq!(a.sccs()[1].states, vec![StateId(0)]);
        assert!(!a.sccs()[0].cyclic);
    }

    #[test]
    fn two_cycle_is_one_scc() {
        let a = waa("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = X q0\n");
        assert_eq!(a.sccs().len(), 1);
        assert_eq!(a.sccs()[0].size(), 2);
        assert!(!a.is_very_weak());
    }

    #[test]
    fn mixed_cycle_is_reported() {
        let a = waa("alphabet: a\nstates: q0 q1\nrecurring: q0\ndelta q0 = X q1\ndelta q1 = X q0\n");
        match a.validate_weak() {
            Err(Error::NotWeak { states }) => assert_eq!(states, ["q0", "q1"]),
            other => panic!("{other:?}"),
        }
        let a = waa("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = X q0\n");
        assert!(a.validate_weak().is_ok());
        let a = waa("alphabet: a\nstates: q0 q1\nrecurring: q0\ndelta q0 = X q1\ndelta q1 = [a]\n");
        assert!(a.validate_weak().is_ok());
    }

    #[test]
    fn unmentioned_states_are_singletons() {
        let a = waa("alphabet: a b\nstates: q0 q1 q2\ndelta q0 = [a]\ndelta q1 = [b]\ndelta q2 = X q2\n");
        assert_eq!(a.sccs().len(), 3);
        assert!(a.is_very_weak());
        assert_eq!(a.state_space_bound(), Some(8));
    }

    #[test]
    fn dualize_example() {
        let a = waa("alphabet: a b\nstates: q\ndelta q = [a] | X q\n");
        let d = a.dualize();
        assert_eq!(d, waa("alphabet: a b\nstates: q\nrecurring: q\ndelta q = [b] & X q\n"));
        assert_eq!(d.dualize(), a);
    }

    #[test]
    fn text_round_trip() {
        let src = "alphabet: a b\nstates: q0 q1\nrecurring: q1\ninitial: q0\ndelta q0 = [a] | (X q1 & X q0)\ndelta q1 = [] | X q1\n";
        let a = waa(src);
        assert_eq!(waa(&a.to_text()), a);
    }

    #[test]
    fn parse_errors() {
        assert!(Waa::parse("alphabet: a\nstates: q\n").is_err());
        assert!(Waa::parse("alphabet: a\nstates: q\ndelta q = X r\n").is_err());
        assert!(Waa::parse("alphabet: a\nstates: q\ndelta q = [a]\ndelta q = [a]\n").is_err());
        let err = Waa::parse("alphabet: a\nstates: q\ndelta q = [a] &\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn bound_for_two_state_scc() {
        let a = waa("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = X q0\n");
        assert_eq!(a.state_space_bound(), Some(9));
    }
}
