//! The backward deterministic automaton built from a weak alternating automaton.
//!
//! A state is a [`ValueFamily`]. For a non-recurring SCC a finite value means
//! "accepted" and bounds how long the obligations of that SCC can remain open;
//! for a recurring SCC the reading is complementary. The transition function
//! [`Bda::step`] maps the family at position `i + 1` and the letter at position
//! `i` to the family at position `i`. Every SCC `S` owns the transition Büchi
//! sets `B_{S,1} … B_{S,|S|}`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use crate::alphabet::LetterId;
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::value::{Value, ValueFamily};
use crate::waa::{Polarity, Scc, SccId, StateId, Waa};

/// The Büchi set `B_{S,level}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BuchiSet {
    pub scc: SccId,
    pub level: u32,
}

impl fmt::Display for BuchiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}/{}", self.scc.0, self.level)
    }
}

/// How the critical value selects Büchi sets.
///
/// With [`CriticalRule::Exact`] only `B_{S,m}` is triggered by the critical
/// value `m`. That loses the final run for some automata, e.g. the
/// non-recurring SCC `q0 = [a] | X q1`, `q1 = X q0` on `a^ω`: the only run is
/// the constant family `(1, 2)` whose critical value is always `2`, so `B_{S,1}`
/// never fires. [`CriticalRule::UpTo`] triggers every `B_{S,i}` with `i <= m`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum CriticalRule {
    #[default]
    UpTo,
    Exact,
}

/// Per-SCC outcome of one transition.
///
/// `B_{S,i}` fires iff the critical value selects `i` or no finite value of
/// `S` after the transition is `>= i`, i.e. `i > max_finite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SccFiring {
    pub critical: u32,
    /// Largest finite value of the SCC after lifting, `0` when there is none.
    pub max_finite: u32,
    pub rule: CriticalRule,
}

impl SccFiring {
    pub fn fires_by_critical(&self, level: u32) -> bool {
        match self.rule {
            CriticalRule::UpTo => level <= self.critical,
            CriticalRule::Exact => level == self.critical,
        }
    }

    pub fn fires(&self, level: u32) -> bool {
        self.fires_by_critical(level) || level > self.max_finite
    }
}

/// One application of the transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRecord {
    pub letter: LetterId,
    /// The family at position `i + 1`.
    pub source: ValueFamily,
    /// The family at position `i`.
    pub result: ValueFamily,
    /// Critical value per SCC, indexed by [`SccId`].
    pub critical: Vec<u32>,
    pub fired: Vec<BuchiSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bda {
    waa: Waa,
    rule: CriticalRule,
}

impl Bda {
    /// Fails if the automaton is not weak.
    pub fn new(waa: Waa) -> Result<Self> {
        waa.validate_weak()?;
        Ok(Bda {
            waa,
            rule: CriticalRule::default(),
        })
    }

    pub fn with_rule(mut self, rule: CriticalRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn rule(&self) -> CriticalRule {
        self.rule
    }

    pub fn waa(&self) -> &Waa {
        &self.waa
    }

    /// One Büchi set per state of the weak automaton.
    pub fn buchi_sets(&self) -> Vec<BuchiSet> {
        self.waa
            .sccs()
            .iter()
            .flat_map(|s| {
                (1..=s.size() as u32).map(move |level| BuchiSet { scc: s.id, level })
            })
            .collect()
    }

    pub fn num_buchi_sets(&self) -> usize {
        self.waa.sccs().iter().map(Scc::size).sum()
    }

    /// `∏ (m_i + 1)^{m_i}`, `None` on overflow.
    pub fn state_space_size(&self) -> Option<u64> {
        self.waa.state_space_bound()
    }

    /// The value `e''[δ(q)]` before lifting; may be `Fin(0)`.
    pub fn eval_condition(&self, q: StateId, letter: LetterId, next: &ValueFamily) -> Value {
        self.eval(self.waa.delta(q), q, letter, &next.0)
    }

    fn eval(&self, cond: &Condition, owner: StateId, letter: LetterId, next: &[Value]) -> Value {
        let pol = self.waa.polarity(owner);
        match cond {
            Condition::Letters(b) => match (pol, b.contains(letter)) {
                (Polarity::NonRecurring, true) | (Polarity::Recurring, false) => Value::Fin(0),
                _ => Value::Inf,
            },
            Condition::Next(p) => {
                let v = next[p.0];
                if self.waa.same_scc(owner, *p) {
                    v
                } else if self.waa.polarity(*p) == pol {
                    v.norm()
                } else {
                    v.neg_norm()
                }
            }
            Condition::Or(l, r) => {
                let (a, b) = (self.eval(l, owner, letter, next), self.eval(r, owner, letter, next));
                match pol {
                    Polarity::NonRecurring => a.min(b),
                    Polarity::Recurring => a.max(b),
                }
            }
            Condition::And(l, r) => {
                let (a, b) = (self.eval(l, owner, letter, next), self.eval(r, owner, letter, next));
                match pol {
                    Polarity::NonRecurring => a.max(b),
                    Polarity::Recurring => a.min(b),
                }
            }
        }
    }

    /// Updates the coordinates of one SCC. Reads only the SCC itself and the
    /// SCCs it reaches from `next`, writes the SCC's coordinates into `out`.
    pub fn step_scc(&self, scc: SccId, letter: LetterId, next: &[Value], out: &mut [Value]) -> SccFiring {
        let scc = self.waa.scc(scc);
        let size = scc.size();
        let mut occurs = vec![false; size + 2];
        for &q in &scc.states {
            let v = self.eval(self.waa.delta(q), q, letter, next);
            if let Value::Fin(k) = v {
                occurs[k as usize] = true;
            }
            out[q.0] = v;
        }
        let critical = occurs.iter().position(|o| !o).unwrap_or(size + 1) as u32;
        let mut max_finite = 0;
        for &q in &scc.states {
            if let Value::Fin(k) = out[q.0] {
                let lifted = if critical > 0 && k < critical { k + 1 } else { k };
                out[q.0] = Value::Fin(lifted);
                max_finite = max_finite.max(lifted);
            }
        }
        SccFiring {
            critical,
            max_finite,
            rule: self.rule,
        }
    }

    /// The result family and per-SCC firing without building a record.
    pub fn step_raw(&self, letter: LetterId, next: &[Value], out: &mut [Value]) -> Vec<SccFiring> {
        self.waa
            .sccs()
            .iter()
            .map(|s| self.step_scc(s.id, letter, next, out))
            .collect()
    }

    /// `ρ(letter, family)` with its critical values and fired Büchi sets.
    pub fn step(&self, letter: LetterId, family: &ValueFamily) -> TransitionRecord {
        let mut out = vec![Value::Inf; self.waa.num_states()];
        let firing = self.step_raw(letter, &family.0, &mut out);
        let fired = self
            .waa
            .sccs()
            .iter()
            .flat_map(|s| {
                let f = firing[s.id.0];
                (1..=s.size() as u32)
                    .filter(move |&level| f.fires(level))
                    .map(move |level| BuchiSet { scc: s.id, level })
            })
            .collect();
        TransitionRecord {
            letter,
            source: family.clone(),
            result: ValueFamily(out),
            critical: firing.iter().map(|f| f.critical).collect(),
            fired,
        }
    }

    /// `λ`: non-recurring states with a finite value and recurring states with `∞`.
    pub fn output(&self, family: &ValueFamily) -> BTreeSet<StateId> {
        self.waa
            .states()
            .filter(|&q| match self.waa.polarity(q) {
                Polarity::NonRecurring => family.get(q).is_finite(),
                Polarity::Recurring => !family.get(q).is_finite(),
            })
            .collect()
    }

    /// All well-formed families, in mixed-radix order over the states.
    pub fn enumerate_state_space(&self, cap: u64) -> Result<Vec<ValueFamily>> {
        let size = self.check_cap(cap)?;
        Ok((0..size).map(|i| self.family_at(i)).collect())
    }

    pub(crate) fn check_cap(&self, cap: u64) -> Result<u64> {
        match self.state_space_size() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(Error::CapExceeded {
                bound: self.waa.state_space_bound_string(),
                cap,
            }),
        }
    }

    fn radix(&self, q: StateId) -> u64 {
        self.waa.scc(self.waa.scc_of(q)).size() as u64 + 1
    }

    /// The family with the given mixed-radix index; the first state is the
    /// least significant digit, digit `m` encodes `∞`.
    pub fn family_at(&self, mut index: u64) -> ValueFamily {
        let mut values = Vec::with_capacity(self.waa.num_states());
        for q in self.waa.states() {
            let r = self.radix(q);
            let d = index % r;
            index /= r;
            values.push(if d + 1 == r { Value::Inf } else { Value::Fin(d as u32 + 1) });
        }
        ValueFamily(values)
    }

    pub fn index_of(&self, family: &[Value]) -> u64 {
        let mut index = 0;
        for q in self.waa.states().rev() {
            let r = self.radix(q);
            let d = match family[q.0] {
                Value::Inf => r - 1,
                Value::Fin(k) => k as u64 - 1,
            };
            index = index * r + d;
        }
        index
    }

    /// Text description: SCC table, Büchi index and, when `table_cap` is given,
    /// the full transition table.
    pub fn export_text(&self, table_cap: Option<u64>) -> Result<String> {
        let waa = &self.waa;
        let mut out = String::new();
        let _ = writeln!(out, "# backward deterministic automaton");
        let _ = writeln!(out, "alphabet: {}", waa.alphabet());
        let _ = writeln!(out, "states: {}", waa.state_names().join(" "));
        for s in waa.sccs() {
            let names: Vec<&str> = s.states.iter().map(|q| waa.name(*q)).collect();
            let pol = match s.polarity {
                Polarity::NonRecurring => "nonrecurring",
                Polarity::Recurring => "recurring",
            };
            let _ = writeln!(out, "scc S{}: {} {pol} size {}", s.id.0, names.join(" "), s.size());
        }
        let sets: Vec<String> = self.buchi_sets().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "buchi: {}", sets.join(" "));
        let _ = writeln!(out, "bound: {}", waa.state_space_bound_string());
        if let Some(cap) = table_cap {
            for fam in self.enumerate_state_space(cap)? {
                let outp: Vec<&str> = self.output(&fam).iter().map(|q| waa.name(*q)).collect();
                let _ = writeln!(out, "family {} output {{{}}}", fam.display(waa), outp.join(" "));
            }
            for fam in self.enumerate_state_space(cap)? {
                for a in waa.alphabet().letters() {
                    let rec = self.step(a, &fam);
                    let crit: Vec<String> = rec
                        .critical
                        .iter()
                        .enumerate()
                        .map(|(i, m)| format!("S{i}={m}"))
                        .collect();
                    let fired: Vec<String> = rec.fired.iter().map(ToString::to_string).collect();
                    let _ = writeln!(
                        out,
                        "trans {} ; {} -> {} ; critical {} ; fired {}",
                        fam.display(waa),
                        waa.alphabet().name(a),
                        rec.result.display(waa),
                        crit.join(" "),
                        fired.join(" ")
                    );
                }
            }
        }
        Ok(out)
    }
}

/// The unrefined update over `{1, ∞}`: letter sets give `1` or `∞`, `|` is
/// `min`, `&` is `max`. No lifting, polarity or acceptance condition.
pub fn basic_step(waa: &Waa, letter: LetterId, family: &ValueFamily) -> Result<ValueFamily> {
    if family.0.iter().any(|v| !matches!(v, Value::Fin(1) | Value::Inf)) {
        return Err(Error::Invalid("basic step expects values in {1, inf}".into()));
    }
    fn eval(c: &Condition, letter: LetterId, next: &[Value]) -> Value {
        match c {
            Condition::Letters(b) if b.contains(letter) => Value::Fin(1),
            Condition::Letters(_) => Value::Inf,
            Condition::Next(q) => next[q.0],
            Condition::Or(l, r) => eval(l, letter, next).min(eval(r, letter, next)),
            Condition::And(l, r) => eval(l, letter, next).max(eval(r, letter, next)),
        }
    }
    Ok(ValueFamily(
        waa.states().map(|q| eval(waa.delta(q), letter, &family.0)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bda(text: &str) -> Bda {
        Bda::new(Waa::parse(text).unwrap()).unwrap()
    }

    fn f_a() -> Bda {
        bda("alphabet: a b\nstates: q\ndelta q = [a] | X q\n")
    }

    fn fam(values: &[Value]) -> ValueFamily {
        ValueFamily(values.to_vec())
    }

    use Value::{Fin, Inf};

    #[test]
    fn eval_condition_examples() {
        let b = f_a();
        let (a, l_b) = (LetterId(0), LetterId(1));
        assert_eq!(b.eval_condition(StateId(0), a, &fam(&[Inf])), Fin(0));
        assert_eq!(b.eval_condition(StateId(0), l_b, &fam(&[Fin(1)])), Fin(1));
        let g = bda("alphabet: a b\nstates: p\nrecurring: p\ndelta p = [a] & X p\n");
        assert_eq!(g.eval_condition(StateId(0), l_b, &fam(&[Inf])), Fin(0));
    }

    #[test]
    fn cross_polarity_reads_negated_value() {
        // p is recurring and accepted (inf); the non-recurring q sees it as 0.
        let b = bda("alphabet: a\nstates: q p\nrecurring: p\ndelta q = X p\ndelta p = X p\n");
        assert_eq!(b.eval_condition(StateId(0), LetterId(0), &fam(&[Inf, Inf])), Fin(0));
        assert_eq!(b.eval_condition(StateId(0), LetterId(0), &fam(&[Inf, Fin(1)])), Inf);
    }

    #[test]
    fn step_examples_on_eventually() {
        let b = f_a();
        let (a, l_b) = (LetterId(0), LetterId(1));
        let sets = |r: &TransitionRecord| r.fired.iter().map(|s| s.level).collect::<Vec<_>>();

        let r = b.step(a, &fam(&[Inf]));
        assert_eq!(r.result, fam(&[Fin(1)]));
        assert_eq!(r.critical, vec![1]);
        assert_eq!(sets(&r), vec![1]);

        let r = b.step(l_b, &fam(&[Inf]));
        assert_eq!(r.result, fam(&[Inf]));
        assert_eq!(r.critical, vec![0]);
        assert_eq!(sets(&r), vec![1]);

        let r = b.step(l_b, &fam(&[Fin(1)]));
        assert_eq!(r.result, fam(&[Fin(1)]));
        assert_eq!(r.critical, vec![0]);
        assert!(r.fired.is_empty());
    }

    #[test]
    fn lifting_in_two_state_scc() {
        // q0 reads q1 and is immediately true on a; q1 waits on q0.
        let b = bda("alphabet: a b\nstates: q0 q1\ndelta q0 = [a] | X q1\ndelta q1 = X q0\n");
        let r = b.step(LetterId(1), &fam(&[Fin(1), Fin(2)]));
        // tilde = (2, 1): 0 absent, no lifting, nothing above 2 is empty.
        assert_eq!(r.result, fam(&[Fin(2), Fin(1)]));
        assert_eq!(r.critical, vec![0]);
        assert!(r.fired.is_empty());
        let r = b.step(LetterId(0), &fam(&[Fin(2), Fin(1)]));
        // tilde = (0, 2): m = 1, 0 lifts to 1, 2 stays.
        assert_eq!(r.result, fam(&[Fin(1), Fin(2)]));
        assert_eq!(r.critical, vec![1]);
        assert_eq!(r.fired, vec![BuchiSet { scc: SccId(0), level: 1 }]);
    }

    #[test]
    fn output_examples() {
        let b = f_a();
        assert_eq!(b.output(&fam(&[Fin(1)])), BTreeSet::from([StateId(0)]));
        assert!(b.output(&fam(&[Inf])).is_empty());
        let b = bda("alphabet: a\nstates: p q\nrecurring: p\ndelta p = X p\ndelta q = X q\n");
        assert_eq!(b.output(&fam(&[Inf, Inf])), BTreeSet::from([StateId(0)]));
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(f_a().enumerate_state_space(10).unwrap().len(), 2);
        let two = bda("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = X q0\n");
        let all = two.enumerate_state_space(100).unwrap();
        assert_eq!(all.len(), 9);
        assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), 9);
        assert!(all.iter().all(|f| f.is_well_formed(two.waa())));
        for (i, f) in all.iter().enumerate() {
            assert_eq!(two.index_of(&f.0), i as u64);
        }
        assert_eq!(two.num_buchi_sets(), 2);
        assert!(matches!(two.enumerate_state_space(8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn basic_step_examples() {
        let w = Waa::parse("alphabet: a b\nstates: q\ndelta q = X q\n").unwrap();
        for v in [Fin(1), Inf] {
            assert_eq!(basic_step(&w, LetterId(0), &fam(&[v])).unwrap(), fam(&[v]));
        }
        let w = Waa::parse("alphabet: a b\nstates: q\ndelta q = [a]\n").unwrap();
        assert_eq!(basic_step(&w, LetterId(0), &fam(&[Inf])).unwrap(), fam(&[Fin(1)]));
        assert_eq!(basic_step(&w, LetterId(1), &fam(&[Fin(1)])).unwrap(), fam(&[Inf]));
        assert!(basic_step(&w, LetterId(1), &fam(&[Fin(2)])).is_err());
    }

    #[test]
    fn not_weak_is_rejected() {
        let w = Waa::parse("alphabet: a\nstates: q0 q1\nrecurring: q0\ndelta q0 = X q1\ndelta q1 = X q0\n").unwrap();
        assert!(matches!(Bda::new(w), Err(Error::NotWeak { .. })));
    }
}
