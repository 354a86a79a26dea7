//! Linear temporal logic in negation normal form over the letters of an
//! alphabet, its translation into very weak alternating automata, and a direct
//! evaluator on lasso words.

use std::collections::HashMap;
use std::fmt;

use crate::alphabet::{Alphabet, LetterId, LetterSet};
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::lex::{Lexer, Tok};
use crate::nutl::{FixKind, NodeId, NutlTuple};
use crate::waa::{StateId, Waa};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ltl {
    Letter(LetterId),
    NegLetter(LetterId),
    Or(Box<Ltl>, Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Always(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    Release(Box<Ltl>, Box<Ltl>),
}

const KEYWORDS: [&str; 5] = ["X", "F", "G", "U", "R"];

impl Ltl {
    pub fn or(self, other: Ltl) -> Ltl {
        Ltl::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Ltl) -> Ltl {
        Ltl::And(Box::new(self), Box::new(other))
    }

    pub fn next(self) -> Ltl {
        Ltl::Next(Box::new(self))
    }

    pub fn eventually(self) -> Ltl {
        Ltl::Eventually(Box::new(self))
    }

    pub fn always(self) -> Ltl {
        Ltl::Always(Box::new(self))
    }

    pub fn until(self, other: Ltl) -> Ltl {
        Ltl::Until(Box::new(self), Box::new(other))
    }

    pub fn release(self, other: Ltl) -> Ltl {
        Ltl::Release(Box::new(self), Box::new(other))
    }

    /// Number of operator and atom nodes.
    pub fn size(&self) -> usize {
        match self {
            Ltl::Letter(_) | Ltl::NegLetter(_) => 1,
            Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Always(f) => 1 + f.size(),
            Ltl::Or(l, r) | Ltl::And(l, r) | Ltl::Until(l, r) | Ltl::Release(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    fn children(&self) -> Vec<&Ltl> {
        match self {
            Ltl::Letter(_) | Ltl::NegLetter(_) => vec![],
            Ltl::Next(f) | Ltl::Eventually(f) | Ltl::Always(f) => vec![f],
            Ltl::Or(l, r) | Ltl::And(l, r) | Ltl::Until(l, r) | Ltl::Release(l, r) => vec![l, r],
        }
    }

    /// Distinct subformulas in preorder, the formula itself first.
    pub fn subformulas(&self) -> Vec<&Ltl> {
        let mut out: Vec<&Ltl> = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.contains(&f) {
                continue;
            }
            out.push(f);
            for c in f.children().into_iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// The negation, pushed down to the letters.
    pub fn negate(&self) -> Ltl {
        match self {
            Ltl::Letter(a) => Ltl::NegLetter(*a),
            Ltl::NegLetter(a) => Ltl::Letter(*a),
            Ltl::Or(l, r) => l.negate().and(r.negate()),
            Ltl::And(l, r) => l.negate().or(r.negate()),
            Ltl::Next(f) => f.negate().next(),
            Ltl::Eventually(f) => f.negate().always(),
            Ltl::Always(f) => f.negate().eventually(),
            Ltl::Until(l, r) => l.negate().release(r.negate()),
            Ltl::Release(l, r) => l.negate().until(r.negate()),
        }
    }

    /// Letters occurring in the formula, in order of first occurrence.
    pub fn letter_names(text: &str) -> Result<Vec<String>> {
        let mut lx = Lexer::new(text, 1)?;
        let mut names = Vec::new();
        while let Some(tok) = lx.next() {
            if let Tok::Ident(s) = tok {
                if !KEYWORDS.contains(&s.as_str()) && !names.contains(&s) {
                    names.push(s);
                }
            }
        }
        Ok(names)
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Ltl> {
        for k in KEYWORDS {
            if alphabet.lookup(k).is_some() {
                return Err(Error::Invalid(format!("letter `{k}` clashes with an LTL operator")));
            }
        }
        let mut p = Parser {
            lx: Lexer::new(text, 1)?,
            alphabet,
        };
        let f = p.or()?;
        p.lx.finish()?;
        Ok(f)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        Shown { f: self, alphabet, level: 0 }
    }
}

struct Parser<'a> {
    lx: Lexer,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn or(&mut self) -> Result<Ltl> {
        let mut f = self.and()?;
        while self.lx.eat('|') {
            f = f.or(self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Ltl> {
        let mut f = self.binary()?;
        while self.lx.eat('&') {
            f = f.and(self.binary()?);
        }
        Ok(f)
    }

    fn binary(&mut self) -> Result<Ltl> {
        let left = self.unary()?;
        match self.lx.peek() {
            Some(Tok::Ident(s)) if s == "U" => {
                self.lx.next();
                Ok(left.until(self.binary()?))
            }
            Some(Tok::Ident(s)) if s == "R" => {
                self.lx.next();
                Ok(left.release(self.binary()?))
            }
            _ => Ok(left),
        }
    }

    fn unary(&mut self) -> Result<Ltl> {
        match self.lx.next() {
            Some(Tok::Sym('(')) => {
                let f = self.or()?;
                self.lx.expect(')')?;
                Ok(f)
            }
            Some(Tok::Sym('!')) => match self.lx.next() {
                Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => self.letter(&s).map(Ltl::NegLetter),
                _ => Err(self.lx.error_prev("negation is only allowed in front of a letter")),
            },
            Some(Tok::Ident(s)) => match s.as_str() {
                "X" => Ok(self.unary()?.next()),
                "F" => Ok(self.unary()?.eventually()),
                "G" => Ok(self.unary()?.always()),
                "U" | "R" => Err(self.lx.error_prev(format!("`{s}` needs a left operand"))),
                _ => self.letter(&s).map(Ltl::Letter),
            },
            Some(Tok::Sym(c)) => Err(self.lx.error_prev(format!("unexpected `{c}`"))),
            None => Err(self.lx.error("unexpected end of formula")),
        }
    }

    fn letter(&self, name: &str) -> Result<LetterId> {
        self.alphabet
            .lookup(name)
            .ok_or_else(|| self.lx.error_prev(format!("unknown letter `{name}`")))
    }
}

struct Shown<'a> {
    f: &'a Ltl,
    alphabet: &'a Alphabet,
    level: u8,
}

impl<'a> Shown<'a> {
    fn child(&self, f: &'a Ltl, level: u8) -> Shown<'a> {
        Shown { f, alphabet: self.alphabet, level }
    }
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |f, level| self.child(f, level);
        let (own, text) = match self.f {
            Ltl::Letter(a) => (3, self.alphabet.name(*a).to_string()),
            Ltl::NegLetter(a) => (3, format!("!{}", self.alphabet.name(*a))),
            Ltl::Next(f) => (3, format!("X {}", sub(f, 3))),
            Ltl::Eventually(f) => (3, format!("F {}", sub(f, 3))),
            Ltl::Always(f) => (3, format!("G {}", sub(f, 3))),
            Ltl::Until(l, r) => (2, format!("{} U {}", sub(l, 3), sub(r, 2))),
            Ltl::Release(l, r) => (2, format!("{} R {}", sub(l, 3), sub(r, 2))),
            Ltl::And(l, r) => (1, format!("{} & {}", sub(l, 1), sub(r, 2))),
            Ltl::Or(l, r) => (0, format!("{} | {}", sub(l, 0), sub(r, 1))),
        };
        if own < self.level {
            write!(out, "({text})")
        } else {
            write!(out, "{text}")
        }
    }
}

/// Expands a formula over atomic propositions into one over the letters of
/// [`Alphabet::from_propositions`]: a proposition becomes the disjunction of
/// all letters in which it holds.
pub fn expand_propositions<S: AsRef<str>>(text: &str, props: &[S]) -> Result<(Alphabet, Ltl)> {
    let names: Vec<&str> = props.iter().map(AsRef::as_ref).collect();
    let prop_alphabet = Alphabet::new(names.iter().copied())?;
    let f = Ltl::parse(text, &prop_alphabet)?;
    let letters = Alphabet::from_propositions(&names)?;
    let with = |p: LetterId, value: bool| {
        let disjuncts: Vec<Ltl> = letters
            .letters()
            .filter(|l| ((l.0 >> p.0) & 1 == 1) == value)
            .map(Ltl::Letter)
            .collect();
        disjuncts
            .into_iter()
            .rev()
            .reduce(|acc, l| l.or(acc))
            .expect("every proposition holds in some letter")
    };
    fn go(f: &Ltl, with: &impl Fn(LetterId, bool) -> Ltl) -> Ltl {
        match f {
            Ltl::Letter(p) => with(*p, true),
            Ltl::NegLetter(p) => with(*p, false),
            Ltl::Or(l, r) => go(l, with).or(go(r, with)),
            Ltl::And(l, r) => go(l, with).and(go(r, with)),
            Ltl::Next(g) => go(g, with).next(),
            Ltl::Eventually(g) => go(g, with).eventually(),
            Ltl::Always(g) => go(g, with).always(),
            Ltl::Until(l, r) => go(l, with).until(go(r, with)),
            Ltl::Release(l, r) => go(l, with).release(go(r, with)),
        }
    }
    let expanded = go(&f, &with);
    Ok((letters, expanded))
}

/// One state `q_ψ` per distinct subformula, named `q0, q1, …` in the order of
/// [`Ltl::subformulas`]; the formula itself is `q0` and the only initial state.
pub fn ltl_to_waa(phi: &Ltl, alphabet: &Alphabet) -> Waa {
    let subs = phi.subformulas();
    let index: HashMap<&Ltl, StateId> = subs.iter().enumerate().map(|(i, f)| (*f, StateId(i))).collect();
    fn delta(f: &Ltl, index: &HashMap<&Ltl, StateId>, alphabet: &Alphabet) -> Condition {
        let me = || Condition::Next(index[f]);
        match f {
            Ltl::Letter(a) => Condition::letter(*a),
            Ltl::NegLetter(a) => Condition::Letters(LetterSet::singleton(*a).complement(alphabet)),
            Ltl::Or(l, r) => delta(l, index, alphabet).or(delta(r, index, alphabet)),
            Ltl::And(l, r) => delta(l, index, alphabet).and(delta(r, index, alphabet)),
            Ltl::Next(g) => Condition::Next(index[&**g]),
            Ltl::Eventually(g) => delta(g, index, alphabet).or(me()),
            Ltl::Always(g) => delta(g, index, alphabet).and(me()),
            Ltl::Until(l, r) => delta(r, index, alphabet).or(delta(l, index, alphabet).and(me())),
            Ltl::Release(l, r) => delta(r, index, alphabet).and(delta(l, index, alphabet).or(me())),
        }
    }
    let conds = subs.iter().map(|f| delta(f, &index, alphabet)).collect();
    let recurring = subs
        .iter()
        .map(|f| matches!(f, Ltl::Always(_) | Ltl::Release(..)))
        .collect();
    let names = (0..subs.len()).map(|i| format!("q{i}")).collect();
    Waa::new(alphabet.clone(), names, conds, recurring, Some(vec![StateId(0)]))
        .expect("translated formulas give well-formed automata")
}

/// Truth of `phi` at every quotient position of `w`, by scanning the path
/// from each position; all relevant positions are met within `|u| + |v|` steps.
pub fn ltl_eval_lasso(phi: &Ltl, w: &LassoWord) -> Vec<bool> {
    let n = w.len();
    let path = |p: usize| std::iter::successors(Some(p), move |&q| Some(w.succ(q))).take(n);
    match phi {
        Ltl::Letter(a) => (0..n).map(|p| w.letter(p) == *a).collect(),
        Ltl::NegLetter(a) => (0..n).map(|p| w.letter(p) != *a).collect(),
        Ltl::Or(l, r) => zip(ltl_eval_lasso(l, w), ltl_eval_lasso(r, w), |x, y| x || y),
        Ltl::And(l, r) => zip(ltl_eval_lasso(l, w), ltl_eval_lasso(r, w), |x, y| x && y),
        Ltl::Next(f) => {
            let t = ltl_eval_lasso(f, w);
            (0..n).map(|p| t[w.succ(p)]).collect()
        }
        Ltl::Eventually(f) => {
            let t = ltl_eval_lasso(f, w);
            (0..n).map(|p| path(p).any(|q| t[q])).collect()
        }
        Ltl::Always(f) => {
            let t = ltl_eval_lasso(f, w);
            (0..n).map(|p| path(p).all(|q| t[q])).collect()
        }
        Ltl::Until(l, r) => {
            let (tl, tr) = (ltl_eval_lasso(l, w), ltl_eval_lasso(r, w));
            (0..n)
                .map(|p| {
                    for q in path(p) {
                        if tr[q] {
                            return true;
                        }
                        if !tl[q] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        Ltl::Release(l, r) => {
            let (tl, tr) = (ltl_eval_lasso(l, w), ltl_eval_lasso(r, w));
            (0..n)
                .map(|p| {
                    for q in path(p) {
                        if !tr[q] {
                            return false;
                        }
                        if tl[q] {
                            return true;
                        }
                    }
                    true
                })
                .collect()
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// The same formula as a νTL root of `t`: `F`, `U` become least and `G`, `R`
/// greatest fixed points over fresh variables `Y0, Y1, …`.
pub fn ltl_to_nutl(phi: &Ltl, t: &mut NutlTuple) -> Result<NodeId> {
    fn go<'f>(f: &'f Ltl, t: &mut NutlTuple, memo: &mut HashMap<&'f Ltl, NodeId>) -> Result<NodeId> {
        if let Some(&n) = memo.get(f) {
            return Ok(n);
        }
        let fixpoint = |t: &mut NutlTuple, kind, body: &dyn Fn(&mut NutlTuple, NodeId) -> NodeId| {
            let mut k = 0;
            let v = loop {
                let name = format!("Y{k}");
                let v = t.variable(&name)?;
                if t.binder(v).is_none() {
                    break v;
                }
                k += 1;
            };
            let x = t.var(v);
            let next = t.next(x);
            let b = body(t, next);
            let block = t.fix_block(kind, vec![v], vec![b])?;
            t.fix(block, 0)
        };
        let n = match f {
            Ltl::Letter(a) => t.letter(*a),
            Ltl::NegLetter(a) => t.neg_letter(*a),
            Ltl::Or(l, r) => {
                let (l, r) = (go(l, t, memo)?, go(r, t, memo)?);
                t.or(l, r)
            }
            Ltl::And(l, r) => {
                let (l, r) = (go(l, t, memo)?, go(r, t, memo)?);
                t.and(l, r)
            }
            Ltl::Next(g) => {
                let g = go(g, t, memo)?;
                t.next(g)
            }
            Ltl::Eventually(g) => {
                let g = go(g, t, memo)?;
                fixpoint(t, FixKind::Mu, &|t, next| t.or(g, next))?
            }
            Ltl::Always(g) => {
                let g = go(g, t, memo)?;
                fixpoint(t, FixKind::Nu, &|t, next| t.and(g, next))?
            }
            Ltl::Until(l, r) => {
                let (l, r) = (go(l, t, memo)?, go(r, t, memo)?);
                fixpoint(t, FixKind::Mu, &|t, next| {
                    let step = t.and(l, next);
                    t.or(r, step)
                })?
            }
            Ltl::Release(l, r) => {
                let (l, r) = (go(l, t, memo)?, go(r, t, memo)?);
                fixpoint(t, FixKind::Nu, &|t, next| {
                    let step = t.or(l, next);
                    t.and(r, step)
                })?
            }
        };
        memo.insert(f, n);
        Ok(n)
    }
    go(phi, t, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::run::waa_acceptance;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b", "c"]).unwrap()
    }

    fn parse(s: &str) -> Ltl {
        Ltl::parse(s, &ab()).unwrap()
    }

    #[test]
    fn parses_operators_and_precedence() {
        let a = Ltl::Letter(LetterId(0));
        let b = Ltl::Letter(LetterId(1));
        let c = Ltl::Letter(LetterId(2));
        assert_eq!(parse("F a"), a.clone().eventually());
        assert_eq!(parse("a U (b & X c)"), a.clone().until(b.clone().and(c.clone().next())));
        assert_eq!(parse("a U b U c"), a.clone().until(b.clone().until(c.clone())));
        assert_eq!(parse("a | b & c"), a.clone().or(b.clone().and(c)));
        assert_eq!(parse("!a R b"), Ltl::NegLetter(LetterId(0)).release(b));
    }

    #[test]
    fn rejects_non_nnf_and_unknown_letters() {
        let err = Ltl::parse("!(a U b)", &ab()).unwrap_err();
        assert!(err.to_string().contains("negation"), "{err}");
        assert!(Ltl::parse("F d", &ab()).is_err());
        assert!(Ltl::parse("a U", &ab()).is_err());
        assert!(Ltl::parse("U a", &ab()).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["F a", "a U (b & X c)", "(a U b) U c", "G (a | b) & !c", "X (a R (b | c))"] {
            let f = parse(s);
            let shown = f.display(&ab()).to_string();
            assert_eq!(parse(&shown), f, "{s} shown as {shown}");
        }
    }

    #[test]
    fn translation_equations() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let w = ltl_to_waa(&Ltl::parse("F a", &al).unwrap(), &al);
        assert_eq!(w.num_states(), 2);
        assert_eq!(w.delta(StateId(0)).display(&al, w.state_names()).to_string(), "[a] | X q0");
        assert!(!w.is_recurring(StateId(0)));
        assert!(w.is_very_weak());

        let w = ltl_to_waa(&Ltl::parse("G a", &al).unwrap(), &al);
        assert_eq!(w.delta(StateId(0)).display(&al, w.state_names()).to_string(), "[a] & X q0");
        assert!(w.is_recurring(StateId(0)));

        let w = ltl_to_waa(&Ltl::parse("a U b", &al).unwrap(), &al);
        assert_eq!(
            w.delta(StateId(0)).display(&al, w.state_names()).to_string(),
            "[b] | [a] & X q0"
        );
        assert!(!w.is_recurring(StateId(0)));

        let w = ltl_to_waa(&Ltl::parse("!a R b", &al).unwrap(), &al);
        assert_eq!(
            w.delta(StateId(0)).display(&al, w.state_names()).to_string(),
            "[b] & ([b] | X q0)"
        );
        assert!(w.is_recurring(StateId(0)));
    }

    #[test]
    fn shared_subformulas_share_states() {
        let f = parse("F a & G F a");
        assert_eq!(f.subformulas().len(), 4);
        assert_eq!(ltl_to_waa(&f, &ab()).num_states(), 4);
    }

    #[test]
    fn evaluator_examples() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let w = LassoWord::parse("b ; b a", &al).unwrap();
        assert!(ltl_eval_lasso(&Ltl::parse("F a", &al).unwrap(), &w)[0]);
        let w = LassoWord::parse("; a", &al).unwrap();
        assert!(ltl_eval_lasso(&Ltl::parse("G a", &al).unwrap(), &w).iter().all(|&t| t));
        assert!(ltl_eval_lasso(&Ltl::parse("a U b", &al).unwrap(), &w).iter().all(|&t| !t));
        let w = LassoWord::parse("a a ; b", &al).unwrap();
        assert_eq!(ltl_eval_lasso(&Ltl::parse("X X b", &al).unwrap(), &w), vec![true, true, true]);
        assert_eq!(ltl_eval_lasso(&Ltl::parse("b R a", &al).unwrap(), &w), vec![false; 3]);
    }

    #[test]
    fn evaluator_agrees_with_unrolled_words() {
        // Finite-horizon check: on a long unrolling, F/U witnesses appear early.
        let al = Alphabet::new(["a", "b"]).unwrap();
        let f = Ltl::parse("a U b", &al).unwrap();
        let w = LassoWord::parse("a ; a a b", &al).unwrap();
        let word = w.unroll(12);
        let t = ltl_eval_lasso(&f, &w);
        for p in 0..w.len() {
            let expected = word[p..]
                .iter()
                .position(|&l| l == LetterId(1))
                .is_some_and(|k| word[p..p + k].iter().all(|&l| l == LetterId(0)));
            assert_eq!(t[p], expected, "position {p}");
        }
    }

    #[test]
    fn automaton_matches_evaluator_on_small_formulas() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        for s in ["F a", "G !a", "a U b", "a R b", "X (a & F b)", "G F a", "F G b", "(a U b) | G a"] {
            let f = Ltl::parse(s, &al).unwrap();
            let waa = ltl_to_waa(&f, &al);
            for w in LassoWord::enumerate(&al, 2, 2) {
                let acc = waa_acceptance(&waa, &w);
                let t = ltl_eval_lasso(&f, &w);
                for p in 0..w.len() {
                    assert_eq!(acc[p][0], t[p], "{s} on {} at {p}", w.display(&al));
                }
            }
        }
    }

    #[test]
    fn propositions_expand_to_letter_sets() {
        let (al, f) = expand_propositions("p U q", &["p", "q"]).unwrap();
        assert_eq!(al.len(), 4);
        let w = LassoWord::parse("b10 ; b01 b10", &al).unwrap();
        assert_eq!(ltl_eval_lasso(&f, &w), vec![true, true, true]);
        let w = LassoWord::parse("b01 ; b10", &al).unwrap();
        assert_eq!(ltl_eval_lasso(&f, &w), vec![true, false]);
    }

    #[test]
    fn nutl_encoding_agrees() {
        use crate::nutl::nutl_eval_lasso;
        let al = Alphabet::new(["a", "b"]).unwrap();
        for s in ["F a", "G !a", "a U X b", "a R b", "G F a & F G b", "X (a U b) | G a"] {
            let f = Ltl::parse(s, &al).unwrap();
            let mut t = NutlTuple::new(al.clone());
            let root = ltl_to_nutl(&f, &mut t).unwrap();
            t.push_root(root);
            for w in LassoWord::enumerate(&al, 2, 2) {
                let sets = nutl_eval_lasso(&t, &w).unwrap();
                let expected = ltl_eval_lasso(&f, &w);
                for p in 0..w.len() {
                    assert_eq!(sets[p].contains(&0), expected[p], "{s}");
                }
            }
        }
    }

    #[test]
    fn negation_complements() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        let f = Ltl::parse("a U X b | G F !a", &al).unwrap();
        let g = f.negate();
        for w in LassoWord::enumerate(&al, 2, 2) {
            let (t, u) = (ltl_eval_lasso(&f, &w), ltl_eval_lasso(&g, &w));
            assert!(t.iter().zip(&u).all(|(x, y)| x != y));
        }
    }

}
