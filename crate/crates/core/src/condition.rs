//! Transition conditions: positive boolean combinations of letter sets and
//! next-state atoms.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{Alphabet, LetterId, LetterSet};
use crate::error::Result;
use crate::lex::{Lexer, Tok};
use crate::waa::StateId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Condition {
    /// True at a position iff the letter there belongs to the set.
    Letters(LetterSet),
    /// Requires acceptance from the state at the next position.
    Next(StateId),
    Or(Box<Condition>, Box<Condition>),
    And(Box<Condition>, Box<Condition>),
}

impl Condition {
    pub fn letter(letter: LetterId) -> Self {
        Condition::Letters(LetterSet::singleton(letter))
    }

    pub fn next(state: StateId) -> Self {
        Condition::Next(state)
    }

    pub fn or(self, other: Condition) -> Self {
        Condition::Or(Box::new(self), Box::new(other))
    }

    pub fn and(self, other: Condition) -> Self {
        Condition::And(Box::new(self), Box::new(other))
    }

    /// Right-nested disjunction; `None` for an empty iterator.
    pub fn any(items: impl IntoIterator<Item = Condition>) -> Option<Condition> {
        let items: Vec<_> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, c| c.or(acc))
    }

    /// Right-nested conjunction; `None` for an empty iterator.
    pub fn all(items: impl IntoIterator<Item = Condition>) -> Option<Condition> {
        let items: Vec<_> = items.into_iter().collect();
        items.into_iter().rev().reduce(|acc, c| c.and(acc))
    }

    /// The complementary condition: letter sets are complemented, `|` and `&`
    /// are exchanged, next-state atoms are kept.
    pub fn dual(&self, alphabet: &Alphabet) -> Condition {
        match self {
            Condition::Letters(b) => Condition::Letters(b.complement(alphabet)),
            Condition::Next(q) => Condition::Next(*q),
            Condition::Or(l, r) => l.dual(alphabet).and(r.dual(alphabet)),
            Condition::And(l, r) => l.dual(alphabet).or(r.dual(alphabet)),
        }
    }

    /// Every distinct subformula once, children before parents.
    pub fn subformulas(&self) -> Vec<&Condition> {
        fn walk<'a>(c: &'a Condition, out: &mut Vec<&'a Condition>) {
            if let Condition::Or(l, r) | Condition::And(l, r) = c {
                walk(l, out);
                walk(r, out);
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// States `q'` such that `X q'` occurs in the condition.
    pub fn successors(&self) -> BTreeSet<StateId> {
        let mut out = BTreeSet::new();
        self.visit_next(&mut |q| {
            out.insert(q);
        });
        out
    }

    pub(crate) fn visit_next(&self, f: &mut impl FnMut(StateId)) {
        match self {
            Condition::Letters(_) => {}
            Condition::Next(q) => f(*q),
            Condition::Or(l, r) | Condition::And(l, r) => {
                l.visit_next(f);
                r.visit_next(f);
            }
        }
    }

    /// Boolean evaluation given the current letter and acceptance at the next position.
    pub fn holds(&self, letter: LetterId, next: &impl Fn(StateId) -> bool) -> bool {
        match self {
            Condition::Letters(b) => b.contains(letter),
            Condition::Next(q) => next(*q),
            Condition::Or(l, r) => l.holds(letter, next) || r.holds(letter, next),
            Condition::And(l, r) => l.holds(letter, next) && r.holds(letter, next),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Condition::Letters(_) | Condition::Next(_) => 1,
            Condition::Or(l, r) | Condition::And(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet, states: &'a [String]) -> impl fmt::Display + 'a {
        DisplayCondition {
            cond: self,
            alphabet,
            states,
        }
    }

    /// Parses `cond := term ('|' term)*`, `term := atom ('&' atom)*`,
    /// `atom := '[' letter* ']' | 'X' state | '(' cond ')'`.
    pub fn parse(
        text: &str,
        alphabet: &Alphabet,
        resolve: &dyn Fn(&str) -> Option<StateId>,
        line: usize,
    ) -> Result<Condition> {
        let mut lx = Lexer::new(text, line)?;
        let c = parse_or(&mut lx, alphabet, resolve)?;
        lx.finish()?;
        Ok(c)
    }
}

fn parse_or(
    lx: &mut Lexer,
    alphabet: &Alphabet,
    resolve: &dyn Fn(&str) -> Option<StateId>,
) -> Result<Condition> {
    let mut acc = parse_and(lx, alphabet, resolve)?;
    while lx.eat('|') {
        acc = acc.or(parse_and(lx, alphabet, resolve)?);
    }
    Ok(acc)
}

fn parse_and(
    lx: &mut Lexer,
    alphabet: &Alphabet,
    resolve: &dyn Fn(&str) -> Option<StateId>,
) -> Result<Condition> {
    let mut acc = parse_atom(lx, alphabet, resolve)?;
    while lx.eat('&') {
        acc = acc.and(parse_atom(lx, alphabet, resolve)?);
    }
    Ok(acc)
}

fn parse_atom(
    lx: &mut Lexer,
    alphabet: &Alphabet,
    resolve: &dyn Fn(&str) -> Option<StateId>,
) -> Result<Condition> {
    match lx.next() {
        Some(Tok::Sym('[')) => {
            let mut set = LetterSet::EMPTY;
            loop {
                match lx.next() {
                    Some(Tok::Sym(']')) => break,
                    Some(Tok::Ident(name)) => match alphabet.lookup(&name) {
                        Some(l) => set.insert(l),
                        None => return Err(lx.error_prev(format!("unknown letter `{name}`"))),
                    },
                    _ => return Err(lx.error_prev("expected a letter or `]`")),
                }
            }
            Ok(Condition::Letters(set))
        }
        Some(Tok::Sym('(')) => {
            let c = parse_or(lx, alphabet, resolve)?;
            lx.expect(')')?;
            Ok(c)
        }
        Some(Tok::Ident(x)) if x == "X" => {
            let name = lx.ident()?;
            resolve(&name)
                .map(Condition::Next)
                .ok_or_else(|| lx.error_prev(format!("unknown state `{name}`")))
        }
        _ => Err(lx.error_prev("expected `[`, `X` or `(`")),
    }
}

struct DisplayCondition<'a> {
    cond: &'a Condition,
    alphabet: &'a Alphabet,
    states: &'a [String],
}

impl DisplayCondition<'_> {
    fn with<'b>(&'b self, cond: &'b Condition) -> DisplayCondition<'b> {
        DisplayCondition {
            cond,
            alphabet: self.alphabet,
            states: self.states,
        }
    }
}

impl fmt::Display for DisplayCondition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cond {
            Condition::Letters(b) => write!(f, "{}", b.display(self.alphabet)),
            Condition::Next(q) => write!(f, "X {}", self.states[q.0]),
            Condition::Or(l, r) => {
                write!(f, "{} | ", self.with(l))?;
                if matches!(**r, Condition::Or(..)) {
                    write!(f, "({})", self.with(r))
                } else {
                    write!(f, "{}", self.with(r))
                }
            }
            Condition::And(l, r) => {
                let paren_left = matches!(**l, Condition::Or(..));
                let paren_right = matches!(**r, Condition::Or(..) | Condition::And(..));
                if paren_left {
                    write!(f, "({}) & ", self.with(l))?;
                } else {
                    write!(f, "{} & ", self.with(l))?;
                }
                if paren_right {
                    write!(f, "({})", self.with(r))
                } else {
                    write!(f, "{}", self.with(r))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn resolve(name: &str) -> Option<StateId> {
        name.strip_prefix('q').and_then(|n| n.parse().ok()).map(StateId)
    }

    fn parse(s: &str) -> Condition {
        Condition::parse(s, &ab(), &resolve, 1).unwrap()
    }

    #[test]
    fn precedence_and_binds_tighter() {
        let c = parse("[a] | X q1 & X q0");
        let a = Condition::letter(LetterId(0));
        assert_eq!(c, a.or(Condition::next(StateId(1)).and(Condition::next(StateId(0)))));
    }

    #[test]
    fn dual_examples() {
        let c = parse("[a] | X q0");
        assert_eq!(c.dual(&ab()), parse("[b] & X q0"));
        let c = parse("([a] & X q1) | [b]");
        assert_eq!(c.dual(&ab()), parse("([b] | X q1) & [a]"));
        assert_eq!(c.dual(&ab()).dual(&ab()), c);
    }

    #[test]
    fn empty_and_full_letter_sets() {
        assert_eq!(parse("[]"), Condition::Letters(LetterSet::EMPTY));
        assert_eq!(parse("[]").dual(&ab()), parse("[a b]"));
    }

    #[test]
    fn subformulas_children_first() {
        let c = parse("[a] | X q0");
        let subs = c.subformulas();
        assert_eq!(subs.len(), 3);
        assert_eq!(subs[0], &parse("[a]"));
        assert_eq!(subs[1], &parse("X q0"));
        assert_eq!(subs[2], &c);

        assert_eq!(parse("X q0").subformulas(), vec![&parse("X q0")]);
        let c = parse("([a] & X q0) | [b]");
        let subs = c.subformulas();
        assert_eq!(subs.len(), 5);
        assert_eq!(subs[2], &parse("[a] & X q0"));
        assert_eq!(subs[4], &c);
    }

    #[test]
    fn display_round_trips() {
        let names: Vec<String> = (0..3).map(|i| format!("q{i}")).collect();
        for s in [
            "[a] | X q1 & X q0",
            "([a] | [b]) & X q2",
            "[a] | ([b] | X q0)",
            "[a] & ([b] & X q0)",
            "([a] & [b]) & X q0",
            "[]",
        ] {
            let c = parse(s);
            let printed = c.display(&ab(), &names).to_string();
            assert_eq!(parse(&printed), c, "{printed}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = Condition::parse("[a] | X q9x", &ab(), &resolve, 3).unwrap_err();
        assert!(matches!(err, crate::Error::Parse { line: 3, .. }));
        assert!(Condition::parse("[c]", &ab(), &resolve, 1).is_err());
        assert!(Condition::parse("[a] |", &ab(), &resolve, 1).is_err());
    }
}
