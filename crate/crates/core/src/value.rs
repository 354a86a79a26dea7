//! Values and value families: the states of the backward deterministic automaton.

use std::fmt;

use crate::error::{Error, Result};
use crate::waa::{StateId, Waa};

/// `Fin(k)` or `Inf`, ordered `Fin(0) < Fin(1) < … < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Fin(u32),
    Inf,
}

impl Value {
    /// Forgets the magnitude of a finite value.
    pub fn norm(self) -> Value {
        match self {
            Value::Inf => Value::Inf,
            Value::Fin(_) => Value::Fin(0),
        }
    }

    /// Swaps `0` and `∞`; only defined on normalized values.
    pub fn neg(self) -> Result<Value> {
        match self {
            Value::Inf => Ok(Value::Fin(0)),
            Value::Fin(0) => Ok(Value::Inf),
            Value::Fin(k) => Err(Error::Invalid(format!("neg is undefined on {k}"))),
        }
    }

    pub(crate) fn neg_norm(self) -> Value {
        match self {
            Value::Inf => Value::Fin(0),
            Value::Fin(_) => Value::Inf,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Value::Fin(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Fin(k) => write!(f, "{k}"),
            Value::Inf => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "∞" => Ok(Value::Inf),
            _ => s
                .parse()
                .map(Value::Fin)
                .map_err(|_| Error::parse(1, 1, format!("`{s}` is not a value"))),
        }
    }
}

/// A total map from automaton states to values, indexed by [`StateId`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueFamily(pub Vec<Value>);

impl ValueFamily {
    pub fn all_inf(n: usize) -> Self {
        ValueFamily(vec![Value::Inf; n])
    }

    pub fn get(&self, q: StateId) -> Value {
        self.0[q.0]
    }

    pub fn set(&mut self, q: StateId, v: Value) {
        self.0[q.0] = v;
    }

    /// Whether every finite coordinate lies in `1..=|SCC(q)|`.
    pub fn is_well_formed(&self, waa: &Waa) -> bool {
        self.0.len() == waa.num_states()
            && waa.states().all(|q| match self.get(q) {
                Value::Inf => true,
                Value::Fin(k) => k >= 1 && k as usize <= waa.scc(waa.scc_of(q)).size(),
            })
    }

    /// Renders as `q0=1 q1=inf` in state order.
    pub fn display<'a>(&'a self, waa: &'a Waa) -> impl fmt::Display + 'a {
        DisplayFamily(self, waa)
    }

    /// Parses the `q0=1 q1=inf` rendering; every state must be listed.
    pub fn parse(text: &str, waa: &Waa) -> Result<Self> {
        let mut values = vec![None; waa.num_states()];
        for item in text.split_whitespace() {
            let (name, v) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(1, 1, format!("expected `state=value`, got `{item}`")))?;
            let q = waa.lookup(name).ok_or_else(|| Error::UnknownState(name.to_string()))?;
            values[q.0] = Some(v.parse()?);
        }
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("no value for `{}`", waa.name(StateId(i))))))
            .collect::<Result<Vec<_>>>()
            .map(ValueFamily)
    }
}

struct DisplayFamily<'a>(&'a ValueFamily, &'a Waa);

impl fmt::Display for DisplayFamily<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0 .0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}={v}", self.1.name(StateId(i)))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        assert_eq!(Value::Inf.norm(), Value::Inf);
        assert_eq!(Value::Fin(3).norm(), Value::Fin(0));
        assert_eq!(Value::Fin(1).norm(), Value::Fin(0));
    }

    #[test]
    fn neg_examples() {
        assert_eq!(Value::Inf.neg(), Ok(Value::Fin(0)));
        assert_eq!(Value::Fin(0).neg(), Ok(Value::Inf));
        assert!(Value::Fin(2).neg().is_err());
    }

    #[test]
    fn ordering() {
        assert!(Value::Fin(0) < Value::Fin(1));
        assert!(Value::Fin(7) < Value::Inf);
        assert_eq!(Value::Fin(2).min(Value::Inf), Value::Fin(2));
    }

    #[test]
    fn family_round_trip() {
        let waa = Waa::parse("alphabet: a\nstates: q0 q1\ndelta q0 = X q1\ndelta q1 = X q0\n").unwrap();
        let fam = ValueFamily(vec![Value::Fin(2), Value::Inf]);
        let text = fam.display(&waa).to_string();
        assert_eq!(text, "q0=2 q1=inf");
        assert_eq!(ValueFamily::parse(&text, &waa).unwrap(), fam);
        assert!(fam.is_well_formed(&waa));
        assert!(!ValueFamily(vec![Value::Fin(3), Value::Inf]).is_well_formed(&waa));
    }
}
