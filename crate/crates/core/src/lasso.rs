//! Ultimately periodic words `u v^ω`.

use std::fmt;

use crate::alphabet::{Alphabet, LetterId};
use crate::error::{Error, Result};

/// The word `prefix · period^ω`.
///
/// Positions `0 .. prefix.len() + period.len()` form the quotient: the
/// successor of the last position is `prefix.len()`. Positions `i` and
/// `i + |period|` with `i >= |prefix|` carry the same suffix, so any
/// position-indexed property of the ω-word is a function of the quotient position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<LetterId>,
    period: Vec<LetterId>,
}

impl LassoWord {
    pub fn new(prefix: Vec<LetterId>, period: Vec<LetterId>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("the period of a lasso must not be empty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn prefix(&self) -> &[LetterId] {
        &self.prefix
    }

    pub fn period(&self) -> &[LetterId] {
        &self.period
    }

    /// Number of quotient positions, `|u| + |v|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn loop_start(&self) -> usize {
        self.prefix.len()
    }

    pub fn letter(&self, pos: usize) -> LetterId {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[pos - self.prefix.len()]
        }
    }

    /// Successor in the quotient.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 == self.len() {
            self.prefix.len()
        } else {
            pos + 1
        }
    }

    /// Quotient position of an arbitrary position of the ω-word.
    pub fn quotient(&self, pos: usize) -> usize {
        if pos < self.prefix.len() {
            pos
        } else {
            self.prefix.len() + (pos - self.prefix.len()) % self.period.len()
        }
    }

    /// The same ω-word with the period written twice.
    pub fn doubled(&self) -> LassoWord {
        let mut period = self.period.clone();
        period.extend_from_slice(&self.period);
        LassoWord {
            prefix: self.prefix.clone(),
            period,
        }
    }

    /// The first `len` letters of the ω-word.
    pub fn unroll(&self, len: usize) -> Vec<LetterId> {
        (0..len).map(|i| self.letter(self.quotient(i))).collect()
    }

    /// Parses `u ; v` with whitespace-separated letters; `u` may be empty.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let (u, v) = text
            .split_once(';')
            .ok_or_else(|| Error::parse(1, 1, "expected `prefix ; period`"))?;
        let prefix = alphabet.parse_word(u)?;
        let period = alphabet.parse_word(v)?;
        if period.is_empty() {
            return Err(Error::parse(1, text.len(), "the period must not be empty"));
        }
        LassoWord::new(prefix, period)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayLasso(self, alphabet)
    }

    /// All lassos with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
    pub fn enumerate(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Vec<LassoWord> {
        let mut out = Vec::new();
        for lu in 0..=max_prefix {
            for lv in 1..=max_period {
                for u in words(alphabet.len(), lu) {
                    for v in words(alphabet.len(), lv) {
                        out.push(LassoWord {
                            prefix: u.clone(),
                            period: v,
                        });
                    }
                }
            }
        }
        out
    }

    /// All lassos with `|u| + |v| <= max_total`.
    pub fn enumerate_total(alphabet: &Alphabet, max_total: usize) -> Vec<LassoWord> {
        let mut out = Vec::new();
        for total in 1..=max_total {
            for lu in 0..total {
                for u in words(alphabet.len(), lu) {
                    for v in words(alphabet.len(), total - lu) {
                        out.push(LassoWord {
                            prefix: u.clone(),
                            period: v,
                        });
                    }
                }
            }
        }
        out
    }
}

fn words(letters: usize, len: usize) -> Vec<Vec<LetterId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..letters).map(move |a| {
                    let mut w = w.clone();
                    w.push(LetterId(a));
                    w
                })
            })
            .collect();
    }
    out
}

struct DisplayLasso<'a>(&'a LassoWord, &'a Alphabet);

impl fmt::Display for DisplayLasso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |w: &[LetterId]| w.iter().map(|l| self.1.name(*l)).collect::<Vec<_>>().join(" ");
        let u = names(&self.0.prefix);
        if u.is_empty() {
            write!(f, "; {}", names(&self.0.period))
        } else {
            write!(f, "{u} ; {}", names(&self.0.period))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let w = LassoWord::parse("b ; b a", &ab()).unwrap();
        assert_eq!(w.prefix(), [LetterId(1)]);
        assert_eq!(w.period(), [LetterId(1), LetterId(0)]);
        assert_eq!(w.display(&ab()).to_string(), "b ; b a");
        let w = LassoWord::parse("; a", &ab()).unwrap();
        assert!(w.prefix().is_empty());
        assert_eq!(w.display(&ab()).to_string(), "; a");
        assert!(LassoWord::parse("a ;", &ab()).is_err());
        assert!(LassoWord::parse("a", &ab()).is_err());
        assert!(LassoWord::parse("; c", &ab()).is_err());
    }

    #[test]
    fn quotient_successor() {
        let w = LassoWord::parse("b ; b a", &ab()).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.succ(2), 1);
        assert_eq!(w.quotient(5), 1);
        assert_eq!(w.unroll(5), vec![LetterId(1), LetterId(1), LetterId(0), LetterId(1), LetterId(0)]);
    }

    #[test]
    fn enumeration_counts() {
        // |u| <= 2 gives 1 + 2 + 4 prefixes, 1 <= |v| <= 3 gives 2 + 4 + 8 periods.
        assert_eq!(LassoWord::enumerate(&ab(), 2, 3).len(), 7 * 14);
        // total length t has t splits with 2^t words each: 2 + 8 + 24 + 64.
        assert_eq!(LassoWord::enumerate_total(&ab(), 4).len(), 98);
    }
}
