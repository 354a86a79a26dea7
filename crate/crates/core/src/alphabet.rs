//! Finite alphabets and letter sets.

use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterId(pub usize);

/// A non-empty, ordered set of distinct letter names.
///
/// Letter sets are stored as 64-bit masks, so an alphabet holds at most 64 letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

pub const MAX_LETTERS: usize = 64;

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::Invalid("alphabet must not be empty".into()));
        }
        if letters.len() > MAX_LETTERS {
            return Err(Error::Invalid(format!(
                "alphabet has {} letters, at most {MAX_LETTERS} are supported",
                letters.len()
            )));
        }
        for (i, l) in letters.iter().enumerate() {
            if !is_identifier(l) {
                return Err(Error::Invalid(format!("`{l}` is not a valid letter name")));
            }
            if letters[..i].contains(l) {
                return Err(Error::Invalid(format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// The alphabet `2^AP` over atomic propositions. The letter for a valuation is
    /// named `b` followed by one bit per proposition, e.g. `b10` for `p=1, q=0`.
    pub fn from_propositions<S: AsRef<str>>(props: &[S]) -> Result<Self> {
        if props.len() > 6 {
            return Err(Error::Invalid(
                "at most 6 atomic propositions are supported".into(),
            ));
        }
        let k = props.len();
        Alphabet::new((0..1usize << k).map(|bits| {
            let mut name = String::from("b");
            for p in 0..k {
                name.push(if bits >> p & 1 == 1 { '1' } else { '0' });
            }
            name
        }))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.letters.len()).map(LetterId)
    }

    pub fn name(&self, letter: LetterId) -> &str {
        &self.letters[letter.0]
    }

    pub fn names(&self) -> &[String] {
        &self.letters
    }

    pub fn lookup(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l == name).map(LetterId)
    }

    pub fn resolve(&self, name: &str) -> Result<LetterId> {
        self.lookup(name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn full(&self) -> LetterSet {
        if self.letters.len() == 64 {
            LetterSet(u64::MAX)
        } else {
            LetterSet((1u64 << self.letters.len()) - 1)
        }
    }

    /// Parses a whitespace-separated list of letters.
    pub fn parse_word(&self, text: &str) -> Result<Vec<LetterId>> {
        text.split_whitespace().map(|t| self.resolve(t)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.letters.join(" "))
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A subset `B` of an alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LetterSet(pub u64);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn singleton(letter: LetterId) -> Self {
        LetterSet(1 << letter.0)
    }

    pub fn contains(self, letter: LetterId) -> bool {
        self.0 >> letter.0 & 1 == 1
    }

    pub fn insert(&mut self, letter: LetterId) {
        self.0 |= 1 << letter.0;
    }

    pub fn complement(self, alphabet: &Alphabet) -> Self {
        LetterSet(!self.0 & alphabet.full().0)
    }

    pub fn is_subset_of(self, other: LetterSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = LetterId> {
        (0..64).filter(move |i| self.0 >> i & 1 == 1).map(LetterId)
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayLetters(*self, alphabet)
    }
}

struct DisplayLetters<'a>(LetterSet, &'a Alphabet);

impl fmt::Display for DisplayLetters<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.1.name(l))?;
        }
        f.write_str("]")
    }
}
