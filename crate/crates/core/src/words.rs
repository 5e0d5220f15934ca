//! Words over the positive integers and their shuffle products.
//!
//! A [`Word`] is an immutable sequence of letters `>= 1`. The letter values
//! are unbounded so that shifting is closed. Words of single-digit letters
//! print as compact digit strings; anything else prints as comma-separated
//! decimals, e.g. `9,9,7,7,8,...`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use smallvec::SmallVec;
use thiserror::Error;

use crate::lincomb::LinComb;

/// A letter of the ordered alphabet `1 < 2 < 3 < ...`.
pub type Letter = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letters must be >= 1")]
    ZeroLetter,
    #[error("shift amount {shift} is smaller than the maximal letter {max} of the left factor")]
    ShiftTooSmall { shift: Letter, max: Letter },
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// An immutable word; the empty word is allowed (it is the shuffle unit).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(SmallVec<[Letter; 18]>);

impl Word {
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Self, WordError> {
        let v: SmallVec<[Letter; 18]> = letters.into_iter().collect();
        if v.contains(&0) {
            return Err(WordError::ZeroLetter);
        }
        Ok(Word(v))
    }

    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    /// Single-letter word.
    pub fn letter(a: Letter) -> Result<Self, WordError> {
        Self::new([a])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest letter, or 0 for the empty word.
    pub fn max_letter(&self) -> Letter {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Count of each letter `1..=max`, trimmed to the maximal letter.
    ///
    /// `evaluation("212313") = [2, 2, 2]`; the empty word evaluates to `[]`.
    pub fn evaluation(&self) -> Vec<u64> {
        let max = self.max_letter() as usize;
        let mut counts = vec![0u64; max];
        for &a in &self.0 {
            counts[(a - 1) as usize] += 1;
        }
        counts
    }

    /// Replace each letter `i` by `i + k`.
    pub fn shift(&self, k: Letter) -> Word {
        Word(self.0.iter().map(|&a| a + k).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Subword on an index range (0-based, half-open).
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].iter().copied().collect())
    }

}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a <= 9) {
            for &a in &self.0 {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let parse_err = |reason: &str| WordError::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let letters: Vec<Letter> = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<Letter>())
                .collect::<Result<_, _>>()
                .map_err(|e| parse_err(&e.to_string()))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).ok_or(()))
                .collect::<Result<_, _>>()
                .map_err(|()| parse_err("expected digits or comma-separated numbers"))?
        };
        Word::new(letters)
    }
}

/// Linear combination of words; coefficients are exact integers.
pub type WordLinComb = LinComb<Word>;

/// The recursive shuffle product `au * bv = a(u * bv) + b(au * v)`.
///
/// With overlapping alphabets the coefficients count interleavings, so the
/// total mass is always `binomial(|u| + |v|, |u|)`.
pub fn shuffle(u: &Word, v: &Word) -> WordLinComb {
    // The recursion `au * bv = a(u * bv) + b(au * v)` with an explicit
    // prefix accumulator, so each interleaving is built in linear time.
    fn go(u: &[Letter], v: &[Letter], prefix: &mut SmallVec<[Letter; 18]>, out: &mut WordLinComb) {
        if u.is_empty() && v.is_empty() {
            out.add_term(Word(prefix.clone()), BigInt::from(1));
            return;
        }
        if let Some((&a, rest)) = u.split_first() {
            prefix.push(a);
            go(rest, v, prefix, out);
            prefix.pop();
        }
        if let Some((&b, rest)) = v.split_first() {
            prefix.push(b);
            go(u, rest, prefix, out);
            prefix.pop();
        }
    }
    let mut out = LinComb::zero();
    let mut prefix = SmallVec::new();
    go(u.letters(), v.letters(), &mut prefix, &mut out);
    out
}

/// Shuffle `u` with `v` shifted by `shift`, which must be at least the
/// maximal letter of `u` so the two alphabets stay disjoint.
pub fn shifted_shuffle(u: &Word, v: &Word, shift: Letter) -> Result<WordLinComb, WordError> {
    if shift < u.max_letter() {
        return Err(WordError::ShiftTooSmall {
            shift,
            max: u.max_letter(),
        });
    }
    Ok(shuffle(u, &v.shift(shift)))
}
