//! The algebra on `m`-permutations whose product is the max-shifted shuffle,
//! split into `m + 1` operations along right-to-left minima.
//!
//! For basis words `s` and `t`, the product shuffles `s` with `t` shifted by
//! the maximal value of `s`. Tracking where the final letter of `s` lands
//! relative to the right-to-left minima of `t` partitions the shuffle into
//! the operations `Prec`, `Mid(1)..Mid(m-1)`, `Succ`: after the first
//! minimum, strictly between consecutive minima, or before the `m`-th one.

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::dendriform::OpLabel;
use crate::lincomb::LinComb;
use crate::relations::{relations, Assoc, RelSide, Relation};
use crate::sylvester::{adjacent, m_permutation_shape, SylvesterClass};
use crate::words::{shifted_shuffle, shuffle, Letter, Word, WordLinComb};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MfqsymError {
    #[error("word must be nonempty")]
    EmptyWord,
    #[error("word {0} has {1} right-to-left minima, fewer than {2}")]
    TooFewMinima(Word, usize, usize),
    #[error("middle operation index {0} out of range for m = {1}")]
    MidIndexOutOfRange(usize, usize),
    #[error("word {0} is not an m-permutation for m = {1}")]
    NotMPermutation(Word, usize),
    #[error(transparent)]
    Word(#[from] crate::words::WordError),
}

/// Positions (1-based) of the right-to-left minima of `w`, from the
/// rightmost (always `|w|`) to the leftmost.
pub fn rtl_minima(w: &Word) -> Result<Vec<usize>, MfqsymError> {
    if w.is_empty() {
        return Err(MfqsymError::EmptyWord);
    }
    let letters = w.letters();
    let mut minima = Vec::new();
    let mut best = Letter::MAX;
    for (idx, &a) in letters.iter().enumerate().rev() {
        if a <= best {
            minima.push(idx + 1);
            best = a;
        }
    }
    Ok(minima)
}

/// `t` cut before its `i`-th right-to-left minimum and before its last
/// letter: `t = prefix · middle · last`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaSplit {
    pub prefix: Word,
    pub middle: Word,
    pub last: Letter,
    /// All right-to-left minima, rightmost first.
    pub minima: Vec<usize>,
}

pub fn split_at_minimum(t: &Word, i: usize) -> Result<MinimaSplit, MfqsymError> {
    let minima = rtl_minima(t)?;
    if i == 0 || minima.len() < i {
        return Err(MfqsymError::TooFewMinima(t.clone(), minima.len(), i));
    }
    let cut = minima[i - 1] - 1; // 0-based index of the i-th minimum
    let p = t.len();
    Ok(MinimaSplit {
        prefix: t.slice(0..cut),
        middle: t.slice(cut..p - 1),
        last: t.letters()[p - 1],
        minima,
    })
}

fn require_m_permutation(w: &Word, m: usize) -> Result<(), MfqsymError> {
    match m_permutation_shape(w) {
        Some((wm, _)) if wm == m => Ok(()),
        _ => Err(MfqsymError::NotMPermutation(w.clone(), m)),
    }
}

/// All `m + 1` operation buckets of the product of basis words, in operator
/// order `Prec, Mid(1), ..., Mid(m-1), Succ`.
///
/// Bucket boundaries are strict: the final letter of `s` lands strictly
/// after the letter at the `(i+1)`-st minimum of `t` and strictly before
/// the one at the `i`-th minimum for `Mid(i)`.
pub fn split_product_word(
    m: usize,
    s: &Word,
    t: &Word,
) -> Result<Vec<WordLinComb>, MfqsymError> {
    let ranges = checked_ranges(m, s, t)?;
    Ok(ranges
        .into_iter()
        .map(|range| generate_bucket(s, t, range))
        .collect())
}

fn checked_ranges(
    m: usize,
    s: &Word,
    t: &Word,
) -> Result<Vec<std::ops::RangeInclusive<usize>>, MfqsymError> {
    require_m_permutation(s, m)?;
    require_m_permutation(t, m)?;
    let minima = rtl_minima(t)?;
    if minima.len() < m {
        return Err(MfqsymError::TooFewMinima(t.clone(), minima.len(), m));
    }
    // Number of letters of `t` strictly before the landing spot of the
    // final letter of `s`, per bucket.
    Ok(count_ranges(m, t.len(), &minima))
}

fn generate_bucket(s: &Word, t: &Word, range: std::ops::RangeInclusive<usize>) -> WordLinComb {
    let shifted = t.shift(s.max_letter());
    let body = s.slice(0..s.len() - 1);
    let last = Word::new([s.letters()[s.len() - 1]]).expect("letter valid");
    let b = t.len();
    let mut bucket = LinComb::zero();
    for c in range {
        let before = shifted.slice(0..c);
        let after = shifted.slice(c..b);
        for (head, coeff) in shuffle(&body, &before).into_iter_terms() {
            bucket.add_term(head.concat(&last).concat(&after), coeff);
        }
    }
    bucket
}

/// For each operation in operator order, the inclusive range of "letters
/// of `t` strictly before the landing spot of the final letter of `s`".
/// The ranges partition `0..=|t|`, which is exactly the statement that the
/// operations split the product.
pub fn landing_ranges(
    m: usize,
    t: &Word,
) -> Result<Vec<std::ops::RangeInclusive<usize>>, MfqsymError> {
    let minima = rtl_minima(t)?;
    if minima.len() < m {
        return Err(MfqsymError::TooFewMinima(t.clone(), minima.len(), m));
    }
    Ok(count_ranges(m, t.len(), &minima))
}

fn count_ranges(
    m: usize,
    b: usize,
    minima: &[usize],
) -> Vec<std::ops::RangeInclusive<usize>> {
    let q = |j: usize| minima[j - 1]; // position of the j-th minimum
    let mut ranges = Vec::with_capacity(m + 1);
    ranges.push(b..=b); // Prec: after everything
    for i in 1..m {
        ranges.push(q(i + 1)..=q(i) - 1); // Mid(i)
    }
    ranges.push(0..=q(m) - 1); // Succ
    ranges
}

fn bucket_index(m: usize, op: OpLabel) -> Result<usize, MfqsymError> {
    match op {
        OpLabel::Prec => Ok(0),
        OpLabel::Mid(i) if i >= 1 && i <= m.saturating_sub(1) => Ok(i),
        OpLabel::Mid(i) => Err(MfqsymError::MidIndexOutOfRange(i, m)),
        OpLabel::Succ => Ok(m),
    }
}

/// A single operation on basis words; only its landing range is generated.
pub fn apply_op_word(
    m: usize,
    op: OpLabel,
    s: &Word,
    t: &Word,
) -> Result<WordLinComb, MfqsymError> {
    let idx = bucket_index(m, op)?;
    let ranges = checked_ranges(m, s, t)?;
    Ok(generate_bucket(s, t, ranges[idx].clone()))
}

pub fn op_prec(m: usize, s: &Word, t: &Word) -> Result<WordLinComb, MfqsymError> {
    apply_op_word(m, OpLabel::Prec, s, t)
}

pub fn op_mid(m: usize, i: usize, s: &Word, t: &Word) -> Result<WordLinComb, MfqsymError> {
    apply_op_word(m, OpLabel::Mid(i), s, t)
}

pub fn op_succ(m: usize, s: &Word, t: &Word) -> Result<WordLinComb, MfqsymError> {
    apply_op_word(m, OpLabel::Succ, s, t)
}

/// Bilinear extension of an operation to linear combinations.
pub fn apply_op(
    m: usize,
    op: OpLabel,
    a: &WordLinComb,
    b: &WordLinComb,
) -> Result<WordLinComb, MfqsymError> {
    let idx = bucket_index(m, op)?;
    let mut out = LinComb::zero();
    for (s, ca) in a.iter() {
        for (t, cb) in b.iter() {
            let ranges = checked_ranges(m, s, t)?;
            let coeff = ca * cb;
            for (word, c) in generate_bucket(s, t, ranges[idx].clone()).into_iter_terms() {
                out.add_term(word, c * &coeff);
            }
        }
    }
    Ok(out)
}

/// The full product, computed through the recursive shifted shuffle. This
/// route is independent of the landing-position split and is what the
/// partition checks compare against.
pub fn product(m: usize, a: &WordLinComb, b: &WordLinComb) -> Result<WordLinComb, MfqsymError> {
    let mut out = LinComb::zero();
    for (s, ca) in a.iter() {
        for (t, cb) in b.iter() {
            if s.is_empty() {
                out.add_term(t.clone(), ca * cb);
                continue;
            }
            if t.is_empty() {
                out.add_term(s.clone(), ca * cb);
                continue;
            }
            require_m_permutation(s, m)?;
            require_m_permutation(t, m)?;
            let coeff = ca * cb;
            for (word, c) in shifted_shuffle(s, t, s.max_letter())?.into_iter_terms() {
                out.add_term(word, c * &coeff);
            }
        }
    }
    Ok(out)
}

/// Sum of all `m + 1` operations; on basis words this equals [`product`].
pub fn star(m: usize, a: &WordLinComb, b: &WordLinComb) -> Result<WordLinComb, MfqsymError> {
    let mut out = LinComb::zero();
    for op in OpLabel::all(m) {
        out.add_assign(&apply_op(m, op, a, b)?);
    }
    Ok(out)
}

/// One side of a relation evaluated on concrete operands.
pub fn eval_side(
    m: usize,
    side: &RelSide,
    u: &WordLinComb,
    v: &WordLinComb,
    w: &WordLinComb,
) -> Result<WordLinComb, MfqsymError> {
    match side.assoc {
        Assoc::Left => {
            let mut inner = LinComb::zero();
            for &op in &side.inner {
                inner.add_assign(&apply_op(m, op, u, v)?);
            }
            apply_op(m, side.outer, &inner, w)
        }
        Assoc::Right => {
            let mut inner = LinComb::zero();
            for &op in &side.inner {
                inner.add_assign(&apply_op(m, op, v, w)?);
            }
            apply_op(m, side.outer, u, &inner)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub relation: String,
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub m: usize,
    pub max_size: usize,
    pub relations_checked: usize,
    pub triples_checked: u64,
    pub failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Check every relation as an exact equality of linear combinations, for
/// all triples of `m`-permutations of size at most `max_size`. Stops at the
/// first counterexample.
pub fn verify_axioms(m: usize, max_size: usize) -> Result<AxiomReport, MfqsymError> {
    let rels = relations(m);
    let mut operands = Vec::new();
    for n in 1..=max_size {
        operands.extend(crate::sylvester::m_permutations(m, n));
    }
    let mut triples = 0u64;
    for u in &operands {
        for v in &operands {
            for w in &operands {
                triples += 1;
                if let Some(relation) = check_triple(m, &rels, u, v, w)? {
                    return Ok(AxiomReport {
                        m,
                        max_size,
                        relations_checked: rels.len(),
                        triples_checked: triples,
                        failure: Some(AxiomFailure {
                            relation,
                            u: u.clone(),
                            v: v.clone(),
                            w: w.clone(),
                        }),
                    });
                }
            }
        }
    }
    Ok(AxiomReport {
        m,
        max_size,
        relations_checked: rels.len(),
        triples_checked: triples,
        failure: None,
    })
}

/// Check all relations on one triple; returns the name of the first
/// relation that fails, if any.
pub fn check_triple(
    m: usize,
    rels: &[Relation],
    u: &Word,
    v: &Word,
    w: &Word,
) -> Result<Option<String>, MfqsymError> {
    let (cu, cv, cw) = (
        LinComb::unit(u.clone()),
        LinComb::unit(v.clone()),
        LinComb::unit(w.clone()),
    );
    for rel in rels {
        let lhs = eval_side(m, &rel.lhs, &cu, &cv, &cw)?;
        let rhs = eval_side(m, &rel.rhs, &cu, &cv, &cw)?;
        if lhs != rhs {
            return Ok(Some(rel.name.clone()));
        }
    }
    Ok(None)
}

/// True iff `op` applied to the two class sums is again a disjoint union of
/// full sylvester classes, each with coefficient one.
pub fn class_product_closure(
    m: usize,
    op: OpLabel,
    class_a: &SylvesterClass,
    class_b: &SylvesterClass,
) -> Result<bool, MfqsymError> {
    let result = apply_op(m, op, &class_a.class_sum(), &class_b.class_sum())?;
    if !result.all_coeffs_one() {
        return Ok(false);
    }
    let support: std::collections::BTreeSet<&Word> = result.support().collect();
    for word in &support {
        for neighbour in adjacent(word) {
            if !support.contains(&neighbour) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Class sum as a linear combination with unit coefficients.
pub fn class_sum_of(words: impl IntoIterator<Item = Word>) -> WordLinComb {
    words.into_iter().map(|w| (w, BigInt::one())).collect()
}
