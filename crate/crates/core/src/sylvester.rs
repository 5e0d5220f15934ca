//! The sylvester congruence on words and its classes of `m`-permutations.
//!
//! Two words are sylvester-adjacent when one is obtained from the other by
//! the exchange `u·ac·v·b·w <-> u·ca·v·b·w` with letters `a <= b < c`.
//! Classes are computed by exhaustive breadth-first closure; this module is
//! deliberately free of search-tree shortcuts so that it can serve as the
//! independent oracle for everything built on top of it.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::words::{Letter, Word, WordLinComb};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SylvesterError {
    #[error("word {0} is not an m-permutation")]
    NotMPermutation(Word),
    #[error("class of {word} contains {count} words avoiding 132; expected exactly one")]
    CanonicalCount { word: Word, count: usize },
    #[error("{words} words of shape m={m}, n={n} exceed the enumeration cap {cap}")]
    CapExceeded { m: usize, n: usize, words: BigInt, cap: u64 },
}

/// A sylvester class together with its unique 132-avoiding representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterClass {
    pub members: BTreeSet<Word>,
    pub canonical: Word,
}

impl SylvesterClass {
    /// The coefficient-one sum of the members.
    pub fn class_sum(&self) -> WordLinComb {
        self.members
            .iter()
            .map(|w| (w.clone(), BigInt::one()))
            .collect()
    }
}

/// Detect whether each value `1..=n` occurs exactly `m` times; returns
/// `(m, n)`. The empty word is not an m-permutation here.
pub fn m_permutation_shape(w: &Word) -> Option<(usize, usize)> {
    if w.is_empty() {
        return None;
    }
    let eval = w.evaluation();
    let m = eval[0];
    if m == 0 || eval.iter().any(|&c| c != m) {
        return None;
    }
    Some((m as usize, eval.len()))
}

/// All words one sylvester exchange away from `w`, in either direction.
pub fn adjacent(w: &Word) -> BTreeSet<Word> {
    let letters = w.letters();
    let p = letters.len();
    let mut out = BTreeSet::new();
    for i in 0..p.saturating_sub(1) {
        let (x, y) = (letters[i], letters[i + 1]);
        if x == y {
            continue;
        }
        // Swapping positions i, i+1 is legal when some later letter b
        // satisfies min(x,y) <= b < max(x,y).
        let (lo, hi) = (x.min(y), x.max(y));
        if letters[i + 2..].iter().any(|&b| lo <= b && b < hi) {
            let mut swapped: Vec<Letter> = letters.to_vec();
            swapped.swap(i, i + 1);
            out.insert(Word::new(swapped).expect("letters already valid"));
        }
    }
    out
}

/// True iff no positions `i < j < k` satisfy `w_i <= w_k < w_j`.
///
/// This is pattern avoidance of 132 adapted to repeated letters, matching
/// the `a <= b < c` constraint of the congruence.
pub fn avoids_132(w: &Word) -> bool {
    let letters = w.letters();
    let p = letters.len();
    for j in 1..p {
        for k in j + 1..p {
            if letters[k] >= letters[j] {
                continue;
            }
            if letters[..j].iter().any(|&a| a <= letters[k]) {
                return false;
            }
        }
    }
    true
}

/// Breadth-first closure of `w` under sylvester adjacency.
pub fn class_members(w: &Word) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut queue: VecDeque<Word> = VecDeque::new();
    seen.insert(w.clone());
    queue.push_back(w.clone());
    while let Some(cur) = queue.pop_front() {
        for next in adjacent(&cur) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// The sylvester class of an `m`-permutation, with its canonical member.
///
/// Fails if the closure does not contain exactly one 132-avoiding word;
/// on m-permutations that would signal an implementation bug.
pub fn sylvester_class(w: &Word) -> Result<SylvesterClass, SylvesterError> {
    if m_permutation_shape(w).is_none() {
        return Err(SylvesterError::NotMPermutation(w.clone()));
    }
    let members = class_members(w);
    let canonicals: Vec<&Word> = members.iter().filter(|v| avoids_132(v)).collect();
    if canonicals.len() != 1 {
        return Err(SylvesterError::CanonicalCount {
            word: w.clone(),
            count: canonicals.len(),
        });
    }
    Ok(SylvesterClass {
        canonical: canonicals[0].clone(),
        members,
    })
}

/// Number of m-permutations of size `n`, i.e. `(mn)! / (m!)^n`.
pub fn count_m_permutations(m: usize, n: usize) -> BigInt {
    let fact = |k: usize| -> BigInt { (1..=k).map(BigInt::from).product() };
    fact(m * n) / fact(m).pow(n as u32)
}

/// All m-permutations of size `n` in lexicographic order.
pub fn m_permutations(m: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut counts = vec![m; n];
    let mut prefix: Vec<Letter> = Vec::with_capacity(m * n);
    fn go(counts: &mut Vec<usize>, prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if counts.iter().all(|&c| c == 0) {
            out.push(Word::new(prefix.iter().copied()).expect("valid letters"));
            return;
        }
        for v in 0..counts.len() {
            if counts[v] > 0 {
                counts[v] -= 1;
                prefix.push((v + 1) as Letter);
                go(counts, prefix, out);
                prefix.pop();
                counts[v] += 1;
            }
        }
    }
    go(&mut counts, &mut prefix, &mut out);
    out
}

/// Partition all m-permutations of size `n` into sylvester classes and
/// return the class count. Guarded by `cap` on the number of words.
pub fn class_count(m: usize, n: usize, cap: u64) -> Result<u64, SylvesterError> {
    let words = count_m_permutations(m, n);
    if words > BigInt::from(cap) {
        return Err(SylvesterError::CapExceeded { m, n, words, cap });
    }
    let all = m_permutations(m, n);
    let mut visited: BTreeSet<Word> = BTreeSet::new();
    let mut classes = 0u64;
    for w in &all {
        if visited.contains(w) {
            continue;
        }
        classes += 1;
        for member in class_members(w) {
            visited.insert(member);
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktrees::fuss_catalan;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(adjacent(&w("1212")), BTreeSet::from([w("2112")]));
        assert_eq!(adjacent(&w("11")), BTreeSet::new());
        assert_eq!(adjacent(&w("1221")), BTreeSet::from([w("2121")]));
    }

    #[test]
    fn adjacency_is_symmetric_on_small_words() {
        for u in m_permutations(2, 3) {
            for v in adjacent(&u) {
                assert!(adjacent(&v).contains(&u), "{v} should be adjacent to {u}");
            }
        }
    }

    #[test]
    fn classes_match_paper_examples() {
        let c = sylvester_class(&w("1212")).unwrap();
        assert_eq!(c.members, BTreeSet::from([w("1212"), w("2112")]));
        assert_eq!(c.canonical, w("2112"));

        let c = sylvester_class(&w("11")).unwrap();
        assert_eq!(c.members, BTreeSet::from([w("11")]));
        assert_eq!(c.canonical, w("11"));

        let c = sylvester_class(&w("1221")).unwrap();
        assert_eq!(c.members, BTreeSet::from([w("1221"), w("2121"), w("2211")]));
        assert_eq!(c.canonical, w("2211"));
    }

    #[test]
    fn pattern_132_examples() {
        assert!(avoids_132(&w("2112")));
        assert!(!avoids_132(&w("1212"))); // witness 1 <= 1 < 2 at positions 1,2,3
        assert!(avoids_132(&w("9,9,7,7,8,6,6,4,3,3,2,2,4,5,1,1,5,8")));
    }

    #[test]
    fn class_counts_are_fuss_catalan() {
        assert_eq!(class_count(2, 2, 1 << 20).unwrap(), 3);
        assert_eq!(class_count(1, 3, 1 << 20).unwrap(), 5);
        assert_eq!(class_count(2, 3, 1 << 20).unwrap(), 12);
        for (m, n) in [(1, 4), (2, 3), (3, 2)] {
            let expected: u64 = fuss_catalan(m, n).try_into().unwrap();
            assert_eq!(class_count(m, n, 1 << 22).unwrap(), expected);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            class_count(2, 4, 10),
            Err(SylvesterError::CapExceeded { .. })
        ));
    }

    #[test]
    fn every_small_class_has_one_canonical_and_constant_evaluation() {
        for (m, n) in [(1, 4), (2, 3), (3, 2)] {
            for word in m_permutations(m, n) {
                let class = sylvester_class(&word).unwrap();
                let eval = word.evaluation();
                for member in &class.members {
                    assert_eq!(member.evaluation(), eval);
                }
            }
        }
    }

    #[test]
    fn m_permutation_counts() {
        assert_eq!(m_permutations(2, 2).len(), 6);
        assert_eq!(m_permutations(2, 4).len(), 2520);
        assert_eq!(count_m_permutations(2, 4), BigInt::from(2520));
    }
}
