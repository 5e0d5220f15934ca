//! `(m+1)`-ary trees, their unique search labelling, and the reading-word
//! bijection with 132-avoiding `m`-permutations.
//!
//! Trees are plain shapes; labels always come from the search labelling, so
//! a shape determines its reading word and vice versa. The text format is
//! `()` for the empty tree and `(c1 c2 ... c(m+1))` for a node; the arity
//! `m + 1` is carried out-of-band.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::sylvester::{avoids_132, m_permutation_shape};
use crate::words::{Letter, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KtreeError {
    #[error("node has {found} child slots, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("operation requires a nonempty tree")]
    EmptyTree,
    #[error("word {0} is not an m-permutation for m = {1}")]
    NotMPermutation(Word, usize),
    #[error("word {0} does not avoid the pattern 132")]
    Not132Avoiding(Word),
    #[error("word {0} is not the reading of any tree: {1}")]
    NotAReadingWord(Word, String),
    #[error("enumeration of {m}-ary trees with {n} nodes exceeds cap {cap}")]
    CapExceeded { m: usize, n: usize, cap: u64 },
    #[error("cannot parse tree {input:?} at byte {at}: {reason}")]
    Parse {
        input: String,
        at: usize,
        reason: String,
    },
}

/// A planar rooted tree whose every node carries exactly `m + 1` ordered,
/// possibly empty subtrees. The empty tree is a valid value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KaryTree {
    Empty,
    Node(Vec<KaryTree>),
}

impl KaryTree {
    /// A node with all `m + 1` slots empty.
    pub fn leaf(m: usize) -> KaryTree {
        KaryTree::Node(vec![KaryTree::Empty; m + 1])
    }

    pub fn node(children: Vec<KaryTree>) -> KaryTree {
        KaryTree::Node(children)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, KaryTree::Empty)
    }

    /// Total node count.
    pub fn size(&self) -> usize {
        match self {
            KaryTree::Empty => 0,
            KaryTree::Node(children) => 1 + children.iter().map(KaryTree::size).sum::<usize>(),
        }
    }

    /// Check every node has exactly `m + 1` slots.
    pub fn validate(&self, m: usize) -> Result<(), KtreeError> {
        match self {
            KaryTree::Empty => Ok(()),
            KaryTree::Node(children) => {
                if children.len() != m + 1 {
                    return Err(KtreeError::Arity {
                        expected: m + 1,
                        found: children.len(),
                    });
                }
                children.iter().try_for_each(|c| c.validate(m))
            }
        }
    }

    /// Canonical text form: `()` or `(c1 ... c(m+1))`.
    pub fn to_text(&self) -> String {
        match self {
            KaryTree::Empty => "()".to_string(),
            KaryTree::Node(children) => {
                let inner: Vec<String> = children.iter().map(KaryTree::to_text).collect();
                format!("({})", inner.join(" "))
            }
        }
    }

    pub fn parse(input: &str) -> Result<KaryTree, KtreeError> {
        let bytes = input.trim().as_bytes();
        let err = |at: usize, reason: &str| KtreeError::Parse {
            input: input.to_string(),
            at,
            reason: reason.to_string(),
        };
        fn node(
            bytes: &[u8],
            pos: &mut usize,
            err: &impl Fn(usize, &str) -> KtreeError,
        ) -> Result<KaryTree, KtreeError> {
            if bytes.get(*pos) != Some(&b'(') {
                return Err(err(*pos, "expected '('"));
            }
            *pos += 1;
            let mut children = Vec::new();
            loop {
                while bytes.get(*pos) == Some(&b' ') {
                    *pos += 1;
                }
                match bytes.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    Some(b'(') => children.push(node(bytes, pos, err)?),
                    _ => return Err(err(*pos, "expected '(' or ')'")),
                }
            }
            Ok(if children.is_empty() {
                KaryTree::Empty
            } else {
                KaryTree::Node(children)
            })
        }
        let mut pos = 0;
        let tree = node(bytes, &mut pos, &err)?;
        if pos != bytes.len() {
            return Err(err(pos, "trailing input"));
        }
        Ok(tree)
    }
}

/// A tree shape decorated with the labels of the search labelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelledKTree {
    Empty,
    Node {
        label: Letter,
        children: Vec<LabelledKTree>,
    },
}

/// Assign `1..=n` by one global increasing counter along the visit order
/// subtree `m`, subtree `m-1`, ..., subtree `1`, node, subtree `m+1`.
pub fn search_labelling(tree: &KaryTree, m: usize) -> Result<LabelledKTree, KtreeError> {
    tree.validate(m)?;
    if tree.is_empty() {
        return Err(KtreeError::EmptyTree);
    }
    fn go(tree: &KaryTree, m: usize, counter: &mut Letter) -> LabelledKTree {
        match tree {
            KaryTree::Empty => LabelledKTree::Empty,
            KaryTree::Node(children) => {
                let mut labelled = vec![LabelledKTree::Empty; m + 1];
                for slot in (0..m).rev() {
                    labelled[slot] = go(&children[slot], m, counter);
                }
                *counter += 1;
                let label = *counter;
                labelled[m] = go(&children[m], m, counter);
                LabelledKTree::Node {
                    label,
                    children: labelled,
                }
            }
        }
    }
    let mut counter = 0;
    Ok(go(tree, m, &mut counter))
}

/// Read a labelled tree: subtree `m+1`, then subtree `1`, root, subtree `2`,
/// root, ..., subtree `m`, root. The result is a 132-avoiding m-permutation.
pub fn reading_word(tree: &KaryTree, m: usize) -> Result<Word, KtreeError> {
    let labelled = search_labelling(tree, m)?;
    let mut letters: Vec<Letter> = Vec::with_capacity(m * tree.size());
    fn go(tree: &LabelledKTree, m: usize, out: &mut Vec<Letter>) {
        if let LabelledKTree::Node { label, children } = tree {
            go(&children[m], m, out);
            for child in children.iter().take(m) {
                go(child, m, out);
                out.push(*label);
            }
        }
    }
    go(&labelled, m, &mut letters);
    Ok(Word::new(letters).expect("labels are positive"))
}

/// Rebuild the tree whose reading word is `w`.
///
/// The root is the last letter; its other occurrences separate the subtrees,
/// except that the first chunk splits into the right subtree (the letters
/// greater than the root) followed by the first subtree.
pub fn tree_from_word(w: &Word, m: usize) -> Result<KaryTree, KtreeError> {
    match m_permutation_shape(w) {
        Some((wm, _)) if wm == m => {}
        _ => return Err(KtreeError::NotMPermutation(w.clone(), m)),
    }
    if !avoids_132(w) {
        return Err(KtreeError::Not132Avoiding(w.clone()));
    }
    decode(w.letters(), m, w)
}

fn decode(letters: &[Letter], m: usize, original: &Word) -> Result<KaryTree, KtreeError> {
    if letters.is_empty() {
        return Ok(KaryTree::Empty);
    }
    let bad = |reason: String| KtreeError::NotAReadingWord(original.clone(), reason);
    let root = *letters.last().expect("nonempty");
    let occurrences: Vec<usize> = letters
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| (a == root).then_some(i))
        .collect();
    if occurrences.len() != m {
        return Err(bad(format!(
            "letter {root} occurs {} times, expected {m}",
            occurrences.len()
        )));
    }
    if *occurrences.last().unwrap() != letters.len() - 1 {
        return Err(bad(format!("letter {root} reappears after final position")));
    }
    // First chunk = right subtree (letters > root) then first subtree.
    let first_chunk = &letters[..occurrences[0]];
    let split = first_chunk
        .iter()
        .position(|&a| a < root)
        .unwrap_or(first_chunk.len());
    if first_chunk[split..].iter().any(|&a| a > root) {
        return Err(bad(format!(
            "letters greater than the root {root} are not a prefix of the first chunk"
        )));
    }
    let mut children = Vec::with_capacity(m + 1);
    children.push(decode(&first_chunk[split..], m, original)?);
    for pair in occurrences.windows(2) {
        children.push(decode(&letters[pair[0] + 1..pair[1]], m, original)?);
    }
    children.push(decode(&first_chunk[..split], m, original)?);
    Ok(KaryTree::Node(children))
}

/// All `(m+1)`-ary trees with exactly `n` nodes.
pub fn enumerate_ktrees(m: usize, n: usize, cap: u64) -> Result<Vec<KaryTree>, KtreeError> {
    if fuss_catalan(m, n) > BigInt::from(cap) {
        return Err(KtreeError::CapExceeded { m, n, cap });
    }
    fn gen(m: usize, n: usize, memo: &mut Vec<Option<Vec<KaryTree>>>) -> Vec<KaryTree> {
        if let Some(cached) = &memo[n] {
            return cached.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(KaryTree::Empty);
        } else {
            // Distribute n - 1 nodes over m + 1 ordered slots.
            let mut sizes = vec![0usize; m + 1];
            distribute(m, n - 1, 0, &mut sizes, &mut out, memo);
        }
        memo[n] = Some(out.clone());
        out
    }
    fn distribute(
        m: usize,
        remaining: usize,
        slot: usize,
        sizes: &mut Vec<usize>,
        out: &mut Vec<KaryTree>,
        memo: &mut Vec<Option<Vec<KaryTree>>>,
    ) {
        if slot == m + 1 {
            if remaining == 0 {
                let per_slot: Vec<Vec<KaryTree>> =
                    sizes.iter().map(|&s| gen(m, s, memo)).collect();
                let mut choice = vec![0usize; m + 1];
                loop {
                    out.push(KaryTree::Node(
                        (0..=m).map(|i| per_slot[i][choice[i]].clone()).collect(),
                    ));
                    let mut i = m + 1;
                    loop {
                        if i == 0 {
                            return;
                        }
                        i -= 1;
                        choice[i] += 1;
                        if choice[i] < per_slot[i].len() {
                            break;
                        }
                        choice[i] = 0;
                    }
                }
            }
            return;
        }
        for s in 0..=remaining {
            sizes[slot] = s;
            distribute(m, remaining - s, slot + 1, sizes, out, memo);
        }
        sizes[slot] = 0;
    }
    let mut memo: Vec<Option<Vec<KaryTree>>> = vec![None; n + 1];
    Ok(gen(m, n, &mut memo))
}

/// Exact binomial coefficient.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut result = BigInt::one();
    for i in 0..k.min(n - k) {
        result = result * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    result
}

/// The Fuss-Catalan number `C^(m)_n = binomial(mn + n, n) / (mn + 1)`.
pub fn fuss_catalan(m: usize, n: usize) -> BigInt {
    binomial(m * n + n, n) / BigInt::from(m * n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    const PAPER_WORD: &str = "9,9,7,7,8,6,6,4,3,3,2,2,4,5,1,1,5,8";

    #[test]
    fn fuss_catalan_values() {
        assert_eq!(fuss_catalan(1, 4), BigInt::from(14));
        assert_eq!(fuss_catalan(2, 3), BigInt::from(12));
        assert_eq!(fuss_catalan(2, 4), BigInt::from(55));
        assert_eq!(fuss_catalan(3, 0), BigInt::from(1));
        assert_eq!(fuss_catalan(2, 0), BigInt::from(1));
    }

    #[test]
    fn labelling_of_small_trees() {
        let single = KaryTree::leaf(2);
        let labelled = search_labelling(&single, 2).unwrap();
        assert_eq!(
            labelled,
            LabelledKTree::Node {
                label: 1,
                children: vec![LabelledKTree::Empty; 3]
            }
        );

        // Root whose 2nd slot holds a single node: child = 1, root = 2.
        let tree = KaryTree::node(vec![KaryTree::Empty, KaryTree::leaf(2), KaryTree::Empty]);
        let labelled = search_labelling(&tree, 2).unwrap();
        match labelled {
            LabelledKTree::Node { label, children } => {
                assert_eq!(label, 2);
                match &children[1] {
                    LabelledKTree::Node { label, .. } => assert_eq!(*label, 1),
                    _ => panic!("expected node"),
                }
            }
            _ => panic!("expected node"),
        }
    }

    #[test]
    fn reading_words_of_small_trees() {
        assert_eq!(reading_word(&KaryTree::leaf(2), 2).unwrap(), w("11"));
        let tree = KaryTree::node(vec![KaryTree::Empty, KaryTree::leaf(2), KaryTree::Empty]);
        assert_eq!(reading_word(&tree, 2).unwrap(), w("2112"));
    }

    #[test]
    fn decode_of_small_words() {
        assert_eq!(tree_from_word(&w("11"), 2).unwrap(), KaryTree::leaf(2));
        assert_eq!(
            tree_from_word(&w("2112"), 2).unwrap(),
            KaryTree::node(vec![KaryTree::Empty, KaryTree::leaf(2), KaryTree::Empty])
        );
        assert!(tree_from_word(&w("1212"), 2).is_err()); // not 132-avoiding
        assert!(tree_from_word(&w("121"), 2).is_err()); // not a 2-permutation
    }

    #[test]
    fn paper_word_round_trips_through_a_nine_node_tree() {
        let word = w(PAPER_WORD);
        let tree = tree_from_word(&word, 2).unwrap();
        assert_eq!(tree.size(), 9);
        assert_eq!(reading_word(&tree, 2).unwrap(), word);
    }

    #[test]
    fn enumeration_counts_match_fuss_catalan() {
        assert_eq!(enumerate_ktrees(2, 1, 1 << 20).unwrap().len(), 1);
        assert_eq!(enumerate_ktrees(2, 2, 1 << 20).unwrap().len(), 3);
        assert_eq!(enumerate_ktrees(2, 3, 1 << 20).unwrap().len(), 12);
        for (m, n) in [(1usize, 5usize), (2, 4), (3, 3)] {
            let trees = enumerate_ktrees(m, n, 1 << 20).unwrap();
            let expected: u64 = fuss_catalan(m, n).try_into().unwrap();
            assert_eq!(trees.len() as u64, expected);
            // All serializations distinct, i.e. no duplicates.
            let texts: std::collections::BTreeSet<String> =
                trees.iter().map(KaryTree::to_text).collect();
            assert_eq!(texts.len(), trees.len());
        }
    }

    #[test]
    fn round_trip_word_tree_word_on_all_small_trees() {
        for m in 1..=3usize {
            for n in 1..=4usize {
                for tree in enumerate_ktrees(m, n, 1 << 20).unwrap() {
                    let word = reading_word(&tree, m).unwrap();
                    assert!(avoids_132(&word), "reading {word} of m={m} not canonical");
                    assert_eq!(tree_from_word(&word, m).unwrap(), tree);
                }
            }
        }
    }

    #[test]
    fn text_format_round_trips() {
        for tree in enumerate_ktrees(2, 3, 1 << 20).unwrap() {
            let text = tree.to_text();
            assert_eq!(KaryTree::parse(&text).unwrap(), tree);
        }
        assert_eq!(KaryTree::parse("()").unwrap(), KaryTree::Empty);
        assert!(KaryTree::parse("(()").is_err());
        assert!(KaryTree::parse("() ()").is_err());
    }

    #[test]
    fn labelling_and_reading_reject_the_empty_tree() {
        assert_eq!(
            search_labelling(&KaryTree::Empty, 2),
            Err(KtreeError::EmptyTree)
        );
        assert_eq!(reading_word(&KaryTree::Empty, 2), Err(KtreeError::EmptyTree));
        // Wrong arity is caught before any traversal.
        let lopsided = KaryTree::node(vec![KaryTree::Empty, KaryTree::Empty]);
        assert!(matches!(
            reading_word(&lopsided, 2),
            Err(KtreeError::Arity { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert!(matches!(
            enumerate_ktrees(2, 8, 10),
            Err(KtreeError::CapExceeded { .. })
        ));
    }
}
