//! The free algebra on one generator for the `m + 1` operations: operator
//! trees, oriented rewriting to pattern-avoiding normal forms, census,
//! evaluation into the word algebra, and the expressions realizing
//! sylvester classes.
//!
//! A monomial is a complete binary tree with internal nodes labelled by
//! operations and leaves standing for the generator. Rewriting replaces
//! every forbidden parent-child edge by the other side of its relation,
//! children first, then the root, dispatching in operator order. Normal
//! forms avoid all forbidden edges and are counted by Fuss-Catalan numbers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ktrees::{fuss_catalan, KaryTree, KtreeError};
use crate::lincomb::LinComb;
use crate::mfqsym::{apply_op, apply_op_word, MfqsymError};
use crate::relations::{relations, Assoc};
use crate::sylvester::avoids_132;
use crate::words::{Word, WordLinComb};

/// Per-call rewriting step budget; exceeding it signals a bug, since the
/// strategy is proven terminating.
pub const STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DendriformError {
    #[error("operation label {0} is not valid for m = {1}")]
    InvalidLabel(String, usize),
    #[error("operation requires a nonempty tree")]
    EmptyTree,
    #[error("rewriting exceeded the step budget; this indicates a bug")]
    StepBudgetExceeded,
    #[error("enumeration for m = {m}, {k_ops} operators exceeds cap {cap}")]
    CapExceeded { m: usize, k_ops: usize, cap: u64 },
    #[error("cannot parse expression {input:?} at byte {at}: {reason}")]
    Parse {
        input: String,
        at: usize,
        reason: String,
    },
    #[error("sub-product contains {0} words avoiding 132, expected exactly one")]
    NotASingleClass(usize),
    #[error(transparent)]
    Words(#[from] MfqsymError),
    #[error(transparent)]
    Ktree(#[from] KtreeError),
}

/// Label of a binary operation: `Prec`, `Mid(1)..=Mid(m-1)`, `Succ`, in
/// the operator order used by the rewriting dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpLabel {
    Prec,
    Mid(usize),
    Succ,
}

impl OpLabel {
    /// All labels for a given `m`, in operator order.
    pub fn all(m: usize) -> Vec<OpLabel> {
        let mut ops = vec![OpLabel::Prec];
        ops.extend((1..m).map(OpLabel::Mid));
        ops.push(OpLabel::Succ);
        ops
    }

    pub fn is_valid_for(self, m: usize) -> bool {
        match self {
            OpLabel::Mid(i) => i >= 1 && i < m,
            _ => true,
        }
    }

    /// Expression head: `<`, `o1`, ..., `>`.
    pub fn symbol(self) -> String {
        match self {
            OpLabel::Prec => "<".into(),
            OpLabel::Mid(i) => format!("o{i}"),
            OpLabel::Succ => ">".into(),
        }
    }
}

impl fmt::Display for OpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Which child slot a pattern constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A complete binary operator tree; leaves are the generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpTree {
    Leaf,
    Node(OpLabel, Box<OpTree>, Box<OpTree>),
}

impl OpTree {
    pub fn node(label: OpLabel, left: OpTree, right: OpTree) -> OpTree {
        OpTree::Node(label, Box::new(left), Box::new(right))
    }

    /// Number of internal nodes; the degree is `op_count() + 1`.
    pub fn op_count(&self) -> usize {
        match self {
            OpTree::Leaf => 0,
            OpTree::Node(_, l, r) => 1 + l.op_count() + r.op_count(),
        }
    }

    pub fn degree(&self) -> usize {
        self.op_count() + 1
    }

    pub fn root_label(&self) -> Option<OpLabel> {
        match self {
            OpTree::Leaf => None,
            OpTree::Node(l, _, _) => Some(*l),
        }
    }

    pub fn validate(&self, m: usize) -> Result<(), DendriformError> {
        match self {
            OpTree::Leaf => Ok(()),
            OpTree::Node(l, a, b) => {
                if !l.is_valid_for(m) {
                    return Err(DendriformError::InvalidLabel(l.symbol(), m));
                }
                a.validate(m)?;
                b.validate(m)
            }
        }
    }

    /// S-expression form: `g`, `(< g g)`, `(o1 g (> g g))`, ...
    pub fn to_text(&self) -> String {
        match self {
            OpTree::Leaf => "g".into(),
            OpTree::Node(l, a, b) => format!("({} {} {})", l.symbol(), a.to_text(), b.to_text()),
        }
    }
}

impl fmt::Display for OpTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

pub type TreeLinComb = LinComb<OpTree>;

/// The forbidden parent-child edges; a normal tree avoids all of them.
/// There are `binomial(m+2, 2)` of them, one per relation.
pub fn forbidden_patterns(m: usize) -> BTreeSet<(OpLabel, Side, OpLabel)> {
    use OpLabel::{Mid, Prec, Succ};
    let mut set = BTreeSet::new();
    set.insert((Prec, Side::Left, Prec));
    set.insert((Succ, Side::Right, Prec));
    set.insert((Succ, Side::Right, Succ));
    for i in 1..m {
        set.insert((Mid(i), Side::Right, Prec));
        set.insert((Mid(i), Side::Left, Prec));
        set.insert((Succ, Side::Right, Mid(i)));
        for j in i + 1..m {
            set.insert((Mid(j), Side::Right, Mid(i)));
        }
    }
    set
}

/// True iff no parent-child edge of `t` matches a forbidden pattern.
pub fn is_normal(m: usize, t: &OpTree) -> bool {
    let forbidden = forbidden_patterns(m);
    fn scan(
        t: &OpTree,
        forbidden: &BTreeSet<(OpLabel, Side, OpLabel)>,
    ) -> bool {
        match t {
            OpTree::Leaf => true,
            OpTree::Node(l, a, b) => {
                if let Some(al) = a.root_label() {
                    if forbidden.contains(&(*l, Side::Left, al)) {
                        return false;
                    }
                }
                if let Some(bl) = b.root_label() {
                    if forbidden.contains(&(*l, Side::Right, bl)) {
                        return false;
                    }
                }
                scan(a, forbidden) && scan(b, forbidden)
            }
        }
    }
    scan(t, &forbidden)
}

/// Oriented rewrites keyed by the edge shape they remove; each value lists
/// the `(outer, inner)` labels of the flipped-association targets.
pub(crate) type RewriteTable = HashMap<(OpLabel, Side, OpLabel), Vec<(OpLabel, OpLabel)>>;

pub(crate) fn rewrite_table(m: usize) -> RewriteTable {
    let mut table = HashMap::new();
    for rel in relations(m) {
        let (from, to) = rel.orientation();
        debug_assert_eq!(from.inner.len(), 1);
        let side = match from.assoc {
            Assoc::Left => Side::Left,
            Assoc::Right => Side::Right,
        };
        let targets: Vec<(OpLabel, OpLabel)> =
            to.inner.iter().map(|&i| (to.outer, i)).collect();
        let prev = table.insert((from.outer, side, from.inner[0]), targets);
        debug_assert!(prev.is_none(), "two rules for one shape");
    }
    table
}

/// Rewrite `t` into a combination of normal trees.
pub fn normalize(m: usize, t: &OpTree) -> Result<TreeLinComb, DendriformError> {
    t.validate(m)?;
    let table = rewrite_table(m);
    let mut budget = STEP_BUDGET;
    nf(&table, t, &mut budget)
}

pub fn normalize_lincomb(m: usize, c: &TreeLinComb) -> Result<TreeLinComb, DendriformError> {
    let mut out = LinComb::zero();
    for (t, coeff) in c.iter() {
        out.add_assign(&normalize(m, t)?.scale(coeff));
    }
    Ok(out)
}

fn nf(table: &RewriteTable, t: &OpTree, budget: &mut u64) -> Result<TreeLinComb, DendriformError> {
    match t {
        OpTree::Leaf => Ok(LinComb::unit(OpTree::Leaf)),
        OpTree::Node(l, a, b) => {
            let na = nf(table, a, budget)?;
            let nb = nf(table, b, budget)?;
            let mut out = LinComb::zero();
            for (ta, ca) in na.iter() {
                for (tb, cb) in nb.iter() {
                    out.add_assign(&graft(table, *l, ta, tb, budget)?.scale(&(ca * cb)));
                }
            }
            Ok(out)
        }
    }
}

/// Combine two normal trees under `label`, rewriting at the root until the
/// result is normal. Left-edge shapes are dispatched before right-edge
/// ones, which is the children-first strategy in operator order.
fn graft(
    table: &RewriteTable,
    label: OpLabel,
    a: &OpTree,
    b: &OpTree,
    budget: &mut u64,
) -> Result<TreeLinComb, DendriformError> {
    *budget = budget
        .checked_sub(1)
        .filter(|&x| x > 0)
        .ok_or(DendriformError::StepBudgetExceeded)?;
    if let OpTree::Node(al, a1, a2) = a {
        if let Some(targets) = table.get(&(label, Side::Left, *al)) {
            // (a1 inner a2) label b  ->  sum of  a1 outer (a2 inner' b)
            let mut out = LinComb::zero();
            for &(outer, inner) in targets {
                let inner_comb = graft(table, inner, a2, b, budget)?;
                for (t, c) in inner_comb.iter() {
                    out.add_assign(&graft(table, outer, a1, t, budget)?.scale(c));
                }
            }
            return Ok(out);
        }
    }
    if let OpTree::Node(bl, b1, b2) = b {
        if let Some(targets) = table.get(&(label, Side::Right, *bl)) {
            // a label (b1 inner b2)  ->  sum of  (a inner' b1) outer b2
            let mut out = LinComb::zero();
            for &(outer, inner) in targets {
                let inner_comb = graft(table, inner, a, b1, budget)?;
                for (t, c) in inner_comb.iter() {
                    out.add_assign(&graft(table, outer, t, b2, budget)?.scale(c));
                }
            }
            return Ok(out);
        }
    }
    Ok(LinComb::unit(OpTree::node(label, a.clone(), b.clone())))
}

/// Counts of normal trees by operator count and root label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusByRoot {
    pub m: usize,
    /// `total[k]` counts all normal trees with `k` operators.
    pub total: Vec<BigInt>,
    /// `by_root[op][k]` counts those with root `op` (zero at `k = 0`).
    pub by_root: BTreeMap<OpLabel, Vec<BigInt>>,
}

/// Count normal trees with up to `max_ops` operators without generating
/// them.
pub fn census_by_root(m: usize, max_ops: usize) -> CensusByRoot {
    let forbidden = forbidden_patterns(m);
    let ops = OpLabel::all(m);
    let mut by_root: BTreeMap<OpLabel, Vec<BigInt>> = ops
        .iter()
        .map(|&op| (op, vec![BigInt::zero(); max_ops + 1]))
        .collect();
    let mut total = vec![BigInt::zero(); max_ops + 1];
    total[0] = BigInt::one();
    for k in 1..=max_ops {
        for &root in &ops {
            let mut count = BigInt::zero();
            for left_ops in 0..k {
                let right_ops = k - 1 - left_ops;
                let admissible = |side: Side, sub_ops: usize| -> BigInt {
                    if sub_ops == 0 {
                        return BigInt::one();
                    }
                    ops.iter()
                        .filter(|&&child| !forbidden.contains(&(root, side, child)))
                        .map(|&child| by_root[&child][sub_ops].clone())
                        .sum()
                };
                count += admissible(Side::Left, left_ops) * admissible(Side::Right, right_ops);
            }
            by_root.get_mut(&root).unwrap()[k] = count;
        }
        total[k] = ops.iter().map(|op| by_root[op][k].clone()).sum();
    }
    CensusByRoot { m, total, by_root }
}

/// All normal trees with exactly `k_ops` operators.
pub fn enumerate_normal(
    m: usize,
    k_ops: usize,
    cap: u64,
) -> Result<Vec<OpTree>, DendriformError> {
    let census = census_by_root(m, k_ops);
    if census.total[k_ops] > BigInt::from(cap) {
        return Err(DendriformError::CapExceeded { m, k_ops, cap });
    }
    let forbidden = forbidden_patterns(m);
    let ops = OpLabel::all(m);
    let mut memo: Vec<Vec<OpTree>> = vec![vec![OpTree::Leaf]];
    for k in 1..=k_ops {
        let mut level = Vec::new();
        for &root in &ops {
            for left_ops in 0..k {
                let right_ops = k - 1 - left_ops;
                let admissible = |side: Side, sub: &OpTree| match sub.root_label() {
                    None => true,
                    Some(child) => !forbidden.contains(&(root, side, child)),
                };
                for left in &memo[left_ops] {
                    if !admissible(Side::Left, left) {
                        continue;
                    }
                    for right in &memo[right_ops] {
                        if admissible(Side::Right, right) {
                            level.push(OpTree::node(root, left.clone(), right.clone()));
                        }
                    }
                }
            }
        }
        memo.push(level);
    }
    Ok(memo.pop().expect("at least one level"))
}

/// Memoizing evaluator into the word algebra: the leaf is the basis word
/// `1^m`, a node applies its operation bilinearly.
pub struct EvalCache {
    m: usize,
    memo: HashMap<OpTree, Rc<WordLinComb>>,
}

impl EvalCache {
    pub fn new(m: usize) -> Self {
        EvalCache {
            m,
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, t: &OpTree) -> Result<Rc<WordLinComb>, DendriformError> {
        if let Some(hit) = self.memo.get(t) {
            return Ok(Rc::clone(hit));
        }
        let value = match t {
            OpTree::Leaf => LinComb::unit(generator_word(self.m)),
            OpTree::Node(l, a, b) => {
                let ea = self.eval(a)?;
                let eb = self.eval(b)?;
                apply_op(self.m, *l, &ea, &eb)?
            }
        };
        let rc = Rc::new(value);
        self.memo.insert(t.clone(), Rc::clone(&rc));
        Ok(rc)
    }

    pub fn eval_lincomb(&mut self, c: &TreeLinComb) -> Result<WordLinComb, DendriformError> {
        let mut out = LinComb::zero();
        for (t, coeff) in c.iter() {
            out.add_assign(&self.eval(t)?.scale(coeff));
        }
        Ok(out)
    }
}

/// The generator `1^m`.
pub fn generator_word(m: usize) -> Word {
    Word::new(std::iter::repeat_n(1, m)).expect("ones are letters")
}

/// One-shot evaluation without a shared cache.
pub fn eval(m: usize, t: &OpTree) -> Result<WordLinComb, DendriformError> {
    Ok(Rc::try_unwrap(EvalCache::new(m).eval(t)?).unwrap_or_else(|rc| (*rc).clone()))
}

/// The expression whose evaluation is the class sum of the reading word of
/// `k`. Strips the root's subtrees in order: the last subtree with `Prec`,
/// then the rightmost nonempty among the first `m` with a middle
/// operation, and a lone first subtree with `Succ`.
pub fn expr_from_ktree(m: usize, k: &KaryTree) -> Result<OpTree, DendriformError> {
    k.validate(m)?;
    match k {
        KaryTree::Empty => Err(DendriformError::EmptyTree),
        KaryTree::Node(children) => Ok(strip(m, children)),
    }
}

fn strip(m: usize, children: &[KaryTree]) -> OpTree {
    let expr = |t: &KaryTree| match t {
        KaryTree::Empty => unreachable!("only called on nonempty subtrees"),
        KaryTree::Node(ch) => strip(m, ch),
    };
    if children.iter().all(KaryTree::is_empty) {
        return OpTree::Leaf;
    }
    if !children[m].is_empty() {
        let mut rest = children.to_vec();
        rest[m] = KaryTree::Empty;
        return OpTree::node(OpLabel::Prec, strip(m, &rest), expr(&children[m]));
    }
    let j = (1..=m)
        .rev()
        .find(|&j| !children[j - 1].is_empty())
        .expect("some slot among 1..=m is nonempty");
    if j == 1 {
        return OpTree::node(OpLabel::Succ, expr(&children[0]), OpTree::Leaf);
    }
    let inner = match &children[j - 1] {
        KaryTree::Node(ch) => ch,
        KaryTree::Empty => unreachable!("slot j is nonempty"),
    };
    let mut left = inner[..m].to_vec();
    left.push(KaryTree::Empty);
    let mut right = children[..j - 1].to_vec();
    right.push(inner[m].clone());
    right.resize(m + 1, KaryTree::Empty);
    OpTree::node(
        OpLabel::Mid(m + 1 - j),
        strip(m, &left),
        strip(m, &right),
    )
}

/// All trees with `k_ops` operators, normal or not; there are
/// `Catalan(k_ops) * (m+1)^k_ops` of them.
pub fn enumerate_all_trees(m: usize, k_ops: usize) -> Vec<OpTree> {
    if k_ops == 0 {
        return vec![OpTree::Leaf];
    }
    let mut out = Vec::new();
    for root in OpLabel::all(m) {
        for left_ops in 0..k_ops {
            for left in enumerate_all_trees(m, left_ops) {
                for right in enumerate_all_trees(m, k_ops - 1 - left_ops) {
                    out.push(OpTree::node(root, left.clone(), right));
                }
            }
        }
    }
    out
}

/// Parse the S-expression grammar `g | (head expr expr)` with heads `<`,
/// `o1`..`o9`, `>`.
pub fn parse_expr(input: &str) -> Result<OpTree, DendriformError> {
    let bytes = input.trim().as_bytes();
    let err = |at: usize, reason: &str| DendriformError::Parse {
        input: input.to_string(),
        at,
        reason: reason.to_string(),
    };
    fn skip_ws(bytes: &[u8], pos: &mut usize) {
        while bytes.get(*pos).is_some_and(|b| b.is_ascii_whitespace()) {
            *pos += 1;
        }
    }
    fn expr(
        bytes: &[u8],
        pos: &mut usize,
        err: &impl Fn(usize, &str) -> DendriformError,
    ) -> Result<OpTree, DendriformError> {
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b'g') => {
                *pos += 1;
                Ok(OpTree::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                skip_ws(bytes, pos);
                let label = match bytes.get(*pos) {
                    Some(b'<') => {
                        *pos += 1;
                        OpLabel::Prec
                    }
                    Some(b'>') => {
                        *pos += 1;
                        OpLabel::Succ
                    }
                    Some(b'o') => {
                        *pos += 1;
                        let start = *pos;
                        while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
                            *pos += 1;
                        }
                        if *pos == start {
                            return Err(err(*pos, "expected an index after 'o'"));
                        }
                        let digits = std::str::from_utf8(&bytes[start..*pos]).expect("ascii");
                        let i: usize = digits
                            .parse()
                            .map_err(|_| err(start, "index out of range"))?;
                        if i == 0 {
                            return Err(err(start, "middle index must be >= 1"));
                        }
                        OpLabel::Mid(i)
                    }
                    _ => return Err(err(*pos, "expected a head '<', 'oN' or '>'")),
                };
                let left = expr(bytes, pos, err)?;
                let right = expr(bytes, pos, err)?;
                skip_ws(bytes, pos);
                if bytes.get(*pos) != Some(&b')') {
                    return Err(err(*pos, "expected ')'"));
                }
                *pos += 1;
                Ok(OpTree::node(label, left, right))
            }
            _ => Err(err(*pos, "expected 'g' or '('")),
        }
    }
    let mut pos = 0;
    let tree = expr(bytes, &mut pos, &err)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(err(pos, "trailing input"));
    }
    Ok(tree)
}

/// Bottom-up walk of an expression on canonical words only: at each node
/// the product of the children's canonical words must contain exactly one
/// 132-avoiding word, which is the canonical word of the node's class.
///
/// Together with class closure of the operations this certifies that the
/// expression evaluates to a single class sum without materializing it.
pub fn canonical_word_certificate(m: usize, t: &OpTree) -> Result<Word, DendriformError> {
    match t {
        OpTree::Leaf => Ok(generator_word(m)),
        OpTree::Node(l, a, b) => {
            let ca = canonical_word_certificate(m, a)?;
            let cb = canonical_word_certificate(m, b)?;
            let terms = apply_op_word(m, *l, &ca, &cb)?;
            let mut canonicals = terms.support().filter(|w| avoids_132(w));
            match (canonicals.next(), canonicals.next()) {
                (Some(w), None) => Ok(w.clone()),
                (first, _) => Err(DendriformError::NotASingleClass(
                    first.map_or(0, |_| 2) + canonicals.count(),
                )),
            }
        }
    }
}

/// Result of one dimension verification row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionReport {
    pub n: usize,
    pub census: BigInt,
    pub closed_form: BigInt,
    /// Rank of the evaluations of the normal forms, when requested.
    pub rank: Option<usize>,
    pub ok: bool,
}

/// Verify that the census of normal trees of degree `n` matches the
/// Fuss-Catalan number, optionally also computing the rank over the
/// rationals of their evaluations.
pub fn dimension_check(
    m: usize,
    n: usize,
    with_rank: bool,
    cap: u64,
) -> Result<DimensionReport, DendriformError> {
    let trees = enumerate_normal(m, n - 1, cap)?;
    let census = BigInt::from(trees.len());
    let closed_form = fuss_catalan(m, n);
    let rank = if with_rank {
        let mut cache = EvalCache::new(m);
        let rows: Vec<Rc<WordLinComb>> = trees
            .iter()
            .map(|t| cache.eval(t))
            .collect::<Result<_, _>>()?;
        Some(rank_of_rows(rows.iter().map(Rc::as_ref)))
    } else {
        None
    };
    let ok = census == closed_form && rank.is_none_or(|r| BigInt::from(r) == census);
    Ok(DimensionReport {
        n,
        census,
        closed_form,
        rank,
        ok,
    })
}

/// Exact rank over the rationals via sparse Gaussian elimination.
fn rank_of_rows<'a>(rows: impl Iterator<Item = &'a WordLinComb>) -> usize {
    // A pivot per column (word), stored as a reduced sparse row.
    let mut pivots: BTreeMap<Word, BTreeMap<Word, BigRational>> = BTreeMap::new();
    let mut rank = 0;
    for row in rows {
        let mut current: BTreeMap<Word, BigRational> = row
            .iter()
            .map(|(w, c)| (w.clone(), BigRational::from_integer(c.clone())))
            .collect();
        loop {
            let Some((col, lead)) = current.iter().next().map(|(w, c)| (w.clone(), c.clone()))
            else {
                break; // reduced to zero
            };
            match pivots.get(&col) {
                None => {
                    // Normalize so the leading coefficient is one.
                    let normalized: BTreeMap<Word, BigRational> = current
                        .iter()
                        .map(|(w, c)| (w.clone(), c / &lead))
                        .collect();
                    pivots.insert(col, normalized);
                    rank += 1;
                    break;
                }
                Some(pivot) => {
                    for (w, c) in pivot {
                        let delta = c * &lead;
                        let entry = current.entry(w.clone()).or_insert_with(BigRational::zero);
                        *entry -= delta;
                        if entry.is_zero() {
                            current.remove(w);
                        }
                    }
                }
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sylvester::sylvester_class;

    fn t(s: &str) -> OpTree {
        parse_expr(s).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn forbidden_pattern_counts_and_members() {
        use OpLabel::{Mid, Prec, Succ};
        let m1 = forbidden_patterns(1);
        assert_eq!(
            m1,
            BTreeSet::from([
                (Prec, Side::Left, Prec),
                (Succ, Side::Right, Prec),
                (Succ, Side::Right, Succ),
            ])
        );
        assert_eq!(forbidden_patterns(2).len(), 6);
        assert!(forbidden_patterns(3).contains(&(Mid(2), Side::Right, Mid(1))));
        for m in 1..=5 {
            assert_eq!(
                BigInt::from(forbidden_patterns(m).len()),
                crate::ktrees::binomial(m + 2, 2)
            );
        }
    }

    #[test]
    fn rewrite_sources_are_exactly_the_forbidden_patterns() {
        for m in 1..=4 {
            let sources: BTreeSet<(OpLabel, Side, OpLabel)> =
                rewrite_table(m).into_keys().collect();
            assert_eq!(sources, forbidden_patterns(m));
        }
    }

    #[test]
    fn normality_examples() {
        assert!(is_normal(2, &OpTree::Leaf));
        assert!(!is_normal(2, &t("(< (< g g) g)")));
        assert!(is_normal(2, &t("(< (> g g) g)")));
    }

    #[test]
    fn normalize_unit_relation() {
        // (g < g) < g -> g < (g < g) + g < (o g g) + g < (g > g)
        let got = normalize(2, &t("(< (< g g) g)")).unwrap();
        let expected: TreeLinComb = ["(< g (< g g))", "(< g (o1 g g))", "(< g (> g g))"]
            .iter()
            .map(|s| (t(s), BigInt::one()))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn normalize_succ_mid_relation() {
        // g > (g o g) -> (g o g) o g + (g > g) o g
        let got = normalize(2, &t("(> g (o1 g g))")).unwrap();
        let expected: TreeLinComb = ["(o1 (o1 g g) g)", "(o1 (> g g) g)"]
            .iter()
            .map(|s| (t(s), BigInt::one()))
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn normalize_fixes_normal_trees_and_outputs_normal_trees() {
        for m in 1..=2usize {
            for k in 0..=3usize {
                for tree in enumerate_all_trees(m, k) {
                    let nf = normalize(m, &tree).unwrap();
                    for (term, _) in nf.iter() {
                        assert!(is_normal(m, term), "{term} not normal (m={m})");
                    }
                    if is_normal(m, &tree) {
                        assert_eq!(nf, LinComb::unit(tree.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn census_counts() {
        assert_eq!(enumerate_normal(2, 1, 1 << 20).unwrap().len(), 3);
        assert_eq!(enumerate_normal(2, 2, 1 << 20).unwrap().len(), 12);
        assert_eq!(enumerate_normal(1, 2, 1 << 20).unwrap().len(), 5);
        let census = census_by_root(2, 3);
        assert_eq!(census.total[3], BigInt::from(55));
        assert_eq!(
            census.total[3],
            BigInt::from(enumerate_normal(2, 3, 1 << 20).unwrap().len())
        );
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval(2, &OpTree::Leaf).unwrap(), LinComb::unit(w("11")));
        assert_eq!(eval(2, &t("(> g g)")).unwrap(), LinComb::unit(w("1122")));
        let expected: WordLinComb = [w("1212"), w("2112")]
            .into_iter()
            .map(|x| (x, BigInt::one()))
            .collect();
        assert_eq!(eval(2, &t("(o1 g g)")).unwrap(), expected);
    }

    #[test]
    fn eval_is_invariant_under_normalize_on_samples() {
        let mut cache = EvalCache::new(2);
        for s in [
            "(< (< g g) g)",
            "(> g (o1 g g))",
            "(o1 (< g g) g)",
            "(> g (> g g))",
            "(o1 (o1 g (< g g)) (> g g))",
        ] {
            let tree = t(s);
            let direct = cache.eval(&tree).unwrap();
            let via_nf = cache
                .eval_lincomb(&normalize(2, &tree).unwrap())
                .unwrap();
            assert_eq!(*direct, via_nf, "soundness failed on {s}");
        }
    }

    #[test]
    fn expr_from_small_ktrees() {
        assert_eq!(expr_from_ktree(2, &KaryTree::leaf(2)).unwrap(), OpTree::Leaf);
        let k = KaryTree::node(vec![KaryTree::Empty, KaryTree::leaf(2), KaryTree::Empty]);
        let expr = expr_from_ktree(2, &k).unwrap();
        assert_eq!(expr, t("(o1 g g)"));
        let class = sylvester_class(&w("2112")).unwrap();
        assert_eq!(eval(2, &expr).unwrap(), class.class_sum());
    }

    #[test]
    fn expr_of_the_nine_node_tree_matches_the_worked_derivation() {
        let word = w("9,9,7,7,8,6,6,4,3,3,2,2,4,5,1,1,5,8");
        let k = crate::ktrees::tree_from_word(&word, 2).unwrap();
        let expr = expr_from_ktree(2, &k).unwrap();
        assert_eq!(
            expr,
            t("(< (o1 (o1 g (> (o1 g (o1 g g)) g)) (o1 g (> g g))) g)")
        );
        assert_eq!(canonical_word_certificate(2, &expr).unwrap(), word);
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["g", "(< g g)", "(o1 g (> g g))", "(o2 (o1 g g) g)"] {
            let tree = t(s);
            assert_eq!(tree.to_text(), s.to_string());
            assert_eq!(parse_expr(&tree.to_text()).unwrap(), tree);
        }
        assert!(parse_expr("(x g g)").is_err());
        assert!(parse_expr("(< g)").is_err());
        assert!(parse_expr("g g").is_err());
    }

    #[test]
    fn dimension_check_with_rank() {
        let report = dimension_check(2, 3, true, 1 << 20).unwrap();
        assert_eq!(report.census, BigInt::from(12));
        assert_eq!(report.rank, Some(12));
        assert!(report.ok);

        let report = dimension_check(2, 1, true, 1 << 20).unwrap();
        assert_eq!(report.census, BigInt::from(1));
        assert_eq!(report.rank, Some(1));
        assert!(report.ok);

        let report = dimension_check(1, 4, true, 1 << 20).unwrap();
        assert_eq!(report.census, BigInt::from(14));
        assert_eq!(report.rank, Some(14));
        assert!(report.ok);
    }

    #[test]
    fn canonical_certificate_agrees_with_class_bfs_on_small_trees() {
        for n in 1..=3usize {
            for k in crate::ktrees::enumerate_ktrees(2, n, 1 << 20).unwrap() {
                let expr = expr_from_ktree(2, &k).unwrap();
                let canonical = canonical_word_certificate(2, &expr).unwrap();
                let reading = crate::ktrees::reading_word(&k, 2).unwrap();
                assert_eq!(canonical, reading);
                let class = sylvester_class(&reading).unwrap();
                assert_eq!(eval(2, &expr).unwrap(), class.class_sum());
            }
        }
    }
}
