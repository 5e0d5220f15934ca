//! The dual monomial rewriting system: trees over `m + 1` operations whose
//! relations equate single monomials, oriented toward the valid patterns.
//!
//! The valid patterns are the dendriform forbidden patterns with labels
//! transliterated, and a tree is normal when EVERY internal edge is a valid
//! pattern — the complement of the dendriform convention. Normal forms are
//! counted by `binomial(k_ops + m, k_ops)`; local confluence and bounded
//! acyclicity of the rewrite digraph are certified exhaustively.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::dendriform::Side;

pub const STEP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiasError {
    #[error("operation label {0} is not valid for m = {1}")]
    InvalidLabel(String, usize),
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
}

/// Label of a dual operation, written `-|`, `m1`..`m(m-1)`, `|-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiasLabel {
    DLeft,
    DMid(usize),
    DRight,
}

impl DiasLabel {
    pub fn all(m: usize) -> Vec<DiasLabel> {
        let mut ops = vec![DiasLabel::DLeft];
        ops.extend((1..m).map(DiasLabel::DMid));
        ops.push(DiasLabel::DRight);
        ops
    }

    pub fn is_valid_for(self, m: usize) -> bool {
        match self {
            DiasLabel::DMid(i) => i >= 1 && i < m,
            _ => true,
        }
    }

    pub fn symbol(self) -> String {
        match self {
            DiasLabel::DLeft => "-|".into(),
            DiasLabel::DMid(i) => format!("m{i}"),
            DiasLabel::DRight => "|-".into(),
        }
    }
}

impl fmt::Display for DiasLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A complete binary tree over the dual operations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiasTree {
    Leaf,
    Node(DiasLabel, Box<DiasTree>, Box<DiasTree>),
}

impl DiasTree {
    pub fn node(label: DiasLabel, left: DiasTree, right: DiasTree) -> DiasTree {
        DiasTree::Node(label, Box::new(left), Box::new(right))
    }

    pub fn op_count(&self) -> usize {
        match self {
            DiasTree::Leaf => 0,
            DiasTree::Node(_, l, r) => 1 + l.op_count() + r.op_count(),
        }
    }

    pub fn root_label(&self) -> Option<DiasLabel> {
        match self {
            DiasTree::Leaf => None,
            DiasTree::Node(l, _, _) => Some(*l),
        }
    }

    pub fn validate(&self, m: usize) -> Result<(), DiasError> {
        match self {
            DiasTree::Leaf => Ok(()),
            DiasTree::Node(l, a, b) => {
                if !l.is_valid_for(m) {
                    return Err(DiasError::InvalidLabel(l.symbol(), m));
                }
                a.validate(m)?;
                b.validate(m)
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            DiasTree::Leaf => "g".into(),
            DiasTree::Node(l, a, b) => format!("({} {} {})", l.symbol(), a.to_text(), b.to_text()),
        }
    }
}

impl fmt::Display for DiasTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// The valid parent-child edges: the dendriform forbidden patterns with
/// labels transliterated. A normal tree consists only of these.
pub fn valid_patterns(m: usize) -> BTreeSet<(DiasLabel, Side, DiasLabel)> {
    use DiasLabel::{DLeft, DMid, DRight};
    let mut set = BTreeSet::new();
    set.insert((DLeft, Side::Left, DLeft));
    set.insert((DRight, Side::Right, DLeft));
    set.insert((DRight, Side::Right, DRight));
    for i in 1..m {
        set.insert((DMid(i), Side::Right, DLeft));
        set.insert((DMid(i), Side::Left, DLeft));
        set.insert((DRight, Side::Right, DMid(i)));
        for j in i + 1..m {
            set.insert((DMid(j), Side::Right, DMid(i)));
        }
    }
    set
}

/// True iff every internal edge of `t` is a valid pattern.
pub fn is_dias_normal(m: usize, t: &DiasTree) -> bool {
    let valid = valid_patterns(m);
    fn scan(t: &DiasTree, valid: &BTreeSet<(DiasLabel, Side, DiasLabel)>) -> bool {
        match t {
            DiasTree::Leaf => true,
            DiasTree::Node(l, a, b) => {
                if let Some(al) = a.root_label() {
                    if !valid.contains(&(*l, Side::Left, al)) {
                        return false;
                    }
                }
                if let Some(bl) = b.root_label() {
                    if !valid.contains(&(*l, Side::Right, bl)) {
                        return false;
                    }
                }
                scan(a, valid) && scan(b, valid)
            }
        }
    }
    scan(t, &valid)
}

/// A two-operator tree shape: `side = Left` is `(u inner v) root w`,
/// `side = Right` is `u root (v inner w)`, with leaves `u`, `v`, `w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiasShape {
    pub root: DiasLabel,
    pub side: Side,
    pub inner: DiasLabel,
}

/// A monomial rewrite between two-operator shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiasRule {
    pub from: DiasShape,
    pub to: DiasShape,
}

/// One rule per non-valid two-operator shape, each targeting the unique
/// valid member of its relation.
pub fn dias_rules(m: usize) -> Vec<DiasRule> {
    use DiasLabel::{DLeft, DMid, DRight};
    let shape = |root, side, inner| DiasShape { root, side, inner };
    let mut groups: Vec<Vec<DiasShape>> = Vec::new();

    // (u -| v) -| w = u -| (v ? w) for every ?
    let mut un = vec![shape(DLeft, Side::Left, DLeft)];
    un.extend(DiasLabel::all(m).into_iter().map(|x| shape(DLeft, Side::Right, x)));
    groups.push(un);
    // (u mi v) -| w = u mi (v -| w)
    for i in 1..m {
        groups.push(vec![
            shape(DLeft, Side::Left, DMid(i)),
            shape(DMid(i), Side::Right, DLeft),
        ]);
    }
    // (u |- v) -| w = u |- (v -| w)
    groups.push(vec![
        shape(DLeft, Side::Left, DRight),
        shape(DRight, Side::Right, DLeft),
    ]);
    // (u -| v) mi w = u mi (v |- w) = u mi (v mj w) for j >= i
    for i in 1..m {
        let mut group = vec![
            shape(DMid(i), Side::Left, DLeft),
            shape(DMid(i), Side::Right, DRight),
        ];
        group.extend((i..m).map(|j| shape(DMid(i), Side::Right, DMid(j))));
        groups.push(group);
    }
    // (u ? v) |- w = u |- (v |- w) for every ?
    let mut ci: Vec<DiasShape> = DiasLabel::all(m)
        .into_iter()
        .map(|x| shape(DRight, Side::Left, x))
        .collect();
    ci.push(shape(DRight, Side::Right, DRight));
    groups.push(ci);
    // (u mj v) mi w = (u |- v) mi w = u |- (v mi w) for i + j >= m
    for i in 1..m {
        let mut group: Vec<DiasShape> = (1..m)
            .filter(|j| i + j >= m)
            .map(|j| shape(DMid(i), Side::Left, DMid(j)))
            .collect();
        group.push(shape(DMid(i), Side::Left, DRight));
        group.push(shape(DRight, Side::Right, DMid(i)));
        groups.push(group);
    }
    // (u mk v) mi w = u m(k+i) (v mi w) for k + i < m
    for i in 1..m {
        for k in 1..m {
            if k + i < m {
                groups.push(vec![
                    shape(DMid(i), Side::Left, DMid(k)),
                    shape(DMid(k + i), Side::Right, DMid(i)),
                ]);
            }
        }
    }

    let valid = valid_patterns(m);
    let is_valid = |s: &DiasShape| valid.contains(&(s.root, s.side, s.inner));
    let mut rules = Vec::new();
    for group in groups {
        let targets: Vec<&DiasShape> = group.iter().filter(|s| is_valid(s)).collect();
        assert_eq!(targets.len(), 1, "each relation has one valid member");
        let to = *targets[0];
        for from in group {
            if !is_valid(&from) {
                rules.push(DiasRule { from, to });
            }
        }
    }
    rules
}

fn rule_table(m: usize) -> HashMap<(DiasLabel, Side, DiasLabel), DiasShape> {
    dias_rules(m)
        .into_iter()
        .map(|r| ((r.from.root, r.from.side, r.from.inner), r.to))
        .collect()
}

/// Apply a rule at the root of `(root, a, b)`; the operands keep their
/// left-to-right order.
fn apply_shape(to: &DiasShape, u: DiasTree, v: DiasTree, w: DiasTree) -> DiasTree {
    match to.side {
        Side::Left => DiasTree::node(to.root, DiasTree::node(to.inner, u, v), w),
        Side::Right => DiasTree::node(to.root, u, DiasTree::node(to.inner, v, w)),
    }
}

/// The unique all-valid-edges tree in the congruence class of `t`.
pub fn normal_form(m: usize, t: &DiasTree) -> Result<DiasTree, DiasError> {
    t.validate(m)?;
    let table = rule_table(m);
    let mut budget = STEP_BUDGET;
    nf(&table, t, &mut budget)
}

fn nf(
    table: &HashMap<(DiasLabel, Side, DiasLabel), DiasShape>,
    t: &DiasTree,
    budget: &mut u64,
) -> Result<DiasTree, DiasError> {
    match t {
        DiasTree::Leaf => Ok(DiasTree::Leaf),
        DiasTree::Node(l, a, b) => {
            let na = nf(table, a, budget)?;
            let nb = nf(table, b, budget)?;
            graft(table, *l, na, nb, budget)
        }
    }
}

fn graft(
    table: &HashMap<(DiasLabel, Side, DiasLabel), DiasShape>,
    label: DiasLabel,
    a: DiasTree,
    b: DiasTree,
    budget: &mut u64,
) -> Result<DiasTree, DiasError> {
    *budget = budget
        .checked_sub(1)
        .filter(|&x| x > 0)
        .ok_or(DiasError::StepBudgetExceeded)?;
    if let Some(al) = a.root_label() {
        if let Some(&to) = table.get(&(label, Side::Left, al)) {
            // (a1 al a2) label b -> a1 to.root (a2 to.inner b)
            debug_assert_eq!(to.side, Side::Right);
            let (u, v) = match a {
                DiasTree::Node(_, a1, a2) => (*a1, *a2),
                DiasTree::Leaf => unreachable!(),
            };
            let inner = graft(table, to.inner, v, b, budget)?;
            return graft(table, to.root, u, inner, budget);
        }
    }
    if let Some(bl) = b.root_label() {
        if let Some(&to) = table.get(&(label, Side::Right, bl)) {
            // a label (b1 bl b2) -> (a to.inner b1) to.root b2
            debug_assert_eq!(to.side, Side::Left);
            let (v, w) = match b {
                DiasTree::Node(_, b1, b2) => (*b1, *b2),
                DiasTree::Leaf => unreachable!(),
            };
            let inner = graft(table, to.inner, a, v, budget)?;
            return graft(table, to.root, inner, w, budget);
        }
    }
    Ok(DiasTree::node(label, a, b))
}

/// Every tree obtainable from `t` by one rule application at one position.
pub fn one_step_rewrites(m: usize, t: &DiasTree) -> Vec<DiasTree> {
    let table = rule_table(m);
    rewrites_with(&table, t)
}

fn rewrites_with(
    table: &HashMap<(DiasLabel, Side, DiasLabel), DiasShape>,
    t: &DiasTree,
) -> Vec<DiasTree> {
    let mut out = Vec::new();
    if let DiasTree::Node(l, a, b) = t {
        if let DiasTree::Node(al, a1, a2) = &**a {
            if let Some(to) = table.get(&(*l, Side::Left, *al)) {
                out.push(apply_shape(to, (**a1).clone(), (**a2).clone(), (**b).clone()));
            }
        }
        if let DiasTree::Node(bl, b1, b2) = &**b {
            if let Some(to) = table.get(&(*l, Side::Right, *bl)) {
                out.push(apply_shape(to, (**a).clone(), (**b1).clone(), (**b2).clone()));
            }
        }
        for ra in rewrites_with(table, a) {
            out.push(DiasTree::node(*l, ra, (**b).clone()));
        }
        for rb in rewrites_with(table, b) {
            out.push(DiasTree::node(*l, (**a).clone(), rb));
        }
    }
    out
}

/// All trees with `k_ops` operators, normal or not.
pub fn enumerate_all_dias_trees(m: usize, k_ops: usize) -> Vec<DiasTree> {
    if k_ops == 0 {
        return vec![DiasTree::Leaf];
    }
    let mut out = Vec::new();
    for root in DiasLabel::all(m) {
        for left_ops in 0..k_ops {
            for left in enumerate_all_dias_trees(m, left_ops) {
                for right in enumerate_all_dias_trees(m, k_ops - 1 - left_ops) {
                    out.push(DiasTree::node(root, left.clone(), right));
                }
            }
        }
    }
    out
}

/// Counts of normal trees by operator count and root label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiasCensus {
    pub m: usize,
    pub total: Vec<BigInt>,
    pub by_root: BTreeMap<DiasLabel, Vec<BigInt>>,
}

pub fn dias_census_by_root(m: usize, max_ops: usize) -> DiasCensus {
    let valid = valid_patterns(m);
    let ops = DiasLabel::all(m);
    let mut by_root: BTreeMap<DiasLabel, Vec<BigInt>> = ops
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
                        .filter(|&&child| valid.contains(&(root, side, child)))
                        .map(|&child| by_root[&child][sub_ops].clone())
                        .sum()
                };
                count += admissible(Side::Left, left_ops) * admissible(Side::Right, right_ops);
            }
            by_root.get_mut(&root).unwrap()[k] = count;
        }
        total[k] = ops.iter().map(|op| by_root[op][k].clone()).sum();
    }
    DiasCensus { m, total, by_root }
}

/// All normal trees with exactly `k_ops` operators.
pub fn enumerate_dias_normal(
    m: usize,
    k_ops: usize,
    cap: u64,
) -> Result<Vec<DiasTree>, DiasError> {
    let census = dias_census_by_root(m, k_ops);
    if census.total[k_ops] > BigInt::from(cap) {
        return Err(DiasError::CapExceeded { m, k_ops, cap });
    }
    let valid = valid_patterns(m);
    let ops = DiasLabel::all(m);
    let mut memo: Vec<Vec<DiasTree>> = vec![vec![DiasTree::Leaf]];
    for k in 1..=k_ops {
        let mut level = Vec::new();
        for &root in &ops {
            for left_ops in 0..k {
                let right_ops = k - 1 - left_ops;
                let admissible = |side: Side, sub: &DiasTree| match sub.root_label() {
                    None => true,
                    Some(child) => valid.contains(&(root, side, child)),
                };
                for left in &memo[left_ops] {
                    if !admissible(Side::Left, left) {
                        continue;
                    }
                    for right in &memo[right_ops] {
                        if admissible(Side::Right, right) {
                            level.push(DiasTree::node(root, left.clone(), right.clone()));
                        }
                    }
                }
            }
        }
        memo.push(level);
    }
    Ok(memo.pop().expect("at least one level"))
}

/// Joinability record for one three-operator tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceEntry {
    pub tree: DiasTree,
    pub reducts: Vec<DiasTree>,
    pub normal_forms: BTreeSet<DiasTree>,
    pub joinable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfluenceCertificate {
    pub m: usize,
    pub trees_checked: usize,
    pub entries: Vec<ConfluenceEntry>,
    pub pass: bool,
}

/// For every tree with exactly three operators, apply every applicable
/// rule at every position and verify all one-step reducts reach the same
/// normal form.
pub fn check_local_confluence(m: usize) -> Result<ConfluenceCertificate, DiasError> {
    let mut entries = Vec::new();
    let mut pass = true;
    for tree in enumerate_all_dias_trees(m, 3) {
        let reducts = one_step_rewrites(m, &tree);
        let mut normal_forms = BTreeSet::new();
        normal_forms.insert(normal_form(m, &tree)?);
        for r in &reducts {
            normal_forms.insert(normal_form(m, r)?);
        }
        let joinable = normal_forms.len() == 1;
        pass &= joinable;
        entries.push(ConfluenceEntry {
            tree,
            reducts,
            normal_forms,
            joinable,
        });
    }
    Ok(ConfluenceCertificate {
        m,
        trees_checked: entries.len(),
        entries,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcyclicityCertificate {
    pub m: usize,
    pub max_ops: usize,
    pub nodes: usize,
    pub edges: usize,
    pub acyclic: bool,
}

/// Build the one-step rewrite digraph on all trees with up to `k_ops`
/// operators and verify it has no directed cycle. Rewrites preserve the
/// operator count, so each stratum is checked on its own.
pub fn check_acyclic(m: usize, k_ops: usize, cap: u64) -> Result<AcyclicityCertificate, DiasError> {
    let mut nodes = 0;
    let mut edges = 0;
    let mut acyclic = true;
    for k in 0..=k_ops {
        let stratum = enumerate_all_dias_trees(m, k);
        if stratum.len() as u64 > cap {
            return Err(DiasError::CapExceeded { m, k_ops: k, cap });
        }
        nodes += stratum.len();
        let succ: BTreeMap<&DiasTree, Vec<DiasTree>> = stratum
            .iter()
            .map(|t| (t, one_step_rewrites(m, t)))
            .collect();
        edges += succ.values().map(Vec::len).sum::<usize>();
        // Iterative three-color depth-first search.
        let mut color: BTreeMap<&DiasTree, u8> = BTreeMap::new();
        for start in &stratum {
            if color.contains_key(start) {
                continue;
            }
            let mut stack: Vec<(&DiasTree, usize)> = vec![(start, 0)];
            color.insert(start, 1);
            while let Some(&(node, idx)) = stack.last() {
                let next = succ[&node].get(idx);
                match next {
                    None => {
                        color.insert(node, 2);
                        stack.pop();
                    }
                    Some(child) => {
                        stack.last_mut().expect("nonempty").1 += 1;
                        let child_ref = succ
                            .get_key_value(child)
                            .map(|(k, _)| *k)
                            .expect("closed under rewriting");
                        match color.get(child_ref) {
                            Some(1) => {
                                acyclic = false;
                                stack.clear();
                            }
                            Some(2) => {}
                            _ => {
                                color.insert(child_ref, 1);
                                stack.push((child_ref, 0));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(AcyclicityCertificate {
        m,
        max_ops: k_ops,
        nodes,
        edges,
        acyclic,
    })
}

/// Congruence classes of trees with exactly `k_ops` operators under the
/// symmetric closure of the rules.
pub fn congruence_class_count(m: usize, k_ops: usize) -> usize {
    let stratum = enumerate_all_dias_trees(m, k_ops);
    let mut classes = 0;
    let mut seen: BTreeSet<DiasTree> = BTreeSet::new();
    let index: BTreeSet<DiasTree> = stratum.iter().cloned().collect();
    let mut neighbours: BTreeMap<DiasTree, BTreeSet<DiasTree>> = BTreeMap::new();
    for t in &index {
        for r in one_step_rewrites(m, t) {
            neighbours.entry(t.clone()).or_default().insert(r.clone());
            neighbours.entry(r).or_default().insert(t.clone());
        }
    }
    for t in &index {
        if seen.contains(t) {
            continue;
        }
        classes += 1;
        let mut queue = VecDeque::from([t.clone()]);
        seen.insert(t.clone());
        while let Some(cur) = queue.pop_front() {
            if let Some(next) = neighbours.get(&cur) {
                for n in next {
                    if seen.insert(n.clone()) {
                        queue.push_back(n.clone());
                    }
                }
            }
        }
    }
    classes
}

/// Parse `g | (head expr expr)` with heads `-|`, `m1`..`m9`, `|-`.
pub fn parse_dias(input: &str) -> Result<DiasTree, DiasError> {
    let bytes = input.trim().as_bytes();
    let err = |at: usize, reason: &str| DiasError::Parse {
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
        err: &impl Fn(usize, &str) -> DiasError,
    ) -> Result<DiasTree, DiasError> {
        skip_ws(bytes, pos);
        match bytes.get(*pos) {
            Some(b'g') => {
                *pos += 1;
                Ok(DiasTree::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                skip_ws(bytes, pos);
                let label = if bytes[*pos..].starts_with(b"-|") {
                    *pos += 2;
                    DiasLabel::DLeft
                } else if bytes[*pos..].starts_with(b"|-") {
                    *pos += 2;
                    DiasLabel::DRight
                } else if bytes.get(*pos) == Some(&b'm') {
                    *pos += 1;
                    let start = *pos;
                    while bytes.get(*pos).is_some_and(u8::is_ascii_digit) {
                        *pos += 1;
                    }
                    if *pos == start {
                        return Err(err(*pos, "expected an index after 'm'"));
                    }
                    let digits = std::str::from_utf8(&bytes[start..*pos]).expect("ascii");
                    let i: usize = digits
                        .parse()
                        .map_err(|_| err(start, "index out of range"))?;
                    if i == 0 {
                        return Err(err(start, "middle index must be >= 1"));
                    }
                    DiasLabel::DMid(i)
                } else {
                    return Err(err(*pos, "expected a head '-|', 'mN' or '|-'"));
                };
                let left = expr(bytes, pos, err)?;
                let right = expr(bytes, pos, err)?;
                skip_ws(bytes, pos);
                if bytes.get(*pos) != Some(&b')') {
                    return Err(err(*pos, "expected ')'"));
                }
                *pos += 1;
                Ok(DiasTree::node(label, left, right))
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktrees::binomial;

    fn t(s: &str) -> DiasTree {
        parse_dias(s).unwrap()
    }

    #[test]
    fn valid_patterns_examples() {
        use DiasLabel::{DLeft, DMid, DRight};
        assert_eq!(
            valid_patterns(1),
            BTreeSet::from([
                (DLeft, Side::Left, DLeft),
                (DRight, Side::Right, DLeft),
                (DRight, Side::Right, DRight),
            ])
        );
        assert_eq!(valid_patterns(2).len(), 6);
        assert!(valid_patterns(3).contains(&(DMid(2), Side::Right, DMid(1))));
    }

    #[test]
    fn rules_cover_every_non_valid_shape_once() {
        for m in 1..=4usize {
            let rules = dias_rules(m);
            let valid = valid_patterns(m);
            let total_shapes = 2 * (m + 1) * (m + 1);
            assert_eq!(rules.len(), total_shapes - valid.len());
            let mut froms = BTreeSet::new();
            for rule in &rules {
                assert!(
                    !valid.contains(&(rule.from.root, rule.from.side, rule.from.inner)),
                    "rule source must be non-valid"
                );
                assert!(
                    valid.contains(&(rule.to.root, rule.to.side, rule.to.inner)),
                    "rule target must be valid"
                );
                assert!(froms.insert(rule.from), "duplicate rule source");
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(normal_form(2, &t("(-| (|- g g) g)")).unwrap(), t("(|- g (-| g g))"));
        assert_eq!(normal_form(2, &t("(-| g (|- g g))")).unwrap(), t("(-| (-| g g) g)"));
        let valid_tree = t("(|- g (|- g g))");
        assert_eq!(normal_form(2, &valid_tree).unwrap(), valid_tree);
    }

    #[test]
    fn normal_forms_are_valid_and_reachable() {
        for m in 1..=3usize {
            for k in 0..=3usize {
                for tree in enumerate_all_dias_trees(m, k) {
                    let nf = normal_form(m, &tree).unwrap();
                    assert!(is_dias_normal(m, &nf), "{nf} not normal (m={m})");
                    assert_eq!(nf.op_count(), tree.op_count());
                }
            }
        }
    }

    #[test]
    fn census_counts_are_binomials() {
        assert_eq!(enumerate_dias_normal(1, 2, 1 << 20).unwrap().len(), 3);
        assert_eq!(enumerate_dias_normal(2, 2, 1 << 20).unwrap().len(), 6);
        assert_eq!(enumerate_dias_normal(2, 0, 1 << 20).unwrap().len(), 1);
        for m in 1..=3usize {
            for k in 0..=5usize {
                let got = enumerate_dias_normal(m, k, 1 << 20).unwrap();
                assert_eq!(BigInt::from(got.len()), binomial(k + m, k), "m={m}, k={k}");
                assert!(got.iter().all(|t| is_dias_normal(m, t)));
            }
        }
    }

    #[test]
    fn local_confluence_holds_for_small_m() {
        // m = 4 goes beyond the hand-checkable case in the same sweep.
        for m in 1..=4usize {
            let cert = check_local_confluence(m).unwrap();
            assert!(cert.pass, "confluence failed for m = {m}");
            assert!(check_acyclic(m, 3, 1 << 20).unwrap().acyclic);
        }
    }

    #[test]
    fn rewrite_digraph_is_acyclic_on_small_strata() {
        for (m, k) in [(1usize, 3usize), (2, 3), (2, 1), (3, 3)] {
            let cert = check_acyclic(m, k, 1 << 20).unwrap();
            assert!(cert.acyclic, "cycle found for m = {m}, k <= {k}");
        }
    }

    #[test]
    fn every_maximal_rewrite_sequence_reaches_the_same_normal_form() {
        // Any-strategy uniqueness on all trees with <= 3 operators.
        for m in 1..=3usize {
            for k in 0..=3usize {
                for tree in enumerate_all_dias_trees(m, k) {
                    let mut reachable_nfs = BTreeSet::new();
                    explore(m, &tree, &mut reachable_nfs, &mut BTreeSet::new());
                    assert_eq!(
                        reachable_nfs.len(),
                        1,
                        "tree {tree} reaches several normal forms (m={m})"
                    );
                    assert!(reachable_nfs.contains(&normal_form(m, &tree).unwrap()));
                }
            }
        }
    }

    fn explore(
        m: usize,
        t: &DiasTree,
        nfs: &mut BTreeSet<DiasTree>,
        seen: &mut BTreeSet<DiasTree>,
    ) {
        if !seen.insert(t.clone()) {
            return;
        }
        let steps = one_step_rewrites(m, t);
        if steps.is_empty() {
            nfs.insert(t.clone());
            return;
        }
        for s in steps {
            explore(m, &s, nfs, seen);
        }
    }

    #[test]
    fn class_count_matches_normal_form_count() {
        for m in 1..=3usize {
            for k in 0..=3usize {
                assert_eq!(
                    congruence_class_count(m, k),
                    enumerate_dias_normal(m, k, 1 << 20).unwrap().len(),
                    "m={m}, k={k}"
                );
            }
        }
    }

    #[test]
    fn parse_and_print_round_trip() {
        for s in ["g", "(-| g g)", "(m1 g (|- g g))", "(|- (m2 g g) g)"] {
            let tree = t(s);
            assert_eq!(tree.to_text(), s.to_string());
        }
        assert!(parse_dias("(? g g)").is_err());
    }
}
