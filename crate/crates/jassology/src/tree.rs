//! Ordered trees given by ramification functions, and simple balanced words.
//!
//! A `Dallajascar` is an ordered tree presented as a parent function `φ` and
//! an ordered-children function `H`. Simple words over one bracket pair are
//! in bijection with these trees; both directions live here, together with
//! the two nesting relations and the total order they induce.

use std::collections::BTreeMap;
use std::fmt;

/// One character of a simple word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bracket {
    Open,
    Close,
}

/// A word over a single bracket pair, rendered as `(` / `)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SimpleWord(pub Vec<Bracket>);

impl SimpleWord {
    pub fn from_str_brackets(s: &str) -> Option<SimpleWord> {
        s.chars()
            .map(|c| match c {
                '(' => Some(Bracket::Open),
                ')' => Some(Bracket::Close),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(SimpleWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SimpleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                Bracket::Open => "(",
                Bracket::Close => ")",
            })?;
        }
        Ok(())
    }
}

/// Rejection of a simple word, with the 1-based position that broke the rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimpleWordError {
    pub position: usize,
    pub reason: SimpleWordErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleWordErrorKind {
    /// An opener is not matched by an immediately reachable closer.
    UnmatchedOpen,
    /// A closer has no opener left to match.
    UnmatchedClose,
    /// The word is empty or has no opener.
    Empty,
    /// The closer of the first opener is not the last character.
    FirstOpenerNotOutermost,
}

impl fmt::Display for SimpleWordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.reason {
            SimpleWordErrorKind::UnmatchedOpen => "unmatched opening character",
            SimpleWordErrorKind::UnmatchedClose => "unmatched closing character",
            SimpleWordErrorKind::Empty => "word contains no opener",
            SimpleWordErrorKind::FirstOpenerNotOutermost => {
                "first opener does not close at the last character"
            }
        };
        write!(f, "{what} at position {}", self.position)
    }
}

impl std::error::Error for SimpleWordError {}

/// Matching table of a simple word: `pairs[k] = (α_k, β_k)`, 1-based, ordered
/// by opener position.
pub type PairTable = Vec<(usize, usize)>;

/// Checks the nesting rule by the recursion on the number of openers: the
/// last opener must be followed immediately by a closer; remove the pair and
/// recurse. On success the word must additionally close its first opener at
/// the very last character.
pub fn validate_simple_word(w: &SimpleWord) -> Result<PairTable, SimpleWordError> {
    let n = w.0.len();
    let mut alive = vec![true; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let opener_count = w.0.iter().filter(|c| **c == Bracket::Open).count();
    if opener_count == 0 {
        return Err(SimpleWordError {
            position: 1,
            reason: SimpleWordErrorKind::Empty,
        });
    }
    for _ in 0..opener_count {
        let open = match (0..n).rev().find(|&i| alive[i] && w.0[i] == Bracket::Open) {
            Some(i) => i,
            None => unreachable!("counted openers remain"),
        };
        let close = (open + 1..n).find(|&i| alive[i]);
        match close {
            Some(i) if w.0[i] == Bracket::Close => {
                alive[open] = false;
                alive[i] = false;
                pairs.push((open + 1, i + 1));
            }
            _ => {
                return Err(SimpleWordError {
                    position: open + 1,
                    reason: SimpleWordErrorKind::UnmatchedOpen,
                })
            }
        }
    }
    if let Some(i) = (0..n).find(|&i| alive[i]) {
        return Err(SimpleWordError {
            position: i + 1,
            reason: SimpleWordErrorKind::UnmatchedClose,
        });
    }
    pairs.sort_unstable();
    if pairs[0] != (1, n) {
        return Err(SimpleWordError {
            position: pairs[0].1,
            reason: SimpleWordErrorKind::FirstOpenerNotOutermost,
        });
    }
    Ok(pairs)
}

/// A violation of one of the four tree axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation<T> {
    /// Axiom i: the root must have no parent.
    RootHasParent(T),
    /// Axiom ii: a non-root element has no parent.
    MissingParent(T),
    /// Axiom iii: following parents from `element` loops back to it.
    ParentCycle(T),
    /// Axiom iv: the children list of `parent` does not equal the set of
    /// elements whose parent it is, or is not simple.
    BadChildren(T),
    /// An element referenced by φ or H is not in the carrier set.
    UnknownElement(T),
    /// No root (element with φ = ε) exists, or several do.
    RootCount(usize),
}

impl<T: fmt::Debug> fmt::Display for TreeViolation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::RootHasParent(x) => write!(f, "root {x:?} has a parent"),
            TreeViolation::MissingParent(x) => write!(f, "element {x:?} has no parent"),
            TreeViolation::ParentCycle(x) => write!(f, "parent chain of {x:?} cycles"),
            TreeViolation::BadChildren(x) => {
                write!(f, "children of {x:?} disagree with the parent function")
            }
            TreeViolation::UnknownElement(x) => write!(f, "unknown element {x:?}"),
            TreeViolation::RootCount(n) => write!(f, "{n} elements have no parent"),
        }
    }
}

/// An ordered tree on a finite carrier, as the pair of ramification
/// functions `(φ, H)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dallajascar<T: Ord + Clone> {
    parent: BTreeMap<T, Option<T>>,
    children: BTreeMap<T, Vec<T>>,
    root: T,
}

impl<T: Ord + Clone + fmt::Debug> Dallajascar<T> {
    /// Builds the tree from raw `(φ, H)` data without checking the axioms;
    /// call [`Dallajascar::validate`] to obtain the violations, if any.
    pub fn from_raw(parent: BTreeMap<T, Option<T>>, children: BTreeMap<T, Vec<T>>, root: T) -> Self {
        Dallajascar { parent, children, root }
    }

    /// Builds the tree from the root and the ordered-children function,
    /// deriving φ. The children lists must describe a tree.
    pub fn from_children(root: T, children: BTreeMap<T, Vec<T>>) -> Self {
        let mut parent: BTreeMap<T, Option<T>> = BTreeMap::new();
        parent.insert(root.clone(), None);
        for (p, cs) in &children {
            parent.entry(p.clone()).or_insert(None);
            for c in cs {
                parent.insert(c.clone(), Some(p.clone()));
            }
        }
        let mut children = children;
        for x in parent.keys() {
            children.entry(x.clone()).or_default();
        }
        Dallajascar { parent, children, root }
    }

    pub fn root(&self) -> &T {
        &self.root
    }

    pub fn elements(&self) -> impl Iterator<Item = &T> {
        self.parent.keys()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// φ: the parent of `x`, `None` for the root.
    pub fn parent(&self, x: &T) -> Option<&T> {
        self.parent.get(x).and_then(|p| p.as_ref())
    }

    /// H: the ordered children of `x`.
    pub fn children(&self, x: &T) -> &[T] {
        self.children.get(x).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Checks the four axioms and returns every violation found.
    pub fn validate(&self) -> Vec<TreeViolation<T>> {
        let mut out = Vec::new();
        let roots = self.parent.values().filter(|p| p.is_none()).count();
        if roots != 1 {
            out.push(TreeViolation::RootCount(roots));
        }
        if self.parent.get(&self.root) != Some(&None) {
            out.push(TreeViolation::RootHasParent(self.root.clone()));
        }
        for (x, p) in &self.parent {
            match p {
                None => {
                    if *x != self.root {
                        out.push(TreeViolation::MissingParent(x.clone()));
                    }
                }
                Some(p) => {
                    if !self.parent.contains_key(p) {
                        out.push(TreeViolation::UnknownElement(p.clone()));
                    }
                }
            }
        }
        // Axiom iii: no x ≠ root with φⁿ(x) = x.
        for x in self.parent.keys() {
            let mut cur = x.clone();
            let mut steps = 0usize;
            loop {
                match self.parent.get(&cur).and_then(|p| p.clone()) {
                    None => break,
                    Some(p) => {
                        if p == *x {
                            out.push(TreeViolation::ParentCycle(x.clone()));
                            break;
                        }
                        cur = p;
                        steps += 1;
                        if steps > self.parent.len() {
                            out.push(TreeViolation::ParentCycle(x.clone()));
                            break;
                        }
                    }
                }
            }
        }
        // Axiom iv: H(x) simple and equal, as a set, to the φ-preimage of x.
        for (x, cs) in &self.children {
            if !self.parent.contains_key(x) {
                out.push(TreeViolation::UnknownElement(x.clone()));
                continue;
            }
            if !crate::seq::is_simple(cs) {
                out.push(TreeViolation::BadChildren(x.clone()));
                continue;
            }
            let mut listed: Vec<&T> = cs.iter().collect();
            listed.sort();
            let mut actual: Vec<&T> = self
                .parent
                .iter()
                .filter(|(_, p)| p.as_ref() == Some(x))
                .map(|(c, _)| c)
                .collect();
            actual.sort();
            if listed != actual {
                out.push(TreeViolation::BadChildren(x.clone()));
            }
        }
        for (x, p) in &self.parent {
            if p.is_some() && !self.children.contains_key(x) {
                out.push(TreeViolation::BadChildren(x.clone()));
            }
        }
        out
    }

    /// First nesting relation: `x` encloses `y` iff `φⁿ(y) = x` for some
    /// `n ≥ 1`.
    pub fn emboite(&self, x: &T, y: &T) -> bool {
        let mut cur = y.clone();
        loop {
            match self.parent(&cur) {
                None => return false,
                Some(p) => {
                    if p == x {
                        return true;
                    }
                    cur = p.clone();
                }
            }
        }
    }

    fn path_from_root(&self, x: &T) -> Vec<T> {
        let mut path = vec![x.clone()];
        let mut cur = x.clone();
        while let Some(p) = self.parent(&cur) {
            path.push(p.clone());
            cur = p.clone();
        }
        path.reverse();
        path
    }

    /// Second nesting relation: `x` precedes `y` iff their paths split under
    /// a common ancestor `a` with the `x`-branch listed before the
    /// `y`-branch in `H(a)`.
    pub fn precede(&self, x: &T, y: &T) -> bool {
        if x == y {
            return false;
        }
        let px = self.path_from_root(x);
        let py = self.path_from_root(y);
        let mut k = 0;
        while k < px.len() && k < py.len() && px[k] == py[k] {
            k += 1;
        }
        if k == 0 || k == px.len() || k == py.len() {
            // No common ancestor, or one lies on the other's path.
            return false;
        }
        let a = &px[k - 1];
        let h = self.children(a);
        let ix = h.iter().position(|c| c == &px[k]);
        let iy = h.iter().position(|c| c == &py[k]);
        match (ix, iy) {
            (Some(i), Some(j)) => i < j,
            _ => false,
        }
    }

    /// The total order induced by the two nesting relations: `x < y` iff `x`
    /// encloses or precedes `y`.
    pub fn order_cmp(&self, x: &T, y: &T) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        if x == y {
            Equal
        } else if self.emboite(x, y) || self.precede(x, y) {
            Less
        } else {
            Greater
        }
    }

    /// Preorder traversal: each element before its descendants, children in
    /// `H` order. This is the induced total order, ascending.
    pub fn preorder(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root.clone()];
        while let Some(x) = stack.pop() {
            out.push(x.clone());
            for c in self.children(&x).iter().rev() {
                stack.push(c.clone());
            }
        }
        out
    }

    /// The simple word of the tree: the leftmost substitution of
    /// `open · H(x) · close` starting from the root.
    pub fn simple_word(&self) -> SimpleWord {
        let mut chars = Vec::with_capacity(2 * self.len());
        enum Step<T> {
            Enter(T),
            Leave,
        }
        let mut stack = vec![Step::Enter(self.root.clone())];
        while let Some(step) = stack.pop() {
            match step {
                Step::Enter(x) => {
                    chars.push(Bracket::Open);
                    stack.push(Step::Leave);
                    for c in self.children(&x).iter().rev() {
                        stack.push(Step::Enter(c.clone()));
                    }
                }
                Step::Leave => chars.push(Bracket::Close),
            }
        }
        SimpleWord(chars)
    }

    /// Structural equivalence: same shape with children compared in order.
    pub fn equivalent<U: Ord + Clone + fmt::Debug>(&self, other: &Dallajascar<U>) -> bool {
        fn shape_eq<T: Ord + Clone + fmt::Debug, U: Ord + Clone + fmt::Debug>(
            a: &Dallajascar<T>,
            x: &T,
            b: &Dallajascar<U>,
            y: &U,
        ) -> bool {
            let ca = a.children(x);
            let cb = b.children(y);
            ca.len() == cb.len()
                && ca
                    .iter()
                    .zip(cb.iter())
                    .all(|(c, d)| shape_eq(a, c, b, d))
        }
        self.len() == other.len() && shape_eq(self, &self.root, other, &other.root)
    }
}

/// Rebuilds the tree of a valid simple word over its matching pairs
/// `a_k = (α_k, β_k)`: the parent of a pair is the tightest enclosing pair,
/// children are ordered by opener position.
pub fn dallajascar_of_simple_word(
    w: &SimpleWord,
) -> Result<Dallajascar<(usize, usize)>, SimpleWordError> {
    let pairs = validate_simple_word(w)?;
    let mut parent: BTreeMap<(usize, usize), Option<(usize, usize)>> = BTreeMap::new();
    let mut children: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (k, &(a, b)) in pairs.iter().enumerate() {
        // The tightest enclosing pair has the greatest opener below α_k.
        let enclosing = pairs[..k]
            .iter()
            .rev()
            .find(|&&(aq, bq)| aq < a && b < bq)
            .copied();
        parent.insert((a, b), enclosing);
        children.entry((a, b)).or_default();
        if let Some(p) = enclosing {
            children.entry(p).or_default().push((a, b));
        }
    }
    Ok(Dallajascar::from_raw(parent, children, pairs[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sw(s: &str) -> SimpleWord {
        SimpleWord::from_str_brackets(s).unwrap()
    }

    fn tree_of(children: &[(&str, &[&str])], root: &str) -> Dallajascar<String> {
        let map: BTreeMap<String, Vec<String>> = children
            .iter()
            .map(|(p, cs)| {
                (
                    p.to_string(),
                    cs.iter().map(|c| c.to_string()).collect(),
                )
            })
            .collect();
        Dallajascar::from_children(root.to_string(), map)
    }

    /// The 11-face tree of the worked encoding example.
    fn example11_tree() -> Dallajascar<String> {
        tree_of(
            &[
                ("a", &["b"]),
                ("b", &["c", "d"]),
                ("c", &["k"]),
                ("d", &["g", "e"]),
                ("g", &["j", "i"]),
                ("i", &["h"]),
                ("e", &["f"]),
            ],
            "a",
        )
    }

    #[test]
    fn validate_examples() {
        let single = tree_of(&[], "r");
        assert!(single.validate().is_empty());

        assert!(example11_tree().validate().is_empty());

        // A two-cycle in φ violates axiom iii.
        let mut parent = BTreeMap::new();
        parent.insert("r".to_string(), None);
        parent.insert("x".to_string(), Some("y".to_string()));
        parent.insert("y".to_string(), Some("x".to_string()));
        let mut children = BTreeMap::new();
        children.insert("r".to_string(), vec![]);
        children.insert("x".to_string(), vec!["y".to_string()]);
        children.insert("y".to_string(), vec!["x".to_string()]);
        let bad = Dallajascar::from_raw(parent, children, "r".to_string());
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, TreeViolation::ParentCycle(_))));
    }

    #[test]
    fn nesting_relations() {
        let t = example11_tree();
        let s = |x: &str| x.to_string();
        assert!(t.emboite(&s("b"), &s("k")));
        assert!(!t.emboite(&s("k"), &s("b")));
        assert!(t.precede(&s("c"), &s("d")));
        assert!(t.precede(&s("k"), &s("e")));
        assert!(!t.precede(&s("e"), &s("k")));
        assert!(!t.emboite(&s("c"), &s("c")));
        assert!(!t.precede(&s("c"), &s("c")));
        // Preorder agrees with order_cmp.
        let order = t.preorder();
        for i in 0..order.len() {
            for j in 0..order.len() {
                let expect = i.cmp(&j);
                assert_eq!(t.order_cmp(&order[i], &order[j]), expect);
            }
        }
    }

    #[test]
    fn simple_word_examples() {
        assert_eq!(tree_of(&[], "r").simple_word(), sw("()"));
        assert_eq!(
            tree_of(&[("r", &["x1", "x2"])], "r").simple_word(),
            sw("(()())")
        );
        // Chain of depth 2.
        assert_eq!(tree_of(&[("r", &["x"])], "r").simple_word(), sw("(())"));
    }

    #[test]
    fn validate_simple_word_examples() {
        assert!(validate_simple_word(&sw("(())")).is_ok());
        assert!(validate_simple_word(&sw("((()")).is_err());
        assert!(validate_simple_word(&sw("(()))()")).is_err());
        assert!(validate_simple_word(&sw("")).is_err());
        // Balanced but the first opener closes too early.
        assert!(matches!(
            validate_simple_word(&sw("()()")),
            Err(SimpleWordError {
                reason: SimpleWordErrorKind::FirstOpenerNotOutermost,
                ..
            })
        ));
    }

    #[test]
    fn pair_table_matches() {
        let pairs = validate_simple_word(&sw("(()())")).unwrap();
        assert_eq!(pairs, vec![(1, 6), (2, 3), (4, 5)]);
    }

    #[test]
    fn word_to_tree_examples() {
        let t = dallajascar_of_simple_word(&sw("()")).unwrap();
        assert_eq!(t.len(), 1);

        let t = dallajascar_of_simple_word(&sw("(()())")).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.children(t.root()).len(), 2);
    }

    /// All simple words with up to `n` openers, by brute force.
    fn all_simple_words(openers: usize) -> Vec<SimpleWord> {
        let mut out = Vec::new();
        let len = 2 * openers;
        for mask in 0u32..(1 << len) {
            let chars: Vec<Bracket> = (0..len)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        Bracket::Open
                    } else {
                        Bracket::Close
                    }
                })
                .collect();
            let w = SimpleWord(chars);
            if validate_simple_word(&w).is_ok() {
                out.push(w);
            }
        }
        out
    }

    /// All ordered trees with `n` nodes, as children-count shapes.
    fn count_ordered_trees(n: usize) -> usize {
        // Number of ordered trees with n nodes is Catalan(n - 1).
        fn catalan(k: usize) -> usize {
            let mut c = vec![0usize; k + 1];
            c[0] = 1;
            for i in 1..=k {
                c[i] = (0..i).map(|j| c[j] * c[i - 1 - j]).sum();
            }
            c[k]
        }
        // Independently re-derive by explicit enumeration for small n.
        fn enumerate(n: usize) -> usize {
            if n == 1 {
                return 1;
            }
            // Compositions of n - 1 into child subtree sizes.
            fn go(remaining: usize) -> usize {
                if remaining == 0 {
                    return 1;
                }
                let mut total = 0;
                for first in 1..=remaining {
                    total += enumerate(first) * go(remaining - first);
                }
                total
            }
            go(n - 1)
        }
        let e = enumerate(n);
        assert_eq!(e, catalan(n - 1));
        e
    }

    #[test]
    fn roundtrip_and_counting_small() {
        for n in 1..=6 {
            let words = all_simple_words(n);
            assert_eq!(words.len(), count_ordered_trees(n), "openers = {n}");
            for w in &words {
                let t = dallajascar_of_simple_word(w).unwrap();
                assert!(t.validate().is_empty());
                assert_eq!(&t.simple_word(), w);
            }
        }
    }

    /// Two small trees are structurally equivalent iff their simple words
    /// are equal.
    #[test]
    fn equivalence_iff_word_equality() {
        // Build every tree with up to 5 nodes from its word.
        let mut trees = Vec::new();
        for n in 1..=5 {
            for w in all_simple_words(n) {
                trees.push((dallajascar_of_simple_word(&w).unwrap(), w));
            }
        }
        for (t1, w1) in &trees {
            for (t2, w2) in &trees {
                assert_eq!(t1.equivalent(t2), w1 == w2);
            }
        }
    }
}
