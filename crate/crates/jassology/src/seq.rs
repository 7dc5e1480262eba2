//! Finite-sequence (nesile) relations, the shortlex order, and stratinos.
//!
//! Stratinos are finite sequences over `{n, n#}` (positive integers, plain or
//! shifted). They grade the ladder on which every map face is placed: the
//! total order on terms is `1 < 1# < 2 < 2# < 3 < ...`, and stratinos compare
//! lexicographically with a proper prefix ordered first.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Relations between two finite sequences, plus simplicity of the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NesileRelations {
    pub prefix: bool,
    pub suffix: bool,
    pub factor: bool,
    pub subnesile: bool,
    /// True iff the terms of the first sequence are pairwise distinct.
    pub simple: bool,
}

/// Computes prefix/suffix/factor/subsequence relations of `u` against `v`.
pub fn nesile_relations<T: PartialEq>(u: &[T], v: &[T]) -> NesileRelations {
    NesileRelations {
        prefix: v.len() >= u.len() && u == &v[..u.len()],
        suffix: v.len() >= u.len() && u == &v[v.len() - u.len()..],
        factor: is_factor(u, v),
        subnesile: is_subnesile(u, v),
        simple: is_simple(u),
    }
}

/// True iff `u` occurs as a contiguous factor of `v`.
pub fn is_factor<T: PartialEq>(u: &[T], v: &[T]) -> bool {
    u.is_empty() || v.windows(u.len()).any(|w| w == u)
}

/// True iff `u` is a (not necessarily contiguous) subsequence of `v`.
pub fn is_subnesile<T: PartialEq>(u: &[T], v: &[T]) -> bool {
    let mut it = v.iter();
    u.iter().all(|x| it.any(|y| y == x))
}

/// True iff the terms of `u` are pairwise distinct.
pub fn is_simple<T: PartialEq>(u: &[T]) -> bool {
    u.iter()
        .enumerate()
        .all(|(i, x)| !u[..i].iter().any(|y| y == x))
}

/// Shortlex: shorter words first, same-length words lexicographically.
pub fn shortlex<T: Ord>(u: &[T], v: &[T]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// One term of a stratino: a positive integer, optionally shifted (`n#`).
///
/// The derived order is by value first, plain before shifted, which realizes
/// the chain `1 < 1# < 2 < 2# < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratinoTerm {
    pub value: u32,
    pub shifted: bool,
}

impl StratinoTerm {
    pub fn plain(value: u32) -> Self {
        debug_assert!(value >= 1);
        StratinoTerm { value, shifted: false }
    }

    pub fn sharp(value: u32) -> Self {
        debug_assert!(value >= 1);
        StratinoTerm { value, shifted: true }
    }
}

impl fmt::Display for StratinoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shifted {
            write!(f, "{}#", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Explicit term comparison (`n < n# < n+1`).
pub fn compare_terms(a: StratinoTerm, b: StratinoTerm) -> Ordering {
    a.cmp(&b)
}

/// The kind of a stratino, decided by its last term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StratinoKind {
    Empty,
    Natural,
    Shifted,
}

/// A finite sequence of stratino terms; the empty stratino is written `ε`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Stratino(pub Vec<StratinoTerm>);

impl Stratino {
    pub fn empty() -> Self {
        Stratino(Vec::new())
    }

    /// Builds a stratino from `(value, shifted)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (u32, bool)>>(terms: I) -> Self {
        Stratino(
            terms
                .into_iter()
                .map(|(value, shifted)| StratinoTerm { value, shifted })
                .collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> Option<StratinoTerm> {
        self.0.last().copied()
    }

    pub fn kind(&self) -> StratinoKind {
        match self.last() {
            None => StratinoKind::Empty,
            Some(t) if t.shifted => StratinoKind::Shifted,
            Some(_) => StratinoKind::Natural,
        }
    }

    pub fn is_natural(&self) -> bool {
        self.kind() == StratinoKind::Natural
    }

    pub fn is_shifted(&self) -> bool {
        self.kind() == StratinoKind::Shifted
    }

    /// Unitary: the last term is a plain `1`.
    pub fn is_unitary(&self) -> bool {
        self.last() == Some(StratinoTerm::plain(1))
    }

    /// `(u)~`: replaces a shifted last term by its plain form; fixes ε and
    /// natural stratinos.
    pub fn natural_of(&self) -> Stratino {
        let mut s = self.clone();
        if let Some(t) = s.0.last_mut() {
            t.shifted = false;
        }
        s
    }

    /// `(u)#`: replaces a natural last term by its shifted form; fixes ε and
    /// shifted stratinos.
    pub fn shifted_of(&self) -> Stratino {
        let mut s = self.clone();
        if let Some(t) = s.0.last_mut() {
            t.shifted = true;
        }
        s
    }

    /// Returns `self` with `term` appended.
    pub fn child(&self, term: StratinoTerm) -> Stratino {
        let mut s = self.clone();
        s.0.push(term);
        s
    }

    /// Splits a nonempty stratino into `(prefix, last term)`.
    pub fn split_last(&self) -> Option<(Stratino, StratinoTerm)> {
        let (last, rest) = self.0.split_last()?;
        Some((Stratino(rest.to_vec()), *last))
    }
}

impl fmt::Display for Stratino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for t in &self.0 {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
            first = false;
        }
        Ok(())
    }
}

/// Error parsing a stratino from its textual form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratinoParseError(pub String);

impl fmt::Display for StratinoParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid stratino term `{}`", self.0)
    }
}

impl std::error::Error for StratinoParseError {}

impl FromStr for Stratino {
    type Err = StratinoParseError;

    /// Parses the comma-joined form, e.g. `1#,2`; the empty string is ε.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(Stratino::empty());
        }
        let mut terms = Vec::new();
        for part in s.split(',') {
            let (digits, shifted) = match part.strip_suffix('#') {
                Some(d) => (d, true),
                None => (part, false),
            };
            let value: u32 = digits
                .parse()
                .map_err(|_| StratinoParseError(part.to_string()))?;
            if value == 0 {
                return Err(StratinoParseError(part.to_string()));
            }
            terms.push(StratinoTerm { value, shifted });
        }
        Ok(Stratino(terms))
    }
}

/// Explicit stratino comparison (lexicographic, proper prefix first).
pub fn compare_stratinos(x: &Stratino, y: &Stratino) -> Ordering {
    x.cmp(y)
}

/// Membership in `DNJ(p)`: non-unitary stratinos of length `p` together with
/// unitary stratinos of length `p + 1`.
pub fn dnj_member(x: &Stratino, p: usize) -> bool {
    if x.is_unitary() {
        x.len() == p + 1
    } else {
        x.len() == p
    }
}

/// Membership in `D(Y)` for a unitary stratino `Y = (X, 1)`: the four
/// families `(X, n)` with `n ≥ 2`, `(X, n#)`, `(X, n, 1)` and `(X, n#, 1)`
/// with `n ≥ 1`.
///
/// `Y` itself is not a member.
pub fn d_set_member(x: &Stratino, y: &Stratino) -> bool {
    assert!(y.is_unitary(), "D(Y) requires a unitary stratino");
    let (prefix, _) = y.split_last().expect("unitary stratino is nonempty");
    let p = prefix.len();
    if x.len() == p + 1 {
        // (X, n) with n >= 2, or (X, n#) with n >= 1.
        let (head, t) = x.split_last().expect("len >= 1");
        head == prefix && (t.shifted || t.value >= 2)
    } else if x.len() == p + 2 {
        // (X, n, 1) or (X, n#, 1) with n >= 1.
        let (head, one) = x.split_last().expect("len >= 2");
        let (head2, _) = head.split_last().expect("len >= 1");
        one == StratinoTerm::plain(1) && head2 == prefix
    } else {
        false
    }
}
