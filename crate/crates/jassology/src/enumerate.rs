//! Exhaustive generation of valid words with a bounded pair count.
//!
//! Candidates are grown token by token inside the fixed `zc+ mr+ ... mr- zc-`
//! frame. Two incremental filters keep the search tiny: every grown element
//! must land on a nonempty row (anything with an empty stratino dies), and
//! each row runs a small automaton for the shape its content must have
//! (pair rows alternate their completing marks, shifted rows alternate the
//! crossing marks, chain rows follow the stratajo shape). Both are necessary
//! conditions for validity, so no valid word is pruned; survivors still run
//! the full four-rule validation.

use std::collections::BTreeMap;

use crate::seq::{Stratino, StratinoTerm};
use crate::word::{validate, JassoWord, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RowAuto {
    Trouglyre,
    Trenagatte { expect_cu: bool },
    Shifted { expect_ca: bool },
    Stratajo { state: u8 },
}

impl RowAuto {
    fn fresh(row: &Stratino) -> RowAuto {
        if row.is_unitary() {
            let (prefix, _) = row.split_last().expect("unitary rows are nonempty");
            if prefix.is_shifted() {
                RowAuto::Trenagatte { expect_cu: false }
            } else {
                RowAuto::Trouglyre
            }
        } else if row.is_shifted() {
            RowAuto::Shifted { expect_ca: false }
        } else {
            RowAuto::Stratajo { state: 0 }
        }
    }

    fn step(self, token: Token) -> Option<RowAuto> {
        use RowAuto::*;
        match (self, token) {
            (Trouglyre, Token::TgOpen) => Some(Trouglyre),
            (Trenagatte { expect_cu: false }, Token::TcOpen) => {
                Some(Trenagatte { expect_cu: true })
            }
            (Trenagatte { expect_cu: true }, Token::Cu) => {
                Some(Trenagatte { expect_cu: false })
            }
            (Shifted { expect_ca: false }, Token::Ba) => Some(Shifted { expect_ca: true }),
            (Shifted { expect_ca: true }, Token::Ca) => Some(Shifted { expect_ca: false }),
            (Stratajo { state: 0 }, Token::SnOpen) => Some(Stratajo { state: 1 }),
            (Stratajo { state: 1 }, Token::SnOpen) => Some(Stratajo { state: 1 }),
            (Stratajo { state: 1 }, Token::Ba) => Some(Stratajo { state: 2 }),
            (Stratajo { state: 1 }, Token::Ch) => Some(Stratajo { state: 0 }),
            (Stratajo { state: 2 }, Token::LnOpen) => Some(Stratajo { state: 2 }),
            (Stratajo { state: 2 }, Token::Ca) => Some(Stratajo { state: 1 }),
            _ => None,
        }
    }

    fn accepting(self) -> bool {
        matches!(
            self,
            RowAuto::Trouglyre
                | RowAuto::Trenagatte { expect_cu: false }
                | RowAuto::Shifted { expect_ca: false }
                | RowAuto::Stratajo { state: 0 }
        )
    }
}

fn sigma_step(parent: &Stratino, token: Token) -> Stratino {
    // Mirrors the validator's stratino recursion.
    if parent.is_empty() {
        return Stratino::empty();
    }
    let (x, n) = parent.split_last().expect("nonempty");
    let bump = |s: &Stratino| {
        let (head, last) = s.split_last().expect("nonempty");
        head.child(StratinoTerm::plain(last.value + 1))
    };
    match token {
        Token::TgOpen => {
            if n.value == 1 {
                Stratino::empty()
            } else {
                parent.child(StratinoTerm::plain(1))
            }
        }
        Token::TcOpen | Token::Cu => x
            .child(StratinoTerm::sharp(n.value))
            .child(StratinoTerm::plain(1)),
        Token::SnOpen | Token::Ch => x.child(StratinoTerm::plain(n.value + 1)),
        Token::LnOpen => {
            if x.is_shifted() {
                bump(&x.natural_of())
            } else {
                Stratino::empty()
            }
        }
        Token::Ba | Token::Ca => {
            if x.is_empty() || x.is_unitary() {
                Stratino::empty()
            } else if x.is_natural() {
                x.shifted_of()
            } else {
                bump(&x.natural_of())
            }
        }
        _ => Stratino::empty(),
    }
}

struct Search {
    max_inner_pairs: usize,
    tokens: Vec<Token>,
    /// Open inner pairs plus the sentinel `mr` frame entry.
    stack: Vec<(Token, Stratino)>,
    rows: BTreeMap<Stratino, RowAuto>,
    inner_pairs: usize,
    ba_count: usize,
    cu_count: usize,
    ch_count: usize,
    found: Vec<JassoWord>,
}

const OPENERS: [Token; 4] = [Token::TgOpen, Token::TcOpen, Token::SnOpen, Token::LnOpen];
const MONOMIALS: [Token; 4] = [Token::Cu, Token::Ch, Token::Ba, Token::Ca];

impl Search {
    fn enter(&mut self, token: Token) -> Option<(Stratino, Option<RowAuto>)> {
        let parent = &self.stack.last().expect("sentinel never popped").1;
        let sigma = sigma_step(parent, token);
        if sigma.is_empty() {
            return None;
        }
        let old = self.rows.get(&sigma).copied();
        let state = old.unwrap_or_else(|| RowAuto::fresh(&sigma));
        let next = state.step(token)?;
        self.rows.insert(sigma.clone(), next);
        Some((sigma, old))
    }

    fn undo(&mut self, sigma: Stratino, old: Option<RowAuto>) {
        match old {
            Some(state) => {
                self.rows.insert(sigma, state);
            }
            None => {
                self.rows.remove(&sigma);
            }
        }
    }

    fn grow(&mut self) {
        // Close the innermost open pair.
        if self.stack.len() > 1 {
            let (opener, sigma) = self.stack.pop().expect("nonempty");
            let closer = opener.pair_kind().expect("opener").closer();
            self.tokens.push(closer);
            self.grow();
            self.tokens.pop();
            self.stack.push((opener, sigma));
        } else if self.inner_pairs > 0 {
            // The frame closes: run the full validation.
            let mut word = vec![Token::ZcOpen, Token::MrOpen];
            word.extend_from_slice(&self.tokens);
            word.push(Token::MrClose);
            word.push(Token::ZcClose);
            if self.rows.values().all(|s| s.accepting()) {
                let word = JassoWord::new(word);
                if validate(&word).is_ok() {
                    self.found.push(word);
                }
            }
        }
        // Open a new pair.
        if self.inner_pairs < self.max_inner_pairs {
            for opener in OPENERS {
                if let Some((sigma, old)) = self.enter(opener) {
                    self.stack.push((opener, sigma.clone()));
                    self.tokens.push(opener);
                    self.inner_pairs += 1;
                    self.grow();
                    self.inner_pairs -= 1;
                    self.tokens.pop();
                    self.stack.pop();
                    self.undo(sigma, old);
                }
            }
        }
        // Emit a monomial.
        for mono in MONOMIALS {
            let budget_ok = match mono {
                Token::Ba => self.ba_count < self.max_inner_pairs,
                Token::Ca => true,
                Token::Cu => self.cu_count < self.max_inner_pairs,
                Token::Ch => self.ch_count < 2 * self.max_inner_pairs + 2,
                _ => true,
            };
            if !budget_ok {
                continue;
            }
            if let Some((sigma, old)) = self.enter(mono) {
                self.tokens.push(mono);
                match mono {
                    Token::Ba => self.ba_count += 1,
                    Token::Cu => self.cu_count += 1,
                    Token::Ch => self.ch_count += 1,
                    _ => {}
                }
                self.grow();
                match mono {
                    Token::Ba => self.ba_count -= 1,
                    Token::Cu => self.cu_count -= 1,
                    Token::Ch => self.ch_count -= 1,
                    _ => {}
                }
                self.tokens.pop();
                self.undo(sigma, old);
            }
        }
    }
}

/// All valid words with at most `max_pairs` binomial pairs, sorted by pair
/// count and then by token sequence.
pub fn enumerate_valid_words(max_pairs: usize) -> Vec<JassoWord> {
    if max_pairs < 3 {
        return Vec::new();
    }
    let mut search = Search {
        max_inner_pairs: max_pairs - 2,
        tokens: Vec::new(),
        stack: vec![(Token::MrOpen, Stratino::from_terms([(1, false)]))],
        rows: BTreeMap::new(),
        inner_pairs: 0,
        ba_count: 0,
        cu_count: 0,
        ch_count: 0,
        found: Vec::new(),
    };
    search.grow();
    let mut found = search.found;
    found.sort_by_key(|w| {
        (
            w.tokens.iter().filter(|t| t.is_opener()).count(),
            w.tokens.clone(),
        )
    });
    found
}

/// Counts of valid words per pair count, up to `max_pairs`.
pub fn count_by_pairs(max_pairs: usize) -> BTreeMap<usize, usize> {
    let mut counts: BTreeMap<usize, usize> = (1..=max_pairs).map(|p| (p, 0)).collect();
    for w in enumerate_valid_words(max_pairs) {
        let pairs = w.tokens.iter().filter(|t| t.is_opener()).count();
        *counts.entry(pairs).or_insert(0) += 1;
    }
    counts
}
