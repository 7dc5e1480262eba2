//! Regular fragment shapes that rows and lateral sequences of valid words
//! must factor into.
//!
//! All matchers work on flat token strings (the `L`-image of a position
//! sequence). The shapes:
//!
//! - trouglyre: `(tg+ tg-)^r`
//! - stougammon: `(sn+ sn-)^r`
//! - trenagatte: `(tc+ tc- cu)^r`
//! - lounafan: `ba (ln+ ln-)^r ca`, simple when `r = 0`
//! - lounagatte: nonempty concatenation of lounafans
//! - ramajo: `sn+ sn-` then a mix of `sn+ sn-` and `tc+ tc- cu`, then `ch`
//! - d-ramajo: a ramajo without its `ch`, optionally ending on a bare
//!   `tc+ tc-`
//! - g-ramajo: optional leading `cu`, a mix as above, then `ch`
//! - stratajo: `sn+ sn-` then a mix of `sn+ sn-` and lounafans, then `ch`
//!   (with d-/g- variants split around the trailing `ch`)

use super::token::Token;

/// Classification of a fragment, most specific shape first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarClass {
    Trouglyre,
    Stougammon,
    Trenagatte,
    LounafanSimple,
    Lounafan,
    Lounagatte,
    Ramajo,
    DRamajo,
    GRamajo,
    Stratajo,
    DStratajo,
    GStratajo,
    None,
}

fn eat(ts: &[Token], unit: &[Token]) -> Option<usize> {
    if ts.len() >= unit.len() && &ts[..unit.len()] == unit {
        Some(unit.len())
    } else {
        None
    }
}

const SN_PAIR: [Token; 2] = [Token::SnOpen, Token::SnClose];
const TG_PAIR: [Token; 2] = [Token::TgOpen, Token::TgClose];
const LN_PAIR: [Token; 2] = [Token::LnOpen, Token::LnClose];
const TC_TRIPLE: [Token; 3] = [Token::TcOpen, Token::TcClose, Token::Cu];
const TC_PAIR: [Token; 2] = [Token::TcOpen, Token::TcClose];

fn is_power(ts: &[Token], unit: &[Token]) -> bool {
    let mut rest = ts;
    while !rest.is_empty() {
        match eat(rest, unit) {
            Some(n) => rest = &rest[n..],
            None => return false,
        }
    }
    true
}

pub fn is_trouglyre(ts: &[Token]) -> bool {
    is_power(ts, &TG_PAIR)
}

pub fn is_stougammon(ts: &[Token]) -> bool {
    is_power(ts, &SN_PAIR)
}

pub fn is_trenagatte(ts: &[Token]) -> bool {
    is_power(ts, &TC_TRIPLE)
}

/// Consumes one lounafan from the front; returns the consumed length and
/// whether it was simple (`ba ca`).
fn eat_lounafan(ts: &[Token]) -> Option<(usize, bool)> {
    let mut n = eat(ts, &[Token::Ba])?;
    let mut pairs = 0usize;
    while let Some(k) = eat(&ts[n..], &LN_PAIR) {
        n += k;
        pairs += 1;
    }
    n += eat(&ts[n..], &[Token::Ca])?;
    Some((n, pairs == 0))
}

pub fn is_lounafan(ts: &[Token]) -> bool {
    matches!(eat_lounafan(ts), Some((n, _)) if n == ts.len())
}

pub fn is_simple_lounafan(ts: &[Token]) -> bool {
    matches!(eat_lounafan(ts), Some((n, true)) if n == ts.len())
}

/// Lounagatte: one or more lounafans. Returns `(matched, all_simple)`.
pub fn lounagatte_shape(ts: &[Token]) -> (bool, bool) {
    if ts.is_empty() {
        return (false, false);
    }
    let mut rest = ts;
    let mut all_simple = true;
    while !rest.is_empty() {
        match eat_lounafan(rest) {
            Some((n, simple)) => {
                all_simple &= simple;
                rest = &rest[n..];
            }
            None => return (false, false),
        }
    }
    (true, all_simple)
}

pub fn is_lounagatte(ts: &[Token]) -> bool {
    lounagatte_shape(ts).0
}

/// Body of a ramajo: a mix of `sn+ sn-` and `tc+ tc- cu` units. Returns the
/// consumed length.
fn eat_ramajo_body(ts: &[Token]) -> usize {
    let mut n = 0;
    loop {
        if let Some(k) = eat(&ts[n..], &SN_PAIR) {
            n += k;
        } else if let Some(k) = eat(&ts[n..], &TC_TRIPLE) {
            n += k;
        } else {
            return n;
        }
    }
}

pub fn is_ramajo(ts: &[Token]) -> bool {
    match eat(ts, &SN_PAIR) {
        Some(k) => {
            let n = k + eat_ramajo_body(&ts[k..]);
            ts.len() == n + 1 && ts[n] == Token::Ch
        }
        None => false,
    }
}

/// d-ramajo: leading stougammon unit, ramajo body, optional dangling
/// `tc+ tc-`, and no trailing `ch`.
pub fn is_d_ramajo(ts: &[Token]) -> bool {
    match eat(ts, &SN_PAIR) {
        Some(k) => {
            let n = k + eat_ramajo_body(&ts[k..]);
            n == ts.len() || eat(&ts[n..], &TC_PAIR) == Some(ts.len() - n)
        }
        None => false,
    }
}

/// g-ramajo: optional leading `cu`, ramajo body, trailing `ch`.
pub fn is_g_ramajo(ts: &[Token]) -> bool {
    let mut n = eat(ts, &[Token::Cu]).unwrap_or(0);
    n += eat_ramajo_body(&ts[n..]);
    ts.len() == n + 1 && ts[n] == Token::Ch
}

/// Body of a stratajo: a mix of `sn+ sn-` units and lounafans.
fn eat_stratajo_body(ts: &[Token]) -> usize {
    let mut n = 0;
    loop {
        if let Some(k) = eat(&ts[n..], &SN_PAIR) {
            n += k;
        } else if let Some((k, _)) = eat_lounafan(&ts[n..]) {
            n += k;
        } else {
            return n;
        }
    }
}

pub fn is_stratajo(ts: &[Token]) -> bool {
    match eat(ts, &SN_PAIR) {
        Some(k) => {
            let n = k + eat_stratajo_body(&ts[k..]);
            ts.len() == n + 1 && ts[n] == Token::Ch
        }
        None => false,
    }
}

pub fn is_d_stratajo(ts: &[Token]) -> bool {
    matches!(eat(ts, &SN_PAIR), Some(k) if k + eat_stratajo_body(&ts[k..]) == ts.len())
}

pub fn is_g_stratajo(ts: &[Token]) -> bool {
    let n = eat_stratajo_body(ts);
    ts.len() == n + 1 && ts[n] == Token::Ch
}

/// Concatenation law: a d-ramajo followed by a g-ramajo forms a ramajo iff
/// the d-part is clean and the g-part has no leading `cu`, or the d-part
/// dangles a `tc+ tc-` completed by the g-part's leading `cu`.
pub fn d_g_concat_is_ramajo(d: &[Token], g: &[Token]) -> bool {
    let mut joined = d.to_vec();
    joined.extend_from_slice(g);
    is_ramajo(&joined)
}

/// Names the most specific matching shape, for reports.
pub fn classify(ts: &[Token]) -> GrammarClass {
    if ts.is_empty() {
        // ε is a degenerate power of every pair unit; report the weakest.
        return GrammarClass::Stougammon;
    }
    if is_trouglyre(ts) {
        GrammarClass::Trouglyre
    } else if is_stougammon(ts) {
        GrammarClass::Stougammon
    } else if is_trenagatte(ts) {
        GrammarClass::Trenagatte
    } else if is_simple_lounafan(ts) {
        GrammarClass::LounafanSimple
    } else if is_lounafan(ts) {
        GrammarClass::Lounafan
    } else if is_lounagatte(ts) {
        GrammarClass::Lounagatte
    } else if is_ramajo(ts) {
        GrammarClass::Ramajo
    } else if is_d_ramajo(ts) {
        GrammarClass::DRamajo
    } else if is_g_ramajo(ts) {
        GrammarClass::GRamajo
    } else if is_stratajo(ts) {
        GrammarClass::Stratajo
    } else if is_d_stratajo(ts) {
        GrammarClass::DStratajo
    } else if is_g_stratajo(ts) {
        GrammarClass::GStratajo
    } else {
        GrammarClass::None
    }
}

/// Splits a row image into stratajo factors (cut after each `ch`); returns
/// `None` when any factor is not a stratajo or a tail remains.
pub fn stratajo_factors(ts: &[Token]) -> Option<Vec<Vec<Token>>> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, &t) in ts.iter().enumerate() {
        if t == Token::Ch {
            let factor = ts[start..=i].to_vec();
            if !is_stratajo(&factor) {
                return None;
            }
            out.push(factor);
            start = i + 1;
        }
    }
    if start != ts.len() {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::token::tokenize;

    fn ts(s: &str) -> Vec<Token> {
        tokenize(s).unwrap().tokens
    }

    #[test]
    fn classify_worked_examples() {
        // L of the trenagatte row (tc pair then cu).
        assert_eq!(classify(&ts("tc+ tc- cu")), GrammarClass::Trenagatte);
        // L of a fan with two inner pairs: a non-simple lounafan.
        assert_eq!(
            classify(&ts("ba ln+ ln- ln+ ln- ca")),
            GrammarClass::Lounafan
        );
        // The long stratajo row of the worked example.
        assert_eq!(
            classify(&ts("sn+ sn- ba ln+ ln- ln+ ln- ca ch")),
            GrammarClass::Stratajo
        );
        assert_eq!(classify(&ts("ba ca")), GrammarClass::LounafanSimple);
        assert_eq!(classify(&ts("tg+ tg-")), GrammarClass::Trouglyre);
        assert_eq!(classify(&ts("sn+ sn- tc+ tc-")), GrammarClass::DRamajo);
        assert_eq!(classify(&ts("cu ch")), GrammarClass::GRamajo);
        assert_eq!(
            classify(&ts("sn+ sn- tc+ tc- cu ch")),
            GrammarClass::Ramajo
        );
        assert_eq!(classify(&ts("sn+ sn- ch")), GrammarClass::Ramajo);
        assert_eq!(classify(&ts("ba ca ba ln+ ln- ca")), GrammarClass::Lounagatte);
        assert_eq!(classify(&ts("ch")), GrammarClass::GRamajo);
        assert_eq!(classify(&ts("cu cu")), GrammarClass::None);
    }

    #[test]
    fn concat_law() {
        // Dangling tc pair completed by a leading cu.
        assert!(d_g_concat_is_ramajo(&ts("sn+ sn- tc+ tc-"), &ts("cu ch")));
        // Clean + clean.
        assert!(d_g_concat_is_ramajo(&ts("sn+ sn-"), &ts("sn+ sn- ch")));
        // Dangling pair not completed.
        assert!(!d_g_concat_is_ramajo(&ts("sn+ sn- tc+ tc-"), &ts("sn+ sn- ch")));
        // Clean followed by a stray cu.
        assert!(!d_g_concat_is_ramajo(&ts("sn+ sn-"), &ts("cu ch")));
    }

    #[test]
    fn stratajo_factorization() {
        let row = ts("sn+ sn- ch sn+ sn- ba ca ch");
        let f = stratajo_factors(&row).unwrap();
        assert_eq!(f.len(), 2);
        assert!(stratajo_factors(&ts("sn+ sn-")).is_none());
        assert!(stratajo_factors(&ts("")).map(|f| f.is_empty()).unwrap_or(false));
    }
}
