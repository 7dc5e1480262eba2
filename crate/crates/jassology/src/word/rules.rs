//! The four validation rules and the semantic tables of a validated word.
//!
//! Rules run strictly in order; each stage's tables presuppose the previous
//! stages. All positions are 1-based word positions.

use std::collections::{BTreeMap, BTreeSet};

use super::grammar;
use super::token::{JassoWord, Token};
use crate::seq::{Stratino, StratinoTerm};
use crate::tree::{validate_simple_word, Bracket, Dallajascar, SimpleWord};

/// Pair table entry: `(opener, closer)` positions.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule1Violation {
    /// Fewer than three openers.
    TooFewOpeners { count: usize },
    /// The bracket skeleton is not a simple word.
    BadSkeleton { position: usize },
    /// The first pair is not `zc+ ... zc-` spanning the whole word.
    BadOuterPair,
    /// The second pair is not `mr+ ... mr-` at positions `(2, η−1)`.
    BadSecondPair,
    /// An inner pair is not one of tg/tc/sn/ln.
    BadInnerPairKind { opener: usize },
    /// An opener is closed by a closer of a different family.
    PairKindMismatch { opener: usize, closer: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule2Violation {
    /// First position in `E(M)` other than 1 whose stratino is ε.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule3Violation {
    /// Which of the eight conditions failed (1-based).
    pub condition: u8,
    /// The opener the condition failed for.
    pub opener: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule4Violation {
    /// Which of the three conditions failed (1-based).
    pub condition: u8,
    /// The zouc opener the condition failed for.
    pub opener: usize,
}

/// Failure of any stage, including the should-not-happen table
/// reconstruction mismatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordViolation {
    Rule1(Rule1Violation),
    Rule2(Rule2Violation),
    Rule3(Rule3Violation),
    Rule4(Rule4Violation),
    Internal(String),
}

impl std::fmt::Display for WordViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WordViolation::Rule1(v) => {
                write!(f, "rule 1 (nesting): ")?;
                match v {
                    Rule1Violation::TooFewOpeners { count } => {
                        write!(f, "{count} openers, need at least 3")
                    }
                    Rule1Violation::BadSkeleton { position } => {
                        write!(f, "bracket skeleton breaks at position {position}")
                    }
                    Rule1Violation::BadOuterPair => {
                        write!(f, "outermost pair must be zc+ ... zc- spanning the word")
                    }
                    Rule1Violation::BadSecondPair => {
                        write!(f, "second pair must be mr+ ... mr- just inside")
                    }
                    Rule1Violation::BadInnerPairKind { opener } => {
                        write!(f, "pair opened at {opener} must be tg/tc/sn/ln")
                    }
                    Rule1Violation::PairKindMismatch { opener, closer } => {
                        write!(f, "opener at {opener} closed by mismatched token at {closer}")
                    }
                }
            }
            WordViolation::Rule2(v) => write!(
                f,
                "rule 2 (stratojasses): position {} has empty stratino",
                v.position
            ),
            WordViolation::Rule3(v) => write!(
                f,
                "rule 3 (dallajascar): condition {} fails at opener {}",
                v.condition, v.opener
            ),
            WordViolation::Rule4(v) => write!(
                f,
                "rule 4 (lounafans): condition {} fails at zouc opener {}",
                v.condition, v.opener
            ),
            WordViolation::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl std::error::Error for WordViolation {}

/// Semantic tables of a fully validated word.
#[derive(Debug, Clone)]
pub struct WordAnalysis {
    pub word: JassoWord,
    /// `(α_p, β_p)` for `p = 0..=N`, ordered by opener.
    pub pairs: Vec<Pair>,
    /// Openers and monomials, ascending.
    pub e_of_m: Vec<usize>,
    /// The skeleton tree `(φ, H)` on `E(M)`, rooted at position 1.
    pub tree: Dallajascar<usize>,
    pub sigma: BTreeMap<usize, Stratino>,
    /// `Σ`: position rows keyed by stratino (only nonempty rows).
    pub rows: BTreeMap<Stratino, Vec<usize>>,
    /// `sΣ`: the opener sub-rows (positions in `A(M)`).
    pub s_rows: BTreeMap<Stratino, Vec<usize>>,
    pub cg: BTreeSet<usize>,
    pub cd: BTreeSet<usize>,
    pub g: BTreeMap<usize, Vec<usize>>,
    pub r: BTreeMap<usize, Vec<usize>>,
    /// The prefix of `R` up to and including its last `ch`.
    pub r_prime: BTreeMap<usize, Vec<usize>>,
    pub rd: BTreeMap<usize, Vec<usize>>,
    pub rg: BTreeMap<usize, Vec<usize>>,
    /// `R_k` blocks per opener, `k = 1..=v`.
    pub r_k: BTreeMap<usize, Vec<Vec<usize>>>,
    pub v: BTreeMap<usize, usize>,
    /// `Δ_k` blocks per opener, `k = 0..=v`.
    pub delta_k: BTreeMap<usize, Vec<Vec<usize>>>,
    pub zoucs: BTreeSet<usize>,
    pub fans: BTreeMap<usize, Vec<usize>>,
    pub zm: BTreeSet<usize>,
    pub delta_g: BTreeMap<usize, Vec<usize>>,
    pub t: BTreeMap<usize, Vec<usize>>,
    pub s: BTreeMap<usize, Vec<usize>>,
    /// Stratajo factors (position slices) of every natural non-unitary row.
    pub stratajos: BTreeMap<Stratino, Vec<Vec<usize>>>,
}

impl WordAnalysis {
    /// The word length η.
    pub fn eta(&self) -> usize {
        self.word.len()
    }

    /// Number of binomial pairs, `N + 1`.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `L`: the token image of a position sequence (openers expand to their
    /// pair, monomials to themselves).
    pub fn l_image(&self, positions: &[usize]) -> Vec<Token> {
        let by_opener: BTreeMap<usize, usize> =
            self.pairs.iter().map(|&(a, b)| (a, b)).collect();
        let mut out = Vec::new();
        for &p in positions {
            let t = self.word.at(p);
            out.push(t);
            if t.is_opener() {
                out.push(self.word.at(by_opener[&p]));
            }
        }
        out
    }

    /// The closer position of the pair opened at `opener`.
    pub fn closer_of(&self, opener: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find(|&&(a, _)| a == opener)
            .map(|&(_, b)| b)
    }

    /// `NJ(M)`, ascending.
    pub fn nj(&self) -> Vec<Stratino> {
        self.rows.keys().cloned().collect()
    }
}

/// Rule 1: the nesting rule. Returns the pair table on success.
pub fn rule1(word: &JassoWord) -> Result<Vec<Pair>, Rule1Violation> {
    let eta = word.len();
    let openers: Vec<usize> = (1..=eta).filter(|&i| word.at(i).is_opener()).collect();
    if openers.len() < 3 {
        return Err(Rule1Violation::TooFewOpeners { count: openers.len() });
    }
    // Project the bracket skeleton and check it is a simple word.
    let mut skeleton = Vec::new();
    let mut sk_pos = Vec::new();
    for i in 1..=eta {
        let t = word.at(i);
        if t.is_opener() {
            skeleton.push(Bracket::Open);
            sk_pos.push(i);
        } else if t.is_closer() {
            skeleton.push(Bracket::Close);
            sk_pos.push(i);
        }
    }
    let sk_pairs = validate_simple_word(&SimpleWord(skeleton))
        .map_err(|e| Rule1Violation::BadSkeleton { position: sk_pos[e.position - 1] })?;
    let mut pairs: Vec<Pair> = sk_pairs
        .into_iter()
        .map(|(a, b)| (sk_pos[a - 1], sk_pos[b - 1]))
        .collect();
    pairs.sort_unstable();
    // Kind-matched pairs.
    for &(a, b) in &pairs {
        if word.at(a).pair_kind() != word.at(b).pair_kind() {
            return Err(Rule1Violation::PairKindMismatch { opener: a, closer: b });
        }
    }
    if pairs[0] != (1, eta) || word.at(1) != Token::ZcOpen {
        return Err(Rule1Violation::BadOuterPair);
    }
    if pairs[1] != (2, eta - 1) || word.at(2) != Token::MrOpen {
        return Err(Rule1Violation::BadSecondPair);
    }
    for &(a, _) in &pairs[2..] {
        if !matches!(
            word.at(a),
            Token::TgOpen | Token::TcOpen | Token::SnOpen | Token::LnOpen
        ) {
            return Err(Rule1Violation::BadInnerPairKind { opener: a });
        }
    }
    Ok(pairs)
}

/// The skeleton tree `(φ, H)` over `E(M)`: openers and monomials, with the
/// parent of an element being its tightest enclosing pair's opener.
pub fn word_skeleton(word: &JassoWord, pairs: &[Pair]) -> (Vec<usize>, Dallajascar<usize>) {
    let closer_of: BTreeMap<usize, usize> = pairs.iter().copied().collect();
    let mut e_of_m = Vec::new();
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut stack: Vec<usize> = Vec::new();
    for i in 1..=word.len() {
        let t = word.at(i);
        if t.is_opener() {
            e_of_m.push(i);
            let p = stack.last().copied();
            parent.insert(i, p);
            children.entry(i).or_default();
            if let Some(p) = p {
                children.entry(p).or_default().push(i);
            }
            stack.push(i);
        } else if t.is_closer() {
            let top = stack.pop().expect("balanced by rule 1");
            debug_assert_eq!(closer_of.get(&top), Some(&i));
        } else {
            e_of_m.push(i);
            let p = stack.last().copied();
            parent.insert(i, p);
            children.entry(i).or_default();
            if let Some(p) = p {
                children.entry(p).or_default().push(i);
            }
        }
    }
    debug_assert!(stack.is_empty());
    let tree = Dallajascar::from_raw(parent, children, 1);
    debug_assert!(tree.validate().is_empty());
    (e_of_m, tree)
}

fn bump_last(x: &Stratino) -> Stratino {
    let (head, last) = x.split_last().expect("nonempty stratino");
    head.child(StratinoTerm::plain(last.value + 1))
}

/// The stratino of one element given its parent opener's stratino.
fn sigma_step(parent_sigma: &Stratino, token: Token) -> Stratino {
    if parent_sigma.is_empty() {
        return Stratino::empty();
    }
    let (x, n) = parent_sigma.split_last().expect("nonempty");
    debug_assert!(!n.shifted, "opener stratinos are natural");
    let n = n.value;
    match token {
        Token::TgOpen => {
            if n == 1 {
                Stratino::empty()
            } else {
                parent_sigma.child(StratinoTerm::plain(1))
            }
        }
        Token::TcOpen | Token::Cu => x
            .child(StratinoTerm::sharp(n))
            .child(StratinoTerm::plain(1)),
        Token::SnOpen | Token::Ch => x.child(StratinoTerm::plain(n + 1)),
        Token::LnOpen => {
            if x.is_shifted() {
                bump_last(&x.natural_of())
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
                bump_last(&x.natural_of())
            }
        }
        _ => Stratino::empty(),
    }
}

/// Stage 2 output: stratinos, rows and opener sub-rows.
#[derive(Debug)]
pub struct SigmaTables {
    pub sigma: BTreeMap<usize, Stratino>,
    pub rows: BTreeMap<Stratino, Vec<usize>>,
    pub s_rows: BTreeMap<Stratino, Vec<usize>>,
}

/// Computes σ, Σ and sΣ, and checks rule 2 (no element other than position 1
/// has an empty stratino).
pub fn sigma_table(
    word: &JassoWord,
    e_of_m: &[usize],
    tree: &Dallajascar<usize>,
) -> Result<SigmaTables, Rule2Violation> {
    let mut sigma: BTreeMap<usize, Stratino> = BTreeMap::new();
    for &gamma in e_of_m {
        let s = if gamma == 1 {
            Stratino::empty()
        } else if gamma == 2 {
            Stratino::from_terms([(1, false)])
        } else {
            let p = *tree.parent(&gamma).expect("non-root element has a parent");
            sigma_step(&sigma[&p], word.at(gamma))
        };
        sigma.insert(gamma, s);
    }
    if let Some(&gamma) = e_of_m
        .iter()
        .find(|&&g| g != 1 && sigma[&g].is_empty())
    {
        return Err(Rule2Violation { position: gamma });
    }
    let mut rows: BTreeMap<Stratino, Vec<usize>> = BTreeMap::new();
    for &gamma in e_of_m {
        rows.entry(sigma[&gamma].clone()).or_default().push(gamma);
    }
    let mut s_rows: BTreeMap<Stratino, Vec<usize>> = BTreeMap::new();
    for (k, row) in &rows {
        let srow: Vec<usize> = row
            .iter()
            .copied()
            .filter(|&g| g != 1 && word.at(g).is_opener())
            .collect();
        s_rows.insert(k.clone(), srow);
    }
    Ok(SigmaTables { sigma, rows, s_rows })
}

/// Stage 3 output.
#[derive(Debug)]
pub struct Rule3Tables {
    pub cg: BTreeSet<usize>,
    pub cd: BTreeSet<usize>,
    pub g: BTreeMap<usize, Vec<usize>>,
    pub r: BTreeMap<usize, Vec<usize>>,
    pub r_prime: BTreeMap<usize, Vec<usize>>,
    pub rd: BTreeMap<usize, Vec<usize>>,
    pub rg: BTreeMap<usize, Vec<usize>>,
    pub r_k: BTreeMap<usize, Vec<Vec<usize>>>,
    pub v: BTreeMap<usize, usize>,
    pub delta_k: BTreeMap<usize, Vec<Vec<usize>>>,
}

/// Computes the chain tables and checks the eight conditions of rule 3.
pub fn rule3(
    word: &JassoWord,
    pairs: &[Pair],
    tree: &Dallajascar<usize>,
    st: &SigmaTables,
) -> Result<Rule3Tables, Rule3Violation> {
    let openers: Vec<usize> = pairs.iter().skip(1).map(|&(a, _)| a).collect();
    let l_one = |p: usize| word.at(p);

    // Cg / Cd membership.
    let mut cg = BTreeSet::new();
    let mut cd = BTreeSet::new();
    for &a in &openers {
        let x = &st.sigma[&a];
        let srow = &st.s_rows[x];
        let row = &st.rows[x];
        let idx = srow.iter().position(|&g| g == a).expect("opener in its row");
        let kind = l_one(a);
        let always = matches!(kind, Token::MrOpen | Token::TgOpen | Token::TcOpen);
        let ch_between = |lo: usize, hi: usize| {
            row.iter()
                .any(|&g| lo < g && g < hi && l_one(g) == Token::Ch)
        };
        if always || idx == 0 || ch_between(srow[idx - 1], a) {
            cg.insert(a);
        }
        if always || idx == srow.len() - 1 || ch_between(a, srow[idx + 1]) {
            cd.insert(a);
        }
    }

    let mut g_map = BTreeMap::new();
    let mut r_map = BTreeMap::new();
    let mut rp_map = BTreeMap::new();
    let mut rd_map = BTreeMap::new();
    let mut rg_map = BTreeMap::new();
    let mut rk_map = BTreeMap::new();
    let mut v_map = BTreeMap::new();

    for &a in &openers {
        let h = tree.children(&a);
        let g: Vec<usize> = h
            .iter()
            .copied()
            .filter(|&c| l_one(c) == Token::TgOpen)
            .collect();
        let r: Vec<usize> = h
            .iter()
            .copied()
            .filter(|&c| {
                matches!(l_one(c), Token::TcOpen | Token::SnOpen | Token::Cu | Token::Ch)
            })
            .collect();
        let last_ch = r.iter().rposition(|&c| l_one(c) == Token::Ch);
        let (r_prime, rd): (Vec<usize>, Vec<usize>) = match last_ch {
            None => (Vec::new(), r.clone()),
            Some(i) => (r[..=i].to_vec(), r[i + 1..].to_vec()),
        };
        let (rg, r_k): (Vec<usize>, Vec<Vec<usize>>) = if r_prime.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            // Split R' into blocks each ending at one of its ch elements.
            let mut blocks = Vec::new();
            let mut cur = Vec::new();
            for &c in r_prime.iter() {
                cur.push(c);
                if l_one(c) == Token::Ch {
                    blocks.push(std::mem::take(&mut cur));
                }
            }
            debug_assert!(cur.is_empty(), "R' ends with its last ch");
            // A continuation chain can only sit at the very front of the
            // ramification: when crossing or fan material precedes the
            // first chain block, the opener starts its chains fresh even
            // without a break mark after its left sibling.
            let continues = !cg.contains(&a)
                && h.first().map(|&c| {
                    matches!(l_one(c), Token::TcOpen | Token::SnOpen | Token::Cu | Token::Ch)
                }) == Some(true);
            if continues {
                let rg = blocks.remove(0);
                (rg, blocks)
            } else {
                (Vec::new(), blocks)
            }
        };
        let v = r_k.len();
        g_map.insert(a, g);
        r_map.insert(a, r);
        rp_map.insert(a, r_prime);
        rd_map.insert(a, rd);
        rg_map.insert(a, rg);
        rk_map.insert(a, r_k);
        v_map.insert(a, v);
    }

    // Conditions 1-8, then the Δ blocks.
    let l_of = |positions: &[usize]| -> Vec<Token> {
        let closer_of: BTreeMap<usize, usize> = pairs.iter().copied().collect();
        let mut out = Vec::new();
        for &p in positions {
            out.push(word.at(p));
            if word.at(p).is_opener() {
                out.push(word.at(closer_of[&p]));
            }
        }
        out
    };
    let fail = |condition: u8, opener: usize| Rule3Violation { condition, opener };

    for &a in &openers {
        if cd.contains(&a) && !(g_map[&a].is_empty() && rd_map[&a].is_empty()) {
            return Err(fail(1, a));
        }
        if !rd_map[&a].is_empty() && !grammar::is_d_ramajo(&l_of(&rd_map[&a])) {
            return Err(fail(2, a));
        }
        if !rg_map[&a].is_empty() && !grammar::is_g_ramajo(&l_of(&rg_map[&a])) {
            return Err(fail(3, a));
        }
        for rk in &rk_map[&a] {
            if !grammar::is_ramajo(&l_of(rk)) {
                return Err(fail(5, a));
            }
        }
    }
    // Condition 4 over consecutive openers of every sub-row.
    for srow in st.s_rows.values() {
        for w in srow.windows(2) {
            let (q, p) = (w[0], w[1]);
            let d = l_of(&rd_map[&q]);
            let g = l_of(&rg_map[&p]);
            if !(d.is_empty() && g.is_empty()) && !grammar::d_g_concat_is_ramajo(&d, &g) {
                return Err(fail(4, p));
            }
        }
    }

    // Conditions 6-8 are positional: Rg a prefix of H, (Rd, G) a suffix,
    // every R_k a contiguous factor; the Δ_k are the gaps in between.
    let mut delta_map = BTreeMap::new();
    for &a in &openers {
        let h = tree.children(&a);
        let rg = &rg_map[&a];
        let rd = &rd_map[&a];
        let g = &g_map[&a];
        if h.len() < rg.len() || h[..rg.len()] != rg[..] {
            return Err(fail(7, a));
        }
        let tail: Vec<usize> = rd.iter().chain(g.iter()).copied().collect();
        if h.len() < rg.len() + tail.len() || h[h.len() - tail.len()..] != tail[..] {
            return Err(fail(6, a));
        }
        let tail_start = h.len() - tail.len();
        let mut deltas = Vec::new();
        let mut idx = rg.len();
        for rk in &rk_map[&a] {
            let j = match h[idx..tail_start].iter().position(|&c| c == rk[0]) {
                Some(j) => idx + j,
                None => return Err(fail(8, a)),
            };
            if j + rk.len() > tail_start || h[j..j + rk.len()] != rk[..] {
                return Err(fail(8, a));
            }
            deltas.push(h[idx..j].to_vec());
            idx = j + rk.len();
        }
        deltas.push(h[idx..tail_start].to_vec());
        delta_map.insert(a, deltas);
    }

    Ok(Rule3Tables {
        cg,
        cd,
        g: g_map,
        r: r_map,
        r_prime: rp_map,
        rd: rd_map,
        rg: rg_map,
        r_k: rk_map,
        v: v_map,
        delta_k: delta_map,
    })
}

/// Stage 4 output.
#[derive(Debug)]
pub struct Rule4Tables {
    pub zoucs: BTreeSet<usize>,
    pub fans: BTreeMap<usize, Vec<usize>>,
    pub zm: BTreeSet<usize>,
}

/// The row a zouc's fan lives on: the shifted twin for tg zoucs, the next
/// natural row for tc zoucs.
fn fan_row(sigma: &Stratino, kind: Token) -> Option<Stratino> {
    let (w, one) = sigma.split_last()?;
    if one != StratinoTerm::plain(1) {
        return None;
    }
    match kind {
        Token::TgOpen if w.is_natural() => Some(w.shifted_of()),
        Token::TcOpen if w.is_shifted() => Some(bump_last(&w.natural_of())),
        _ => None,
    }
}

/// Computes zoucs, fans and the médiane set, and checks rule 4.
pub fn rule4(
    word: &JassoWord,
    pairs: &[Pair],
    tree: &Dallajascar<usize>,
    st: &SigmaTables,
    r3: &Rule3Tables,
) -> Result<Rule4Tables, Rule4Violation> {
    let openers: Vec<usize> = pairs.iter().skip(1).map(|&(a, _)| a).collect();
    let closer_of: BTreeMap<usize, usize> = pairs.iter().copied().collect();
    let l_of = |positions: &[usize]| -> Vec<Token> {
        let mut out = Vec::new();
        for &p in positions {
            out.push(word.at(p));
            if word.at(p).is_opener() {
                out.push(word.at(closer_of[&p]));
            }
        }
        out
    };

    let mut zoucs = BTreeSet::new();
    let mut fans = BTreeMap::new();
    let mut zm = BTreeSet::new();
    for &a in &openers {
        let kind = word.at(a);
        if !matches!(kind, Token::TgOpen | Token::TcOpen) {
            continue;
        }
        zoucs.insert(a);
        let fan = match fan_row(&st.sigma[&a], kind) {
            Some(row_key) => match st.rows.get(&row_key) {
                Some(row) => row
                    .iter()
                    .copied()
                    .filter(|g| tree.emboite(&a, g))
                    .collect(),
                None => Vec::new(),
            },
            None => Vec::new(),
        };
        fans.insert(a, fan);
        if kind == Token::TcOpen {
            if let Some(&q) = tree.parent(&a) {
                if let Some(rd) = r3.rd.get(&q) {
                    if rd.last() == Some(&a) {
                        zm.insert(a);
                    }
                }
            }
        }
    }

    for &a in &zoucs {
        let image = l_of(&fans[&a]);
        match word.at(a) {
            Token::TgOpen => {
                if !grammar::is_simple_lounafan(&image) {
                    return Err(Rule4Violation { condition: 1, opener: a });
                }
            }
            Token::TcOpen => {
                if !grammar::is_lounafan(&image) {
                    return Err(Rule4Violation { condition: 2, opener: a });
                }
            }
            _ => unreachable!(),
        }
        if !zm.contains(&a) {
            let d0 = r3.delta_k[&a].first().cloned().unwrap_or_default();
            let first_ok = d0.first().map(|&g| word.at(g) == Token::Ba).unwrap_or(false);
            if !first_ok {
                return Err(Rule4Violation { condition: 3, opener: a });
            }
        }
    }

    Ok(Rule4Tables { zoucs, fans, zm })
}

/// Derived tables of a rule-valid word, plus the row reconstruction and the
/// row-grammar factorizations. A mismatch here means the implementation and
/// the rules disagree, so it is reported as an internal inconsistency.
pub struct DerivedTables {
    pub delta_g: BTreeMap<usize, Vec<usize>>,
    pub t: BTreeMap<usize, Vec<usize>>,
    pub s: BTreeMap<usize, Vec<usize>>,
    pub stratajos: BTreeMap<Stratino, Vec<Vec<usize>>>,
}

pub fn derived_tables(
    word: &JassoWord,
    pairs: &[Pair],
    st: &SigmaTables,
    r3: &Rule3Tables,
    r4: &Rule4Tables,
) -> Result<DerivedTables, WordViolation> {
    let openers: Vec<usize> = pairs.iter().skip(1).map(|&(a, _)| a).collect();
    let internal = |m: String| Err(WordViolation::Internal(m));

    let mut delta_g = BTreeMap::new();
    let mut t_map = BTreeMap::new();
    let mut s_map = BTreeMap::new();
    for &a in &openers {
        let dg: Vec<usize> = r3.g[&a]
            .iter()
            .flat_map(|z| r4.fans[z].iter().copied())
            .collect();
        delta_g.insert(a, dg);
        // The R-parts in order: Rg, R_1..R_v, Rd.
        let mut parts: Vec<&[usize]> = Vec::new();
        parts.push(&r3.rg[&a]);
        for rk in &r3.r_k[&a] {
            parts.push(rk);
        }
        parts.push(&r3.rd[&a]);
        let mut t = Vec::new();
        let mut s = Vec::new();
        for part in parts {
            for &c in part {
                match word.at(c) {
                    Token::TcOpen => {
                        t.push(c);
                        s.extend(r4.fans[&c].iter().copied());
                    }
                    Token::Cu => t.push(c),
                    Token::SnOpen | Token::Ch => s.push(c),
                    other => {
                        return internal(format!("unexpected token {other} in an R part"))
                    }
                }
            }
        }
        t_map.insert(a, t);
        s_map.insert(a, s);
    }

    // Row reconstruction: the four successor rows of every natural row with
    // openers must equal the concatenations over its opener sub-row.
    let closer_of: BTreeMap<usize, usize> = pairs.iter().copied().collect();
    let l_of = |positions: &[usize]| -> Vec<Token> {
        let mut out = Vec::new();
        for &p in positions {
            out.push(word.at(p));
            if word.at(p).is_opener() {
                out.push(word.at(closer_of[&p]));
            }
        }
        out
    };
    for (x, srow) in &st.s_rows {
        if x.is_empty() || !x.is_natural() {
            continue;
        }
        let concat = |table: &BTreeMap<usize, Vec<usize>>| -> Vec<usize> {
            srow.iter().flat_map(|e| table[e].iter().copied()).collect()
        };
        let (head, n) = x.split_last().expect("nonempty");
        let empty = Vec::new();
        let expect = [
            (x.child(StratinoTerm::plain(1)), concat(&r3.g)),
            (head.child(StratinoTerm::sharp(n.value)), concat(&delta_g)),
            (
                head.child(StratinoTerm::sharp(n.value))
                    .child(StratinoTerm::plain(1)),
                concat(&t_map),
            ),
            (head.child(StratinoTerm::plain(n.value + 1)), concat(&s_map)),
        ];
        for (key, want) in expect {
            let got = st.rows.get(&key).unwrap_or(&empty);
            if got != &want {
                return internal(format!(
                    "row {key} is {got:?} but reconstructs as {want:?}"
                ));
            }
        }
    }

    // Row grammar shapes.
    let mut stratajos = BTreeMap::new();
    for (x, row) in &st.rows {
        if x.is_empty() {
            continue;
        }
        let image = l_of(row);
        match (x.is_natural(), x.is_unitary()) {
            (true, true) => {
                let (prefix, _) = x.split_last().expect("nonempty");
                let ok = if prefix.is_empty() || prefix.is_natural() {
                    // Row (1) holds the mr pair; deeper plain-1 rows are
                    // trouglyres.
                    x.len() == 1 || grammar::is_trouglyre(&image)
                } else {
                    grammar::is_trenagatte(&image)
                };
                if !ok {
                    return internal(format!("unitary row {x} has shape {image:?}"));
                }
            }
            (true, false) => match grammar::stratajo_factors(&image) {
                Some(_) => {
                    // Re-split positions at ch tokens for downstream use.
                    let mut factors = Vec::new();
                    let mut cur = Vec::new();
                    for &p in row {
                        cur.push(p);
                        if word.at(p) == Token::Ch {
                            factors.push(std::mem::take(&mut cur));
                        }
                    }
                    if !cur.is_empty() {
                        return internal(format!("row {x} has a tail after its last ch"));
                    }
                    stratajos.insert(x.clone(), factors);
                }
                None => return internal(format!("row {x} does not factor into stratajos")),
            },
            (false, _) => {
                let ok = image.chunks(2).all(|c| c == [Token::Ba, Token::Ca])
                    && image.len() % 2 == 0;
                if !ok {
                    return internal(format!("shifted row {x} is not a (ba ca) power"));
                }
            }
        }
    }

    Ok(DerivedTables { delta_g, t: t_map, s: s_map, stratajos })
}

/// Runs rules 1 through 4 and the derived-table construction, returning the
/// full analysis of a valid word or the first violation.
pub fn validate(word: &JassoWord) -> Result<WordAnalysis, WordViolation> {
    let pairs = rule1(word).map_err(WordViolation::Rule1)?;
    let (e_of_m, tree) = word_skeleton(word, &pairs);
    let st = sigma_table(word, &e_of_m, &tree).map_err(WordViolation::Rule2)?;
    let r3 = rule3(word, &pairs, &tree, &st).map_err(WordViolation::Rule3)?;
    let r4 = rule4(word, &pairs, &tree, &st, &r3).map_err(WordViolation::Rule4)?;
    let derived = derived_tables(word, &pairs, &st, &r3, &r4)?;
    Ok(WordAnalysis {
        word: word.clone(),
        pairs,
        e_of_m,
        tree,
        sigma: st.sigma,
        rows: st.rows,
        s_rows: st.s_rows,
        cg: r3.cg,
        cd: r3.cd,
        g: r3.g,
        r: r3.r,
        r_prime: r3.r_prime,
        rd: r3.rd,
        rg: r3.rg,
        r_k: r3.r_k,
        v: r3.v,
        delta_k: r3.delta_k,
        zoucs: r4.zoucs,
        fans: r4.fans,
        zm: r4.zm,
        delta_g: derived.delta_g,
        t: derived.t,
        s: derived.s,
        stratajos: derived.stratajos,
    })
}
