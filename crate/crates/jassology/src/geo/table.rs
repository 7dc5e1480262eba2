//! The row ladder of a valid word and the token placement grid.

use std::collections::BTreeMap;

use super::DecodeError;
use crate::seq::{Stratino, StratinoTerm};
use crate::word::{Token, WordAnalysis};

/// One ladder row: a stratino row, or the blank row inserted below the
/// highest extension of a unitary stratino's family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LadderRow {
    Stratino(Stratino),
    Blank { unitary: Stratino },
}

#[derive(Debug, Clone)]
pub struct Ladder {
    pub rows: Vec<LadderRow>,
    /// Stratino row -> row rank.
    pub rank_of: BTreeMap<Stratino, usize>,
    /// Unitary stratino -> rank of its blank row.
    pub blank_of: BTreeMap<Stratino, usize>,
    /// Unitary stratino `(Z, 1)` -> the largest `a` with `(Z, a)` present.
    pub extension: BTreeMap<Stratino, u32>,
}

/// Builds the ladder: the sorted stratino rows, with one blank row per
/// unitary family inserted below the last row of the family's whole cone.
///
/// The cone of the family above `Y = (Z, 1)` is the order interval from `Y`
/// up to (but excluding) `(Z, a+1)` with `a` the highest extension: it holds
/// the extension rows `(Z, n)` together with all their offshoot rows and
/// deeper families. The curves anchored on `Y`'s row reach down to the blank
/// row, so everything drawn inside them must sit above it. When the last
/// extension row has no offshoots this lands directly below `(Z, a)`, and
/// the root family's blank row always comes out last.
pub fn build_ladder(analysis: &WordAnalysis) -> Result<Ladder, DecodeError> {
    let nj: Vec<Stratino> = analysis.rows.keys().cloned().collect();
    let unitaries: Vec<Stratino> = nj.iter().filter(|x| x.is_unitary()).cloned().collect();
    let mut extension = BTreeMap::new();
    let mut blank_under: BTreeMap<Stratino, Vec<Stratino>> = BTreeMap::new();
    for y in &unitaries {
        let (z, _) = y.split_last().expect("unitary is nonempty");
        let mut a = 1u32;
        while analysis
            .rows
            .contains_key(&z.child(StratinoTerm::plain(a + 1)))
        {
            a += 1;
        }
        extension.insert(y.clone(), a);
        let bound = z.child(StratinoTerm::plain(a + 1));
        let host = nj
            .iter()
            .filter(|x| *x >= y && **x < bound)
            .max()
            .cloned()
            .ok_or_else(|| DecodeError::Internal(format!("family {y} has no rows")))?;
        blank_under.entry(host).or_default().push(y.clone());
    }
    let mut rows = Vec::new();
    let mut rank_of = BTreeMap::new();
    let mut blank_of = BTreeMap::new();
    for x in &nj {
        rank_of.insert(x.clone(), rows.len());
        rows.push(LadderRow::Stratino(x.clone()));
        if let Some(owners) = blank_under.get_mut(x) {
            // Inner families close above the families that contain them.
            owners.sort();
            for y in owners.iter().rev() {
                blank_of.insert(y.clone(), rows.len());
                rows.push(LadderRow::Blank { unitary: y.clone() });
            }
        }
    }
    let one = Stratino::from_terms([(1, false)]);
    if blank_of.get(&one) != Some(&(rows.len() - 1)) {
        return Err(DecodeError::Internal(
            "the root family's blank row is not last".into(),
        ));
    }
    Ok(Ladder { rows, rank_of, blank_of, extension })
}

/// Integer grid point, x rightward and y downward, one unit per ladder row
/// and per kept column.
pub type Pt = (i64, i64);

/// The placement grid: kept word positions as columns, ladder rows as rows.
#[derive(Debug, Clone)]
pub struct GridTable {
    pub ladder: Ladder,
    /// Kept word positions, ascending.
    pub cols: Vec<usize>,
    pub col_of: BTreeMap<usize, usize>,
    /// Kept position -> ladder row rank.
    pub row_of_pos: BTreeMap<usize, usize>,
}

impl GridTable {
    /// `A_γ`: the top-left corner of the cell holding position `pos`.
    pub fn point(&self, pos: usize) -> Pt {
        (self.col_of[&pos] as i64, self.row_of_pos[&pos] as i64)
    }

    pub fn width(&self) -> i64 {
        self.cols.len() as i64
    }

    pub fn height(&self) -> i64 {
        self.ladder.rows.len() as i64
    }
}

/// Builds the grid: keeps the openers and monomials plus the closers of the
/// zc, mr and tg pairs, and places every kept token on its stratino row.
pub fn build_table(analysis: &WordAnalysis, ladder: Ladder) -> Result<GridTable, DecodeError> {
    let mut cols: Vec<usize> = analysis.e_of_m.clone();
    let mut row_of_pos: BTreeMap<usize, usize> = BTreeMap::new();
    for &gamma in &analysis.e_of_m {
        let rank = *ladder
            .rank_of
            .get(&analysis.sigma[&gamma])
            .ok_or_else(|| DecodeError::Internal(format!("no ladder row for position {gamma}")))?;
        row_of_pos.insert(gamma, rank);
    }
    for &(a, b) in &analysis.pairs {
        if matches!(
            analysis.word.at(a),
            Token::ZcOpen | Token::MrOpen | Token::TgOpen
        ) {
            cols.push(b);
            row_of_pos.insert(b, ladder.rank_of[&analysis.sigma[&a]]);
        }
    }
    cols.sort_unstable();
    let col_of: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    Ok(GridTable { ladder, cols, col_of, row_of_pos })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{tokenize, validate};

    fn st(s: &str) -> Stratino {
        s.parse().unwrap()
    }

    fn example() -> WordAnalysis {
        validate(
            &tokenize(
                "zc+ mr+ sn+ tg+ ba ca tg- sn- tc+ ba ln+ sn+ sn- tc+ sn+ ba sn- ch ca tc- \
                 ln- sn+ ln+ cu ch ln- ca sn- ch tc- cu ch mr- zc-",
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn ladder_of_example() {
        let ladder = build_ladder(&example()).unwrap();
        let expect: Vec<LadderRow> = vec![
            LadderRow::Stratino(st("")),
            LadderRow::Stratino(st("1")),
            LadderRow::Stratino(st("1#,1")),
            LadderRow::Stratino(st("1#,2")),
            LadderRow::Blank { unitary: st("1#,1") },
            LadderRow::Stratino(st("2")),
            LadderRow::Stratino(st("2,1")),
            LadderRow::Blank { unitary: st("2,1") },
            LadderRow::Stratino(st("2#")),
            LadderRow::Stratino(st("2#,1")),
            LadderRow::Stratino(st("2#,2")),
            LadderRow::Blank { unitary: st("2#,1") },
            LadderRow::Stratino(st("3")),
            LadderRow::Blank { unitary: st("1") },
        ];
        assert_eq!(ladder.rows, expect);
        assert_eq!(ladder.rows.len(), 14);
        assert_eq!(ladder.extension[&st("1")], 3);
        assert_eq!(ladder.extension[&st("1#,1")], 2);
        assert_eq!(ladder.extension[&st("2,1")], 1);
        assert_eq!(ladder.extension[&st("2#,1")], 2);
    }

    #[test]
    fn table_of_example() {
        let a = example();
        let table = build_table(&a, build_ladder(&a).unwrap()).unwrap();
        assert_eq!(
            table.cols,
            vec![
                1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 12, 14, 15, 16, 18, 19, 22, 23, 24, 25,
                27, 29, 31, 32, 33, 34
            ]
        );
        // Dropped sn/ln/tc closers.
        for dropped in [8, 13, 17, 20, 21, 26, 28, 30] {
            assert!(!table.col_of.contains_key(&dropped));
        }
        assert_eq!(table.point(1), (0, 0));
        assert_eq!(table.point(34), (25, 0));
        assert_eq!(table.point(2), (1, 1));
        assert_eq!(table.point(33), (24, 1));
        assert_eq!(table.point(9), (7, 2));
        assert_eq!(table.point(5), (4, 8));
        assert_eq!(table.point(16), (13, 12));
    }

    #[test]
    fn theta_ladder() {
        let a = validate(&tokenize("zc+ mr+ sn+ sn- ch mr- zc-").unwrap()).unwrap();
        let ladder = build_ladder(&a).unwrap();
        assert_eq!(ladder.rows.len(), 4);
        assert!(matches!(&ladder.rows[3], LadderRow::Blank { unitary } if *unitary == st("1")));
    }
}
