//! The orthogonal drawing of a valid word: one closed curve per anchored
//! pair, one open segment per row stratajo, one transversal edge per later
//! opener of a stratajo, and the distinguished root edge.

use super::table::{GridTable, Pt};
use super::DecodeError;
use crate::seq::Stratino;
use crate::word::{Token, WordAnalysis};

/// A horizontal unit-grid segment, `x1 < x2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HSeg {
    pub y: i64,
    pub x1: i64,
    pub x2: i64,
}

impl HSeg {
    fn covers(&self, x: i64) -> bool {
        self.x1 < x && x < self.x2
    }
}

/// A closed curve around one anchored pair (the root pair or a zouc pair).
#[derive(Debug, Clone)]
pub struct Curve {
    /// The opener position the curve belongs to.
    pub anchor: usize,
    /// Closed outline, first point repeated last.
    pub pts: Vec<Pt>,
    pub top: HSeg,
    /// Left-to-right lower horizontals (one for the root rectangle, three
    /// for the dipped octagons).
    pub lowers: Vec<HSeg>,
}

/// The open segment of one stratajo factor.
#[derive(Debug, Clone)]
pub struct Segment {
    /// First opener of the factor.
    pub anchor: usize,
    pub row: Stratino,
    pub pts: Vec<Pt>,
    pub horiz: HSeg,
}

/// One transversal edge of a stratajo.
#[derive(Debug, Clone)]
pub struct Transversal {
    /// The opener the edge drops from.
    pub opener: usize,
    pub pts: Vec<Pt>,
}

#[derive(Debug, Clone)]
pub struct GeoArrangement {
    pub curves: Vec<Curve>,
    pub segments: Vec<Segment>,
    pub transversals: Vec<Transversal>,
    /// The root edge, oriented.
    pub lambda: Vec<Pt>,
}

fn internal(m: impl Into<String>) -> DecodeError {
    DecodeError::Internal(m.into())
}

/// Builds the root rectangle and one dipped octagon per zouc.
pub fn build_curves(analysis: &WordAnalysis, table: &GridTable) -> Result<Vec<Curve>, DecodeError> {
    let mut curves = Vec::new();
    let one: Stratino = Stratino::from_terms([(1, false)]);
    // Root curve: rectangle from the second pair down to the last blank row.
    let (a1, b1) = analysis.pairs[1];
    let top_y = table.row_of_pos[&a1] as i64;
    let bottom_y = table.ladder.blank_of[&one] as i64;
    let xa = table.col_of[&a1] as i64;
    let xb = table.col_of[&b1] as i64;
    curves.push(Curve {
        anchor: a1,
        pts: vec![(xa, top_y), (xa, bottom_y), (xb, bottom_y), (xb, top_y), (xa, top_y)],
        top: HSeg { y: top_y, x1: xa, x2: xb },
        lowers: vec![HSeg { y: bottom_y, x1: xa, x2: xb }],
    });
    // Zouc curves.
    for &alpha in &analysis.zoucs {
        let unitary = &analysis.sigma[&alpha];
        let fan = &analysis.fans[&alpha];
        let (first_fan, last_fan) = match (fan.first(), fan.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(internal(format!("zouc {alpha} has no fan"))),
        };
        let right = match analysis.word.at(alpha) {
            Token::TgOpen => analysis
                .closer_of(alpha)
                .ok_or_else(|| internal("zouc without closer"))?,
            Token::TcOpen => {
                let row = &analysis.rows[unitary];
                let at = row.iter().position(|&g| g == alpha).expect("zouc in its row");
                *row.get(at + 1)
                    .ok_or_else(|| internal(format!("zouc {alpha} has no completing mark")))?
            }
            _ => unreachable!("zoucs are tg/tc openers"),
        };
        let y_top = table.row_of_pos[&alpha] as i64;
        let y_blank = *table
            .ladder
            .blank_of
            .get(unitary)
            .ok_or_else(|| internal(format!("no blank row under {unitary}")))? as i64;
        let y_fan = table.row_of_pos[&first_fan] as i64;
        if table.row_of_pos[&last_fan] as i64 != y_fan {
            return Err(internal(format!("fan of {alpha} spans two rows")));
        }
        let xl = table.col_of[&alpha] as i64;
        let xr = table.col_of[&right] as i64;
        let xb = table.col_of[&first_fan] as i64;
        let xc = table.col_of[&last_fan] as i64;
        if !(y_top < y_blank && y_blank < y_fan && xl < xb && xb < xc && xc < xr) {
            return Err(internal(format!("degenerate curve around {alpha}")));
        }
        curves.push(Curve {
            anchor: alpha,
            pts: vec![
                (xl, y_top),
                (xl, y_blank),
                (xb, y_blank),
                (xb, y_fan),
                (xc, y_fan),
                (xc, y_blank),
                (xr, y_blank),
                (xr, y_top),
                (xl, y_top),
            ],
            top: HSeg { y: y_top, x1: xl, x2: xr },
            lowers: vec![
                HSeg { y: y_blank, x1: xl, x2: xb },
                HSeg { y: y_fan, x1: xb, x2: xc },
                HSeg { y: y_blank, x1: xc, x2: xr },
            ],
        });
    }
    Ok(curves)
}

/// The unique zouc-row opener whose pair encloses the whole factor.
fn enclosing_anchor(
    analysis: &WordAnalysis,
    row: &Stratino,
    first: usize,
    last: usize,
) -> Result<usize, DecodeError> {
    let (z, _) = row.split_last().expect("natural row is nonempty");
    let unitary = z.child(crate::seq::StratinoTerm::plain(1));
    let candidates: Vec<usize> = analysis
        .rows
        .get(&unitary)
        .map(|r| {
            r.iter()
                .copied()
                .filter(|&g| {
                    analysis.word.at(g).is_opener()
                        && g < first
                        && analysis.closer_of(g).map(|c| c > last).unwrap_or(false)
                })
                .collect()
        })
        .unwrap_or_default();
    match candidates.as_slice() {
        [a] => Ok(*a),
        _ => Err(internal(format!(
            "stratajo at {first} has {} enclosing anchors",
            candidates.len()
        ))),
    }
}

/// Drops a vertical from `(x, y)` to the first horizontal strictly below;
/// returns every outline piece at that height (overlapping collinear pieces
/// are one drawing).
fn drop_from(
    x: i64,
    y: i64,
    curves: &[Curve],
    segments: &[Segment],
) -> Option<(i64, Vec<Obstacle>)> {
    let mut best: Option<(i64, Vec<Obstacle>)> = None;
    let mut consider = |seg: HSeg, owner: Obstacle| {
        if seg.y > y && seg.covers(x) {
            match &mut best {
                Some((by, owners)) if *by == seg.y => owners.push(owner),
                Some((by, _)) if *by < seg.y => {}
                _ => best = Some((seg.y, vec![owner])),
            }
        }
    };
    for (i, c) in curves.iter().enumerate() {
        consider(c.top, Obstacle::CurveTop(i));
        for (k, &low) in c.lowers.iter().enumerate() {
            consider(low, Obstacle::CurveLower(i, k));
        }
    }
    for (i, s) in segments.iter().enumerate() {
        consider(s.horiz, Obstacle::Segment(i));
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Obstacle {
    CurveTop(usize),
    CurveLower(usize, usize),
    Segment(usize),
}

/// Builds one segment per stratajo factor: verticals from the first opener
/// and the final break mark down to the enclosing curve's lower outline.
pub fn build_segments(
    analysis: &WordAnalysis,
    table: &GridTable,
    curves: &[Curve],
) -> Result<Vec<Segment>, DecodeError> {
    let mut segments = Vec::new();
    for (row, factors) in &analysis.stratajos {
        for factor in factors {
            let first = factor[0];
            let last = *factor.last().expect("factors are nonempty");
            let anchor = enclosing_anchor(analysis, row, first, last)?;
            let curve = curves
                .iter()
                .find(|c| c.anchor == anchor)
                .ok_or_else(|| internal(format!("no curve anchored at {anchor}")))?;
            let a_first = table.point(first);
            let a_last = table.point(last);
            let project = |p: Pt| -> Result<Pt, DecodeError> {
                let hits: Vec<&HSeg> = curve
                    .lowers
                    .iter()
                    .filter(|h| h.covers(p.0) && h.y > p.1)
                    .collect();
                match hits.as_slice() {
                    [h] => Ok((p.0, h.y)),
                    _ => Err(internal(format!(
                        "projection of column {} is not unique",
                        p.0
                    ))),
                }
            };
            let b_first = project(a_first)?;
            let b_last = project(a_last)?;
            segments.push(Segment {
                anchor: first,
                row: row.clone(),
                pts: vec![b_first, a_first, a_last, b_last],
                horiz: HSeg { y: a_first.1, x1: a_first.0, x2: a_last.0 },
            });
        }
    }
    Ok(segments)
}

/// Builds the transversal edges of every stratajo with two or more openers.
pub fn build_transversals(
    analysis: &WordAnalysis,
    table: &GridTable,
    curves: &[Curve],
    segments: &[Segment],
) -> Result<Vec<Transversal>, DecodeError> {
    let mut out = Vec::new();
    for (row, factors) in &analysis.stratajos {
        let (z, n) = row.split_last().expect("nonempty row");
        for factor in factors {
            let first = factor[0];
            let last = *factor.last().expect("factors are nonempty");
            let enclosing = enclosing_anchor(analysis, row, first, last)?;
            let openers: Vec<usize> = factor
                .iter()
                .copied()
                .filter(|&g| analysis.word.at(g).is_opener())
                .collect();
            for i in 1..openers.len() {
                let prev = openers[i - 1];
                let cur = openers[i];
                let g_prev = &analysis.g[&prev];
                let mut pts: Vec<Pt> = Vec::new();
                let (drop_x, drop_y) = if g_prev.is_empty() {
                    let a = table.point(cur);
                    pts.push(a);
                    a
                } else {
                    // Route through the shifted row at the first fan column
                    // of the previous opener's pinched components.
                    let gamma_b = analysis.delta_g[&prev][0];
                    let shifted = z.child(crate::seq::StratinoTerm::sharp(n.value));
                    let y_shift = *table
                        .ladder
                        .rank_of
                        .get(&shifted)
                        .ok_or_else(|| internal(format!("no shifted row under {row}")))?
                        as i64;
                    let a = table.point(cur);
                    let a_prime = (a.0, y_shift);
                    let a_fan = table.point(gamma_b);
                    if a_fan.1 != y_shift {
                        return Err(internal(format!(
                            "fan column {gamma_b} is off the shifted row"
                        )));
                    }
                    pts.push(a);
                    pts.push(a_prime);
                    pts.push(a_fan);
                    a_fan
                };
                let (hit_y, obstacles) = drop_from(drop_x, drop_y, curves, segments)
                    .ok_or_else(|| internal(format!("transversal at {cur} falls through")))?;
                // Legitimate landings: the enclosing curve's lower outline
                // (nothing hangs between the siblings), the top of a deeper
                // anchored-pair curve (the junction completes its zouc), or
                // the segment of a chain one row further down.
                let deeper = z.child(crate::seq::StratinoTerm::plain(n.value + 1));
                let ok = obstacles.iter().any(|obstacle| match *obstacle {
                    Obstacle::CurveLower(c, _) => curves[c].anchor == enclosing,
                    Obstacle::CurveTop(c) => {
                        analysis.word.at(curves[c].anchor) == Token::TcOpen
                    }
                    Obstacle::Segment(s) => segments[s].row == deeper,
                });
                if !ok {
                    return Err(internal(format!(
                        "transversal at {cur} lands on an unexpected outline"
                    )));
                }
                pts.push((drop_x, hit_y));
                out.push(Transversal { opener: cur, pts });
            }
        }
    }
    Ok(out)
}

/// The root edge: the arc of the root rectangle from the last stratajo's
/// right foot around to the first stratajo's left foot.
pub fn build_lambda(
    analysis: &WordAnalysis,
    table: &GridTable,
    curves: &[Curve],
) -> Result<Vec<Pt>, DecodeError> {
    let two: Stratino = "2".parse().expect("valid stratino");
    let row = analysis
        .rows
        .get(&two)
        .ok_or_else(|| internal("no second row in a valid word"))?;
    let gamma_a = *row.first().expect("rows are nonempty");
    let gamma_b = *row.last().expect("rows are nonempty");
    if analysis.word.at(gamma_a) != Token::SnOpen || analysis.word.at(gamma_b) != Token::Ch {
        return Err(internal("second row does not start and end a stratajo"));
    }
    let root = &curves[0];
    let bottom = root.lowers[0];
    let (a1, b1) = analysis.pairs[1];
    let a_a1 = table.point(a1);
    let a_b1 = table.point(b1);
    Ok(vec![
        (table.col_of[&gamma_b] as i64, bottom.y),
        (a_b1.0, bottom.y),
        a_b1,
        a_a1,
        (a_a1.0, bottom.y),
        (table.col_of[&gamma_a] as i64, bottom.y),
    ])
}
