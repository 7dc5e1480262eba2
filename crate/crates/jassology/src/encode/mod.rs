//! Encoding rooted cubic planar maps into words: layer decomposition, the
//! row recursion, the four-color row classes, and the final substitution.

pub mod layering;
mod recursion;

use std::collections::BTreeMap;
use std::fmt;

pub use layering::{compute_layering, Layering, Rovejasse};
pub use recursion::{CellInfo, RovInfo};

use crate::map::{FaceIdx, RootedMap};
use crate::seq::Stratino;
use crate::tree::Dallajascar;
use crate::word::{JassoWord, Token};

/// One element of a row or ramification sequence: a face or a marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Item {
    Cell(FaceIdx),
    Cu,
    Ch,
    Ba,
    Ca,
}

impl Item {
    pub fn mark_token(self) -> Option<Token> {
        match self {
            Item::Cell(_) => None,
            Item::Cu => Some(Token::Cu),
            Item::Ch => Some(Token::Ch),
            Item::Ba => Some(Token::Ba),
            Item::Ca => Some(Token::Ca),
        }
    }
}

/// Errors raised while encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    /// The map failed validation; encoding is defined for valid maps only.
    InvalidMap(String),
    Disconnected,
    /// A support cell's border does not meet the component along one arc.
    SupportSplit { face: String },
    /// A component's support spreads over several components below it.
    SupportNotEnclosed { cells: Vec<String> },
    /// A border rotation anchor occurs at several distinct rotations.
    AmbiguousRotation { face: String },
    /// A chain row broke one of its structural properties.
    ChainProperty { row: String, what: String },
    /// A face was never annotated, or appeared in several rows.
    Coverage { face: String },
    /// Any other broken expectation while splitting borders.
    Structure(String),
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::InvalidMap(m) => write!(f, "invalid map: {m}"),
            EncodeError::Disconnected => write!(f, "map is disconnected"),
            EncodeError::SupportSplit { face } => {
                write!(f, "border of `{face}` does not meet the component along one arc")
            }
            EncodeError::SupportNotEnclosed { cells } => {
                write!(f, "support of component {{{}}} is not enclosed", cells.join(", "))
            }
            EncodeError::AmbiguousRotation { face } => {
                write!(f, "ambiguous border rotation for `{face}`")
            }
            EncodeError::ChainProperty { row, what } => {
                write!(f, "row {row}: {what}")
            }
            EncodeError::Coverage { face } => {
                write!(f, "face `{face}` not covered exactly once")
            }
            EncodeError::Structure(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for EncodeError {}

/// The full result of encoding a map.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub layering: Layering,
    /// Σ: the nonempty rows, keyed by stratino.
    pub rows: BTreeMap<Stratino, Vec<Item>>,
    pub cells: Vec<CellInfo>,
    pub rovs: Vec<RovInfo>,
    /// The ramification tree over faces, rooted at the root `(−)` face.
    pub tree: Dallajascar<FaceIdx>,
    pub word: JassoWord,
    /// Faces in substitution order `w_0 ..= w_N`.
    pub visit_order: Vec<FaceIdx>,
    /// Color class 0..=3 per face.
    pub colors: Vec<u8>,
}

impl Encoding {
    /// Anchor data of the component containing `cell`.
    pub fn rov_of_cell(&self, cell: FaceIdx) -> &RovInfo {
        &self.rovs[self.layering.rov_of[cell]]
    }
}

/// Encodes a validated map. Validation failures and any structural break of
/// the layer recursion are errors.
pub fn encode(map: &RootedMap) -> Result<Encoding, EncodeError> {
    let report = map.validate();
    if !report.is_ok() {
        return Err(EncodeError::InvalidMap(report.violations[0].to_string()));
    }
    let layering = compute_layering(map)?;
    let mut engine = recursion::Engine::new(map, &layering);
    engine.run()?;
    let recursion::Engine { cells, rovs, rows, .. } = engine;

    // The ramification tree restricted to faces.
    let mut children: BTreeMap<FaceIdx, Vec<FaceIdx>> = BTreeMap::new();
    let mut parent: BTreeMap<FaceIdx, Option<FaceIdx>> = BTreeMap::new();
    for (e, cell) in cells.iter().enumerate() {
        let h = cell.h.as_ref().expect("coverage checked");
        let kids: Vec<FaceIdx> = h
            .iter()
            .filter_map(|i| match i {
                Item::Cell(c) => Some(*c),
                _ => None,
            })
            .collect();
        children.insert(e, kids);
        parent.insert(e, cell.phi);
    }
    let tree = Dallajascar::from_raw(parent, children, map.root_neg());
    let violations = tree.validate();
    if let Some(v) = violations.first() {
        return Err(EncodeError::Structure(format!(
            "ramification data is not a tree: {v}"
        )));
    }

    let (word, visit_order) = emit_word(map, &cells);
    let colors = stratojasse_coloring(map, &rows);

    Ok(Encoding {
        layering,
        rows,
        cells,
        rovs,
        tree,
        word,
        visit_order,
        colors,
    })
}

/// The leftmost substitution: every face expands to its opener, its
/// ramification items (faces recursively), and its closer.
fn emit_word(map: &RootedMap, cells: &[CellInfo]) -> (JassoWord, Vec<FaceIdx>) {
    let mut tokens = Vec::new();
    let mut order = Vec::new();
    enum Step {
        Enter(FaceIdx),
        Emit(Token),
    }
    let mut stack = vec![Step::Enter(map.root_neg())];
    while let Some(step) = stack.pop() {
        match step {
            Step::Emit(t) => tokens.push(t),
            Step::Enter(e) => {
                order.push(e);
                let binome = cells[e].binome.expect("coverage checked");
                tokens.push(binome.opener());
                stack.push(Step::Emit(binome.closer()));
                for item in cells[e].h.as_ref().expect("coverage checked").iter().rev() {
                    match item {
                        Item::Cell(c) => stack.push(Step::Enter(*c)),
                        mark => stack.push(Step::Emit(mark.mark_token().expect("mark"))),
                    }
                }
            }
        }
    }
    (JassoWord::new(tokens), order)
}

/// Colors every face by the parity class of its row: row length odd/even
/// against last integer odd/even, with the root face in class 0.
fn stratojasse_coloring(map: &RootedMap, rows: &BTreeMap<Stratino, Vec<Item>>) -> Vec<u8> {
    let mut colors = vec![0u8; map.face_count()];
    for (x, items) in rows {
        let class = if x.is_empty() {
            0
        } else {
            let p = x.len() % 2 == 1;
            let n = x.last().expect("nonempty").value % 2 == 1;
            match (p, n) {
                (true, true) => 1,
                (true, false) => 3,
                (false, true) => 0,
                (false, false) => 2,
            }
        };
        for item in items {
            if let Item::Cell(c) = item {
                colors[*c] = class;
            }
        }
    }
    colors
}

/// True iff two same-colored distinct faces may touch: they must be
/// consecutive cells of one chain row with no break mark between them.
/// Anchor rows (unitary stratinos) hold one cell per component and those
/// never touch, so only the non-unitary rows link cells.
pub fn row_linked(rows: &BTreeMap<Stratino, Vec<Item>>, a: FaceIdx, b: FaceIdx) -> bool {
    for (key, items) in rows {
        if key.is_unitary() {
            continue;
        }
        let cells: Vec<(usize, FaceIdx)> = items
            .iter()
            .enumerate()
            .filter_map(|(i, it)| match it {
                Item::Cell(c) => Some((i, *c)),
                _ => None,
            })
            .collect();
        for w in cells.windows(2) {
            let ((i, x), (j, y)) = (w[0], w[1]);
            if (x == a && y == b) || (x == b && y == a) {
                let separated = items[i + 1..j].iter().any(|it| matches!(it, Item::Ch));
                if !separated {
                    return true;
                }
            }
        }
    }
    false
}
