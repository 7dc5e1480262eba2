//! Decoding a valid word into its geometric map: the ladder and placement
//! grid, the orthogonal drawing, the extracted rooted map, and rendering.

pub mod arrange;
mod extract;
pub mod render;
pub mod table;

use std::fmt;

pub use arrange::{Curve, GeoArrangement, HSeg, Segment, Transversal};
pub use render::{geometry_dump, render_svg, word_colors};
pub use table::{build_ladder, build_table, GridTable, Ladder, LadderRow, Pt};

use crate::map::RootedMap;
use crate::word::WordAnalysis;

/// Decoding failures. For words that passed the four rules these indicate
/// an internal inconsistency, so everything carries context for debugging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeError {
    /// A lattice point of the drawing has a degree other than 2 or 3.
    BadJunction { point: Pt, degree: usize },
    /// Regions and opener cells do not correspond one to one.
    RegionMismatch,
    Internal(String),
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::BadJunction { point, degree } => {
                write!(f, "junction ({},{}) has degree {degree}", point.0, point.1)
            }
            DecodeError::RegionMismatch => {
                write!(f, "drawing regions do not match the word's pairs")
            }
            DecodeError::Internal(m) => write!(f, "decode inconsistency: {m}"),
        }
    }
}

impl std::error::Error for DecodeError {}

/// A decoded word: the placement grid, the drawing, and the extracted map
/// with faces `w0 ..= wN` in visit order, rooted at `w0 -> w1`.
#[derive(Debug, Clone)]
pub struct GeometricMap {
    pub table: GridTable,
    pub arrangement: GeoArrangement,
    pub map: RootedMap,
    /// Unit cells of each region, by pair index (used for fills).
    pub region_cells: Vec<Vec<Pt>>,
}

/// Builds the whole geometric reconstruction of a valid word.
pub fn decode(analysis: &WordAnalysis) -> Result<GeometricMap, DecodeError> {
    let ladder = build_ladder(analysis)?;
    let table = build_table(analysis, ladder)?;
    let curves = arrange::build_curves(analysis, &table)?;
    let segments = arrange::build_segments(analysis, &table, &curves)?;
    let transversals = arrange::build_transversals(analysis, &table, &curves, &segments)?;
    let lambda = arrange::build_lambda(analysis, &table, &curves)?;
    let arrangement = GeoArrangement { curves, segments, transversals, lambda };
    let extraction = extract::extract_map(analysis, &table, &arrangement)?;
    Ok(GeometricMap {
        table,
        arrangement,
        map: extraction.map,
        region_cells: extraction.region_cells,
    })
}
