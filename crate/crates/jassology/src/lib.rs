//! A codec between rooted cubic planar maps and words over a 16-token
//! alphabet.
//!
//! A map is given purely combinatorially, by the ordered neighbor sequence
//! around each face plus a distinguished oriented root edge. Encoding peels
//! the map into layers around the root face, walks each layer's chains, and
//! writes one balanced token pair per face plus four marker monomials. Any
//! token string can be checked against the four word rules; valid words are
//! decoded back into an orthogonal drawing on the integer grid whose regions
//! recover a map, and the encode/decode pair is a bijection on equivalence
//! classes of rooted cubic planar maps.
//!
//! Modules follow the pipeline:
//!
//! - [`map`]: face-border maps, validation, equivalence oracle, text format
//! - [`seq`]: sequence relations and the stratino grading
//! - [`tree`]: ordered trees and simple bracket words
//! - [`encode`]: map → word
//! - [`word`]: the alphabet, the four rules, and the word tables
//! - [`geo`]: word → ladder/table/drawing → map, plus SVG output
//! - [`enumerate`]: exhaustive generation of small valid words

pub mod encode;
pub mod enumerate;
pub mod geo;
pub mod map;
pub mod seq;
pub mod tree;
pub mod word;

pub use encode::{encode, Encoding};
pub use geo::{decode, GeometricMap};
pub use map::RootedMap;
pub use word::{tokenize, validate, JassoWord, WordAnalysis};
