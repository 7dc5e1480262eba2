//! Rooted cubic planar maps given by face border sequences.
//!
//! A map is a set of faces, each carrying the ordered cyclic sequence of its
//! neighbors (its border, read in the `(+)` direction from a reference
//! vertex), plus a distinguished oriented root edge between two faces. The
//! root edge is anchored by convention: the border of the root `(−)` face
//! starts with the root `(+)` face and vice versa.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Index of a face inside a [`RootedMap`].
pub type FaceIdx = usize;

/// Errors raised while building or querying a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    DuplicateFace(String),
    UnknownFace(String),
    MissingBorder(String),
    /// A root face's border does not contain its partner, or contains it
    /// several times without starting with it, so the root edge cannot be
    /// anchored by rotation.
    RootAnchor(String),
    /// The text form could not be parsed.
    Parse { line: usize, message: String },
    /// An operation required a valid map but validation failed.
    InvalidMap(String),
}

impl fmt::Display for MapError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::DuplicateFace(n) => write!(f, "duplicate face `{n}`"),
            MapError::UnknownFace(n) => write!(f, "unknown face `{n}`"),
            MapError::MissingBorder(n) => write!(f, "face `{n}` has no border line"),
            MapError::RootAnchor(n) => {
                write!(f, "cannot anchor the root edge on the border of `{n}`")
            }
            MapError::Parse { line, message } => write!(f, "line {line}: {message}"),
            MapError::InvalidMap(m) => write!(f, "invalid map: {m}"),
        }
    }
}

impl std::error::Error for MapError {}

/// One validation finding; violations are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapViolation {
    EmptyFaceName,
    BorderTooShort(String),
    SelfNeighbor(String),
    RootAnchor(String),
    /// The consecutive pair `(a, b)` occurs in the extended border of `c`
    /// more often than `(b, c)` occurs in the extended border of `a`.
    Reciprocity { a: String, b: String, c: String },
    /// Total border length is not divisible by 6.
    NotCubic { total: usize },
    /// `F − E + V ≠ 2` for the derived counts.
    EulerCharacteristic { faces: usize, edges: usize, vertices: usize },
    Disconnected,
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::EmptyFaceName => write!(f, "empty face name"),
            MapViolation::BorderTooShort(e) => {
                write!(f, "border of `{e}` has fewer than 2 neighbors")
            }
            MapViolation::SelfNeighbor(e) => {
                write!(f, "face `{e}` appears in its own border")
            }
            MapViolation::RootAnchor(e) => {
                write!(f, "border of root face `{e}` does not start with its partner")
            }
            MapViolation::Reciprocity { a, b, c } => write!(
                f,
                "factor reciprocity fails: (`{a}`,`{b}`) in border of `{c}` has no matching (`{b}`,`{c}`) in border of `{a}`"
            ),
            MapViolation::NotCubic { total } => {
                write!(f, "total border length {total} is not divisible by 6")
            }
            MapViolation::EulerCharacteristic { faces, edges, vertices } => write!(
                f,
                "Euler characteristic {faces} - {edges} + {vertices} != 2"
            ),
            MapViolation::Disconnected => write!(f, "face adjacency graph is disconnected"),
        }
    }
}

/// Validation outcome together with the derived counts when they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    pub violations: Vec<MapViolation>,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
}

impl MapReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A rooted map: faces, their anchored border sequences, and the two root
/// faces. The border of `root_neg` starts with `root_pos` and vice versa;
/// this anchors the oriented root edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedMap {
    names: Vec<String>,
    index: BTreeMap<String, FaceIdx>,
    borders: Vec<Vec<FaceIdx>>,
    root_neg: FaceIdx,
    root_pos: FaceIdx,
}

impl RootedMap {
    /// Builds a map from face names, borders (as name sequences) and the two
    /// root face names. Root borders that merely need a rotation to satisfy
    /// the anchoring convention are rotated, provided the partner face
    /// occurs exactly once; an ambiguous rotation is an error.
    pub fn new(
        faces: Vec<String>,
        borders: Vec<(String, Vec<String>)>,
        root_neg: &str,
        root_pos: &str,
    ) -> Result<RootedMap, MapError> {
        let mut index = BTreeMap::new();
        for (i, name) in faces.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(MapError::DuplicateFace(name.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| MapError::UnknownFace(name.to_string()))
        };
        let mut border_vecs: Vec<Option<Vec<FaceIdx>>> = vec![None; faces.len()];
        for (owner, neighbors) in &borders {
            let o = lookup(owner)?;
            if border_vecs[o].is_some() {
                return Err(MapError::DuplicateFace(owner.clone()));
            }
            let ns = neighbors
                .iter()
                .map(|n| lookup(n))
                .collect::<Result<Vec<_>, _>>()?;
            border_vecs[o] = Some(ns);
        }
        let borders = border_vecs
            .into_iter()
            .zip(faces.iter())
            .map(|(b, name)| b.ok_or_else(|| MapError::MissingBorder(name.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let root_neg = lookup(root_neg)?;
        let root_pos = lookup(root_pos)?;
        let mut map = RootedMap { names: faces, index, borders, root_neg, root_pos };
        map.anchor_root(map.root_neg, map.root_pos)?;
        map.anchor_root(map.root_pos, map.root_neg)?;
        Ok(map)
    }

    fn anchor_root(&mut self, face: FaceIdx, partner: FaceIdx) -> Result<(), MapError> {
        let b = &mut self.borders[face];
        if b.first() == Some(&partner) {
            return Ok(());
        }
        let occurrences = b.iter().filter(|&&x| x == partner).count();
        if occurrences == 1 {
            let k = b.iter().position(|&x| x == partner).unwrap();
            b.rotate_left(k);
            Ok(())
        } else {
            Err(MapError::RootAnchor(self.names[face].clone()))
        }
    }

    pub fn face_count(&self) -> usize {
        self.names.len()
    }

    pub fn face_name(&self, i: FaceIdx) -> &str {
        &self.names[i]
    }

    pub fn face_index(&self, name: &str) -> Option<FaceIdx> {
        self.index.get(name).copied()
    }

    pub fn root_neg(&self) -> FaceIdx {
        self.root_neg
    }

    pub fn root_pos(&self) -> FaceIdx {
        self.root_pos
    }

    /// B(e): the anchored border of face `e`.
    pub fn border(&self, e: FaceIdx) -> &[FaceIdx] {
        &self.borders[e]
    }

    /// B̄(e): the border with its first element appended again.
    pub fn extended_border_idx(&self, e: FaceIdx) -> Vec<FaceIdx> {
        let mut b = self.borders[e].clone();
        if let Some(&first) = b.first() {
            b.push(first);
        }
        b
    }

    /// B̄(e) by face name, as names.
    pub fn extended_border(&self, name: &str) -> Result<Vec<&str>, MapError> {
        let e = self
            .face_index(name)
            .ok_or_else(|| MapError::UnknownFace(name.to_string()))?;
        Ok(self
            .extended_border_idx(e)
            .into_iter()
            .map(|i| self.face_name(i))
            .collect())
    }

    /// Runs every invariant check and reports the findings.
    pub fn validate(&self) -> MapReport {
        let mut violations = Vec::new();
        for (i, name) in self.names.iter().enumerate() {
            if name.is_empty() {
                violations.push(MapViolation::EmptyFaceName);
            }
            if self.borders[i].len() < 2 {
                violations.push(MapViolation::BorderTooShort(name.clone()));
            }
            if self.borders[i].contains(&i) {
                violations.push(MapViolation::SelfNeighbor(name.clone()));
            }
        }
        if self.borders[self.root_neg].first() != Some(&self.root_pos) {
            violations.push(MapViolation::RootAnchor(self.names[self.root_neg].clone()));
        }
        if self.borders[self.root_pos].first() != Some(&self.root_neg) {
            violations.push(MapViolation::RootAnchor(self.names[self.root_pos].clone()));
        }

        // Factor reciprocity with multiplicities: the count of (a, b) in
        // B̄(c) must equal the count of (b, c) in B̄(a) for all faces.
        let mut pair_counts: BTreeMap<(FaceIdx, FaceIdx, FaceIdx), i64> = BTreeMap::new();
        for c in 0..self.face_count() {
            let ext = self.extended_border_idx(c);
            for w in ext.windows(2) {
                *pair_counts.entry((w[0], w[1], c)).or_insert(0) += 1;
            }
        }
        for (&(a, b, c), &n) in &pair_counts {
            let m = pair_counts.get(&(b, c, a)).copied().unwrap_or(0);
            if n > m {
                violations.push(MapViolation::Reciprocity {
                    a: self.names[a].clone(),
                    b: self.names[b].clone(),
                    c: self.names[c].clone(),
                });
            }
        }

        let total: usize = self.borders.iter().map(|b| b.len()).sum();
        let faces = self.face_count();
        let mut edges = 0;
        let mut vertices = 0;
        if !total.is_multiple_of(6) {
            violations.push(MapViolation::NotCubic { total });
        } else {
            edges = total / 2;
            vertices = total / 3;
            if faces as i64 - edges as i64 + vertices as i64 != 2 {
                violations.push(MapViolation::EulerCharacteristic { faces, edges, vertices });
            }
        }

        if !self.is_connected() {
            violations.push(MapViolation::Disconnected);
        }

        MapReport { violations, faces, edges, vertices }
    }

    fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.face_count()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(e) = queue.pop_front() {
            for &n in &self.borders[e] {
                if !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// True iff `a` and `b` share an edge.
    pub fn adjacent(&self, a: FaceIdx, b: FaceIdx) -> bool {
        self.borders[a].contains(&b)
    }

    /// Decides equivalence by anchored backtracking: the root faces must
    /// correspond with their anchored borders aligned, every other border
    /// must match under some rotation, and the face bijection must be
    /// consistent throughout.
    pub fn equivalent(&self, other: &RootedMap) -> Result<bool, MapError> {
        for (m, side) in [(self, "left"), (other, "right")] {
            let report = m.validate();
            if !report.is_ok() {
                return Err(MapError::InvalidMap(format!(
                    "{side} operand: {}",
                    report.violations[0]
                )));
            }
        }
        if self.face_count() != other.face_count() {
            return Ok(false);
        }
        let n = self.face_count();
        let mut fwd: Vec<Option<FaceIdx>> = vec![None; n];
        let mut bwd: Vec<Option<FaceIdx>> = vec![None; n];
        // Faces are matched in breadth-first order from the root pair so
        // every face examined already has an image.
        let order = {
            let mut order = Vec::new();
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([self.root_neg, self.root_pos]);
            seen[self.root_neg] = true;
            seen[self.root_pos] = true;
            while let Some(e) = queue.pop_front() {
                order.push(e);
                for &x in &self.borders[e] {
                    if !seen[x] {
                        seen[x] = true;
                        queue.push_back(x);
                    }
                }
            }
            order
        };
        fn assign(
            fwd: &mut [Option<FaceIdx>],
            bwd: &mut [Option<FaceIdx>],
            a: FaceIdx,
            b: FaceIdx,
            trail: &mut Vec<FaceIdx>,
        ) -> bool {
            match (fwd[a], bwd[b]) {
                (Some(x), _) if x == b => true,
                (None, None) => {
                    fwd[a] = Some(b);
                    bwd[b] = Some(a);
                    trail.push(a);
                    true
                }
                _ => false,
            }
        }
        fn try_rotation(
            left: &RootedMap,
            right: &RootedMap,
            order: &[FaceIdx],
            k: usize,
            rot: usize,
            fwd: &mut Vec<Option<FaceIdx>>,
            bwd: &mut Vec<Option<FaceIdx>>,
        ) -> bool {
            let e = order[k];
            let img = fwd[e].expect("face already matched");
            let be = &left.borders[e];
            let bi = &right.borders[img];
            if be.len() != bi.len() {
                return false;
            }
            let mut trail = Vec::new();
            let m = be.len();
            let ok = (0..m).all(|t| assign(fwd, bwd, be[t], bi[(t + rot) % m], &mut trail));
            if ok && search(left, right, order, k + 1, fwd, bwd) {
                return true;
            }
            for a in trail {
                let b = fwd[a].take().unwrap();
                bwd[b] = None;
            }
            false
        }
        fn search(
            left: &RootedMap,
            right: &RootedMap,
            order: &[FaceIdx],
            k: usize,
            fwd: &mut Vec<Option<FaceIdx>>,
            bwd: &mut Vec<Option<FaceIdx>>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let e = order[k];
            if fwd[e].is_none() {
                // Unreachable for validated maps: the search order only
                // contains faces discovered through matched borders.
                return false;
            }
            let rotations: Vec<usize> = if k < 2 {
                vec![0]
            } else {
                (0..right.borders[fwd[e].unwrap()].len()).collect()
            };
            rotations
                .into_iter()
                .any(|rot| try_rotation(left, right, order, k, rot, fwd, bwd))
        }
        let mut trail = Vec::new();
        if !assign(&mut fwd, &mut bwd, self.root_neg, other.root_neg, &mut trail)
            || !assign(&mut fwd, &mut bwd, self.root_pos, other.root_pos, &mut trail)
        {
            return Ok(false);
        }
        Ok(search(self, other, &order, 0, &mut fwd, &mut bwd))
    }

    /// Parses the line-based text format.
    pub fn parse(text: &str) -> Result<RootedMap, MapError> {
        let mut faces: Option<Vec<String>> = None;
        let mut borders: Vec<(String, Vec<String>)> = Vec::new();
        let mut root: Option<(String, String)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(k) => &raw[..k],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| MapError::Parse {
                line: lineno + 1,
                message: message.to_string(),
            };
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("faces") => {
                    if faces.is_some() {
                        return Err(err("duplicate `faces` line"));
                    }
                    faces = Some(tokens.map(str::to_string).collect());
                }
                Some("border") => {
                    let owner = tokens.next().ok_or_else(|| err("missing face id"))?;
                    let owner = owner
                        .strip_suffix(':')
                        .ok_or_else(|| err("expected `border <id>:`"))?;
                    borders.push((owner.to_string(), tokens.map(str::to_string).collect()));
                }
                Some("root") => {
                    let neg = tokens.next().ok_or_else(|| err("missing root faces"))?;
                    let pos = tokens.next().ok_or_else(|| err("missing root (+) face"))?;
                    if tokens.next().is_some() {
                        return Err(err("trailing tokens after root"));
                    }
                    root = Some((neg.to_string(), pos.to_string()));
                }
                Some(other) => {
                    return Err(MapError::Parse {
                        line: lineno + 1,
                        message: format!("unknown directive `{other}`"),
                    })
                }
                None => unreachable!(),
            }
        }
        let faces = faces.ok_or(MapError::Parse { line: 0, message: "missing `faces` line".into() })?;
        let (neg, pos) = root.ok_or(MapError::Parse { line: 0, message: "missing `root` line".into() })?;
        RootedMap::new(faces, borders, &neg, &pos)
    }
}

impl fmt::Display for RootedMap {
    /// The text format: `faces`, one `border` line per face in declaration
    /// order, then `root`, all single-space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "faces")?;
        for n in &self.names {
            write!(f, " {n}")?;
        }
        writeln!(f)?;
        for (i, b) in self.borders.iter().enumerate() {
            write!(f, "border {}:", self.names[i])?;
            for &x in b {
                write!(f, " {}", self.names[x])?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "root {} {}",
            self.names[self.root_neg], self.names[self.root_pos]
        )
    }
}

/// Returns the set of neighbors of `e` as a sorted, deduplicated list.
pub fn neighbor_set(map: &RootedMap, e: FaceIdx) -> Vec<FaceIdx> {
    let set: BTreeSet<FaceIdx> = map.border(e).iter().copied().collect();
    set.into_iter().collect()
}
