//! Layer decomposition of a rooted map: jasses, their connected components
//! (rovejasses), supports, and the ring maps around each component.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::EncodeError;
use crate::map::{FaceIdx, RootedMap};

/// One connected component of a layer.
#[derive(Debug, Clone)]
pub struct Rovejasse {
    pub level: usize,
    /// Cells of the component, sorted.
    pub cells: Vec<FaceIdx>,
    /// π(v): cells of the previous layer touching the component, sorted.
    pub support: Vec<FaceIdx>,
    /// c⁺ around the support ring (levels ≥ 2 only).
    pub ring_next: BTreeMap<FaceIdx, FaceIdx>,
    /// c⁻, the inverse of c⁺.
    pub ring_prev: BTreeMap<FaceIdx, FaceIdx>,
}

/// The full layer structure of a map.
#[derive(Debug, Clone)]
pub struct Layering {
    /// j_0 ..= j_m, each sorted.
    pub levels: Vec<Vec<FaceIdx>>,
    pub level_of: Vec<usize>,
    /// Face -> index into `rovs`.
    pub rov_of: Vec<usize>,
    pub rovs: Vec<Rovejasse>,
}

impl Layering {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn rov(&self, id: usize) -> &Rovejasse {
        &self.rovs[id]
    }
}

/// Splits the extended border of `a` against the cell set `v`: the terms of
/// `B̄(a)` lying in `v` must form one nonempty proper cyclic arc. Returns the
/// cells just before and just after the arc (`c⁺(a)`, `c⁻(a)`).
fn border_arc_ends(
    map: &RootedMap,
    a: FaceIdx,
    v: &BTreeSet<FaceIdx>,
) -> Result<(FaceIdx, FaceIdx), EncodeError> {
    let b = map.border(a);
    let n = b.len();
    let inside: Vec<bool> = b.iter().map(|x| v.contains(x)).collect();
    let count = inside.iter().filter(|&&x| x).count();
    if count == 0 || count == n {
        return Err(EncodeError::SupportSplit {
            face: map.face_name(a).to_string(),
        });
    }
    // Find the start of the arc: an inside position preceded by outside.
    let start = (0..n)
        .find(|&i| inside[i] && !inside[(i + n - 1) % n])
        .expect("proper arc has a start");
    // The arc must be contiguous.
    for k in 0..count {
        if !inside[(start + k) % n] {
            return Err(EncodeError::SupportSplit {
                face: map.face_name(a).to_string(),
            });
        }
    }
    let before = b[(start + n - 1) % n];
    let after = b[(start + count) % n];
    Ok((before, after))
}

/// Computes the layers from the root face outwards, the components of each
/// layer, their supports, and the ring maps; checks the containment and
/// factor-split properties along the way.
pub fn compute_layering(map: &RootedMap) -> Result<Layering, EncodeError> {
    let n = map.face_count();
    let root = map.root_neg();
    let mut level_of = vec![usize::MAX; n];
    level_of[root] = 0;
    let mut levels: Vec<Vec<FaceIdx>> = vec![vec![root]];
    let mut frontier = vec![root];
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for &e in &frontier {
            for &g in map.border(e) {
                if level_of[g] == usize::MAX {
                    next.insert(g);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let level = levels.len();
        for &g in &next {
            level_of[g] = level;
        }
        frontier = next.iter().copied().collect();
        levels.push(frontier.clone());
    }
    if level_of.contains(&usize::MAX) {
        return Err(EncodeError::Disconnected);
    }

    // Components of each layer under edge adjacency.
    let mut rov_of = vec![usize::MAX; n];
    let mut rovs: Vec<Rovejasse> = Vec::new();
    for (level, layer) in levels.iter().enumerate() {
        let layer_set: BTreeSet<FaceIdx> = layer.iter().copied().collect();
        for &seed in layer {
            if rov_of[seed] != usize::MAX {
                continue;
            }
            let id = rovs.len();
            let mut cells = Vec::new();
            let mut queue = VecDeque::from([seed]);
            rov_of[seed] = id;
            while let Some(e) = queue.pop_front() {
                cells.push(e);
                for &g in map.border(e) {
                    if layer_set.contains(&g) && rov_of[g] == usize::MAX {
                        rov_of[g] = id;
                        queue.push_back(g);
                    }
                }
            }
            cells.sort_unstable();
            let mut support = BTreeSet::new();
            if level > 0 {
                for &e in &cells {
                    for &g in map.border(e) {
                        if level_of[g] + 1 == level {
                            support.insert(g);
                        }
                    }
                }
            }
            rovs.push(Rovejasse {
                level,
                cells,
                support: support.into_iter().collect(),
                ring_next: BTreeMap::new(),
                ring_prev: BTreeMap::new(),
            });
        }
    }

    // Orthogonality: the support of a level-p component lies inside exactly
    // one component of level p − 1 (p ≥ 2), and the border of each support
    // cell meets the component along a single arc; the arc ends give the
    // ring maps.
    #[allow(clippy::needless_range_loop)]
    for id in 0..rovs.len() {
        let level = rovs[id].level;
        if level < 2 {
            continue;
        }
        let owners: BTreeSet<usize> = rovs[id].support.iter().map(|&s| rov_of[s]).collect();
        if owners.len() != 1 {
            return Err(EncodeError::SupportNotEnclosed {
                cells: rovs[id].cells.iter().map(|&c| map.face_name(c).to_string()).collect(),
            });
        }
        let vset: BTreeSet<FaceIdx> = rovs[id].cells.iter().copied().collect();
        let mut ring_next = BTreeMap::new();
        let mut ring_prev = BTreeMap::new();
        for &a in &rovs[id].support.clone() {
            let (before, after) = border_arc_ends(map, a, &vset)?;
            // Both arc ends must themselves be support cells.
            if !rovs[id].support.contains(&before) || !rovs[id].support.contains(&after) {
                return Err(EncodeError::SupportSplit {
                    face: map.face_name(a).to_string(),
                });
            }
            ring_next.insert(a, before);
            ring_prev.insert(a, after);
        }
        // c⁻ must invert c⁺ around the ring.
        for (&a, &b) in &ring_next {
            if ring_prev.get(&b) != Some(&a) {
                return Err(EncodeError::SupportSplit {
                    face: map.face_name(a).to_string(),
                });
            }
        }
        rovs[id].ring_next = ring_next;
        rovs[id].ring_prev = ring_prev;
    }

    Ok(Layering { levels, level_of, rov_of, rovs })
}
