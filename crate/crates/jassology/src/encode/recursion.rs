//! The layer recursion: walking each chain row, splitting cell borders into
//! reference and lateral blocks, discovering the next level's components,
//! and accumulating the row table and the ramification data.

use std::collections::{BTreeMap, BTreeSet};

use super::layering::Layering;
use super::{EncodeError, Item};
use crate::map::{FaceIdx, RootedMap};
use crate::seq::{Stratino, StratinoTerm};
use crate::word::PairKind;

/// Runs of consecutive cells, the unit the border splitters work with.
type Runs = Vec<Vec<FaceIdx>>;
/// A lateral projection: the raw, anchors-only, and expanded item rows.
type ChainRows = (Vec<Item>, Vec<Item>, Vec<Item>);
/// A trailing or leading projection also reports its chain cells for the
/// cross-sibling corner pass.
type EdgeChainRows = (Vec<Item>, Vec<Item>, Vec<Item>, Vec<FaceIdx>);

/// Per-face annotation produced by the recursion.
#[derive(Debug, Clone, Default)]
pub struct CellInfo {
    pub binome: Option<PairKind>,
    pub mediane: bool,
    pub phi: Option<FaceIdx>,
    pub gh: Option<(FaceIdx, FaceIdx)>,
    pub dh: Option<(FaceIdx, FaceIdx)>,
    pub h: Option<Vec<Item>>,
    pub t: Option<Vec<Item>>,
    pub s: Option<Vec<Item>>,
    pub g: Option<Vec<FaceIdx>>,
    pub dg: Option<Vec<Item>>,
}

/// Anchor data of one component, filled in as the recursion discovers it.
#[derive(Debug, Clone, Default)]
pub struct RovInfo {
    pub zouc: Option<FaceIdx>,
    pub baou: Option<(FaceIdx, FaceIdx)>,
    pub caouly: Option<(FaceIdx, FaceIdx)>,
    pub fan: Option<Vec<FaceIdx>>,
}

pub(super) struct Engine<'a> {
    map: &'a RootedMap,
    lay: &'a Layering,
    pub cells: Vec<CellInfo>,
    pub rovs: Vec<RovInfo>,
    pub rows: BTreeMap<Stratino, Vec<Item>>,
    pending: BTreeSet<Stratino>,
}

struct CellOut {
    h: Vec<Item>,
    t: Vec<Item>,
    s: Vec<Item>,
    g: Vec<FaceIdx>,
    dg: Vec<Item>,
    /// Cells of the trailing chain part, plus the border block ends needed
    /// to finish neighbor-dependent corner data in a second phase.
    sd_cells: Vec<FaceIdx>,
    sg_cells: Vec<FaceIdx>,
    delta_first: Option<FaceIdx>,
    delta_last: Option<FaceIdx>,
}

fn cells_of(items: &[Item]) -> Vec<FaceIdx> {
    items
        .iter()
        .filter_map(|i| match i {
            Item::Cell(c) => Some(*c),
            _ => None,
        })
        .collect()
}

impl<'a> Engine<'a> {
    pub(super) fn new(map: &'a RootedMap, lay: &'a Layering) -> Self {
        Engine {
            map,
            lay,
            cells: vec![CellInfo::default(); map.face_count()],
            rovs: vec![RovInfo::default(); lay.rovs.len()],
            rows: BTreeMap::new(),
            pending: BTreeSet::new(),
        }
    }

    fn name(&self, e: FaceIdx) -> String {
        self.map.face_name(e).to_string()
    }

    fn internal(&self, what: impl Into<String>) -> EncodeError {
        EncodeError::Structure(what.into())
    }

    /// Walks the support ring from `baou` and derives the exit pair and the
    /// fan per the médiane case split.
    fn derive_caouly_fan(
        &self,
        rov_id: usize,
        baou: (FaceIdx, FaceIdx),
        mediane: bool,
    ) -> Result<((FaceIdx, FaceIdx), Vec<FaceIdx>), EncodeError> {
        let rov = self.lay.rov(rov_id);
        let (a, b) = baou;
        let step = |x: FaceIdx| -> Result<FaceIdx, EncodeError> {
            rov.ring_next
                .get(&x)
                .copied()
                .ok_or_else(|| self.internal(format!("cell {} off the support ring", self.name(x))))
        };
        if step(a)? != b {
            return Err(self.internal(format!(
                "entry pair ({}, {}) is not a ring step",
                self.name(a),
                self.name(b)
            )));
        }
        if step(b)? == a {
            if rov.support.len() != 2 {
                return Err(self.internal("two-cell ring with extra support".to_string()));
            }
            return Ok(((b, a), Vec::new()));
        }
        let mut ring = Vec::new();
        let mut cur = step(b)?;
        while cur != a {
            if ring.contains(&cur) || ring.len() > rov.support.len() {
                return Err(self.internal("support ring does not close".to_string()));
            }
            ring.push(cur);
            cur = step(cur)?;
        }
        if ring.len() + 2 != rov.support.len() {
            return Err(self.internal("support ring misses cells".to_string()));
        }
        let r = ring.len();
        if !mediane {
            Ok(((ring[r - 1], a), ring))
        } else if r == 1 {
            Ok(((b, ring[0]), Vec::new()))
        } else {
            Ok(((ring[r - 2], ring[r - 1]), ring[..r - 1].to_vec()))
        }
    }

    fn set_binome(
        &mut self,
        e: FaceIdx,
        binome: PairKind,
        mediane: bool,
        phi: Option<FaceIdx>,
    ) -> Result<(), EncodeError> {
        if self.cells[e].binome.is_some() {
            return Err(self.internal(format!("cell {} annotated twice", self.name(e))));
        }
        self.cells[e].binome = Some(binome);
        self.cells[e].mediane = mediane;
        self.cells[e].phi = phi;
        Ok(())
    }

    fn set_gh(&mut self, e: FaceIdx, gh: (FaceIdx, FaceIdx)) -> Result<(), EncodeError> {
        if self.cells[e].gh.is_some() {
            return Err(self.internal(format!("gh of {} assigned twice", self.name(e))));
        }
        self.cells[e].gh = Some(gh);
        Ok(())
    }

    fn set_dh(&mut self, e: FaceIdx, dh: (FaceIdx, FaceIdx)) -> Result<(), EncodeError> {
        if self.cells[e].dh.is_some() {
            return Err(self.internal(format!("dh of {} assigned twice", self.name(e))));
        }
        self.cells[e].dh = Some(dh);
        Ok(())
    }

    /// Registers a newly found component: anchors, zouc annotation, fan
    /// annotations with their parents read off the ring.
    #[allow(clippy::too_many_arguments)]
    fn discover(
        &mut self,
        block: &[FaceIdx],
        parent_level: usize,
        zouc: FaceIdx,
        baou: (FaceIdx, FaceIdx),
        binome: PairKind,
        mediane: bool,
        phi: FaceIdx,
    ) -> Result<usize, EncodeError> {
        let id = self.lay.rov_of[block[0]];
        let rov = self.lay.rov(id);
        if rov.level != parent_level + 1 {
            return Err(self.internal(format!(
                "block at {} is not one level deeper",
                self.name(block[0])
            )));
        }
        for &c in block {
            if self.lay.rov_of[c] != id {
                return Err(self.internal(format!(
                    "block cells {} and {} lie in different components",
                    self.name(block[0]),
                    self.name(c)
                )));
            }
        }
        if self.rovs[id].zouc.is_some() {
            return Err(self.internal(format!(
                "component of {} anchored twice",
                self.name(block[0])
            )));
        }
        let (caouly, fan) = self.derive_caouly_fan(id, baou, mediane)?;
        self.rovs[id] = RovInfo {
            zouc: Some(zouc),
            baou: Some(baou),
            caouly: Some(caouly),
            fan: Some(fan.clone()),
        };
        self.set_binome(zouc, binome, mediane, Some(phi))?;
        // Fan cells hang off the component cell their shared edge points to.
        for &f in &fan {
            let prev = self.lay.rov(id).ring_prev[&f];
            let owner = self.fan_owner(id, prev, f)?;
            self.set_binome(f, PairKind::Ln, false, Some(owner))?;
        }
        Ok(id)
    }

    /// The unique component cell whose border contains the consecutive pair
    /// `(before, f)`.
    fn fan_owner(&self, rov_id: usize, before: FaceIdx, f: FaceIdx) -> Result<FaceIdx, EncodeError> {
        let mut owner = None;
        for &z in &self.lay.rov(rov_id).cells {
            let ext = self.map.extended_border_idx(z);
            if ext.windows(2).any(|w| w == [before, f]) {
                if owner.is_some() {
                    return Err(self.internal(format!(
                        "fan cell {} has two owners",
                        self.name(f)
                    )));
                }
                owner = Some(z);
            }
        }
        owner.ok_or_else(|| self.internal(format!("fan cell {} has no owner", self.name(f))))
    }

    /// Rotates the cyclic border of `e` so that `gh` is its leading pair and
    /// returns the extended rotation. Several match positions are fine only
    /// when the border is periodic and all rotations coincide.
    fn rotate_border(&self, e: FaceIdx, gh: (FaceIdx, FaceIdx)) -> Result<Vec<FaceIdx>, EncodeError> {
        let b = self.map.border(e);
        let n = b.len();
        let mut found: Option<Vec<FaceIdx>> = None;
        for k in 0..n {
            if b[k] == gh.0 && b[(k + 1) % n] == gh.1 {
                let mut rot: Vec<FaceIdx> = Vec::with_capacity(n + 1);
                rot.extend_from_slice(&b[k..]);
                rot.extend_from_slice(&b[..k]);
                rot.push(b[k]);
                match &found {
                    None => found = Some(rot),
                    Some(prev) if *prev == rot => {}
                    Some(_) => {
                        return Err(EncodeError::AmbiguousRotation {
                            face: self.name(e),
                        })
                    }
                }
            }
        }
        found.ok_or_else(|| {
            self.internal(format!(
                "pair ({}, {}) absent from the border of {}",
                self.name(gh.0),
                self.name(gh.1),
                self.name(e)
            ))
        })
    }

    /// Cuts the extended rotation after the unique occurrence of `dh`.
    fn cut_at_dh(
        &self,
        e: FaceIdx,
        rotated: &[FaceIdx],
        dh: (FaceIdx, FaceIdx),
    ) -> Result<Vec<FaceIdx>, EncodeError> {
        let mut cut = None;
        for k in 2..rotated.len() {
            if rotated[k - 1] == dh.0 && rotated[k] == dh.1 {
                if cut.is_some() {
                    return Err(EncodeError::AmbiguousRotation { face: self.name(e) });
                }
                cut = Some(k);
            }
        }
        let k = cut.ok_or_else(|| {
            self.internal(format!(
                "pair ({}, {}) absent from the rotated border of {}",
                self.name(dh.0),
                self.name(dh.1),
                self.name(e)
            ))
        })?;
        Ok(rotated[..=k].to_vec())
    }

    /// Splits a walk into maximal blocks alternating outside/inside the
    /// reference set, returning (inside runs, outside runs, starts_inside).
    fn alternate(walk: &[FaceIdx], reference: &BTreeSet<FaceIdx>) -> (Runs, Runs, bool) {
        let mut inside_runs = Vec::new();
        let mut outside_runs = Vec::new();
        let mut idx = 0;
        let starts_inside = walk.first().map(|f| reference.contains(f)).unwrap_or(false);
        let mut expect_inside = starts_inside;
        while idx < walk.len() {
            let mut run = Vec::new();
            while idx < walk.len() && reference.contains(&walk[idx]) == expect_inside {
                run.push(walk[idx]);
                idx += 1;
            }
            if expect_inside {
                inside_runs.push(run);
            } else {
                outside_runs.push(run);
            }
            expect_inside = !expect_inside;
        }
        (inside_runs, outside_runs, starts_inside)
    }

    /// Projects one reference block between the component anchors into the
    /// crossing marks and interior cells.
    fn project_delta(
        &self,
        block: &[FaceIdx],
        rov_id: usize,
        suppress: bool,
    ) -> Result<Vec<Item>, EncodeError> {
        if suppress {
            return Ok(Vec::new());
        }
        let baou = self.rovs[rov_id]
            .baou
            .ok_or_else(|| self.internal("missing entry pair".to_string()))?;
        let caouly = self.rovs[rov_id]
            .caouly
            .ok_or_else(|| self.internal("missing exit pair".to_string()))?;
        let u = block.len().saturating_sub(1);
        let starts = block.len() >= 2 && (block[0], block[1]) == baou;
        let ends = block.len() >= 2 && (block[u - 1], block[u]) == caouly;
        let cells = |xs: &[FaceIdx]| xs.iter().map(|&c| Item::Cell(c)).collect::<Vec<_>>();
        Ok(match (starts, ends) {
            (true, true) => {
                let mut out = vec![Item::Ba];
                out.extend(cells(&block[2..u]));
                out.push(Item::Ca);
                out
            }
            (true, false) => {
                let mut out = vec![Item::Ba];
                out.extend(cells(&block[2..]));
                out
            }
            (false, true) => {
                let mut out = cells(&block[1..u]);
                out.push(Item::Ca);
                out
            }
            (false, false) => cells(&block[1..]),
        })
    }

    /// Splits a lateral block into chain runs (inside the cell's own
    /// component) and deeper-component runs.
    fn chain_split(&self, e: FaceIdx, block: &[FaceIdx]) -> (Runs, Runs, bool) {
        let own: BTreeSet<FaceIdx> = self.lay.rov(self.lay.rov_of[e]).cells.iter().copied().collect();
        Self::alternate(block, &own)
    }

    /// Common chain corner assignment: inner cells anchor on their list
    /// neighbors through their parents.
    fn assign_inner_corners(&mut self, cs: &[FaceIdx]) -> Result<(), EncodeError> {
        for s in 1..cs.len() {
            let phi = self.cells[cs[s]]
                .phi
                .ok_or_else(|| self.internal(format!("{} has no parent yet", self.name(cs[s]))))?;
            self.set_gh(cs[s], (phi, cs[s - 1]))?;
        }
        for s in 0..cs.len().saturating_sub(1) {
            let phi = self.cells[cs[s + 1]]
                .phi
                .ok_or_else(|| self.internal(format!("{} has no parent yet", self.name(cs[s + 1]))))?;
            self.set_dh(cs[s], (cs[s + 1], phi))?;
        }
        Ok(())
    }

    /// Lateral block between two reference blocks (the `R_k` case): fresh
    /// chain with zouc/mark/terminator structure.
    fn project_lateral(
        &mut self,
        e: FaceIdx,
        block: &[FaceIdx],
        a_before: FaceIdx,
        b_after: FaceIdx,
    ) -> Result<ChainRows, EncodeError> {
        let (s_runs, t_runs, starts_inside) = self.chain_split(e, block);
        if !starts_inside || s_runs.len() != t_runs.len() + 1 || s_runs.iter().any(|r| r.is_empty())
        {
            return Err(self.internal(format!(
                "lateral block of {} does not alternate",
                self.name(e)
            )));
        }
        let level = self.lay.level_of[e];
        let u = t_runs.len();
        let mut r_items = Vec::new();
        let mut t_items = Vec::new();
        let mut s_items = Vec::new();
        let mut chain_cells: Vec<FaceIdx> = Vec::new();
        for &c in &s_runs[0] {
            self.set_binome(c, PairKind::Sn, false, Some(e))?;
        }
        r_items.extend(s_runs[0].iter().map(|&c| Item::Cell(c)));
        s_items.extend(s_runs[0].iter().map(|&c| Item::Cell(c)));
        chain_cells.extend(&s_runs[0]);
        for q in 1..=u {
            let t = &t_runs[q - 1];
            let zouc = t[0];
            let baou = (e, *s_runs[q - 1].last().expect("nonempty run"));
            let id = self.discover(t, level, zouc, baou, PairKind::Tc, false, e)?;
            let caouly = self.rovs[id].caouly.expect("just set");
            if caouly != (s_runs[q][0], e) {
                return Err(self.internal(format!(
                    "exit pair of the component at {} does not meet its chain",
                    self.name(zouc)
                )));
            }
            let fan = self.rovs[id].fan.clone().expect("just set");
            let tail = &s_runs[q][1..];
            for &c in tail {
                self.set_binome(c, PairKind::Sn, false, Some(e))?;
            }
            r_items.push(Item::Cell(zouc));
            r_items.push(Item::Cu);
            r_items.extend(tail.iter().map(|&c| Item::Cell(c)));
            t_items.push(Item::Cell(zouc));
            t_items.push(Item::Cu);
            s_items.extend(fan.iter().map(|&c| Item::Cell(c)));
            s_items.extend(tail.iter().map(|&c| Item::Cell(c)));
            chain_cells.extend(fan.iter());
            chain_cells.extend(tail.iter());
        }
        r_items.push(Item::Ch);
        s_items.push(Item::Ch);
        // Corner data for every cell of the block chain.
        let phi0 = self.cells[chain_cells[0]].phi.expect("assigned above");
        self.set_gh(chain_cells[0], (phi0, a_before))?;
        self.set_dh(*chain_cells.last().expect("nonempty"), (b_after, e))?;
        self.assign_inner_corners(&chain_cells)?;
        Ok((r_items, t_items, s_items))
    }

    /// Trailing lateral block (`Rd`): like a fresh chain but without the
    /// terminator; its last run may be empty, sharing a médiane zouc with
    /// the next sibling.
    fn project_rd(
        &mut self,
        e: FaceIdx,
        block: &[FaceIdx],
        next_cell: FaceIdx,
        a_before: FaceIdx,
    ) -> Result<EdgeChainRows, EncodeError> {
        let (mut s_runs, t_runs, starts_inside) = self.chain_split(e, block);
        if !starts_inside {
            return Err(self.internal(format!(
                "trailing block of {} starts outside its component",
                self.name(e)
            )));
        }
        let trailing_empty = s_runs.len() == t_runs.len();
        if trailing_empty {
            s_runs.push(Vec::new());
        }
        if s_runs.len() != t_runs.len() + 1
            || s_runs[..s_runs.len() - 1].iter().any(|r| r.is_empty())
        {
            return Err(self.internal(format!(
                "trailing block of {} does not alternate",
                self.name(e)
            )));
        }
        let level = self.lay.level_of[e];
        let u = t_runs.len();
        let mediane_case = trailing_empty;
        let v = if mediane_case { u - 1 } else { u };
        let mut rd = Vec::new();
        let mut td = Vec::new();
        let mut sd = Vec::new();
        let mut chain_cells: Vec<FaceIdx> = Vec::new();
        for &c in &s_runs[0] {
            self.set_binome(c, PairKind::Sn, false, Some(e))?;
        }
        rd.extend(s_runs[0].iter().map(|&c| Item::Cell(c)));
        sd.extend(s_runs[0].iter().map(|&c| Item::Cell(c)));
        chain_cells.extend(&s_runs[0]);
        for q in 1..=v {
            let t = &t_runs[q - 1];
            let zouc = t[0];
            let baou = (e, *s_runs[q - 1].last().expect("nonempty run"));
            let id = self.discover(t, level, zouc, baou, PairKind::Tc, false, e)?;
            if self.rovs[id].caouly != Some((s_runs[q][0], e)) {
                return Err(self.internal(format!(
                    "exit pair of the component at {} does not meet its chain",
                    self.name(zouc)
                )));
            }
            let fan = self.rovs[id].fan.clone().expect("just set");
            let tail = &s_runs[q][1..];
            for &c in tail {
                self.set_binome(c, PairKind::Sn, false, Some(e))?;
            }
            rd.push(Item::Cell(zouc));
            rd.push(Item::Cu);
            rd.extend(tail.iter().map(|&c| Item::Cell(c)));
            td.push(Item::Cell(zouc));
            td.push(Item::Cu);
            sd.extend(fan.iter().map(|&c| Item::Cell(c)));
            sd.extend(tail.iter().map(|&c| Item::Cell(c)));
            chain_cells.extend(fan.iter());
            chain_cells.extend(tail.iter());
        }
        if mediane_case {
            // The shared zouc sits last in its run, touching both siblings.
            let t = &t_runs[u - 1];
            let zouc = *t.last().expect("nonempty run");
            let baou = (e, *s_runs[u - 1].last().expect("nonempty run"));
            let id = self.discover(t, level, zouc, baou, PairKind::Tc, true, e)?;
            let rov = self.lay.rov(id);
            let expected = (rov.ring_prev[&next_cell], next_cell);
            if self.rovs[id].caouly != Some(expected) {
                return Err(self.internal(format!(
                    "médiane exit pair mismatch at {}",
                    self.name(zouc)
                )));
            }
            let fan = self.rovs[id].fan.clone().expect("just set");
            rd.push(Item::Cell(zouc));
            td.push(Item::Cell(zouc));
            sd.extend(fan.iter().map(|&c| Item::Cell(c)));
            chain_cells.extend(fan.iter());
        }
        if let Some(&first) = chain_cells.first() {
            let phi0 = self.cells[first].phi.expect("assigned above");
            self.set_gh(first, (phi0, a_before))?;
            self.assign_inner_corners(&chain_cells)?;
        }
        // dh of the last chain cell depends on the next sibling's leading
        // chain; deferred to the second phase.
        Ok((rd, td, sd, chain_cells))
    }

    /// Leading lateral block (`Rg`): continues the previous sibling's chain;
    /// its first run may be empty when it completes a médiane zouc.
    fn project_rg(
        &mut self,
        e: FaceIdx,
        block: &[FaceIdx],
        b_after: FaceIdx,
    ) -> Result<EdgeChainRows, EncodeError> {
        let (mut s_runs, t_runs, starts_inside) = self.chain_split(e, block);
        if !starts_inside {
            s_runs.insert(0, Vec::new());
        }
        if s_runs.len() != t_runs.len() + 1
            || s_runs[1..].iter().any(|r| r.is_empty())
            || block.last().map(|f| self.lay.rov_of[*f]) != Some(self.lay.rov_of[e])
        {
            return Err(self.internal(format!(
                "leading block of {} does not alternate",
                self.name(e)
            )));
        }
        let level = self.lay.level_of[e];
        let u = t_runs.len();
        let shared_case = s_runs[0].is_empty();
        let mut rg = Vec::new();
        let mut tg = Vec::new();
        let mut sg = Vec::new();
        let mut chain_cells: Vec<FaceIdx> = Vec::new();
        let first_new = if shared_case {
            // The first deep run belongs to the médiane component anchored
            // from the previous sibling; its zouc is completed here.
            let id = self.lay.rov_of[t_runs[0][0]];
            let zouc = self.rovs[id].zouc.ok_or_else(|| {
                self.internal(format!(
                    "chain of {} completes an unanchored component",
                    self.name(e)
                ))
            })?;
            if !self.cells[zouc].mediane {
                return Err(self.internal(format!(
                    "completed zouc {} is not médiane",
                    self.name(zouc)
                )));
            }
            rg.push(Item::Cu);
            tg.push(Item::Cu);
            2
        } else {
            1
        };
        // Tail of the first present run: its head continues the previous
        // sibling's chain and was annotated there.
        let q0 = if shared_case { 1 } else { 0 };
        let tail0 = &s_runs[q0][1..];
        for &c in tail0 {
            self.set_binome(c, PairKind::Sn, false, Some(e))?;
        }
        rg.extend(tail0.iter().map(|&c| Item::Cell(c)));
        sg.extend(tail0.iter().map(|&c| Item::Cell(c)));
        chain_cells.extend(tail0.iter());
        for q in first_new..=u {
            let t = &t_runs[q - 1];
            let zouc = t[0];
            let baou = (e, *s_runs[q - 1].last().expect("nonempty by case"));
            let id = self.discover(t, level, zouc, baou, PairKind::Tc, false, e)?;
            if self.rovs[id].caouly != Some((s_runs[q][0], e)) {
                return Err(self.internal(format!(
                    "exit pair of the component at {} does not meet its chain",
                    self.name(zouc)
                )));
            }
            let fan = self.rovs[id].fan.clone().expect("just set");
            let tail = &s_runs[q][1..];
            for &c in tail {
                self.set_binome(c, PairKind::Sn, false, Some(e))?;
            }
            rg.push(Item::Cell(zouc));
            rg.push(Item::Cu);
            rg.extend(tail.iter().map(|&c| Item::Cell(c)));
            tg.push(Item::Cell(zouc));
            tg.push(Item::Cu);
            sg.extend(fan.iter().map(|&c| Item::Cell(c)));
            sg.extend(tail.iter().map(|&c| Item::Cell(c)));
            chain_cells.extend(fan.iter());
            chain_cells.extend(tail.iter());
        }
        rg.push(Item::Ch);
        sg.push(Item::Ch);
        if let Some(&last) = chain_cells.last() {
            self.set_dh(last, (b_after, e))?;
            self.assign_inner_corners(&chain_cells)?;
        }
        // gh of the first chain cell depends on the previous sibling's
        // trailing chain; deferred to the second phase.
        Ok((rg, tg, sg, chain_cells))
    }

    /// Far block past the trailing chain (`G`): repeated visits of the next
    /// sibling enclosing pinched two-cell components.
    fn project_g(
        &mut self,
        e: FaceIdx,
        block: &[FaceIdx],
        next_cell: FaceIdx,
    ) -> Result<(Vec<FaceIdx>, Vec<Item>), EncodeError> {
        if block.len() <= 1 {
            return Ok((Vec::new(), Vec::new()));
        }
        if block.first() != Some(&next_cell) || block.last() != Some(&next_cell) {
            return Err(self.internal(format!(
                "far block of {} is not bracketed by its next sibling",
                self.name(e)
            )));
        }
        let level = self.lay.level_of[e];
        let mut g = Vec::new();
        let mut dg = Vec::new();
        let mut run = Vec::new();
        for &c in &block[1..] {
            if c == next_cell {
                if run.is_empty() {
                    return Err(self.internal(format!(
                        "empty pinched block next to {}",
                        self.name(e)
                    )));
                }
                let zouc = run[0];
                let id = self.discover(&run, level, zouc, (e, next_cell), PairKind::Tg, false, e)?;
                if self.rovs[id].caouly != Some((next_cell, e))
                    || self.rovs[id].fan.as_deref() != Some(&[])
                {
                    return Err(self.internal(format!(
                        "pinched component at {} is not a two-cell ring",
                        self.name(zouc)
                    )));
                }
                g.push(zouc);
                dg.push(Item::Ba);
                dg.push(Item::Ca);
                run = Vec::new();
            } else {
                run.push(c);
            }
        }
        if !run.is_empty() {
            return Err(self.internal(format!(
                "far block of {} does not close",
                self.name(e)
            )));
        }
        Ok((g, dg))
    }

    /// First pass over a freshly anchored zouc row cell.
    fn pass_a(&mut self, e: FaceIdx) -> Result<CellOut, EncodeError> {
        let rov_id = self.lay.rov_of[e];
        let level = self.lay.level_of[e];
        let mediane = self.cells[e].mediane;
        let gh = if level == 1 {
            let b = self.map.border(e);
            if b[0] != self.map.root_neg() {
                return Err(self.internal("root border is not anchored".to_string()));
            }
            (b[0], b[1])
        } else {
            let baou = self.rovs[rov_id]
                .baou
                .ok_or_else(|| self.internal(format!("{} has no entry pair", self.name(e))))?;
            if !mediane {
                baou
            } else {
                let caouly = self.rovs[rov_id].caouly.expect("derived with baou");
                (caouly.1, baou.0)
            }
        };
        self.set_gh(e, gh)?;
        let rotated = self.rotate_border(e, gh)?;
        self.set_dh(e, (rotated[rotated.len() - 2], rotated[rotated.len() - 1]))?;
        let reference: BTreeSet<FaceIdx> = if level == 1 {
            [self.map.root_neg()].into()
        } else {
            self.lay.rov(rov_id).support.iter().copied().collect()
        };
        let mut walk: &[FaceIdx] = &rotated;
        if mediane {
            let expect = self.rovs[rov_id].caouly.expect("derived").1;
            if walk.first() != Some(&expect) {
                return Err(self.internal(format!(
                    "médiane border of {} does not start at the exit pair",
                    self.name(e)
                )));
            }
            walk = &walk[1..];
        }
        let (d_runs, r_runs, starts_inside) = Self::alternate(walk, &reference);
        if !starts_inside
            || d_runs.len() != r_runs.len() + 1
            || d_runs.iter().any(|r| r.is_empty())
            || r_runs.iter().any(|r| r.is_empty())
        {
            return Err(self.internal(format!(
                "anchored border of {} does not alternate with its support",
                self.name(e)
            )));
        }
        let suppress = level == 1;
        let mut h = Vec::new();
        let mut t_items = Vec::new();
        let mut s_items = Vec::new();
        for k in 0..d_runs.len() {
            h.extend(self.project_delta(&d_runs[k], rov_id, suppress)?);
            if k < r_runs.len() {
                let a_before = *d_runs[k].last().expect("nonempty");
                let b_after = d_runs[k + 1][0];
                let (r, t, s) = self.project_lateral(e, &r_runs[k], a_before, b_after)?;
                h.extend(r);
                t_items.extend(t);
                s_items.extend(s);
            }
        }
        Ok(CellOut {
            h,
            t: t_items,
            s: s_items,
            g: Vec::new(),
            dg: Vec::new(),
            sd_cells: Vec::new(),
            sg_cells: Vec::new(),
            delta_first: None,
            delta_last: None,
        })
    }

    /// Later passes over a chain row cell; needs its row neighbors.
    fn pass_b(
        &mut self,
        e: FaceIdx,
        prev_cell: Option<FaceIdx>,
        next_cell: Option<FaceIdx>,
    ) -> Result<CellOut, EncodeError> {
        let rov_id = self.lay.rov_of[e];
        let level = self.lay.level_of[e];
        let gh = self.cells[e]
            .gh
            .ok_or_else(|| self.internal(format!("{} has no leading pair", self.name(e))))?;
        let dh = self.cells[e]
            .dh
            .ok_or_else(|| self.internal(format!("{} has no trailing pair", self.name(e))))?;
        let rotated = self.rotate_border(e, gh)?;
        let walk = self.cut_at_dh(e, &rotated, dh)?;
        let reference: BTreeSet<FaceIdx> = self.lay.levels[level - 1].iter().copied().collect();
        let (d_runs, r_runs, starts_inside) = Self::alternate(&walk, &reference);
        if starts_inside
            || r_runs.len() != d_runs.len() + 1
            || d_runs.is_empty()
            || d_runs.iter().any(|r| r.is_empty())
            || r_runs.iter().any(|r| r.is_empty())
        {
            return Err(self.internal(format!(
                "cut border of {} does not alternate with the previous layer",
                self.name(e)
            )));
        }
        let xi_g = &r_runs[0];
        let xi_d = &r_runs[r_runs.len() - 1];
        let inner_r = &r_runs[1..r_runs.len() - 1];

        // Leading-block split into the continuation chain.
        let xi_rg: Vec<FaceIdx> = if xi_g.len() == 1 {
            Vec::new()
        } else {
            let prev = prev_cell.ok_or_else(|| {
                self.internal(format!("{} continues a chain with no left sibling", self.name(e)))
            })?;
            if xi_g[1] != prev {
                return Err(self.internal(format!(
                    "left context of {} is not its sibling",
                    self.name(e)
                )));
            }
            let last = xi_g
                .iter()
                .rposition(|&c| c == prev)
                .expect("present at index 1");
            xi_g[last + 1..].to_vec()
        };
        // Trailing-block split into the continuation chain and the far part.
        let (xi_rd, xi_gg): (Vec<FaceIdx>, Vec<FaceIdx>) = if xi_d.len() == 1 {
            (Vec::new(), Vec::new())
        } else {
            let next = next_cell.ok_or_else(|| {
                self.internal(format!("{} opens a chain with no right sibling", self.name(e)))
            })?;
            let s = xi_d.len();
            if xi_d[s - 2] != next {
                return Err(self.internal(format!(
                    "right context of {} is not its sibling",
                    self.name(e)
                )));
            }
            let first = xi_d
                .iter()
                .position(|&c| c == next)
                .expect("present at index s-2");
            (xi_d[..first].to_vec(), xi_d[first..s - 1].to_vec())
        };

        let suppress = level == 1;
        let mut h = Vec::new();
        let mut t_items = Vec::new();
        let mut s_items = Vec::new();
        let delta_first = d_runs[0].first().copied();
        let delta_last = d_runs[d_runs.len() - 1].last().copied();

        let mut sg_cells = Vec::new();
        if !xi_rg.is_empty() {
            let b_after = d_runs[0][0];
            let (rg, tg, sg, cs) = self.project_rg(e, &xi_rg, b_after)?;
            h.extend(rg);
            t_items.extend(tg);
            s_items.extend(sg);
            sg_cells = cs;
        }
        for k in 0..d_runs.len() {
            h.extend(self.project_delta(&d_runs[k], rov_id, suppress)?);
            if k < inner_r.len() {
                let a_before = *d_runs[k].last().expect("nonempty");
                let b_after = d_runs[k + 1][0];
                let (r, t, s) = self.project_lateral(e, &inner_r[k], a_before, b_after)?;
                h.extend(r);
                t_items.extend(t);
                s_items.extend(s);
            }
        }
        let mut sd_cells = Vec::new();
        if !xi_rd.is_empty() {
            let a_before = *d_runs[d_runs.len() - 1].last().expect("nonempty");
            let next = next_cell.expect("checked above");
            let (rd, td, sd, cs) = self.project_rd(e, &xi_rd, next, a_before)?;
            h.extend(rd);
            t_items.extend(td);
            s_items.extend(sd);
            sd_cells = cs;
        }
        let (g, dg) = if xi_gg.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            self.project_g(e, &xi_gg, next_cell.expect("checked above"))?
        };
        h.extend(g.iter().map(|&z| Item::Cell(z)));
        Ok(CellOut {
            h,
            t: t_items,
            s: s_items,
            g,
            dg,
            sd_cells,
            sg_cells,
            delta_first,
            delta_last,
        })
    }

    /// Row-level structure checks: distinct same-layer cells, fresh against
    /// the previous row, chain contacts matching the separators.
    fn check_row(
        &self,
        key: &Stratino,
        items: &[Item],
        cells: &[FaceIdx],
        unitary: bool,
        prev_row: Option<&Vec<Item>>,
    ) -> Result<(), EncodeError> {
        let fail = |what: &str| EncodeError::ChainProperty {
            row: key.to_string(),
            what: what.to_string(),
        };
        let mut seen = BTreeSet::new();
        for &c in cells {
            if !seen.insert(c) {
                return Err(fail("repeated cell"));
            }
        }
        let level = self.lay.level_of[cells[0]];
        if cells.iter().any(|&c| self.lay.level_of[c] != level) {
            return Err(fail("cells from different layers"));
        }
        if let Some(prev) = prev_row {
            let prev_cells: BTreeSet<FaceIdx> = cells_of(prev).into_iter().collect();
            if cells.iter().any(|c| prev_cells.contains(c)) {
                return Err(fail("cell repeats the previous row"));
            }
        }
        if unitary {
            for (i, &a) in cells.iter().enumerate() {
                for &b in &cells[i + 1..] {
                    if self.map.adjacent(a, b) {
                        return Err(fail("anchored cells touch"));
                    }
                }
            }
            return Ok(());
        }
        // Non-consecutive cells never touch; consecutive cells touch exactly
        // when no break mark separates them.
        for (i, &a) in cells.iter().enumerate() {
            for (j, &b) in cells.iter().enumerate().skip(i + 2) {
                let _ = j;
                if self.map.adjacent(a, b) {
                    return Err(fail("distant chain cells touch"));
                }
            }
        }
        let mut cell_positions = Vec::new();
        for (idx, item) in items.iter().enumerate() {
            if matches!(item, Item::Cell(_)) {
                cell_positions.push(idx);
            }
        }
        for w in cell_positions.windows(2) {
            let (i, j) = (w[0], w[1]);
            let (a, b) = match (&items[i], &items[j]) {
                (Item::Cell(a), Item::Cell(b)) => (*a, *b),
                _ => unreachable!(),
            };
            let separated = items[i + 1..j].iter().any(|x| matches!(x, Item::Ch));
            if separated == self.map.adjacent(a, b) {
                return Err(fail("chain contact does not match its separators"));
            }
        }
        Ok(())
    }

    /// Processes the whole family above the unitary row `(X, 1)`.
    fn process_family(&mut self, prefix: &Stratino) -> Result<(), EncodeError> {
        let guard = self.map.face_count() as u32 + 1;
        let mut n = 1u32;
        loop {
            if n > guard {
                return Err(self.internal("row iteration does not terminate".to_string()));
            }
            let key = prefix.child(StratinoTerm::plain(n));
            let items = match self.rows.get(&key) {
                Some(items) => items.clone(),
                None => break,
            };
            let cells = cells_of(&items);
            if cells.is_empty() {
                break;
            }
            let prev_key = if n >= 2 {
                Some(prefix.child(StratinoTerm::plain(n - 1)))
            } else {
                None
            };
            let prev_row = prev_key.as_ref().and_then(|k| self.rows.get(k)).cloned();
            self.check_row(&key, &items, &cells, n == 1, prev_row.as_ref())?;

            let outs: Vec<CellOut> = if n == 1 {
                let mut outs = Vec::new();
                for &e in &cells {
                    if self.rovs[self.lay.rov_of[e]].zouc != Some(e) && self.lay.level_of[e] != 1 {
                        return Err(self.internal(format!(
                            "row cell {} is not its component anchor",
                            self.name(e)
                        )));
                    }
                    outs.push(self.pass_a(e)?);
                }
                outs
            } else {
                let mut outs = Vec::new();
                for (t, &e) in cells.iter().enumerate() {
                    let prev = if t > 0 { Some(cells[t - 1]) } else { None };
                    let next = cells.get(t + 1).copied();
                    outs.push(self.pass_b(e, prev, next)?);
                }
                // Second phase: corner data across sibling chain junctions.
                // The chain rule extends over the junction: a cell anchors on
                // its neighbor in the merged chain through that neighbor's
                // parent, falling back to the sibling's support block when
                // the neighboring part carries no cells.
                for t in 0..cells.len() {
                    if let Some(&last) = outs[t].sd_cells.last() {
                        let dh = match outs[t + 1].sg_cells.first() {
                            Some(&b) => {
                                let phi = self.cells[b].phi.ok_or_else(|| {
                                    self.internal(format!("{} has no parent yet", self.name(b)))
                                })?;
                                (b, phi)
                            }
                            None => {
                                let b = outs[t + 1].delta_first.ok_or_else(|| {
                                    self.internal(
                                        "no landing cell for a trailing chain".to_string(),
                                    )
                                })?;
                                (b, cells[t + 1])
                            }
                        };
                        self.set_dh(last, dh)?;
                    }
                    if let Some(&first) = outs[t].sg_cells.first() {
                        let a = outs[t - 1]
                            .sd_cells
                            .last()
                            .copied()
                            .or(outs[t - 1].delta_last)
                            .ok_or_else(|| {
                                self.internal("no takeoff cell for a leading chain".to_string())
                            })?;
                        let phi = self.cells[first].phi.ok_or_else(|| {
                            self.internal(format!("{} has no parent yet", self.name(first)))
                        })?;
                        self.set_gh(first, (phi, a))?;
                    }
                }
                outs
            };

            // Successor rows by concatenation over the row's cells.
            let mut row_g = Vec::new();
            let mut row_dg = Vec::new();
            let mut row_t = Vec::new();
            let mut row_s = Vec::new();
            for (out, &e) in outs.iter().zip(&cells) {
                row_g.extend(out.g.iter().map(|&z| Item::Cell(z)));
                row_dg.extend(out.dg.iter().cloned());
                row_t.extend(out.t.iter().cloned());
                row_s.extend(out.s.iter().cloned());
                let slot = &mut self.cells[e];
                slot.h = Some(out.h.clone());
                slot.t = Some(out.t.clone());
                slot.s = Some(out.s.clone());
                slot.g = Some(out.g.clone());
                slot.dg = Some(out.dg.clone());
            }
            let g_key = key.child(StratinoTerm::plain(1));
            let sharp = prefix.child(StratinoTerm::sharp(n));
            let sharp_one = sharp.child(StratinoTerm::plain(1));
            let next_key = prefix.child(StratinoTerm::plain(n + 1));
            for (k, row) in [
                (g_key.clone(), row_g),
                (sharp, row_dg),
                (sharp_one.clone(), row_t),
                (next_key, row_s),
            ] {
                if !row.is_empty()
                    && self.rows.insert(k.clone(), row).is_some() {
                        return Err(self.internal(format!("row {k} built twice")));
                    }
            }
            for k in [g_key, sharp_one] {
                if self.rows.contains_key(&k) {
                    self.pending.insert(k);
                }
            }
            n += 1;
        }
        Ok(())
    }

    pub(super) fn run(&mut self) -> Result<(), EncodeError> {
        // Seed: the root and its anchored neighbor.
        let w0 = self.map.root_neg();
        let w1 = self.map.root_pos();
        self.set_binome(w0, PairKind::Zc, false, None)?;
        self.cells[w0].h = Some(vec![Item::Cell(w1)]);
        self.cells[w0].t = Some(Vec::new());
        self.cells[w0].s = Some(Vec::new());
        self.cells[w0].g = Some(Vec::new());
        self.cells[w0].dg = Some(Vec::new());
        self.rows.insert(Stratino::empty(), vec![Item::Cell(w0)]);
        self.set_binome(w1, PairKind::Mr, false, Some(w0))?;
        let one = Stratino::from_terms([(1, false)]);
        self.rows.insert(one.clone(), vec![Item::Cell(w1)]);
        // All first-layer cells must form a single component anchored at w1.
        let first_rov = self.lay.rov_of[w1];
        if self.lay.levels[1]
            .iter()
            .any(|&c| self.lay.rov_of[c] != first_rov)
        {
            return Err(self.internal("first layer is not connected".to_string()));
        }
        self.rovs[first_rov].zouc = Some(w1);
        self.pending.insert(one);

        while let Some(y) = self.pending.pop_first() {
            let (prefix, last) = y.split_last().expect("unitary keys are nonempty");
            debug_assert_eq!(last, StratinoTerm::plain(1));
            self.process_family(&prefix)?;
        }

        // Coverage: every face annotated and processed, each exactly once
        // across all rows.
        let mut counts = vec![0usize; self.map.face_count()];
        for items in self.rows.values() {
            for c in cells_of(items) {
                counts[c] += 1;
            }
        }
        for (e, count) in counts.iter().enumerate() {
            if *count != 1 || self.cells[e].binome.is_none() || self.cells[e].h.is_none() {
                return Err(EncodeError::Coverage {
                    face: self.name(e),
                });
            }
        }
        Ok(())
    }
}
