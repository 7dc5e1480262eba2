//! From the orthogonal drawing to a rooted map: rasterize to unit grid
//! edges, flood-fill the plane regions, trace every region boundary, and
//! read off the neighbor sequences.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::arrange::GeoArrangement;
use super::table::{GridTable, Pt};
use super::DecodeError;
use crate::map::RootedMap;
use crate::word::WordAnalysis;

fn internal(m: impl Into<String>) -> DecodeError {
    DecodeError::Internal(m.into())
}

/// Expands a polyline into unit grid edges; all legs must be axis-aligned.
fn unit_edges(pts: &[Pt], edges: &mut BTreeSet<(Pt, Pt)>) -> Result<(), DecodeError> {
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (dx, dy) = ((b.0 - a.0).signum(), (b.1 - a.1).signum());
        if dx != 0 && dy != 0 {
            return Err(internal("polyline leg is not axis-aligned"));
        }
        let mut cur = a;
        while cur != b {
            let next = (cur.0 + dx, cur.1 + dy);
            let e = if cur < next { (cur, next) } else { (next, cur) };
            edges.insert(e);
            cur = next;
        }
    }
    Ok(())
}

/// The cell on the left of the directed unit edge `p -> q`, y growing
/// downward.
fn left_cell(p: Pt, q: Pt) -> Pt {
    match (q.0 - p.0, q.1 - p.1) {
        (1, 0) => (p.0, p.1 - 1),
        (0, 1) => (p.0, p.1),
        (-1, 0) => (q.0, q.1),
        (0, -1) => (q.0 - 1, q.1),
        _ => unreachable!("unit edges only"),
    }
}

fn turn_left(d: Pt) -> Pt {
    match d {
        (1, 0) => (0, -1),
        (0, -1) => (-1, 0),
        (-1, 0) => (0, 1),
        (0, 1) => (1, 0),
        _ => unreachable!(),
    }
}

pub(super) struct Extraction {
    pub map: RootedMap,
    /// Unit cells of each region, indexed by pair index.
    pub region_cells: Vec<Vec<Pt>>,
}

pub(super) fn extract_map(
    analysis: &WordAnalysis,
    table: &GridTable,
    arr: &GeoArrangement,
) -> Result<Extraction, DecodeError> {
    let mut edges: BTreeSet<(Pt, Pt)> = BTreeSet::new();
    for c in &arr.curves {
        unit_edges(&c.pts, &mut edges)?;
    }
    for s in &arr.segments {
        unit_edges(&s.pts, &mut edges)?;
    }
    for t in &arr.transversals {
        unit_edges(&t.pts, &mut edges)?;
    }

    // Vertex degrees: bends and straight-through points have degree 2,
    // junctions must have degree 3.
    let mut incident: BTreeMap<Pt, BTreeSet<Pt>> = BTreeMap::new();
    for &(a, b) in &edges {
        incident.entry(a).or_default().insert(b);
        incident.entry(b).or_default().insert(a);
    }
    for (p, nbrs) in &incident {
        if nbrs.len() != 2 && nbrs.len() != 3 {
            return Err(DecodeError::BadJunction { point: *p, degree: nbrs.len() });
        }
    }
    let has_edge = |a: Pt, b: Pt| {
        let e = if a < b { (a, b) } else { (b, a) };
        edges.contains(&e)
    };

    // Flood fill the padded cell grid.
    let (w, h) = (table.width(), table.height());
    let cell_index = |c: Pt| -> usize {
        ((c.1 + 1) * (w + 2) + (c.0 + 1)) as usize
    };
    let in_grid = |c: Pt| c.0 >= -1 && c.0 <= w && c.1 >= -1 && c.1 <= h;
    let total = ((w + 2) * (h + 2)) as usize;
    let mut region = vec![usize::MAX; total];
    let mut region_count = 0;
    for cy in -1..=h {
        for cx in -1..=w {
            let seed = (cx, cy);
            if region[cell_index(seed)] != usize::MAX {
                continue;
            }
            let id = region_count;
            region_count += 1;
            region[cell_index(seed)] = id;
            let mut queue = VecDeque::from([seed]);
            while let Some(c) = queue.pop_front() {
                // Neighbors not separated by a drawn wall.
                let moves = [
                    ((c.0 + 1, c.1), ((c.0 + 1, c.1), (c.0 + 1, c.1 + 1))),
                    ((c.0 - 1, c.1), ((c.0, c.1), (c.0, c.1 + 1))),
                    ((c.0, c.1 + 1), ((c.0, c.1 + 1), (c.0 + 1, c.1 + 1))),
                    ((c.0, c.1 - 1), ((c.0, c.1), (c.0 + 1, c.1))),
                ];
                for (n, wall) in moves {
                    if in_grid(n)
                        && region[cell_index(n)] == usize::MAX
                        && !has_edge(wall.0, wall.1)
                    {
                        region[cell_index(n)] = id;
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    let outer = region[cell_index((-1, -1))];

    // Each pair's opener cell names one region.
    let pair_count = analysis.pair_count();
    let mut region_of_pair = vec![usize::MAX; pair_count];
    let mut pair_of_region: BTreeMap<usize, usize> = BTreeMap::new();
    for (p, &(alpha, _)) in analysis.pairs.iter().enumerate() {
        let cell = (
            table.col_of[&alpha] as i64,
            table.row_of_pos[&alpha] as i64,
        );
        let id = region[cell_index(cell)];
        if pair_of_region.insert(id, p).is_some() {
            return Err(DecodeError::RegionMismatch);
        }
        region_of_pair[p] = id;
    }
    if region_count != pair_count || region_of_pair[0] != outer {
        return Err(DecodeError::RegionMismatch);
    }

    // Trace every boundary cycle, keeping its region on the left.
    let mut directed: BTreeSet<(Pt, Pt)> = BTreeSet::new();
    for &(a, b) in &edges {
        directed.insert((a, b));
        directed.insert((b, a));
    }
    let next_edge = |e: (Pt, Pt)| -> Result<(Pt, Pt), DecodeError> {
        let d = (e.1 .0 - e.0 .0, e.1 .1 - e.0 .1);
        let mut cand = turn_left(d);
        for _ in 0..4 {
            let r = (e.1 .0 + cand.0, e.1 .1 + cand.1);
            if has_edge(e.1, r) {
                return Ok((e.1, r));
            }
            // Try the next direction clockwise.
            cand = turn_left(turn_left(turn_left(cand)));
        }
        Err(internal("dangling edge"))
    };
    let mut seen: BTreeSet<(Pt, Pt)> = BTreeSet::new();
    // Per region: its boundary as map edges (maximal runs between
    // junctions), each run carrying the neighbor region and its unit edges.
    type Run = (usize, Vec<(Pt, Pt)>);
    let mut boundary: BTreeMap<usize, Vec<Run>> = BTreeMap::new();
    for &start in &directed {
        if seen.contains(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start);
        let mut cur = next_edge(start)?;
        while cur != start {
            if seen.contains(&cur) {
                return Err(internal("boundary trace collided"));
            }
            seen.insert(cur);
            cycle.push(cur);
            cur = next_edge(cur)?;
        }
        let own = region[cell_index(left_cell(cycle[0].0, cycle[0].1))];
        for &(p, q) in &cycle {
            if region[cell_index(left_cell(p, q))] != own {
                return Err(internal("inconsistent region along a boundary"));
            }
        }
        if boundary.contains_key(&own) {
            // A second cycle for the same region: not a disk.
            return Err(DecodeError::RegionMismatch);
        }
        // Split at junctions (degree-3 lattice points at edge heads).
        let is_junction = |p: Pt| incident[&p].len() == 3;
        let cuts: Vec<usize> = (0..cycle.len())
            .filter(|&i| is_junction(cycle[i].1))
            .collect();
        if cuts.is_empty() {
            return Err(internal("boundary without junctions"));
        }
        let m = cycle.len();
        let mut runs = Vec::new();
        for ci in 0..cuts.len() {
            let from = (cuts[ci] + 1) % m;
            let until = cuts[(ci + 1) % cuts.len()];
            let mut run = Vec::new();
            let mut i = from;
            loop {
                run.push(cycle[i]);
                if i == until {
                    break;
                }
                i = (i + 1) % m;
            }
            let nbr = region[cell_index(left_cell(run[0].1, run[0].0))];
            for &(p, q) in &run {
                if region[cell_index(left_cell(q, p))] != nbr {
                    return Err(internal("region changes along one edge"));
                }
            }
            if nbr == own {
                return Err(internal("edge borders its own region"));
            }
            runs.push((nbr, run));
        }
        boundary.insert(own, runs);
    }
    if boundary.len() != region_count {
        return Err(DecodeError::RegionMismatch);
    }

    // Anchor the two root regions on the root edge: the boundary arc
    // containing the top-left unit step of the root curve's top horizontal.
    let root_curve = &arr.curves[0];
    let top_left: Pt = (root_curve.top.x1, root_curve.top.y);
    let top_step_fwd = (top_left, (top_left.0 + 1, top_left.1));
    let top_step_bwd = ((top_left.0 + 1, top_left.1), top_left);
    let rotate_to = |runs: &mut Vec<Run>, step: (Pt, Pt)| -> bool {
        if let Some(at) = runs.iter().position(|(_, run)| run.contains(&step)) {
            runs.rotate_left(at);
            true
        } else {
            false
        }
    };
    let w0 = region_of_pair[0];
    let w1 = region_of_pair[1];
    {
        let runs0 = boundary.get_mut(&w0).expect("all regions traced");
        if !(rotate_to(runs0, top_step_fwd) || rotate_to(runs0, top_step_bwd)) {
            return Err(internal("root edge missing from the outer boundary"));
        }
    }
    {
        let runs1 = boundary.get_mut(&w1).expect("all regions traced");
        if !(rotate_to(runs1, top_step_fwd) || rotate_to(runs1, top_step_bwd)) {
            return Err(internal("root edge missing from the inner root boundary"));
        }
    }

    // Assemble the map with faces named by visit order.
    let names: Vec<String> = (0..pair_count).map(|p| format!("w{p}")).collect();
    let mut borders = Vec::new();
    for p in 0..pair_count {
        let runs = &boundary[&region_of_pair[p]];
        let b: Vec<String> = runs
            .iter()
            .map(|(nbr, _)| names[pair_of_region[nbr]].clone())
            .collect();
        borders.push((names[p].clone(), b));
    }
    let map = RootedMap::new(names.clone(), borders, &names[0], &names[1])
        .map_err(|e| internal(format!("extracted data is not a map: {e}")))?;

    // Region cells for rendering, indexed by pair.
    let mut region_cells: Vec<Vec<Pt>> = vec![Vec::new(); pair_count];
    for cy in 0..h {
        for cx in 0..w {
            let id = region[cell_index((cx, cy))];
            if let Some(&p) = pair_of_region.get(&id) {
                region_cells[p].push((cx, cy));
            }
        }
    }

    Ok(Extraction { map, region_cells })
}
