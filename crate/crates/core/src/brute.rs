//! Reference deciders by direct search over basic intervals `(y, x]`.
//!
//! They only use set algebra and are exact when every limit point of the
//! space lies on the grid, which holds for the spaces the grid was built
//! for (see [`Space::grid_positions`]).

use std::collections::BTreeSet;

use crate::space::{Point, PointSet, Run, Space};

fn interval(space: &Space, branch: usize, after: &crate::Ordinal, upto: &crate::Ordinal) -> PointSet {
    let run = Run::new(after.succ(), upto.succ()).expect("after < upto");
    PointSet::from_runs(space.branch_count(), [(branch, run)])
}

/// Every limit coordinate of `set` on the grid has a basic interval around it
/// inside `set`, on every branch through the point.
pub fn is_open(space: &Space, set: &PointSet, k: u64) -> bool {
    let sat = space.saturate(set);
    (0..space.branch_count()).all(|b| {
        let mut below: Vec<_> = space.grid_positions(b, k);
        below.extend(sat.runs(b).iter().flat_map(|r| [r.lo.clone(), r.end.clone()]));
        space.grid_positions(b, k).iter().filter(|c| c.is_limit() && sat.contains_coord(b, c)).all(|c| {
            below
                .iter()
                .filter(|y| *y < c)
                .any(|y| interval(space, b, y, c).is_subset(&sat))
        })
    })
}

pub fn is_closed(space: &Space, set: &PointSet, k: u64) -> bool {
    is_open(space, &space.complement(set), k)
}

/// `None` when the set is not closed; otherwise the grid points `q` of a
/// non-open closed set for which removing `q` leaves an open set. An empty
/// list with `Some` means the set is clopen when it is open, and outside Δ
/// when it is not.
pub fn modulo_points(space: &Space, set: &PointSet, k: u64) -> Option<Vec<Point>> {
    let sat = space.saturate(set);
    if !is_closed(space, &sat, k) {
        return None;
    }
    if is_open(space, &sat, k) {
        return Some(Vec::new());
    }
    Some(
        space
            .grid_points(k)
            .into_iter()
            .filter(|q| space.contains(&sat, q) && is_open(space, &sat.difference(&space.singleton(q)), k))
            .collect(),
    )
}

/// Unions of at most `max_intervals` intervals with grid endpoints, each
/// end open or closed, over any branches.
pub fn interval_sets(space: &Space, k: u64, max_intervals: usize) -> Vec<PointSet> {
    let bc = space.branch_count();
    let mut runs: Vec<(usize, Run)> = Vec::new();
    for b in 0..bc {
        let g = space.grid_positions(b, k);
        let bounds: BTreeSet<_> = g.iter().flat_map(|x| [x.clone(), x.succ()]).collect();
        let top = space.top(b).succ();
        for lo in &bounds {
            for end in bounds.iter().filter(|e| *e > lo && **e <= top) {
                runs.push((b, Run::new(lo.clone(), end.clone()).expect("lo < end")));
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut frontier: Vec<PointSet> = vec![PointSet::empty(bc)];
    for _ in 0..max_intervals {
        let mut next = Vec::new();
        for base in &frontier {
            for (b, r) in &runs {
                let s = base.union(&PointSet::from_runs(bc, [(*b, r.clone())]));
                if out.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}
