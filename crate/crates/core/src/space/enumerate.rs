use std::collections::BTreeSet;

use super::{PointSet, Run, Space};
use crate::ordinal::Ordinal;

/// Bounds for the enumerated family of closed sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    /// Finite offset bound of the grid, see [`Space::grid_positions`].
    pub grid_k: u64,
    /// Maximum number of closed intervals per branch.
    pub max_runs: usize,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams { grid_k: 10, max_runs: 2 }
    }
}

fn branch_options(grid: &[Ordinal], max_runs: usize) -> Vec<Vec<Run>> {
    fn go(grid: &[Ordinal], from: usize, left: usize, cur: &mut Vec<Run>, out: &mut Vec<Vec<Run>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in from..grid.len() {
            for j in i..grid.len() {
                cur.push(Run::closed(grid[i].clone(), grid[j].clone()).expect("i <= j"));
                go(grid, j + 2, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(grid, 0, max_runs, &mut Vec::new(), &mut out);
    out
}

/// Every nonempty saturated closed set with at most `max_runs` closed
/// intervals per branch and all endpoints on the grid, deduplicated and in
/// a deterministic order.
pub fn closed_family(space: &Space, params: FamilyParams) -> Vec<PointSet> {
    let per_branch: Vec<Vec<Vec<Run>>> = (0..space.branch_count())
        .map(|b| branch_options(&space.grid_positions(b, params.grid_k), params.max_runs))
        .collect();
    let mut seen = BTreeSet::new();
    let mut index = vec![0usize; per_branch.len()];
    loop {
        let runs = index
            .iter()
            .enumerate()
            .flat_map(|(b, &i)| per_branch[b][i].iter().cloned().map(move |r| (b, r)));
        let set = space.saturate(&PointSet::from_runs(space.branch_count(), runs));
        if !set.is_empty() {
            seen.insert(set);
        }
        let mut b = 0;
        loop {
            if b == index.len() {
                return seen.into_iter().collect();
            }
            index[b] += 1;
            if index[b] < per_branch[b].len() {
                break;
            }
            index[b] = 0;
            b += 1;
        }
    }
}
