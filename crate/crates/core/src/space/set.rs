//! Boolean algebra of finite interval unions over a family of ordinal branches.
//!
//! Every subset is stored per branch as a sorted list of half-open runs
//! `[lo, end)`. Runs never overlap or touch, so the representation of a set is
//! unique. A closed interval `[a, b]` is the run `[a, b+1)`, and a run whose end
//! is a limit ordinal `λ` is the non-closed interval `[lo, λ)`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// The ordinal interval `[lo, end)`, with `lo < end`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Run {
    pub lo: Ordinal,
    pub end: Ordinal,
}

impl Run {
    pub fn new(lo: Ordinal, end: Ordinal) -> Option<Run> {
        (lo < end).then_some(Run { lo, end })
    }

    /// The closed interval `[lo, hi]`.
    pub fn closed(lo: Ordinal, hi: Ordinal) -> Option<Run> {
        Run::new(lo, hi.succ())
    }

    pub fn point(x: Ordinal) -> Run {
        let end = x.succ();
        Run { lo: x, end }
    }

    pub fn contains(&self, x: &Ordinal) -> bool {
        self.lo <= *x && *x < self.end
    }

    /// Largest member, when the run is closed on the right.
    pub fn max(&self) -> Option<Ordinal> {
        self.end.pred()
    }

    pub fn is_singleton(&self) -> bool {
        self.end == self.lo.succ()
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end.pred() {
            Some(hi) if hi == self.lo => write!(f, "{{{}}}", self.lo),
            Some(hi) => write!(f, "[{},{}]", self.lo, hi),
            None => write!(f, "[{},{})", self.lo, self.end),
        }
    }
}

/// Sorts and merges overlapping or touching runs.
pub(crate) fn normalize(mut runs: Vec<Run>) -> Vec<Run> {
    runs.sort();
    let mut out: Vec<Run> = Vec::with_capacity(runs.len());
    for r in runs {
        match out.last_mut() {
            Some(last) if r.lo <= last.end => {
                if r.end > last.end {
                    last.end = r.end;
                }
            }
            _ => out.push(r),
        }
    }
    out
}

fn intersect_runs(a: &[Run], b: &[Run]) -> Vec<Run> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        let lo = std::cmp::max(&a[i].lo, &b[j].lo);
        let end = std::cmp::min(&a[i].end, &b[j].end);
        if lo < end {
            out.push(Run { lo: lo.clone(), end: end.clone() });
        }
        if a[i].end < b[j].end {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn difference_runs(a: &[Run], b: &[Run]) -> Vec<Run> {
    let mut out = Vec::new();
    for r in a {
        let mut cur = r.lo.clone();
        for s in b {
            if s.end <= cur || s.lo >= r.end {
                continue;
            }
            if s.lo > cur {
                out.push(Run { lo: cur.clone(), end: s.lo.clone() });
            }
            if s.end > cur {
                cur = s.end.clone();
            }
        }
        if cur < r.end {
            out.push(Run { lo: cur, end: r.end.clone() });
        }
    }
    out
}

/// A subset of the disjoint sum of the branches. Operations here are purely
/// set-theoretic; gluing and topology live on [`crate::space::Space`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PointSet {
    branches: Vec<Vec<Run>>,
}

impl PointSet {
    pub fn empty(branch_count: usize) -> Self {
        PointSet { branches: vec![Vec::new(); branch_count] }
    }

    pub fn from_runs(branch_count: usize, runs: impl IntoIterator<Item = (usize, Run)>) -> Self {
        let mut branches = vec![Vec::new(); branch_count];
        for (b, r) in runs {
            branches[b].push(r);
        }
        PointSet { branches: branches.into_iter().map(normalize).collect() }
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn runs(&self, branch: usize) -> &[Run] {
        &self.branches[branch]
    }

    /// All runs tagged with their branch, in branch order.
    pub fn all_runs(&self) -> impl Iterator<Item = (usize, &Run)> {
        self.branches
            .iter()
            .enumerate()
            .flat_map(|(b, rs)| rs.iter().map(move |r| (b, r)))
    }

    pub fn run_count(&self) -> usize {
        self.branches.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.iter().all(Vec::is_empty)
    }

    pub fn contains_coord(&self, branch: usize, x: &Ordinal) -> bool {
        self.branches
            .get(branch)
            .is_some_and(|rs| rs.iter().any(|r| r.contains(x)))
    }

    fn zip_with(&self, other: &PointSet, op: impl Fn(&[Run], &[Run]) -> Vec<Run>) -> PointSet {
        assert_eq!(self.branch_count(), other.branch_count(), "sets over different spaces");
        PointSet {
            branches: self
                .branches
                .iter()
                .zip(&other.branches)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, |a, b| normalize(a.iter().chain(b).cloned().collect()))
    }

    pub fn intersect(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, intersect_runs)
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.zip_with(other, difference_runs)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn meets(&self, other: &PointSet) -> bool {
        !self.intersect(other).is_empty()
    }

    pub(crate) fn map_branches(&self, f: impl Fn(usize, &[Run]) -> Vec<Run>) -> PointSet {
        PointSet {
            branches: self
                .branches
                .iter()
                .enumerate()
                .map(|(b, rs)| normalize(f(b, rs)))
                .collect(),
        }
    }

    pub(crate) fn push_run(&mut self, branch: usize, run: Run) {
        let rs = std::mem::take(&mut self.branches[branch]);
        self.branches[branch] = normalize(rs.into_iter().chain(std::iter::once(run)).collect());
    }

    /// Textual items, one per run, in the same notation [`parse_item`] accepts.
    pub fn items(&self) -> Vec<String> {
        let multi = self.branch_count() > 1;
        self.all_runs()
            .map(|(b, r)| if multi && b > 0 { format!("{b}:{r}") } else { r.to_string() })
            .collect()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items = self.items();
        if items.is_empty() {
            f.write_str("∅")
        } else {
            f.write_str(&items.join(" ∪ "))
        }
    }
}

fn split_branch(s: &str) -> Result<(usize, &str)> {
    let s = s.trim();
    match s.split_once(':') {
        Some((b, rest)) => {
            let branch = b.trim().parse().map_err(|_| Error::ParseSet {
                literal: s.to_string(),
                reason: format!("bad branch index {b:?}"),
            })?;
            Ok((branch, rest.trim()))
        }
        None => Ok((0, s)),
    }
}

/// Parses an optional `branch:` prefix followed by an ordinal, e.g. `1:w+3`.
pub fn parse_coord(s: &str) -> Result<(usize, Ordinal)> {
    let (branch, rest) = split_branch(s)?;
    Ok((branch, rest.parse()?))
}

/// Parses one interval item: `{x}`, `[a,b]`, `[a,b)`, `(a,b]` or `(a,b)`,
/// optionally prefixed by `branch:`. A bare ordinal is a singleton.
pub fn parse_item(s: &str) -> Result<(usize, Run)> {
    let (branch, body) = split_branch(s)?;
    let bad = |reason: &str| Error::ParseSet { literal: s.to_string(), reason: reason.to_string() };
    if let Some(inner) = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
        let x: Ordinal = inner.trim().parse()?;
        return Ok((branch, Run::point(x)));
    }
    let mut chars = body.chars();
    let (open, close) = match (chars.next(), body.chars().last()) {
        (Some(o @ ('[' | '(')), Some(c @ (']' | ')'))) if body.len() >= 2 => (o, c),
        _ => {
            let x: Ordinal = body.parse()?;
            return Ok((branch, Run::point(x)));
        }
    };
    let inner = &body[1..body.len() - 1];
    let (a, b) = inner.split_once(',').ok_or_else(|| bad("expected two endpoints separated by ','"))?;
    let a: Ordinal = a.trim().parse()?;
    let b: Ordinal = b.trim().parse()?;
    let lo = if open == '(' { a.succ() } else { a };
    let end = if close == ']' { b.succ() } else { b };
    Run::new(lo, end).map(|r| (branch, r)).ok_or_else(|| bad("interval is empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn set(items: &[&str]) -> PointSet {
        PointSet::from_runs(1, items.iter().map(|s| parse_item(s).unwrap()))
    }

    #[test]
    fn union_merges_touching_runs() {
        assert_eq!(set(&["[0,3]", "[2,5]"]), set(&["[0,5]"]));
        assert_eq!(set(&["[0,3]", "[4,w]"]), set(&["[0,w]"]));
        assert_eq!(set(&["[0,w)", "{w}"]), set(&["[0,w]"]));
        assert_ne!(set(&["[0,3]", "[5,w]"]), set(&["[0,w]"]));
    }

    #[test]
    fn intersect_and_difference() {
        let a = set(&["[0,w]"]);
        let b = set(&["[w,w*2]"]);
        assert_eq!(a.intersect(&b), set(&["{w}"]));
        assert_eq!(a.difference(&set(&["{5}"])), set(&["[0,4]", "[6,w]"]));
        assert_eq!(a.difference(&set(&["{w}"])), set(&["[0,w)"]));
        assert!(set(&["{3}"]).is_subset(&a));
    }

    #[test]
    fn item_notation_round_trips() {
        for s in ["{5}", "[0,3]", "[w + 1,w*2]", "[0,w)", "[w,w^2)"] {
            let (_, r) = parse_item(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!(parse_item("(5,w]").unwrap().1.to_string(), "[6,w]");
        assert_eq!(parse_item("2:w").unwrap(), (2, Run::point(ord("w"))));
        assert!(parse_item("(3,3]").is_err());
        assert!(parse_item("[1 2]").is_err());
    }
}
