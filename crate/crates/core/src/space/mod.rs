//! Finite amalgams of compact ordinal branches.
//!
//! A [`Space`] is the disjoint sum of `[0, γ_0], ..., [0, γ_k]` with finitely
//! many classes of coordinates identified to single points. Subsets are
//! [`PointSet`]s over the coordinates. Topological operations saturate their
//! inputs first, so a denotation stands for the set of points any of whose
//! coordinates it covers.

mod enumerate;
mod set;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

pub use enumerate::{closed_family, FamilyParams};
pub use set::{parse_coord, parse_item, PointSet, Run};

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// A point of the amalgam, named by the least coordinate of its class.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point {
    pub branch: usize,
    pub pos: Ordinal,
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.branch == 0 {
            write!(f, "{}", self.pos)
        } else {
            write!(f, "{}:{}", self.branch, self.pos)
        }
    }
}

/// Outcome of the clopen-modulo-a-point decision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Delta {
    Clopen,
    Modulo(Point),
    NotInDelta,
}

impl Delta {
    pub fn in_delta(&self) -> bool {
        !matches!(self, Delta::NotInDelta)
    }

    /// Every point here has countable character, so this agrees with
    /// [`Delta::in_delta`].
    pub fn in_delta_omega(&self) -> bool {
        self.in_delta()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cardinal {
    Finite(u64),
    Omega,
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Omega => f.write_str("w"),
        }
    }
}

/// Character and pseudocharacter of a point; the base itself is
/// [`Space::nbhd_in`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Character {
    pub chi: Cardinal,
    pub psi: Cardinal,
}

/// A nonempty saturated closed set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ClosedSet(PointSet);

/// A saturated open set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OpenSet(PointSet);

impl Deref for ClosedSet {
    type Target = PointSet;
    fn deref(&self) -> &PointSet {
        &self.0
    }
}

impl Deref for OpenSet {
    type Target = PointSet;
    fn deref(&self) -> &PointSet {
        &self.0
    }
}

impl ClosedSet {
    pub fn into_inner(self) -> PointSet {
        self.0
    }
}

impl OpenSet {
    pub fn into_inner(self) -> PointSet {
        self.0
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

type Coord = (usize, Ordinal);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Space {
    tops: Vec<Ordinal>,
    classes: Vec<Vec<Coord>>,
    class_of: BTreeMap<Coord, usize>,
}

impl Space {
    pub fn new(tops: Vec<Ordinal>, gluings: Vec<Vec<Coord>>) -> Result<Space> {
        if tops.is_empty() {
            return Err(Error::InvalidSpace("no branches".into()));
        }
        let mut class_of = BTreeMap::new();
        let mut classes = Vec::with_capacity(gluings.len());
        for (i, mut class) in gluings.into_iter().enumerate() {
            class.sort();
            class.dedup();
            if class.len() < 2 {
                return Err(Error::InvalidSpace(format!("gluing class {i} has fewer than two coordinates")));
            }
            for (b, x) in &class {
                let top = tops
                    .get(*b)
                    .ok_or_else(|| Error::InvalidSpace(format!("gluing class {i} names missing branch {b}")))?;
                if x > top {
                    return Err(Error::InvalidSpace(format!("coordinate {b}:{x} exceeds branch top {top}")));
                }
                if class_of.insert((*b, x.clone()), i).is_some() {
                    return Err(Error::InvalidSpace(format!("coordinate {b}:{x} is glued twice")));
                }
            }
            classes.push(class);
        }
        Ok(Space { tops, classes, class_of })
    }

    /// The ordinal space `[0, γ]`.
    pub fn ordinal(gamma: Ordinal) -> Space {
        Space::new(vec![gamma], Vec::new()).expect("single branch is valid")
    }

    /// `n` copies of `[0, ω]` glued at their tops.
    pub fn wedge(n: usize) -> Result<Space> {
        if n < 2 {
            return Err(Error::InvalidSpace("a wedge needs at least two branches".into()));
        }
        let w = Ordinal::omega();
        Space::new(vec![w.clone(); n], vec![(0..n).map(|b| (b, w.clone())).collect()])
    }

    /// Finite truncation of the sequential fan: `prongs` convergent sequences
    /// sharing their limit.
    pub fn fan(prongs: usize) -> Result<Space> {
        Space::wedge(prongs)
    }

    pub fn tops(&self) -> &[Ordinal] {
        &self.tops
    }

    pub fn top(&self, branch: usize) -> &Ordinal {
        &self.tops[branch]
    }

    pub fn branch_count(&self) -> usize {
        self.tops.len()
    }

    pub fn gluings(&self) -> &[Vec<Coord>] {
        &self.classes
    }

    fn glued_on(&self, branch: usize) -> impl Iterator<Item = &Ordinal> {
        self.class_of.keys().filter(move |(b, _)| *b == branch).map(|(_, x)| x)
    }

    pub fn point(&self, branch: usize, pos: Ordinal) -> Result<Point> {
        match self.tops.get(branch) {
            Some(top) if pos <= *top => Ok(self.canon(branch, pos)),
            Some(top) => Err(Error::SpaceMismatch(format!("{branch}:{pos} exceeds branch top {top}"))),
            None => Err(Error::SpaceMismatch(format!("no branch {branch}"))),
        }
    }

    pub fn parse_point(&self, s: &str) -> Result<Point> {
        let (b, x) = parse_coord(s)?;
        self.point(b, x)
    }

    fn canon(&self, branch: usize, pos: Ordinal) -> Point {
        let key = (branch, pos);
        match self.class_of.get(&key) {
            Some(&i) => {
                let (b, x) = self.classes[i][0].clone();
                Point { branch: b, pos: x }
            }
            None => Point { branch: key.0, pos: key.1 },
        }
    }

    /// All coordinates representing `p`.
    pub fn coords(&self, p: &Point) -> Vec<Coord> {
        match self.class_of.get(&(p.branch, p.pos.clone())) {
            Some(&i) => self.classes[i].clone(),
            None => vec![(p.branch, p.pos.clone())],
        }
    }

    pub fn is_glue(&self, p: &Point) -> bool {
        self.class_of.contains_key(&(p.branch, p.pos.clone()))
    }

    pub fn empty(&self) -> PointSet {
        PointSet::empty(self.branch_count())
    }

    pub fn universe(&self) -> PointSet {
        PointSet::from_runs(
            self.branch_count(),
            self.tops.iter().enumerate().map(|(b, t)| (b, Run::new(Ordinal::zero(), t.succ()).expect("nonempty"))),
        )
    }

    pub fn singleton(&self, p: &Point) -> PointSet {
        PointSet::from_runs(self.branch_count(), self.coords(p).into_iter().map(|(b, x)| (b, Run::point(x))))
    }

    pub fn contains(&self, set: &PointSet, p: &Point) -> bool {
        self.coords(p).iter().any(|(b, x)| set.contains_coord(*b, x))
    }

    /// Checks that a denotation lives inside this space.
    pub fn check(&self, set: &PointSet) -> Result<()> {
        if set.branch_count() != self.branch_count() {
            return Err(Error::SpaceMismatch(format!(
                "set has {} branches, space has {}",
                set.branch_count(),
                self.branch_count()
            )));
        }
        for (b, r) in set.all_runs() {
            if r.end > self.tops[b].succ() {
                return Err(Error::SpaceMismatch(format!("{set} leaves branch {b} (top {})", self.tops[b])));
            }
        }
        Ok(())
    }

    /// Parses interval items into a saturated set.
    pub fn parse_set<S: AsRef<str>>(&self, items: &[S]) -> Result<PointSet> {
        let mut runs = Vec::with_capacity(items.len());
        for item in items {
            let (b, r) = parse_item(item.as_ref())?;
            if b >= self.branch_count() {
                return Err(Error::ParseSet { literal: item.as_ref().to_string(), reason: format!("no branch {b}") });
            }
            runs.push((b, r));
        }
        let set = PointSet::from_runs(self.branch_count(), runs);
        self.check(&set)?;
        Ok(self.saturate(&set))
    }

    pub fn closed_set(&self, set: PointSet) -> Result<ClosedSet> {
        self.check(&set)?;
        let set = self.saturate(&set);
        if set.is_empty() {
            return Err(Error::Empty("closed set"));
        }
        if !self.is_closed(&set) {
            return Err(Error::NotClosed { what: "set", set: set.to_string() });
        }
        Ok(ClosedSet(set))
    }

    pub fn open_set(&self, set: PointSet) -> Result<OpenSet> {
        self.check(&set)?;
        let set = self.saturate(&set);
        if !self.is_open(&set) {
            return Err(Error::NotOpen { what: "set", set: set.to_string() });
        }
        Ok(OpenSet(set))
    }

    pub fn saturate(&self, set: &PointSet) -> PointSet {
        let mut out = set.clone();
        for class in &self.classes {
            if class.iter().any(|(b, x)| set.contains_coord(*b, x)) {
                for (b, x) in class {
                    if !out.contains_coord(*b, x) {
                        out.push_run(*b, Run::point(x.clone()));
                    }
                }
            }
        }
        out
    }

    /// Removes every glue class that is only partly present.
    fn desaturate(&self, set: &PointSet) -> PointSet {
        let mut drop = Vec::new();
        for class in &self.classes {
            let hits = class.iter().filter(|(b, x)| set.contains_coord(*b, x)).count();
            if hits > 0 && hits < class.len() {
                drop.extend(class.iter().map(|(b, x)| (*b, Run::point(x.clone()))));
            }
        }
        if drop.is_empty() {
            set.clone()
        } else {
            set.difference(&PointSet::from_runs(self.branch_count(), drop))
        }
    }

    pub fn complement(&self, set: &PointSet) -> PointSet {
        self.universe().difference(&self.saturate(set))
    }

    pub fn closure(&self, set: &PointSet) -> PointSet {
        let sat = self.saturate(set);
        let closed = sat.map_branches(|_, rs| {
            rs.iter()
                .map(|r| if r.end.is_limit() { Run { lo: r.lo.clone(), end: r.end.succ() } } else { r.clone() })
                .collect()
        });
        self.saturate(&closed)
    }

    pub fn interior(&self, set: &PointSet) -> PointSet {
        let sat = self.saturate(set);
        let open = sat.map_branches(|_, rs| {
            rs.iter()
                .filter_map(|r| if r.lo.is_limit() { Run::new(r.lo.succ(), r.end.clone()) } else { Some(r.clone()) })
                .collect()
        });
        self.desaturate(&open)
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        self.closure(set) == self.saturate(set)
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        let sat = self.saturate(set);
        let open = sat.all_runs().all(|(_, r)| !r.lo.is_limit());
        open
    }

    pub fn is_clopen(&self, set: &PointSet) -> bool {
        self.is_open(set) && self.is_closed(set)
    }

    /// `H ∩ cl(Y ∖ H)`: the points of `H` at which it fails to be open in `Y`.
    pub fn boundary_in(&self, set: &PointSet, subspace: &PointSet) -> PointSet {
        let h = self.saturate(set);
        let y = self.saturate(subspace);
        h.intersect(&self.closure(&y.difference(&h)))
    }

    /// Openness relative to the subspace `Y`; requires `A ⊆ Y`.
    pub fn is_open_in(&self, set: &PointSet, subspace: &PointSet) -> bool {
        let a = self.saturate(set);
        a.is_subset(&self.saturate(subspace)) && self.boundary_in(&a, subspace).is_empty()
    }

    pub fn clopen_modulo(&self, set: &PointSet) -> Result<Delta> {
        self.clopen_modulo_in(set, &self.universe())
    }

    /// Decides whether the closed set `H` is clopen, or clopen modulo a point,
    /// in the subspace `Y`.
    pub fn clopen_modulo_in(&self, set: &PointSet, subspace: &PointSet) -> Result<Delta> {
        let h = self.saturate(set);
        if h.is_empty() {
            return Err(Error::Empty("set"));
        }
        if !self.is_closed(&h) {
            return Err(Error::NotClosed { what: "set", set: h.to_string() });
        }
        if !h.is_subset(&self.saturate(subspace)) {
            return Err(Error::OutsideSubspace { set: h.to_string(), subspace: subspace.to_string() });
        }
        let boundary = self.boundary_in(&h, subspace);
        Ok(match self.first_point(&boundary) {
            None => Delta::Clopen,
            Some(p) if self.singleton(&p) == boundary => Delta::Modulo(p),
            Some(_) => Delta::NotInDelta,
        })
    }

    pub fn isolated_in(&self, p: &Point, subspace: &PointSet) -> bool {
        let y = self.saturate(subspace);
        self.contains(&y, p) && !self.contains(&self.closure(&y.difference(&self.singleton(p))), p)
    }

    pub fn is_isolated(&self, p: &Point) -> bool {
        self.isolated_in(p, &self.universe())
    }

    pub fn character(&self, p: &Point, subspace: Option<&PointSet>) -> Result<Character> {
        let y = subspace.cloned().unwrap_or_else(|| self.universe());
        if !self.contains(&y, p) {
            return Err(Error::OutsideSubspace { set: p.to_string(), subspace: y.to_string() });
        }
        let c = if self.isolated_in(p, &y) { Cardinal::Finite(1) } else { Cardinal::Omega };
        Ok(Character { chi: c, psi: c })
    }

    /// Least `n` such that `(x[n], x)` holds no glue coordinate of `branch`.
    pub fn glue_free_index(&self, branch: usize, x: &Ordinal) -> u64 {
        let Some(y) = self.glued_on(branch).filter(|y| *y < x).max() else {
            return 0;
        };
        (0..)
            .find(|&n| x.fundamental(n).is_some_and(|xn| xn >= *y))
            .expect("fundamental sequences are cofinal")
    }

    /// The `n`-th canonical clopen neighbourhood of `p`: `{x}` at isolated
    /// coordinates and `[x[m]+1, x]` at limits.
    pub fn nbhd(&self, p: &Point, n: u64) -> PointSet {
        let runs = self.coords(p).into_iter().map(|(b, x)| {
            let run = match x.fundamental(n.max(self.glue_free_index(b, &x))) {
                Some(lo) => Run::closed(lo.succ(), x).expect("x[m] < x"),
                None => Run::point(x),
            };
            (b, run)
        });
        PointSet::from_runs(self.branch_count(), runs)
    }

    pub fn nbhd_in(&self, p: &Point, n: u64, subspace: &PointSet) -> PointSet {
        self.nbhd(p, n).intersect(&self.saturate(subspace))
    }

    /// An open superset of `set` obtained by pushing every limit left
    /// endpoint down to `lo[m]+1`, `m >= k`. Open for closed input, and
    /// shrinking to the set as `k` grows.
    pub fn fatten(&self, set: &PointSet, k: u64) -> PointSet {
        let sat = self.saturate(set);
        sat.map_branches(|b, rs| {
            rs.iter()
                .map(|r| match r.lo.fundamental(k.max(self.glue_free_index(b, &r.lo))) {
                    Some(lo) => Run { lo: lo.succ(), end: r.end.clone() },
                    None => r.clone(),
                })
                .collect()
        })
    }

    /// Grid positions of a branch: `ξ + m` for `m <= k` and every limit `ξ`
    /// below the top whose exponents and coefficients are no larger than the
    /// top's, together with the top and all glue coordinates.
    pub fn grid_positions(&self, branch: usize, k: u64) -> Vec<Ordinal> {
        let top = &self.tops[branch];
        let degree = top.degree().unwrap_or(0);
        let cap = top.terms().iter().map(|t| t.coef).max().unwrap_or(0).max(2);
        let mut bases = vec![Ordinal::zero()];
        for e in (1..=degree).rev() {
            let mut next = Vec::new();
            for b in &bases {
                for c in 0..=cap {
                    let v = b.add(&Ordinal::omega_pow_times(e, c));
                    if v <= *top {
                        next.push(v);
                    }
                }
            }
            bases = next;
        }
        let mut out: Vec<Ordinal> = bases
            .iter()
            .flat_map(|xi| (0..=k).map(move |m| xi.add_finite(m)))
            .filter(|x| x <= top)
            .collect();
        out.push(top.clone());
        out.extend(self.glued_on(branch).cloned());
        out.sort();
        out.dedup();
        out
    }

    /// Canonical grid points over all branches, each listed once.
    pub fn grid_points(&self, k: u64) -> Vec<Point> {
        let mut out: Vec<Point> = (0..self.branch_count())
            .flat_map(|b| self.grid_positions(b, k).into_iter().map(move |x| (b, x)))
            .map(|(b, x)| self.canon(b, x))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn first_point(&self, set: &PointSet) -> Option<Point> {
        set.all_runs().next().map(|(b, r)| self.canon(b, r.lo.clone()))
    }

    /// The point at the lexicographically least coordinate `(branch, pos)`.
    pub fn min_point(&self, set: &PointSet) -> Option<Point> {
        self.first_point(set)
    }

    /// The point at the lexicographically greatest coordinate; `None` when
    /// the set is empty or has no largest coordinate.
    pub fn max_point(&self, set: &PointSet) -> Option<Point> {
        let (b, r) = set.all_runs().last()?;
        Some(self.canon(b, r.max()?))
    }

    /// One candidate point per run, isolated in the run when it has one,
    /// ordered for deterministic picking: successor and zero
    /// positions first, then by position and branch.
    pub fn pick_points(&self, set: &PointSet) -> Vec<Point> {
        let sat = self.saturate(set);
        let mut out: Vec<Point> = Vec::new();
        for (b, r) in sat.all_runs() {
            let x = if r.lo.is_limit() { r.lo.succ() } else { r.lo.clone() };
            if r.contains(&x) {
                out.push(self.canon(b, x));
            } else {
                out.push(self.canon(b, r.lo.clone()));
            }
        }
        out.sort_by(|p, q| (p.pos.is_limit(), &p.pos, p.branch).cmp(&(q.pos.is_limit(), &q.pos, q.branch)));
        out.dedup();
        out
    }

    /// `cl(X ∖ H)`. Fails when `H` is the whole space.
    pub fn complement_closure(&self, set: &PointSet) -> Result<PointSet> {
        let c = self.complement(set);
        if c.is_empty() {
            return Err(Error::Empty("complement"));
        }
        Ok(self.closure(&c))
    }

    /// Closure of `A ∖ B`.
    pub fn diff_closure(&self, a: &PointSet, b: &PointSet) -> PointSet {
        self.closure(&self.saturate(a).difference(&self.saturate(b)))
    }

    pub fn describe(&self) -> String {
        let tops: Vec<String> = self.tops.iter().map(|t| format!("[0,{t}]")).collect();
        let mut s = tops.join(" ⊎ ");
        for class in &self.classes {
            let cs: Vec<String> = class.iter().map(|(b, x)| format!("{b}:{x}")).collect();
            s.push_str(&format!(" / {}", cs.join("~")));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn w2() -> Space {
        Space::ordinal(ord("w*2"))
    }

    fn set(space: &Space, items: &[&str]) -> PointSet {
        space.parse_set(items).unwrap()
    }

    #[test]
    fn closure_and_complement() {
        let s = w2();
        assert_eq!(s.complement_closure(&set(&s, &["[w,w*2]"])).unwrap(), set(&s, &["[0,w]"]));
        let w = Space::ordinal(ord("w"));
        assert_eq!(w.complement_closure(&set(&w, &["{0}"])).unwrap(), set(&w, &["[1,w]"]));
        assert_eq!(w.complement_closure(&set(&w, &["[0,5]"])).unwrap(), set(&w, &["[6,w]"]));
        assert_eq!(w.diff_closure(&set(&w, &["[0,w]"]), &set(&w, &["{5}"])), set(&w, &["[0,4]", "[6,w]"]));
        assert!(w.complement_closure(&w.universe()).is_err());
    }

    #[test]
    fn openness() {
        let w = Space::ordinal(ord("w"));
        assert!(w.is_open(&set(&w, &["[0,5]"])));
        assert!(!w.is_open(&set(&w, &["{w}"])));
        let s = w2();
        assert!(!s.is_open(&set(&s, &["[w,w*2]"])));
        assert!(s.is_open(&set(&s, &["[w+1,w*2]"])));
    }

    #[test]
    fn clopen_modulo_examples() {
        let w = Space::ordinal(ord("w"));
        assert_eq!(w.clopen_modulo(&set(&w, &["{w}"])).unwrap(), Delta::Modulo(w.parse_point("w").unwrap()));
        assert_eq!(w.clopen_modulo(&set(&w, &["[0,5]"])).unwrap(), Delta::Clopen);
        let s = w2();
        assert_eq!(s.clopen_modulo(&set(&s, &["[w,w*2]"])).unwrap(), Delta::Modulo(s.parse_point("w").unwrap()));
        assert_eq!(s.clopen_modulo(&set(&s, &["{w}", "{w*2}"])).unwrap(), Delta::NotInDelta);
    }

    #[test]
    fn wedge_gluing() {
        let x = Space::wedge(2).unwrap();
        let hub = x.parse_point("1:w").unwrap();
        assert_eq!(hub, x.parse_point("w").unwrap());
        let prong = set(&x, &["[0,w]"]);
        assert!(x.contains(&prong, &hub));
        assert!(prong.contains_coord(1, &ord("w")));
        assert!(!x.is_closed(&set(&x, &["[0,w)"])));
        assert_eq!(x.clopen_modulo(&prong).unwrap(), Delta::Modulo(hub.clone()));
        assert_eq!(x.nbhd(&hub, 3), set(&x, &["[4,w]", "1:[4,w]"]));
        assert_eq!(x.character(&hub, None).unwrap().chi, Cardinal::Omega);
    }

    #[test]
    fn isolated_character() {
        let w = Space::ordinal(ord("w"));
        let p = w.parse_point("5").unwrap();
        assert_eq!(w.character(&p, None).unwrap(), Character { chi: Cardinal::Finite(1), psi: Cardinal::Finite(1) });
        assert_eq!(w.nbhd(&p, 7), set(&w, &["{5}"]));
        assert_eq!(w.nbhd(&w.parse_point("w").unwrap(), 2), set(&w, &["[3,w]"]));
    }

    #[test]
    fn grid_of_w2_plus_5() {
        let s = Space::ordinal(ord("w*2+5"));
        let g = s.grid_positions(0, 10);
        assert_eq!(g.len(), 11 + 11 + 6);
        assert_eq!(g.last().unwrap(), &ord("w*2+5"));
    }

    #[test]
    fn fatten_is_open_superset() {
        let s = w2();
        let a = set(&s, &["{w}", "[w*2,w*2]"]);
        let u = s.fatten(&a, 3);
        assert!(s.is_open(&u));
        assert!(a.is_subset(&u));
        assert_eq!(u, set(&s, &["[4,w]", "[w+4,w*2]"]));
    }
}
