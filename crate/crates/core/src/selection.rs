//! Selections `f : 𝒻(X) → X`: order extrema, join and meet combinators over
//! decompositions, and checkers for extremality and continuity.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::decomp::{decomp_at_in, Decomposition, Kind};
use crate::error::{Error, Result};
use crate::hyperspace::{net_convergence_check, settles, ConvergentNet, NetVerdict};
use crate::ordinal::Ordinal;
use crate::space::{Point, PointSet, Space};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Mode {
    Maximal,
    Minimal,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Maximal => "maximal",
            Mode::Minimal => "minimal",
        })
    }
}

/// One selection per decomposition index: `overrides` where given, else
/// `default`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiberFamily {
    pub default: Selection,
    pub overrides: BTreeMap<Ordinal, Selection>,
}

impl FiberFamily {
    pub fn uniform(default: Selection) -> Self {
        FiberFamily { default, overrides: BTreeMap::new() }
    }

    pub fn get(&self, alpha: &Ordinal) -> &Selection {
        self.overrides.get(alpha).unwrap_or(&self.default)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Combinator {
    pub decomp: Decomposition,
    pub fibers: FiberFamily,
    /// Set when every limit fiber selection is known to satisfy the
    /// extremality hypothesis of the matching continuity theorem.
    pub continuity_theorem_applicable: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Selection {
    /// Point at the lexicographically greatest coordinate `(branch, pos)`.
    OrderMax,
    /// Point at the lexicographically least coordinate.
    OrderMin,
    /// `f(S) = g_a(S ∩ η⁻¹(a))`, `a = max η(S)`.
    Join(Arc<Combinator>),
    /// `f(S) = g_b(S ∩ η⁻¹(b))`, `b = min η(S)`.
    Meet(Arc<Combinator>),
    Restrict { parent: Arc<Selection>, subspace: PointSet },
    /// `base` everywhere except at the single set `at`, where it returns
    /// `value`. Used to plant defects.
    Patched { base: Arc<Selection>, at: PointSet, value: Point },
}

fn check_fibers(decomp: &Decomposition, fibers: &FiberFamily) -> Result<()> {
    if let Some((alpha, _)) = fibers.overrides.iter().find(|(a, _)| **a > decomp.gamma) {
        return Err(Error::Decomposition(format!("fiber selection for index {alpha} beyond {}", decomp.gamma)));
    }
    Ok(())
}

impl Selection {
    /// Join over an ordinal decomposition.
    pub fn join(decomp: Decomposition, fibers: FiberFamily, continuity_theorem_applicable: bool) -> Result<Selection> {
        if decomp.kind != Kind::Ordinal {
            return Err(Error::Decomposition("join needs an ordinal decomposition".into()));
        }
        check_fibers(&decomp, &fibers)?;
        Ok(Selection::Join(Arc::new(Combinator { decomp, fibers, continuity_theorem_applicable })))
    }

    /// Meet over an ordinal or quasi-ordinal decomposition.
    pub fn meet(decomp: Decomposition, fibers: FiberFamily, continuity_theorem_applicable: bool) -> Result<Selection> {
        check_fibers(&decomp, &fibers)?;
        Ok(Selection::Meet(Arc::new(Combinator { decomp, fibers, continuity_theorem_applicable })))
    }

    pub fn restrict(parent: Selection, subspace: PointSet) -> Selection {
        Selection::Restrict { parent: Arc::new(parent), subspace }
    }

    pub fn patched(base: Selection, at: PointSet, value: Point) -> Selection {
        Selection::Patched { base: Arc::new(base), at, value }
    }

    pub fn eval(&self, space: &Space, set: &PointSet) -> Result<Point> {
        let s = space.saturate(set);
        if s.is_empty() {
            return Err(Error::Empty("argument of a selection"));
        }
        self.eval_sat(space, &s)
    }

    fn eval_sat(&self, space: &Space, s: &PointSet) -> Result<Point> {
        match self {
            Selection::OrderMax => space
                .max_point(s)
                .ok_or_else(|| Error::NotClosed { what: "argument of a selection", set: s.to_string() }),
            Selection::OrderMin => space.min_point(s).ok_or(Error::Empty("argument of a selection")),
            Selection::Join(c) => {
                let a = c.decomp.max_eta(space, s);
                c.fibers.get(&a).eval_sat(space, &s.intersect(&c.decomp.fiber(space, &a)))
            }
            Selection::Meet(c) => {
                let b = c.decomp.min_eta(space, s);
                c.fibers.get(&b).eval_sat(space, &s.intersect(&c.decomp.fiber(space, &b)))
            }
            Selection::Restrict { parent, subspace } => {
                if !s.is_subset(subspace) {
                    return Err(Error::OutsideSubspace { set: s.to_string(), subspace: subspace.to_string() });
                }
                parent.eval_sat(space, s)
            }
            Selection::Patched { base, at, value } => {
                if s == at {
                    Ok(value.clone())
                } else {
                    base.eval_sat(space, s)
                }
            }
        }
    }

    /// `{x : f(A ∪ {x}) = x}`, computed from the structure of `f`. For empty
    /// `A` this is every point `f` may be applied to.
    pub fn winners(&self, space: &Space, a: &PointSet) -> Result<PointSet> {
        let a = space.saturate(a);
        if a.is_empty() {
            return Ok(match self {
                Selection::Restrict { subspace, .. } => subspace.clone(),
                _ => space.universe(),
            });
        }
        let bc = space.branch_count();
        match self {
            Selection::OrderMax => {
                let (b, r) = a.all_runs().last().expect("nonempty");
                let hi = r.max().ok_or_else(|| Error::NotClosed { what: "set", set: a.to_string() })?;
                let runs = (b..bc).map(|br| {
                    let lo = if br == b { hi.clone() } else { Ordinal::zero() };
                    (br, crate::space::Run::closed(lo, space.top(br).clone()).expect("within branch"))
                });
                Ok(space.saturate(&PointSet::from_runs(bc, runs)))
            }
            Selection::OrderMin => {
                let (b, r) = a.all_runs().next().expect("nonempty");
                let runs = (0..=b).map(|br| {
                    let hi = if br == b { r.lo.clone() } else { space.top(br).clone() };
                    (br, crate::space::Run::closed(Ordinal::zero(), hi).expect("within branch"))
                });
                Ok(space.saturate(&PointSet::from_runs(bc, runs)))
            }
            Selection::Join(c) => {
                let d = &c.decomp;
                let top = d.max_eta(space, &a);
                let fiber = d.fiber(space, &top);
                let inner = c.fibers.get(&top).winners(space, &a.intersect(&fiber))?;
                Ok(d.level(space, &top.succ()).union(&fiber.intersect(&inner)))
            }
            Selection::Meet(c) => {
                let d = &c.decomp;
                let bottom = d.min_eta(space, &a);
                let fiber = d.fiber(space, &bottom);
                let inner = c.fibers.get(&bottom).winners(space, &a.intersect(&fiber))?;
                Ok(d.domain.difference(&d.level(space, &bottom)).union(&fiber.intersect(&inner)))
            }
            Selection::Restrict { parent, subspace } => Ok(parent.winners(space, &a)?.intersect(subspace)),
            Selection::Patched { base, at, value } => {
                let w = base.winners(space, &a)?;
                if a == *at {
                    return Ok(w.difference(at).union(&space.singleton(value)));
                }
                let missing = at.difference(&a);
                match space.first_point(&missing) {
                    Some(z) if a.is_subset(at) && missing == space.singleton(&z) => {
                        let single = space.singleton(&z);
                        Ok(if z == *value { w.union(&single) } else { w.difference(&single) })
                    }
                    _ => Ok(w),
                }
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Selection::OrderMax => "max".into(),
            Selection::OrderMin => "min".into(),
            Selection::Join(c) => format!("join[{}]", c.decomp.describe()),
            Selection::Meet(c) => format!("meet[{}]", c.decomp.describe()),
            Selection::Restrict { parent, subspace } => format!("{} on {subspace}", parent.describe()),
            Selection::Patched { base, at, value } => format!("{} patched at {at} to {value}", base.describe()),
        }
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// A selection that is `q`-maximal or `q`-minimal on the closed subspace
/// `Y ∋ q`, built from the tail chain at `q` or the split off `{q}`.
pub fn extreme_fiber_selection(space: &Space, subspace: &PointSet, q: &Point, mode: Mode) -> Result<Selection> {
    let y = space.saturate(subspace);
    if y == space.singleton(q) {
        return Ok(Selection::OrderMax);
    }
    let d = decomp_at_in(space, q, &y)?;
    let fibers = FiberFamily::uniform(Selection::OrderMax);
    match mode {
        Mode::Maximal => Selection::join(d, fibers, true),
        Mode::Minimal => Selection::meet(d, fibers, true),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtremalityVerdict {
    Pass { checked: usize },
    Fail { witness: PointSet, value: Point },
}

impl ExtremalityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ExtremalityVerdict::Pass { .. })
    }
}

/// Exhaustive check of `p`-maximality (`f(S) = p` whenever `p ∈ S`) or
/// `p`-minimality (`f(S) ≠ p` whenever `S ≠ {p}`) over `family`, keeping
/// only members inside `domain` when one is given.
pub fn extremality_check(
    space: &Space,
    f: &Selection,
    p: &Point,
    mode: Mode,
    family: &[PointSet],
    domain: Option<&PointSet>,
) -> Result<ExtremalityVerdict> {
    let single = space.singleton(p);
    let mut checked = 0;
    for s in family {
        if domain.is_some_and(|d| !s.is_subset(d)) {
            continue;
        }
        let bad = match mode {
            Mode::Maximal => space.contains(s, p) && f.eval(space, s)? != *p,
            Mode::Minimal => *s != single && f.eval(space, s)? == *p,
        };
        checked += 1;
        if bad {
            return Ok(ExtremalityVerdict::Fail { witness: s.clone(), value: f.eval(space, s)? });
        }
    }
    Ok(ExtremalityVerdict::Pass { checked })
}

/// First member of `family` with `f(S) ∉ S`.
pub fn selection_law_check(space: &Space, f: &Selection, family: &[PointSet]) -> Result<Option<PointSet>> {
    for s in family {
        if !space.contains(s, &f.eval(space, s)?) {
            return Ok(Some(s.clone()));
        }
    }
    Ok(None)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ContinuityVerdict {
    Pass { nets: usize },
    /// `f(S_n)` is outside the `k`-th neighbourhood `open` of `f(lim S_n)`.
    Fail { net: usize, n: u64, k: u64, open: PointSet },
}

impl ContinuityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ContinuityVerdict::Pass { .. })
    }
}

/// Checks `f(S_n) → f(S)` along each net: for every level `k` up to
/// `2^(depth+1)`, `f(S_n)` must settle inside the canonical neighbourhood
/// `N_k(f(S))` by half the window.
pub fn continuity_check(
    space: &Space,
    f: &Selection,
    nets: &[ConvergentNet],
    depth: u32,
) -> Result<ContinuityVerdict> {
    for (i, net) in nets.iter().enumerate() {
        if let NetVerdict::Fail { basic, n } = net_convergence_check(space, net, depth) {
            return Err(Error::Precondition(format!("net {i} ({net}) leaves {basic} at {n}")));
        }
        let target = f.eval(space, &net.declared_limit)?;
        let values = (0..=net.window).map(|n| f.eval(space, &net.term(space, n))).collect::<Result<Vec<_>>>()?;
        for k in (0..=depth + 1).map(|j| 1u64 << j) {
            let open = space.nbhd(&target, k);
            if let Err(n) = settles(net.window, |n| space.contains(&open, &values[n as usize])) {
                return Ok(ContinuityVerdict::Fail { net: i, n, k, open });
            }
        }
    }
    Ok(ContinuityVerdict::Pass { nets: nets.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{decomp_at, decomp_from_chain, ChainSpec, TailPiece};
    use crate::ordinal::ord;
    use crate::space::{closed_family, FamilyParams};

    fn omega() -> Space {
        Space::ordinal(ord("w"))
    }

    fn pt(space: &Space, s: &str) -> Point {
        space.parse_point(s).unwrap()
    }

    fn unit_chain(space: &Space) -> Decomposition {
        let chain = ChainSpec {
            fixed: space.empty(),
            tails: vec![TailPiece { branch: 0, lambda: ord("w"), top: ord("w"), shift: -1 }],
        };
        decomp_from_chain(space, chain, &pt(space, "w")).unwrap()
    }

    #[test]
    fn order_extrema() {
        let x = omega();
        let s = x.parse_set(&["[0,3]", "{w}"]).unwrap();
        assert_eq!(Selection::OrderMax.eval(&x, &s).unwrap(), pt(&x, "w"));
        let s = x.parse_set(&["{5}", "[7,w]"]).unwrap();
        assert_eq!(Selection::OrderMin.eval(&x, &s).unwrap(), pt(&x, "5"));
    }

    #[test]
    fn join_and_meet_on_the_unit_chain() {
        let x = omega();
        let d = unit_chain(&x);
        let s = x.parse_set(&["{2}", "{7}"]).unwrap();
        let join = Selection::join(d.clone(), FiberFamily::uniform(Selection::OrderMax), true).unwrap();
        assert_eq!(join.eval(&x, &s).unwrap(), pt(&x, "7"));
        let meet = Selection::meet(d, FiberFamily::uniform(Selection::OrderMax), true).unwrap();
        let s = x.parse_set(&["{3}", "{w}"]).unwrap();
        assert_eq!(meet.eval(&x, &s).unwrap(), pt(&x, "3"));

        let fam = closed_family(&x, FamilyParams { grid_k: 6, max_runs: 2 });
        let w = pt(&x, "w");
        assert!(extremality_check(&x, &join, &w, Mode::Maximal, &fam, None).unwrap().passed());
        assert!(extremality_check(&x, &meet, &w, Mode::Minimal, &fam, None).unwrap().passed());
    }

    #[test]
    fn degenerate_decomposition_is_its_fiber_selection() {
        let x = omega();
        let d = Decomposition::explicit(&x, vec![x.universe()], Kind::Ordinal).unwrap();
        let join = Selection::join(d.clone(), FiberFamily::uniform(Selection::OrderMin), true).unwrap();
        let meet = Selection::meet(d, FiberFamily::uniform(Selection::OrderMin), true).unwrap();
        for s in closed_family(&x, FamilyParams { grid_k: 3, max_runs: 2 }) {
            let g = Selection::OrderMin.eval(&x, &s).unwrap();
            assert_eq!(join.eval(&x, &s).unwrap(), g);
            assert_eq!(meet.eval(&x, &s).unwrap(), g);
        }
    }

    #[test]
    fn block_join() {
        let x = Space::ordinal(ord("w*2"));
        let d = Decomposition::explicit(
            &x,
            vec![x.parse_set(&["[0,w]"]).unwrap(), x.parse_set(&["[w+1,w*2]"]).unwrap()],
            Kind::Ordinal,
        )
        .unwrap();
        let join = Selection::join(d, FiberFamily::uniform(Selection::OrderMin), false).unwrap();
        let s = x.parse_set(&["{3}", "{w+5}"]).unwrap();
        assert_eq!(join.eval(&x, &s).unwrap(), pt(&x, "w+5"));
    }

    #[test]
    fn order_max_extremality_at_the_ends() {
        let x = omega();
        let fam = closed_family(&x, FamilyParams { grid_k: 6, max_runs: 2 });
        let (w, zero) = (pt(&x, "w"), pt(&x, "0"));
        assert!(extremality_check(&x, &Selection::OrderMax, &w, Mode::Maximal, &fam, None).unwrap().passed());
        assert!(extremality_check(&x, &Selection::OrderMax, &zero, Mode::Minimal, &fam, None).unwrap().passed());
        assert!(extremality_check(&x, &Selection::OrderMin, &zero, Mode::Maximal, &fam, None).unwrap().passed());
        let v = extremality_check(&x, &Selection::OrderMin, &w, Mode::Maximal, &fam, None).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn winners_match_evaluation() {
        let x = Space::wedge(2).unwrap();
        let hub = pt(&x, "w");
        let d = decomp_at(&x, &hub).unwrap();
        let fs = [
            Selection::OrderMax,
            Selection::OrderMin,
            Selection::join(d.clone(), FiberFamily::uniform(Selection::OrderMax), true).unwrap(),
            Selection::meet(d, FiberFamily::uniform(Selection::OrderMin), true).unwrap(),
        ];
        let fam = closed_family(&x, FamilyParams { grid_k: 3, max_runs: 1 });
        let grid = x.grid_points(4);
        for f in &fs {
            for a in fam.iter().take(300) {
                let w = f.winners(&x, a).unwrap();
                for p in &grid {
                    let s = a.union(&x.singleton(p));
                    assert_eq!(x.contains(&w, p), f.eval(&x, &s).unwrap() == *p, "{f} {a} {p}");
                }
            }
        }
    }

    #[test]
    fn restrict_delegates() {
        let x = omega();
        let y = x.parse_set(&["[0,5]"]).unwrap();
        let r = Selection::restrict(Selection::OrderMax, y.clone());
        assert_eq!(r.eval(&x, &x.parse_set(&["{1}", "{4}"]).unwrap()).unwrap(), pt(&x, "4"));
        assert!(r.eval(&x, &x.universe()).is_err());
    }
}
