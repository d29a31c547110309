//! The relation `p ≼_f A ⇔ f(A ∪ {p}) = p`, the sets `⟨V⟩_f` and `[V]_f`
//! derived from it, and clopen separations built from them.

use crate::basebuilder::PCut;
use crate::error::{Error, Result};
use crate::selection::Selection;
use crate::space::{Delta, Point, PointSet, Space};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    NotRelated,
    Related,
    StrictlyRelated,
}

pub fn sel_rel(space: &Space, f: &Selection, p: &Point, a: &PointSet) -> Result<Relation> {
    let s = space.saturate(a).union(&space.singleton(p));
    Ok(if f.eval(space, &s)? != *p {
        Relation::NotRelated
    } else if space.contains(a, p) {
        Relation::Related
    } else {
        Relation::StrictlyRelated
    })
}

/// `⟨V⟩_f = {x : x ◁_f V^∁}` and `[V]_f = {x : x ≼_f V^∁}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivedSets {
    pub interior: PointSet,
    pub bracket: PointSet,
    /// `f(V^∁)`, absent when `V = X`.
    pub boundary_point: Option<Point>,
}

/// Computes both derived sets exactly and checks that the interior is open,
/// the bracket closed, and the bracket clopen modulo `f(V^∁)`.
pub fn derived_sets(space: &Space, f: &Selection, v: &PointSet) -> Result<DerivedSets> {
    let v = space.saturate(v);
    if v.is_empty() {
        return Err(Error::Empty("open set"));
    }
    if !space.is_open(&v) {
        return Err(Error::NotOpen { what: "argument of the derived sets", set: v.to_string() });
    }
    let c = space.complement(&v);
    if c.is_empty() {
        let x = space.universe();
        return Ok(DerivedSets { interior: x.clone(), bracket: x, boundary_point: None });
    }
    let bracket = f.winners(space, &c)?;
    let interior = bracket.difference(&c);
    let q = f.eval(space, &c)?;
    let violation = |what: &str| Error::TheoremViolation {
        stage: format!("derived sets of {v}"),
        witness: format!("{what}: interior {interior}, bracket {bracket}, f(V^c) = {q}"),
    };
    if !space.is_open(&interior) {
        return Err(violation("interior not open"));
    }
    if !space.is_closed(&bracket) {
        return Err(violation("bracket not closed"));
    }
    if bracket != interior.union(&space.singleton(&q)) {
        return Err(violation("bracket is not interior plus boundary point"));
    }
    match space.clopen_modulo(&bracket)? {
        Delta::Clopen => {}
        Delta::Modulo(m) if m == q => {}
        other => return Err(violation(&format!("bracket classified as {other:?}"))),
    }
    Ok(DerivedSets { interior, bracket, boundary_point: Some(q) })
}

pub fn interior(space: &Space, f: &Selection, v: &PointSet) -> Result<PointSet> {
    Ok(derived_sets(space, f, v)?.interior)
}

/// `[W]_f` for `W = V ∖ {q}`, with the refinement conclusions verified: it is
/// clopen modulo `q`, and `p ∈ ⟨W⟩_f ⊊ [W]_f ⊆ V`.
pub fn refine_modulo(space: &Space, f: &Selection, v: &PointSet, p: &Point, q: &Point) -> Result<PointSet> {
    let v = space.saturate(v);
    if !space.contains(&v, p) {
        return Err(Error::Precondition(format!("{p} is not in {v}")));
    }
    if p == q {
        return Err(Error::Precondition("the removed point must differ from p".into()));
    }
    let dv = derived_sets(space, f, &v)?;
    if !space.contains(&dv.interior, q) {
        return Err(Error::Precondition(format!("{q} is not in the derived interior {}", dv.interior)));
    }
    let w = v.difference(&space.singleton(q));
    let dw = derived_sets(space, f, &w)?;
    let fail = |what: &str| Error::TheoremViolation { stage: format!("refining {v} at {q}"), witness: what.to_string() };
    if dw.boundary_point.as_ref() != Some(q) {
        return Err(fail(&format!("f(W^c) = {:?}, expected {q}", dw.boundary_point)));
    }
    if !space.contains(&dw.interior, p) {
        return Err(fail(&format!("{p} is not in ⟨W⟩ = {}", dw.interior)));
    }
    if dw.interior == dw.bracket || !dw.bracket.is_subset(&v) {
        return Err(fail(&format!("[W] = {} is not a proper extension inside V", dw.bracket)));
    }
    Ok(dw.bracket)
}

/// Supplies a `q`-maximal selection for any point `q`.
pub trait AuxSelections {
    fn maximal_at(&self, space: &Space, q: &Point) -> Result<Selection>;
}

/// Which construction [`clopen_separation`] follows.
#[derive(Clone, Debug)]
pub enum SeparationHint<'a> {
    /// Two refinements, the second under an auxiliary selection.
    TwoStep(&'a dyn AuxSelections),
    /// A clopen set avoiding `p` that contains some point of `⟨V⟩_f`.
    TotallyDisconnectedWitness(PointSet),
    CutPoint(&'a PCut),
}

impl std::fmt::Debug for dyn AuxSelections + '_ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("AuxSelections")
    }
}

fn stuck(stage: &str, reason: String) -> Error {
    Error::Stuck { stage: stage.to_string(), reason }
}

/// A clopen `U` with `p ∈ U ⊆ V`, for `p`-maximal `f`.
pub fn clopen_separation(
    space: &Space,
    f: &Selection,
    p: &Point,
    v: &PointSet,
    hint: &SeparationHint<'_>,
) -> Result<PointSet> {
    let v = space.saturate(v);
    if !space.contains(&v, p) || !space.is_open(&v) {
        return Err(Error::Precondition(format!("{v} is not an open set around {p}")));
    }
    let u = if space.is_isolated(p) {
        space.singleton(p)
    } else if space.is_clopen(&v) {
        v.clone()
    } else {
        let single = space.singleton(p);
        let dv = derived_sets(space, f, &v)?;
        match hint {
            SeparationHint::TwoStep(aux) => {
                let candidates = space.pick_points(&dv.interior.difference(&single));
                let q1 = candidates.first().ok_or_else(|| stuck("q1", format!("⟨V⟩ = {} has no point besides p", dv.interior)))?;
                let h1 = refine_modulo(space, f, &v, p, q1)?;
                let g = aux.maximal_at(space, q1)?;
                let rest = v.difference(&single);
                let inner = derived_sets(space, &g, &rest)?.interior.difference(&space.singleton(q1));
                let mut picks = space.pick_points(&inner.difference(&h1));
                picks.extend(space.pick_points(&inner.intersect(&h1)));
                picks
                    .iter()
                    .filter_map(|q2| {
                        let h2 = refine_modulo(space, &g, &rest, q1, q2).ok()?;
                        let u = h1.difference(&h2);
                        (space.contains(&u, p) && space.is_clopen(&u)).then_some(u)
                    })
                    .next()
                    .ok_or_else(|| stuck("q2", format!("no point of {inner} separates {q1} from {p}")))?
            }
            SeparationHint::TotallyDisconnectedWitness(w) => {
                let w = space.saturate(w);
                if !space.is_clopen(&w) || space.contains(&w, p) {
                    return Err(Error::Precondition(format!("{w} is not a clopen set avoiding {p}")));
                }
                let q = space
                    .pick_points(&dv.interior.intersect(&w))
                    .into_iter()
                    .next()
                    .ok_or_else(|| stuck("q", format!("{w} misses ⟨V⟩ = {}", dv.interior)))?;
                refine_modulo(space, f, &v, p, &q)?.difference(&w)
            }
            SeparationHint::CutPoint(cut) => {
                if cut.p != *p {
                    return Err(Error::Precondition(format!("the cut is at {}, not {p}", cut.p)));
                }
                let mut u = space.universe();
                for (i, side) in [&cut.x0, &cut.x1].into_iter().enumerate() {
                    let q = space
                        .pick_points(&dv.interior.intersect(side))
                        .into_iter()
                        .next()
                        .ok_or_else(|| stuck(&format!("q{i}"), format!("⟨V⟩ misses side {i}")))?;
                    u = u.intersect(&refine_modulo(space, f, &v, p, &q)?.union(side));
                }
                u
            }
        }
    };
    if !(space.contains(&u, p) && u.is_subset(&v) && space.is_clopen(&u)) {
        return Err(Error::TheoremViolation { stage: format!("separating {p} inside {v}"), witness: u.to_string() });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::ord;

    fn omega() -> Space {
        Space::ordinal(ord("w"))
    }

    #[test]
    fn relation_examples() {
        let x = omega();
        let a = x.parse_set(&["[0,3]"]).unwrap();
        let f = Selection::OrderMax;
        let p = |s| x.parse_point(s).unwrap();
        assert_eq!(sel_rel(&x, &f, &p("w"), &a).unwrap(), Relation::StrictlyRelated);
        assert_eq!(sel_rel(&x, &f, &p("2"), &a).unwrap(), Relation::NotRelated);
        assert_eq!(sel_rel(&x, &f, &p("3"), &a).unwrap(), Relation::Related);
    }

    #[test]
    fn derived_sets_of_order_max() {
        let x = omega();
        let f = Selection::OrderMax;
        let d = derived_sets(&x, &f, &x.parse_set(&["(5,w]"]).unwrap()).unwrap();
        assert_eq!(d.boundary_point, Some(x.parse_point("5").unwrap()));
        assert_eq!(d.interior, x.parse_set(&["(5,w]"]).unwrap());
        assert_eq!(d.bracket, x.parse_set(&["[5,w]"]).unwrap());

        let d = derived_sets(&x, &f, &x.parse_set(&["[0,5]"]).unwrap()).unwrap();
        assert_eq!(d.boundary_point, Some(x.parse_point("w").unwrap()));
        assert!(d.interior.is_empty());
        assert_eq!(d.bracket, x.parse_set(&["{w}"]).unwrap());

        let d = derived_sets(&x, &f, &x.universe()).unwrap();
        assert_eq!(d.interior, x.universe());
        assert_eq!(d.bracket, x.universe());
    }

    #[test]
    fn refinement_at_a_successor() {
        let x = omega();
        let f = Selection::OrderMax;
        let (w, five) = (x.parse_point("w").unwrap(), x.parse_point("5").unwrap());
        let h = refine_modulo(&x, &f, &x.parse_set(&["(3,w]"]).unwrap(), &w, &five).unwrap();
        assert_eq!(h, x.parse_set(&["[5,w]"]).unwrap());
        assert!(refine_modulo(&x, &f, &x.parse_set(&["(3,w]"]).unwrap(), &w, &x.parse_point("2").unwrap()).is_err());
    }

    #[test]
    fn clopen_set_minus_isolated_point() {
        let x = omega();
        let v = x.parse_set(&["[0,w]"]).unwrap();
        let (w, three) = (x.parse_point("w").unwrap(), x.parse_point("3").unwrap());
        let h = refine_modulo(&x, &Selection::OrderMax, &v, &w, &three).unwrap();
        assert_eq!(h, x.parse_set(&["[3,w]"]).unwrap());
    }

    #[test]
    fn witness_separation() {
        let x = Space::ordinal(ord("w*2"));
        let top = x.parse_point("w*2").unwrap();
        let v = x.parse_set(&["[0,w)", "[w+1,w*2]"]).unwrap();
        assert!(!x.is_clopen(&v));
        let hint = SeparationHint::TotallyDisconnectedWitness(x.parse_set(&["[w+1,w+3]"]).unwrap());
        let u = clopen_separation(&x, &Selection::OrderMax, &top, &v, &hint).unwrap();
        assert_eq!(u, x.parse_set(&["[w+4,w*2]"]).unwrap());
        let five = x.parse_point("5").unwrap();
        assert_eq!(clopen_separation(&x, &Selection::OrderMax, &five, &v, &hint).unwrap(), x.parse_set(&["{5}"]).unwrap());
    }
}
