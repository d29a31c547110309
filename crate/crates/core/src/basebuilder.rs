//! Neighbourhood bases produced by extreme selections: countable bases at cut
//! points, transfinite bases, γ-bases, and the way back to decompositions
//! and extreme selections.

use crate::decomp::{
    decomp_at, decomp_validate, BaseSchedule, CoordSchedule, DecompReport, Decomposition, Kind, ValidateParams,
};
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::selection::{extreme_fiber_selection, extremality_check, ExtremalityVerdict, FiberFamily, Mode, Selection};
use crate::selrel::{clopen_separation, derived_sets, AuxSelections, SeparationHint};
use crate::space::{Delta, Point, PointSet, Space};

/// `X ∖ {p} = X0 ∪ X1` with `cl X0 ∩ cl X1 = {p}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PCut {
    pub p: Point,
    pub x0: PointSet,
    pub x1: PointSet,
}

impl PCut {
    pub fn side(&self, i: usize) -> &PointSet {
        if i.is_multiple_of(2) {
            &self.x0
        } else {
            &self.x1
        }
    }
}

pub fn pcut_validate(space: &Space, p: &Point, x0: &PointSet, x1: &PointSet) -> Result<PCut> {
    space.check(x0)?;
    space.check(x1)?;
    let (x0, x1) = (space.saturate(x0), space.saturate(x1));
    let single = space.singleton(p);
    let punctured = space.universe().difference(&single);
    if x0.union(&x1) != punctured {
        return Err(Error::Precondition(format!("{x0} and {x1} do not cover X minus {p}")));
    }
    let meet = space.closure(&x0).intersect(&space.closure(&x1));
    if meet != single {
        return Err(Error::Precondition(format!("the closures of the sides meet in {meet}, not in {{{p}}}")));
    }
    Ok(PCut { p: p.clone(), x0, x1 })
}

/// The canonical cut of a wedge: branch 0 against all other branches.
pub fn wedge_cut(space: &Space, p: &Point) -> Result<PCut> {
    let punctured = space.universe().difference(&space.singleton(p));
    let bc = space.branch_count();
    let first = PointSet::from_runs(bc, punctured.runs(0).iter().cloned().map(|r| (0, r)));
    let rest = punctured.difference(&first);
    pcut_validate(space, p, &first, &rest)
}

fn require_maximal(space: &Space, f: &Selection, p: &Point, family: &[PointSet]) -> Result<()> {
    match extremality_check(space, f, p, Mode::Maximal, family, None)? {
        ExtremalityVerdict::Pass { .. } => Ok(()),
        ExtremalityVerdict::Fail { witness, value } => Err(Error::Precondition(format!(
            "selection is not {p}-maximal: f({witness}) = {value}"
        ))),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutStage {
    pub u: PointSet,
    pub q: Point,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutBase {
    pub stages: Vec<CutStage>,
    /// Number of grid opens around `p` checked for absorption.
    pub opens_checked: usize,
}

/// Builds `U_n = ⟨U_{n-1}⟩_f ∖ {q_n}` with `q_n` taken from
/// `⟨⟨U_{n-1}⟩_f⟩_f ∩ X_{n mod 2}` close to `p`, starting from `U_{-1} = X`,
/// and verifies that the sequence is a local base at `p` against every open
/// complement of a member of `family`.
pub fn base_at_cut(space: &Space, f: &Selection, cut: &PCut, steps: usize, family: &[PointSet]) -> Result<CutBase> {
    let p = &cut.p;
    require_maximal(space, f, p, family)?;
    let mut prev = space.universe();
    let mut stages: Vec<CutStage> = Vec::with_capacity(steps);
    for n in 0..steps {
        let d = derived_sets(space, f, &prev)?.interior;
        let dd = derived_sets(space, f, &d)?.interior;
        let side = cut.side(n);
        let pool = dd.intersect(side).intersect(&space.nbhd(p, 2 * (n as u64 + 1)));
        let q = space
            .pick_points(&pool)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Stuck { stage: format!("U_{n}"), reason: format!("no point in {pool}") })?;
        let u = d.difference(&space.singleton(&q));
        stages.push(CutStage { u: u.clone(), q });
        prev = u;
    }
    for (n, st) in stages.iter().enumerate() {
        let img = f.eval(space, &space.complement(&st.u))?;
        if !space.contains(cut.side(n), &img) || img != st.q {
            return Err(Error::TheoremViolation {
                stage: format!("U_{n}"),
                witness: format!("f(U_{n}^c) = {img} is not the chosen point {} of side {}", st.q, n % 2),
            });
        }
        if let Some(next) = stages.get(n + 1) {
            let d = derived_sets(space, f, &st.u)?.interior;
            if !space.contains(&next.u, p) || !next.u.is_subset(&d) {
                return Err(Error::TheoremViolation {
                    stage: format!("U_{}", n + 1),
                    witness: format!("{} is not inside ⟨U_{n}⟩ = {d} around {p}", next.u),
                });
            }
        }
    }
    let mut opens: Vec<PointSet> = family
        .iter()
        .filter(|c| !space.contains(c, p))
        .map(|c| space.complement(c))
        .collect();
    opens.extend((0..=8).map(|k| space.nbhd(p, k)));
    for o in &opens {
        if !stages.iter().any(|st| st.u.is_subset(o)) {
            return Err(Error::TheoremViolation {
                stage: "local base".into(),
                witness: format!("no stage fits inside the open set {o}"),
            });
        }
    }
    if let Some(last) = stages.last() {
        let extra = space.grid_points(8).into_iter().find(|q| q != p && stages.iter().all(|st| space.contains(&st.u, q)));
        if let Some(q) = extra {
            return Err(Error::TheoremViolation {
                stage: "intersection".into(),
                witness: format!("{q} lies in every stage, the last being {}", last.u),
            });
        }
    }
    Ok(CutBase { stages, opens_checked: opens.len() })
}

/// `q`-maximal selections from the tail chain at `q`.
#[derive(Clone, Copy, Debug, Default)]
pub struct PointwiseMaximal;

impl AuxSelections for PointwiseMaximal {
    fn maximal_at(&self, space: &Space, q: &Point) -> Result<Selection> {
        extreme_fiber_selection(space, &space.universe(), q, Mode::Maximal)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BaseFamily {
    /// The one-member base `{H_0}` at an isolated point.
    Single(PointSet),
    Schedule(BaseSchedule),
}

/// A decreasing neighbourhood base `{H_α : α < γ}` at `p`, with `H_γ = {p}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaBase {
    pub p: Point,
    pub gamma: Ordinal,
    pub family: BaseFamily,
}

impl GammaBase {
    pub fn member(&self, space: &Space, alpha: &Ordinal) -> PointSet {
        match &self.family {
            BaseFamily::Single(h) if alpha.is_zero() => h.clone(),
            BaseFamily::Single(_) => space.singleton(&self.p),
            BaseFamily::Schedule(s) => s.member(space, &space.universe(), &self.gamma, alpha),
        }
    }
}

/// Limits up to the configured cap, and the window of successor stages run
/// explicitly in each block.
#[derive(Clone, Debug)]
pub struct TransfiniteParams {
    pub max_gamma: Ordinal,
    pub window: u64,
}

impl Default for TransfiniteParams {
    fn default() -> Self {
        TransfiniteParams { max_gamma: Ordinal::omega_pow_times(1, 2), window: 64 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LimitStage {
    pub lambda: Ordinal,
    pub h: PointSet,
    pub f_lambda: PointSet,
    pub removed: Point,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TransfiniteRun {
    pub base: GammaBase,
    pub successor_steps: usize,
    pub limits: Vec<LimitStage>,
}

fn schedule_for(space: &Space, p: &Point, gamma: &Ordinal) -> Result<BaseSchedule> {
    let mut coords = Vec::new();
    for (b, x) in space.coords(p) {
        if !x.is_limit() {
            coords.push(CoordSchedule::Isolated { branch: b, x });
        } else if let Some(x0) = x.sub_right(gamma) {
            coords.push(CoordSchedule::Shift { branch: b, x, x0 });
        } else if *gamma == Ordinal::omega() {
            coords.push(CoordSchedule::Fundamental { branch: b, x });
        } else {
            return Err(Error::Unsupported(format!("no base of length {gamma} at coordinate {b}:{x}")));
        }
    }
    Ok(BaseSchedule { point: p.clone(), coords })
}

fn omega_times(i: u64) -> Ordinal {
    Ordinal::omega_pow_times(1, i)
}

/// Runs the transfinite construction of a `γ`-base at `p` for the
/// `p`-maximal selection `f`: successor stages by clopen separation inside
/// `⟨U_α⟩_f`, and at each limit `λ` the set `H_λ = ⋂ U_α`, checked against
/// `[F_λ^∁]_f`, minus the point `f(F_λ)`.
pub fn transfinite_base(
    space: &Space,
    f: &Selection,
    p: &Point,
    gamma: &Ordinal,
    aux: &dyn AuxSelections,
    params: &TransfiniteParams,
) -> Result<TransfiniteRun> {
    if space.is_isolated(p) {
        let base = GammaBase { p: p.clone(), gamma: Ordinal::finite(1), family: BaseFamily::Single(space.singleton(p)) };
        return Ok(TransfiniteRun { base, successor_steps: 0, limits: Vec::new() });
    }
    if !gamma.is_limit() || *gamma > params.max_gamma || gamma.degree() != Some(1) {
        return Err(Error::Unsupported(format!("base length {gamma} is outside the limits 0 < γ <= {}", params.max_gamma)));
    }
    let schedule = schedule_for(space, p, gamma)?;
    let x = space.universe();
    let target = |a: &Ordinal| schedule.member(space, &x, gamma, a);
    let blocks = gamma.terms()[0].coef;
    let hint = SeparationHint::TwoStep(aux);
    let mut u = x.clone();
    let mut steps = 0;
    let mut limits = Vec::new();
    for i in 0..blocks {
        let base = omega_times(i);
        for r in 1..=params.window {
            let alpha = base.add_finite(r);
            let open = derived_sets(space, f, &u)?.interior;
            let t = target(&alpha);
            let next = clopen_separation(space, f, p, &open.intersect(&t), &hint)?;
            if next != t {
                return Err(Error::Stuck {
                    stage: format!("U_{alpha}"),
                    reason: format!("separation gave {next}, the schedule needs {t}"),
                });
            }
            if !space.closure(&next).is_subset(&open) || next == open {
                return Err(Error::TheoremViolation {
                    stage: format!("U_{alpha}"),
                    witness: format!("{next} is not strictly inside ⟨U⟩ = {open}"),
                });
            }
            u = next;
            steps += 1;
        }
        let lambda = omega_times(i + 1);
        if lambda == *gamma {
            break;
        }
        let h = target(&lambda);
        let f_lambda = space.complement_closure(&h)?;
        let bracket = derived_sets(space, f, &space.complement(&f_lambda))?.bracket;
        if bracket != h {
            return Err(Error::TheoremViolation {
                stage: format!("H_{lambda}"),
                witness: format!("H = {h} but [F^c] = {bracket}"),
            });
        }
        let q = f.eval(space, &f_lambda)?;
        if q == *p {
            return Err(Error::TheoremViolation { stage: format!("H_{lambda}"), witness: format!("f({f_lambda}) = p") });
        }
        u = h.difference(&space.singleton(&q));
        limits.push(LimitStage { lambda, h, f_lambda, removed: q });
    }
    let tail = target(&gamma.fundamental(params.window).expect("limit").succ());
    let meet = schedule
        .coords
        .iter()
        .all(|c| match c {
            CoordSchedule::Shift { x, x0, .. } => x0.add(gamma) == *x,
            _ => true,
        });
    if !meet || !space.contains(&tail, p) {
        return Err(Error::TheoremViolation {
            stage: format!("H_{gamma}"),
            witness: format!("the stages do not shrink to {{{p}}}"),
        });
    }
    let base = GammaBase { p: p.clone(), gamma: gamma.clone(), family: BaseFamily::Schedule(schedule) };
    gamma_base_validate(space, &base, params.window)?;
    Ok(TransfiniteRun { base, successor_steps: steps, limits })
}

/// Successor members clopen and strictly smaller, each limit member absorbed
/// by earlier members around it, every member clopen modulo a point.
pub fn gamma_base_validate(space: &Space, gb: &GammaBase, window: u64) -> Result<()> {
    let fail = |stage: String, witness: String| Err(Error::TheoremViolation { stage, witness });
    if let BaseFamily::Single(h) = &gb.family {
        if *h != space.singleton(&gb.p) || !space.is_isolated(&gb.p) {
            return fail("H_0".into(), format!("{h} is not an isolated singleton"));
        }
        return Ok(());
    }
    let probe = ValidateParams { index_k: 8, window };
    let d = Decomposition::from_base(space, space.universe(), gb.gamma.clone(), schedule_of(gb).clone())?;
    for a in d.index_sample(probe.index_k) {
        let h = gb.member(space, &a);
        if let Ok(Delta::NotInDelta) | Err(_) = space.clopen_modulo(&h) {
            return fail(format!("H_{a}"), format!("{h} is not clopen modulo a point"));
        }
        if a < gb.gamma {
            let next = gb.member(space, &a.succ());
            if !space.is_clopen(&next) || !next.is_subset(&h) || next == h {
                return fail(format!("H_{}", a.succ()), format!("{next} is not a clopen proper subset of {h}"));
            }
        }
    }
    for lambda in d.limits() {
        let h = gb.member(space, &lambda);
        for k in [1u64, 2, 4, 8] {
            let around = space.fatten(&h, k);
            let absorbed = (0..=window).any(|n| gb.member(space, &lambda.fundamental(n).expect("limit").succ()).is_subset(&around));
            if !absorbed {
                return fail(format!("H_{lambda}"), format!("no earlier member fits inside {around}"));
            }
        }
    }
    Ok(())
}

fn schedule_of(gb: &GammaBase) -> &BaseSchedule {
    match &gb.family {
        BaseFamily::Schedule(s) => s,
        BaseFamily::Single(_) => unreachable!("single bases have no schedule"),
    }
}

/// `η(x) = max{α <= γ : x ∈ H_α}`, validated, together with its report.
pub fn gamma_base_to_decomp(space: &Space, gb: &GammaBase) -> Result<(Decomposition, DecompReport)> {
    let d = match &gb.family {
        BaseFamily::Single(_) => decomp_at(space, &gb.p)?,
        BaseFamily::Schedule(s) => {
            if gb.member(space, &Ordinal::zero()) != space.universe() {
                return Err(Error::Precondition("H_0 must be the whole space".into()));
            }
            Decomposition::from_base(space, space.universe(), gb.gamma.clone(), s.clone())?
        }
    };
    let report = decomp_validate(space, &d, ValidateParams::default());
    if let Some(c) = report.first_failure() {
        return Err(Error::TheoremViolation {
            stage: format!("decomposition check {}", c.name),
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok((d, report))
}

/// Join (for `Maximal`) or meet (for `Minimal`) over `d`, whose top fiber
/// must be `{p}`. Limit fibers clopen modulo `q_λ` get a `q_λ`-minimal
/// selection under a join and a `q_λ`-maximal one under a meet. The result is
/// checked for extremality at `p` over `family` before it is returned.
pub fn decomp_to_extreme_selection(
    space: &Space,
    d: &Decomposition,
    p: &Point,
    mode: Mode,
    family: &[PointSet],
) -> Result<Selection> {
    if d.kind != Kind::Ordinal {
        return Err(Error::Precondition("an ordinal decomposition is required".into()));
    }
    let report = decomp_validate(space, d, ValidateParams::default());
    if let Some(c) = report.first_failure() {
        return Err(Error::Precondition(format!("decomposition fails {}: {}", c.name, c.witness.clone().unwrap_or_default())));
    }
    let top = d.level(space, &d.gamma);
    if top != space.singleton(p) {
        return Err(Error::Precondition(format!("top fiber is {top}, not {{{p}}}")));
    }
    let inner = match mode {
        Mode::Maximal => Mode::Minimal,
        Mode::Minimal => Mode::Maximal,
    };
    let mut fibers = FiberFamily::uniform(Selection::OrderMax);
    for (lambda, q) in &report.limit_points {
        if lambda < &d.gamma {
            fibers.overrides.insert(lambda.clone(), extreme_fiber_selection(space, &d.fiber(space, lambda), q, inner)?);
        }
    }
    let f = match mode {
        Mode::Maximal => Selection::join(d.clone(), fibers, true)?,
        Mode::Minimal => Selection::meet(d.clone(), fibers, true)?,
    };
    match extremality_check(space, &f, p, mode, family, None)? {
        ExtremalityVerdict::Pass { .. } => Ok(f),
        ExtremalityVerdict::Fail { witness, value } => Err(Error::TheoremViolation {
            stage: format!("{mode} selection at {p}"),
            witness: format!("f({witness}) = {value}"),
        }),
    }
}

/// The extreme selection at `p` obtained from the canonical decomposition at
/// `p`.
pub fn extreme_selection_at(space: &Space, p: &Point, mode: Mode, family: &[PointSet]) -> Result<Selection> {
    decomp_to_extreme_selection(space, &decomp_at(space, p)?, p, mode, family)
}

#[derive(Clone, Debug)]
pub struct Roundtrip {
    pub run: TransfiniteRun,
    pub decomp: Decomposition,
    pub report: DecompReport,
    pub selection: Selection,
}

/// `p`-maximal `f` → γ-base → decomposition → `p`-maximal join.
pub fn roundtrip(
    space: &Space,
    f: &Selection,
    p: &Point,
    gamma: &Ordinal,
    params: &TransfiniteParams,
    family: &[PointSet],
) -> Result<Roundtrip> {
    require_maximal(space, f, p, family)?;
    let run = transfinite_base(space, f, p, gamma, &PointwiseMaximal, params)?;
    let (decomp, report) = gamma_base_to_decomp(space, &run.base)?;
    let selection = decomp_to_extreme_selection(space, &decomp, p, Mode::Maximal, family)?;
    Ok(Roundtrip { run, decomp, report, selection })
}


#[cfg(test)]
mod cut_tests {
    use super::*;
    use crate::space::{closed_family, FamilyParams};

    #[test]
    fn wedge_hub_base() {
        let x = Space::wedge(2).unwrap();
        let hub = x.parse_point("w").unwrap();
        let fam = closed_family(&x, FamilyParams { grid_k: 6, max_runs: 2 });
        let f = extreme_selection_at(&x, &hub, Mode::Maximal, &fam).unwrap();
        let cut = wedge_cut(&x, &hub).unwrap();
        let cb = base_at_cut(&x, &f, &cut, 8, &fam).unwrap();
        assert_eq!(cb.stages.len(), 8);
        assert_eq!(cb.stages[0].u, x.parse_set(&["[0,2]", "[4,w]", "1:[0,w]"]).unwrap());
        assert_eq!(cb.stages[1].u, x.parse_set(&["[4,w]", "1:[3,4]", "1:[6,w]"]).unwrap());
        assert_eq!(cb.stages[1].q, x.parse_point("1:5").unwrap());
        assert!(base_at_cut(&x, &Selection::OrderMin, &cut, 8, &fam).is_err());
    }
}
