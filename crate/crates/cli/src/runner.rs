//! Executes suites against a resolved model.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::Instant;

use hypersel_core::basebuilder::{
    base_at_cut, decomp_to_extreme_selection, roundtrip, transfinite_base, PointwiseMaximal, TransfiniteParams,
};
use hypersel_core::decomp::{decomp_at, decomp_validate, ValidateParams};
use hypersel_core::hyperspace::canonical_nets;
use hypersel_core::selection::{
    continuity_check, extremality_check, selection_law_check, ContinuityVerdict, ExtremalityVerdict,
};
use hypersel_core::selrel::derived_sets;
use hypersel_core::space::closed_family;
use hypersel_core::{Delta, Error, FamilyParams, PointSet, Space};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::model::{mode, parse_ordinal, Model};
use crate::report::{CheckRecord, Report, RunParams, Status};
use crate::scenario::{BaseSpec, CheckKind, CheckSpec, ParamSpec};

/// Command-line overrides; unset fields fall back to per-space defaults.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub grid: Option<u64>,
    pub window: Option<u64>,
    pub seed: Option<u64>,
}

/// Grid offset for family enumeration: the full default on one branch,
/// smaller on amalgams where the per-branch product grows quickly.
pub fn default_grid(space: &Space) -> u64 {
    match space.branch_count() {
        1 => 10,
        2 => 6,
        _ => 2,
    }
}

pub fn base_params(space: &Space, o: &Overrides) -> RunParams {
    RunParams {
        grid: o.grid.unwrap_or_else(|| default_grid(space)),
        max_runs: 2,
        window: o.window.unwrap_or(64),
        depth: 2,
        seed: o.seed.unwrap_or(0),
    }
}

fn effective(base: RunParams, p: &ParamSpec, o: &Overrides) -> RunParams {
    RunParams {
        grid: o.grid.or(p.grid).unwrap_or(base.grid),
        max_runs: p.max_runs.unwrap_or(base.max_runs),
        window: o.window.or(p.window).unwrap_or(base.window),
        depth: p.depth.unwrap_or(base.depth),
        seed: base.seed,
    }
}

pub fn items(s: &PointSet) -> Value {
    json!(s.items())
}

pub struct Outcome {
    pub status: Status,
    pub detail: String,
    pub witness: Option<Value>,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { status: Status::Pass, detail: detail.into(), witness: None }
}

fn fail(detail: impl Into<String>, witness: Value) -> Outcome {
    Outcome { status: Status::Fail, detail: detail.into(), witness: Some(witness) }
}

/// Construction failures are check failures; anything else is an error.
fn from_core(e: Error, context: &str) -> Outcome {
    let verification = matches!(e, Error::TheoremViolation { .. } | Error::Precondition(_) | Error::Stuck { .. });
    let witness = match &e {
        Error::TheoremViolation { stage, witness } => json!({ "stage": stage, "witness": witness }),
        Error::Stuck { stage, reason } => json!({ "stage": stage, "reason": reason }),
        other => json!({ "error": other.to_string() }),
    };
    Outcome {
        status: if verification { Status::Fail } else { Status::Error },
        detail: format!("{context}: {e}"),
        witness: Some(witness),
    }
}

type FamilyCache = BTreeMap<(u64, usize), Rc<Vec<PointSet>>>;

pub struct Runner<'m> {
    pub model: &'m Model,
    pub overrides: Overrides,
    families: RefCell<FamilyCache>,
}

impl<'m> Runner<'m> {
    pub fn new(model: &'m Model, overrides: Overrides) -> Self {
        Runner { model, overrides, families: RefCell::new(BTreeMap::new()) }
    }

    pub fn params(&self) -> RunParams {
        base_params(&self.model.space, &self.overrides)
    }

    fn family(&self, p: &RunParams) -> Rc<Vec<PointSet>> {
        let key = (p.grid, p.max_runs);
        self.families
            .borrow_mut()
            .entry(key)
            .or_insert_with(|| Rc::new(closed_family(&self.model.space, FamilyParams { grid_k: p.grid, max_runs: p.max_runs })))
            .clone()
    }

    pub fn run(&self) -> Report {
        let base = self.params();
        let mut records = Vec::new();
        for suite in &self.model.suites {
            for c in &suite.checks {
                records.push(self.run_check(&suite.name, c, base));
            }
        }
        Report::new(&self.model.name, base, records)
    }

    fn run_check(&self, suite: &str, c: &CheckSpec, base: RunParams) -> CheckRecord {
        let p = effective(base, &c.params, &self.overrides);
        let start = Instant::now();
        let out = self.outcome(&c.kind, &p).unwrap_or_else(|e| Outcome {
            status: Status::Error,
            detail: e.clone(),
            witness: Some(json!({ "error": e })),
        });
        CheckRecord {
            suite: suite.into(),
            name: c.name.clone(),
            check: kind_name(&c.kind).into(),
            status: out.status,
            detail: out.detail,
            witness: out.witness,
            params: p,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    fn outcome(&self, kind: &CheckKind, p: &RunParams) -> Result<Outcome, String> {
        let m = self.model;
        let x = &m.space;
        Ok(match kind {
            CheckKind::SelectionLaw { selection } => {
                let f = m.selection(selection)?;
                let fam = self.family(p);
                match selection_law_check(x, &f, &fam) {
                    Ok(None) => pass(format!("{} sets", fam.len())),
                    Ok(Some(s)) => {
                        let v = f.eval(x, &s).map(|q| q.to_string()).unwrap_or_default();
                        fail("value outside its argument", json!({ "set": items(&s), "value": v }))
                    }
                    Err(e) => from_core(e, "selection law"),
                }
            }
            CheckKind::Extremality { selection, point, mode: md, domain } => {
                let f = m.selection(selection)?;
                let q = m.point(point)?;
                let dom = domain.as_ref().map(|d| m.set(d)).transpose()?;
                match extremality_check(x, &f, &q, mode(*md), &self.family(p), dom.as_ref()) {
                    Ok(ExtremalityVerdict::Pass { checked }) => pass(format!("{checked} sets")),
                    Ok(ExtremalityVerdict::Fail { witness, value }) => fail(
                        format!("f takes {value} on a set that {}", if *md == crate::scenario::ModeSpec::Maximal { "contains the point" } else { "is not the singleton" }),
                        json!({ "set": items(&witness), "value": value.to_string() }),
                    ),
                    Err(e) => from_core(e, "extremality"),
                }
            }
            CheckKind::Continuity { selection, nets } => {
                let f = m.selection(selection)?;
                let corpus = match nets {
                    Some(names) => names.iter().map(|n| m.nets[n].clone().with_window(p.window)).collect(),
                    None => canonical_nets(x, p.grid, p.window),
                };
                match continuity_check(x, &f, &corpus, p.depth) {
                    Ok(ContinuityVerdict::Pass { nets }) => pass(format!("{nets} nets")),
                    Ok(ContinuityVerdict::Fail { net, n, k, open }) => {
                        let net = &corpus[net];
                        let term = net.term(x, n);
                        fail(
                            format!("f(S_n) leaves the level-{k} neighbourhood of f(lim) along {net}"),
                            json!({
                                "net": net.shape.to_string(),
                                "limit": items(&net.declared_limit),
                                "n": n,
                                "term": items(&term),
                                "level": k,
                                "open": items(&open),
                            }),
                        )
                    }
                    Err(e) => from_core(e, "continuity"),
                }
            }
            CheckKind::DerivedSets { selection, opens, sample } => {
                let f = m.selection(selection)?;
                let mut vs = opens.iter().map(|o| m.set(o)).collect::<Result<Vec<_>, _>>()?;
                if *sample > 0 {
                    let mut pool: Vec<PointSet> =
                        self.family(p).iter().map(|c| x.complement(c)).filter(|v| !v.is_empty()).collect();
                    pool.shuffle(&mut ChaCha8Rng::seed_from_u64(p.seed));
                    vs.extend(pool.into_iter().take(*sample));
                }
                let mut out = pass(format!("{} open sets", vs.len()));
                for v in &vs {
                    if let Err(e) = derived_sets(x, &f, v) {
                        let mut o = from_core(e, &format!("derived sets of {v}"));
                        o.witness = Some(json!({ "open": items(v), "reason": o.detail }));
                        out = o;
                        break;
                    }
                }
                out
            }
            CheckKind::ClopenModulo { set, expect } => {
                let s = m.set(set)?;
                match x.clopen_modulo(&s) {
                    Ok(d) => {
                        let got = match &d {
                            Delta::Clopen => "clopen".to_string(),
                            Delta::Modulo(q) => q.to_string(),
                            Delta::NotInDelta => "none".to_string(),
                        };
                        let want = match expect.as_str() {
                            "clopen" | "none" => expect.clone(),
                            pt => m.point(pt)?.to_string(),
                        };
                        if got == want {
                            pass(got)
                        } else {
                            fail(format!("expected {want}, got {got}"), json!({ "set": items(&s), "got": got }))
                        }
                    }
                    Err(e) => from_core(e, "clopen modulo"),
                }
            }
            CheckKind::Decomposition { decomposition } => {
                let d = &m.decompositions[decomposition];
                let r = decomp_validate(x, d, ValidateParams { index_k: 8, window: p.window });
                match r.first_failure() {
                    None => pass(format!("{} checks; {}", r.checks.len(), r.notes.join("; "))),
                    Some(c) => fail(
                        format!("check {} failed", c.name),
                        json!({ "check": c.name, "witness": c.witness.clone().unwrap_or_default() }),
                    ),
                }
            }
            CheckKind::Base { base } => match self.build_base(base, p) {
                Ok(v) => pass(format!("{} stages", v["stages"].as_array().map_or(0, |a| a.len()))),
                Err(o) => o,
            },
            CheckKind::Roundtrip { selection, point, gamma } => {
                let f = m.selection(selection)?;
                let q = m.point(point)?;
                let g = parse_ordinal(gamma)?;
                let tp = TransfiniteParams { window: p.window, ..TransfiniteParams::default() };
                match roundtrip(x, &f, &q, &g, &tp, &self.family(p)) {
                    Ok(rt) => pass(format!("{} limit stages; {}", rt.run.limits.len(), rt.decomp.describe())),
                    Err(e) => from_core(e, "roundtrip"),
                }
            }
            CheckKind::ExtremeEverywhere { mode: md } => {
                let fam = self.family(p);
                let pts = x.grid_points(p.grid);
                let mut out = pass(format!("{} points", pts.len()));
                for q in &pts {
                    let res = decomp_at(x, q).and_then(|d| decomp_to_extreme_selection(x, &d, q, mode(*md), &fam));
                    if let Err(e) = res {
                        let mut o = from_core(e, &format!("at {q}"));
                        o.witness = Some(json!({ "point": q.to_string(), "reason": o.detail }));
                        out = o;
                        break;
                    }
                }
                out
            }
        })
    }

    /// Runs a named base construction and serializes its stages.
    pub fn build_base(&self, name: &str, p: &RunParams) -> Result<Value, Outcome> {
        let m = self.model;
        let x = &m.space;
        let spec = m.bases.get(name).ok_or_else(|| Outcome {
            status: Status::Error,
            detail: format!("unknown base {name:?}"),
            witness: None,
        })?;
        let usage = |e: String| Outcome { status: Status::Error, detail: e, witness: None };
        match spec {
            BaseSpec::Cut { selection, cut, steps } => {
                let f = m.selection(selection).map_err(usage)?;
                let cb = base_at_cut(x, &f, &m.cuts[cut], *steps, &self.family(p)).map_err(|e| from_core(e, "cut base"))?;
                let stages: Vec<Value> =
                    cb.stages.iter().map(|s| json!({ "u": items(&s.u), "q": s.q.to_string() })).collect();
                Ok(json!({ "kind": "cut", "point": m.cuts[cut].p.to_string(), "stages": stages, "opens_checked": cb.opens_checked }))
            }
            BaseSpec::Transfinite { selection, point, gamma } => {
                let f = m.selection(selection).map_err(usage)?;
                let q = m.point(point).map_err(usage)?;
                let g = parse_ordinal(gamma).map_err(usage)?;
                let tp = TransfiniteParams { window: p.window, ..TransfiniteParams::default() };
                let run = transfinite_base(x, &f, &q, &g, &PointwiseMaximal, &tp).map_err(|e| from_core(e, "transfinite base"))?;
                let gb = &run.base;
                let shown: Vec<Value> = sample_indices(&gb.gamma)
                    .into_iter()
                    .map(|a| json!({ "index": a.to_string(), "h": items(&gb.member(x, &a)) }))
                    .collect();
                let limits: Vec<Value> = run
                    .limits
                    .iter()
                    .map(|l| json!({ "lambda": l.lambda.to_string(), "h": items(&l.h), "f_lambda": items(&l.f_lambda), "removed": l.removed.to_string() }))
                    .collect();
                Ok(json!({
                    "kind": "transfinite",
                    "point": q.to_string(),
                    "gamma": gb.gamma.to_string(),
                    "successor_steps": run.successor_steps,
                    "limits": limits,
                    "stages": shown,
                }))
            }
        }
    }
}

fn sample_indices(gamma: &hypersel_core::Ordinal) -> Vec<hypersel_core::Ordinal> {
    use hypersel_core::Ordinal;
    let mut out = Vec::new();
    let blocks = if gamma.is_limit() { gamma.terms()[0].coef } else { 0 };
    for i in 0..blocks {
        let start = Ordinal::omega_pow_times(1, i);
        out.extend((0..4).map(|r| start.add_finite(r)));
    }
    out.push(gamma.clone());
    out.retain(|a| a <= gamma);
    out.dedup();
    out
}

fn kind_name(k: &CheckKind) -> &'static str {
    match k {
        CheckKind::SelectionLaw { .. } => "selection_law",
        CheckKind::Extremality { .. } => "extremality",
        CheckKind::Continuity { .. } => "continuity",
        CheckKind::DerivedSets { .. } => "derived_sets",
        CheckKind::ClopenModulo { .. } => "clopen_modulo",
        CheckKind::Decomposition { .. } => "decomposition",
        CheckKind::Base { .. } => "base",
        CheckKind::Roundtrip { .. } => "roundtrip",
        CheckKind::ExtremeEverywhere { .. } => "extreme_everywhere",
    }
}
