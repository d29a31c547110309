//! Scenario resolution: every named object is built and validated, and all
//! problems are collected before anything runs.

use std::collections::BTreeMap;

use hypersel_core::basebuilder::{extreme_selection_at, pcut_validate, PCut};
use hypersel_core::decomp::{decomp_at, decomp_from_chain, ChainSpec, Decomposition, Kind, TailPiece};
use hypersel_core::hyperspace::{ConvergentNet, NetShape};
use hypersel_core::selection::{FiberFamily, Mode, Selection};
use hypersel_core::{Ordinal, Point, PointSet, Space};

use crate::scenario::{BaseSpec, DecompSpec, ModeSpec, NetSpec, Scenario, SelSpec, SelTree, SetRef, Suite};

pub struct Model {
    pub name: String,
    pub space: Space,
    pub sets: BTreeMap<String, PointSet>,
    pub opens: BTreeMap<String, PointSet>,
    pub selections: BTreeMap<String, Selection>,
    pub decompositions: BTreeMap<String, Decomposition>,
    pub cuts: BTreeMap<String, PCut>,
    pub nets: BTreeMap<String, ConvergentNet>,
    pub bases: BTreeMap<String, BaseSpec>,
    pub suites: Vec<Suite>,
    sel_specs: BTreeMap<String, SelSpec>,
}

pub fn mode(m: ModeSpec) -> Mode {
    match m {
        ModeSpec::Maximal => Mode::Maximal,
        ModeSpec::Minimal => Mode::Minimal,
    }
}

pub fn parse_ordinal(s: &str) -> Result<Ordinal, String> {
    s.parse::<Ordinal>().map_err(|e| e.to_string())
}

fn build_space(spec: &crate::scenario::SpaceSpec) -> Result<Space, String> {
    let tops = spec.tops.iter().map(|t| parse_ordinal(t)).collect::<Result<Vec<_>, _>>()?;
    let gluings = spec
        .gluings
        .iter()
        .map(|class| class.iter().map(|(b, x)| Ok((*b, parse_ordinal(x)?))).collect::<Result<Vec<_>, String>>())
        .collect::<Result<Vec<_>, _>>()?;
    Space::new(tops, gluings).map_err(|e| e.to_string())
}

impl Model {
    pub fn point(&self, s: &str) -> Result<Point, String> {
        self.space.parse_point(s).map_err(|e| e.to_string())
    }

    pub fn set(&self, r: &SetRef) -> Result<PointSet, String> {
        match r {
            SetRef::Name(n) => self
                .sets
                .get(n)
                .or_else(|| self.opens.get(n))
                .cloned()
                .ok_or_else(|| format!("unknown set {n:?}")),
            SetRef::Items(items) => self.space.parse_set(items).map_err(|e| e.to_string()),
        }
    }

    pub fn selection(&self, s: &SelSpec) -> Result<Selection, String> {
        self.selection_in(s, &mut Vec::new())
    }

    fn selection_in(&self, s: &SelSpec, stack: &mut Vec<String>) -> Result<Selection, String> {
        let tree = match s {
            SelSpec::Name(n) => {
                if let Some(done) = self.selections.get(n) {
                    return Ok(done.clone());
                }
                if stack.contains(n) {
                    return Err(format!("selection {n:?} refers to itself"));
                }
                let spec = self.sel_specs.get(n).ok_or_else(|| format!("unknown selection {n:?}"))?;
                stack.push(n.clone());
                let out = self.selection_in(spec, stack);
                stack.pop();
                return out;
            }
            SelSpec::Tree(t) => t,
        };
        let x = &self.space;
        let err = |e: hypersel_core::Error| e.to_string();
        Ok(match tree.as_ref() {
            SelTree::Max => Selection::OrderMax,
            SelTree::Min => Selection::OrderMin,
            SelTree::ExtremeAt { point, mode: m } => extreme_selection_at(x, &self.point(point)?, mode(*m), &[]).map_err(err)?,
            SelTree::Join { decomposition, default, overrides } | SelTree::Meet { decomposition, default, overrides } => {
                let d = self
                    .decompositions
                    .get(decomposition)
                    .cloned()
                    .ok_or_else(|| format!("unknown decomposition {decomposition:?}"))?;
                let default = match default {
                    Some(s) => self.selection_in(s, stack)?,
                    None => Selection::OrderMax,
                };
                let mut fibers = FiberFamily::uniform(default);
                for (idx, s) in overrides {
                    fibers.overrides.insert(parse_ordinal(idx)?, self.selection_in(s, stack)?);
                }
                if matches!(tree.as_ref(), SelTree::Join { .. }) {
                    Selection::join(d, fibers, false).map_err(err)?
                } else {
                    Selection::meet(d, fibers, false).map_err(err)?
                }
            }
            SelTree::Restrict { parent, subspace } => {
                let sub = x.saturate(&self.set(subspace)?);
                if !x.is_closed(&sub) || sub.is_empty() {
                    return Err(format!("subspace {sub} is not a nonempty closed set"));
                }
                Selection::restrict(self.selection_in(parent, stack)?, sub)
            }
            SelTree::Patched { base, at, value } => {
                let at = x.saturate(&self.set(at)?);
                let v = self.point(value)?;
                if !x.contains(&at, &v) || !x.is_closed(&at) {
                    return Err(format!("patch value {v} must lie in the closed set {at}"));
                }
                Selection::patched(self.selection_in(base, stack)?, at, v)
            }
        })
    }

    fn decomposition(&self, d: &DecompSpec) -> Result<Decomposition, String> {
        let x = &self.space;
        let err = |e: hypersel_core::Error| e.to_string();
        match d {
            DecompSpec::At { point } => decomp_at(x, &self.point(point)?).map_err(err),
            DecompSpec::Explicit { fibers, quasi } => {
                let fibers = fibers.iter().map(|f| self.set(f)).collect::<Result<Vec<_>, _>>()?;
                let kind = if *quasi { Kind::QuasiOrdinal } else { Kind::Ordinal };
                Decomposition::explicit(x, fibers, kind).map_err(err)
            }
            DecompSpec::Chain { fixed, tails, point } => {
                let tails = tails
                    .iter()
                    .map(|t| {
                        Ok(TailPiece { branch: t.branch, lambda: parse_ordinal(&t.lambda)?, top: parse_ordinal(&t.top)?, shift: t.shift })
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                let chain = ChainSpec { fixed: self.set(fixed)?, tails };
                decomp_from_chain(x, chain, &self.point(point)?).map_err(err)
            }
        }
    }

    fn net(&self, n: &NetSpec) -> Result<ConvergentNet, String> {
        let x = &self.space;
        let (shape, limit) = match n {
            NetSpec::Constant { set } => (NetShape::Constant(self.set(set)?), None),
            NetSpec::Tail { base, branch, lambda, limit } => (
                NetShape::Tail { base: self.set(base)?, branch: *branch, lambda: parse_ordinal(lambda)? },
                limit.as_ref(),
            ),
            NetSpec::MovingPoint { base, branch, lambda, limit } => (
                NetShape::MovingPoint { base: self.set(base)?, branch: *branch, lambda: parse_ordinal(lambda)? },
                limit.as_ref(),
            ),
            NetSpec::IncreasingUnion { base, branch, start, lambda } => (
                NetShape::IncreasingUnion {
                    base: self.set(base)?,
                    branch: *branch,
                    start: parse_ordinal(start)?,
                    lambda: parse_ordinal(lambda)?,
                },
                None,
            ),
        };
        match limit {
            Some(l) => ConvergentNet::with_limit(x, shape, self.set(l)?),
            None => ConvergentNet::new(x, shape),
        }
        .map_err(|e| e.to_string())
    }
}

/// Builds the model, or lists every object that failed.
pub fn resolve(sc: Scenario) -> Result<Model, Vec<String>> {
    let space = build_space(&sc.space).map_err(|e| vec![format!("space: {e}")])?;
    let mut problems = Vec::new();
    let mut m = Model {
        name: sc.name,
        space,
        sets: BTreeMap::new(),
        opens: BTreeMap::new(),
        selections: BTreeMap::new(),
        decompositions: BTreeMap::new(),
        cuts: BTreeMap::new(),
        nets: BTreeMap::new(),
        bases: sc.bases,
        suites: sc.suites,
        sel_specs: sc.selections,
    };
    for (name, items) in &sc.sets {
        match m.space.parse_set(items) {
            Ok(s) if s.is_empty() => problems.push(format!("sets.{name}: empty")),
            Ok(s) if !m.space.is_closed(&s) => problems.push(format!("sets.{name}: {s} is not closed")),
            Ok(s) => {
                m.sets.insert(name.clone(), s);
            }
            Err(e) => problems.push(format!("sets.{name}: {e}")),
        }
    }
    for (name, items) in &sc.opens {
        match m.space.parse_set(items) {
            Ok(s) if !m.space.is_open(&s) => problems.push(format!("opens.{name}: {s} is not open")),
            Ok(s) => {
                m.opens.insert(name.clone(), s);
            }
            Err(e) => problems.push(format!("opens.{name}: {e}")),
        }
    }
    for (name, d) in &sc.decompositions {
        match m.decomposition(d) {
            Ok(d) => {
                m.decompositions.insert(name.clone(), d);
            }
            Err(e) => problems.push(format!("decompositions.{name}: {e}")),
        }
    }
    let names: Vec<String> = m.sel_specs.keys().cloned().collect();
    for name in names {
        match m.selection(&SelSpec::Name(name.clone())) {
            Ok(s) => {
                m.selections.insert(name, s);
            }
            Err(e) => problems.push(format!("selections.{name}: {e}")),
        }
    }
    for (name, c) in &sc.cuts {
        let built = m.point(&c.point).and_then(|p| {
            let (x0, x1) = (m.set(&c.x0)?, m.set(&c.x1)?);
            pcut_validate(&m.space, &p, &x0, &x1).map_err(|e| e.to_string())
        });
        match built {
            Ok(c) => {
                m.cuts.insert(name.clone(), c);
            }
            Err(e) => problems.push(format!("cuts.{name}: {e}")),
        }
    }
    for (name, n) in &sc.nets {
        match m.net(n) {
            Ok(n) => {
                m.nets.insert(name.clone(), n);
            }
            Err(e) => problems.push(format!("nets.{name}: {e}")),
        }
    }
    for (name, b) in &m.bases {
        let ok = match b {
            BaseSpec::Cut { selection, cut, .. } => m.selection(selection).map(|_| ()).and_then(|_| {
                m.cuts.get(cut).map(|_| ()).ok_or_else(|| format!("unknown cut {cut:?}"))
            }),
            BaseSpec::Transfinite { selection, point, gamma } => {
                m.selection(selection).and_then(|_| m.point(point)).and_then(|_| parse_ordinal(gamma)).map(|_| ())
            }
        };
        if let Err(e) = ok {
            problems.push(format!("bases.{name}: {e}"));
        }
    }
    problems.extend(check_refs(&m));
    if problems.is_empty() {
        Ok(m)
    } else {
        Err(problems)
    }
}

fn check_refs(m: &Model) -> Vec<String> {
    use crate::scenario::CheckKind::*;
    let mut out = Vec::new();
    for suite in &m.suites {
        for c in &suite.checks {
            let at = format!("suites.{}.{}", suite.name, c.name);
            let res: Result<(), String> = match &c.kind {
                SelectionLaw { selection } => m.selection(selection).map(|_| ()),
                Extremality { selection, point, domain, .. } => m
                    .selection(selection)
                    .and_then(|_| m.point(point))
                    .and_then(|_| domain.as_ref().map(|d| m.set(d).map(|_| ())).unwrap_or(Ok(()))),
                Continuity { selection, nets } => m.selection(selection).and_then(|_| {
                    nets.iter().flatten().try_for_each(|n| {
                        m.nets.get(n).map(|_| ()).ok_or_else(|| format!("unknown net {n:?}"))
                    })
                }),
                DerivedSets { selection, opens, .. } => {
                    m.selection(selection).and_then(|_| opens.iter().try_for_each(|o| m.set(o).map(|_| ())))
                }
                ClopenModulo { set, .. } => m.set(set).map(|_| ()),
                Decomposition { decomposition } => {
                    m.decompositions.get(decomposition).map(|_| ()).ok_or_else(|| format!("unknown decomposition {decomposition:?}"))
                }
                Base { base } => m.bases.get(base).map(|_| ()).ok_or_else(|| format!("unknown base {base:?}")),
                Roundtrip { selection, point, gamma } => {
                    m.selection(selection).and_then(|_| m.point(point)).and_then(|_| parse_ordinal(gamma)).map(|_| ())
                }
                ExtremeEverywhere { .. } => Ok(()),
            };
            if let Err(e) = res {
                out.push(format!("{at}: {e}"));
            }
        }
    }
    out
}
