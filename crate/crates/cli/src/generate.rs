//! Built-in scenario generators.

use std::collections::BTreeMap;

use hypersel_core::{Ordinal, Space};

use crate::scenario::{
    BaseSpec, CheckKind, CheckSpec, CutSpec, ModeSpec, ParamSpec, Scenario, SelSpec, SelTree, SetRef, SpaceSpec, Suite,
};

fn check(name: &str, kind: CheckKind) -> CheckSpec {
    CheckSpec { name: name.into(), kind, params: ParamSpec::default() }
}

fn sel(name: &str) -> SelSpec {
    SelSpec::Name(name.into())
}

fn extreme_at(point: &str, mode: ModeSpec) -> SelSpec {
    SelSpec::Tree(Box::new(SelTree::ExtremeAt { point: point.into(), mode }))
}

fn space_spec(space: &Space) -> SpaceSpec {
    SpaceSpec {
        tops: space.tops().iter().map(|t| t.to_string()).collect(),
        gluings: space.gluings().iter().map(|c| c.iter().map(|(b, x)| (*b, x.to_string())).collect()).collect(),
    }
}

/// `[0, γ]` with the order maximum, the extreme selections at the top, and
/// the transfinite roundtrip when the top admits it.
pub fn ordinal(gamma: &Ordinal) -> Scenario {
    let top = gamma.to_string();
    let mut selections = BTreeMap::new();
    selections.insert("max".to_string(), SelSpec::Tree(Box::new(SelTree::Max)));
    selections.insert("top_max".to_string(), extreme_at(&top, ModeSpec::Maximal));
    selections.insert("top_min".to_string(), extreme_at(&top, ModeSpec::Minimal));
    let mut checks = vec![
        check("max is a selection", CheckKind::SelectionLaw { selection: sel("max") }),
        check(
            "max is top-maximal",
            CheckKind::Extremality { selection: sel("max"), point: top.clone(), mode: ModeSpec::Maximal, domain: None },
        ),
        check(
            "join is top-maximal",
            CheckKind::Extremality { selection: sel("top_max"), point: top.clone(), mode: ModeSpec::Maximal, domain: None },
        ),
        check(
            "meet is top-minimal",
            CheckKind::Extremality { selection: sel("top_min"), point: top.clone(), mode: ModeSpec::Minimal, domain: None },
        ),
        check("derived sets of max", CheckKind::DerivedSets { selection: sel("max"), opens: vec![], sample: 50 }),
        check("join is continuous", CheckKind::Continuity { selection: sel("top_max"), nets: None }),
        check("meet is continuous", CheckKind::Continuity { selection: sel("top_min"), nets: None }),
        check("minimal everywhere", CheckKind::ExtremeEverywhere { mode: ModeSpec::Minimal }),
    ];
    let roundtrip_ok = !gamma.is_limit() || (gamma.degree() == Some(1) && *gamma <= Ordinal::omega_pow_times(1, 2));
    if roundtrip_ok {
        checks.push(check(
            "roundtrip at the top",
            CheckKind::Roundtrip { selection: sel("max"), point: top.clone(), gamma: top.clone() },
        ));
    }
    let mut bases = BTreeMap::new();
    if roundtrip_ok {
        bases.insert(
            "top".to_string(),
            BaseSpec::Transfinite { selection: sel("max"), point: top.clone(), gamma: top.clone() },
        );
    }
    Scenario {
        name: format!("ordinal {top}"),
        space: space_spec(&Space::ordinal(gamma.clone())),
        sets: BTreeMap::new(),
        opens: BTreeMap::new(),
        selections,
        decompositions: BTreeMap::new(),
        cuts: BTreeMap::new(),
        bases,
        nets: BTreeMap::new(),
        suites: vec![Suite { name: "ordinal".into(), checks }],
    }
}

/// `n` copies of `[0, ω]` glued at `ω`, with the hub selections, the cut
/// between branch 0 and the rest, and the base it produces.
pub fn wedge(n: usize) -> Result<Scenario, String> {
    let space = Space::wedge(n).map_err(|e| e.to_string())?;
    let mut selections = BTreeMap::new();
    selections.insert("hub_max".to_string(), extreme_at("w", ModeSpec::Maximal));
    selections.insert("hub_min".to_string(), extreme_at("w", ModeSpec::Minimal));
    let mut checks = vec![
        check("join is a selection", CheckKind::SelectionLaw { selection: sel("hub_max") }),
        check(
            "join is hub-maximal",
            CheckKind::Extremality { selection: sel("hub_max"), point: "w".into(), mode: ModeSpec::Maximal, domain: None },
        ),
        check(
            "meet is hub-minimal",
            CheckKind::Extremality { selection: sel("hub_min"), point: "w".into(), mode: ModeSpec::Minimal, domain: None },
        ),
        check("join is continuous", CheckKind::Continuity { selection: sel("hub_max"), nets: None }),
        check("meet is continuous", CheckKind::Continuity { selection: sel("hub_min"), nets: None }),
        check("minimal everywhere", CheckKind::ExtremeEverywhere { mode: ModeSpec::Minimal }),
    ];
    let mut cuts = BTreeMap::new();
    let mut bases = BTreeMap::new();
    if n >= 2 {
        let rest: Vec<String> = (1..n).map(|b| format!("{b}:[0,w)")).collect();
        cuts.insert("hub".to_string(), CutSpec { point: "w".into(), x0: SetRef::Items(vec!["[0,w)".into()]), x1: SetRef::Items(rest) });
        bases.insert("hub".to_string(), BaseSpec::Cut { selection: sel("hub_max"), cut: "hub".into(), steps: 8 });
        checks.push(check("cut base at the hub", CheckKind::Base { base: "hub".into() }));
    }
    Ok(Scenario {
        name: format!("wedge {n}"),
        space: space_spec(&space),
        sets: BTreeMap::new(),
        opens: BTreeMap::new(),
        selections,
        decompositions: BTreeMap::new(),
        cuts,
        bases,
        nets: BTreeMap::new(),
        suites: vec![Suite { name: "wedge".into(), checks }],
    })
}

/// The finite fan with `prongs` prongs.
pub fn fan(prongs: usize) -> Result<Scenario, String> {
    let mut s = wedge(prongs)?;
    s.name = format!("fan {prongs}");
    s.suites[0].name = "fan".into();
    Ok(s)
}
