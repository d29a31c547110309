//! Scenario documents as they appear on disk.
//!
//! Ordinals are strings such as `"w^2*3 + w + 4"`, points are `"b:x"` or
//! `"x"` for branch 0, and sets are lists of items like `"[0,w]"`,
//! `"1:(3,w)"` or `"{5}"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub opens: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub selections: BTreeMap<String, SelSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub decompositions: BTreeMap<String, DecompSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cuts: BTreeMap<String, CutSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bases: BTreeMap<String, BaseSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nets: BTreeMap<String, NetSpec>,
    #[serde(default)]
    pub suites: Vec<Suite>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub tops: Vec<String>,
    /// Each class lists the `[branch, "ordinal"]` coordinates identified.
    #[serde(default)]
    pub gluings: Vec<Vec<(usize, String)>>,
}

/// A named set or a literal list of items.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetRef {
    Name(String),
    Items(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Maximal,
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SelSpec {
    Name(String),
    Tree(Box<SelTree>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelTree {
    Max,
    Min,
    /// The join or meet over the canonical decomposition at `point`.
    ExtremeAt { point: String, mode: ModeSpec },
    Join {
        decomposition: String,
        #[serde(default)]
        default: Option<SelSpec>,
        #[serde(default)]
        overrides: BTreeMap<String, SelSpec>,
    },
    Meet {
        decomposition: String,
        #[serde(default)]
        default: Option<SelSpec>,
        #[serde(default)]
        overrides: BTreeMap<String, SelSpec>,
    },
    Restrict { parent: SelSpec, subspace: SetRef },
    Patched { base: SelSpec, at: SetRef, value: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DecompSpec {
    /// The tail chain at a point.
    At { point: String },
    Explicit { fibers: Vec<SetRef>, #[serde(default)] quasi: bool },
    Chain { fixed: SetRef, tails: Vec<TailSpec>, point: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    pub branch: usize,
    pub lambda: String,
    pub top: String,
    pub shift: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutSpec {
    pub point: String,
    pub x0: SetRef,
    pub x1: SetRef,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    Cut { selection: SelSpec, cut: String, steps: usize },
    Transfinite { selection: SelSpec, point: String, gamma: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NetSpec {
    Constant { set: SetRef },
    Tail { base: SetRef, branch: usize, lambda: String, #[serde(default)] limit: Option<SetRef> },
    MovingPoint { base: SetRef, branch: usize, lambda: String, #[serde(default)] limit: Option<SetRef> },
    IncreasingUnion { base: SetRef, branch: usize, start: String, lambda: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<CheckSpec>,
}

/// Per-check overrides of the run parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_runs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: CheckKind,
    #[serde(default, skip_serializing_if = "is_default")]
    pub params: ParamSpec,
}

fn is_default(p: &ParamSpec) -> bool {
    *p == ParamSpec::default()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CheckKind {
    SelectionLaw { selection: SelSpec },
    Extremality { selection: SelSpec, point: String, mode: ModeSpec, #[serde(default)] domain: Option<SetRef> },
    /// Net names, or the canonical corpus when absent.
    Continuity { selection: SelSpec, #[serde(default)] nets: Option<Vec<String>> },
    /// Explicit open sets, or `sample` seeded complements of family members.
    DerivedSets { selection: SelSpec, #[serde(default)] opens: Vec<SetRef>, #[serde(default)] sample: usize },
    /// `expect` is `"clopen"`, `"none"` or the modulo point.
    ClopenModulo { set: SetRef, expect: String },
    Decomposition { decomposition: String },
    Base { base: String },
    Roundtrip { selection: SelSpec, point: String, gamma: String },
    /// A `mode`-extreme selection at every grid point.
    ExtremeEverywhere { mode: ModeSpec },
}
