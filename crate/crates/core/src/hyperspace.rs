//! Vietoris basics, neighbourhood families and ω-indexed nets of closed sets.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::space::{Point, PointSet, Run, Space};

pub const DEFAULT_WINDOW: u64 = 64;
pub const DEFAULT_DEPTH: u32 = 2;

/// `⟨V_1, ..., V_m⟩`: the closed sets inside `⋃ V_i` meeting every `V_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VietorisBasic {
    pub parts: Vec<PointSet>,
}

impl VietorisBasic {
    pub fn new(space: &Space, parts: Vec<PointSet>) -> Result<VietorisBasic> {
        if parts.is_empty() {
            return Err(Error::Empty("basic"));
        }
        let mut out = Vec::with_capacity(parts.len());
        for part in parts {
            space.check(&part)?;
            let part = space.saturate(&part);
            if part.is_empty() {
                return Err(Error::Empty("basic part"));
            }
            if !space.is_open(&part) {
                return Err(Error::NotOpen { what: "basic part", set: part.to_string() });
            }
            out.push(part);
        }
        Ok(VietorisBasic { parts: out })
    }

    pub fn union(&self, space: &Space) -> PointSet {
        self.parts.iter().fold(space.empty(), |acc, p| acc.union(p))
    }
}

impl fmt::Display for VietorisBasic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join("; "))
    }
}

pub fn vietoris_member(space: &Space, set: &PointSet, basic: &VietorisBasic) -> bool {
    let s = space.saturate(set);
    s.is_subset(&basic.union(space)) && basic.parts.iter().all(|v| s.meets(v))
}

fn levels(depth: u32) -> impl Iterator<Item = u64> {
    (0..=depth + 1).map(|j| 1u64 << j)
}

/// Points of `set` that a neighbourhood family should separate: endpoints of
/// runs, limit grid points and a few small ones, at most eight.
fn key_points(space: &Space, set: &PointSet) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for (b, r) in set.all_runs() {
        out.push(space.point(b, r.lo.clone()).expect("member"));
        if let Some(hi) = r.max() {
            out.push(space.point(b, hi).expect("member"));
        }
    }
    for p in space.grid_points(2) {
        if space.contains(set, &p) && (p.pos.is_limit() || out.len() < 6) {
            out.push(p);
        }
    }
    let mut seen = Vec::new();
    for p in out {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    seen.truncate(8);
    seen
}

/// A deterministic finite family of Vietoris basics around the closed set
/// `set`. Every member contains `set`; finer members appear at larger `k`.
pub fn basic_nbhd_family(space: &Space, set: &PointSet, depth: u32) -> Vec<VietorisBasic> {
    let s = space.saturate(set);
    let mut out = vec![VietorisBasic { parts: vec![space.universe()] }];
    let keys = if depth >= 1 { key_points(space, &s) } else { Vec::new() };
    for k in levels(depth) {
        let u = space.fatten(&s, k);
        out.push(VietorisBasic { parts: vec![u.clone()] });
        let pieces: Vec<PointSet> = s
            .all_runs()
            .map(|(b, r)| space.fatten(&PointSet::from_runs(s.branch_count(), [(b, r.clone())]), k))
            .collect();
        if pieces.len() > 1 {
            out.push(VietorisBasic { parts: pieces });
        }
        for x in &keys {
            out.push(VietorisBasic { parts: vec![u.clone(), space.nbhd(x, k)] });
        }
        if depth >= 2 {
            let special: Vec<&Point> =
                keys.iter().filter(|p| p.pos.is_limit() || s.all_runs().any(|(_, r)| r.lo == p.pos)).collect();
            for (i, x) in special.iter().enumerate() {
                for y in &special[i + 1..] {
                    out.push(VietorisBasic { parts: vec![u.clone(), space.nbhd(x, k), space.nbhd(y, k)] });
                }
            }
        }
    }
    out.dedup();
    out
}

/// Closed-form generators `n ↦ S_n` of nets of closed sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NetShape {
    Constant(PointSet),
    /// `F ∪ [λ[n], λ]`.
    Tail { base: PointSet, branch: usize, lambda: Ordinal },
    /// `F ∪ [start, max(start, λ[n])]`.
    IncreasingUnion { base: PointSet, branch: usize, start: Ordinal, lambda: Ordinal },
    /// `F ∪ {λ[n]}`.
    MovingPoint { base: PointSet, branch: usize, lambda: Ordinal },
    /// `S_n ∪ {q}`.
    AppendPoint { inner: Box<NetShape>, point: Point },
    Union(Vec<NetShape>),
}

fn limit_at(lambda: &Ordinal, n: u64) -> Ordinal {
    lambda.fundamental(n).expect("validated limit")
}

impl NetShape {
    pub fn validate(&self, space: &Space) -> Result<()> {
        let limit = |branch: usize, lambda: &Ordinal| -> Result<()> {
            if !lambda.is_limit() {
                return Err(Error::NotLimit(lambda.to_string()));
            }
            space.point(branch, lambda.clone()).map(|_| ())
        };
        let closed = |base: &PointSet| -> Result<()> {
            space.check(base)?;
            if !space.is_closed(base) {
                return Err(Error::NotClosed { what: "net base", set: base.to_string() });
            }
            Ok(())
        };
        match self {
            NetShape::Constant(f) => {
                closed(f)?;
                if f.is_empty() {
                    return Err(Error::Empty("constant net"));
                }
                Ok(())
            }
            NetShape::Tail { base, branch, lambda } | NetShape::MovingPoint { base, branch, lambda } => {
                closed(base)?;
                limit(*branch, lambda)
            }
            NetShape::IncreasingUnion { base, branch, start, lambda } => {
                closed(base)?;
                limit(*branch, lambda)?;
                if start >= lambda {
                    return Err(Error::Precondition(format!("union start {start} is not below {lambda}")));
                }
                Ok(())
            }
            NetShape::AppendPoint { inner, point } => {
                inner.validate(space)?;
                space.point(point.branch, point.pos.clone()).map(|_| ())
            }
            NetShape::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::Empty("union net"));
                }
                parts.iter().try_for_each(|p| p.validate(space))
            }
        }
    }

    pub fn term(&self, space: &Space, n: u64) -> PointSet {
        let bc = space.branch_count();
        let with = |base: &PointSet, branch: usize, run: Run| {
            space.saturate(&base.union(&PointSet::from_runs(bc, [(branch, run)])))
        };
        match self {
            NetShape::Constant(f) => space.saturate(f),
            NetShape::Tail { base, branch, lambda } => {
                with(base, *branch, Run::closed(limit_at(lambda, n), lambda.clone()).expect("λ[n] < λ"))
            }
            NetShape::IncreasingUnion { base, branch, start, lambda } => {
                let hi = std::cmp::max(start.clone(), limit_at(lambda, n));
                with(base, *branch, Run::closed(start.clone(), hi).expect("start <= hi"))
            }
            NetShape::MovingPoint { base, branch, lambda } => with(base, *branch, Run::point(limit_at(lambda, n))),
            NetShape::AppendPoint { inner, point } => inner.term(space, n).union(&space.singleton(point)),
            NetShape::Union(parts) => parts.iter().fold(space.empty(), |acc, p| acc.union(&p.term(space, n))),
        }
    }

    /// The Vietoris limit of the net, computed from the shape.
    pub fn limit(&self, space: &Space) -> PointSet {
        let bc = space.branch_count();
        let with = |base: &PointSet, branch: usize, run: Run| {
            space.saturate(&base.union(&PointSet::from_runs(bc, [(branch, run)])))
        };
        match self {
            NetShape::Constant(f) => space.saturate(f),
            NetShape::Tail { base, branch, lambda } | NetShape::MovingPoint { base, branch, lambda } => {
                with(base, *branch, Run::point(lambda.clone()))
            }
            NetShape::IncreasingUnion { base, branch, start, lambda } => {
                with(base, *branch, Run::closed(start.clone(), lambda.clone()).expect("start < λ"))
            }
            NetShape::AppendPoint { inner, point } => inner.limit(space).union(&space.singleton(point)),
            NetShape::Union(parts) => parts.iter().fold(space.empty(), |acc, p| acc.union(&p.limit(space))),
        }
    }

    pub fn is_increasing(&self) -> bool {
        match self {
            NetShape::Constant(_) | NetShape::IncreasingUnion { .. } => true,
            NetShape::Tail { .. } | NetShape::MovingPoint { .. } => false,
            NetShape::AppendPoint { inner, .. } => inner.is_increasing(),
            NetShape::Union(parts) => parts.iter().all(NetShape::is_increasing),
        }
    }
}

impl fmt::Display for NetShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |branch: &usize| if *branch == 0 { String::new() } else { format!("{branch}:") };
        match self {
            NetShape::Constant(s) => write!(f, "const({s})"),
            NetShape::Tail { base, branch, lambda } => write!(f, "tail({base} ∪ {}[λ[n],{lambda}])", b(branch)),
            NetShape::IncreasingUnion { base, branch, start, lambda } => {
                write!(f, "up({base} ∪ {}[{start},{lambda}[n]])", b(branch))
            }
            NetShape::MovingPoint { base, branch, lambda } => write!(f, "move({base} ∪ {}{{{lambda}[n]}})", b(branch)),
            NetShape::AppendPoint { inner, point } => write!(f, "{inner} + {{{point}}}"),
            NetShape::Union(parts) => {
                let ps: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union({})", ps.join(", "))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvergentNet {
    pub shape: NetShape,
    pub declared_limit: PointSet,
    pub window: u64,
}

impl ConvergentNet {
    /// A net declared to converge to its shape's limit.
    pub fn new(space: &Space, shape: NetShape) -> Result<ConvergentNet> {
        shape.validate(space)?;
        let declared_limit = shape.limit(space);
        Ok(ConvergentNet { shape, declared_limit, window: DEFAULT_WINDOW })
    }

    pub fn with_limit(space: &Space, shape: NetShape, declared_limit: PointSet) -> Result<ConvergentNet> {
        shape.validate(space)?;
        space.check(&declared_limit)?;
        Ok(ConvergentNet { shape, declared_limit: space.saturate(&declared_limit), window: DEFAULT_WINDOW })
    }

    pub fn with_window(mut self, window: u64) -> Self {
        self.window = window;
        self
    }

    pub fn term(&self, space: &Space, n: u64) -> PointSet {
        self.shape.term(space, n)
    }
}

impl fmt::Display for ConvergentNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.shape, self.declared_limit)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NetVerdict {
    Pass,
    /// `S_n` lies outside `basic` at an index too late for the net to settle.
    Fail { basic: VietorisBasic, n: u64 },
}

impl NetVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, NetVerdict::Pass)
    }
}

/// Index from which `pred` holds up to `window`, if it settles by `window/2`.
pub(crate) fn settles(window: u64, pred: impl Fn(u64) -> bool) -> std::result::Result<(), u64> {
    match (0..=window).rev().find(|&n| !pred(n)) {
        Some(n) if n + 1 > window / 2 => Err(n),
        _ => Ok(()),
    }
}

/// Checks that the net enters every basic around its declared limit and
/// stays there through the window. The entry index must be at most half the
/// window, so the tail of the window witnesses the settling.
pub fn net_convergence_check(space: &Space, net: &ConvergentNet, depth: u32) -> NetVerdict {
    let terms: Vec<PointSet> = (0..=net.window).map(|n| net.term(space, n)).collect();
    for basic in basic_nbhd_family(space, &net.declared_limit, depth) {
        if let Err(n) = settles(net.window, |n| vietoris_member(space, &terms[n as usize], &basic)) {
            return NetVerdict::Fail { basic, n };
        }
    }
    NetVerdict::Pass
}

/// `cl ⋃ Y_n` for a net of increasing shape.
pub fn increasing_union_limit(space: &Space, net: &ConvergentNet) -> Result<PointSet> {
    if !net.shape.is_increasing() {
        return Err(Error::Precondition(format!("{} is not an increasing net", net.shape)));
    }
    Ok(net.shape.limit(space))
}

/// A corpus of nets exercising every limit coordinate of the grid: tails,
/// moving points, increasing unions and appended points over a few fixed
/// bases, plus unions across all coordinates of each glued limit.
pub fn canonical_nets(space: &Space, grid_k: u64, window: u64) -> Vec<ConvergentNet> {
    let bc = space.branch_count();
    let mut bases = vec![space.empty()];
    for b in 0..bc {
        bases.push(space.saturate(&PointSet::from_runs(bc, [(b, Run::point(Ordinal::zero()))])));
    }
    if let Some(two) = Run::closed(Ordinal::zero(), Ordinal::finite(2)) {
        bases.push(PointSet::from_runs(bc, [(0, two)]));
    }
    let last = bc - 1;
    bases.push(space.saturate(&PointSet::from_runs(bc, [(last, Run::point(Ordinal::finite(5).min(space.top(last).clone())))])));
    bases.dedup();

    let spare = space.point(0, Ordinal::finite(1).min(space.top(0).clone())).expect("in space");
    let mut shapes = Vec::new();
    let mut limits: Vec<(usize, Ordinal)> = Vec::new();
    for b in 0..bc {
        for x in space.grid_positions(b, grid_k) {
            if x.is_limit() {
                limits.push((b, x));
            }
        }
    }
    for (b, x) in &limits {
        for base in &bases {
            let tail = NetShape::Tail { base: base.clone(), branch: *b, lambda: x.clone() };
            shapes.push(tail.clone());
            shapes.push(NetShape::MovingPoint { base: base.clone(), branch: *b, lambda: x.clone() });
            shapes.push(NetShape::IncreasingUnion {
                base: base.clone(),
                branch: *b,
                start: x.fundamental(0).expect("limit"),
                lambda: x.clone(),
            });
            shapes.push(NetShape::AppendPoint { inner: Box::new(tail), point: spare.clone() });
        }
    }
    for class in space.gluings() {
        let limit_coords: Vec<&(usize, Ordinal)> = class.iter().filter(|(_, x)| x.is_limit()).collect();
        if limit_coords.len() < 2 {
            continue;
        }
        for base in &bases {
            type Mk = fn(PointSet, usize, Ordinal) -> NetShape;
            let makers: [Mk; 3] = [
                |base, branch, lambda| NetShape::Tail { base, branch, lambda },
                |base, branch, lambda| NetShape::MovingPoint { base, branch, lambda },
                |base, branch, lambda| NetShape::IncreasingUnion {
                    base,
                    branch,
                    start: lambda.fundamental(0).expect("limit"),
                    lambda,
                },
            ];
            for mk in makers {
                let parts = limit_coords.iter().map(|(b, x)| mk(base.clone(), *b, x.clone())).collect();
                shapes.push(NetShape::Union(parts));
            }
        }
    }
    shapes
        .into_iter()
        .filter_map(|s| ConvergentNet::new(space, s).ok())
        .map(|n| n.with_window(window))
        .collect()
}
