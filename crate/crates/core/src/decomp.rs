//! Decompositions `η : Y → [0, γ]` described by their upper level sets
//! `level(α) = η⁻¹([α, γ])`, with builders and validation.

use std::fmt;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::space::{Delta, Point, PointSet, Run, Space};

const SCAN_CAP: u64 = 1 << 40;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Ordinal,
    QuasiOrdinal,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Ordinal => "ordinal",
            Kind::QuasiOrdinal => "quasi-ordinal",
        })
    }
}

/// One branch's share of a clopen chain: `[λ[n+shift]+1, top]` at stage `n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TailPiece {
    pub branch: usize,
    pub lambda: Ordinal,
    pub top: Ordinal,
    pub shift: i64,
}

impl TailPiece {
    fn at(&self, n: u64) -> Run {
        let m = (n as i64 + self.shift).max(0) as u64;
        let lo = self.lambda.fundamental(m).expect("validated limit").succ();
        Run::closed(lo, self.top.clone()).expect("λ[m] < λ <= top")
    }

    fn limit(&self) -> Run {
        Run::closed(self.lambda.clone(), self.top.clone()).expect("λ <= top")
    }
}

/// The clopen chain `U_0 = Y`, `U_n = fixed ∪ ⋃ tails(n)` for `n >= 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainSpec {
    pub fixed: PointSet,
    pub tails: Vec<TailPiece>,
}

/// How one coordinate of the base point shrinks along a transfinite base.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoordSchedule {
    /// An isolated coordinate, kept in every member.
    Isolated { branch: usize, x: Ordinal },
    /// `σ(α) = x0 + α`.
    Shift { branch: usize, x: Ordinal, x0: Ordinal },
    /// `σ(n) = x[n]`, for bases of length `ω` only.
    Fundamental { branch: usize, x: Ordinal },
}

/// The family `H_0 = Y`, `H_{β+1} = ⋃ [σ(β)+2, x]`, `H_λ = ⋃ [σ(λ), x]`,
/// `H_γ = {p}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseSchedule {
    pub point: Point,
    pub coords: Vec<CoordSchedule>,
}

impl BaseSchedule {
    pub fn member(&self, space: &Space, domain: &PointSet, gamma: &Ordinal, alpha: &Ordinal) -> PointSet {
        if alpha.is_zero() {
            return domain.clone();
        }
        if alpha == gamma {
            return space.singleton(&self.point).intersect(domain);
        }
        if alpha > gamma {
            return space.empty();
        }
        let bc = space.branch_count();
        let runs = self.coords.iter().map(|c| match c {
            CoordSchedule::Isolated { branch, x } => (*branch, Run::point(x.clone())),
            CoordSchedule::Shift { branch, x, x0 } => {
                let from = match alpha.pred() {
                    Some(beta) => x0.add(&beta).add_finite(2),
                    None => x0.add(alpha),
                };
                (*branch, Run::closed(from, x.clone()).unwrap_or_else(|| Run::point(x.clone())))
            }
            CoordSchedule::Fundamental { branch, x } => {
                let beta = alpha.pred().and_then(|b| b.as_finite()).expect("finite successor index");
                let from = x.fundamental(beta).expect("limit").add_finite(2);
                (*branch, Run::closed(from, x.clone()).expect("below limit"))
            }
        });
        space.saturate(&PointSet::from_runs(bc, runs)).intersect(domain)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Repr {
    /// Fibers `0..=γ` for finite `γ`.
    Explicit(Vec<PointSet>),
    /// A clopen chain indexed by `[0, ω]`.
    Chain(ChainSpec),
    /// Decompositions of a clopen partition, indexed by ordinal sum.
    Concat(Vec<Decomposition>),
    /// Levels given by a transfinite base.
    FromBase(BaseSchedule),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub gamma: Ordinal,
    pub domain: PointSet,
    pub kind: Kind,
    pub repr: Repr,
}

fn split_gamma(gamma: &Ordinal) -> Result<(u64, u64)> {
    let mut j = 0;
    let mut m = 0;
    for t in gamma.terms() {
        match t.exp {
            0 => m = t.coef,
            1 => j = t.coef,
            _ => return Err(Error::Unsupported(format!("decomposition index {gamma} is not below w^2"))),
        }
    }
    Ok((j, m))
}

fn omega_times(i: u64) -> Ordinal {
    Ordinal::omega_pow_times(1, i)
}

impl Decomposition {
    pub fn explicit(space: &Space, fibers: Vec<PointSet>, kind: Kind) -> Result<Decomposition> {
        if fibers.is_empty() {
            return Err(Error::Decomposition("no fibers".into()));
        }
        let mut domain = space.empty();
        let mut sat = Vec::with_capacity(fibers.len());
        for (i, f) in fibers.into_iter().enumerate() {
            space.check(&f)?;
            let f = space.saturate(&f);
            if domain.meets(&f) {
                return Err(Error::Decomposition(format!("fiber {i} meets an earlier fiber")));
            }
            domain = domain.union(&f);
            sat.push(f);
        }
        if !space.is_closed(&domain) {
            return Err(Error::NotClosed { what: "decomposition domain", set: domain.to_string() });
        }
        Ok(Decomposition { gamma: Ordinal::finite(sat.len() as u64 - 1), domain, kind, repr: Repr::Explicit(sat) })
    }

    pub fn chain(space: &Space, domain: PointSet, chain: ChainSpec, kind: Kind) -> Result<Decomposition> {
        space.check(&domain)?;
        space.check(&chain.fixed)?;
        let domain = space.saturate(&domain);
        if !space.is_closed(&domain) {
            return Err(Error::NotClosed { what: "decomposition domain", set: domain.to_string() });
        }
        for t in &chain.tails {
            if !t.lambda.is_limit() {
                return Err(Error::NotLimit(t.lambda.to_string()));
            }
            if t.lambda > t.top || t.top > *space.tops().get(t.branch).ok_or_else(|| {
                Error::Decomposition(format!("tail names missing branch {}", t.branch))
            })? {
                return Err(Error::Decomposition(format!("tail [{}, {}] leaves its branch", t.lambda, t.top)));
            }
            if t.shift < -1 {
                return Err(Error::Decomposition("tail shift must be at least -1".into()));
            }
        }
        Ok(Decomposition { gamma: Ordinal::omega(), domain, kind, repr: Repr::Chain(chain) })
    }

    pub fn concat(space: &Space, parts: Vec<Decomposition>, kind: Kind) -> Result<Decomposition> {
        if parts.is_empty() {
            return Err(Error::Decomposition("no parts".into()));
        }
        let mut domain = space.empty();
        let mut gamma: Option<Ordinal> = None;
        for (i, p) in parts.iter().enumerate() {
            if domain.meets(&p.domain) {
                return Err(Error::Decomposition(format!("part {i} overlaps an earlier part")));
            }
            domain = domain.union(&p.domain);
            gamma = Some(match gamma {
                None => p.gamma.clone(),
                Some(g) => g.succ().add(&p.gamma),
            });
        }
        for (i, p) in parts.iter().enumerate() {
            if !space.is_open_in(&p.domain, &domain) {
                return Err(Error::Decomposition(format!("part {i} is not clopen in the union")));
            }
        }
        let gamma = gamma.expect("nonempty");
        split_gamma(&gamma)?;
        Ok(Decomposition { gamma, domain, kind, repr: Repr::Concat(parts) })
    }

    pub fn from_base(space: &Space, domain: PointSet, gamma: Ordinal, base: BaseSchedule) -> Result<Decomposition> {
        split_gamma(&gamma)?;
        space.check(&domain)?;
        let domain = space.saturate(&domain);
        Ok(Decomposition { gamma, domain, kind: Kind::Ordinal, repr: Repr::FromBase(base) })
    }

    /// `η⁻¹([α, γ])`.
    pub fn level(&self, space: &Space, alpha: &Ordinal) -> PointSet {
        if alpha.is_zero() {
            return self.domain.clone();
        }
        if *alpha > self.gamma {
            return space.empty();
        }
        match &self.repr {
            Repr::Explicit(fibers) => {
                let from = alpha.as_finite().expect("index below finite γ") as usize;
                fibers[from..].iter().fold(space.empty(), |acc, f| acc.union(f))
            }
            Repr::Chain(chain) => {
                let bc = space.branch_count();
                let runs: Vec<(usize, Run)> = match alpha.as_finite() {
                    Some(n) => chain.tails.iter().map(|t| (t.branch, t.at(n))).collect(),
                    None => chain.tails.iter().map(|t| (t.branch, t.limit())).collect(),
                };
                space.saturate(&chain.fixed.union(&PointSet::from_runs(bc, runs))).intersect(&self.domain)
            }
            Repr::Concat(parts) => {
                let mut offset = Ordinal::zero();
                let mut out = space.empty();
                for p in parts {
                    if *alpha <= offset {
                        out = out.union(&p.domain);
                    } else if let Some(local) = alpha.sub_left(&offset) {
                        if local <= p.gamma {
                            out = out.union(&p.level(space, &local));
                        }
                    }
                    offset = offset.add(&p.gamma).succ();
                }
                out
            }
            Repr::FromBase(base) => base.member(space, &self.domain, &self.gamma, alpha),
        }
    }

    /// `η⁻¹(α)`.
    pub fn fiber(&self, space: &Space, alpha: &Ordinal) -> PointSet {
        self.level(space, alpha).difference(&self.level(space, &alpha.succ()))
    }

    /// Largest `α <= γ` with `pred(level(α))`, for a predicate that holds at
    /// `0`, fails from some point on, and survives limits.
    fn last_index(&self, space: &Space, pred: impl Fn(&PointSet) -> bool) -> Ordinal {
        let (j, m) = split_gamma(&self.gamma).expect("validated index");
        let mut i = j;
        while i > 0 && !pred(&self.level(space, &omega_times(i))) {
            i -= 1;
        }
        let base = omega_times(i);
        let at = |r: u64| pred(&self.level(space, &base.add_finite(r)));
        if i == j {
            let r = (0..=m).rev().find(|&r| at(r)).unwrap_or(0);
            return base.add_finite(r);
        }
        let mut hi = 1;
        while at(hi) {
            hi *= 2;
            assert!(hi < SCAN_CAP, "levels of {} do not close up", self.gamma);
        }
        let mut lo = hi / 2;
        if hi == 1 {
            lo = 0;
        }
        while lo + 1 < hi {
            let mid = lo + (hi - lo) / 2;
            if at(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        base.add_finite(lo)
    }

    pub fn max_eta(&self, space: &Space, set: &PointSet) -> Ordinal {
        self.last_index(space, |l| set.meets(l))
    }

    pub fn min_eta(&self, space: &Space, set: &PointSet) -> Ordinal {
        self.last_index(space, |l| set.is_subset(l))
    }

    /// `(min η(S), max η(S))` for nonempty `S` inside the domain.
    pub fn eta_extremes(&self, space: &Space, set: &PointSet) -> Result<(Ordinal, Ordinal)> {
        let s = space.saturate(set);
        if s.is_empty() {
            return Err(Error::Empty("set"));
        }
        if !s.is_subset(&self.domain) {
            return Err(Error::OutsideSubspace { set: s.to_string(), subspace: self.domain.to_string() });
        }
        Ok((self.min_eta(space, &s), self.max_eta(space, &s)))
    }

    pub fn eta(&self, space: &Space, p: &Point) -> Ordinal {
        self.last_index(space, |l| space.contains(l, p))
    }

    /// Indices `ω·i + r` with `r <= k`, up to and including `γ`.
    pub fn index_sample(&self, k: u64) -> Vec<Ordinal> {
        let (j, m) = split_gamma(&self.gamma).expect("validated index");
        let mut out = Vec::new();
        for i in 0..=j {
            let top = if i == j { m.min(k) } else { k };
            for r in 0..=top {
                out.push(omega_times(i).add_finite(r));
            }
        }
        if out.last() != Some(&self.gamma) {
            out.push(self.gamma.clone());
        }
        out
    }

    pub fn limits(&self) -> Vec<Ordinal> {
        let (j, _) = split_gamma(&self.gamma).expect("validated index");
        (1..=j).map(omega_times).collect()
    }

    pub fn describe(&self) -> String {
        let r = match &self.repr {
            Repr::Explicit(f) => format!("explicit({} fibers)", f.len()),
            Repr::Chain(c) => format!("chain({} tails)", c.tails.len()),
            Repr::Concat(p) => format!("concat({} parts)", p.len()),
            Repr::FromBase(b) => format!("base at {}", b.point),
        };
        format!("{} decomposition onto [0,{}] by {r}", self.kind, self.gamma)
    }
}

/// One line of a validation report.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DecompReport {
    pub checks: Vec<Check>,
    /// `(λ, q_λ)` for limit fibers clopen modulo `q_λ`.
    pub limit_points: Vec<(Ordinal, Point)>,
    pub notes: Vec<String>,
}

impl DecompReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(Check { name, passed: witness.is_none(), witness });
    }
}

/// Configurable bounds for [`decomp_validate`].
#[derive(Clone, Copy, Debug)]
pub struct ValidateParams {
    /// Finite offsets sampled in each block of indices.
    pub index_k: u64,
    /// How far along fundamental sequences to search.
    pub window: u64,
}

impl Default for ValidateParams {
    fn default() -> Self {
        ValidateParams { index_k: 8, window: 64 }
    }
}

fn closedness_witness(space: &Space, d: &Decomposition, lambda: &Ordinal, window: u64) -> Option<String> {
    let above = d.level(space, &lambda.succ());
    let fiber = d.level(space, lambda).difference(&above);
    for k in [1u64, 2, 4, 8] {
        let u = space.fatten(&fiber, k).intersect(&d.domain);
        let absorbed = (0..=window).any(|n| {
            let alpha = lambda.fundamental(n).expect("limit");
            d.level(space, &alpha.succ()).difference(&above).is_subset(&u)
        });
        if !absorbed {
            return Some(format!("no level below {lambda} fits inside {u}"));
        }
    }
    None
}

/// Checks the decomposition on its sampled indices: cover, strictly
/// decreasing levels, fibers clopen modulo a point, continuity and, for the
/// ordinal kind, closedness at every limit.
pub fn decomp_validate(space: &Space, d: &Decomposition, params: ValidateParams) -> DecompReport {
    let mut r = DecompReport::default();
    let y = &d.domain;
    let sample = d.index_sample(params.index_k);

    let cover = if !space.is_closed(y) {
        Some(format!("domain {y} is not closed"))
    } else if d.level(space, &Ordinal::zero()) != *y {
        Some("level 0 differs from the domain".to_string())
    } else {
        sample.iter().find(|a| !d.level(space, a).is_subset(y)).map(|a| format!("level {a} leaves the domain"))
    };
    r.push("cover", cover);

    let decreasing = sample.iter().filter(|a| **a < d.gamma).find_map(|a| {
        let lo = d.level(space, a);
        let hi = d.level(space, &a.succ());
        if !hi.is_subset(&lo) {
            Some(format!("level {} is not inside level {a}", a.succ()))
        } else if hi == lo {
            Some(format!("fiber {a} is empty"))
        } else {
            None
        }
    });
    let top_nonempty = d.level(space, &d.gamma).is_empty().then(|| format!("fiber {} is empty", d.gamma));
    r.push("levels decrease", decreasing.or(top_nonempty));

    let mut delta = None;
    for a in &sample {
        let f = d.fiber(space, a);
        if f.is_empty() {
            continue;
        }
        match space.clopen_modulo_in(&f, y) {
            Ok(Delta::NotInDelta) => {
                delta.get_or_insert(format!("fiber {a} = {f} is not clopen modulo a point"));
            }
            Ok(Delta::Modulo(q)) if a.is_limit() => r.limit_points.push((a.clone(), q)),
            Ok(_) => {}
            Err(e) => {
                delta.get_or_insert(format!("fiber {a}: {e}"));
            }
        }
    }
    r.push("fibers in delta", delta);

    let continuity = sample.iter().find_map(|a| {
        let l = d.level(space, a);
        let next = d.level(space, &a.succ());
        if !space.is_closed(&l) {
            Some(format!("level {a} = {l} is not closed"))
        } else if !space.is_open_in(&next, y) {
            Some(format!("level {} = {next} is not open", a.succ()))
        } else {
            None
        }
    });
    r.push("continuity", continuity);

    let limits = d.limits();
    let limit_meet = limits.iter().find_map(|lam| {
        let l = d.level(space, lam);
        let outside = d.level(space, &lam.fundamental(0).expect("limit")).difference(&l);
        space.grid_points(params.index_k).into_iter().filter(|p| space.contains(&outside, p)).find_map(|p| {
            let leaves = (0..=params.window)
                .any(|n| !space.contains(&d.level(space, &lam.fundamental(n).expect("limit")), &p));
            (!leaves).then(|| format!("{p} stays below level {lam}"))
        })
    });
    r.push("limit levels", limit_meet);

    let closed = limits
        .iter()
        .chain(std::iter::once(&d.gamma).filter(|g| g.is_limit() && !limits.contains(g)))
        .find_map(|lam| closedness_witness(space, d, lam, params.window));
    match d.kind {
        Kind::Ordinal => r.push("closedness", closed),
        Kind::QuasiOrdinal => {
            if closed.is_none() {
                r.notes.push("closedness holds: the kind could be strengthened to ordinal".into());
            }
        }
    }
    r
}

/// The decomposition generated by a clopen chain shrinking to `p`.
pub fn decomp_from_chain(space: &Space, chain: ChainSpec, p: &Point) -> Result<Decomposition> {
    let d = Decomposition::chain(space, space.universe(), chain, Kind::QuasiOrdinal)?;
    for n in 1..=16u64 {
        let u = d.level(space, &Ordinal::finite(n));
        if !space.is_clopen(&u) {
            return Err(Error::Decomposition(format!("U_{n} = {u} is not clopen")));
        }
        if u == d.level(space, &Ordinal::finite(n - 1)) {
            return Err(Error::Decomposition(format!("U_{n} does not shrink")));
        }
    }
    let meet = d.level(space, &Ordinal::omega());
    if meet != space.singleton(p) {
        return Err(Error::Decomposition(format!("the chain shrinks to {meet}, not to {{{p}}}")));
    }
    let base = (1..=8u64).all(|k| {
        let v = space.nbhd(p, k);
        (0..=64u64).any(|n| d.level(space, &Ordinal::finite(n)).is_subset(&v))
    });
    Ok(Decomposition { kind: if base { Kind::Ordinal } else { Kind::QuasiOrdinal }, ..d })
}

/// The tail chain of canonical neighbourhoods of `q` inside `domain`, or the
/// two-fiber split when `q` is isolated there.
pub fn decomp_at_in(space: &Space, q: &Point, domain: &PointSet) -> Result<Decomposition> {
    let y = space.saturate(domain);
    if !space.contains(&y, q) {
        return Err(Error::OutsideSubspace { set: q.to_string(), subspace: y.to_string() });
    }
    let single = space.singleton(q);
    if space.isolated_in(q, &y) {
        let rest = y.difference(&single);
        let fibers = if rest.is_empty() { vec![single] } else { vec![rest, single] };
        let mut d = Decomposition::explicit(space, fibers, Kind::Ordinal)?;
        d.domain = y;
        return Ok(d);
    }
    let mut fixed = space.empty();
    let mut tails = Vec::new();
    for (b, x) in space.coords(q) {
        if x.is_limit() {
            let shift = space.glue_free_index(b, &x) as i64;
            tails.push(TailPiece { branch: b, lambda: x.clone(), top: x, shift });
        } else {
            fixed.push_run(b, Run::point(x));
        }
    }
    Decomposition::chain(space, y, ChainSpec { fixed, tails }, Kind::Ordinal)
}

pub fn decomp_at(space: &Space, q: &Point) -> Result<Decomposition> {
    decomp_at_in(space, q, &space.universe())
}
