//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e1·c1 + ω^e2·c2 + ... + ω^ek·ck` with
//! `e1 > e2 > ... > ek >= 0` and every `ci >= 1`. The empty sum is `0`.
//! Because the representation is canonical, structural equality is ordinal
//! equality.
//!
//! The textual form is `w^2*3 + w + 4`; `ω` is accepted in place of `w`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// One Cantor normal form summand `ω^exp · coef`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: u32,
    pub coef: u64,
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Result of [`Ordinal::classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrdinalClass {
    Zero,
    Successor(Ordinal),
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid ordinal literal {literal:?} at column {column}: {reason}")]
pub struct ParseOrdinalError {
    pub literal: String,
    pub column: usize,
    pub reason: String,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        Self::omega_pow_times(0, n)
    }

    pub fn omega() -> Self {
        Self::omega_pow_times(1, 1)
    }

    /// `ω^exp · coef`.
    pub fn omega_pow_times(exp: u32, coef: u64) -> Self {
        if coef == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![Term { exp, coef }] }
        }
    }

    /// Builds an ordinal from arbitrary `(exp, coef)` summands, in order, by
    /// ordinal addition. The input need not be in normal form.
    pub fn from_terms(terms: &[(u32, u64)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, &(e, c)| acc.add(&Self::omega_pow_times(e, c)))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exp == 0)
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.terms.last(), Some(t) if t.exp > 0)
    }

    /// Zero or a successor, i.e. an isolated point of every ordinal space.
    pub fn is_isolated(&self) -> bool {
        !self.is_limit()
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term { exp: 0, coef }] => Some(*coef),
            _ => None,
        }
    }

    /// Leading exponent, or `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.exp)
    }

    pub fn classify(&self) -> OrdinalClass {
        match self.terms.last() {
            None => OrdinalClass::Zero,
            Some(t) if t.exp == 0 => {
                let mut pred = self.clone();
                let last = pred.terms.last_mut().expect("nonempty");
                last.coef -= 1;
                if last.coef == 0 {
                    pred.terms.pop();
                }
                OrdinalClass::Successor(pred)
            }
            Some(_) => OrdinalClass::Limit,
        }
    }

    /// Ordinal sum `self + rhs`.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= lead.exp)
            .copied()
            .collect();
        let mut rest = rhs.terms.iter();
        match terms.last_mut() {
            Some(t) if t.exp == lead.exp => {
                t.coef += lead.coef;
                rest.next();
            }
            _ => {}
        }
        terms.extend(rest);
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::finite(1))
    }

    pub fn add_finite(&self, n: u64) -> Ordinal {
        self.add(&Ordinal::finite(n))
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        match self.classify() {
            OrdinalClass::Successor(p) => Some(p),
            _ => None,
        }
    }

    /// The `n`-th member of the canonical fundamental sequence of a limit
    /// ordinal: for `λ = ξ + ω^e·c` it is `ξ + ω^e·(c-1) + ω^(e-1)·n`.
    pub fn fundamental(&self, n: u64) -> Option<Ordinal> {
        let last = *self.terms.last()?;
        if last.exp == 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        terms.pop();
        if last.coef > 1 {
            terms.push(Term { exp: last.exp, coef: last.coef - 1 });
        }
        if n > 0 {
            terms.push(Term { exp: last.exp - 1, coef: n });
        }
        Some(Ordinal { terms })
    }

    /// The unique `δ` with `base + δ = self`, when `base <= self`.
    pub fn sub_left(&self, base: &Ordinal) -> Option<Ordinal> {
        if base > self {
            return None;
        }
        let mut i = 0;
        while i < self.terms.len() && i < base.terms.len() && self.terms[i] == base.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Some(Ordinal::zero());
        }
        let a = self.terms[i];
        let mut terms = Vec::with_capacity(self.terms.len() - i);
        match base.terms.get(i) {
            Some(b) if b.exp == a.exp => {
                terms.push(Term { exp: a.exp, coef: a.coef - b.coef });
            }
            _ => terms.push(a),
        }
        terms.extend_from_slice(&self.terms[i + 1..]);
        Some(Ordinal { terms })
    }

    /// The least `x0` with `x0 + tail = self`, if any.
    pub fn sub_right(&self, tail: &Ordinal) -> Option<Ordinal> {
        if tail.is_zero() {
            return Some(self.clone());
        }
        // Any solution has the form prefix + ω^e·j; try those in increasing order.
        let mut candidates = vec![Ordinal::zero()];
        for (i, t) in self.terms.iter().enumerate() {
            let prefix = Ordinal { terms: self.terms[..i].to_vec() };
            for j in 1..=t.coef {
                candidates.push(prefix.add(&Ordinal::omega_pow_times(t.exp, j)));
            }
        }
        candidates.into_iter().find(|c| c.add(tail) == *self)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.exp.cmp(&b.exp).then(a.coef.cmp(&b.coef));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match (t.exp, t.coef) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |column: usize, reason: &str| ParseOrdinalError {
            literal: s.to_string(),
            column,
            reason: reason.to_string(),
        };
        if s.trim().is_empty() {
            return Err(fail(0, "empty literal"));
        }
        let mut acc = Ordinal::zero();
        let mut offset = 0;
        for raw in s.split('+') {
            let lead = raw.len() - raw.trim_start().len();
            let column = offset + lead;
            offset += raw.len() + 1;
            let term = raw.trim().replace(' ', "");
            if term.is_empty() {
                return Err(fail(column, "empty summand"));
            }
            let parse_nat = |t: &str| t.parse::<u64>().map_err(|_| fail(column, "expected a natural number"));
            let value = if let Some(rest) = term.strip_prefix('w').or_else(|| term.strip_prefix('ω')) {
                let (exp_part, coef_part) = match rest.split_once('*') {
                    Some((e, c)) => (e, Some(c)),
                    None => (rest, None),
                };
                let exp = match exp_part {
                    "" => 1,
                    e => {
                        let digits = e.strip_prefix('^').ok_or_else(|| fail(column, "expected '^' or '*' after w"))?;
                        u32::try_from(parse_nat(digits)?).map_err(|_| fail(column, "exponent too large"))?
                    }
                };
                let coef = coef_part.map(parse_nat).transpose()?.unwrap_or(1);
                Ordinal::omega_pow_times(exp, coef)
            } else if term.contains('*') {
                // `2*w` is left multiplication, which equals w; refuse the ambiguity.
                return Err(fail(column, "coefficients go on the right: write w*c"));
            } else {
                Ordinal::finite(parse_nat(&term)?)
            };
            acc = acc.add(&value);
        }
        Ok(acc)
    }
}

/// Parses an ordinal literal, panicking on malformed input. Intended for tests
/// and fixtures.
pub fn ord(s: &str) -> Ordinal {
    s.parse().unwrap_or_else(|e| panic!("{e}"))
}
