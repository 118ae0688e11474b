//! Permutation statistics and their distributions over collections.
//!
//! Positions are 1-based. Peak-type statistics place the sentinel `0` (peaks)
//! or `∞` (valleys) at position `0` and/or `m+1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::perm::Permutation;

const INF: u64 = u64::MAX;

/// Which ends of the permutation receive a sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Interior,
    Left,
    Right,
    Exterior,
}

impl Variant {
    fn ends(self) -> (bool, bool) {
        match self {
            Variant::Interior => (false, false),
            Variant::Left => (true, false),
            Variant::Right => (false, true),
            Variant::Exterior => (true, true),
        }
    }
}

/// Interior peaks (0-based indices) of an arbitrary sequence.
pub(crate) fn interior_peaks(s: &[u64]) -> Vec<usize> {
    (1..s.len().saturating_sub(1))
        .filter(|&i| s[i - 1] < s[i] && s[i] > s[i + 1])
        .collect()
}

fn framed_extrema(pi: &Permutation, variant: Variant, sentinel: u64, peaks: bool) -> Vec<usize> {
    let (left, right) = variant.ends();
    let mut seq: Vec<u64> = Vec::with_capacity(pi.len() + 2);
    if left {
        seq.push(sentinel);
    }
    seq.extend(pi.as_slice().iter().map(|&v| v as u64));
    if right {
        seq.push(sentinel);
    }
    let shift = if left { 0 } else { 1 };
    (1..seq.len().saturating_sub(1))
        .filter(|&i| {
            if peaks {
                seq[i - 1] < seq[i] && seq[i] > seq[i + 1]
            } else {
                seq[i - 1] > seq[i] && seq[i] < seq[i + 1]
            }
        })
        .map(|i| i + shift)
        .collect()
}

pub fn des_set(pi: &Permutation) -> Vec<usize> {
    let s = pi.as_slice();
    (1..s.len()).filter(|&i| s[i - 1] > s[i]).collect()
}

pub fn asc_set(pi: &Permutation) -> Vec<usize> {
    let s = pi.as_slice();
    (1..s.len()).filter(|&i| s[i - 1] < s[i]).collect()
}

pub fn maj(pi: &Permutation) -> i64 {
    des_set(pi).iter().map(|&i| i as i64).sum()
}

pub fn inv(pi: &Permutation) -> i64 {
    let s = pi.as_slice();
    let mut count = 0i64;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if s[i] > s[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn peak_family(pi: &Permutation, variant: Variant) -> Vec<usize> {
    framed_extrema(pi, variant, 0, true)
}

pub fn valley_family(pi: &Permutation, variant: Variant) -> Vec<usize> {
    framed_extrema(pi, variant, INF, false)
}

pub fn pk_set(pi: &Permutation) -> Vec<usize> {
    peak_family(pi, Variant::Interior)
}

pub fn lpk_set(pi: &Permutation) -> Vec<usize> {
    peak_family(pi, Variant::Left)
}

pub fn rpk_set(pi: &Permutation) -> Vec<usize> {
    peak_family(pi, Variant::Right)
}

pub fn epk_set(pi: &Permutation) -> Vec<usize> {
    peak_family(pi, Variant::Exterior)
}

pub fn chi_minus(pi: &Permutation) -> i64 {
    let s = pi.as_slice();
    (s.len() >= 2 && s[0] > s[1]) as i64
}

pub fn chi_plus(pi: &Permutation) -> i64 {
    let s = pi.as_slice();
    let m = s.len();
    (m >= 2 && s[m - 2] < s[m - 1]) as i64
}

fn monotone_factor_count(s: &[u64]) -> i64 {
    match s.len() {
        0 => 0,
        1 => 1,
        _ => {
            let turns = s
                .windows(3)
                .filter(|w| (w[0] < w[1]) != (w[1] < w[2]))
                .count();
            1 + turns as i64
        }
    }
}

/// Number of maximal monotone factors.
pub fn biruns(pi: &Permutation) -> i64 {
    let s: Vec<u64> = pi.as_slice().iter().map(|&v| v as u64).collect();
    monotone_factor_count(&s)
}

/// Number of maximal monotone factors of `0π`; zero for the empty permutation.
pub fn udr(pi: &Permutation) -> i64 {
    if pi.is_empty() {
        return 0;
    }
    let s: Vec<u64> = std::iter::once(0)
        .chain(pi.as_slice().iter().map(|&v| v as u64))
        .collect();
    monotone_factor_count(&s)
}

/// A statistic name, or a flat tuple of names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statistic {
    DesSet,
    Des,
    AscSet,
    Asc,
    Maj,
    Inv,
    PkSet,
    Pk,
    ValSet,
    Val,
    LpkSet,
    Lpk,
    RpkSet,
    Rpk,
    EpkSet,
    Epk,
    LvalSet,
    Lval,
    RvalSet,
    Rval,
    EvalSet,
    Eval,
    ChiMinus,
    ChiPlus,
    Udr,
    Biruns,
    Tuple(Vec<Statistic>),
}

const NAMES: &[(&str, Statistic)] = &[
    ("Des", Statistic::DesSet),
    ("des", Statistic::Des),
    ("Asc", Statistic::AscSet),
    ("asc", Statistic::Asc),
    ("maj", Statistic::Maj),
    ("inv", Statistic::Inv),
    ("Pk", Statistic::PkSet),
    ("pk", Statistic::Pk),
    ("Val", Statistic::ValSet),
    ("val", Statistic::Val),
    ("Lpk", Statistic::LpkSet),
    ("lpk", Statistic::Lpk),
    ("Rpk", Statistic::RpkSet),
    ("rpk", Statistic::Rpk),
    ("Epk", Statistic::EpkSet),
    ("epk", Statistic::Epk),
    ("Lval", Statistic::LvalSet),
    ("lval", Statistic::Lval),
    ("Rval", Statistic::RvalSet),
    ("rval", Statistic::Rval),
    ("Eval", Statistic::EvalSet),
    ("eval", Statistic::Eval),
    ("chi_minus", Statistic::ChiMinus),
    ("chi_plus", Statistic::ChiPlus),
    ("udr", Statistic::Udr),
    ("biruns", Statistic::Biruns),
];

impl Statistic {
    pub fn tuple(parts: Vec<Statistic>) -> Self {
        Statistic::Tuple(parts)
    }

    /// Every named (non-tuple) statistic.
    pub fn all_named() -> Vec<Statistic> {
        NAMES.iter().map(|(_, s)| s.clone()).collect()
    }

    /// True when the value is determined by the descent set and length.
    pub fn is_descent_statistic(&self) -> bool {
        match self {
            Statistic::Inv => false,
            Statistic::Tuple(parts) => parts.iter().all(Statistic::is_descent_statistic),
            _ => true,
        }
    }

    pub fn is_integer_valued(&self) -> bool {
        !matches!(
            self,
            Statistic::DesSet
                | Statistic::AscSet
                | Statistic::PkSet
                | Statistic::ValSet
                | Statistic::LpkSet
                | Statistic::RpkSet
                | Statistic::EpkSet
                | Statistic::LvalSet
                | Statistic::RvalSet
                | Statistic::EvalSet
                | Statistic::Tuple(_)
        )
    }

    pub fn evaluate(&self, pi: &Permutation) -> StatValue {
        use StatValue::{Int, Set};
        let count = |v: Vec<usize>| Int(v.len() as i64);
        match self {
            Statistic::DesSet => Set(des_set(pi)),
            Statistic::Des => count(des_set(pi)),
            Statistic::AscSet => Set(asc_set(pi)),
            Statistic::Asc => count(asc_set(pi)),
            Statistic::Maj => Int(maj(pi)),
            Statistic::Inv => Int(inv(pi)),
            Statistic::PkSet => Set(pk_set(pi)),
            Statistic::Pk => count(pk_set(pi)),
            Statistic::ValSet => Set(valley_family(pi, Variant::Interior)),
            Statistic::Val => count(valley_family(pi, Variant::Interior)),
            Statistic::LpkSet => Set(lpk_set(pi)),
            Statistic::Lpk => count(lpk_set(pi)),
            Statistic::RpkSet => Set(rpk_set(pi)),
            Statistic::Rpk => count(rpk_set(pi)),
            Statistic::EpkSet => Set(epk_set(pi)),
            Statistic::Epk => count(epk_set(pi)),
            Statistic::LvalSet => Set(valley_family(pi, Variant::Left)),
            Statistic::Lval => count(valley_family(pi, Variant::Left)),
            Statistic::RvalSet => Set(valley_family(pi, Variant::Right)),
            Statistic::Rval => count(valley_family(pi, Variant::Right)),
            Statistic::EvalSet => Set(valley_family(pi, Variant::Exterior)),
            Statistic::Eval => count(valley_family(pi, Variant::Exterior)),
            Statistic::ChiMinus => Int(chi_minus(pi)),
            Statistic::ChiPlus => Int(chi_plus(pi)),
            Statistic::Udr => Int(udr(pi)),
            Statistic::Biruns => Int(biruns(pi)),
            Statistic::Tuple(parts) => {
                StatValue::Tuple(parts.iter().map(|s| s.evaluate(pi)).collect())
            }
        }
    }

    /// Integer value, for integer-valued statistics.
    pub fn evaluate_int(&self, pi: &Permutation) -> Result<i64> {
        match self.evaluate(pi) {
            StatValue::Int(v) => Ok(v),
            _ => Err(invalid(format!("{self} is not integer valued"))),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            named => {
                let name = NAMES
                    .iter()
                    .find(|(_, s)| s == named)
                    .map(|(n, _)| *n)
                    .unwrap_or("?");
                f.write_str(name)
            }
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    /// Accepts a name (`maj`, `Pk`, …), a parenthesized tuple `(udr,pk)`, or
    /// a dash-joined tuple `udr-pk-des`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let named = |name: &str| {
            NAMES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, st)| st.clone())
                .ok_or_else(|| invalid(format!("unknown statistic {name:?}")))
        };
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let parts = inner.split(',').map(named).collect::<Result<Vec<_>>>()?;
            if parts.is_empty() {
                return Err(invalid("empty tuple statistic"));
            }
            return Ok(Statistic::Tuple(parts));
        }
        if s.contains('-') {
            return Ok(Statistic::Tuple(
                s.split('-').map(named).collect::<Result<Vec<_>>>()?,
            ));
        }
        named(&s)
    }
}

impl Serialize for Statistic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Value of a statistic: an integer, a set of positions, or a tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StatValue {
    Int(i64),
    Set(Vec<usize>),
    Tuple(Vec<StatValue>),
}

impl StatValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            StatValue::Int(v) => Some(*v),
            _ => None,
        }
    }
}

impl Ord for StatValue {
    /// Integers by value, sets by size then lexicographically, tuples
    /// componentwise; across kinds Int < Set < Tuple.
    fn cmp(&self, other: &Self) -> Ordering {
        use StatValue::*;
        match (self, other) {
            (Int(a), Int(b)) => a.cmp(b),
            (Set(a), Set(b)) => a.len().cmp(&b.len()).then_with(|| a.cmp(b)),
            (Tuple(a), Tuple(b)) => a.cmp(b),
            (Int(_), _) => Ordering::Less,
            (_, Int(_)) => Ordering::Greater,
            (Set(_), Tuple(_)) => Ordering::Less,
            (Tuple(_), Set(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for StatValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatValue::Int(v) => write!(f, "{v}"),
            StatValue::Set(s) => {
                f.write_str("[")?;
                for (i, p) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
            StatValue::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl FromStr for StatValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            if inner.trim().is_empty() {
                return Ok(StatValue::Set(Vec::new()));
            }
            let v = inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad position {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(StatValue::Set(v));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return split_top_level(inner)
                .into_iter()
                .map(|t| t.parse())
                .collect::<Result<Vec<_>>>()
                .map(StatValue::Tuple);
        }
        s.parse::<i64>()
            .map(StatValue::Int)
            .map_err(|_| Error::Parse(format!("bad statistic value {s:?}")))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Multiset of statistic values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Distribution {
    counts: BTreeMap<StatValue, u64>,
}

#[derive(Serialize, Deserialize)]
struct DistributionEntry {
    value: String,
    mult: u64,
}

impl Distribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: StatValue) {
        *self.counts.entry(value).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: Distribution) {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
    }

    pub fn multiplicity(&self, value: &StatValue) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StatValue, u64)> {
        self.counts.iter().map(|(v, &c)| (v, c))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("distribution serializes")
    }
}

impl FromIterator<StatValue> for Distribution {
    fn from_iter<I: IntoIterator<Item = StatValue>>(iter: I) -> Self {
        let mut d = Distribution::new();
        for v in iter {
            d.add(v);
        }
        d
    }
}

impl Serialize for Distribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<DistributionEntry> = self
            .counts
            .iter()
            .map(|(v, &mult)| DistributionEntry {
                value: v.to_string(),
                mult,
            })
            .collect();
        entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<DistributionEntry>::deserialize(d)?;
        let mut out = Distribution::new();
        for e in entries {
            let v: StatValue = e.value.parse().map_err(serde::de::Error::custom)?;
            *out.counts.entry(v).or_insert(0) += e.mult;
        }
        Ok(out)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{c}")?;
        }
        f.write_str("}")
    }
}

pub fn evaluate(stat: &Statistic, pi: &Permutation) -> StatValue {
    stat.evaluate(pi)
}

pub fn distribution<'a, I>(stat: &Statistic, perms: I) -> Distribution
where
    I: IntoIterator<Item = &'a Permutation>,
{
    perms.into_iter().map(|p| stat.evaluate(p)).collect()
}
