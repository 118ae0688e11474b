//! Permutations of finite sets of positive integers.
//!
//! A [`Permutation`] is a linear order on its domain. Values are strictly
//! positive when built from user input; `0` is reserved for the sentinel that
//! some internal maps prepend to a permutation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    elems: Vec<u32>,
}

impl Permutation {
    /// Builds a permutation from user-facing values: distinct and strictly positive.
    pub fn new(elems: Vec<u32>) -> Result<Self> {
        if let Some(&z) = elems.iter().find(|&&v| v == 0) {
            return Err(invalid(format!(
                "permutation entries must be positive, got {z}"
            )));
        }
        Self::new_internal(elems)
    }

    /// Like [`Permutation::new`] but admits the sentinel `0`.
    pub(crate) fn new_internal(elems: Vec<u32>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &v in &elems {
            if !seen.insert(v) {
                return Err(invalid(format!("repeated entry {v}")));
            }
        }
        Ok(Permutation { elems })
    }

    pub(crate) fn from_vec_unchecked(elems: Vec<u32>) -> Self {
        debug_assert!(Self::new_internal(elems.clone()).is_ok());
        Permutation { elems }
    }

    /// The increasing permutation `1 2 … m`.
    pub fn identity(m: usize) -> Self {
        Permutation {
            elems: (1..=m as u32).collect(),
        }
    }

    /// The increasing permutation of an arbitrary ground set.
    pub fn increasing(ground: &[u32]) -> Self {
        let mut v = ground.to_vec();
        v.sort_unstable();
        Permutation { elems: v }
    }

    pub fn empty() -> Self {
        Permutation { elems: Vec::new() }
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.elems
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// 1-based access, matching the position conventions of the statistics.
    pub fn at(&self, pos: usize) -> u32 {
        self.elems[pos - 1]
    }

    /// Sorted domain.
    pub fn domain(&self) -> Vec<u32> {
        let mut d = self.elems.clone();
        d.sort_unstable();
        d
    }

    pub fn max_value(&self) -> Option<u32> {
        self.elems.iter().copied().max()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.elems.contains(&v)
    }

    pub fn position_of(&self, v: u32) -> Option<usize> {
        self.elems.iter().position(|&x| x == v)
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.elems.clone();
        v.reverse();
        Permutation { elems: v }
    }

    /// True when the domain is exactly `{offset+1, …, offset+len}`.
    pub fn is_over_interval(&self, offset: u32) -> bool {
        self.domain()
            .iter()
            .enumerate()
            .all(|(i, &v)| v == offset + i as u32 + 1)
    }

    /// Returns the first value shared with `other`, if any.
    pub fn shared_value(&self, other: &Permutation) -> Option<u32> {
        let mine: BTreeSet<u32> = self.elems.iter().copied().collect();
        other.elems.iter().copied().find(|v| mine.contains(v))
    }

    pub fn ensure_disjoint(&self, other: &Permutation) -> Result<()> {
        match self.shared_value(other) {
            Some(v) => Err(Error::DomainOverlap(v)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.elems.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Parses comma-separated positive integers; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(Permutation::empty());
        }
        let elems = compact
            .split(',')
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("not a positive integer: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(elems)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Permutation::new_internal(parse_values(&s).map_err(serde::de::Error::custom)?)
            .map_err(serde::de::Error::custom)
    }
}

fn parse_values(s: &str) -> Result<Vec<u32>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(Vec::new());
    }
    compact
        .split(',')
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad entry {t:?}")))
        })
        .collect()
}

/// Rearranges `v` into the lexicographically next arrangement; false once
/// the last arrangement has been passed (and `v` is reset to sorted order).
pub(crate) fn next_arrangement<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All of `L(ground)` in lexicographic order.
pub fn all_permutations(ground: &[u32]) -> Vec<Permutation> {
    let mut cur = ground.to_vec();
    cur.sort_unstable();
    let mut out = vec![Permutation { elems: cur.clone() }];
    while next_arrangement(&mut cur) {
        out.push(Permutation { elems: cur.clone() });
    }
    out
}

/// Relabels `pi` onto `target` through the unique increasing bijection
/// `dom(pi) -> target`.
pub fn standardize(pi: &Permutation, target: &[u32]) -> Result<Permutation> {
    if target.len() != pi.len() {
        return Err(invalid(format!(
            "target has {} elements but the permutation has length {}",
            target.len(),
            pi.len()
        )));
    }
    let mut tgt = target.to_vec();
    tgt.sort_unstable();
    tgt.dedup();
    if tgt.len() != target.len() {
        return Err(invalid("target set has repeated elements"));
    }
    if tgt.first() == Some(&0) {
        return Err(invalid("target set must contain positive integers"));
    }
    Ok(relabel_onto(pi, &tgt))
}

/// `tgt` must be sorted and of the same size as `pi`.
pub(crate) fn relabel_onto(pi: &Permutation, tgt: &[u32]) -> Permutation {
    let dom = pi.domain();
    let elems = pi
        .elems
        .iter()
        .map(|v| tgt[dom.binary_search(v).expect("value in its own domain")])
        .collect();
    Permutation { elems }
}

/// Standardization onto `{1, …, |pi|}`.
pub fn standardize_unit(pi: &Permutation) -> Permutation {
    let tgt: Vec<u32> = (1..=pi.len() as u32).collect();
    relabel_onto(pi, &tgt)
}

/// Labels of the `m+1` spaces of a permutation, listed left to right
/// (initial space first, final space last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceLabeling {
    pub labels: Vec<usize>,
}

impl SpaceLabeling {
    /// Index of the space (0 = initial) carrying `label`.
    pub fn space_with_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

/// Space labels of an arbitrary (possibly empty) sequence of distinct values.
///
/// Spaces sitting at descents of `0 s 0` are labelled `0, 1, …` from right to
/// left; the remaining spaces continue the count from left to right.
pub(crate) fn labels_of(seq: &[u32]) -> Vec<usize> {
    let m = seq.len();
    let is_descent_space = |s: usize| -> bool {
        if s == m {
            true
        } else if s == 0 {
            false
        } else {
            seq[s - 1] > seq[s]
        }
    };
    let mut labels = vec![0usize; m + 1];
    let mut next = 0usize;
    for s in (0..=m).rev() {
        if is_descent_space(s) {
            labels[s] = next;
            next += 1;
        }
    }
    for (s, label) in labels.iter_mut().enumerate() {
        if !is_descent_space(s) {
            *label = next;
            next += 1;
        }
    }
    labels
}

pub fn space_labels(pi: &Permutation) -> Result<SpaceLabeling> {
    if pi.is_empty() {
        return Err(invalid("space labels need a nonempty permutation"));
    }
    Ok(SpaceLabeling {
        labels: labels_of(&pi.elems),
    })
}

/// Inserts `v` (a new maximum) in the space carrying `label`; raises maj by `label`.
pub fn insert_in_space(pi: &Permutation, v: u32, label: usize) -> Result<Permutation> {
    if pi.max_value().is_some_and(|mx| v <= mx) || v == 0 {
        return Err(invalid(format!("{v} does not exceed every entry of {pi}")));
    }
    if label > pi.len() {
        return Err(invalid(format!(
            "label {label} out of range 0..={}",
            pi.len()
        )));
    }
    let labels = labels_of(&pi.elems);
    let space = labels
        .iter()
        .position(|&l| l == label)
        .expect("labels are a permutation");
    let mut elems = pi.elems.clone();
    elems.insert(space, v);
    Ok(Permutation { elems })
}

/// Deterministic permutation of `ground` whose descent set is exactly `descents`.
///
/// Position `i` gets weight `#{d in descents : d >= i}`; the output is the
/// standardization of that weight word to `ground`, equal weights increasing
/// from left to right.
pub fn perm_with_descent_set(ground: &[u32], descents: &BTreeSet<usize>) -> Result<Permutation> {
    let m = ground.len();
    if let Some(&bad) = descents.iter().find(|&&d| d == 0 || d >= m) {
        return Err(invalid(format!(
            "descent position {bad} outside [1, {}]",
            m.saturating_sub(1)
        )));
    }
    let mut sorted = ground.to_vec();
    sorted.sort_unstable();
    let weights: Vec<usize> = (1..=m).map(|i| descents.range(i..).count()).collect();
    let mut order: Vec<usize> = (0..m).collect();
    // stable sort keeps equal weights in left-to-right order
    order.sort_by_key(|&p| weights[p]);
    let mut elems = vec![0u32; m];
    for (rank, &p) in order.iter().enumerate() {
        elems[p] = sorted[rank];
    }
    Ok(Permutation { elems })
}

/// Deterministic permutation of `[m]` with left peak set `left_peaks` and
/// final-ascent indicator `chi_plus`.
pub fn perm_with_left_peak_profile(
    m: usize,
    left_peaks: &BTreeSet<usize>,
    chi_plus: u8,
) -> Result<Permutation> {
    let infeasible = |why: &str| {
        Err(Error::InfeasibleProfile(format!(
            "no permutation of [{m}] has left peaks {left_peaks:?} and chi_plus {chi_plus}: {why}"
        )))
    };
    if chi_plus > 1 {
        return Err(invalid("chi_plus must be 0 or 1"));
    }
    if let Some(&bad) = left_peaks.iter().find(|&&p| p == 0 || p >= m) {
        return Err(invalid(format!(
            "left peak position {bad} outside [1, {}]",
            m.saturating_sub(1)
        )));
    }
    if left_peaks
        .iter()
        .zip(left_peaks.iter().skip(1))
        .any(|(a, b)| b - a == 1)
    {
        return infeasible("left peaks cannot be adjacent");
    }
    let ground: Vec<u32> = (1..=m as u32).collect();
    if m <= 1 {
        // Lpk and chi_plus are both empty/zero for these lengths
        return if chi_plus == 0 {
            Ok(Permutation::identity(m))
        } else {
            infeasible("length below 2 has no final ascent")
        };
    }
    let descents: BTreeSet<usize> = match (left_peaks.iter().next_back(), chi_plus) {
        (None, 1) => BTreeSet::new(),
        (None, _) => return infeasible("a permutation without left peaks is increasing"),
        (Some(&top), 1) => {
            if top == m - 1 {
                return infeasible("a left peak at m-1 forces a final descent");
            }
            left_peaks.clone()
        }
        (Some(&top), _) => left_peaks.iter().copied().chain(top..m).collect(),
    };
    perm_with_descent_set(&ground, &descents)
}
