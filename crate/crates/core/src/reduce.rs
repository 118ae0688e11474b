//! Statistic-preserving bijections between shuffle sets and the reduction
//! pipelines that chain them into a canonical form.
//!
//! Every pipeline rewrites one operand of a normalized pair `π ∈ L([m])`,
//! `σ ∈ L([n]+m)` step by step. Each step is a bijection
//! `π⧢σ → π''⧢σ` (or `π⧢σ → π⧢σ''`) and lowers a termination measure `d`;
//! the recorded [`ReductionTrace`] can be replayed on any shuffle.
//!
//! The peak moves all reduce to one word-level involution: inside the factor
//! of the shuffle word between the `(J-2)`-th and `(J+1)`-th letters `a`, a
//! block of `b`s sitting only before the `(J-1)`-th `a` is moved after the
//! `J`-th `a`, and vice versa. Sentinel framings (`0π`, `π0`, `0π0`) become an
//! extra `a` at the matching end of the word, so no sentinel values are needed.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::perm::{labels_of, perm_with_descent_set, perm_with_left_peak_profile, Permutation};
use crate::shuffle::{from_word, interleave, t_swap, word_of, Letter, NormalMode, ShuffleWord};
use crate::stats::{self, interior_peaks, Statistic};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub pi: Permutation,
    pub sigma: Permutation,
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} | {})", self.pi, self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum StepKind {
    /// Relabel the union of the domains onto `[m+n]`.
    Standardize,
    TSwap {
        i: u32,
    },
    Phi,
    PhiTilde,
    /// Move the descent of `σ` at peak `i` to `i-1`.
    ThetaDes {
        i: usize,
    },
    /// Remove the descent of `σ` at position 1.
    ThetaMajFirst,
    /// Move the peak of `π` at `j` to `j-1`.
    ThetaPk {
        j: usize,
    },
    /// Move the left peak of `π` at `j` to `j-1`.
    ThetaLpk {
        j: usize,
    },
    /// Move the right peak of `π` at `j` to `j+1`.
    ThetaRpkInverse {
        j: usize,
    },
    /// Move the exterior peak of `π` at `j` to `j-1`.
    ThetaEpk {
        j: usize,
    },
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Standardize => f.write_str("standardize"),
            StepKind::TSwap { i } => write!(f, "t_swap i={i}"),
            StepKind::Phi => f.write_str("phi"),
            StepKind::PhiTilde => f.write_str("phi_tilde"),
            StepKind::ThetaDes { i } => write!(f, "theta_des i={i}"),
            StepKind::ThetaMajFirst => f.write_str("theta_maj_first"),
            StepKind::ThetaPk { j } => write!(f, "theta_pk j={j}"),
            StepKind::ThetaLpk { j } => write!(f, "theta_lpk j={j}"),
            StepKind::ThetaRpkInverse { j } => write!(f, "theta_rpk_inverse j={j}"),
            StepKind::ThetaEpk { j } => write!(f, "theta_epk j={j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    #[serde(flatten)]
    pub kind: StepKind,
    pub source: Pair,
    pub target: Pair,
    pub measure_after: i64,
}

impl ReductionStep {
    pub fn new(
        kind: StepKind,
        source: (Permutation, Permutation),
        target: (Permutation, Permutation),
    ) -> Self {
        ReductionStep {
            kind,
            source: Pair {
                pi: source.0,
                sigma: source.1,
            },
            target: Pair {
                pi: target.0,
                sigma: target.1,
            },
            measure_after: 0,
        }
    }

    /// Maps a shuffle of the source pair to the corresponding shuffle of the target pair.
    pub fn apply(&self, tau: &Permutation) -> Result<Permutation> {
        let (p, s) = (&self.source.pi, &self.source.sigma);
        let (tp, ts) = (&self.target.pi, &self.target.sigma);
        match self.kind {
            StepKind::Standardize | StepKind::Phi | StepKind::PhiTilde => {
                from_word(tp, ts, &word_of(tau, p, s)?)
            }
            StepKind::TSwap { i } => {
                word_of(tau, p, s)?;
                t_swap(tau, i)
            }
            StepKind::ThetaDes { i } => theta_des(tau, p, s, i, ts),
            StepKind::ThetaMajFirst => theta_maj_first(tau, p, s, ts),
            StepKind::ThetaPk { j } => theta_pk(tau, p, tp, s, j),
            StepKind::ThetaLpk { .. } => theta_lpk(tau, p, s, tp),
            StepKind::ThetaRpkInverse { .. } => theta_rpk_inverse(tau, p, s, tp),
            StepKind::ThetaEpk { .. } => theta_epk(tau, p, s, tp),
        }
    }
}

/// Ordered, replayable list of bijection steps together with the measure
/// recorded after each one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub statistic: Statistic,
    pub source: Pair,
    pub initial_measure: i64,
    steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn new(statistic: Statistic, pi: Permutation, sigma: Permutation) -> Self {
        ReductionTrace {
            statistic,
            source: Pair { pi, sigma },
            initial_measure: 0,
            steps: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, mut step: ReductionStep, measure_after: i64) {
        step.measure_after = measure_after;
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[ReductionStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn measure_values(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.measure_after).collect()
    }

    /// The pair reached after the last step.
    pub fn target(&self) -> &Pair {
        self.steps.last().map(|s| &s.target).unwrap_or(&self.source)
    }

    pub fn apply(&self, tau: &Permutation) -> Result<Permutation> {
        apply_trace(self, tau)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

impl fmt::Display for ReductionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "statistic {}: start {} d={}",
            self.statistic, self.source, self.initial_measure
        )?;
        for (k, st) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "  {}. {}: {} -> {} d={}",
                k + 1,
                st.kind,
                st.source,
                st.target,
                st.measure_after
            )?;
        }
        write!(f, "result {}", self.target())
    }
}

/// Replays every step of `trace` on `tau`.
pub fn apply_trace(trace: &ReductionTrace, tau: &Permutation) -> Result<Permutation> {
    word_of(tau, &trace.source.pi, &trace.source.sigma).map_err(|_| {
        invalid(format!(
            "{tau} is not in the initial shuffle set {}",
            trace.source
        ))
    })?;
    trace
        .steps
        .iter()
        .try_fold(tau.clone(), |t, step| step.apply(&t))
}

fn as_set(v: Vec<usize>) -> BTreeSet<usize> {
    v.into_iter().collect()
}

fn moved(set: &[usize], from: usize, to: usize) -> BTreeSet<usize> {
    set.iter()
        .copied()
        .filter(|&k| k != from)
        .chain(std::iter::once(to))
        .collect()
}

fn check_sigma_above_pi(pi: &Permutation, sigma: &Permutation) -> Result<()> {
    match (pi.max_value(), sigma.as_slice().iter().min()) {
        (Some(hi), Some(&lo)) if hi >= lo => Err(invalid(format!(
            "every entry of ({sigma}) must exceed every entry of ({pi})"
        ))),
        _ => Ok(()),
    }
}

fn check_normalized(pi: &Permutation, sigma: &Permutation) -> Result<()> {
    if !pi.is_over_interval(0) || !sigma.is_over_interval(pi.len() as u32) {
        return Err(invalid(format!(
            "operands must be normalized to ([m], [n]+m), got ({pi}) and ({sigma}); run normalize_pair first"
        )));
    }
    Ok(())
}

/// Lowers maj by one: moves the descent of `σ` at the interior peak `i` to `i-1`.
///
/// The factor of `tau` strictly between `σ_{i-1}` and `σ_{i+1}` holds `σ_i` and
/// a run `δ` of `π` entries; `σ_i` leaves the space labelled `x` of `δ` and
/// returns in the space labelled `x-1` (mod `|δ|+1`).
pub fn theta_des(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    i: usize,
    sigma_new: &Permutation,
) -> Result<Permutation> {
    let n = sigma.len();
    if i < 2 || i + 1 > n {
        return Err(invalid(format!(
            "theta_des needs 2 <= i <= n-1, got i={i}, n={n}"
        )));
    }
    if !(sigma.at(i - 1) < sigma.at(i) && sigma.at(i) > sigma.at(i + 1)) {
        return Err(invalid(format!("position {i} is not a peak of {sigma}")));
    }
    if sigma_new.domain() != sigma.domain() {
        return Err(invalid("sigma_new must have the same domain as sigma"));
    }
    let wanted = moved(&stats::des_set(sigma), i, i - 1);
    if as_set(stats::des_set(sigma_new)) != wanted {
        return Err(invalid(format!(
            "sigma_new must have descent set {wanted:?}"
        )));
    }
    check_sigma_above_pi(pi, sigma)?;
    let word = word_of(tau, pi, sigma)?;

    let t = tau.as_slice();
    let lo = tau
        .position_of(sigma.at(i - 1))
        .expect("shuffle contains sigma");
    let hi = tau
        .position_of(sigma.at(i + 1))
        .expect("shuffle contains sigma");
    let peak = tau
        .position_of(sigma.at(i))
        .expect("shuffle contains sigma");
    let delta: Vec<u32> = t[lo + 1..hi]
        .iter()
        .copied()
        .filter(|&v| v != sigma.at(i))
        .collect();
    let removed_space = peak - lo - 1;
    let labels = labels_of(&delta);
    let x = labels[removed_space];
    let target_label = if x == 0 { delta.len() } else { x - 1 };
    let new_space = labels
        .iter()
        .position(|&l| l == target_label)
        .expect("labels cover 0..=|delta|");

    let mut letters: Vec<Letter> = word.letters()[..=lo].to_vec();
    letters.extend(std::iter::repeat_n(Letter::A, new_space));
    letters.push(Letter::B);
    letters.extend(std::iter::repeat_n(Letter::A, delta.len() - new_space));
    letters.extend_from_slice(&word.letters()[hi..]);
    Ok(interleave(pi, sigma_new, &letters))
}

/// Lowers maj by one when `σ` descends at position 1, through the lift that
/// prepends `m+1` to every shuffle and raises the entries of `σ` by one.
pub fn theta_maj_first(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    sigma_new: &Permutation,
) -> Result<Permutation> {
    let (m, n) = (pi.len() as u32, sigma.len() as u32);
    if n < 2 || sigma.at(1) < sigma.at(2) {
        return Err(invalid(format!("{sigma} has no descent at position 1")));
    }
    check_normalized(pi, sigma)?;
    if sigma_new.domain() != sigma.domain() {
        return Err(invalid("sigma_new must have the same domain as sigma"));
    }
    let wanted: BTreeSet<usize> = stats::des_set(sigma)
        .into_iter()
        .filter(|&k| k != 1)
        .collect();
    if as_set(stats::des_set(sigma_new)) != wanted {
        return Err(invalid(format!(
            "sigma_new must have descent set {wanted:?}"
        )));
    }
    let word = word_of(tau, pi, sigma)?;

    let lift = |s: &Permutation, head: u32, shift: u32| {
        let mut v = vec![head];
        v.extend(s.as_slice().iter().map(|&x| x + shift));
        Permutation::from_vec_unchecked(v)
    };
    let sigma_lift = lift(sigma, m + 1, 1);
    let sigma_new_lift = lift(sigma_new, m + n + 1, 0);
    let mut lifted_word = vec![Letter::B];
    lifted_word.extend_from_slice(word.letters());
    let tau_lift = interleave(pi, &sigma_lift, &lifted_word);

    let image = theta_des(&tau_lift, pi, &sigma_lift, 2, &sigma_new_lift)?;
    let image_word = word_of(&image, pi, &sigma_new_lift)?;
    if image_word.letters().first() != Some(&Letter::B) {
        return Err(invalid(
            "lifted image does not start with the prepended maximum",
        ));
    }
    Ok(interleave(pi, sigma_new, &image_word.letters()[1..]))
}

/// Word-level peak move at augmented index `peak` (1-based count of `a`s).
/// An involution for fixed `peak`.
pub(crate) fn peak_move_word(word: &[Letter], peak: usize) -> Vec<Letter> {
    let a_positions: Vec<usize> = word
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == Letter::A)
        .map(|(k, _)| k)
        .collect();
    let (s, p1, p2, t) = (
        a_positions[peak - 3],
        a_positions[peak - 2],
        a_positions[peak - 1],
        a_positions[peak],
    );
    let (before, between, after) = (p1 - s - 1, p2 - p1 - 1, t - p2 - 1);
    let middle: Vec<Letter> = if before > 0 && between == 0 && after == 0 {
        [Letter::A, Letter::A]
            .into_iter()
            .chain(std::iter::repeat_n(Letter::B, before))
            .collect()
    } else if before == 0 && between == 0 && after > 0 {
        std::iter::repeat_n(Letter::B, after)
            .chain([Letter::A, Letter::A])
            .collect()
    } else {
        word[s + 1..t].to_vec()
    };
    let mut out = word[..=s].to_vec();
    out.extend(middle);
    out.extend_from_slice(&word[t..]);
    out
}

#[derive(Debug, Clone, Copy)]
struct Framing {
    left: bool,
    right: bool,
}

impl Framing {
    const NONE: Framing = Framing {
        left: false,
        right: false,
    };
    const RIGHT: Framing = Framing {
        left: false,
        right: true,
    };
    const BOTH: Framing = Framing {
        left: true,
        right: true,
    };

    fn values(self, pi: &Permutation) -> Vec<u64> {
        let mut v = Vec::with_capacity(pi.len() + 2);
        if self.left {
            v.push(0);
        }
        v.extend(pi.as_slice().iter().map(|&x| x as u64));
        if self.right {
            v.push(0);
        }
        v
    }

    /// 1-based peaks of the framed sequence.
    fn peaks(self, pi: &Permutation) -> BTreeSet<usize> {
        interior_peaks(&self.values(pi))
            .into_iter()
            .map(|k| k + 1)
            .collect()
    }

    fn offset(self) -> usize {
        self.left as usize
    }
}

/// Checks that the framed peak at `peak` of `from` moves to `peak-1` in `to`.
fn check_peak_move(
    from: &Permutation,
    to: &Permutation,
    framing: Framing,
    peak: usize,
) -> Result<()> {
    let pf = framing.peaks(from);
    if peak < 3 || !pf.contains(&peak) || pf.contains(&(peak - 2)) {
        return Err(invalid(format!(
            "framed peak {peak} of {from} cannot move left (needs peak >= 3, peak-2 not a peak)"
        )));
    }
    let want = moved(&pf.iter().copied().collect::<Vec<_>>(), peak, peak - 1);
    if framing.peaks(to) != want {
        return Err(invalid(format!(
            "{to} does not have the moved peak profile {want:?}"
        )));
    }
    Ok(())
}

/// Applies the framed peak involution and relabels onto `pi_new`.
fn framed_peak_move(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    pi_new: &Permutation,
    framing: Framing,
    peak: usize,
) -> Result<Permutation> {
    if pi.len() != pi_new.len() {
        return Err(invalid("peak moves need operands of equal length"));
    }
    let word = word_of(tau, pi, sigma)?;
    let mut framed = Vec::with_capacity(word.len() + 2);
    if framing.left {
        framed.push(Letter::A);
    }
    framed.extend_from_slice(word.letters());
    if framing.right {
        framed.push(Letter::A);
    }
    let out = peak_move_word(&framed, peak);
    let inner = &out[framing.left as usize..out.len() - framing.right as usize];
    from_word(pi_new, sigma, &ShuffleWord(inner.to_vec()))
}

/// Pk-preserving bijection `π⧢σ → π''⧢σ` moving the peak of `π` at `j` to `j-1`.
pub fn theta_pk(
    tau: &Permutation,
    pi: &Permutation,
    pi_new: &Permutation,
    sigma: &Permutation,
    j: usize,
) -> Result<Permutation> {
    check_normalized(pi, sigma)?;
    check_normalized(pi_new, sigma)?;
    check_peak_move(pi, pi_new, Framing::NONE, j)?;
    framed_peak_move(tau, pi, sigma, pi_new, Framing::NONE, j)
}

/// Lpk-preserving move of a left peak from `j` to `j-1`, where `j` is read off
/// from `Lpk(π) ∖ Lpk(π_new)`. For `j = 2` the shuffle is framed as `0τ`.
pub fn theta_lpk(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    pi_new: &Permutation,
) -> Result<Permutation> {
    check_normalized(pi, sigma)?;
    check_normalized(pi_new, sigma)?;
    let before = as_set(stats::lpk_set(pi));
    let after = as_set(stats::lpk_set(pi_new));
    let j = match before.difference(&after).collect::<Vec<_>>().as_slice() {
        [&j] => j,
        _ => {
            return Err(invalid(format!(
                "{pi} -> {pi_new} is not a single left peak move"
            )))
        }
    };
    if j >= 3 {
        return theta_pk(tau, pi, pi_new, sigma, j);
    }
    if j != 2 {
        return Err(invalid(
            "a left peak at position 1 cannot move further left",
        ));
    }
    // prepend the sentinel, move the peak at 3 to 2, strip the sentinel
    let zero_pi = prepend_zero(pi)?;
    let zero_new = prepend_zero(pi_new)?;
    let zero_tau = prepend_zero(tau)?;
    check_peak_move(&zero_pi, &zero_new, Framing::NONE, 3)?;
    let image = framed_peak_move(&zero_tau, &zero_pi, sigma, &zero_new, Framing::NONE, 3)?;
    match image.as_slice().split_first() {
        Some((0, rest)) => Ok(Permutation::from_vec_unchecked(rest.to_vec())),
        _ => Err(invalid("sentinel did not stay in front")),
    }
}

fn prepend_zero(p: &Permutation) -> Result<Permutation> {
    let mut v = vec![0];
    v.extend_from_slice(p.as_slice());
    Permutation::new_internal(v)
}

/// Rpk-preserving move of a right peak from `j` to `j+1`: the inverse of the
/// peak move `π'' → π` on the framing `τ0`.
pub fn theta_rpk_inverse(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    pi_new: &Permutation,
) -> Result<Permutation> {
    check_normalized(pi, sigma)?;
    check_normalized(pi_new, sigma)?;
    let before = as_set(stats::rpk_set(pi));
    let after = as_set(stats::rpk_set(pi_new));
    let j = match before.difference(&after).collect::<Vec<_>>().as_slice() {
        [&j] => j,
        _ => {
            return Err(invalid(format!(
                "{pi} -> {pi_new} is not a single right peak move"
            )))
        }
    };
    let peak = j + 1 + Framing::RIGHT.offset();
    check_peak_move(pi_new, pi, Framing::RIGHT, peak)?;
    framed_peak_move(tau, pi, sigma, pi_new, Framing::RIGHT, peak)
}

/// Epk-preserving move of an exterior peak from `j` to `j-1` on the framing `0τ0`.
pub fn theta_epk(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    pi_new: &Permutation,
) -> Result<Permutation> {
    check_normalized(pi, sigma)?;
    check_normalized(pi_new, sigma)?;
    let before = as_set(stats::epk_set(pi));
    let after = as_set(stats::epk_set(pi_new));
    let j = match before.difference(&after).collect::<Vec<_>>().as_slice() {
        [&j] => j,
        _ => {
            return Err(invalid(format!(
                "{pi} -> {pi_new} is not a single exterior peak move"
            )))
        }
    };
    let peak = j + Framing::BOTH.offset();
    check_peak_move(pi, pi_new, Framing::BOTH, peak)?;
    framed_peak_move(tau, pi, sigma, pi_new, Framing::BOTH, peak)
}

/// Which operand a pipeline rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    PiSide,
    SigmaSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pipeline {
    Des,
    MajDes,
    Maj,
    Pk,
    Lpk,
    Rpk,
    Epk,
    Udr,
    UdrPk,
}

impl Pipeline {
    fn of(stat: &Statistic) -> Option<Pipeline> {
        use Statistic as S;
        Some(match stat {
            S::Des => Pipeline::Des,
            S::Maj => Pipeline::Maj,
            S::Pk => Pipeline::Pk,
            S::Lpk => Pipeline::Lpk,
            S::Rpk => Pipeline::Rpk,
            S::Epk => Pipeline::Epk,
            S::Udr => Pipeline::Udr,
            S::Tuple(parts) => match parts.as_slice() {
                [S::Maj, S::Des] => Pipeline::MajDes,
                [S::Udr, S::Pk] => Pipeline::UdrPk,
                _ => return None,
            },
            _ => return None,
        })
    }

    fn side(self) -> Side {
        match self {
            Pipeline::Des | Pipeline::MajDes | Pipeline::Maj => Side::SigmaSide,
            _ => Side::PiSide,
        }
    }

    fn measure(self, p: &Permutation) -> i64 {
        let sum = |v: Vec<usize>| v.iter().map(|&k| k as i64).sum::<i64>();
        match self {
            Pipeline::Des | Pipeline::MajDes | Pipeline::Maj => stats::maj(p),
            Pipeline::Pk => sum(stats::pk_set(p)),
            Pipeline::Lpk | Pipeline::Udr | Pipeline::UdrPk => sum(stats::lpk_set(p)),
            Pipeline::Rpk => stats::rpk_set(p)
                .iter()
                .map(|&k| (p.len() - k) as i64)
                .sum(),
            Pipeline::Epk => sum(stats::epk_set(p)),
        }
    }
}

/// Statistics that [`canonicalize`] supports, with the operand each reduces.
pub fn supported_statistics() -> Vec<(Statistic, Side)> {
    [
        "des",
        "(maj,des)",
        "maj",
        "pk",
        "lpk",
        "rpk",
        "epk",
        "udr",
        "(udr,pk)",
    ]
    .iter()
    .map(|s| {
        let st: Statistic = s.parse().expect("known statistic");
        let side = Pipeline::of(&st).expect("supported").side();
        (st, side)
    })
    .collect()
}

/// Descent-set pipelines on `σ`: the next step, if any.
fn next_sigma_step(
    pipeline: Pipeline,
    sigma: &Permutation,
) -> Result<Option<(StepKind, Permutation)>> {
    let des = stats::des_set(sigma);
    let ground = sigma.domain();
    let first_peak = des
        .iter()
        .copied()
        .find(|&i| i >= 2 && !des.contains(&(i - 1)));
    match pipeline {
        Pipeline::Maj if des.first() == Some(&1) => {
            let target: BTreeSet<usize> = des.iter().copied().filter(|&k| k != 1).collect();
            Ok(Some((
                StepKind::ThetaMajFirst,
                perm_with_descent_set(&ground, &target)?,
            )))
        }
        Pipeline::Maj => match des.first() {
            Some(&i) => Ok(Some((
                StepKind::ThetaDes { i },
                perm_with_descent_set(&ground, &moved(&des, i, i - 1))?,
            ))),
            None => Ok(None),
        },
        _ => match first_peak {
            Some(i) => Ok(Some((
                StepKind::ThetaDes { i },
                perm_with_descent_set(&ground, &moved(&des, i, i - 1))?,
            ))),
            None => Ok(None),
        },
    }
}

/// Peak target `Pk'` with no left peak at 1, ending in an ascent when possible.
fn plain_partner_for_peak_set(m: usize, peaks: &BTreeSet<usize>) -> Result<Permutation> {
    perm_with_left_peak_profile(m, peaks, 1).or_else(|_| perm_with_left_peak_profile(m, peaks, 0))
}

/// Peak target `Pk'` realized with the same χ⁺ and, when possible, the same χ⁻.
fn partner_for_peak_set(pi: &Permutation, peaks: &BTreeSet<usize>) -> Result<Permutation> {
    let mut left = peaks.clone();
    if stats::chi_minus(pi) == 1 && !peaks.contains(&2) {
        left.insert(1);
    }
    perm_with_left_peak_profile(pi.len(), &left, stats::chi_plus(pi) as u8)
}

fn partner_for_right_peaks(pi: &Permutation, right: &BTreeSet<usize>) -> Result<Permutation> {
    let m = pi.len();
    let mirrored: BTreeSet<usize> = right.iter().map(|&k| m + 1 - k).collect();
    Ok(perm_with_left_peak_profile(m, &mirrored, stats::chi_minus(pi) as u8)?.reversed())
}

fn partner_for_exterior_peaks(pi: &Permutation, ext: &BTreeSet<usize>) -> Result<Permutation> {
    let m = pi.len();
    let left: BTreeSet<usize> = ext.iter().copied().filter(|&k| k != m).collect();
    perm_with_left_peak_profile(m, &left, ext.contains(&m) as u8)
}

/// Peak pipelines on `π`: the next step, if any.
fn next_pi_step(pipeline: Pipeline, pi: &Permutation) -> Result<Option<(StepKind, Permutation)>> {
    let m = pi.len();
    match pipeline {
        Pipeline::Pk | Pipeline::UdrPk => {
            let pk = stats::pk_set(pi);
            let blocked =
                |j: usize| pipeline == Pipeline::UdrPk && j == 3 && stats::chi_minus(pi) == 1;
            let Some(j) = pk
                .iter()
                .copied()
                .find(|&j| j >= 3 && !pk.contains(&(j - 2)) && !blocked(j))
            else {
                return Ok(None);
            };
            let target = moved(&pk, j, j - 1);
            let partner = match pipeline {
                Pipeline::Pk => plain_partner_for_peak_set(m, &target)?,
                _ => partner_for_peak_set(pi, &target)?,
            };
            Ok(Some((StepKind::ThetaPk { j }, partner)))
        }
        Pipeline::Lpk | Pipeline::Udr => {
            let lpk = stats::lpk_set(pi);
            let Some(j) = lpk
                .iter()
                .copied()
                .find(|&j| j >= 2 && (j == 2 || !lpk.contains(&(j - 2))))
            else {
                return Ok(None);
            };
            let partner =
                perm_with_left_peak_profile(m, &moved(&lpk, j, j - 1), stats::chi_plus(pi) as u8)?;
            let kind = if j >= 3 {
                StepKind::ThetaPk { j }
            } else {
                StepKind::ThetaLpk { j }
            };
            Ok(Some((kind, partner)))
        }
        Pipeline::Rpk => {
            let rpk = stats::rpk_set(pi);
            let Some(j) = rpk
                .iter()
                .rev()
                .copied()
                .find(|&j| j < m && !rpk.contains(&(j + 2)))
            else {
                return Ok(None);
            };
            Ok(Some((
                StepKind::ThetaRpkInverse { j },
                partner_for_right_peaks(pi, &moved(&rpk, j, j + 1))?,
            )))
        }
        Pipeline::Epk => {
            let epk = stats::epk_set(pi);
            let Some(j) = epk
                .iter()
                .copied()
                .find(|&j| j >= 2 && (j == 2 || !epk.contains(&(j - 2))))
            else {
                return Ok(None);
            };
            Ok(Some((
                StepKind::ThetaEpk { j },
                partner_for_exterior_peaks(pi, &moved(&epk, j, j - 1))?,
            )))
        }
        _ => unreachable!("sigma-side pipeline"),
    }
}

/// Reduces the operand on `side` to its canonical representative through
/// statistic-preserving bijections, always taking the leftmost available move
/// (rightmost for rpk).
///
/// The des-family pipelines lower maj by one per step (so a trace of length
/// `L` lowers maj of every shuffle by exactly `L`) and preserve des.
pub fn canonicalize(
    stat: &Statistic,
    side: Side,
    pi: &Permutation,
    sigma: &Permutation,
) -> Result<(Permutation, ReductionTrace)> {
    let pipeline =
        Pipeline::of(stat).ok_or_else(|| invalid(format!("no reduction pipeline for {stat}")))?;
    if pipeline.side() != side {
        return Err(invalid(format!(
            "{stat} reduces on the {:?}, not the {side:?}",
            pipeline.side()
        )));
    }
    pi.ensure_disjoint(sigma)?;
    check_normalized(pi, sigma)?;

    let mut trace = ReductionTrace::new(stat.clone(), pi.clone(), sigma.clone());
    let mut current = match side {
        Side::PiSide => pi.clone(),
        Side::SigmaSide => sigma.clone(),
    };
    trace.initial_measure = pipeline.measure(&current);
    loop {
        let next = match side {
            Side::PiSide => next_pi_step(pipeline, &current)?,
            Side::SigmaSide => next_sigma_step(pipeline, &current)?,
        };
        let Some((kind, partner)) = next else { break };
        let step = match side {
            Side::PiSide => ReductionStep::new(
                kind,
                (current.clone(), sigma.clone()),
                (partner.clone(), sigma.clone()),
            ),
            Side::SigmaSide => ReductionStep::new(
                kind,
                (pi.clone(), current.clone()),
                (pi.clone(), partner.clone()),
            ),
        };
        let measure = pipeline.measure(&partner);
        let previous = trace
            .steps()
            .last()
            .map_or(trace.initial_measure, |s| s.measure_after);
        if measure >= previous {
            return Err(Error::InvalidArgument(format!(
                "{kind} did not lower the measure ({previous} -> {measure})"
            )));
        }
        trace.push(step, measure);
        current = partner;
    }
    Ok((current, trace))
}

/// A full reduction of an arbitrary disjoint pair: normalization onto
/// `([m], [n]+m)` followed by the canonicalization pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub normalization: ReductionTrace,
    pub canonical: Permutation,
    pub pipeline: ReductionTrace,
}

impl Reduction {
    pub fn apply(&self, tau: &Permutation) -> Result<Permutation> {
        let t = self.normalization.apply(tau)?;
        self.pipeline.apply(&t)
    }

    pub fn target(&self) -> &Pair {
        self.pipeline.target()
    }
}

pub fn reduce_pair(stat: &Statistic, pi: &Permutation, sigma: &Permutation) -> Result<Reduction> {
    let pipeline =
        Pipeline::of(stat).ok_or_else(|| invalid(format!("no reduction pipeline for {stat}")))?;
    let (np, ns, normalization) = crate::shuffle::normalize_pair(pi, sigma, NormalMode::PiLow)?;
    let (canonical, trace) = canonicalize(stat, pipeline.side(), &np, &ns)?;
    Ok(Reduction {
        normalization,
        canonical,
        pipeline: trace,
    })
}

/// True when `p` is in the canonical set of the pipeline for `stat`.
pub fn is_canonical(stat: &Statistic, p: &Permutation) -> Result<bool> {
    let pipeline =
        Pipeline::of(stat).ok_or_else(|| invalid(format!("no reduction pipeline for {stat}")))?;
    let m = p.len();
    let packed_from =
        |set: &[usize], start: usize| set.iter().enumerate().all(|(k, &v)| v == start + 2 * k);
    Ok(match pipeline {
        Pipeline::Des | Pipeline::MajDes => {
            let d = stats::des_set(p);
            d.iter().enumerate().all(|(k, &v)| v == k + 1)
        }
        Pipeline::Maj => stats::des_set(p).is_empty(),
        Pipeline::Pk => packed_from(&stats::pk_set(p), 2),
        Pipeline::Lpk | Pipeline::Udr => packed_from(&stats::lpk_set(p), 1),
        Pipeline::Epk => packed_from(&stats::epk_set(p), 1),
        Pipeline::Rpk => {
            let r: Vec<usize> = stats::rpk_set(p).into_iter().rev().collect();
            r.iter().enumerate().all(|(k, &v)| v + 2 * k == m)
        }
        Pipeline::UdrPk => {
            let l = stats::lpk_set(p);
            packed_from(&l, 2) || (!l.is_empty() && packed_from(&l, 1))
        }
    })
}
