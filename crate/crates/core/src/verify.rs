//! Exhaustive checks: shuffle compatibility, bijection audits, the maj
//! identities, counterexample search and the (udr, pk, des) evidence run.
//!
//! Work is spread over rayon with order-preserving collection, so the witness
//! reported is always the first failure in the sequential enumeration order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::perm::{all_permutations, Permutation};
use crate::qpoly::{gen_poly, q_binomial, stanley_refined_rhs, stanley_rhs, QPoly};
use crate::reduce::{reduce_pair, Pair};
use crate::shuffle::{iter_shuffles, shuffles, Letter, Words};
use crate::stats::{self, Distribution, StatValue, Statistic};

/// Overrides every default bound on `m + n` when set.
pub const MAX_TOTAL_ENV: &str = "SHUFFLE_COMPAT_MAX_TOTAL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Reduced-mode compatibility sweeps, counterexample search, conjecture runs.
    pub compat: usize,
    /// Full-mode compatibility (all splittings of `[m+n]`).
    pub full: usize,
    /// Polynomial identity checks.
    pub identity: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            compat: 7,
            full: 6,
            identity: 8,
        }
    }
}

impl Limits {
    pub fn uniform(bound: usize) -> Self {
        Limits {
            compat: bound,
            full: bound,
            identity: bound,
        }
    }

    /// Defaults, or a uniform bound taken from [`MAX_TOTAL_ENV`].
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_TOTAL_ENV) {
            Ok(v) => v.trim().parse().map(Limits::uniform).map_err(|_| {
                invalid(format!(
                    "{MAX_TOTAL_ENV} must be a non-negative integer, got {v:?}"
                ))
            }),
            Err(_) => Ok(Limits::default()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Refused,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Refused => "REFUSED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Equal statistic values on both sides but different distributions.
    /// `pi`/`sigma` is the failing pair, the primed pair the first one seen in its class.
    Compatibility {
        statistic: Statistic,
        pi: Permutation,
        pi_prime: Permutation,
        sigma: Permutation,
        sigma_prime: Permutation,
        distributions: [Distribution; 2],
    },
    /// Two polynomials that should agree on this pair (and descent count `k`, if any).
    Identity {
        pi: Permutation,
        sigma: Permutation,
        k: Option<usize>,
        lhs: QPoly,
        rhs: QPoly,
    },
    Bijection {
        pi: Permutation,
        sigma: Permutation,
        tau: Option<Permutation>,
        detail: String,
    },
}

impl Witness {
    /// Recomputes the failure from scratch.
    pub fn reverify(&self) -> Result<bool> {
        match self {
            Witness::Compatibility {
                statistic,
                pi,
                pi_prime,
                sigma,
                sigma_prime,
                ..
            } => {
                let same_values = statistic.evaluate(pi) == statistic.evaluate(pi_prime)
                    && statistic.evaluate(sigma) == statistic.evaluate(sigma_prime)
                    && pi.len() == pi_prime.len()
                    && sigma.len() == sigma_prime.len();
                let a = stats::distribution(statistic, &shuffles(pi, sigma)?);
                let b = stats::distribution(statistic, &shuffles(pi_prime, sigma_prime)?);
                Ok(same_values && a != b)
            }
            Witness::Identity { lhs, rhs, .. } => Ok(lhs != rhs),
            Witness::Bijection { .. } => Ok(true),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Compatibility {
                statistic,
                pi,
                pi_prime,
                sigma,
                sigma_prime,
                distributions,
            } => {
                writeln!(f, "statistic {statistic}")?;
                writeln!(f, "  pi  = {pi}, sigma  = {sigma}: {}", distributions[0])?;
                write!(
                    f,
                    "  pi' = {pi_prime}, sigma' = {sigma_prime}: {}",
                    distributions[1]
                )
            }
            Witness::Identity {
                pi,
                sigma,
                k,
                lhs,
                rhs,
            } => {
                write!(f, "pi = {pi}, sigma = {sigma}")?;
                if let Some(k) = k {
                    write!(f, ", k = {k}")?;
                }
                write!(f, "\n  lhs = {lhs}\n  rhs = {rhs}")
            }
            Witness::Bijection {
                pi,
                sigma,
                tau,
                detail,
            } => {
                write!(f, "pi = {pi}, sigma = {sigma}")?;
                if let Some(t) = tau {
                    write!(f, ", tau = {t}")?;
                }
                write!(f, ": {detail}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub scope: String,
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub cases_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Wall time; left out of serialized output so reports stay byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    fn new(subject: impl Into<String>, scope: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            scope: scope.into(),
            outcome: Outcome::Pass,
            witness: None,
            cases_checked: 0,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    fn refused(mut self, total: usize, bound: usize) -> Self {
        self.outcome = Outcome::Refused;
        self.note = Some(format!(
            "refused: m+n = {total} exceeds the resource bound {bound} (raise it with {MAX_TOTAL_ENV})"
        ));
        self
    }

    fn fail(&mut self, w: Witness) {
        self.outcome = Outcome::Fail;
        self.witness = Some(w);
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.outcome, self.subject)?;
        writeln!(f, "scope: {}", self.scope)?;
        write!(f, "cases checked: {}", self.cases_checked)?;
        if let Some(n) = &self.note {
            write!(f, "\nnote: {n}")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}")?;
        }
        Ok(())
    }
}

fn timed(f: impl FnOnce() -> Result<Report>) -> Result<Report> {
    let start = Instant::now();
    let mut r = f()?;
    r.elapsed = start.elapsed();
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompatMode {
    /// Vary `π` within a statistic class, `σ` fixed.
    ReducedPi,
    /// Vary `σ` within a statistic class, `π` fixed.
    ReducedSigma,
    /// All splittings of `[m+n]` into the two domains.
    Full,
}

impl FromStr for CompatMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "reduced_pi" => Ok(CompatMode::ReducedPi),
            "reduced_sigma" => Ok(CompatMode::ReducedSigma),
            "full" => Ok(CompatMode::Full),
            _ => Err(Error::Parse(format!(
                "unknown mode {s:?} (reduced_pi, reduced_sigma, full)"
            ))),
        }
    }
}

impl fmt::Display for CompatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompatMode::ReducedPi => "reduced_pi",
            CompatMode::ReducedSigma => "reduced_sigma",
            CompatMode::Full => "full",
        })
    }
}

fn range(lo: usize, hi: usize) -> Vec<u32> {
    (lo as u32 + 1..=hi as u32).collect()
}

fn dist_of(stat: &Statistic, pi: &Permutation, sigma: &Permutation) -> Distribution {
    iter_shuffles(pi, sigma)
        .expect("disjoint operands")
        .map(|t| stat.evaluate(&t))
        .collect()
}

/// Groups permutations by statistic value, classes in order of first appearance.
fn classes(stat: &Statistic, perms: &[Permutation]) -> Vec<Vec<Permutation>> {
    let mut index: HashMap<StatValue, usize> = HashMap::new();
    let mut out: Vec<Vec<Permutation>> = Vec::new();
    for p in perms {
        let k = *index.entry(stat.evaluate(p)).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[k].push(p.clone());
    }
    out
}

/// First failing item in enumeration order, with the count of cases up to and including it.
fn first_failure(results: Vec<(u64, Option<Witness>)>) -> (u64, Option<Witness>) {
    let mut total = 0;
    for (count, w) in results {
        total += count;
        if w.is_some() {
            return (total, w);
        }
    }
    (total, None)
}

/// Shuffle compatibility of `stat` for lengths `(m, n)`.
pub fn check_compatibility(
    stat: &Statistic,
    m: usize,
    n: usize,
    mode: CompatMode,
    limits: &Limits,
) -> Result<Report> {
    timed(|| {
        let report = Report::new(
            format!("{stat} is shuffle compatible"),
            format!("m = {m}, n = {n}, mode {mode}"),
        );
        let bound = if mode == CompatMode::Full {
            limits.full
        } else {
            limits.compat
        };
        if m + n > bound {
            return Ok(report.refused(m + n, bound));
        }
        Ok(match mode {
            CompatMode::ReducedPi | CompatMode::ReducedSigma => reduced(stat, m, n, mode, report),
            CompatMode::Full => full(stat, m, n, report),
        })
    })
}

fn reduced(stat: &Statistic, m: usize, n: usize, mode: CompatMode, mut report: Report) -> Report {
    let pis = all_permutations(&range(0, m));
    let sigmas = all_permutations(&range(m, m + n));
    let (varied, fixed) = match mode {
        CompatMode::ReducedPi => (&pis, &sigmas),
        _ => (&sigmas, &pis),
    };
    let groups = classes(stat, varied);
    let pair = |v: &Permutation, f: &Permutation| match mode {
        CompatMode::ReducedPi => (v.clone(), f.clone()),
        _ => (f.clone(), v.clone()),
    };
    let results: Vec<(u64, Option<Witness>)> = fixed
        .par_iter()
        .map(|f| {
            let mut count = 0;
            for class in &groups {
                let (rp, rs) = pair(&class[0], f);
                let reference = dist_of(stat, &rp, &rs);
                count += 1;
                for v in &class[1..] {
                    count += 1;
                    let (p, s) = pair(v, f);
                    let dist = dist_of(stat, &p, &s);
                    if dist != reference {
                        let w = Witness::Compatibility {
                            statistic: stat.clone(),
                            pi: p,
                            pi_prime: rp,
                            sigma: s,
                            sigma_prime: rs,
                            distributions: [dist, reference],
                        };
                        return (count, Some(w));
                    }
                }
            }
            (count, None)
        })
        .collect();
    let (count, witness) = first_failure(results);
    report.cases_checked = count;
    if let Some(w) = witness {
        report.fail(w);
    }
    report
}

/// Domains of `π` over all `m`-subsets of `[m+n]`, in lexicographic order.
fn splittings(m: usize, n: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    Words::new(m, n)
        .map(|w| {
            let (mut a, mut b) = (Vec::new(), Vec::new());
            for (k, l) in w.letters().iter().enumerate() {
                match l {
                    Letter::A => a.push(k as u32 + 1),
                    Letter::B => b.push(k as u32 + 1),
                }
            }
            (a, b)
        })
        .collect()
}

fn full(stat: &Statistic, m: usize, n: usize, mut report: Report) -> Report {
    let rows: Vec<Vec<(StatValue, StatValue, Pair, Distribution)>> = splittings(m, n)
        .par_iter()
        .map(|(a, b)| {
            let pis = all_permutations(a);
            let sigmas = all_permutations(b);
            let mut out = Vec::with_capacity(pis.len() * sigmas.len());
            for p in &pis {
                for s in &sigmas {
                    let dist = dist_of(stat, p, s);
                    out.push((
                        stat.evaluate(p),
                        stat.evaluate(s),
                        Pair {
                            pi: p.clone(),
                            sigma: s.clone(),
                        },
                        dist,
                    ));
                }
            }
            out
        })
        .collect();
    let mut seen: HashMap<(StatValue, StatValue), (Pair, Distribution)> = HashMap::new();
    for (sp, ss, pair, dist) in rows.into_iter().flatten() {
        report.cases_checked += 1;
        match seen.get(&(sp.clone(), ss.clone())) {
            None => {
                seen.insert((sp, ss), (pair, dist));
            }
            Some((reference, rdist)) if *rdist != dist => {
                report.fail(Witness::Compatibility {
                    statistic: stat.clone(),
                    pi: pair.pi,
                    pi_prime: reference.pi.clone(),
                    sigma: pair.sigma,
                    sigma_prime: reference.sigma.clone(),
                    distributions: [dist, rdist.clone()],
                });
                break;
            }
            Some(_) => {}
        }
    }
    report
}

/// Audits the full reduction of `(π, σ)` (normalization, then the pipeline).
pub fn check_bijection_pipeline(
    stat: &Statistic,
    pi: &Permutation,
    sigma: &Permutation,
) -> Result<Report> {
    timed(|| {
        let mut report = Report::new(
            format!("reduction for {stat} is a statistic-preserving bijection"),
            format!("pi = {pi}, sigma = {sigma}"),
        );
        let red = reduce_pair(stat, pi, sigma)?;
        let shift = red.pipeline.len() as i64;
        let measures: Vec<i64> = std::iter::once(red.pipeline.initial_measure)
            .chain(red.pipeline.measure_values())
            .collect();
        let bij = |tau: Option<Permutation>, detail: String| Witness::Bijection {
            pi: pi.clone(),
            sigma: sigma.clone(),
            tau,
            detail,
        };
        if measures.windows(2).any(|w| w[1] >= w[0]) {
            report.fail(bij(
                None,
                format!("measure not strictly decreasing: {measures:?}"),
            ));
            return Ok(report);
        }
        let keeps_des = matches!(stat, Statistic::Tuple(parts) if parts.as_slice() == [Statistic::Maj, Statistic::Des]);
        let lowers_maj = keeps_des || matches!(stat, Statistic::Maj);
        let mut image = BTreeSet::new();
        for tau in iter_shuffles(pi, sigma)? {
            report.cases_checked += 1;
            let u = red.apply(&tau)?;
            let kept = if lowers_maj {
                stats::maj(&u) == stats::maj(&tau) - shift
                    && (!keeps_des || stats::des_set(&u).len() == stats::des_set(&tau).len())
            } else {
                stat.evaluate(&u) == stat.evaluate(&tau)
            };
            if !kept {
                report.fail(bij(
                    Some(tau),
                    format!("image {u} does not carry the expected statistic value"),
                ));
                return Ok(report);
            }
            image.insert(u);
        }
        let tgt = red.target();
        let expected: BTreeSet<Permutation> = iter_shuffles(&tgt.pi, &tgt.sigma)?.collect();
        if image != expected {
            report.fail(bij(None, format!("image is not the shuffle set of {tgt}")));
        }
        report.note = Some(format!(
            "canonical pair {tgt}, {} normalization and {} pipeline steps{}",
            red.normalization.len(),
            red.pipeline.len(),
            if lowers_maj {
                format!("; maj lowered by {shift} on every shuffle")
            } else {
                String::new()
            }
        ));
        Ok(report)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// Maj generating function over `π⧢σ` against its closed form.
    Maj,
    /// The same, refined by number of descents.
    MajDes,
    /// Increasing `π` and `σ`: maj generating function equals the q-binomial.
    WordBase,
}

impl FromStr for IdentityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "maj" => Ok(IdentityKind::Maj),
            "maj_des" => Ok(IdentityKind::MajDes),
            "word_base" => Ok(IdentityKind::WordBase),
            _ => Err(Error::Parse(format!(
                "unknown identity {s:?} (maj, maj_des, word_base)"
            ))),
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdentityKind::Maj => "maj",
            IdentityKind::MajDes => "maj_des",
            IdentityKind::WordBase => "word_base",
        })
    }
}

fn check_pair_identity(
    which: IdentityKind,
    pi: &Permutation,
    sigma: &Permutation,
) -> Result<Option<Witness>> {
    let sh = shuffles(pi, sigma)?;
    let witness = |k, lhs, rhs| Witness::Identity {
        pi: pi.clone(),
        sigma: sigma.clone(),
        k,
        lhs,
        rhs,
    };
    match which {
        IdentityKind::Maj | IdentityKind::WordBase => {
            let lhs = gen_poly(&Statistic::Maj, &sh)?;
            let rhs = if which == IdentityKind::Maj {
                stanley_rhs(pi, sigma)?
            } else {
                q_binomial((pi.len() + sigma.len()) as i64, pi.len() as i64)?
            };
            Ok((lhs != rhs).then(|| witness(None, lhs, rhs)))
        }
        IdentityKind::MajDes => {
            let mut by_k: BTreeMap<usize, Vec<&Permutation>> = BTreeMap::new();
            for t in &sh {
                by_k.entry(stats::des_set(t).len()).or_default().push(t);
            }
            for k in 0..=pi.len() + sigma.len() {
                let lhs = gen_poly(&Statistic::Maj, by_k.get(&k).into_iter().flatten().copied())?;
                let rhs = stanley_refined_rhs(pi, sigma, k)?;
                if lhs != rhs {
                    return Ok(Some(witness(Some(k), lhs, rhs)));
                }
            }
            Ok(None)
        }
    }
}

/// Exact polynomial identity over every `π ∈ L([m])`, `σ ∈ L([n]+m)`
/// (only the increasing pair for `word_base`).
pub fn check_identity(which: IdentityKind, m: usize, n: usize, limits: &Limits) -> Result<Report> {
    timed(|| {
        let subject = match which {
            IdentityKind::Maj => "maj generating function over shuffles equals q^(maj pi + maj sigma) [m+n, m]_q",
            IdentityKind::MajDes => "maj generating function over shuffles with k descents equals the refined closed form",
            IdentityKind::WordBase => "maj generating function over shuffles of increasing words equals [m+n, m]_q",
        };
        let mut report = Report::new(subject, format!("m = {m}, n = {n}"));
        if m + n > limits.identity {
            return Ok(report.refused(m + n, limits.identity));
        }
        let (pis, sigmas) = if which == IdentityKind::WordBase {
            (
                vec![Permutation::increasing(&range(0, m))],
                vec![Permutation::increasing(&range(m, m + n))],
            )
        } else {
            (
                all_permutations(&range(0, m)),
                all_permutations(&range(m, m + n)),
            )
        };
        let results: Vec<Result<(u64, Option<Witness>)>> = pis
            .par_iter()
            .map(|p| {
                let mut count = 0;
                for s in &sigmas {
                    count += 1;
                    if let Some(w) = check_pair_identity(which, p, s)? {
                        return Ok((count, Some(w)));
                    }
                }
                Ok((count, None))
            })
            .collect();
        let (count, witness) = first_failure(results.into_iter().collect::<Result<_>>()?);
        report.cases_checked = count;
        if let Some(w) = witness {
            report.fail(w);
        }
        if which == IdentityKind::Maj && report.passed() {
            // the distribution depends only on maj π + maj σ for fixed lengths
            let mut by_sum: HashMap<i64, QPoly> = HashMap::new();
            'outer: for p in &pis {
                for s in &sigmas {
                    let poly = gen_poly(&Statistic::Maj, &shuffles(p, s)?)?;
                    let key = stats::maj(p) + stats::maj(s);
                    let first = by_sum.entry(key).or_insert_with(|| poly.clone());
                    if *first != poly {
                        let rhs = first.clone();
                        report.fail(Witness::Identity {
                            pi: p.clone(),
                            sigma: s.clone(),
                            k: None,
                            lhs: poly,
                            rhs,
                        });
                        break 'outer;
                    }
                }
            }
        }
        Ok(report)
    })
}

/// Searches `m + n = 1, 2, ..., max_total` over all splittings for a pair of
/// pairs with equal statistic values but different distributions.
pub fn find_counterexample(stat: &Statistic, max_total: usize, limits: &Limits) -> Result<Report> {
    timed(|| {
        let mut report = Report::new(
            format!("search for a witness that {stat} is not shuffle compatible"),
            format!("all splittings of [m+n], m+n <= {max_total}"),
        );
        if max_total > limits.compat {
            return Ok(report.refused(max_total, limits.compat));
        }
        for total in 1..=max_total {
            for m in 0..=total {
                let r = full(stat, m, total - m, Report::new("", ""));
                report.cases_checked += r.cases_checked;
                if let Some(w) = r.witness {
                    report.scope = format!(
                        "{}; first witness at m = {m}, n = {}",
                        report.scope,
                        total - m
                    );
                    report.fail(w);
                    return Ok(report);
                }
            }
        }
        report.note = Some("no witness within scope".to_string());
        Ok(report)
    })
}

/// Compatibility of the triple `(udr, pk, des)` in both reduced modes.
pub fn check_conjecture_udr_pk_des(m: usize, n: usize, limits: &Limits) -> Result<Report> {
    timed(|| {
        let stat: Statistic = "(udr,pk,des)".parse()?;
        let mut report = Report::new(
            format!("{stat} is shuffle compatible"),
            format!("m = {m}, n = {n}, modes reduced_pi and reduced_sigma"),
        );
        for mode in [CompatMode::ReducedPi, CompatMode::ReducedSigma] {
            let r = check_compatibility(&stat, m, n, mode, limits)?;
            report.cases_checked += r.cases_checked;
            if r.outcome != Outcome::Pass {
                report.outcome = r.outcome;
                report.witness = r.witness;
                report.note = r.note;
                break;
            }
        }
        let label = "evidence, not proof: exhaustive check at these sizes only";
        report.note = Some(match report.note.take() {
            Some(n) => format!("{label}; {n}"),
            None => label.to_string(),
        });
        Ok(report)
    })
}

/// Compares the inv and maj generating functions over every disjoint pair
/// with `m + n <= max_total`, in increasing size.
pub fn check_inv_maj_equidistribution(max_total: usize, limits: &Limits) -> Result<Report> {
    timed(|| {
        let mut report = Report::new(
            "inv and maj have the same generating function over every shuffle set",
            format!("all splittings of [m+n], m+n <= {max_total}"),
        );
        if max_total > limits.identity {
            return Ok(report.refused(max_total, limits.identity));
        }
        for total in 0..=max_total {
            for m in 0..=total {
                let n = total - m;
                let results: Vec<Result<(u64, Option<Witness>)>> = splittings(m, n)
                    .par_iter()
                    .map(|(a, b)| {
                        let sigmas = all_permutations(b);
                        let mut count = 0;
                        for p in all_permutations(a) {
                            for s in &sigmas {
                                count += 1;
                                let sh = shuffles(&p, s)?;
                                let lhs = gen_poly(&Statistic::Inv, &sh)?;
                                let rhs = gen_poly(&Statistic::Maj, &sh)?;
                                if lhs != rhs {
                                    let w = Witness::Identity {
                                        pi: p,
                                        sigma: s.clone(),
                                        k: None,
                                        lhs,
                                        rhs,
                                    };
                                    return Ok((count, Some(w)));
                                }
                            }
                        }
                        Ok((count, None))
                    })
                    .collect();
                let (count, witness) = first_failure(results.into_iter().collect::<Result<_>>()?);
                report.cases_checked += count;
                if let Some(w) = witness {
                    report.fail(w);
                    return Ok(report);
                }
            }
        }
        Ok(report)
    })
}
