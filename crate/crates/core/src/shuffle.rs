//! Shuffle sets, their word encoding, and the elementary bijections between
//! shuffle sets that rewrite one of the two operands.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::perm::{next_arrangement, relabel_onto, Permutation};
use crate::reduce::{ReductionStep, ReductionTrace, StepKind};
use crate::stats::{self, Statistic};

/// `A` marks an entry of the first operand, `B` one of the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShuffleWord(pub Vec<Letter>);

impl ShuffleWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(#a, #b)`
    pub fn counts(&self) -> (usize, usize) {
        let a = self.0.iter().filter(|&&l| l == Letter::A).count();
        (a, self.0.len() - a)
    }
}

impl fmt::Display for ShuffleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

impl FromStr for ShuffleWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                other => Err(Error::Parse(format!(
                    "shuffle words use a and b, got {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ShuffleWord)
    }
}

impl Serialize for ShuffleWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ShuffleWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Words with `m` a's and `n` b's in lexicographic order (`a < b`), produced on demand.
pub struct Words {
    current: Vec<Letter>,
    done: bool,
}

impl Words {
    pub fn new(m: usize, n: usize) -> Self {
        let mut current = vec![Letter::A; m];
        current.extend(std::iter::repeat_n(Letter::B, n));
        Words {
            current,
            done: false,
        }
    }
}

impl Iterator for Words {
    type Item = ShuffleWord;

    fn next(&mut self) -> Option<ShuffleWord> {
        if self.done {
            return None;
        }
        let out = ShuffleWord(self.current.clone());
        self.done = !next_arrangement(&mut self.current);
        Some(out)
    }
}

/// Lazily enumerates `π ⧢ σ` in lexicographic order of shuffle words.
pub struct Shuffles<'a> {
    pi: &'a Permutation,
    sigma: &'a Permutation,
    words: Words,
}

impl Iterator for Shuffles<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.words
            .next()
            .map(|w| interleave(self.pi, self.sigma, w.letters()))
    }
}

pub fn iter_shuffles<'a>(pi: &'a Permutation, sigma: &'a Permutation) -> Result<Shuffles<'a>> {
    pi.ensure_disjoint(sigma)?;
    Ok(Shuffles {
        pi,
        sigma,
        words: Words::new(pi.len(), sigma.len()),
    })
}

pub fn shuffles(pi: &Permutation, sigma: &Permutation) -> Result<Vec<Permutation>> {
    Ok(iter_shuffles(pi, sigma)?.collect())
}

/// `π ⧢_k σ`: the shuffles with exactly `k` descents.
pub fn shuffles_with_k_descents(
    pi: &Permutation,
    sigma: &Permutation,
    k: usize,
) -> Result<Vec<Permutation>> {
    Ok(iter_shuffles(pi, sigma)?
        .filter(|t| stats::des_set(t).len() == k)
        .collect())
}

/// Counts must already match.
pub(crate) fn interleave(pi: &Permutation, sigma: &Permutation, word: &[Letter]) -> Permutation {
    let (mut a, mut b) = (pi.as_slice().iter(), sigma.as_slice().iter());
    let elems = word
        .iter()
        .map(|l| match l {
            Letter::A => *a.next().expect("letter count matches pi"),
            Letter::B => *b.next().expect("letter count matches sigma"),
        })
        .collect();
    Permutation::from_vec_unchecked(elems)
}

pub fn word_of(tau: &Permutation, pi: &Permutation, sigma: &Permutation) -> Result<ShuffleWord> {
    let not_shuffle =
        || Error::NotAShuffle(format!("{tau} is not a shuffle of ({pi}) and ({sigma})"));
    if tau.len() != pi.len() + sigma.len() {
        return Err(not_shuffle());
    }
    let (p, s) = (pi.as_slice(), sigma.as_slice());
    let (mut i, mut j) = (0, 0);
    let mut word = Vec::with_capacity(tau.len());
    for &v in tau.as_slice() {
        if i < p.len() && p[i] == v {
            word.push(Letter::A);
            i += 1;
        } else if j < s.len() && s[j] == v {
            word.push(Letter::B);
            j += 1;
        } else {
            return Err(not_shuffle());
        }
    }
    Ok(ShuffleWord(word))
}

pub fn from_word(pi: &Permutation, sigma: &Permutation, word: &ShuffleWord) -> Result<Permutation> {
    let (a, b) = word.counts();
    if a != pi.len() || b != sigma.len() {
        return Err(invalid(format!(
            "word {word} has {a} a's and {b} b's, operands have lengths {} and {}",
            pi.len(),
            sigma.len()
        )));
    }
    pi.ensure_disjoint(sigma)?;
    Ok(interleave(pi, sigma, word.letters()))
}

/// Replaces the entries of `pi` by those of `pi_new`, keeping the word.
pub fn phi(
    tau: &Permutation,
    pi: &Permutation,
    pi_new: &Permutation,
    sigma: &Permutation,
) -> Result<Permutation> {
    if pi.len() != pi_new.len() {
        return Err(invalid("phi needs operands of equal length"));
    }
    let w = word_of(tau, pi, sigma)?;
    from_word(pi_new, sigma, &w)
}

/// Replaces the entries of `sigma` by those of `sigma_new`, keeping the word.
pub fn phi_tilde(
    tau: &Permutation,
    pi: &Permutation,
    sigma: &Permutation,
    sigma_new: &Permutation,
) -> Result<Permutation> {
    if sigma.len() != sigma_new.len() {
        return Err(invalid("phi_tilde needs operands of equal length"));
    }
    let w = word_of(tau, pi, sigma)?;
    from_word(pi, sigma_new, &w)
}

/// Exchanges `i` and `i-1` unless they are adjacent.
pub fn t_swap(tau: &Permutation, i: u32) -> Result<Permutation> {
    if i == 0 {
        return Err(invalid("t_swap index must be at least 1"));
    }
    let (Some(p), Some(q)) = (tau.position_of(i), tau.position_of(i - 1)) else {
        return Err(invalid(format!(
            "{tau} must contain both {i} and {}",
            i - 1
        )));
    };
    if p.abs_diff(q) == 1 {
        return Ok(tau.clone());
    }
    let mut v = tau.as_slice().to_vec();
    v.swap(p, q);
    Ok(Permutation::from_vec_unchecked(v))
}

/// Which operand ends up holding the small values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalMode {
    /// `π` onto `[m]`, `σ` onto `[n]+m`.
    PiLow,
    /// `σ` onto `[n]`, `π` onto `[m]+n`.
    SigmaLow,
}

fn swap_values(p: &Permutation, a: u32, b: u32) -> Permutation {
    let v = p
        .as_slice()
        .iter()
        .map(|&x| {
            if x == a {
                b
            } else if x == b {
                a
            } else {
                x
            }
        })
        .collect();
    Permutation::from_vec_unchecked(v)
}

/// Number of pairs `(low-side value, high-side value)` that are out of order.
fn order_defect(low: &Permutation, high: &Permutation) -> i64 {
    let hi = high.as_slice();
    low.as_slice()
        .iter()
        .map(|&x| hi.iter().filter(|&&y| x > y).count() as i64)
        .sum()
}

/// Moves a pair onto `([m], [n]+m)` (or the mirror) through a Des-preserving
/// bijection of shuffle sets, recorded as a replayable trace.
pub fn normalize_pair(
    pi: &Permutation,
    sigma: &Permutation,
    mode: NormalMode,
) -> Result<(Permutation, Permutation, ReductionTrace)> {
    pi.ensure_disjoint(sigma)?;
    let mut trace = ReductionTrace::new(Statistic::DesSet, pi.clone(), sigma.clone());
    trace.initial_measure = defect(pi, sigma, mode);
    let (m, n) = (pi.len() as u32, sigma.len() as u32);

    let mut union: Vec<u32> = pi
        .as_slice()
        .iter()
        .chain(sigma.as_slice())
        .copied()
        .collect();
    union.sort_unstable();
    let (mut cur_pi, mut cur_sigma) = (pi.clone(), sigma.clone());
    if union.iter().enumerate().any(|(k, &v)| v != k as u32 + 1) {
        let tgt: Vec<u32> = (1..=m + n).collect();
        let pos = |v: u32| tgt[union.binary_search(&v).expect("in union")];
        let relabel = |p: &Permutation| {
            Permutation::from_vec_unchecked(p.as_slice().iter().map(|&v| pos(v)).collect())
        };
        let (np, ns) = (relabel(pi), relabel(sigma));
        let measure = defect(&np, &ns, mode);
        trace.push(
            ReductionStep::new(
                StepKind::Standardize,
                (cur_pi, cur_sigma),
                (np.clone(), ns.clone()),
            ),
            measure,
        );
        cur_pi = np;
        cur_sigma = ns;
    }

    loop {
        let (low, high) = match mode {
            NormalMode::PiLow => (&cur_pi, &cur_sigma),
            NormalMode::SigmaLow => (&cur_sigma, &cur_pi),
        };
        let Some(i) = (2..=m + n).find(|&i| low.contains(i) && high.contains(i - 1)) else {
            break;
        };
        let np = swap_values(&cur_pi, i, i - 1);
        let ns = swap_values(&cur_sigma, i, i - 1);
        let measure = defect(&np, &ns, mode);
        trace.push(
            ReductionStep::new(
                StepKind::TSwap { i },
                (cur_pi, cur_sigma),
                (np.clone(), ns.clone()),
            ),
            measure,
        );
        cur_pi = np;
        cur_sigma = ns;
    }
    debug_assert_eq!(defect(&cur_pi, &cur_sigma, mode), 0);
    Ok((cur_pi, cur_sigma, trace))
}

fn defect(pi: &Permutation, sigma: &Permutation, mode: NormalMode) -> i64 {
    match mode {
        NormalMode::PiLow => order_defect(pi, sigma),
        NormalMode::SigmaLow => order_defect(sigma, pi),
    }
}

/// Standardizes `(π, σ)` directly onto `([m], [n]+m)` or the mirror.
pub fn normalized_operands(
    pi: &Permutation,
    sigma: &Permutation,
    mode: NormalMode,
) -> (Permutation, Permutation) {
    let (m, n) = (pi.len() as u32, sigma.len() as u32);
    let (pi_off, sigma_off) = match mode {
        NormalMode::PiLow => (0, m),
        NormalMode::SigmaLow => (n, 0),
    };
    let pt: Vec<u32> = (pi_off + 1..=pi_off + m).collect();
    let st: Vec<u32> = (sigma_off + 1..=sigma_off + n).collect();
    (relabel_onto(pi, &pt), relabel_onto(sigma, &st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::stats::Statistic;
    use std::collections::BTreeSet;

    fn d(s: &str) -> Permutation {
        Permutation::new(s.chars().map(|c| c.to_digit(10).unwrap()).collect()).unwrap()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shuffle_set_of_132_and_76() {
        let got: Vec<String> = shuffles(&d("132"), &d("76"))
            .unwrap()
            .iter()
            .map(|t| t.as_slice().iter().map(|v| v.to_string()).collect())
            .collect();
        assert_eq!(
            got,
            [
                "13276", "13726", "13762", "17326", "17362", "17632", "71326", "71362", "71632",
                "76132"
            ]
        );
        assert_eq!(shuffles(&d("241"), &d("73")).unwrap().len(), 10);
        assert_eq!(
            shuffles(&d("35"), &Permutation::empty()).unwrap(),
            vec![d("35")]
        );
        assert!(matches!(
            shuffles(&d("12"), &d("23")),
            Err(Error::DomainOverlap(2))
        ));
    }

    #[test]
    fn shuffles_by_descent_count() {
        assert_eq!(
            shuffles_with_k_descents(&d("1"), &d("2"), 1).unwrap(),
            vec![d("21")]
        );
        // brute-force filter of the full set
        let all = shuffles(&d("12"), &d("34")).unwrap();
        let zero: Vec<_> = all
            .iter()
            .filter(|t| stats::des_set(t).is_empty())
            .cloned()
            .collect();
        assert_eq!(
            shuffles_with_k_descents(&d("12"), &d("34"), 0).unwrap(),
            zero
        );
        assert_eq!(zero, vec![d("1234")]);
        let total: usize = (0..4)
            .map(|k| {
                shuffles_with_k_descents(&d("12"), &d("34"), k)
                    .unwrap()
                    .len()
            })
            .sum();
        assert_eq!(total, all.len());
    }

    #[test]
    fn words() {
        let w = word_of(&d("1453829"), &d("132"), &d("4589")).unwrap();
        assert_eq!(w.to_string(), "abbabab");
        assert_eq!(from_word(&d("132"), &d("4589"), &w).unwrap(), d("1453829"));
        assert_eq!(
            word_of(&d("365"), &d("365"), &Permutation::empty())
                .unwrap()
                .to_string(),
            "aaa"
        );
        let w = word_of(&d("76132"), &d("132"), &d("76")).unwrap();
        assert_eq!(w.to_string(), "bbaaa");
        assert_eq!(from_word(&d("132"), &d("76"), &w).unwrap(), d("76132"));
        assert!(matches!(
            word_of(&d("12376"), &d("132"), &d("76")),
            Err(Error::NotAShuffle(_))
        ));
        assert!(from_word(&d("132"), &d("76"), &"aab".parse().unwrap()).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(
            phi(&d("1453829"), &d("132"), &d("361"), &d("4589")).unwrap(),
            d("3456819")
        );
        let tau = d("17362");
        assert_eq!(phi(&tau, &d("132"), &d("132"), &d("76")).unwrap(), tau);
        assert_eq!(phi_tilde(&tau, &d("132"), &d("76"), &d("76")).unwrap(), tau);
        assert_eq!(
            phi_tilde(&d("13276"), &d("132"), &d("76"), &d("98")).unwrap(),
            d("13298")
        );
        for t in shuffles(&d("241"), &d("73")).unwrap() {
            let img = phi(&t, &d("241"), &d("251"), &d("73")).unwrap();
            assert_eq!(
                word_of(&img, &d("251"), &d("73")).unwrap(),
                word_of(&t, &d("241"), &d("73")).unwrap()
            );
        }
        assert!(phi(&tau, &d("132"), &d("13"), &d("76")).is_err());
    }

    #[test]
    fn t_swap_examples() {
        assert_eq!(t_swap(&d("52413"), 4).unwrap(), d("52314"));
        assert_eq!(t_swap(&d("52341"), 4).unwrap(), d("52341"));
        assert_eq!(
            t_swap(&t_swap(&d("52413"), 4).unwrap(), 4).unwrap(),
            d("52413")
        );
        assert!(t_swap(&d("521"), 4).is_err());
    }

    #[test]
    fn normalize_worked_example() {
        let (p, s, trace) = normalize_pair(&d("241"), &d("73"), NormalMode::PiLow).unwrap();
        assert_eq!((p, s), (d("231"), d("54")));
        assert!(trace
            .steps()
            .iter()
            .any(|st| st.kind == StepKind::TSwap { i: 4 }));
        let (_, _, swaps) = normalize_pair(&d("241"), &d("53"), NormalMode::PiLow).unwrap();
        assert_eq!(swaps.apply(&d("52413")).unwrap(), d("52314"));
        let (p, s, empty) = normalize_pair(&d("213"), &d("54"), NormalMode::PiLow).unwrap();
        assert_eq!((p, s), (d("213"), d("54")));
        assert!(empty.steps().is_empty());
        let (p, s, _) = normalize_pair(&d("241"), &d("73"), NormalMode::SigmaLow).unwrap();
        assert_eq!((p, s), (d("453"), d("21")));
    }

    #[test]
    fn shuffle_counts_exhaustive() {
        for total in 0..=8usize {
            for m in 0..=total {
                let ground: Vec<u32> = (1..=total as u32).collect();
                // one representative splitting per (m, n): odd values first
                let mut lo: Vec<u32> = ground.iter().copied().filter(|v| v % 2 == 1).collect();
                lo.extend(ground.iter().copied().filter(|v| v % 2 == 0));
                let (a, b) = lo.split_at(m);
                let (pi, sigma) = (
                    Permutation::new(a.to_vec()).unwrap(),
                    Permutation::new(b.to_vec()).unwrap(),
                );
                let all = shuffles(&pi, &sigma).unwrap();
                assert_eq!(all.len(), binomial(total, m));
                let distinct: BTreeSet<_> = all.iter().collect();
                assert_eq!(distinct.len(), all.len());
                for t in &all {
                    let w = word_of(t, &pi, &sigma).unwrap();
                    assert_eq!(&from_word(&pi, &sigma, &w).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn phi_and_phi_tilde_are_bijections() {
        let sigma = d("54");
        for pi in all_permutations(&[1, 2, 3]) {
            for pi_new in all_permutations(&[1, 2, 3]) {
                let img: BTreeSet<_> = shuffles(&pi, &sigma)
                    .unwrap()
                    .iter()
                    .map(|t| phi(t, &pi, &pi_new, &sigma).unwrap())
                    .collect();
                assert_eq!(
                    img,
                    shuffles(&pi_new, &sigma).unwrap().into_iter().collect()
                );
            }
        }
        let pi = d("21");
        for s in all_permutations(&[3, 4, 5]) {
            for s_new in all_permutations(&[3, 4, 5]) {
                let img: BTreeSet<_> = shuffles(&pi, &s)
                    .unwrap()
                    .iter()
                    .map(|t| phi_tilde(t, &pi, &s, &s_new).unwrap())
                    .collect();
                assert_eq!(img.len(), 10);
            }
        }
    }

    #[test]
    fn phi_preserves_set_statistics_when_operands_agree() {
        let pi_side = [
            Statistic::DesSet,
            Statistic::PkSet,
            Statistic::LpkSet,
            Statistic::RpkSet,
            Statistic::EpkSet,
        ];
        let sigma_side = [
            Statistic::AscSet,
            Statistic::ValSet,
            Statistic::LvalSet,
            Statistic::RvalSet,
            Statistic::EvalSet,
        ];
        for (m, n) in [(3usize, 2usize), (4, 2), (3, 3), (2, 4)] {
            let low: Vec<u32> = (1..=m as u32).collect();
            let high: Vec<u32> = (m as u32 + 1..=(m + n) as u32).collect();
            let pis = all_permutations(&low);
            let sigmas = all_permutations(&high);
            for st in &pi_side {
                for pi in &pis {
                    for pi_new in pis.iter().filter(|q| st.evaluate(q) == st.evaluate(pi)) {
                        for sigma in &sigmas {
                            for t in shuffles(pi, sigma).unwrap() {
                                let img = phi(&t, pi, pi_new, sigma).unwrap();
                                assert_eq!(
                                    st.evaluate(&img),
                                    st.evaluate(&t),
                                    "{st} {pi} {pi_new} {sigma} {t}"
                                );
                            }
                        }
                    }
                }
            }
            for st in &sigma_side {
                for sigma in &sigmas {
                    for s_new in sigmas
                        .iter()
                        .filter(|q| st.evaluate(q) == st.evaluate(sigma))
                    {
                        for pi in &pis {
                            for t in shuffles(pi, sigma).unwrap() {
                                let img = phi_tilde(&t, pi, sigma, s_new).unwrap();
                                assert_eq!(st.evaluate(&img), st.evaluate(&t), "{st}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normalization_preserves_descent_statistics_exhaustive() {
        let named: Vec<Statistic> = Statistic::all_named()
            .into_iter()
            .filter(|s| s.is_descent_statistic())
            .collect();
        for total in 1..=7u32 {
            let ground: Vec<u32> = (1..=total).map(|v| 2 * v + 1).collect();
            for m in 0..=total as usize {
                // a few domain splittings per size keep this exhaustive in the swaps but quick
                for rot in 0..total as usize {
                    let mut g = ground.clone();
                    g.rotate_left(rot);
                    let (a, b) = g.split_at(m);
                    let (pi, sigma) = (
                        Permutation::new(a.to_vec()).unwrap(),
                        Permutation::new(b.to_vec()).unwrap(),
                    );
                    for mode in [NormalMode::PiLow, NormalMode::SigmaLow] {
                        let (np, ns, trace) = normalize_pair(&pi, &sigma, mode).unwrap();
                        assert_eq!(
                            (np.clone(), ns.clone()),
                            normalized_operands(&pi, &sigma, mode)
                        );
                        let before = shuffles(&pi, &sigma).unwrap();
                        let after: Vec<Permutation> =
                            before.iter().map(|t| trace.apply(t).unwrap()).collect();
                        let image: BTreeSet<_> = after.iter().cloned().collect();
                        assert_eq!(image, shuffles(&np, &ns).unwrap().into_iter().collect());
                        for (t, u) in before.iter().zip(&after) {
                            assert_eq!(stats::des_set(t), stats::des_set(u));
                        }
                        for st in &named {
                            assert_eq!(
                                stats::distribution(st, &before),
                                stats::distribution(st, &after)
                            );
                        }
                    }
                }
            }
        }
    }
}
