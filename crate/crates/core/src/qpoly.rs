//! Exact polynomials in `q` with big-integer coefficients, plus the closed
//! forms for the maj distribution over shuffle sets.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::perm::Permutation;
use crate::stats::{self, Statistic};

/// Coefficients in ascending degree, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c q^k`
    pub fn monomial(k: usize, c: i64) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::from(c);
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Ascending list form `[c0,c1,...]`.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }

    /// Human form `c0 + c1 q + c2 q^2 + ...`, skipping zero terms.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let var = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if k == 0 || !mag.is_one() {
                out.push_str(&mag.to_string());
                if k > 0 {
                    out.push(' ');
                }
            }
            out.push_str(&var);
        }
        out
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl std::iter::Sum for QPoly {
    fn sum<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| {
                Error::Parse(format!(
                    "expected a coefficient list like [1,2,1], got {s:?}"
                ))
            })?;
        if inner.trim().is_empty() {
            return Ok(QPoly::zero());
        }
        let coeffs = inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_list_string())
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `[n]_q = 1 + q + ... + q^{n-1}`
pub fn q_int(n: usize) -> QPoly {
    QPoly::from_coeffs(vec![BigInt::one(); n])
}

pub fn q_factorial(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, k| &acc * &q_int(k))
}

/// Gaussian binomial by the recurrence `[n,k] = [n-1,k-1] + q^k [n-1,k]`.
pub fn q_binomial(n: i64, k: i64) -> Result<QPoly> {
    if n < 0 || k < 0 || k > n {
        return Err(invalid(format!(
            "q_binomial needs 0 <= k <= n, got n={n}, k={k}"
        )));
    }
    let (n, k) = (n as usize, k as usize);
    let mut row = vec![QPoly::one()];
    for r in 1..=n {
        let mut next = Vec::with_capacity(r + 1);
        for j in 0..=r.min(k) {
            let left = if j > 0 {
                row[j - 1].clone()
            } else {
                QPoly::zero()
            };
            let right = row.get(j).map(|p| p.shift(j)).unwrap_or_default();
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row.swap_remove(k))
}

/// Like [`q_binomial`] but zero outside `0 <= k <= n`.
fn q_binomial_or_zero(n: i64, k: i64) -> QPoly {
    q_binomial(n, k).unwrap_or_default()
}

/// `Σ q^{stat(τ)}` over the collection.
pub fn gen_poly<'a, I>(stat: &Statistic, perms: I) -> Result<QPoly>
where
    I: IntoIterator<Item = &'a Permutation>,
{
    if !stat.is_integer_valued() {
        return Err(invalid(format!("{stat} is not integer valued")));
    }
    let mut counts: Vec<u64> = Vec::new();
    for p in perms {
        let v = stat.evaluate_int(p)?;
        let k =
            usize::try_from(v).map_err(|_| invalid(format!("{stat}({p}) = {v} is negative")))?;
        if counts.len() <= k {
            counts.resize(k + 1, 0);
        }
        counts[k] += 1;
    }
    Ok(QPoly::from_coeffs(
        counts.into_iter().map(BigInt::from).collect(),
    ))
}

/// `q^{maj π + maj σ} [m+n choose m]_q`
pub fn stanley_rhs(pi: &Permutation, sigma: &Permutation) -> Result<QPoly> {
    pi.ensure_disjoint(sigma)?;
    let (m, n) = (pi.len() as i64, sigma.len() as i64);
    let shift = (stats::maj(pi) + stats::maj(sigma)) as usize;
    Ok(q_binomial(m + n, m)?.shift(shift))
}

/// Closed form of the maj distribution over shuffles with exactly `k` descents.
pub fn stanley_refined_rhs(pi: &Permutation, sigma: &Permutation, k: usize) -> Result<QPoly> {
    pi.ensure_disjoint(sigma)?;
    let (m, n) = (pi.len() as i64, sigma.len() as i64);
    let (dp, ds) = (
        stats::des_set(pi).len() as i64,
        stats::des_set(sigma).len() as i64,
    );
    let k = k as i64;
    if k < dp || k < ds {
        return Ok(QPoly::zero());
    }
    let product =
        &q_binomial_or_zero(m - dp + ds, k - dp) * &q_binomial_or_zero(n - ds + dp, k - ds);
    let shift = stats::maj(pi) + stats::maj(sigma) + (k - dp) * (k - ds);
    Ok(product.shift(shift as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use crate::shuffle::{shuffles, shuffles_with_k_descents};
    use proptest::prelude::*;

    fn d(s: &str) -> Permutation {
        Permutation::new(s.chars().map(|c| c.to_digit(10).unwrap()).collect()).unwrap()
    }

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Gaussian binomial by exact division of q-factorials, with long division done by hand.
    fn binomial_by_division(n: usize, k: usize) -> QPoly {
        let mut num: Vec<BigInt> = q_factorial(n).coeffs().to_vec();
        let den = &q_factorial(k) * &q_factorial(n - k);
        let den = den.coeffs();
        let mut quot = vec![BigInt::zero(); num.len() - den.len() + 1];
        for i in (0..quot.len()).rev() {
            let c = &num[i + den.len() - 1] / den.last().unwrap();
            for (j, dc) in den.iter().enumerate() {
                num[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        assert!(num.iter().all(|c| c.is_zero()));
        QPoly::from_coeffs(quot)
    }

    #[test]
    fn basics() {
        assert_eq!(q_int(3), poly(&[1, 1, 1]));
        assert_eq!(q_int(0), QPoly::zero());
        assert_eq!(q_binomial(4, 2).unwrap(), poly(&[1, 1, 2, 1, 1]));
        assert_eq!(q_binomial(7, 0).unwrap(), QPoly::one());
        assert!(q_binomial(2, 3).is_err());
        assert!(q_binomial(-1, 0).is_err());
        assert_eq!(q_factorial(3), poly(&[1, 2, 2, 1]));
    }

    #[test]
    fn text_forms() {
        let p = poly(&[1, 1, 2, 1, 1]);
        assert_eq!(p.to_list_string(), "[1,1,2,1,1]");
        assert_eq!(p.pretty(), "1 + q + 2 q^2 + q^3 + q^4");
        assert_eq!(poly(&[0, -3, 1]).pretty(), "-3 q + q^2");
        assert_eq!(QPoly::zero().pretty(), "0");
        assert_eq!("[1, 1, 2,1,1,0]".parse::<QPoly>().unwrap(), p);
        assert_eq!("[]".parse::<QPoly>().unwrap(), QPoly::zero());
        assert!("1,2".parse::<QPoly>().is_err());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<QPoly>(&json).unwrap(), p);
    }

    #[test]
    fn binomial_matches_division_and_symmetry() {
        for n in 0..=12usize {
            for k in 0..=n {
                let b = q_binomial(n as i64, k as i64).unwrap();
                assert_eq!(b, binomial_by_division(n, k));
                assert_eq!(b, q_binomial(n as i64, (n - k) as i64).unwrap());
                let ordinary: u64 = (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1));
                assert_eq!(b.eval_at_one(), BigInt::from(ordinary));
            }
        }
    }

    #[test]
    fn gen_poly_examples() {
        let maj = Statistic::Maj;
        let sh = shuffles(&d("4312"), &d("76")).unwrap();
        assert_eq!(
            gen_poly(&maj, &sh).unwrap(),
            poly(&[0, 0, 0, 0, 1, 1, 2, 2, 3, 2, 2, 1, 1])
        );
        assert_eq!(gen_poly(&maj, &[d("1234")]).unwrap(), QPoly::one());
        let sh = shuffles(&d("1"), &d("2")).unwrap();
        assert_eq!(gen_poly(&Statistic::Des, &sh).unwrap(), poly(&[1, 1]));
        assert!(gen_poly(&Statistic::DesSet, &sh).is_err());
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(
            stanley_rhs(&d("4312"), &d("76")).unwrap(),
            q_binomial(6, 4).unwrap().shift(4)
        );
        assert_eq!(
            stanley_rhs(&d("12"), &d("34")).unwrap(),
            q_binomial(4, 2).unwrap()
        );
        assert_eq!(
            stanley_rhs(&d("312"), &Permutation::empty()).unwrap(),
            QPoly::monomial(1, 1)
        );
        assert!(stanley_rhs(&d("12"), &d("23")).is_err());
        assert_eq!(
            stanley_refined_rhs(&d("12"), &d("34"), 0).unwrap(),
            QPoly::one()
        );
        assert!(stanley_refined_rhs(&d("12"), &d("34"), 4)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn identities_small_exhaustive() {
        for total in 0..=6u32 {
            for m in 0..=total {
                let pis = all_permutations(&(1..=m).collect::<Vec<_>>());
                let sigmas = all_permutations(&(m + 1..=total).collect::<Vec<_>>());
                for pi in &pis {
                    for sigma in &sigmas {
                        let sh = shuffles(pi, sigma).unwrap();
                        let rhs = stanley_rhs(pi, sigma).unwrap();
                        assert_eq!(gen_poly(&Statistic::Maj, &sh).unwrap(), rhs);
                        let mut refined_sum = QPoly::zero();
                        for k in 0..=total as usize {
                            let sub = shuffles_with_k_descents(pi, sigma, k).unwrap();
                            let r = stanley_refined_rhs(pi, sigma, k).unwrap();
                            assert_eq!(
                                gen_poly(&Statistic::Maj, &sub).unwrap(),
                                r,
                                "{pi} {sigma} k={k}"
                            );
                            refined_sum = &refined_sum + &r;
                        }
                        assert_eq!(refined_sum, rhs);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_laws(a in proptest::collection::vec(-5i64..5, 0..6),
                     b in proptest::collection::vec(-5i64..5, 0..6),
                     c in proptest::collection::vec(-5i64..5, 0..6)) {
            let (a, b, c) = (poly(&a), poly(&b), poly(&c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(a.to_list_string().parse::<QPoly>().unwrap(), a);
        }
    }
}
