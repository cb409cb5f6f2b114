//! Exponent vectors (multi-indices) and their combinatorics.

use crate::scalar::{Rat, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial; one entry per variable.
///
/// `Ord` is the graded lexicographic order (total degree first, then
/// lexicographic), which fixes a deterministic term order everywhere.
/// The componentwise product order is exposed separately as [`ExpVec::leq`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn zeros(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExpVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Total degree `|alpha|`.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Componentwise product order `self <= other`.
    pub fn leq(&self, other: &ExpVec) -> bool {
        debug_assert_eq!(self.len(), other.len());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; requires `other <= self`.
    pub fn sub(&self, other: &ExpVec) -> ExpVec {
        ExpVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_multi_affine(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// All vectors `alpha <= bound` in graded-lex order.
    pub fn iter_below(bound: &ExpVec) -> Vec<ExpVec> {
        let mut acc = vec![Vec::new()];
        for &b in &bound.0 {
            let mut next = Vec::with_capacity(acc.len() * (b as usize + 1));
            for prefix in &acc {
                for e in 0..=b {
                    let mut v = prefix.clone();
                    v.push(e);
                    next.push(v);
                }
            }
            acc = next;
        }
        let mut out: Vec<ExpVec> = acc.into_iter().map(ExpVec).collect();
        out.sort();
        out
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExpVec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl serde::Serialize for ExpVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for ExpVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(ExpVec(Vec::<u32>::deserialize(d)?))
    }
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// Binomial coefficient of multi-indices, zero unless `alpha <= kappa`.
pub fn multi_binom(kappa: &ExpVec, alpha: &ExpVec) -> Rat {
    debug_assert_eq!(kappa.len(), alpha.len());
    if !alpha.leq(kappa) {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for (&k, &a) in kappa.0.iter().zip(&alpha.0) {
        acc *= factorial(k) / (factorial(a) * factorial(k - a));
    }
    Rat::from(acc)
}

/// Falling factorial `(beta)_alpha = beta!/(beta-alpha)!`, zero unless
/// `alpha <= beta`.
pub fn falling_factorial(beta: &ExpVec, alpha: &ExpVec) -> Rat {
    debug_assert_eq!(beta.len(), alpha.len());
    if !alpha.leq(beta) {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for (&b, &a) in beta.0.iter().zip(&alpha.0) {
        for j in 0..a {
            acc *= (b - j) as u64;
        }
    }
    Rat::from(acc)
}

/// Jensen multiplier `J(alpha, beta) = (beta)_alpha * beta^{-alpha}`, with
/// the convention `k^{+-k} = 1` for `k = 0`.
pub fn jensen_multiplier(alpha: &ExpVec, beta: &ExpVec) -> Rat {
    let num = falling_factorial(beta, alpha);
    if num.is_zero() {
        return num;
    }
    let mut den = BigInt::one();
    for (&b, &a) in beta.0.iter().zip(&alpha.0) {
        if b > 0 {
            den *= BigInt::from(b).pow(a);
        }
        // b == 0 forces a == 0 here (else num would be zero); 0^0 = 1.
    }
    num / Rat::from(den)
}

pub fn multi_binom_scalar(kappa: &ExpVec, alpha: &ExpVec) -> Scalar {
    Scalar::from_rat(multi_binom(kappa, alpha))
}

pub fn factorial_rat(n: u32) -> BigRational {
    Rat::from(factorial(n))
}

/// Minimal and maximal antichains of a set of exponent vectors under the
/// product order, plus whether the maximal antichain is a singleton.
pub fn support_extrema(support: &[ExpVec]) -> (Vec<ExpVec>, Vec<ExpVec>, bool) {
    let minimal: Vec<ExpVec> = support
        .iter()
        .filter(|a| !support.iter().any(|b| *b != **a && b.leq(a)))
        .cloned()
        .collect();
    let maximal: Vec<ExpVec> = support
        .iter()
        .filter(|a| !support.iter().any(|b| *b != **a && a.leq(b)))
        .cloned()
        .collect();
    let unique_max = maximal.len() == 1;
    (minimal, maximal, unique_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ev(v: &[u32]) -> ExpVec {
        ExpVec(v.to_vec())
    }

    #[test]
    fn binom_outside_range_is_zero() {
        assert_eq!(multi_binom(&ev(&[2, 2]), &ev(&[1, 3])), Rat::zero());
        assert_eq!(multi_binom(&ev(&[2, 2]), &ev(&[1, 2])), rat(2, 1));
        assert_eq!(multi_binom(&ev(&[4]), &ev(&[2])), rat(6, 1));
    }

    #[test]
    fn falling_and_jensen() {
        assert_eq!(falling_factorial(&ev(&[3]), &ev(&[2])), rat(6, 1));
        assert_eq!(falling_factorial(&ev(&[1]), &ev(&[2])), Rat::zero());
        // J((1),(2)) = (2)_1 * 2^{-1} = 1
        assert_eq!(jensen_multiplier(&ev(&[1]), &ev(&[2])), rat(1, 1));
        // J(beta,beta) = beta!/beta^beta
        assert_eq!(jensen_multiplier(&ev(&[3]), &ev(&[3])), rat(6, 27));
        // 0^0 convention
        assert_eq!(jensen_multiplier(&ev(&[0, 1]), &ev(&[0, 2])), rat(1, 1));
    }

    #[test]
    fn graded_lex_order() {
        let mut v = vec![ev(&[1, 1]), ev(&[0, 0]), ev(&[2, 0]), ev(&[0, 2]), ev(&[1, 0])];
        v.sort();
        assert_eq!(
            v,
            vec![ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 2]), ev(&[1, 1]), ev(&[2, 0])]
        );
    }

    #[test]
    fn extrema_antichains() {
        let supp = vec![ev(&[0, 0]), ev(&[1, 1])];
        let (min, max, uniq) = support_extrema(&supp);
        assert_eq!(min, vec![ev(&[0, 0])]);
        assert_eq!(max, vec![ev(&[1, 1])]);
        assert!(uniq);

        let supp = vec![ev(&[2, 1]), ev(&[1, 2])];
        let (_, max, uniq) = support_extrema(&supp);
        assert_eq!(max.len(), 2);
        assert!(!uniq);
    }
}
