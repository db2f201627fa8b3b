//! Exact arithmetic for the signature identity
//!
//! `sign(M) = Σ_p ε(p) Π_i (1 + t^w) / (1 - t^w)`
//!
//! both as order-`N` truncated series around `t = 0` and as an exact
//! rational function over the common denominator `Π_p Π_i (1 - t^w)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::data::FixedPointData;

/// Sparse polynomial in `t` with exact rational coefficients. No zero
/// coefficient is ever stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPolynomial {
    terms: BTreeMap<u64, BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        RationalPolynomial::default()
    }

    pub fn one() -> Self {
        RationalPolynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RationalPolynomial::monomial(0, c)
    }

    pub fn monomial(exponent: u64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        RationalPolynomial { terms }
    }

    /// `1 + sign * t^w`.
    pub fn binomial(w: u64, sign: i64) -> Self {
        let mut p = RationalPolynomial::one();
        p.add_term(w, BigRational::from_integer(BigInt::from(sign)));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponent: u64) -> BigRational {
        self.terms.get(&exponent).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RationalPolynomial::zero();
        }
        RationalPolynomial {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    fn add_term(&mut self, exponent: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(order);
        for (e, c) in self.terms.range(..=order as u64) {
            s.coeffs[*e as usize] = c.clone();
        }
        s
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = RationalPolynomial::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn neg(self) -> RationalPolynomial {
        RationalPolynomial {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{e}")?,
            }
        }
        Ok(())
    }
}

/// Power series in `t` known through `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TruncatedSeries::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series has at least t^0");
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        assert!(order <= self.order(), "cannot extend a truncated series");
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    fn check_order(&self, other: &TruncatedSeries) {
        assert_eq!(self.order(), other.order(), "series orders differ");
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        TruncatedSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.check_order(rhs);
        let order = self.order();
        let mut out = TruncatedSeries::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

/// `numerator / denominator` with `denominator(0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: RationalPolynomial,
    pub denominator: RationalPolynomial,
}

impl RationalFunction {
    /// Expansion around `t = 0` through `t^order`.
    pub fn truncate(&self, order: usize) -> TruncatedSeries {
        let d0 = self.denominator.coeff(0);
        assert!(!d0.is_zero(), "denominator vanishes at t = 0");
        let mut q: Vec<BigRational> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.numerator.coeff(k as u64);
            for (e, d) in self.denominator.terms.range(1..k as u64 + 1) {
                acc -= d * &q[k - *e as usize];
            }
            q.push(acc / &d0);
        }
        TruncatedSeries { coeffs: q }
    }
}

/// Outcome of the exact constancy test for the signature function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignatureVerdict {
    Constant {
        #[serde(serialize_with = "serialize_rational")]
        value: BigRational,
    },
    /// Numerator and `value * denominator` first differ at this degree.
    NonConstant { witness_degree: u64 },
}

impl SignatureVerdict {
    pub fn constant(&self) -> Option<&BigRational> {
        match self {
            SignatureVerdict::Constant { value } => Some(value),
            SignatureVerdict::NonConstant { .. } => None,
        }
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    value: &BigRational,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

/// `(1 + t^w) / (1 - t^w) = 1 + 2 Σ_{j≥1} t^{jw}` through `t^order`.
pub fn factor_series(w: u64, order: usize) -> TruncatedSeries {
    assert!(w >= 1, "weights are positive");
    let mut s = TruncatedSeries::one(order);
    let two = BigRational::from_integer(BigInt::from(2));
    let step = usize::try_from(w).unwrap_or(usize::MAX);
    let mut k = step;
    while k <= order {
        s.coeffs[k] = two.clone();
        k = match k.checked_add(step) {
            Some(next) => next,
            None => break,
        };
    }
    s
}

pub fn signature_series(data: &FixedPointData, order: usize) -> TruncatedSeries {
    let mut total = TruncatedSeries::zero(order);
    for p in data.points() {
        let term = p
            .weights()
            .iter()
            .fold(TruncatedSeries::one(order), |acc, &w| &acc * &factor_series(w, order));
        total = if p.sign().is_plus() {
            &total + &term
        } else {
            &total - &term
        };
    }
    total
}

/// The signature sum as one fraction over `Π_p Π_i (1 - t^{w_pi})`.
pub fn signature_rational_function(data: &FixedPointData) -> RationalFunction {
    let per_point: Vec<(RationalPolynomial, RationalPolynomial)> = data
        .points()
        .iter()
        .map(|p| {
            let mut plus = RationalPolynomial::one();
            let mut minus = RationalPolynomial::one();
            for &w in p.weights() {
                plus = &plus * &RationalPolynomial::binomial(w, 1);
                minus = &minus * &RationalPolynomial::binomial(w, -1);
            }
            (plus, minus)
        })
        .collect();

    // prefix[i] = Π_{q<i} minus_q, suffix[i] = Π_{q≥i} minus_q
    let n = per_point.len();
    let mut prefix = vec![RationalPolynomial::one(); n + 1];
    for i in 0..n {
        prefix[i + 1] = &prefix[i] * &per_point[i].1;
    }
    let mut suffix = vec![RationalPolynomial::one(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = &suffix[i + 1] * &per_point[i].1;
    }

    let mut numerator = RationalPolynomial::zero();
    for (i, p) in data.points().iter().enumerate() {
        let others = &prefix[i] * &suffix[i + 1];
        let term = &per_point[i].0 * &others;
        numerator = if p.sign().is_plus() {
            &numerator + &term
        } else {
            &numerator - &term
        };
    }
    RationalFunction {
        numerator,
        denominator: prefix[n].clone(),
    }
}

pub fn signature_exact(data: &FixedPointData) -> SignatureVerdict {
    let f = signature_rational_function(data);
    // denominator(0) = 1, so the only candidate constant is numerator(0)
    let value = f.numerator.coeff(0) / f.denominator.coeff(0);
    let diff = &f.numerator - &f.denominator.scale(&value);
    match diff.lowest_degree() {
        None => SignatureVerdict::Constant { value },
        Some(witness_degree) => SignatureVerdict::NonConstant { witness_degree },
    }
}

/// `Σ_p ε(p)`, the value of the signature function at `t = 0`.
pub fn signature_value(data: &FixedPointData) -> BigRational {
    let sum: i64 = data.points().iter().map(|p| p.sign().value() as i64).sum();
    BigRational::from_integer(BigInt::from(sum))
}

/// `2 * (sum of the two largest weights) + 1`.
pub fn default_order(data: &FixedPointData) -> usize {
    let weights = data.all_weights();
    let top: u64 = weights.iter().rev().take(2).sum();
    usize::try_from(top.saturating_mul(2).saturating_add(1)).unwrap_or(usize::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FixedPointDatum, Sign};
    use proptest::prelude::*;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    /// Brute force: the coefficient of `t^k` in `Π_i (1 + 2 Σ_j t^{j w_i})`
    /// is a sum over exponent tuples `(j_1..j_n)` with `Σ j_i w_i = k`, each
    /// tuple weighted by `2^(number of nonzero j_i)`.
    fn brute_force_series(data: &FixedPointData, order: usize) -> Vec<i64> {
        fn count(weights: &[u64], remaining: u64) -> i64 {
            match weights.split_first() {
                None => (remaining == 0) as i64,
                Some((&w, rest)) => {
                    let mut total = count(rest, remaining);
                    let mut j = 1;
                    while j * w <= remaining {
                        total += 2 * count(rest, remaining - j * w);
                        j += 1;
                    }
                    total
                }
            }
        }
        (0..=order as u64)
            .map(|k| {
                data.points()
                    .iter()
                    .map(|p| p.sign().value() as i64 * count(p.weights(), k))
                    .sum()
            })
            .collect()
    }

    fn data(pairs: &[(i64, &[u64])]) -> FixedPointData {
        FixedPointData::from_pairs(pairs).unwrap()
    }

    fn cp3_111() -> FixedPointData {
        data(&[(1, &[1, 2, 3]), (-1, &[1, 1, 2]), (1, &[1, 1, 2]), (-1, &[1, 2, 3])])
    }

    fn lemma_case_ii() -> FixedPointData {
        data(&[(1, &[2, 4, 1]), (1, &[2, 3, 1]), (-1, &[4, 3, 2]), (-1, &[1, 1, 2])])
    }

    #[test]
    fn factor_series_examples() {
        assert_eq!(ints(&factor_series(1, 3)), vec![1, 2, 2, 2]);
        assert_eq!(ints(&factor_series(2, 5)), vec![1, 0, 2, 0, 2, 0]);
        assert_eq!(ints(&factor_series(7, 5)), vec![1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn signature_series_examples() {
        let s6 = data(&[(1, &[2, 5, 9]), (-1, &[2, 5, 9])]);
        assert_eq!(ints(&signature_series(&s6, 12)), vec![0; 13]);

        let bad = lemma_case_ii();
        let s = signature_series(&bad, 6);
        assert_eq!(ints(&s), brute_force_series(&bad, 6));
        assert!(s.coeffs()[1..].iter().any(|c| !c.is_zero()));

        let cp3 = cp3_111();
        let s = signature_series(&cp3, 20);
        assert_eq!(ints(&s), vec![0; 21]);
        assert_eq!(ints(&s), brute_force_series(&cp3, 20));
    }

    #[test]
    fn signature_exact_examples() {
        let two = data(&[(1, &[3, 4, 11]), (-1, &[3, 4, 11])]);
        assert_eq!(
            signature_exact(&two),
            SignatureVerdict::Constant { value: int(0) }
        );
        assert_eq!(
            signature_exact(&cp3_111()),
            SignatureVerdict::Constant { value: int(0) }
        );
        match signature_exact(&lemma_case_ii()) {
            SignatureVerdict::NonConstant { witness_degree } => {
                // the truncated series must already disagree with a constant
                let s = signature_series(&lemma_case_ii(), witness_degree as usize);
                assert!(!s.is_constant());
            }
            other => panic!("expected non-constant, got {other:?}"),
        }
        assert_eq!(
            signature_exact(&FixedPointData::empty()),
            SignatureVerdict::Constant { value: int(0) }
        );
        // CP^2(1,1) has signature 1
        let cp2 = data(&[(1, &[1, 2]), (-1, &[1, 1]), (1, &[1, 2])]);
        assert_eq!(signature_exact(&cp2), SignatureVerdict::Constant { value: int(1) });
    }

    #[test]
    fn signature_value_examples() {
        let spheres = data(&[(1, &[7, 2, 3]), (-1, &[7, 2, 3]), (1, &[5, 2, 3]), (-1, &[5, 2, 3])]);
        assert_eq!(signature_value(&spheres), int(0));
        assert_eq!(signature_value(&data(&[(1, &[1, 1]), (1, &[1, 1])])), int(2));
        assert_eq!(signature_value(&FixedPointData::empty()), int(0));
    }

    #[test]
    fn default_order_uses_two_largest() {
        assert_eq!(default_order(&cp3_111()), 2 * (3 + 3) + 1);
        assert_eq!(default_order(&data(&[(1, &[4])])), 9);
        assert_eq!(default_order(&FixedPointData::empty()), 1);
    }

    #[test]
    fn polynomial_arithmetic() {
        let a = RationalPolynomial::binomial(2, 1);
        let b = RationalPolynomial::binomial(2, -1);
        let prod = &a * &b; // 1 - t^4
        assert_eq!(prod, RationalPolynomial::binomial(4, -1));
        assert!((&prod - &prod).is_zero());
        assert_eq!((&a + &b).coeff(0), int(2));
        assert_eq!((&a + &b).degree(), Some(0));
        assert_eq!((-&a).coeff(2), int(-1));
    }

    fn arb_data() -> impl Strategy<Value = FixedPointData> {
        (1usize..=3).prop_flat_map(|n| {
            prop::collection::vec((any::<bool>(), prop::collection::vec(1u64..=6, n)), 1..=4)
                .prop_map(|pts| {
                    FixedPointData::new(
                        pts.into_iter()
                            .map(|(plus, ws)| {
                                let sign = if plus { Sign::Plus } else { Sign::Minus };
                                FixedPointDatum::new(sign, ws).unwrap()
                            })
                            .collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn truncation_coherence(w in 1u64..20, n in 0usize..60, m in 0usize..60) {
            let (small, big) = (n.min(m), n.max(m));
            prop_assert_eq!(factor_series(w, big).truncate(small), factor_series(w, small));
        }

        #[test]
        fn series_matches_rational_function(d in arb_data()) {
            let order = 30;
            let f = signature_rational_function(&d);
            prop_assert_eq!(signature_series(&d, order), f.truncate(order));
        }

        #[test]
        fn series_matches_brute_force(d in arb_data()) {
            prop_assert_eq!(ints(&signature_series(&d, 15)), brute_force_series(&d, 15));
        }

        #[test]
        fn doubled_with_reversal_is_zero(d in arb_data()) {
            let doubled = d.disjoint_union(&d.reverse_orientation()).unwrap();
            prop_assert_eq!(signature_exact(&doubled), SignatureVerdict::Constant { value: int(0) });
        }
    }
}
