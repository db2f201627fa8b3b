//! Necessary conditions on fixed-point data.
//!
//! Every check returns a three-valued verdict. `Inapplicable` means the
//! hypotheses of the underlying statement are not met by the data; it never
//! counts as a failure.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::data::{FixedPointData, FixedPointDatum, Sign};
use crate::series::{serialize_rational, signature_exact, signature_value, SignatureVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Inapplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CheckKind {
    AbbvIntegralOne,
    WeightParity,
    ParityDimension,
    SmallestWeights,
    UniformWeightBalance,
    CongruencePairing { weight: u64 },
    SignatureConstant,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckKind::AbbvIntegralOne => write!(f, "abbv_integral_one"),
            CheckKind::WeightParity => write!(f, "weight_parity"),
            CheckKind::ParityDimension => write!(f, "parity_dimension"),
            CheckKind::SmallestWeights => write!(f, "smallest_weights"),
            CheckKind::UniformWeightBalance => write!(f, "uniform_weight_balance"),
            CheckKind::CongruencePairing { weight } => write!(f, "congruence_pairing(w={weight})"),
            CheckKind::SignatureConstant => write!(f, "signature_constant"),
        }
    }
}

/// One matched pair in a congruence pairing: `weights_p[i]` corresponds to
/// `weights_q[sigma[i]]` with sign `nu[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairWitness {
    pub p: usize,
    pub q: usize,
    pub sigma: Vec<usize>,
    pub nu: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    None,
    Rational {
        #[serde(serialize_with = "serialize_rational")]
        value: BigRational,
    },
    OddWeights { weights: Vec<u64> },
    Shape { points: usize, arity: usize },
    SmallestWeights { w_plus: Vec<u64>, w_minus: Vec<u64> },
    SignCounts { plus: usize, minus: usize },
    Pairing { pairs: Vec<PairWitness> },
    Signature { verdict: SignatureVerdict },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: CheckKind,
    pub verdict: CheckVerdict,
    pub witness: Witness,
    /// Human-readable explanation; never empty for a failure.
    pub message: String,
}

impl CheckReport {
    fn new(check: CheckKind, verdict: CheckVerdict, witness: Witness, message: impl Into<String>) -> Self {
        CheckReport {
            check,
            verdict,
            witness,
            message: message.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == CheckVerdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == CheckVerdict::Fail
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.verdict {
            CheckVerdict::Pass => "PASS",
            CheckVerdict::Fail => "FAIL",
            CheckVerdict::Inapplicable => "N/A ",
        };
        write!(f, "{tag} {}: {}", self.check, self.message)
    }
}

/// `Σ_p ε(p) / Π_i w_pi`, the localization of the equivariant integral of 1.
pub fn abbv_integral_one(data: &FixedPointData) -> BigRational {
    data.points()
        .iter()
        .map(|p| BigRational::new(BigInt::from(p.sign().value()), p.weight_product()))
        .fold(BigRational::zero(), |acc, x| acc + x)
}

pub fn check_abbv(data: &FixedPointData) -> CheckReport {
    let value = abbv_integral_one(data);
    let verdict = if value.is_zero() {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail
    };
    let message = match verdict {
        CheckVerdict::Pass => "sum of sign / product of weights is 0".to_string(),
        _ => format!("sum of sign / product of weights is {value}, expected 0"),
    };
    CheckReport::new(CheckKind::AbbvIntegralOne, verdict, Witness::Rational { value }, message)
}

pub fn check_weight_parity(data: &FixedPointData) -> CheckReport {
    let odd = odd_weights(data);
    if odd.is_empty() {
        CheckReport::new(
            CheckKind::WeightParity,
            CheckVerdict::Pass,
            Witness::None,
            "every weight occurs an even number of times",
        )
    } else {
        let message = format!("weights occurring an odd number of times: {odd:?}");
        CheckReport::new(
            CheckKind::WeightParity,
            CheckVerdict::Fail,
            Witness::OddWeights { weights: odd },
            message,
        )
    }
}

pub(crate) fn weight_counts(data: &FixedPointData) -> BTreeMap<u64, usize> {
    let mut counts = BTreeMap::new();
    for w in data.all_weights() {
        *counts.entry(w).or_insert(0) += 1;
    }
    counts
}

pub(crate) fn odd_weights(data: &FixedPointData) -> Vec<u64> {
    weight_counts(data)
        .into_iter()
        .filter(|&(_, c)| c % 2 == 1)
        .map(|(w, _)| w)
        .collect()
}

pub fn check_parity_dimension(data: &FixedPointData) -> CheckReport {
    let points = data.len();
    let arity = data.arity().unwrap_or(0);
    let witness = Witness::Shape { points, arity };
    if points.is_multiple_of(2) || arity.is_multiple_of(2) {
        CheckReport::new(
            CheckKind::ParityDimension,
            CheckVerdict::Pass,
            witness,
            format!("{points} points in dimension {}", 2 * arity),
        )
    } else {
        CheckReport::new(
            CheckKind::ParityDimension,
            CheckVerdict::Fail,
            witness,
            format!(
                "an odd number of points ({points}) requires dimension divisible by 4, got {}",
                2 * arity
            ),
        )
    }
}

/// The two smallest weights over positive points agree with those over
/// negative points, and the value of the second smallest occurs equally
/// often on both sides.
pub fn check_smallest_weights(data: &FixedPointData) -> CheckReport {
    let w_plus = data.weights_with_sign(Sign::Plus);
    let w_minus = data.weights_with_sign(Sign::Minus);
    if w_plus.len() < 2 || w_minus.len() < 2 {
        return CheckReport::new(
            CheckKind::SmallestWeights,
            CheckVerdict::Inapplicable,
            Witness::SmallestWeights { w_plus, w_minus },
            "each sign needs at least two weights",
        );
    }
    let (a1, a2) = (w_plus[0], w_plus[1]);
    let (b1, b2) = (w_minus[0], w_minus[1]);
    let count = |ws: &[u64], v: u64| ws.iter().filter(|&&w| w == v).count();
    let problem = if a1 != b1 {
        Some(format!("a1 = {a1} differs from b1 = {b1}"))
    } else if a2 != b2 {
        Some(format!("a2 = {a2} differs from b2 = {b2}"))
    } else if count(&w_plus, a2) != count(&w_minus, a2) {
        Some(format!(
            "value {a2} occurs {} times among positive weights but {} times among negative weights",
            count(&w_plus, a2),
            count(&w_minus, a2)
        ))
    } else {
        None
    };
    let witness = Witness::SmallestWeights { w_plus, w_minus };
    match problem {
        None => CheckReport::new(
            CheckKind::SmallestWeights,
            CheckVerdict::Pass,
            witness,
            format!("a1 = b1 = {a1}, a2 = b2 = {a2}"),
        ),
        Some(message) => CheckReport::new(CheckKind::SmallestWeights, CheckVerdict::Fail, witness, message),
    }
}

pub fn check_uniform_weight_balance(data: &FixedPointData) -> CheckReport {
    let plus = data.count_sign(Sign::Plus);
    let minus = data.count_sign(Sign::Minus);
    let witness = Witness::SignCounts { plus, minus };
    let weights = data.distinct_weights();
    if weights.len() != 1 {
        return CheckReport::new(
            CheckKind::UniformWeightBalance,
            CheckVerdict::Inapplicable,
            witness,
            "weights are not all equal",
        );
    }
    if plus == minus {
        CheckReport::new(
            CheckKind::UniformWeightBalance,
            CheckVerdict::Pass,
            witness,
            format!("all weights equal {}, {plus} positive and {minus} negative points", weights[0]),
        )
    } else {
        CheckReport::new(
            CheckKind::UniformWeightBalance,
            CheckVerdict::Fail,
            witness,
            format!(
                "all weights equal {} but {plus} positive vs {minus} negative points",
                weights[0]
            ),
        )
    }
}

/// Pairs the points carrying weight `w` so that, within each pair, the
/// remaining weights correspond modulo `w` up to sign and the signs obey
/// `ε(p) = ε(q)·(-1)^(ν⁻+1)`.
///
/// Applicable when no weight is a proper multiple of `w` and every point
/// carries `w` at most once. For `w = 1` the hypothesis forces every weight
/// to equal 1; the component is then the whole manifold, every point takes
/// part and the relation reduces to opposite signs.
pub fn check_congruence_pairing(data: &FixedPointData, w: u64) -> CheckReport {
    let kind = CheckKind::CongruencePairing { weight: w };
    let inapplicable = |msg: String| CheckReport::new(kind, CheckVerdict::Inapplicable, Witness::None, msg);
    if w == 0 {
        return inapplicable("pairing weight must be positive".into());
    }
    if let Some(&m) = data.all_weights().iter().find(|&&x| x != w && x % w == 0) {
        return inapplicable(format!("{m} is a proper multiple of {w}"));
    }

    let (members, residues): (Vec<usize>, Vec<Vec<u64>>) = if w == 1 {
        (0..data.len()).map(|i| (i, Vec::new())).unzip()
    } else {
        if let Some(i) = data.points().iter().position(|p| p.multiplicity(w) > 1) {
            return inapplicable(format!("point {i} carries weight {w} more than once"));
        }
        data.points()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.multiplicity(w) == 1)
            .map(|(i, p)| (i, normal_weights(p, w)))
            .unzip()
    };
    if members.is_empty() {
        return inapplicable(format!("no point carries weight {w}"));
    }
    if members.len() % 2 == 1 {
        return CheckReport::new(
            kind,
            CheckVerdict::Fail,
            Witness::None,
            format!("{} points carry weight {w}; they cannot be paired", members.len()),
        );
    }

    let signs: Vec<Sign> = members.iter().map(|&i| data.points()[i].sign()).collect();
    let mut used = vec![false; members.len()];
    let mut pairs = Vec::new();
    if find_pairing(&signs, &residues, w, &mut used, &mut pairs) {
        let pairs = pairs
            .into_iter()
            .map(|(a, b, sigma, nu)| PairWitness {
                p: members[a],
                q: members[b],
                sigma,
                nu,
            })
            .collect::<Vec<_>>();
        let desc = pairs
            .iter()
            .map(|pw| format!("({},{})", pw.p, pw.q))
            .collect::<Vec<_>>()
            .join(" ");
        CheckReport::new(
            kind,
            CheckVerdict::Pass,
            Witness::Pairing { pairs },
            format!("points carrying {w} pair as {desc}"),
        )
    } else {
        CheckReport::new(
            kind,
            CheckVerdict::Fail,
            Witness::None,
            format!("no pairing of the {} points carrying weight {w} satisfies the congruence and sign relations", members.len()),
        )
    }
}

/// Weights of `p` other than one copy of `w`.
fn normal_weights(p: &FixedPointDatum, w: u64) -> Vec<u64> {
    let mut out = p.weights().to_vec();
    let pos = out.iter().position(|&x| x == w).expect("point carries w");
    out.remove(pos);
    out
}

type PairFound = (usize, usize, Vec<usize>, Vec<i8>);

fn find_pairing(
    signs: &[Sign],
    residues: &[Vec<u64>],
    w: u64,
    used: &mut [bool],
    pairs: &mut Vec<PairFound>,
) -> bool {
    let Some(first) = used.iter().position(|u| !u) else {
        return true;
    };
    used[first] = true;
    for other in first + 1..used.len() {
        if used[other] {
            continue;
        }
        if let Some((sigma, nu)) = match_pair(signs[first], &residues[first], signs[other], &residues[other], w) {
            used[other] = true;
            pairs.push((first, other, sigma, nu));
            if find_pairing(signs, residues, w, used, pairs) {
                return true;
            }
            pairs.pop();
            used[other] = false;
        }
    }
    used[first] = false;
    false
}

/// Searches bijections σ and sign maps ν with `p_i ≡ ν_i q_σ(i) (mod w)` and
/// `(-1)^ν⁻ = -ε(p)ε(q)`.
fn match_pair(sp: Sign, p: &[u64], sq: Sign, q: &[u64], w: u64) -> Option<(Vec<usize>, Vec<i8>)> {
    if p.len() != q.len() {
        return None;
    }
    let needed_parity = -(sp * sq);
    let mut sigma = Vec::with_capacity(p.len());
    let mut nu = Vec::with_capacity(p.len());
    let mut taken = vec![false; q.len()];
    if search_sigma_nu(p, q, w, needed_parity, &mut taken, &mut sigma, &mut nu) {
        Some((sigma, nu))
    } else {
        None
    }
}

fn search_sigma_nu(
    p: &[u64],
    q: &[u64],
    w: u64,
    needed_parity: Sign,
    taken: &mut [bool],
    sigma: &mut Vec<usize>,
    nu: &mut Vec<i8>,
) -> bool {
    let i = sigma.len();
    if i == p.len() {
        let negatives = nu.iter().filter(|&&s| s < 0).count();
        return Sign::parity(negatives) == needed_parity;
    }
    let a = p[i] % w;
    for j in 0..q.len() {
        if taken[j] {
            continue;
        }
        let b = q[j] % w;
        for s in [1i8, -1] {
            let rhs = if s > 0 { b } else { (w - b) % w };
            if a != rhs {
                continue;
            }
            taken[j] = true;
            sigma.push(j);
            nu.push(s);
            if search_sigma_nu(p, q, w, needed_parity, taken, sigma, nu) {
                return true;
            }
            nu.pop();
            sigma.pop();
            taken[j] = false;
        }
    }
    false
}

/// Exact constancy of the signature function, equality of the constant with
/// `Σ ε(p)`, and vanishing when the dimension is not divisible by 4.
pub fn check_signature(data: &FixedPointData) -> CheckReport {
    let verdict = signature_exact(data);
    let kind = CheckKind::SignatureConstant;
    match &verdict {
        SignatureVerdict::NonConstant { witness_degree } => {
            let message = format!("signature function is not constant (first discrepancy at t^{witness_degree})");
            CheckReport::new(kind, CheckVerdict::Fail, Witness::Signature { verdict }, message)
        }
        SignatureVerdict::Constant { value } => {
            let expected = signature_value(data);
            let odd_arity = data.arity().is_some_and(|n| n % 2 == 1);
            let message;
            let outcome = if *value != expected {
                message = format!("constant {value} differs from the sum of signs {expected}");
                CheckVerdict::Fail
            } else if odd_arity && !value.is_zero() {
                message = format!("signature {value} must vanish in dimension not divisible by 4");
                CheckVerdict::Fail
            } else {
                message = format!("signature function is the constant {value}");
                CheckVerdict::Pass
            };
            CheckReport::new(kind, outcome, Witness::Signature { verdict }, message)
        }
    }
}

/// Aggregate of a suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub reports: Vec<CheckReport>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckReport> {
        self.reports.iter().filter(|r| r.failed())
    }
}

/// Weights tested for congruence pairings when none are given explicitly:
/// every distinct weight value of the data.
pub fn default_pair_weights(data: &FixedPointData) -> Vec<u64> {
    data.distinct_weights()
}

pub fn run_all(data: &FixedPointData, weights_to_pair: &[u64]) -> SuiteReport {
    let mut reports = vec![
        check_abbv(data),
        check_weight_parity(data),
        check_parity_dimension(data),
        check_smallest_weights(data),
        check_uniform_weight_balance(data),
    ];
    let mut pair_weights = weights_to_pair.to_vec();
    pair_weights.sort_unstable();
    pair_weights.dedup();
    reports.extend(pair_weights.iter().map(|&w| check_congruence_pairing(data, w)));
    reports.push(check_signature(data));
    let passed = reports.iter().all(|r| !r.failed());
    SuiteReport { reports, passed }
}

/// Whether [`run_all`] would pass, stopping at the first failure. Cheap
/// checks run first, so most failing data never reaches the series.
pub fn passes_all(data: &FixedPointData, weights_to_pair: &[u64]) -> bool {
    let cheap: [fn(&FixedPointData) -> CheckReport; 5] = [
        check_weight_parity,
        check_parity_dimension,
        check_smallest_weights,
        check_uniform_weight_balance,
        check_abbv,
    ];
    cheap.iter().all(|check| !check(data).failed())
        && weights_to_pair
            .iter()
            .all(|&w| !check_congruence_pairing(data, w).failed())
        && !check_signature(data).failed()
}

/// [`run_all`] with [`default_pair_weights`].
pub fn run_default(data: &FixedPointData) -> SuiteReport {
    run_all(data, &default_pair_weights(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn data(pairs: &[(i64, &[u64])]) -> FixedPointData {
        FixedPointData::from_pairs(pairs).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn spheres() -> FixedPointData {
        data(&[(1, &[7, 2, 3]), (-1, &[7, 2, 3]), (1, &[5, 2, 3]), (-1, &[5, 2, 3])])
    }

    fn cp3_111() -> FixedPointData {
        data(&[(1, &[1, 2, 3]), (-1, &[1, 1, 2]), (1, &[1, 1, 2]), (-1, &[1, 2, 3])])
    }

    /// Independent route: sum of fractions in i128 over the lcm of the
    /// products.
    fn abbv_i128(d: &FixedPointData) -> (i128, i128) {
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let prods: Vec<i128> = d
            .points()
            .iter()
            .map(|p| p.weights().iter().map(|&w| w as i128).product())
            .collect();
        let l = prods.iter().fold(1i128, |acc, &x| acc / gcd(acc, x) * x);
        let num: i128 = d
            .points()
            .iter()
            .zip(&prods)
            .map(|(p, &x)| p.sign().value() as i128 * (l / x))
            .sum();
        let g = gcd(num, l).max(1);
        (num / g, l / g)
    }

    fn verify_pair(d: &FixedPointData, w: u64, pw: &PairWitness) {
        let p = normal_weights(&d.points()[pw.p], w);
        let q = normal_weights(&d.points()[pw.q], w);
        let mut seen = pw.sigma.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..q.len()).collect::<Vec<_>>());
        for i in 0..p.len() {
            let lhs = p[i] as i64;
            let rhs = pw.nu[i] as i64 * q[pw.sigma[i]] as i64;
            assert_eq!((lhs - rhs).rem_euclid(w as i64), 0);
        }
        let negatives = pw.nu.iter().filter(|&&s| s < 0).count();
        let sp = d.points()[pw.p].sign();
        let sq = d.points()[pw.q].sign();
        assert_eq!(sp, sq * Sign::parity(negatives + 1));
    }

    #[test]
    fn abbv_examples() {
        assert_eq!(abbv_integral_one(&cp3_111()), rat(0, 1));
        let case_iii = data(&[(1, &[3, 5, 1]), (1, &[3, 4, 2]), (-1, &[5, 4, 2]), (-1, &[1, 2, 2])]);
        assert_eq!(abbv_i128(&case_iii), (-1, 6));
        assert_eq!(abbv_integral_one(&case_iii), rat(-1, 6));
        assert!(check_abbv(&case_iii).failed());
        assert_eq!(abbv_integral_one(&data(&[(1, &[4, 9, 10]), (-1, &[4, 9, 10])])), rat(0, 1));
    }

    #[test]
    fn weight_parity_examples() {
        assert!(check_weight_parity(&spheres()).passed());
        let r = check_weight_parity(&data(&[(1, &[1, 2, 3]), (-1, &[1, 2, 4])]));
        assert!(r.failed());
        assert_eq!(r.witness, Witness::OddWeights { weights: vec![3, 4] });
        assert!(check_weight_parity(&FixedPointData::empty()).passed());
    }

    #[test]
    fn parity_dimension_examples() {
        let three = |n: usize| {
            FixedPointData::new(
                (0..3)
                    .map(|_| FixedPointDatum::new(Sign::Plus, vec![1; n]).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        assert!(check_parity_dimension(&three(2)).passed());
        assert!(check_parity_dimension(&three(3)).failed());
        assert!(check_parity_dimension(&spheres()).passed());
    }

    #[test]
    fn smallest_weights_examples() {
        // CP^2(a, b) at a few parameters
        for (a, b) in [(1u64, 1u64), (1, 2), (2, 3), (3, 1)] {
            let d = data(&[(1, &[a, a + b]), (-1, &[a, b]), (1, &[b, a + b])]);
            let r = check_smallest_weights(&d);
            assert!(r.passed(), "{d}: {r}");
        }
        let r = check_smallest_weights(&data(&[(1, &[1, 2, 3]), (-1, &[2, 2, 3])]));
        assert!(r.failed());
        assert!(r.message.contains("a1 = 1") && r.message.contains("b1 = 2"));
        assert!(check_smallest_weights(&data(&[(1, &[1, 1, 5]), (-1, &[1, 1, 7])])).passed());
        assert_eq!(
            check_smallest_weights(&data(&[(1, &[1, 2]), (1, &[1, 2])])).verdict,
            CheckVerdict::Inapplicable
        );
        // multiplicity clause: a2 = 2 appears twice on the plus side only
        let r = check_smallest_weights(&data(&[(1, &[1, 2, 2]), (-1, &[1, 2, 5])]));
        assert!(r.failed(), "{r}");
    }

    #[test]
    fn uniform_balance_examples() {
        assert!(check_uniform_weight_balance(&data(&[(1, &[2, 2, 2]), (-1, &[2, 2, 2])])).passed());
        assert!(check_uniform_weight_balance(&data(&[(1, &[2, 2, 2]), (1, &[2, 2, 2])])).failed());
        assert_eq!(check_uniform_weight_balance(&spheres()).verdict, CheckVerdict::Inapplicable);
    }

    #[test]
    fn congruence_pairing_examples() {
        let s6 = data(&[(1, &[2, 3, 7]), (-1, &[2, 3, 7])]);
        let r = check_congruence_pairing(&s6, 7);
        assert!(r.passed(), "{r}");

        let r = check_congruence_pairing(&cp3_111(), 3);
        assert!(r.passed(), "{r}");
        match &r.witness {
            Witness::Pairing { pairs } => {
                assert_eq!(pairs.len(), 1);
                assert_eq!((pairs[0].p, pairs[0].q), (0, 3));
                verify_pair(&cp3_111(), 3, &pairs[0]);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        assert!(check_congruence_pairing(&data(&[(1, &[1, 5]), (1, &[2, 5])]), 5).failed());

        // 6 is a proper multiple of 3
        let r = check_congruence_pairing(&data(&[(1, &[1, 3, 6]), (-1, &[1, 3, 6])]), 3);
        assert_eq!(r.verdict, CheckVerdict::Inapplicable);
        // weight 2 twice at one point
        let r = check_congruence_pairing(&data(&[(1, &[1, 2, 2]), (-1, &[1, 2, 2])]), 2);
        assert_eq!(r.verdict, CheckVerdict::Inapplicable);
        // odd number of carriers
        let r = check_congruence_pairing(&data(&[(1, &[1, 5]), (-1, &[1, 3]), (1, &[3, 5]), (1, &[5, 7])]), 5);
        assert!(r.failed());
    }

    #[test]
    fn congruence_pairing_weight_one() {
        let balanced = data(&[(1, &[1, 1, 1]), (-1, &[1, 1, 1]), (-1, &[1, 1, 1]), (1, &[1, 1, 1])]);
        assert!(check_congruence_pairing(&balanced, 1).passed());
        let unbalanced = data(&[(1, &[1, 1]), (1, &[1, 1])]);
        assert!(check_congruence_pairing(&unbalanced, 1).failed());
        // weights other than 1 are proper multiples of 1
        let cp2 = data(&[(1, &[1, 2]), (-1, &[1, 1]), (1, &[1, 2])]);
        assert_eq!(check_congruence_pairing(&cp2, 1).verdict, CheckVerdict::Inapplicable);
    }

    #[test]
    fn run_all_examples() {
        let r = run_default(&cp3_111());
        assert!(r.passed, "{:?}", r.failures().collect::<Vec<_>>());
        let bad = data(&[(1, &[2, 4, 1]), (1, &[2, 3, 1]), (-1, &[4, 3, 2]), (-1, &[1, 1, 2])]);
        assert_eq!(abbv_i128(&bad), (-1, 4));
        let r = run_default(&bad);
        assert!(!r.passed);
        let abbv = r.reports.iter().find(|c| c.check == CheckKind::AbbvIntegralOne).unwrap();
        assert_eq!(abbv.witness, Witness::Rational { value: rat(-1, 4) });
        assert!(run_default(&FixedPointData::empty()).passed);
    }

    #[test]
    fn signature_check_rejects_nonzero_in_dim_2_mod_4() {
        // constant signature 2 in dimension 2: two positive points of weight 1
        let d = data(&[(1, &[1]), (1, &[1])]);
        assert!(check_signature(&d).failed());
        // CP^2 has signature 1 in dimension 4
        assert!(check_signature(&data(&[(1, &[1, 2]), (-1, &[1, 1]), (1, &[1, 2])])).passed());
    }

    fn arb_data() -> impl Strategy<Value = FixedPointData> {
        (1usize..=3).prop_flat_map(|n| {
            prop::collection::vec((any::<bool>(), prop::collection::vec(1u64..=6, n)), 0..=5)
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

    fn arb_ones() -> impl Strategy<Value = FixedPointData> {
        (1usize..=3, prop::collection::vec(any::<bool>(), 1..=6)).prop_map(|(n, signs)| {
            FixedPointData::new(
                signs
                    .into_iter()
                    .map(|plus| {
                        let sign = if plus { Sign::Plus } else { Sign::Minus };
                        FixedPointDatum::new(sign, vec![1; n]).unwrap()
                    })
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn short_circuit_agrees_with_full_suite(x in arb_data()) {
            let doubled = x.disjoint_union(&x.reverse_orientation()).unwrap();
            for d in [x, doubled] {
                let w = default_pair_weights(&d);
                prop_assert_eq!(passes_all(&d, &w), run_all(&d, &w).passed);
            }
        }
    }

    proptest! {
        #[test]
        fn abbv_additive_and_odd_under_reversal(x in arb_data(), y in arb_data()) {
            prop_assert_eq!(abbv_integral_one(&x.reverse_orientation()), -abbv_integral_one(&x));
            if let Ok(u) = x.disjoint_union(&y) {
                prop_assert_eq!(abbv_integral_one(&u), abbv_integral_one(&x) + abbv_integral_one(&y));
            }
        }

        #[test]
        fn abbv_matches_i128_route(x in arb_data()) {
            let (n, d) = abbv_i128(&x);
            prop_assert_eq!(abbv_integral_one(&x), rat(n as i64, d as i64));
        }

        #[test]
        fn parity_invariant_under_reversal_and_permutation(x in arb_data(), seed in any::<u64>()) {
            let mut pts = x.points().to_vec();
            let len = pts.len();
            if len > 1 {
                pts.rotate_left((seed as usize) % len);
            }
            let permuted = FixedPointData::new(pts).unwrap();
            let base = check_weight_parity(&x);
            prop_assert_eq!(check_weight_parity(&x.reverse_orientation()).verdict, base.verdict);
            prop_assert_eq!(check_weight_parity(&permuted), base);
        }

        #[test]
        fn weight_one_pairing_is_sign_balance(x in arb_ones()) {
            let balanced = x.count_sign(Sign::Plus) == x.count_sign(Sign::Minus);
            prop_assert_eq!(check_congruence_pairing(&x, 1).passed(), balanced);
            prop_assert_eq!(check_congruence_pairing(&x, 1).failed(), !balanced);
        }
    }
}
