//! Canonical data model for fixed-point data.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Sign of a fixed point: whether the manifold orientation agrees with the
/// orientation induced by the weight decomposition of the tangent space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_int(value: i64) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    /// `(-1)^count`, as a sign.
    pub fn parity(count: usize) -> Sign {
        if count.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i32(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Sign, D::Error> {
        let value = i64::deserialize(deserializer)?;
        Sign::from_int(value)
            .ok_or_else(|| serde::de::Error::custom(format!("sign must be 1 or -1, got {value}")))
    }
}

/// One fixed point: a sign and a multiset of positive weights, kept sorted
/// ascending so that equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDatum")]
pub struct FixedPointDatum {
    sign: Sign,
    weights: Vec<u64>,
}

#[derive(Deserialize)]
struct RawDatum {
    sign: Sign,
    weights: Vec<u64>,
}

impl TryFrom<RawDatum> for FixedPointDatum {
    type Error = Error;

    fn try_from(raw: RawDatum) -> Result<Self> {
        FixedPointDatum::new(raw.sign, raw.weights)
    }
}

impl FixedPointDatum {
    pub fn new(sign: Sign, mut weights: Vec<u64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput(
                "a fixed point needs at least one weight".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeight);
        }
        weights.sort_unstable();
        Ok(FixedPointDatum { sign, weights })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Weights in ascending order.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    pub fn with_sign(&self, sign: Sign) -> Self {
        FixedPointDatum {
            sign,
            weights: self.weights.clone(),
        }
    }

    pub fn weight_product(&self) -> BigInt {
        self.weights.iter().map(|&w| BigInt::from(w)).product()
    }

    pub fn multiplicity(&self, weight: u64) -> usize {
        self.weights.iter().filter(|&&w| w == weight).count()
    }
}

impl fmt::Display for FixedPointDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}", self.sign)?;
        for w in &self.weights {
            write!(f, ",{w}")?;
        }
        write!(f, "}}")
    }
}

/// A sign together with a multiset of nonzero integers, modulo negating one
/// entry while flipping the sign.
///
/// The stored representative is kept as given; equality, ordering and
/// hashing go through the canonical representative.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawClass")]
pub struct SignedDatumClass {
    sign: Sign,
    weights: Vec<i128>,
}

#[derive(Deserialize)]
struct RawClass {
    sign: Sign,
    weights: Vec<i128>,
}

impl TryFrom<RawClass> for SignedDatumClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        SignedDatumClass::new(raw.sign, raw.weights)
    }
}

impl SignedDatumClass {
    pub fn new(sign: Sign, weights: Vec<i128>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInput(
                "a fixed point needs at least one weight".into(),
            ));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeight);
        }
        Ok(SignedDatumClass { sign, weights })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn weights(&self) -> &[i128] {
        &self.weights
    }

    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    /// All weights positive and sorted; the sign absorbs one flip per
    /// negated entry.
    pub fn canonical(&self) -> SignedDatumClass {
        let negatives = self.weights.iter().filter(|&&w| w < 0).count();
        let mut weights: Vec<i128> = self.weights.iter().map(|w| w.abs()).collect();
        weights.sort_unstable();
        SignedDatumClass {
            sign: self.sign * Sign::parity(negatives),
            weights,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.weights.iter().all(|&w| w > 0) && self.weights.windows(2).all(|p| p[0] <= p[1])
    }

    /// The class as a datum with positive weights. Fails only when a weight
    /// does not fit in `u64`.
    pub fn to_datum(&self) -> Result<FixedPointDatum> {
        let canonical = self.canonical();
        let weights = canonical
            .weights
            .iter()
            .map(|&w| u64::try_from(w).map_err(|_| Error::InvalidInput(format!("weight {w} out of range"))))
            .collect::<Result<Vec<_>>>()?;
        FixedPointDatum::new(canonical.sign, weights)
    }

    fn key(&self) -> (Sign, Vec<i128>) {
        let c = self.canonical();
        (c.sign, c.weights)
    }
}

impl From<&FixedPointDatum> for SignedDatumClass {
    fn from(datum: &FixedPointDatum) -> Self {
        SignedDatumClass {
            sign: datum.sign,
            weights: datum.weights.iter().map(|&w| w as i128).collect(),
        }
    }
}

impl PartialEq for SignedDatumClass {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for SignedDatumClass {}

impl Hash for SignedDatumClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for SignedDatumClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedDatumClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for SignedDatumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.sign)?;
        for w in &self.weights {
            write!(f, ",{w}")?;
        }
        write!(f, "]")
    }
}

/// Canonical representative of `(sign, weights)`.
pub fn canonicalize(sign: Sign, weights: Vec<i128>) -> Result<SignedDatumClass> {
    Ok(SignedDatumClass::new(sign, weights)?.canonical())
}

/// Real fixed-point datum of a point whose weights are known as a complex
/// representation: the sign is `(-1)^(number of negative weights)`.
pub fn from_complex_weights(weights: &[i128]) -> Result<FixedPointDatum> {
    SignedDatumClass::new(Sign::Plus, weights.to_vec())?.to_datum()
}

/// The fixed-point data of a whole manifold: a multiset of data of uniform
/// arity. Point identifiers are indices in presentation order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawData")]
pub struct FixedPointData {
    points: Vec<FixedPointDatum>,
}

#[derive(Deserialize)]
struct RawData {
    points: Vec<FixedPointDatum>,
}

impl TryFrom<RawData> for FixedPointData {
    type Error = Error;

    fn try_from(raw: RawData) -> Result<Self> {
        FixedPointData::new(raw.points)
    }
}

impl FixedPointData {
    pub fn new(points: Vec<FixedPointDatum>) -> Result<Self> {
        if let Some(first) = points.first() {
            let n = first.arity();
            if let Some(bad) = points.iter().find(|p| p.arity() != n) {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: bad.arity(),
                });
            }
        }
        Ok(FixedPointData { points })
    }

    pub fn empty() -> Self {
        FixedPointData::default()
    }

    /// Builds data from `(sign, weights)` pairs, `sign` being `1` or `-1`.
    pub fn from_pairs(pairs: &[(i64, &[u64])]) -> Result<Self> {
        let points = pairs
            .iter()
            .map(|&(s, ws)| {
                let sign = Sign::from_int(s)
                    .ok_or_else(|| Error::InvalidInput(format!("sign must be 1 or -1, got {s}")))?;
                FixedPointDatum::new(sign, ws.to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        FixedPointData::new(points)
    }

    pub fn points(&self) -> &[FixedPointDatum] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Common number of weights per point; `None` for empty data.
    pub fn arity(&self) -> Option<usize> {
        self.points.first().map(FixedPointDatum::arity)
    }

    /// Manifold dimension `2n`; `None` for empty data.
    pub fn dimension(&self) -> Option<usize> {
        self.arity().map(|n| 2 * n)
    }

    pub fn disjoint_union(&self, other: &FixedPointData) -> Result<FixedPointData> {
        if let (Some(left), Some(right)) = (self.arity(), other.arity()) {
            if left != right {
                return Err(Error::DimensionMismatch { left, right });
            }
        }
        let mut points = self.points.clone();
        points.extend(other.points.iter().cloned());
        Ok(FixedPointData { points })
    }

    pub fn reverse_orientation(&self) -> FixedPointData {
        FixedPointData {
            points: self.points.iter().map(|p| p.with_sign(-p.sign())).collect(),
        }
    }

    /// Points sorted, giving a representative of the multiset.
    pub fn sorted_points(&self) -> Vec<FixedPointDatum> {
        let mut points = self.points.clone();
        points.sort();
        points
    }

    pub fn canonical(&self) -> FixedPointData {
        FixedPointData {
            points: self.sorted_points(),
        }
    }

    pub fn multiset_eq(&self, other: &FixedPointData) -> bool {
        self.len() == other.len() && self.sorted_points() == other.sorted_points()
    }

    /// Weights over all points of the given sign, ascending.
    pub fn weights_with_sign(&self, sign: Sign) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .points
            .iter()
            .filter(|p| p.sign() == sign)
            .flat_map(|p| p.weights().iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Every weight over every point, ascending.
    pub fn all_weights(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .points
            .iter()
            .flat_map(|p| p.weights().iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Distinct weight values, ascending.
    pub fn distinct_weights(&self) -> Vec<u64> {
        let mut out = self.all_weights();
        out.dedup();
        out
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.points.iter().filter_map(|p| p.weights().last().copied()).max()
    }

    pub fn count_sign(&self, sign: Sign) -> usize {
        self.points.iter().filter(|p| p.sign() == sign).count()
    }
}

impl fmt::Display for FixedPointData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
