//! Decision procedures for the known classifications: two fixed points,
//! dimension four, and dimension six with four fixed points.
//!
//! Every positive verdict is checked by substituting its parameters (or
//! replaying its trace) and comparing with the input as a multiset.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::constraints::{run_default, CheckReport};
use crate::data::{FixedPointData, FixedPointDatum, Sign};
use crate::error::{Error, Result};
use crate::generators::gen_cp3;

/// Two rotation pairs `{±,a,b,c}` and `{±,d,e,f}`. Each triple is sorted
/// and `(a,b,c) <= (d,e,f)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Case1Params {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub e: u64,
    pub f: u64,
}

impl Case1Params {
    fn from_triples(x: &[u64], y: &[u64]) -> Self {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        Case1Params {
            a: lo[0],
            b: lo[1],
            c: lo[2],
            d: hi[0],
            e: hi[1],
            f: hi[2],
        }
    }

    pub fn template(&self) -> FixedPointData {
        let first = [self.a, self.b, self.c];
        let second = [self.d, self.e, self.f];
        let pt = |s: Sign, w: &[u64]| FixedPointDatum::new(s, w.to_vec()).expect("positive parameters");
        FixedPointData::new(vec![
            pt(Sign::Plus, &first),
            pt(Sign::Minus, &first),
            pt(Sign::Plus, &second),
            pt(Sign::Minus, &second),
        ])
        .expect("uniform arity")
    }
}

/// Parameters of the linear `CP^3` template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Case2Params {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl Case2Params {
    pub fn template(&self) -> FixedPointData {
        gen_cp3(self.a, self.b, self.c).expect("positive parameters")
    }
}

/// One forward step of the four-dimensional construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum GrammarStep {
    /// Add `{+,a,b}` and `{-,a,b}` with `gcd(a,b) = 1`.
    AddPair { a: u64, b: u64 },
    /// Replace `{+,c,d}` by `{+,c,c+d}` and `{+,d,c+d}`.
    SplitPositive { c: u64, d: u64 },
    /// Replace `{-,e,f}` by `{-,e,e+f}` and `{-,f,e+f}`.
    SplitNegative { e: u64, f: u64 },
}

impl fmt::Display for GrammarStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GrammarStep::AddPair { a, b } => write!(f, "add {{+,{a},{b}}} and {{-,{a},{b}}}"),
            GrammarStep::SplitPositive { c, d } => {
                write!(f, "replace {{+,{c},{d}}} by {{+,{c},{}}} and {{+,{d},{}}}", c + d, c + d)
            }
            GrammarStep::SplitNegative { e, f: g } => {
                write!(f, "replace {{-,{e},{g}}} by {{-,{e},{}}} and {{-,{g},{}}}", e + g, e + g)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Case1 {
        params: Case1Params,
    },
    Case2 {
        params: Case2Params,
    },
    TwoPointRotation {
        weights: Vec<u64>,
    },
    FourDimReachable {
        /// Forward steps from the empty collection.
        trace: Vec<GrammarStep>,
        /// Common divisor removed from all weights before the search.
        #[serde(skip_serializing_if = "Option::is_none")]
        normalized_by: Option<u64>,
    },
    NotInClassification {
        reason: String,
        failed_checks: Vec<CheckReport>,
    },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Case1 { params: p } => write!(
                f,
                "Case1 (a,b,c,d,e,f) = ({},{},{},{},{},{})",
                p.a, p.b, p.c, p.d, p.e, p.f
            ),
            Verdict::Case2 { params: p } => write!(f, "Case2 (a,b,c) = ({},{},{})", p.a, p.b, p.c),
            Verdict::TwoPointRotation { weights } => write!(f, "TwoPointRotation {weights:?}"),
            Verdict::FourDimReachable { trace, normalized_by } => {
                write!(f, "FourDimReachable in {} steps", trace.len())?;
                if let Some(g) = normalized_by {
                    write!(f, " (weights divided by {g})")?;
                }
                Ok(())
            }
            Verdict::NotInClassification { reason, .. } => write!(f, "NotInClassification: {reason}"),
        }
    }
}

/// All verdicts that apply to one input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub matches: Vec<Verdict>,
}

impl Classification {
    fn single(v: Verdict) -> Self {
        Classification { matches: vec![v] }
    }

    pub fn is_classified(&self) -> bool {
        !self
            .matches
            .iter()
            .any(|v| matches!(v, Verdict::NotInClassification { .. }))
    }

    pub fn case1(&self) -> Vec<Case1Params> {
        self.matches
            .iter()
            .filter_map(|v| match v {
                Verdict::Case1 { params } => Some(*params),
                _ => None,
            })
            .collect()
    }

    pub fn case2(&self) -> Vec<Case2Params> {
        self.matches
            .iter()
            .filter_map(|v| match v {
                Verdict::Case2 { params } => Some(*params),
                _ => None,
            })
            .collect()
    }

    /// Short label such as `Case1+Case2` or `NotInClassification`.
    pub fn label(&self) -> String {
        let mut names: Vec<&str> = self
            .matches
            .iter()
            .map(|v| match v {
                Verdict::Case1 { .. } => "Case1",
                Verdict::Case2 { .. } => "Case2",
                Verdict::TwoPointRotation { .. } => "TwoPointRotation",
                Verdict::FourDimReachable { .. } => "FourDimReachable",
                Verdict::NotInClassification { .. } => "NotInClassification",
            })
            .collect();
        names.dedup();
        names.join("+")
    }
}

fn not_classified(data: &FixedPointData, reason: impl Into<String>) -> Classification {
    let failed_checks = run_default(data).failures().cloned().collect();
    Classification::single(Verdict::NotInClassification {
        reason: reason.into(),
        failed_checks,
    })
}

pub fn classify_two_fixed_points(data: &FixedPointData) -> Result<Classification> {
    if data.len() != 2 {
        return Err(Error::InvalidInput(format!("expected 2 fixed points, found {}", data.len())));
    }
    let (p, q) = (&data.points()[0], &data.points()[1]);
    if p.weights() != q.weights() {
        return Ok(not_classified(data, "weights at the two points differ"));
    }
    if p.sign() == q.sign() {
        return Ok(not_classified(data, "the two points have the same sign"));
    }
    let verdict = Verdict::TwoPointRotation {
        weights: p.weights().to_vec(),
    };
    assert!(
        FixedPointData::new(vec![
            FixedPointDatum::new(Sign::Plus, p.weights().to_vec())?,
            FixedPointDatum::new(Sign::Minus, p.weights().to_vec())?,
        ])?
        .multiset_eq(data),
        "two-point substitution must reproduce the input"
    );
    Ok(Classification::single(verdict))
}

/// Case 1 parameter sets: partitions of the points into two pairs of
/// opposite signs and equal weights.
pub fn case1_matches(data: &FixedPointData) -> Vec<Case1Params> {
    if data.len() != 4 || data.arity() != Some(3) {
        return Vec::new();
    }
    let pts = data.points();
    let rotation = |i: usize, j: usize| pts[i].weights() == pts[j].weights() && pts[i].sign() != pts[j].sign();
    let mut out: Vec<Case1Params> = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
        .into_iter()
        .filter(|&((i, j), (k, l))| rotation(i, j) && rotation(k, l))
        .map(|((i, _), (k, _))| Case1Params::from_triples(pts[i].weights(), pts[k].weights()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Case 2 parameter sets. The template point `{+,a,a+b,a+b+c}` is one of
/// the positive points, so each positive point proposes at most one
/// candidate.
pub fn case2_matches(data: &FixedPointData) -> Vec<Case2Params> {
    if data.len() != 4 || data.arity() != Some(3) {
        return Vec::new();
    }
    let mut out: Vec<Case2Params> = data
        .points()
        .iter()
        .filter(|p| p.sign().is_plus())
        .filter_map(|p| {
            let w = p.weights();
            let (a, b, c) = (w[0], w[1].checked_sub(w[0])?, w[2].checked_sub(w[1])?);
            (b > 0 && c > 0).then_some(Case2Params { a, b, c })
        })
        .filter(|params| params.template().multiset_eq(data))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn classify_6d4fp(data: &FixedPointData) -> Result<Classification> {
    if data.len() != 4 || data.arity() != Some(3) {
        return Err(Error::InvalidInput(format!(
            "expected 4 fixed points of arity 3, found {} of arity {}",
            data.len(),
            data.arity().unwrap_or(0)
        )));
    }
    let mut matches = Vec::new();
    for params in case1_matches(data) {
        assert!(params.template().multiset_eq(data), "Case1 substitution must reproduce the input");
        matches.push(Verdict::Case1 { params });
    }
    for params in case2_matches(data) {
        assert!(params.template().multiset_eq(data), "Case2 substitution must reproduce the input");
        matches.push(Verdict::Case2 { params });
    }
    if matches.is_empty() {
        return Ok(not_classified(data, "matches neither Case 1 nor Case 2"));
    }
    Ok(Classification { matches })
}

type Entry = (Sign, u64, u64);

fn to_entries(data: &FixedPointData, divisor: u64) -> Vec<Entry> {
    let mut out: Vec<Entry> = data
        .points()
        .iter()
        .map(|p| (p.sign(), p.weights()[0] / divisor, p.weights()[1] / divisor))
        .collect();
    out.sort();
    out
}

/// Replays forward steps from the empty collection.
pub fn replay_grammar(trace: &[GrammarStep]) -> Result<FixedPointData> {
    let mut entries: Vec<Entry> = Vec::new();
    let norm = |s: Sign, x: u64, y: u64| (s, x.min(y), x.max(y));
    for step in trace {
        match *step {
            GrammarStep::AddPair { a, b } => {
                if a == 0 || b == 0 || a.gcd(&b) != 1 {
                    return Err(Error::InvalidInput(format!("step adds a non-coprime pair ({a},{b})")));
                }
                entries.push(norm(Sign::Plus, a, b));
                entries.push(norm(Sign::Minus, a, b));
            }
            GrammarStep::SplitPositive { c: x, d: y } | GrammarStep::SplitNegative { e: x, f: y } => {
                let sign = if matches!(step, GrammarStep::SplitPositive { .. }) {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                let target = norm(sign, x, y);
                let pos = entries
                    .iter()
                    .position(|e| *e == target)
                    .ok_or_else(|| Error::InvalidInput(format!("step replaces absent {target:?}")))?;
                entries.remove(pos);
                entries.push(norm(sign, x, x + y));
                entries.push(norm(sign, y, x + y));
            }
        }
    }
    FixedPointData::new(
        entries
            .into_iter()
            .map(|(s, x, y)| FixedPointDatum::new(s, vec![x, y]))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Membership in the four-dimensional construction, decided by a complete
/// backtracking search over reverse steps. Every reverse step lowers the
/// total weight, so the search terminates.
///
/// With `effective` the weights must already have gcd 1; otherwise they are
/// divided by their gcd first and the divisor is recorded.
pub fn membership_4d(data: &FixedPointData, effective: bool) -> Result<Classification> {
    if data.is_empty() {
        return Ok(Classification::single(Verdict::FourDimReachable {
            trace: Vec::new(),
            normalized_by: None,
        }));
    }
    if data.arity() != Some(2) {
        return Err(Error::InvalidInput(format!(
            "expected arity 2, found {}",
            data.arity().unwrap_or(0)
        )));
    }
    let g = data.all_weights().into_iter().fold(0u64, |acc, w| acc.gcd(&w));
    if effective && g != 1 {
        return Err(Error::InvalidInput(format!(
            "weights have common divisor {g}; the action is not effective"
        )));
    }
    let entries = to_entries(data, g);
    let mut failed = HashSet::new();
    let mut reverse_steps = Vec::new();
    if !reverse_search(entries.clone(), &mut failed, &mut reverse_steps) {
        return Ok(not_classified(data, "no sequence of construction steps produces the data"));
    }
    let trace: Vec<GrammarStep> = reverse_steps.into_iter().rev().collect();
    let replayed = replay_grammar(&trace)?;
    let normalized = FixedPointData::new(
        entries
            .iter()
            .map(|&(s, x, y)| FixedPointDatum::new(s, vec![x, y]))
            .collect::<Result<Vec<_>>>()?,
    )?;
    assert!(replayed.multiset_eq(&normalized), "grammar trace must reproduce the input");
    Ok(Classification::single(Verdict::FourDimReachable {
        trace,
        normalized_by: (g != 1).then_some(g),
    }))
}

fn reverse_search(state: Vec<Entry>, failed: &mut HashSet<Vec<Entry>>, steps: &mut Vec<GrammarStep>) -> bool {
    if state.is_empty() {
        return true;
    }
    if failed.contains(&state) {
        return false;
    }
    for (step, next) in reverse_moves(&state) {
        steps.push(step);
        if reverse_search(next, failed, steps) {
            return true;
        }
        steps.pop();
    }
    failed.insert(state);
    false
}

/// Reverse moves in search order: pair removals first, then merges by
/// descending shared weight.
fn reverse_moves(state: &[Entry]) -> Vec<(GrammarStep, Vec<Entry>)> {
    let without = |skip: &[usize], add: Option<Entry>| {
        let mut next: Vec<Entry> = state
            .iter()
            .enumerate()
            .filter(|(i, _)| !skip.contains(i))
            .map(|(_, e)| *e)
            .collect();
        next.extend(add);
        next.sort();
        next
    };

    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (i, &(s, x, y)) in state.iter().enumerate() {
        if s != Sign::Plus || x.gcd(&y) != 1 || !seen.insert((x, y)) {
            continue;
        }
        if let Some(j) = state.iter().position(|&e| e == (Sign::Minus, x, y)) {
            out.push((GrammarStep::AddPair { a: x, b: y }, without(&[i, j], None)));
        }
    }

    let mut merges = Vec::new();
    let mut seen = HashSet::new();
    for (i, &(s, lo, hi)) in state.iter().enumerate() {
        if lo >= hi {
            continue;
        }
        let partner = (s, (hi - lo).min(hi), hi);
        let partner = (partner.0, partner.1.min(partner.2), partner.1.max(partner.2));
        let Some(j) = state
            .iter()
            .enumerate()
            .position(|(k, &e)| k != i && e == partner)
        else {
            continue;
        };
        let (c, d) = (lo.min(hi - lo), lo.max(hi - lo));
        if !seen.insert((s, c, d)) {
            continue;
        }
        let step = if s == Sign::Plus {
            GrammarStep::SplitPositive { c, d }
        } else {
            GrammarStep::SplitNegative { e: c, f: d }
        };
        merges.push((hi, step, without(&[i, j], Some((s, c, d)))));
    }
    merges.sort_by_key(|m| std::cmp::Reverse(m.0));
    out.extend(merges.into_iter().map(|(_, step, next)| (step, next)));
    out
}

/// Dispatches on shape: two points, arity 2, or four points of arity 3.
pub fn classify(data: &FixedPointData, effective: bool) -> Result<Classification> {
    match (data.len(), data.arity()) {
        (2, _) => classify_two_fixed_points(data),
        (_, Some(2)) | (0, None) => membership_4d(data, effective),
        (4, Some(3)) => classify_6d4fp(data),
        (n, a) => Err(Error::InvalidInput(format!(
            "no classifier for {n} points of arity {}",
            a.unwrap_or(0)
        ))),
    }
}
