//! Exhaustive enumeration of small fixed-point data, used to cross-check the
//! classifier against the necessary conditions.
//!
//! Candidates are multisets of points, so data differing only by the order
//! of points is enumerated once. Weights are not rescaled.

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{case1_matches, case2_matches, classify};
use crate::constraints::{default_pair_weights, passes_all};
use crate::data::{FixedPointData, FixedPointDatum, Sign};
use crate::error::{Error, Result};
use crate::io::to_text;
use crate::multigraph::{figure1_tags, Figure1Tag};

pub const DEFAULT_WEIGHT_CAP: u64 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub points: usize,
    pub arity: usize,
    pub max_weight: u64,
    pub weight_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            points: 4,
            arity: 3,
            max_weight: 2,
            weight_cap: DEFAULT_WEIGHT_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    /// Points in canonical order, as `+1.2.3 -1.2.3 ...`.
    pub data: String,
    pub checks_passed: bool,
    pub figure1_tags: Vec<Figure1Tag>,
    /// Classification label, or `-` when no classifier handles the shape.
    pub classification: String,
}

impl OracleRow {
    /// Passes every check and has an admissible graph of one of the five
    /// shapes.
    pub fn is_survivor(&self) -> bool {
        self.checks_passed && !self.figure1_tags.is_empty()
    }

    pub fn is_unclassified_survivor(&self) -> bool {
        self.is_survivor() && self.classification == "NotInClassification"
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleSummary {
    pub candidates: usize,
    pub passed_checks: usize,
    pub survivors: usize,
    pub unclassified_survivors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub points: usize,
    pub arity: usize,
    pub max_weight: u64,
    pub summary: OracleSummary,
    pub rows: Vec<OracleRow>,
}

impl OracleReport {
    pub fn survivors(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| r.is_survivor())
    }
}

fn compact(data: &FixedPointData) -> String {
    to_text(data)
        .lines()
        .map(|line| {
            let mut parts = line.split_whitespace();
            let sign = parts.next().unwrap_or("");
            format!("{sign}{}", parts.collect::<Vec<_>>().join("."))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Sorted weight vectors of the given length with entries in `1..=max`.
fn weight_vectors(arity: usize, max: u64) -> Vec<Vec<u64>> {
    fn go(arity: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == arity {
            out.push(cur.clone());
            return;
        }
        for w in lo..=max {
            cur.push(w);
            go(arity, w, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(arity, 1, max, &mut Vec::new(), &mut out);
    out
}

/// All multisets of `points` point types, as non-decreasing index lists.
fn multisets(kinds: usize, points: usize) -> Vec<Vec<usize>> {
    fn go(kinds: usize, points: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == points {
            out.push(cur.clone());
            return;
        }
        for k in lo..kinds {
            cur.push(k);
            go(kinds, points, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(kinds, points, 0, &mut Vec::new(), &mut out);
    out
}

/// Every candidate datum of the configured shape, in canonical order.
pub fn candidates(config: &OracleConfig) -> Result<Vec<FixedPointData>> {
    if config.max_weight > config.weight_cap {
        return Err(Error::CapExceeded {
            cap: config.weight_cap as usize,
        });
    }
    if config.points == 0 || config.arity == 0 || config.max_weight == 0 {
        return Err(Error::InvalidInput("points, arity and max weight must be positive".into()));
    }
    let kinds: Vec<FixedPointDatum> = weight_vectors(config.arity, config.max_weight)
        .into_iter()
        .flat_map(|w| {
            [Sign::Plus, Sign::Minus]
                .into_iter()
                .map(move |s| FixedPointDatum::new(s, w.clone()).expect("positive weights"))
        })
        .collect();
    multisets(kinds.len(), config.points)
        .into_iter()
        .map(|idx| FixedPointData::new(idx.into_iter().map(|i| kinds[i].clone()).collect()))
        .collect()
}

fn examine(data: &FixedPointData, figure1_shape: bool) -> OracleRow {
    let checks_passed = passes_all(data, &default_pair_weights(data));
    let figure1_tags = if checks_passed && figure1_shape {
        figure1_tags(data).unwrap_or_default()
    } else {
        Vec::new()
    };
    let classification = if figure1_shape {
        // same labels as the classifier, without collecting failed checks
        match (case1_matches(data).is_empty(), case2_matches(data).is_empty()) {
            (false, false) => "Case1+Case2",
            (false, true) => "Case1",
            (true, false) => "Case2",
            (true, true) => "NotInClassification",
        }
        .to_string()
    } else {
        match classify(data, false) {
            Ok(c) => c.label(),
            Err(_) => "-".to_string(),
        }
    };
    OracleRow {
        data: compact(&data.canonical()),
        checks_passed,
        figure1_tags,
        classification,
    }
}

/// Runs the full check suite, the graph search and the classifier on every
/// candidate. Rows are sorted, so the report does not depend on scheduling.
pub fn run_oracle(config: &OracleConfig) -> Result<OracleReport> {
    let figure1_shape = config.points == 4 && config.arity == 3;
    let mut rows: Vec<OracleRow> = candidates(config)?
        .par_iter()
        .map(|d| examine(d, figure1_shape))
        .collect();
    rows.sort_by(|a, b| a.data.cmp(&b.data));
    let summary = OracleSummary {
        candidates: rows.len(),
        passed_checks: rows.iter().filter(|r| r.checks_passed).count(),
        survivors: rows.iter().filter(|r| r.is_survivor()).count(),
        unclassified_survivors: rows.iter().filter(|r| r.is_unclassified_survivor()).count(),
    };
    Ok(OracleReport {
        points: config.points,
        arity: config.arity,
        max_weight: config.max_weight,
        summary,
        rows,
    })
}
