//! Rewriting six-dimensional fixed-point data to the empty collection.
//!
//! Collections hold [`SignedDatumClass`] values, so a weight may be any
//! nonzero integer and `[s, .., -w, ..]` equals `[-s, .., w, ..]`. Five
//! operations remove a pair of classes and add a fixed list of others.
//! Every operation keeps the localization sums unchanged.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{case1_matches, case2_matches};
use crate::data::{FixedPointData, Sign, SignedDatumClass};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: usize = 12;

/// A multiset of classes of uniform arity, kept sorted by canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Collection {
    classes: Vec<SignedDatumClass>,
}

impl Collection {
    pub fn new(classes: Vec<SignedDatumClass>) -> Result<Self> {
        if let Some(first) = classes.first() {
            if let Some(bad) = classes.iter().find(|c| c.arity() != first.arity()) {
                return Err(Error::DimensionMismatch {
                    left: first.arity(),
                    right: bad.arity(),
                });
            }
        }
        let mut classes: Vec<SignedDatumClass> = classes.iter().map(SignedDatumClass::canonical).collect();
        classes.sort();
        Ok(Collection { classes })
    }

    pub fn empty() -> Self {
        Collection::default()
    }

    pub fn from_data(data: &FixedPointData) -> Self {
        Collection::new(data.points().iter().map(SignedDatumClass::from).collect())
            .expect("fixed-point data has uniform arity")
    }

    /// Back to positive-weight data.
    pub fn to_data(&self) -> Result<FixedPointData> {
        FixedPointData::new(self.classes.iter().map(|c| c.to_datum()).collect::<Result<Vec<_>>>()?)
    }

    pub fn classes(&self) -> &[SignedDatumClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn arity(&self) -> Option<usize> {
        self.classes.first().map(|c| c.arity())
    }

    pub fn count(&self, class: &SignedDatumClass) -> usize {
        self.classes.iter().filter(|c| *c == class).count()
    }

    /// Sum of the signs of the canonical representatives.
    pub fn signed_count(&self) -> i64 {
        self.classes.iter().map(|c| c.sign().value() as i64).sum()
    }

    fn contains_all(&self, wanted: &[SignedDatumClass]) -> bool {
        let mut need: HashMap<&SignedDatumClass, usize> = HashMap::new();
        for c in wanted {
            *need.entry(c).or_default() += 1;
        }
        need.into_iter().all(|(c, n)| self.count(c) >= n)
    }

    fn replace(&self, removed: &[SignedDatumClass], added: &[SignedDatumClass]) -> Collection {
        let mut classes = self.classes.clone();
        for r in removed {
            let pos = classes.iter().position(|c| c == r).expect("removed class is present");
            classes.remove(pos);
        }
        classes.extend(added.iter().cloned());
        classes.sort();
        Collection { classes }
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classes.is_empty() {
            return write!(f, "(empty)");
        }
        for (i, c) in self.classes.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// The parameters `(A, B, C)` of an operation. Unused ones are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct MoveParams {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RewriteMove {
    pub op: u8,
    /// The upper sign of `±` in the statement of the operation.
    pub orientation: Sign,
    pub params: MoveParams,
    pub removed: Vec<SignedDatumClass>,
    pub added: Vec<SignedDatumClass>,
}

impl fmt::Display for RewriteMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params;
        write!(f, "op ({}) ", self.op)?;
        match self.op {
            1 => write!(f, "(A,B,C)=({},{},{})", p.a, p.b, p.c)?,
            2 | 3 => write!(f, "{} (A,B,C)=({},{},{})", self.orientation, p.a, p.b, p.c)?,
            _ => write!(f, "{} (A,C)=({},{})", self.orientation, p.a, p.c)?,
        }
        let list = |f: &mut fmt::Formatter<'_>, xs: &[SignedDatumClass]| -> fmt::Result {
            for x in xs {
                write!(f, " {x}")?;
            }
            Ok(())
        };
        write!(f, ": remove")?;
        list(f, &self.removed)?;
        if !self.added.is_empty() {
            write!(f, "; add")?;
            list(f, &self.added)?;
        }
        Ok(())
    }
}

fn class(sign: Sign, weights: [i128; 3]) -> Option<SignedDatumClass> {
    SignedDatumClass::new(sign, weights.to_vec()).ok().map(|c| c.canonical())
}

/// Builds the move for operation `op` with upper sign `s` and parameters
/// `(A, B, C)`, or `None` when the side conditions fail or an added class
/// would contain a zero weight.
pub fn instantiate(op: u8, s: Sign, a: i128, b: i128, c: i128) -> Option<RewriteMove> {
    let t = -s;
    let (removed, added): (Vec<_>, Vec<_>) = match op {
        1 => (vec![(Sign::Plus, [a, b, c]), (Sign::Minus, [a, b, c])], vec![]),
        2 if 0 < a && a < b && b < c => (
            vec![(s, [a, b, c]), (t, [c - a, c - b, c])],
            vec![(s, [a, b - a, c - a]), (t, [b, b - a, c - b])],
        ),
        3 if 0 < a && 0 < b && a < c && b < c && a != b => (
            vec![(s, [a, b, c]), (s, [a, c - b, c])],
            vec![
                (s, [c - b, c - a, a]),
                (s, [c - b, b, a]),
                (s, [c - b, a - b, a]),
                (t, [c - a, a - b, a]),
            ],
        ),
        4 if 0 < a && a < c => (
            vec![(s, [a, a, c]), (s, [a, c - a, c])],
            vec![
                (s, [c - a, c - 2 * a, a]),
                (s, [c - a, a, a]),
                (s, [c - a, a, a]),
                (t, [c - 2 * a, a, a]),
            ],
        ),
        5 if 0 < a && a < c => (
            vec![(s, [c, a, a]), (t, [c, c - a, c - a])],
            vec![
                (s, [c - a, c - 2 * a, a]),
                (s, [c - a, a, a]),
                (s, [c - a, a, a]),
                (t, [c - 2 * a, a, a]),
                (s, [a, c - 2 * a, c - a]),
                (t, [a, c - a, c - a]),
                (t, [a, c - a, c - a]),
                (t, [c - 2 * a, c - a, c - a]),
            ],
        ),
        _ => return None,
    };
    let build = |xs: Vec<(Sign, [i128; 3])>| -> Option<Vec<SignedDatumClass>> {
        xs.into_iter().map(|(sg, w)| class(sg, w)).collect()
    };
    let (orientation, params) = match op {
        1 => (Sign::Plus, MoveParams { a, b, c }),
        4 | 5 => (s, MoveParams { a, b: 0, c }),
        _ => (s, MoveParams { a, b, c }),
    };
    Some(RewriteMove {
        op,
        orientation,
        params,
        removed: build(removed)?,
        added: build(added)?,
    })
}

/// Every instantiation of every operation whose removed classes occur in
/// `coll`, ordered by operation and then parameters.
pub fn applicable_moves(coll: &Collection) -> Result<Vec<RewriteMove>> {
    match coll.arity() {
        None => return Ok(Vec::new()),
        Some(3) => {}
        Some(n) => return Err(Error::InvalidInput(format!("rewriting needs arity 3, found {n}"))),
    }
    let mut candidates = Vec::new();
    let mut seen = HashSet::new();
    for cl in coll.classes() {
        if !seen.insert(cl.clone()) {
            continue;
        }
        let s = cl.sign();
        let w = cl.weights();
        let (x, y, z) = (w[0], w[1], w[2]);
        // The first removed class of each operation has all weights
        // positive, so it is the canonical representative itself.
        if s == Sign::Plus {
            candidates.push(instantiate(1, s, x, y, z));
        }
        candidates.push(instantiate(2, s, x, y, z));
        candidates.push(instantiate(3, s, x, y, z));
        candidates.push(instantiate(3, s, y, x, z));
        if x == y {
            candidates.push(instantiate(4, s, x, 0, z));
        }
        if x == y {
            candidates.push(instantiate(5, s, x, 0, z));
        }
    }
    let mut moves: Vec<RewriteMove> = candidates
        .into_iter()
        .flatten()
        .filter(|m| coll.contains_all(&m.removed))
        .collect();
    moves.sort_by_key(|p| (p.op, p.params, p.orientation));
    moves.dedup();
    Ok(moves)
}

/// Applies `mv`, which must be applicable and unaltered.
pub fn apply_move(coll: &Collection, mv: &RewriteMove) -> Result<Collection> {
    let fresh = match mv.op {
        4 | 5 => instantiate(mv.op, mv.orientation, mv.params.a, 0, mv.params.c),
        _ => instantiate(mv.op, mv.orientation, mv.params.a, mv.params.b, mv.params.c),
    };
    match fresh {
        Some(f) if f == *mv => {}
        _ => return Err(Error::StaleMove(format!("{mv} does not match its operation"))),
    }
    if !coll.contains_all(&mv.removed) {
        return Err(Error::StaleMove(format!("{mv} removes classes not in {coll}")));
    }
    Ok(coll.replace(&mv.removed, &mv.added))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub initial: Collection,
    pub moves: Vec<RewriteMove>,
    #[serde(rename = "final")]
    pub final_collection: Collection,
    /// False when the trace came from the concurrent search, whose choice
    /// among equally short traces depends on scheduling.
    pub deterministic: bool,
}

impl RewriteTrace {
    /// Every intermediate collection, starting with the initial one.
    pub fn replay(&self) -> Result<Vec<Collection>> {
        let mut states = vec![self.initial.clone()];
        for mv in &self.moves {
            let next = apply_move(states.last().expect("non-empty"), mv)?;
            states.push(next);
        }
        if states.last() != Some(&self.final_collection) {
            return Err(Error::InvalidInput("trace does not end at its final collection".into()));
        }
        Ok(states)
    }

    pub fn reaches_empty(&self) -> bool {
        self.final_collection.is_empty()
    }

    /// One JSON object per move and line.
    pub fn to_json_lines(&self) -> String {
        self.moves
            .iter()
            .map(|m| serde_json::to_string(m).expect("moves serialize") + "\n")
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Known scripts first, then sequential iterative deepening.
    #[default]
    Sequential,
    /// Known scripts first, then iterative deepening with the first level
    /// explored in parallel.
    Concurrent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchFailure {
    pub max_depth: usize,
    pub states_visited: usize,
    pub transposition_entries: usize,
    pub reason: String,
}

impl fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (depth limit {}, {} states visited, {} stored)",
            self.reason, self.max_depth, self.states_visited, self.transposition_entries
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Reduction {
    Reduced(RewriteTrace),
    Failed(SearchFailure),
}

impl Reduction {
    pub fn trace(&self) -> Option<&RewriteTrace> {
        match self {
            Reduction::Reduced(t) => Some(t),
            Reduction::Failed(_) => None,
        }
    }
}

/// Known scripts for four points. Case 2 is tried first so that data
/// matching both cases is reduced through operation (2).
fn script_moves(coll: &Collection) -> Option<Vec<RewriteMove>> {
    if coll.len() != 4 {
        return None;
    }
    let data = coll.to_data().ok()?;
    if let Some(p) = case2_matches(&data).first() {
        let (a, b, c) = (p.a as i128, p.b as i128, p.c as i128);
        let mut second = [a, b, b + c];
        let mut third = [b, c, a + b];
        second.sort_unstable();
        third.sort_unstable();
        return Some(vec![
            instantiate(2, Sign::Plus, a, a + b, a + b + c)?,
            instantiate(1, Sign::Plus, second[0], second[1], second[2])?,
            instantiate(1, Sign::Plus, third[0], third[1], third[2])?,
        ]);
    }
    let p = *case1_matches(&data).first()?;
    let w = |x: u64| x as i128;
    Some(vec![
        instantiate(1, Sign::Plus, w(p.a), w(p.b), w(p.c))?,
        instantiate(1, Sign::Plus, w(p.d), w(p.e), w(p.f))?,
    ])
}

fn run_script(coll: &Collection, moves: Vec<RewriteMove>) -> Option<RewriteTrace> {
    let mut state = coll.clone();
    for mv in &moves {
        state = apply_move(&state, mv).ok()?;
    }
    state.is_empty().then(|| RewriteTrace {
        initial: coll.clone(),
        moves,
        final_collection: state,
        deterministic: true,
    })
}

/// Table of states already shown not to empty within a given number of
/// moves, shared by all search branches.
struct Transpositions {
    failed: Mutex<HashMap<Collection, usize>>,
    visited: Mutex<usize>,
}

impl Transpositions {
    fn new() -> Self {
        Transpositions {
            failed: Mutex::new(HashMap::new()),
            visited: Mutex::new(0),
        }
    }

    fn known_failure(&self, state: &Collection, budget: usize) -> bool {
        *self.visited.lock().expect("lock") += 1;
        self.failed
            .lock()
            .expect("lock")
            .get(state)
            .is_some_and(|&b| b >= budget)
    }

    fn record_failure(&self, state: &Collection, budget: usize) {
        let mut table = self.failed.lock().expect("lock");
        let entry = table.entry(state.clone()).or_insert(budget);
        *entry = (*entry).max(budget);
    }
}

/// Only operation (1) shrinks a collection, by two classes.
fn hopeless(state: &Collection, budget: usize) -> bool {
    state.len() % 2 == 1 || state.len() / 2 > budget
}

fn dfs(state: &Collection, budget: usize, table: &Transpositions, path: &mut Vec<RewriteMove>) -> bool {
    if state.is_empty() {
        return true;
    }
    if hopeless(state, budget) || table.known_failure(state, budget) {
        return false;
    }
    for mv in applicable_moves(state).expect("arity checked on entry") {
        let next = state.replace(&mv.removed, &mv.added);
        path.push(mv);
        if dfs(&next, budget - 1, table, path) {
            return true;
        }
        path.pop();
    }
    table.record_failure(state, budget);
    false
}

fn search(coll: &Collection, max_depth: usize, strategy: SearchStrategy) -> (Option<Vec<RewriteMove>>, Transpositions) {
    let table = Transpositions::new();
    for depth in 0..=max_depth {
        if coll.is_empty() {
            return (Some(Vec::new()), table);
        }
        if hopeless(coll, depth) {
            continue;
        }
        let found = match strategy {
            SearchStrategy::Sequential => {
                let mut path = Vec::new();
                dfs(coll, depth, &table, &mut path).then_some(path)
            }
            SearchStrategy::Concurrent => applicable_moves(coll)
                .expect("arity checked on entry")
                .into_par_iter()
                .find_map_any(|mv| {
                    let next = coll.replace(&mv.removed, &mv.added);
                    let mut path = vec![mv];
                    dfs(&next, depth - 1, &table, &mut path).then_some(path)
                }),
        };
        if found.is_some() {
            return (found, table);
        }
    }
    (None, table)
}

/// Reduces `coll` to the empty collection. Data matching either case of
/// the six-dimensional four-point classification uses its known script;
/// anything else is searched with iterative deepening up to `max_depth`
/// moves. Every returned trace has been replayed.
pub fn reduce_to_empty(coll: &Collection, max_depth: usize, strategy: SearchStrategy) -> Result<Reduction> {
    if let Some(n) = coll.arity().filter(|&n| n != 3) {
        return Err(Error::InvalidInput(format!("rewriting needs arity 3, found {n}")));
    }
    if let Some(trace) = script_moves(coll).and_then(|moves| run_script(coll, moves)) {
        trace.replay()?;
        return Ok(Reduction::Reduced(trace));
    }
    let (found, table) = search(coll, max_depth, strategy);
    match found {
        Some(moves) => {
            let mut state = coll.clone();
            for mv in &moves {
                state = apply_move(&state, mv)?;
            }
            let trace = RewriteTrace {
                initial: coll.clone(),
                moves,
                final_collection: state,
                deterministic: strategy == SearchStrategy::Sequential,
            };
            trace.replay()?;
            debug_assert!(trace.reaches_empty());
            Ok(Reduction::Reduced(trace))
        }
        None => {
            let reason = if coll.len() % 2 == 1 {
                "odd number of classes; no sequence of moves empties it".to_string()
            } else {
                "no reduction within the depth limit".to_string()
            };
            Ok(Reduction::Failed(SearchFailure {
                max_depth,
                states_visited: *table.visited.lock().expect("lock"),
                transposition_entries: table.failed.lock().expect("lock").len(),
                reason,
            }))
        }
    }
}
