//! Signed labeled multigraphs describing fixed-point data.
//!
//! Vertices are fixed points (by index) with their signs; each edge carries
//! a positive label, and the labels at a vertex reproduce the weights of
//! that point. Admissible graphs have no self-loops and join opposite-sign
//! vertices by every edge whose label is one of the two smallest positive
//! weights.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::constraints::odd_weights;
use crate::data::{FixedPointData, Sign};
use crate::error::{Error, Result};

/// Cap on the number of graphs produced by [`enumerate_admissible`].
pub const DEFAULT_GRAPH_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub sign: Sign,
}

/// Unordered edge, stored with `u <= v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: u64,
}

impl Edge {
    pub fn new(a: usize, b: usize, label: u64) -> Edge {
        Edge {
            u: a.min(b),
            v: a.max(b),
            label,
        }
    }

    pub fn is_self_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, id: usize) -> bool {
        self.u == id || self.v == id
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabeledMultigraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl LabeledMultigraph {
    pub fn new(mut vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        vertices.sort();
        let mut edges: Vec<Edge> = edges.into_iter().map(|e| Edge::new(e.u, e.v, e.label)).collect();
        edges.sort();
        LabeledMultigraph { vertices, edges }
    }

    /// Vertices for every point of `data`, no edges yet.
    pub fn vertices_of(data: &FixedPointData) -> Vec<Vertex> {
        data.points()
            .iter()
            .enumerate()
            .map(|(id, p)| Vertex { id, sign: p.sign() })
            .collect()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn sign_of(&self, id: usize) -> Option<Sign> {
        self.vertices.iter().find(|v| v.id == id).map(|v| v.sign)
    }

    pub fn has_self_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_self_loop)
    }

    /// Edge labels at a vertex, ascending; a self-loop counts twice.
    pub fn weights_at(&self, id: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.u == id {
                out.push(e.label);
            }
            if e.v == id {
                out.push(e.label);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn degree(&self, id: usize) -> usize {
        self.weights_at(id).len()
    }

    pub fn edge_count_between(&self, a: usize, b: usize) -> usize {
        let e = Edge::new(a, b, 0);
        self.edges.iter().filter(|x| x.u == e.u && x.v == e.v).count()
    }

    fn labels_between(&self, a: usize, b: usize) -> Vec<u64> {
        let e = Edge::new(a, b, 0);
        self.edges
            .iter()
            .filter(|x| x.u == e.u && x.v == e.v)
            .map(|x| x.label)
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("vertex {} {}\n", v.id, v.sign));
        }
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.label));
        }
        out
    }

    /// Inverse of [`LabeledMultigraph::to_text`]; `#` comments and blank
    /// lines are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::Parse {
                line: idx + 1,
                message: message.to_string(),
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["vertex", id, sign] => {
                    let id = id.parse().map_err(|_| err("bad vertex id"))?;
                    let sign = match *sign {
                        "+" => Sign::Plus,
                        "-" => Sign::Minus,
                        _ => return Err(err("vertex sign must be `+` or `-`")),
                    };
                    vertices.push(Vertex { id, sign });
                }
                [u, v, label] => {
                    let u = u.parse().map_err(|_| err("bad edge endpoint"))?;
                    let v = v.parse().map_err(|_| err("bad edge endpoint"))?;
                    let label: u64 = label.parse().map_err(|_| err("bad edge label"))?;
                    if label == 0 {
                        return Err(err("edge labels must be positive"));
                    }
                    edges.push(Edge::new(u, v, label));
                }
                _ => return Err(err("expected `vertex <id> <sign>` or `<u> <v> <label>`")),
            }
        }
        Ok(LabeledMultigraph::new(vertices, edges))
    }
}

impl fmt::Display for LabeledMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("p{}p{}:{}", e.u + 1, e.v + 1, e.label))
            .collect();
        write!(f, "{}", edges.join(" "))
    }
}

/// Whether `graph` describes `data`: same vertex signs, and the labels at
/// each vertex are the weights of the corresponding point.
pub fn describes(graph: &LabeledMultigraph, data: &FixedPointData) -> Result<bool> {
    let ids: Vec<usize> = graph.vertices.iter().map(|v| v.id).collect();
    if ids != (0..data.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(format!(
            "graph vertices {ids:?} do not match the {} points of the data",
            data.len()
        )));
    }
    if graph.edges.iter().any(|e| e.v >= data.len()) {
        return Err(Error::InvalidInput("edge references an unknown vertex".into()));
    }
    Ok(graph
        .vertices
        .iter()
        .zip(data.points())
        .all(|(v, p)| v.sign == p.sign() && graph.weights_at(v.id) == p.weights()))
}

/// The two smallest entries among weights of positive points, when present.
pub fn smallest_positive_labels(data: &FixedPointData) -> Vec<u64> {
    let mut out = data.weights_with_sign(Sign::Plus);
    out.truncate(2);
    out.dedup();
    out
}

/// All admissible graphs describing `data`, in lexicographic edge order.
pub fn enumerate_admissible(data: &FixedPointData) -> Result<Vec<LabeledMultigraph>> {
    enumerate_admissible_with_cap(data, DEFAULT_GRAPH_CAP)
}

pub fn enumerate_admissible_with_cap(data: &FixedPointData, cap: usize) -> Result<Vec<LabeledMultigraph>> {
    if let Some(&weight) = odd_weights(data).first() {
        return Err(Error::NoMatching { weight });
    }
    let restricted = smallest_positive_labels(data);
    let signs: Vec<Sign> = data.points().iter().map(|p| p.sign()).collect();

    let mut per_value: Vec<Vec<Vec<Edge>>> = Vec::new();
    for value in data.distinct_weights() {
        let counts: Vec<usize> = data.points().iter().map(|p| p.multiplicity(value)).collect();
        let opposite_only = restricted.contains(&value);
        let allowed = |i: usize, j: usize| !opposite_only || signs[i] != signs[j];
        let mut options = Vec::new();
        let mut current = Vec::new();
        let mut remaining = counts.clone();
        match_occurrences(value, &mut remaining, &allowed, &mut current, &mut options, cap)?;
        if options.is_empty() {
            return Ok(Vec::new());
        }
        per_value.push(options);
    }

    let total = per_value
        .iter()
        .try_fold(1usize, |acc, opts| acc.checked_mul(opts.len()))
        .unwrap_or(usize::MAX);
    if total > cap {
        return Err(Error::CapExceeded { cap });
    }

    let vertices = LabeledMultigraph::vertices_of(data);
    let mut graphs = Vec::with_capacity(total);
    let mut index = vec![0usize; per_value.len()];
    loop {
        let edges: Vec<Edge> = index
            .iter()
            .zip(&per_value)
            .flat_map(|(&k, opts)| opts[k].iter().copied())
            .collect();
        graphs.push(LabeledMultigraph::new(vertices.clone(), edges));
        // odometer increment
        let mut pos = per_value.len();
        loop {
            if pos == 0 {
                graphs.sort();
                return Ok(graphs);
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < per_value[pos].len() {
                break;
            }
            index[pos] = 0;
        }
    }
}

/// Enumerates self-loop-free matchings of the occurrences of one weight
/// value, identical occurrences at the same point being interchangeable.
/// Each result lists the edges as a multiset.
fn match_occurrences(
    label: u64,
    remaining: &mut [usize],
    allowed: &dyn Fn(usize, usize) -> bool,
    current: &mut Vec<Edge>,
    out: &mut Vec<Vec<Edge>>,
    cap: usize,
) -> Result<()> {
    let Some(i) = remaining.iter().position(|&r| r > 0) else {
        out.push(current.clone());
        if out.len() > cap {
            return Err(Error::CapExceeded { cap });
        }
        return Ok(());
    };
    let need = remaining[i];
    remaining[i] = 0;
    distribute(label, i, i + 1, need, remaining, allowed, current, out, cap)?;
    remaining[i] = need;
    Ok(())
}

/// Spreads `need` edges from vertex `i` over partners `j >= from`.
#[allow(clippy::too_many_arguments)]
fn distribute(
    label: u64,
    i: usize,
    from: usize,
    need: usize,
    remaining: &mut [usize],
    allowed: &dyn Fn(usize, usize) -> bool,
    current: &mut Vec<Edge>,
    out: &mut Vec<Vec<Edge>>,
    cap: usize,
) -> Result<()> {
    if need == 0 {
        return match_occurrences(label, remaining, allowed, current, out, cap);
    }
    // prune: not enough capacity left among admissible partners
    let capacity: usize = (from..remaining.len())
        .filter(|&j| allowed(i, j))
        .map(|j| remaining[j])
        .sum();
    if capacity < need {
        return Ok(());
    }
    for j in from..remaining.len() {
        if remaining[j] == 0 || !allowed(i, j) {
            continue;
        }
        let max_here = need.min(remaining[j]);
        for take in (1..=max_here).rev() {
            remaining[j] -= take;
            for _ in 0..take {
                current.push(Edge::new(i, j, label));
            }
            distribute(label, i, j + 1, need - take, remaining, allowed, current, out, cap)?;
            current.truncate(current.len() - take);
            remaining[j] += take;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Figure1Tag {
    A,
    B,
    C,
    D,
    E,
}

impl Figure1Tag {
    pub const ALL: [Figure1Tag; 5] = [
        Figure1Tag::A,
        Figure1Tag::B,
        Figure1Tag::C,
        Figure1Tag::D,
        Figure1Tag::E,
    ];

    /// Edge endpoints (as template vertex indices `p1..p4` = `0..3`) for the
    /// labels `a..f`, in order.
    pub fn template(self) -> [(usize, usize); 6] {
        match self {
            Figure1Tag::A => [(0, 2), (0, 2), (0, 2), (1, 3), (1, 3), (1, 3)],
            Figure1Tag::B => [(0, 1), (0, 2), (0, 2), (1, 3), (1, 3), (2, 3)],
            Figure1Tag::C => [(0, 2), (0, 2), (0, 3), (1, 2), (1, 3), (1, 3)],
            Figure1Tag::D => [(0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (2, 3)],
            Figure1Tag::E => [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        }
    }

    /// Edge counts from `p1` to `p2`, `p3`, `p4`.
    pub fn pattern(self) -> (usize, usize, usize) {
        match self {
            Figure1Tag::A => (0, 3, 0),
            Figure1Tag::B => (1, 2, 0),
            Figure1Tag::C => (0, 2, 1),
            Figure1Tag::D => (2, 1, 0),
            Figure1Tag::E => (1, 1, 1),
        }
    }

    fn from_pattern(pattern: (usize, usize, usize)) -> Option<Figure1Tag> {
        Figure1Tag::ALL.into_iter().find(|t| t.pattern() == pattern)
    }
}

impl fmt::Display for Figure1Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A graph recognised as one of the five special shapes on four vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Figure1Case {
    pub tag: Figure1Tag,
    /// Point identifiers playing `p1..p4`; `p1, p2` positive, `p3, p4`
    /// negative.
    pub vertices: [usize; 4],
    /// Labels `a..f`.
    pub labels: [u64; 6],
}

impl Figure1Case {
    /// Template weights at `p1..p4` after substituting the labels.
    pub fn template_weights(&self) -> [Vec<u64>; 4] {
        let mut out: [Vec<u64>; 4] = Default::default();
        for (&(x, y), &label) in self.tag.template().iter().zip(&self.labels) {
            out[x].push(label);
            out[y].push(label);
        }
        for ws in &mut out {
            ws.sort_unstable();
        }
        out
    }
}

/// Recognises the five special shapes on four vertices of a 3-regular
/// signed multigraph with two vertices of each sign.
///
/// Among the normalizations obtained by swapping `p1 ↔ p2` and `p3 ↔ p4`,
/// the first (by label tuple, then vertex tuple) whose edge counts from `p1`
/// match a template is returned. Parallel edges take labels in ascending
/// order.
pub fn match_figure1(graph: &LabeledMultigraph) -> Result<Option<Figure1Case>> {
    if graph.vertices.len() != 4 {
        return Err(Error::InvalidInput(format!(
            "expected 4 vertices, found {}",
            graph.vertices.len()
        )));
    }
    let plus: Vec<usize> = graph.vertices.iter().filter(|v| v.sign.is_plus()).map(|v| v.id).collect();
    let minus: Vec<usize> = graph.vertices.iter().filter(|v| !v.sign.is_plus()).map(|v| v.id).collect();
    if plus.len() != 2 || minus.len() != 2 {
        return Err(Error::InvalidInput("expected two vertices of each sign".into()));
    }
    if graph.has_self_loops() {
        return Err(Error::InvalidInput("graph has a self-loop".into()));
    }
    if let Some(v) = graph.vertices.iter().find(|v| graph.degree(v.id) != 3) {
        return Err(Error::InvalidInput(format!("vertex {} is not of degree 3", v.id)));
    }

    let mut best: Option<Figure1Case> = None;
    for (p1, p2) in [(plus[0], plus[1]), (plus[1], plus[0])] {
        for (p3, p4) in [(minus[0], minus[1]), (minus[1], minus[0])] {
            let pattern = (
                graph.edge_count_between(p1, p2),
                graph.edge_count_between(p1, p3),
                graph.edge_count_between(p1, p4),
            );
            let Some(tag) = Figure1Tag::from_pattern(pattern) else {
                continue;
            };
            let ids = [p1, p2, p3, p4];
            let mut labels = [0u64; 6];
            let mut groups: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
            for &(x, y) in &tag.template() {
                groups
                    .entry((x, y))
                    .or_insert_with(|| {
                        let mut ls = graph.labels_between(ids[x], ids[y]);
                        ls.sort_unstable();
                        ls.reverse();
                        ls
                    });
            }
            for (slot, &(x, y)) in tag.template().iter().enumerate() {
                labels[slot] = groups
                    .get_mut(&(x, y))
                    .and_then(Vec::pop)
                    .expect("edge counts agree with the template");
            }
            let candidate = Figure1Case {
                tag,
                vertices: ids,
                labels,
            };
            let better = match &best {
                None => true,
                Some(b) => (candidate.labels, candidate.vertices) < (b.labels, b.vertices),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    Ok(best)
}

/// Distinct shapes among all admissible graphs of `data` (4 points, arity 3).
pub fn figure1_tags(data: &FixedPointData) -> Result<Vec<Figure1Tag>> {
    let mut tags = Vec::new();
    for g in enumerate_admissible(data)? {
        if let Some(case) = match_figure1(&g)? {
            tags.push(case.tag);
        }
    }
    tags.sort();
    tags.dedup();
    Ok(tags)
}
