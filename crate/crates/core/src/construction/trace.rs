//! Movement trace of the agents and the at-least-once / at-most-twice check.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use super::AgentId;
use crate::arrangement::Arrangement;
use crate::geometry::{Point2, Segment};
use crate::rational::{parse_rational, PQ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Walk,
    Mark,
    Pin,
    Scribe,
    Draw,
    Cast,
}

impl ActionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Walk => "walk",
            ActionKind::Mark => "mark",
            ActionKind::Pin => "pin",
            ActionKind::Scribe => "scribe",
            ActionKind::Draw => "draw",
            ActionKind::Cast => "cast",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "walk" => ActionKind::Walk,
            "mark" => ActionKind::Mark,
            "pin" => ActionKind::Pin,
            "scribe" => ActionKind::Scribe,
            "draw" => ActionKind::Draw,
            "cast" => ActionKind::Cast,
            other => return Err(format!("unknown action `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TraceEntry {
    pub agent: AgentId,
    pub action: ActionKind,
    pub from: Point2,
    pub to: Point2,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    entries: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceParseError {
    #[error("line {line}: expected 4 tab-separated fields")]
    Fields { line: usize },
    #[error("line {line}: {msg}")]
    Field { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("off-structure move at entry {index}: {from} -> {to}")]
    OffStructure {
        index: usize,
        from: Point2,
        to: Point2,
    },
    #[error("entry {index}: agent {agent} starts at {from} but was at {expected}")]
    Discontinuous {
        index: usize,
        agent: AgentId,
        from: Point2,
        expected: Point2,
    },
}

impl Trace {
    pub fn new(entries: Vec<TraceEntry>) -> Self {
        Trace { entries }
    }

    pub fn push(&mut self, e: TraceEntry) {
        self.entries.push(e);
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `agent<TAB>action<TAB>x1,y1<TAB>x2,y2`, one line per entry, rationals as `p/q`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{},{}\t{},{}",
                e.agent,
                e.action,
                PQ(&e.from.x),
                PQ(&e.from.y),
                PQ(&e.to.x),
                PQ(&e.to.y)
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, TraceParseError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [agent, action, from, to] = fields.as_slice() else {
                return Err(TraceParseError::Fields { line: line_no });
            };
            let field = |msg: String| TraceParseError::Field { line: line_no, msg };
            let point = |s: &str| -> Result<Point2, TraceParseError> {
                let (x, y) = s
                    .split_once(',')
                    .ok_or_else(|| field(format!("bad point `{s}`")))?;
                Ok(Point2::new(
                    parse_rational(x).map_err(|e| field(e.to_string()))?,
                    parse_rational(y).map_err(|e| field(e.to_string()))?,
                ))
            };
            entries.push(TraceEntry {
                agent: agent
                    .parse()
                    .map_err(|_| field(format!("bad agent id `{agent}`")))?,
                action: action.parse().map_err(field)?,
                from: point(from)?,
                to: point(to)?,
            });
        }
        Ok(Trace { entries })
    }

    /// Per-edge and per-vertex counters of this trace on `arr`.
    pub fn counts(&self, arr: &Arrangement) -> Result<TraversalCounts, TraceError> {
        let mut counts = TraversalCounts {
            edges: vec![0; arr.edges().len()],
            vertices: vec![0; arr.vertices().len()],
        };
        let mut last: std::collections::BTreeMap<AgentId, &Point2> = Default::default();
        for (index, e) in self.entries.iter().enumerate() {
            if let Some(prev) = last.get(&e.agent) {
                if **prev != e.from {
                    return Err(TraceError::Discontinuous {
                        index,
                        agent: e.agent,
                        from: e.from.clone(),
                        expected: (*prev).clone(),
                    });
                }
            }
            last.insert(e.agent, &e.to);
            let off = || TraceError::OffStructure {
                index,
                from: e.from.clone(),
                to: e.to.clone(),
            };
            let path = move_path(arr, &e.from, &e.to).ok_or_else(off)?;
            for v in &path {
                counts.vertices[*v] += 1;
            }
            for w in path.windows(2) {
                let edge = arr.edge_index(w[0], w[1]).ok_or_else(off)?;
                counts.edges[edge] += 1;
            }
        }
        Ok(counts)
    }
}

/// Vertices passed by a straight move, in order. `None` if an endpoint is not
/// a vertex.
fn move_path(arr: &Arrangement, from: &Point2, to: &Point2) -> Option<Vec<usize>> {
    let start = arr.vertex_index(from)?;
    if from == to {
        return Some(vec![start]);
    }
    arr.vertex_index(to)?;
    let s = Segment::new(from.clone(), to.clone()).ok()?;
    let mut on: Vec<_> = arr
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| s.param_of(v).map(|t| (t, i)))
        .collect();
    on.sort();
    Some(on.into_iter().map(|(_, i)| i).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalCounts {
    pub edges: Vec<u32>,
    pub vertices: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub counts: TraversalCounts,
    /// Edge indices never traversed.
    pub untraversed: Vec<usize>,
    /// Edge indices traversed more than twice.
    pub overtraversed: Vec<usize>,
    pub unvisited: Vec<usize>,
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        self.untraversed.is_empty() && self.overtraversed.is_empty() && self.unvisited.is_empty()
    }
}

/// Checks that every edge is traversed once or twice and every vertex visited.
pub fn verify_trace(trace: &Trace, arr: &Arrangement) -> Result<Verdict, TraceError> {
    let counts = trace.counts(arr)?;
    let pick = |xs: &[u32], bad: fn(u32) -> bool| {
        xs.iter()
            .enumerate()
            .filter(|(_, &c)| bad(c))
            .map(|(i, _)| i)
            .collect::<Vec<_>>()
    };
    Ok(Verdict {
        untraversed: pick(&counts.edges, |c| c == 0),
        overtraversed: pick(&counts.edges, |c| c > 2),
        unvisited: pick(&counts.vertices, |c| c == 0),
        counts,
    })
}
