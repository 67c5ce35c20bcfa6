//! Labelled mixed graph of the figure: adjacency lists plus an adjacency
//! matrix, traversals with inspection counters, and exhaustive searches for
//! Hamiltonian paths and minimum dominating sets.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::arrangement::{build_arrangement, Arrangement};
use crate::construction::{ConstructionResult, Ray};
use crate::geometry::{segment_intersection, GeometryError, Point2, SegmentIntersection};
use crate::label::{Label, NodeKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unlabeled vertex at {0}")]
    UnlabeledVertex(Point2),
    #[error("duplicate node `{0}`")]
    DuplicateNode(Label),
    #[error("self-loop at `{0}`")]
    SelfLoop(Label),
    #[error("edge exists: {0}-{1}")]
    EdgeExists(Label, Label),
    #[error("disconnected: no path {0} -> {1}")]
    Disconnected(Label, Label),
    #[error("{0} nodes is beyond brute-force domination (limit 20)")]
    TooLarge(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    nodes: Vec<Label>,
    index: BTreeMap<Label, usize>,
    /// Undirected neighbours and directed out-neighbours, ascending.
    out: Vec<Vec<usize>>,
    /// Directed in-neighbours, ascending.
    inc: Vec<Vec<usize>>,
    /// Row-major `n x n`; `[u][v]` is set when an edge can be used from u to v.
    matrix: Vec<bool>,
    edge_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    BreadthFirst,
    DepthFirst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraversalReport {
    pub order: Vec<Label>,
    pub parent: BTreeMap<Label, Option<Label>>,
    pub node_inspections: usize,
    pub edge_inspections: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplorationReport {
    pub missing_vertices: Vec<Label>,
    pub missing_edges: Vec<(Label, Label)>,
    pub pair_inspections: usize,
}

impl ExplorationReport {
    pub fn complete(&self) -> bool {
        self.missing_vertices.is_empty() && self.missing_edges.is_empty()
    }
}

impl LabeledGraph {
    /// Graph on `nodes` with no edges. Node order is label order.
    pub fn new(nodes: impl IntoIterator<Item = Label>) -> Result<Self, GraphError> {
        let mut sorted: Vec<Label> = nodes.into_iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateNode(w[0].clone()));
        }
        let n = sorted.len();
        let index = sorted
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Ok(LabeledGraph {
            nodes: sorted,
            index,
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            matrix: vec![false; n * n],
            edge_count: 0,
        })
    }

    /// One node per labelled arrangement vertex and one edge per unit edge.
    /// Unit edges along a ray that touch the common point of the rays are
    /// directed along the ray; every other edge is undirected.
    pub fn from_construction(
        arr: &Arrangement,
        labels: &BTreeMap<Label, Point2>,
        rays: &[Ray],
    ) -> Result<Self, GraphError> {
        let by_vertex = arr.vertex_labels(labels);
        let names: Vec<Label> = by_vertex
            .iter()
            .zip(arr.vertices())
            .map(|(l, p)| {
                l.clone()
                    .ok_or_else(|| GraphError::UnlabeledVertex(p.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut g = LabeledGraph::new(names.iter().cloned())?;
        let venter = ray_meet(rays);
        for &(u, v) in arr.edges() {
            let (pu, pv) = (&arr.vertices()[u], &arr.vertices()[v]);
            let mut directed = None;
            if let Some(c) = &venter {
                if pu == c || pv == c {
                    for r in rays {
                        if let (Some(tu), Some(tv)) =
                            (r.segment.param_of(pu), r.segment.param_of(pv))
                        {
                            directed = Some(tu < tv);
                        }
                    }
                }
            }
            let (a, b) = (names[u].as_str(), names[v].as_str());
            match directed {
                Some(true) => g.add_edge(a, b, true)?,
                Some(false) => g.add_edge(b, a, true)?,
                None => g.add_edge(a, b, false)?,
            }
        }
        Ok(g)
    }

    pub fn from_walker(result: &ConstructionResult) -> Result<Self, GraphError> {
        let arr = result.arrangement()?;
        LabeledGraph::from_construction(&arr, &result.labeled_points, &result.rays)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &[Label] {
        &self.nodes
    }

    pub fn kind(&self, l: &str) -> Result<NodeKind, GraphError> {
        Ok(self.nodes[self.idx(l)?].kind())
    }

    fn idx(&self, l: &str) -> Result<usize, GraphError> {
        self.index
            .get(l)
            .copied()
            .ok_or_else(|| GraphError::UnknownLabel(l.to_string()))
    }

    fn cell(&self, u: usize, v: usize) -> bool {
        self.matrix[u * self.nodes.len() + v]
    }

    /// One matrix lookup; respects direction.
    pub fn has_edge(&self, u: &str, v: &str) -> Result<bool, GraphError> {
        Ok(self.cell(self.idx(u)?, self.idx(v)?))
    }

    /// Inserts an edge. Cost is one sorted insertion into each endpoint list.
    pub fn add_edge(&mut self, u: &str, v: &str, directed: bool) -> Result<(), GraphError> {
        let (a, b) = (self.idx(u)?, self.idx(v)?);
        if a == b {
            return Err(GraphError::SelfLoop(self.nodes[a].clone()));
        }
        if self.cell(a, b) || self.cell(b, a) {
            return Err(GraphError::EdgeExists(
                self.nodes[a].clone(),
                self.nodes[b].clone(),
            ));
        }
        let n = self.nodes.len();
        insert_sorted(&mut self.out[a], b);
        self.matrix[a * n + b] = true;
        if directed {
            insert_sorted(&mut self.inc[b], a);
        } else {
            insert_sorted(&mut self.out[b], a);
            self.matrix[b * n + a] = true;
        }
        self.edge_count += 1;
        Ok(())
    }

    /// Adjacency list of `l`: undirected neighbours and directed out-neighbours.
    pub fn adjacency_list(&self, l: &str) -> Result<Vec<&Label>, GraphError> {
        Ok(self.out[self.idx(l)?]
            .iter()
            .map(|&i| &self.nodes[i])
            .collect())
    }

    pub fn out_neighbors(&self, l: &str) -> Result<BTreeSet<&Label>, GraphError> {
        let u = self.idx(l)?;
        Ok(self.out[u]
            .iter()
            .filter(|&&v| !self.cell(v, u))
            .map(|&v| &self.nodes[v])
            .collect())
    }

    pub fn in_neighbors(&self, l: &str) -> Result<BTreeSet<&Label>, GraphError> {
        Ok(self.inc[self.idx(l)?]
            .iter()
            .map(|&v| &self.nodes[v])
            .collect())
    }

    /// Degree ignoring direction.
    pub fn degree(&self, l: &str) -> Result<usize, GraphError> {
        let u = self.idx(l)?;
        Ok(self.out[u].len() + self.inc[u].len())
    }

    /// Neighbours ignoring direction, ascending.
    fn around(&self, u: usize) -> Vec<usize> {
        let mut all: Vec<usize> = self.out[u].iter().chain(&self.inc[u]).copied().collect();
        all.sort_unstable();
        all
    }

    fn closed_masks(&self) -> Vec<u64> {
        (0..self.nodes.len())
            .map(|u| {
                self.around(u)
                    .into_iter()
                    .fold(1u64 << u, |m, v| m | (1u64 << v))
            })
            .collect()
    }

    pub fn traverse(&self, start: &str, mode: Mode) -> Result<TraversalReport, GraphError> {
        let s = self.idx(start)?;
        let n = self.nodes.len();
        let mut seen = vec![false; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut order = Vec::new();
        let (mut node_insp, mut edge_insp) = (0, 0);
        let neigh: Vec<Vec<usize>> = (0..n).map(|u| self.around(u)).collect();
        match mode {
            Mode::BreadthFirst => {
                seen[s] = true;
                let mut q = VecDeque::from([s]);
                while let Some(u) = q.pop_front() {
                    node_insp += 1;
                    order.push(u);
                    for &v in &neigh[u] {
                        edge_insp += 1;
                        if !seen[v] {
                            seen[v] = true;
                            parent[v] = Some(u);
                            q.push_back(v);
                        }
                    }
                }
            }
            Mode::DepthFirst => {
                let mut stack = vec![(s, 0usize)];
                seen[s] = true;
                node_insp += 1;
                order.push(s);
                while let Some((u, i)) = stack.pop() {
                    if i == neigh[u].len() {
                        continue;
                    }
                    stack.push((u, i + 1));
                    let v = neigh[u][i];
                    edge_insp += 1;
                    if !seen[v] {
                        seen[v] = true;
                        parent[v] = Some(u);
                        node_insp += 1;
                        order.push(v);
                        stack.push((v, 0));
                    }
                }
            }
        }
        let parent = order
            .iter()
            .map(|&u| {
                (
                    self.nodes[u].clone(),
                    parent[u].map(|p| self.nodes[p].clone()),
                )
            })
            .collect();
        Ok(TraversalReport {
            order: order.iter().map(|&u| self.nodes[u].clone()).collect(),
            parent,
            node_inspections: node_insp,
            edge_inspections: edge_insp,
        })
    }

    /// Minimum-hop path ignoring direction. Among equal hop counts the path
    /// walking fewest edges against their direction wins, then label order.
    pub fn shortest_path(&self, from: &str, to: &str) -> Result<Vec<Label>, GraphError> {
        let (s, t) = (self.idx(from)?, self.idx(to)?);
        let n = self.nodes.len();
        let mut best: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut done = vec![false; n];
        best[s] = Some((0, 0));
        let mut heap = BinaryHeap::from([Reverse((0usize, 0usize, s))]);
        while let Some(Reverse((hops, against, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for v in self.around(u) {
                let cost = (hops + 1, against + usize::from(!self.cell(u, v)));
                if best[v].is_none_or(|b| cost < b) {
                    best[v] = Some(cost);
                    parent[v] = Some(u);
                    heap.push(Reverse((cost.0, cost.1, v)));
                }
            }
        }
        if best[t].is_none() {
            return Err(GraphError::Disconnected(
                self.nodes[s].clone(),
                self.nodes[t].clone(),
            ));
        }
        let mut path = vec![t];
        while let Some(p) = parent[*path.last().expect("non-empty")] {
            path.push(p);
        }
        path.reverse();
        Ok(path.into_iter().map(|i| self.nodes[i].clone()).collect())
    }

    /// Exhaustive backtracking. A path that follows every directed edge
    /// forwards is preferred; failing that, direction is ignored. The first
    /// witness in label order is returned after an edge-by-edge re-check.
    pub fn hamiltonian_path(&self) -> Option<Vec<Label>> {
        let n = self.nodes.len();
        if n == 0 {
            return None;
        }
        let forward: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                self.around(u)
                    .into_iter()
                    .filter(|&v| self.cell(u, v))
                    .collect()
            })
            .collect();
        let any: Vec<Vec<usize>> = (0..n).map(|u| self.around(u)).collect();
        fn extend(path: &mut Vec<usize>, used: &mut [bool], neigh: &[Vec<usize>]) -> bool {
            if path.len() == used.len() {
                return true;
            }
            let u = *path.last().expect("non-empty");
            for &v in &neigh[u] {
                if !used[v] {
                    used[v] = true;
                    path.push(v);
                    if extend(path, used, neigh) {
                        return true;
                    }
                    path.pop();
                    used[v] = false;
                }
            }
            false
        }
        for neigh in [&forward, &any] {
            for s in 0..n {
                let mut used = vec![false; n];
                used[s] = true;
                let mut path = vec![s];
                if extend(&mut path, &mut used, neigh) {
                    let labels: Vec<Label> = path.iter().map(|&i| self.nodes[i].clone()).collect();
                    assert!(self.is_hamiltonian_path(&labels), "witness failed re-check");
                    return Some(labels);
                }
            }
        }
        None
    }

    pub fn is_hamiltonian_path(&self, path: &[Label]) -> bool {
        let distinct: BTreeSet<&Label> = path.iter().collect();
        distinct.len() == self.nodes.len()
            && path.len() == self.nodes.len()
            && path.iter().all(|l| self.index.contains_key(l))
            && path.windows(2).all(|w| {
                self.has_edge(w[0].as_str(), w[1].as_str()).unwrap_or(false)
                    || self.has_edge(w[1].as_str(), w[0].as_str()).unwrap_or(false)
            })
    }

    /// Smallest dominating set by increasing size; among equal sizes the
    /// lexicographically smallest in label order. Direction ignored.
    pub fn min_dominating_set(&self) -> Result<Vec<Label>, GraphError> {
        let n = self.nodes.len();
        if n > 20 {
            return Err(GraphError::TooLarge(n));
        }
        let masks = self.closed_masks();
        let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
        for size in 0..=n {
            let mut pick: Vec<usize> = (0..size).collect();
            loop {
                let cover = pick.iter().fold(0u64, |m, &i| m | masks[i]);
                if cover == full {
                    let set: Vec<Label> = pick.iter().map(|&i| self.nodes[i].clone()).collect();
                    assert!(self.is_dominating(&set), "witness failed re-check");
                    return Ok(set);
                }
                if !next_combination(&mut pick, n) {
                    break;
                }
            }
        }
        unreachable!("the full node set dominates")
    }

    pub fn is_dominating(&self, set: &[Label]) -> bool {
        (0..self.nodes.len()).all(|u| {
            set.contains(&self.nodes[u])
                || self.around(u).iter().any(|&v| set.contains(&self.nodes[v]))
        })
    }

    /// Scans every matrix pair once, checking that each vertex was explored
    /// and each incident edge visited (in either direction).
    pub fn check_exploration(
        &self,
        explored: &BTreeSet<Label>,
        visited: &BTreeSet<(Label, Label)>,
    ) -> ExplorationReport {
        let n = self.nodes.len();
        let mut report = ExplorationReport {
            missing_vertices: Vec::new(),
            missing_edges: Vec::new(),
            pair_inspections: 0,
        };
        for u in 0..n {
            if !explored.contains(&self.nodes[u]) {
                report.missing_vertices.push(self.nodes[u].clone());
            }
            for v in 0..n {
                report.pair_inspections += 1;
                if u < v && (self.cell(u, v) || self.cell(v, u)) {
                    let (a, b) = (self.nodes[u].clone(), self.nodes[v].clone());
                    if !visited.contains(&(a.clone(), b.clone()))
                        && !visited.contains(&(b.clone(), a.clone()))
                    {
                        report.missing_edges.push((a, b));
                    }
                }
            }
        }
        report
    }

    /// `label: n1,>n2` per node; `>` marks a directed out-edge.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (u, l) in self.nodes.iter().enumerate() {
            let items: Vec<String> = self.out[u]
                .iter()
                .map(|&v| {
                    if self.cell(v, u) {
                        self.nodes[v].to_string()
                    } else {
                        format!(">{}", self.nodes[v])
                    }
                })
                .collect();
            if items.is_empty() {
                let _ = writeln!(s, "{l}:");
            } else {
                let _ = writeln!(s, "{l}: {}", items.join(","));
            }
        }
        s
    }
}

fn insert_sorted(v: &mut Vec<usize>, x: usize) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn ray_meet(rays: &[Ray]) -> Option<Point2> {
    let [r0, r1, rest @ ..] = rays else {
        return None;
    };
    match segment_intersection(&r0.segment, &r1.segment) {
        SegmentIntersection::Point(p) if rest.iter().all(|r| r.segment.contains(&p)) => Some(p),
        _ => None,
    }
}

/// Computed vertex and edge counts next to the published ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountDiagnostics {
    pub computed_n: usize,
    pub computed_m: usize,
    pub computed_faces: usize,
    /// Counts of the drawn segments alone, before labelled points split them.
    pub segments_only_n: usize,
    pub segments_only_m: usize,
    pub claimed_n: usize,
    pub claimed_m: usize,
}

pub const CLAIMED_N: usize = 10;
pub const CLAIMED_M: usize = 21;

pub fn count_diagnostics(result: &ConstructionResult) -> Result<CountDiagnostics, GraphError> {
    let full = result.arrangement()?;
    let bare = build_arrangement(&result.segments())?;
    Ok(CountDiagnostics {
        computed_n: full.vertices().len(),
        computed_m: full.edges().len(),
        computed_faces: full.faces().len(),
        segments_only_n: bare.vertices().len(),
        segments_only_m: bare.edges().len(),
        claimed_n: CLAIMED_N,
        claimed_m: CLAIMED_M,
    })
}

impl CountDiagnostics {
    pub fn to_text(&self) -> String {
        format!(
            "computed n={} m={} faces={}\nsegments-only n={} m={}\nclaimed n={} m={}\n",
            self.computed_n,
            self.computed_m,
            self.computed_faces,
            self.segments_only_n,
            self.segments_only_m,
            self.claimed_n,
            self.claimed_m
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{run_construction, ConstructionConfig};

    fn walker() -> LabeledGraph {
        let (r, _) = run_construction(&ConstructionConfig::default()).unwrap();
        LabeledGraph::from_walker(&r).unwrap()
    }

    fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> LabeledGraph {
        let mut g = LabeledGraph::new(nodes.iter().map(|s| Label::from(*s))).unwrap();
        for (u, v) in edges {
            g.add_edge(u, v, false).unwrap();
        }
        g
    }

    fn set<'a>(xs: &[&'a str]) -> BTreeSet<&'a str> {
        xs.iter().copied().collect()
    }

    fn names(s: BTreeSet<&Label>) -> BTreeSet<&str> {
        s.into_iter().map(Label::as_str).collect()
    }

    #[test]
    fn venter_directions() {
        let g = walker();
        assert_eq!(names(g.out_neighbors("m").unwrap()), set(&["a", "b", "c"]));
        assert_eq!(names(g.in_neighbors("m").unwrap()), set(&["0", "1", "2"]));
    }

    #[test]
    fn edge_queries() {
        let g = walker();
        assert!(g.has_edge("m", "a").unwrap());
        assert!(!g.has_edge("a", "m").unwrap());
        assert!(!g.has_edge("0", "3").unwrap());
        assert!(g.has_edge("4", "t").unwrap() && g.has_edge("t", "4").unwrap());
        for l in g.nodes() {
            assert!(!g.has_edge(l.as_str(), l.as_str()).unwrap());
        }
        assert_eq!(
            g.has_edge("x", "m"),
            Err(GraphError::UnknownLabel("x".into()))
        );
    }

    #[test]
    fn add_edge_contract() {
        let mut g = walker();
        assert_eq!(g.degree("0").unwrap(), 2);
        g.add_edge("0", "a", false).unwrap();
        assert_eq!(g.degree("0").unwrap(), 3);
        assert!(matches!(
            g.add_edge("m", "m", false),
            Err(GraphError::SelfLoop(_))
        ));
        assert!(matches!(
            g.add_edge("a", "0", true),
            Err(GraphError::EdgeExists(..))
        ));
        assert!(matches!(
            g.add_edge("4", "t", false),
            Err(GraphError::EdgeExists(..))
        ));
        let m = g.edge_count();
        g.add_edge("4", "5", false).unwrap();
        assert!(g.has_edge("4", "5").unwrap());
        assert_eq!(g.edge_count(), m + 1);
    }

    #[test]
    fn shortest_paths() {
        let g = walker();
        let s = |a, b| -> Vec<String> {
            g.shortest_path(a, b)
                .unwrap()
                .iter()
                .map(ToString::to_string)
                .collect()
        };
        assert_eq!(s("0", "3"), ["0", "m", "a", "3"]);
        assert_eq!(s("m", "m"), ["m"]);
        assert_eq!(s("4", "5"), ["4", "t", "5"]);
        let lonely = graph(&["x", "y"], &[]);
        assert!(matches!(
            lonely.shortest_path("x", "y"),
            Err(GraphError::Disconnected(..))
        ));
    }

    #[test]
    fn traversals_reach_everything() {
        let g = walker();
        let bfs = g.traverse("m", Mode::BreadthFirst).unwrap();
        assert_eq!(bfs.order.len(), 11);
        assert_eq!(bfs.parent[&Label::from("m")], None);
        let dfs = g.traverse("0", Mode::DepthFirst).unwrap();
        assert_eq!(dfs.order.len(), 11);
        assert!(dfs.edge_inspections <= 2 * g.edge_count());
        let single = graph(&["v"], &[]);
        for mode in [Mode::BreadthFirst, Mode::DepthFirst] {
            let r = single.traverse("v", mode).unwrap();
            assert_eq!(r.order, vec![Label::from("v")]);
            assert_eq!(r.edge_inspections, 0);
        }
    }

    #[test]
    fn hamiltonian_examples() {
        let g = walker();
        let path = g.hamiltonian_path().expect("walker graph has a path");
        assert!(g.is_hamiltonian_path(&path));
        for w in path.windows(2) {
            assert!(
                g.has_edge(w[0].as_str(), w[1].as_str()).unwrap(),
                "{} against direction",
                w[0]
            );
        }
        // only an undirected path exists: a -> b <- c
        let mut v = graph(&["a", "b", "c"], &[]);
        v.add_edge("a", "b", true).unwrap();
        v.add_edge("c", "b", true).unwrap();
        let names: Vec<_> = v
            .hamiltonian_path()
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(names, ["a", "b", "c"]);
        let p3 = graph(&["x", "y", "z"], &[("x", "y"), ("y", "z")]);
        let names: Vec<_> = p3
            .hamiltonian_path()
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(names, ["x", "y", "z"]);
        let star = graph(
            &["h", "l1", "l2", "l3", "l4"],
            &[("h", "l1"), ("h", "l2"), ("h", "l3"), ("h", "l4")],
        );
        assert_eq!(star.hamiltonian_path(), None);
    }

    #[test]
    fn candidate_witness_is_checked_not_trusted() {
        let g = walker();
        let cand: Vec<Label> = ["4", "3", "5", "c", "2", "a", "1", "b", "t", "0", "m"]
            .iter()
            .map(|s| Label::from(*s))
            .collect();
        // 4 and 3 are not adjacent: the outer side 3-4 is split at 1
        assert!(!g.is_hamiltonian_path(&cand));
    }

    #[test]
    fn domination_examples() {
        let g = walker();
        let d: Vec<_> = g
            .min_dominating_set()
            .unwrap()
            .iter()
            .map(|l| l.to_string())
            .collect();
        assert_eq!(d, ["a", "t"]);
        let k4 = graph(
            &["p", "q", "r", "s"],
            &[
                ("p", "q"),
                ("p", "r"),
                ("p", "s"),
                ("q", "r"),
                ("q", "s"),
                ("r", "s"),
            ],
        );
        assert_eq!(k4.min_dominating_set().unwrap().len(), 1);
        let empty = graph(&["x", "y", "z"], &[]);
        assert_eq!(empty.min_dominating_set().unwrap().len(), 3);
    }

    #[test]
    fn export_format() {
        let g = walker();
        let text = g.to_text();
        assert!(text.contains("m: >a,>b,>c\n"), "{text}");
        assert!(text.contains("0: >m,t\n"), "{text}");
        assert_eq!(text.lines().count(), 11);
    }

    #[test]
    fn exploration_scan_is_quadratic() {
        let g = walker();
        let all: BTreeSet<Label> = g.nodes().iter().cloned().collect();
        let r = g.check_exploration(&all, &BTreeSet::new());
        assert_eq!(r.pair_inspections, 121);
        assert_eq!(r.missing_edges.len(), g.edge_count());
        assert!(!r.complete());
    }

    #[test]
    fn unlabeled_vertex_rejected() {
        let (r, _) = run_construction(&ConstructionConfig::default()).unwrap();
        let arr = r.arrangement().unwrap();
        let mut labels = r.labeled_points.clone();
        labels.remove("t");
        assert!(matches!(
            LabeledGraph::from_construction(&arr, &labels, &r.rays),
            Err(GraphError::UnlabeledVertex(_))
        ));
    }

    #[test]
    fn diagnostics_explain_the_published_counts() {
        let (r, _) = run_construction(&ConstructionConfig::default()).unwrap();
        let d = count_diagnostics(&r).unwrap();
        assert_eq!(
            (d.segments_only_n, d.segments_only_m),
            (d.claimed_n, d.claimed_m)
        );
        assert_eq!(d.computed_n, 11);
    }
}
