//! Drawing routes over an arrangement.
//!
//! With `k >= 2` agents every edge is drawn exactly once: the odd-degree
//! vertices are paired up and the edges are split into open trails, one per
//! pair. A lone agent instead walks a single route that may repeat edges; the
//! repeated edges are a minimum set that leaves at most two odd vertices,
//! found by exhaustive pairing.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use super::trace::{ActionKind, Trace, TraceEntry};
use crate::arrangement::Arrangement;

/// Vertex indices along a route; consecutive entries share an edge.
pub type Trail = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("at least one agent is required")]
    NoAgents,
    #[error("arrangement has no edges")]
    NoEdges,
    #[error("arrangement is disconnected")]
    Disconnected,
    #[error("insufficient agents for single-pass drawing: {odd} odd vertices need {needed} agents, got {agents}")]
    InsufficientAgents {
        odd: usize,
        needed: usize,
        agents: usize,
    },
    #[error("{agents} agents but only {edges} edges")]
    TooManyAgents { agents: usize, edges: usize },
    #[error("{0} odd vertices is beyond exhaustive pairing")]
    TooManyOddVertices(usize),
}

const MAX_ODD: usize = 24;

pub fn plan_routes(arr: &Arrangement, k: usize) -> Result<Vec<Trail>, RouteError> {
    if k == 0 {
        return Err(RouteError::NoAgents);
    }
    if arr.edges().is_empty() {
        return Err(RouteError::NoEdges);
    }
    if arr.components() != 1 {
        return Err(RouteError::Disconnected);
    }
    let odd: Vec<usize> = (0..arr.vertices().len())
        .filter(|&v| arr.degree(v) % 2 == 1)
        .collect();
    if k == 1 {
        return single_walk(arr, &odd).map(|t| vec![t]);
    }
    let needed = (odd.len() / 2).max(1);
    if k < needed {
        return Err(RouteError::InsufficientAgents {
            odd: odd.len(),
            needed,
            agents: k,
        });
    }
    if k > arr.edges().len() {
        return Err(RouteError::TooManyAgents {
            agents: k,
            edges: arr.edges().len(),
        });
    }
    let mut trails = decompose(arr, &odd);
    while trails.len() < k {
        // split the longest trail in half
        let (i, _) = trails
            .iter()
            .enumerate()
            .max_by_key(|(i, t)| (t.len(), std::cmp::Reverse(*i)))
            .expect("non-empty");
        let t = trails.remove(i);
        let mid = (t.len() - 1) / 2;
        trails.insert(i, t[mid..].to_vec());
        trails.insert(i, t[..=mid].to_vec());
    }
    Ok(trails)
}

/// One walk per trail: agent `i + 1` walks trail `i` edge by edge.
pub fn routes_to_trace(arr: &Arrangement, trails: &[Trail]) -> Trace {
    let mut trace = Trace::default();
    for (i, trail) in trails.iter().enumerate() {
        for w in trail.windows(2) {
            trace.push(TraceEntry {
                agent: u8::try_from(i + 1).unwrap_or(u8::MAX),
                action: ActionKind::Walk,
                from: arr.vertices()[w[0]].clone(),
                to: arr.vertices()[w[1]].clone(),
            });
        }
    }
    trace
}

/// Edge-disjoint trails covering every edge once, one per odd pair.
fn decompose(arr: &Arrangement, odd: &[usize]) -> Vec<Trail> {
    let real = arr.edges().len();
    let mut edges: Vec<(usize, usize)> = arr.edges().to_vec();
    // Link the odd vertices pairwise except the first pair, which stays open.
    for pair in odd.chunks(2).skip(1) {
        edges.push((pair[0], pair[1]));
    }
    let start = odd.first().copied().unwrap_or(0);
    let circuit = euler_trail(arr.vertices().len(), &edges, start);

    let mut trails = Vec::new();
    let mut cur = vec![circuit.vertices[0]];
    for (i, &e) in circuit.edges.iter().enumerate() {
        if e >= real {
            trails.push(std::mem::take(&mut cur));
            cur.push(circuit.vertices[i + 1]);
        } else {
            cur.push(circuit.vertices[i + 1]);
        }
    }
    trails.push(cur);
    trails
}

fn single_walk(arr: &Arrangement, odd: &[usize]) -> Result<Trail, RouteError> {
    if odd.len() > MAX_ODD {
        return Err(RouteError::TooManyOddVertices(odd.len()));
    }
    let mut mult = vec![1u8; arr.edges().len()];
    let start = if odd.len() <= 2 {
        odd.first().copied().unwrap_or(0)
    } else {
        let adj = adjacency(arr);
        let dist: Vec<Vec<usize>> = odd.iter().map(|&s| bfs(&adj, s).0).collect();
        let pairs = best_pairing(odd.len(), &|i, j| dist[i][odd[j]]);
        let mut open = None;
        for (i, j, free) in pairs {
            if free {
                open = Some(odd[i]);
                continue;
            }
            let (_, parent) = bfs(&adj, odd[i]);
            let mut v = odd[j];
            while v != odd[i] {
                let (p, e) = parent[v].expect("connected");
                // symmetric difference keeps each repeat to one extra pass
                mult[e] ^= 0b11;
                v = p;
            }
        }
        open.expect("exactly one open pair")
    };
    let mut edges = Vec::new();
    for (e, &m) in mult.iter().enumerate() {
        for _ in 0..m {
            edges.push(arr.edges()[e]);
        }
    }
    Ok(euler_trail(arr.vertices().len(), &edges, start).vertices)
}

/// Minimum-cost pairing of `n` (even) items where exactly one pair is free
/// (the open ends of the walk). Returns `(i, j, free)` triples.
fn best_pairing(n: usize, cost: &dyn Fn(usize, usize) -> usize) -> Vec<(usize, usize, bool)> {
    fn solve(
        mask: u32,
        free_left: bool,
        n: usize,
        cost: &dyn Fn(usize, usize) -> usize,
        memo: &mut Memo,
    ) -> usize {
        if mask == 0 {
            return if free_left { usize::MAX } else { 0 };
        }
        if let Some(&(c, _)) = memo.get(&(mask, free_left)) {
            return c;
        }
        let i = mask.trailing_zeros() as usize;
        let mut best = (usize::MAX, None);
        for j in i + 1..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let rest = mask & !(1 << i) & !(1 << j);
            let mut options = vec![(cost(i, j), false)];
            if free_left {
                options.push((0, true));
            }
            for (c, free) in options {
                let sub = solve(rest, free_left && !free, n, cost, memo);
                if sub == usize::MAX {
                    continue;
                }
                if c + sub < best.0 {
                    best = (c + sub, Some((i, j, free)));
                }
            }
        }
        memo.insert((mask, free_left), best);
        best.0
    }
    let mut memo = HashMap::new();
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    solve(full, true, n, cost, &mut memo);
    let mut out = Vec::new();
    let (mut mask, mut free_left) = (full, true);
    while mask != 0 {
        let (_, choice) = memo[&(mask, free_left)];
        let (i, j, free) = choice.expect("solvable");
        out.push((i, j, free));
        mask &= !(1 << i) & !(1 << j);
        free_left &= !free;
    }
    out
}

type Adjacency = Vec<Vec<(usize, usize)>>;
type Memo = HashMap<(u32, bool), (usize, Option<(usize, usize, bool)>)>;

fn adjacency(arr: &Arrangement) -> Adjacency {
    let mut adj = vec![Vec::new(); arr.vertices().len()];
    for (e, &(u, v)) in arr.edges().iter().enumerate() {
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    for list in &mut adj {
        list.sort();
    }
    adj
}

#[allow(clippy::type_complexity)]
fn bfs(adj: &Adjacency, s: usize) -> (Vec<usize>, Vec<Option<(usize, usize)>>) {
    let mut dist = vec![usize::MAX; adj.len()];
    let mut parent = vec![None; adj.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &(v, e) in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = Some((u, e));
                q.push_back(v);
            }
        }
    }
    (dist, parent)
}

struct EulerTrail {
    vertices: Vec<usize>,
    /// Index into the input edge list of each step.
    edges: Vec<usize>,
}

/// Hierholzer's algorithm on a multigraph given as an edge list. `start` must
/// be odd when any vertex is odd. Neighbours are taken in edge-list order.
fn euler_trail(n: usize, edges: &[(usize, usize)], start: usize) -> EulerTrail {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    let mut cursor = vec![0usize; n];
    let mut used = vec![false; edges.len()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut out: Vec<(usize, Option<usize>)> = Vec::new();
    while let Some(&(v, via)) = stack.last() {
        let mut advanced = false;
        while cursor[v] < incident[v].len() {
            let e = incident[v][cursor[v]];
            cursor[v] += 1;
            if !used[e] {
                used[e] = true;
                let (a, b) = edges[e];
                stack.push((if a == v { b } else { a }, Some(e)));
                advanced = true;
                break;
            }
        }
        if !advanced {
            out.push((v, via));
            stack.pop();
        }
    }
    out.reverse();
    EulerTrail {
        vertices: out.iter().map(|&(v, _)| v).collect(),
        edges: out.iter().skip(1).map(|&(_, e)| e.expect("edge")).collect(),
    }
}

/// Traversal count per edge of a set of trails; `None` if a step is not an edge.
#[cfg(test)]
fn edge_usage(
    arr: &Arrangement,
    trails: &[Trail],
) -> Option<std::collections::BTreeMap<usize, usize>> {
    let mut used = std::collections::BTreeMap::new();
    for t in trails {
        for w in t.windows(2) {
            *used.entry(arr.edge_index(w[0], w[1])?).or_insert(0) += 1;
        }
    }
    Some(used)
}
