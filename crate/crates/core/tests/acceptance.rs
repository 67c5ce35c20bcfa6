//! Acceptance criteria, one line each. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use walker_core::construction::{routes_to_trace, verify_trace};
use walker_core::graph::count_diagnostics;
use walker_core::partition::BlockDescriptor;
use walker_core::rational::{int, ratio};
use walker_core::render::build_artifacts;
use walker_core::store::restore;
use walker_core::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn walker() -> (ConstructionResult, Trace) {
    run_construction(&ConstructionConfig::default()).expect("construction runs")
}

fn names(ls: impl IntoIterator<Item = impl ToString>) -> BTreeSet<String> {
    ls.into_iter().map(|l| l.to_string()).collect()
}

fn block_calibration() -> Check {
    let l = block_layout(&int(100), &Resolution::default());
    ensure(l.rows == [11, 10, 8, 6, 4, 2] && l.total == 41, || {
        format!("rows {:?} total {}", l.rows, l.total)
    })?;
    let (r, _) = walker();
    let table = enumerate_partitions(&r.arrangement().unwrap(), &r.labeled_points).unwrap();
    let one = Resolution::default();
    let addr: BlockAddress = "{5, 0, c : 37}".parse().map_err(|e| format!("{e}"))?;
    let (p, d) = table
        .resolve_address(&addr, &one)
        .map_err(|e| e.to_string())?;
    ensure(d == BlockDescriptor { row: 4, offset: 2 }, || {
        format!("{{5,0,c:37}} -> {d:?}")
    })?;
    let past: BlockAddress = "5,0,c:41".parse().unwrap();
    ensure(table.resolve_address(&past, &one).is_err(), || {
        "index 41 accepted".into()
    })?;
    Ok(format!(
        "rows [11,10,8,6,4,2] total 41; {{5,0,c:37}} is {} row 4 offset 2; :41 rejected",
        p.name
    ))
}

fn mirror_symmetry() -> Check {
    let (r, _) = walker();
    let table = enumerate_partitions(&r.arrangement().unwrap(), &r.labeled_points).unwrap();
    let mut pairs = 0;
    for theta in [ratio(1, 1), ratio(1, 2), ratio(1, 4), ratio(2, 1)] {
        let res = Resolution::new(theta).unwrap();
        for p in table.partitions() {
            let m = table
                .mirror_of(p)
                .ok_or_else(|| format!("{} has no mirror", p.name))?;
            let (a, b) = (
                partition_blocks(p, &res).total,
                partition_blocks(m, &res).total,
            );
            ensure(a == b, || {
                format!("{} {a} vs {} {b} at theta {res}", p.name, m.name)
            })?;
            pairs += 1;
        }
    }
    let one = Resolution::default();
    let right = table
        .get(&"5,0,c".parse().unwrap())
        .map_err(|e| e.to_string())?;
    let left = table
        .get(&"4,0,b".parse().unwrap())
        .map_err(|e| e.to_string())?;
    let (a, b) = (
        partition_blocks(right, &one).total,
        partition_blocks(left, &one).total,
    );
    ensure(a == 41 && b == 41, || {
        format!("{{5,0,c}}={a} {{4,0,b}}={b}")
    })?;
    Ok(format!(
        "{pairs} partition/theta checks equal; {{5,0,c}}={{4,0,b}}=41"
    ))
}

fn construction_geometry() -> Check {
    // independent vector arithmetic: midpoints and point reflections
    let p = |x: Rational, y: Rational| Point2::new(x, y);
    let half = |a: &Point2, b: &Point2| p((&a.x + &b.x) / int(2), (&a.y + &b.y) / int(2));
    let twice = |from: &Point2, through: &Point2| {
        p(&through.x * int(2) - &from.x, &through.y * int(2) - &from.y)
    };
    let len2 = |a: &Point2, b: &Point2| {
        let (dx, dy) = (&a.x - &b.x, &a.y - &b.y);
        &dx * &dx + &dy * &dy
    };
    let t = p(int(0), int(5));
    let one = p(int(-5), int(-5));
    let two = p(int(5), int(-5));
    let a = half(&one, &two);
    let (b, c) = (half(&one, &t), half(&t, &two));
    let (three, four, five) = (twice(&t, &a), twice(&two, &b), twice(&one, &c));
    let m = p(int(0), ratio(-5, 3));

    let (r, _) = walker();
    for (l, want) in [
        ("c", p(ratio(5, 2), int(0))),
        ("b", p(ratio(-5, 2), int(0))),
        ("3", p(int(0), int(-15))),
        ("5", p(int(10), int(5))),
        ("4", p(int(-10), int(5))),
        ("m", m.clone()),
    ] {
        ensure(r.point(l) == &want, || {
            format!("{l} = {} want {want}", r.point(l))
        })?;
    }
    for (l, oracle) in [
        ("c", &c),
        ("b", &b),
        ("3", &three),
        ("4", &four),
        ("5", &five),
    ] {
        ensure(r.point(l) == oracle, || {
            format!("{l} disagrees with oracle {oracle}")
        })?;
    }
    let d = &r.saved_distances;
    ensure(d.d4 == int(400) && d.d4 == len2(&t, &three), || {
        format!("d4^2 = {}", d.d4)
    })?;
    ensure(d.d5 == int(325) && d.d5 == len2(&one, &five), || {
        format!("d5^2 = {}", d.d5)
    })?;
    ensure(d.d6 == int(325) && d.d6 == len2(&two, &four), || {
        format!("d6^2 = {}", d.d6)
    })?;
    Ok(
        "c=(5/2,0) b=(-5/2,0) 3=(0,-15) 5=(10,5) 4=(-10,5) m=(0,-5/3); d4=20, d5=d6=sqrt(325)"
            .into(),
    )
}

fn venter_adjacency() -> Check {
    let (r, _) = walker();
    let g = LabeledGraph::from_walker(&r).map_err(|e| e.to_string())?;
    let out = names(g.out_neighbors("m").unwrap());
    let inn = names(g.in_neighbors("m").unwrap());
    ensure(out == names(["a", "b", "c"]), || {
        format!("out(m) = {out:?}")
    })?;
    ensure(inn == names(["0", "1", "2"]), || format!("in(m) = {inn:?}"))?;
    Ok("out(m)={a,b,c} in(m)={0,1,2}".into())
}

fn arrangement_structure() -> Check {
    let (r, _) = walker();
    let arr = r.arrangement().map_err(|e| e.to_string())?;
    let labels = arr.vertex_labels(&r.labeled_points);
    let labeled = labels.iter().filter(|l| l.is_some()).count();
    let (v, e, f) = (arr.vertices().len(), arr.edges().len(), arr.faces().len());
    let diag = count_diagnostics(&r).map_err(|e| e.to_string())?;
    let note = format!(
        "published n={} m={}; segments alone n={} m={}",
        diag.claimed_n, diag.claimed_m, diag.segments_only_n, diag.segments_only_m
    );
    ensure(arr.euler_holds(), || {
        format!("Euler fails: V={v} E={e} F={f}")
    })?;
    ensure(labeled == 11 && v == 11, || {
        format!("{labeled} labeled of {v} vertices")
    })?;
    ensure(e == 20 && f == 10, || {
        format!("computed {v} vertices, {e} unit edges, {f} bounded faces (expected 20 edges, 10 faces); Euler holds; {note}")
    })?;
    Ok(format!(
        "11 vertices, 20 edges, 10 faces, Euler holds; {note}"
    ))
}

/// Fewest edges walked twice so that at most two vertices remain odd.
fn min_duplications(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut base = vec![0u8; n];
    for &(u, v) in edges {
        base[u] ^= 1;
        base[v] ^= 1;
    }
    fn search(k: usize, start: usize, edges: &[(usize, usize)], par: &mut [u8]) -> bool {
        if k == 0 {
            return par.iter().filter(|&&p| p == 1).count() <= 2;
        }
        for e in start..edges.len() {
            let (u, v) = edges[e];
            par[u] ^= 1;
            par[v] ^= 1;
            let found = search(k - 1, e + 1, edges, par);
            par[u] ^= 1;
            par[v] ^= 1;
            if found {
                return true;
            }
        }
        false
    }
    (0..=edges.len())
        .find(|&k| search(k, 0, edges, &mut base))
        .expect("duplicating every edge makes all degrees even")
}

fn drawing_rule() -> Check {
    let (r, _) = walker();
    let arr = r.arrangement().map_err(|e| e.to_string())?;
    let m = arr.edges().len();
    let three = plan_routes(&arr, 3).map_err(|e| e.to_string())?;
    ensure(three.len() == 3, || {
        format!("{} trails for 3 agents", three.len())
    })?;
    let v3 = verify_trace(&routes_to_trace(&arr, &three), &arr).map_err(|e| e.to_string())?;
    ensure(v3.counts.edges.iter().all(|&c| c == 1), || {
        format!("k=3 counts {:?}", v3.counts.edges)
    })?;

    let single = plan_routes(&arr, 1).map_err(|e| e.to_string())?;
    let v1 = verify_trace(&routes_to_trace(&arr, &single), &arr).map_err(|e| e.to_string())?;
    ensure(v1.accepted(), || format!("k=1 walk rejected: {v1:?}"))?;
    ensure(v1.counts.edges.iter().all(|&c| c == 1 || c == 2), || {
        format!("k=1 counts {:?}", v1.counts.edges)
    })?;
    let steps: u32 = v1.counts.edges.iter().sum();
    let dup = min_duplications(arr.vertices().len(), arr.edges());
    ensure(steps as usize >= 22, || format!("only {steps} traversals"))?;
    ensure(steps as usize == m + dup, || {
        format!("{steps} traversals, exhaustive minimum {}", m + dup)
    })?;
    Ok(format!(
        "k=3: 3 disjoint trails cover all {m} edges once (edge count itself is criterion 5); k=1: {steps} traversals, each edge 1-2 times, exhaustive minimum {}",
        m + dup
    ))
}

fn undirected(g: &LabeledGraph) -> BTreeMap<Label, BTreeSet<Label>> {
    let mut adj: BTreeMap<Label, BTreeSet<Label>> = g
        .nodes()
        .iter()
        .map(|l| (l.clone(), BTreeSet::new()))
        .collect();
    for u in g.nodes() {
        for v in g.nodes() {
            if g.has_edge(u.as_str(), v.as_str()).unwrap() {
                adj.get_mut(u).unwrap().insert(v.clone());
                adj.get_mut(v).unwrap().insert(u.clone());
            }
        }
    }
    adj
}

fn graph_claims() -> Check {
    let (r, _) = walker();
    let g = LabeledGraph::from_walker(&r).map_err(|e| e.to_string())?;
    let adj = undirected(&g);
    let nodes: Vec<&Label> = adj.keys().collect();
    let n = nodes.len();

    // independent Hamiltonian check: subset dynamic programme over end vertices
    let mut reach = vec![0u32; 1 << n];
    for v in 0..n {
        reach[1 << v] = 1 << v;
    }
    for mask in 1..(1usize << n) {
        let ends = reach[mask];
        for v in (0..n).filter(|v| ends >> v & 1 == 1) {
            for w in (0..n).filter(|w| mask >> w & 1 == 0) {
                if adj[nodes[v]].contains(nodes[w]) {
                    reach[mask | 1 << w] |= 1 << w;
                }
            }
        }
    }
    let exists = reach[(1 << n) - 1] != 0;
    let ham = g.hamiltonian_path();
    ensure(ham.is_some() == exists, || {
        format!("search says {}, oracle says {exists}", ham.is_some())
    })?;
    let ham_text = match &ham {
        Some(p) => {
            let distinct: BTreeSet<&Label> = p.iter().collect();
            let ok = distinct.len() == n && p.windows(2).all(|w| adj[&w[0]].contains(&w[1]));
            ensure(ok && g.is_hamiltonian_path(p), || {
                format!("witness {p:?} invalid")
            })?;
            let s: Vec<&str> = p.iter().map(|l| l.as_str()).collect();
            format!("Hamiltonian path confirmed: {}", s.join("-"))
        }
        None => "no Hamiltonian path (refuted)".into(),
    };

    let dominates = |set: &[&Label]| {
        nodes
            .iter()
            .all(|v| set.contains(v) || set.iter().any(|s| adj[*s].contains(*v)))
    };
    ensure(!nodes.iter().any(|v| dominates(&[v])), || {
        "a single vertex dominates".into()
    })?;
    let mut witnesses = Vec::new();
    for (i, u) in nodes.iter().enumerate() {
        for v in &nodes[i + 1..] {
            if dominates(&[u, v]) {
                witnesses.push(format!("{{{u},{v}}}"));
            }
        }
    }
    let found = g.min_dominating_set().map_err(|e| e.to_string())?;
    ensure(
        names(&found) == names(["a", "t"]) && g.is_dominating(&found),
        || format!("min dominating set {found:?}"),
    )?;
    ensure(witnesses.contains(&"{a,t}".to_string()), || {
        "{a,t} not dominating".into()
    })?;
    Ok(format!(
        "{ham_text}; minimum dominating set size 2, witness {{a,t}} (all size-2 sets: {})",
        witnesses.join(" ")
    ))
}

fn traversal_bounds() -> Check {
    let (r, _) = walker();
    let g = LabeledGraph::from_walker(&r).map_err(|e| e.to_string())?;
    let (n, m) = (g.node_count(), g.edge_count());
    let (mut max_nodes, mut max_edges) = (0, 0);
    for s in g.nodes() {
        for mode in [Mode::BreadthFirst, Mode::DepthFirst] {
            let rep = g.traverse(s.as_str(), mode).map_err(|e| e.to_string())?;
            ensure(
                rep.node_inspections <= n && rep.edge_inspections <= 2 * m,
                || {
                    format!(
                        "{mode:?} from {s}: {} nodes {} edges",
                        rep.node_inspections, rep.edge_inspections
                    )
                },
            )?;
            max_nodes = max_nodes.max(rep.node_inspections);
            max_edges = max_edges.max(rep.edge_inspections);
        }
    }
    Ok(format!(
        "max {max_nodes} <= n={n} nodes, max {max_edges} <= 2m={} edges",
        2 * m
    ))
}

fn bfs_hops(adj: &BTreeMap<Label, BTreeSet<Label>>, from: &Label) -> BTreeMap<Label, usize> {
    let mut dist = BTreeMap::from([(from.clone(), 0)]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        for v in &adj[&u] {
            if !dist.contains_key(v) {
                dist.insert(v.clone(), d + 1);
                queue.push_back(v.clone());
            }
        }
    }
    dist
}

fn data_plane() -> Check {
    let (r, _) = walker();
    let fresh =
        open_store(&r, Resolution::default(), AccessPoint::default()).map_err(|e| e.to_string())?;
    let capacity = fresh.capacity() as usize;
    let adj = undirected(fresh.graph());
    let dist = bfs_hops(&adj, &fresh.access().0);
    let hops: BTreeMap<PartitionName, usize> = fresh
        .table()
        .partitions()
        .iter()
        .map(|p| {
            (
                p.name.clone(),
                p.name.0.iter().map(|l| dist[l]).min().unwrap(),
            )
        })
        .collect();
    let limit = fresh.payload_limit();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut full_hits = 0;
    for round in 0..1000 {
        let mut s = fresh.clone();
        let len = rng.gen_range(0..=capacity + 3);
        let mut written: Vec<(BlockAddress, Vec<u8>)> = Vec::new();
        let mut expected_hops = 0u64;
        for i in 0..len {
            let size = rng.gen_range(0..=limit);
            let payload: Vec<u8> = (0..size).map(|_| rng.gen()).collect();
            match s.ingest(&payload) {
                Ok(a) => {
                    expected_hops += hops[&a.name] as u64;
                    written.push((a, payload));
                }
                Err(StoreError::CapacityExhausted) if i >= capacity => full_hits += 1,
                Err(e) => return Err(format!("round {round} ingest {i}: {e}")),
            }
        }
        let distinct: BTreeSet<&BlockAddress> = written.iter().map(|(a, _)| a).collect();
        ensure(distinct.len() == written.len(), || {
            format!("round {round}: duplicate address")
        })?;
        ensure(s.occupied() == written.len() as u64, || {
            format!("round {round}: occupancy")
        })?;
        ensure(s.counters().edge_total() == expected_hops, || {
            format!(
                "round {round}: counters {} vs bfs {expected_hops}",
                s.counters().edge_total()
            )
        })?;
        let back = restore(&s.export_manifest().to_string(), &s.to_log())
            .map_err(|e| format!("round {round}: reload: {e}"))?;
        for (a, p) in &written {
            let live = &s.read(a).map_err(|e| e.to_string())?.payload;
            let loaded = &back.read(a).map_err(|e| e.to_string())?.payload;
            ensure(live == p && loaded == p, || {
                format!("round {round}: {a} payload differs")
            })?;
        }
    }
    ensure(full_hits > 0, || "no sequence reached capacity".into())?;

    let mut s = fresh.clone();
    for _ in 0..capacity {
        s.ingest(b"fill").map_err(|e| e.to_string())?;
    }
    ensure(
        s.ingest(b"more") == Err(StoreError::CapacityExhausted),
        || "full store accepted".into(),
    )?;
    s.refine_all();
    let a = s
        .ingest(b"more")
        .map_err(|e| format!("after refine: {e}"))?;
    ensure(
        s.read(&a).map(|r| r.payload.as_slice()) == Ok(b"more"),
        || "refined read".into(),
    )?;
    Ok(format!(
        "1000 sequences (capacity {capacity}, {full_hits} overflow attempts rejected): unique addresses, reads, reload, counters ok; refine admits {a}"
    ))
}

fn determinism() -> Check {
    let run = || {
        let (r, t) = walker();
        build_artifacts(&r, &t, &Resolution::default()).map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.len() == b.len(), || "artifact sets differ".into())?;
    for ((na, ba), (nb, bb)) in a.iter().zip(&b) {
        ensure(na == nb && ba.as_bytes() == bb.as_bytes(), || {
            format!("{na} differs between builds")
        })?;
    }
    let list: Vec<&str> = a.iter().map(|(n, _)| *n).collect();
    Ok(format!("byte-identical: {}", list.join(", ")))
}

type Criterion = (&'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("block calibration", 1, block_calibration),
        ("mirror symmetry", 1, mirror_symmetry),
        ("construction geometry", 1, construction_geometry),
        ("venter adjacency", 10, venter_adjacency),
        ("arrangement structure", 10, arrangement_structure),
        ("drawing rule", 10, drawing_rule),
        ("graph claims", 10, graph_claims),
        ("traversal counter bounds", 10, traversal_bounds),
        ("data-plane properties", 30, data_plane),
        ("determinism", 10, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > Duration::from_secs(*limit) => {
                Err(format!("over time limit ({detail})"))
            }
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{tag} {:>2} {name} [{:.2}s / {limit}s]: {detail}",
            i + 1,
            took.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
