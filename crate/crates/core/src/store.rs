//! Block store: sequenced ingest into partition blocks, reads, searches,
//! access costs and persistence.
//!
//! Log layout: `WCDS`, version byte, then per record a little-endian `u32`
//! payload length, a `u8` address length, the address text `i,j,k:x` and the
//! payload bytes. Records appear in sequence order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::construction::{
    run_construction, ConstructionConfig, ConstructionError, ConstructionResult,
};
use crate::geometry::{GeometryError, Point2};
use crate::graph::{GraphError, LabeledGraph};
use crate::label::Label;
use crate::partition::{
    enumerate_partitions, partition_blocks, BlockAddress, BlockLayout, PartitionError,
    PartitionName, PartitionTable, Resolution, Side,
};
use crate::rational::{int, parse_rational, Rational, PQ};

pub const LOG_MAGIC: &[u8; 4] = b"WCDS";
pub const FORMAT_VERSION: u8 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("capacity exhausted; refine θ")]
    CapacityExhausted,
    #[error("unoccupied block {0}")]
    Unoccupied(BlockAddress),
    #[error("payload of {len} bytes exceeds block limit {limit}")]
    PayloadTooLarge { len: usize, limit: usize },
    #[error("access vertex {0} is not a node of the graph")]
    UnknownAccess(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("bad log header at byte {offset}")]
    BadMagic { offset: usize },
    #[error("unsupported format version {found} at byte {offset}")]
    Version { found: u8, offset: usize },
    #[error("truncated log at byte {offset}")]
    Truncated { offset: usize },
    #[error("bad log record at byte {offset}: {msg}")]
    Replay { offset: usize, msg: String },
    #[error("manifest line {line}: {msg}")]
    Manifest { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub seq: u64,
    pub payload: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AccessPoint(pub Label);

impl Default for AccessPoint {
    fn default() -> Self {
        AccessPoint(Label::new("m"))
    }
}

/// Data traffic per vertex and per undirected edge `(low, high)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DataCounters {
    pub vertices: BTreeMap<Label, u64>,
    pub edges: BTreeMap<(Label, Label), u64>,
}

impl DataCounters {
    fn charge(&mut self, path: &[Label]) {
        for v in path {
            *self.vertices.entry(v.clone()).or_default() += 1;
        }
        for w in path.windows(2) {
            let key = if w[0] <= w[1] {
                (w[0].clone(), w[1].clone())
            } else {
                (w[1].clone(), w[0].clone())
            };
            *self.edges.entry(key).or_default() += 1;
        }
    }

    pub fn edge_total(&self) -> u64 {
        self.edges.values().sum()
    }
}

/// Fill order over partition indices: mirror pairs by the left partner's
/// centroid (top to bottom, then left to right), left before right, faces on
/// the axis last.
pub fn flowware_schedule(table: &PartitionTable) -> Vec<usize> {
    let parts = table.partitions();
    let mut lefts: Vec<usize> = (0..parts.len())
        .filter(|&i| parts[i].side == Side::Left)
        .collect();
    lefts.sort_by(|&a, &b| {
        let (pa, pb) = (&parts[a].centroid, &parts[b].centroid);
        pb.y.cmp(&pa.y).then(pa.x.cmp(&pb.x))
    });
    let mut order = Vec::with_capacity(parts.len());
    for l in lefts {
        order.push(l);
        if let Some(r) = parts[l]
            .mirror
            .as_ref()
            .and_then(|m| table.position(m).ok())
        {
            if !order.contains(&r) {
                order.push(r);
            }
        }
    }
    for i in 0..parts.len() {
        if !order.contains(&i) {
            order.push(i);
        }
    }
    order
}

#[derive(Debug, Clone)]
pub struct BlockStore {
    config: ConstructionConfig,
    table: PartitionTable,
    graph: LabeledGraph,
    theta: Resolution,
    access: AccessPoint,
    schedule: Vec<usize>,
    /// Shortest path from the access vertex to each partition's nearest named vertex.
    routes: Vec<Vec<Label>>,
    layouts: Vec<BlockLayout>,
    /// Records per partition; partitions fill as prefixes, so a record's
    /// position is its block index.
    blocks: Vec<Vec<Record>>,
    by_seq: Vec<(usize, u64)>,
    cursor: usize,
    counters: DataCounters,
}

pub fn open_store(
    construction: &ConstructionResult,
    theta: Resolution,
    access: AccessPoint,
) -> Result<BlockStore, StoreError> {
    let arr = construction.arrangement()?;
    let table = enumerate_partitions(&arr, &construction.labeled_points)?;
    let graph =
        LabeledGraph::from_construction(&arr, &construction.labeled_points, &construction.rays)?;
    if !graph.nodes().contains(&access.0) {
        return Err(StoreError::UnknownAccess(access.0.to_string()));
    }
    let mut routes = Vec::with_capacity(table.len());
    for p in table.partitions() {
        let mut best: Option<Vec<Label>> = None;
        for l in &p.name.0 {
            let path = graph.shortest_path(access.0.as_str(), l.as_str())?;
            if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                best = Some(path);
            }
        }
        routes.push(best.expect("three names"));
    }
    let schedule = flowware_schedule(&table);
    let layouts = table
        .partitions()
        .iter()
        .map(|p| partition_blocks(p, &theta))
        .collect();
    Ok(BlockStore {
        config: construction.config.clone(),
        blocks: vec![Vec::new(); table.len()],
        table,
        graph,
        theta,
        access,
        schedule,
        routes,
        layouts,
        by_seq: Vec::new(),
        cursor: 0,
        counters: DataCounters::default(),
    })
}

impl BlockStore {
    pub fn table(&self) -> &PartitionTable {
        &self.table
    }

    pub fn graph(&self) -> &LabeledGraph {
        &self.graph
    }

    pub fn theta(&self) -> &Resolution {
        &self.theta
    }

    pub fn access(&self) -> &AccessPoint {
        &self.access
    }

    pub fn schedule(&self) -> &[usize] {
        &self.schedule
    }

    pub fn counters(&self) -> &DataCounters {
        &self.counters
    }

    pub fn capacity(&self) -> u64 {
        self.layouts.iter().map(|l| l.total).sum()
    }

    pub fn occupied(&self) -> u64 {
        self.by_seq.len() as u64
    }

    /// Largest payload a block takes: 64 bytes per unit of θ, at least one.
    pub fn payload_limit(&self) -> usize {
        let limit = (self.theta.theta() * int(64)).floor().to_integer();
        limit.to_usize().unwrap_or(usize::MAX).max(1)
    }

    /// Next address ingest would assign, if any.
    pub fn cursor(&self) -> Option<BlockAddress> {
        self.schedule[self.cursor..]
            .iter()
            .find(|&&p| (self.blocks[p].len() as u64) < self.layouts[p].total)
            .map(|&p| BlockAddress {
                name: self.table.partitions()[p].name.clone(),
                index: self.blocks[p].len() as u64,
            })
    }

    pub fn ingest(&mut self, payload: &[u8]) -> Result<BlockAddress, StoreError> {
        let limit = self.payload_limit();
        if payload.len() > limit {
            return Err(StoreError::PayloadTooLarge {
                len: payload.len(),
                limit,
            });
        }
        while self.cursor < self.schedule.len() {
            let p = self.schedule[self.cursor];
            if (self.blocks[p].len() as u64) < self.layouts[p].total {
                return Ok(self.place(p, payload.to_vec()));
            }
            self.cursor += 1;
        }
        Err(StoreError::CapacityExhausted)
    }

    fn place(&mut self, p: usize, payload: Vec<u8>) -> BlockAddress {
        let seq = self.by_seq.len() as u64;
        let index = self.blocks[p].len() as u64;
        self.blocks[p].push(Record { seq, payload });
        self.by_seq.push((p, index));
        self.counters.charge(&self.routes[p]);
        BlockAddress {
            name: self.table.partitions()[p].name.clone(),
            index,
        }
    }

    /// Halves θ for every partition. Occupied blocks keep their indices.
    pub fn refine_all(&mut self) {
        self.theta = self.theta.halved();
        for (i, p) in self.table.partitions().iter().enumerate() {
            self.layouts[i] = partition_blocks(p, &self.theta);
        }
        self.cursor = 0;
    }

    /// Partition index of a valid address at the current θ.
    fn locate(&self, addr: &BlockAddress) -> Result<usize, StoreError> {
        let p = self.table.position(&addr.name)?;
        let layout = &self.layouts[p];
        if addr.index >= layout.total {
            return Err(PartitionError::InvalidBlockIndex {
                index: addr.index,
                total: layout.total,
            }
            .into());
        }
        Ok(p)
    }

    pub fn read(&self, addr: &BlockAddress) -> Result<&Record, StoreError> {
        let p = self.locate(addr)?;
        self.blocks[p]
            .get(addr.index as usize)
            .ok_or_else(|| StoreError::Unoccupied(self.canonical(p, addr.index)))
    }

    fn canonical(&self, p: usize, index: u64) -> BlockAddress {
        BlockAddress {
            name: self.table.partitions()[p].name.clone(),
            index,
        }
    }

    /// Occupied addresses whose payload contains `pattern`, in fill order.
    pub fn search(&self, pattern: &[u8]) -> Vec<BlockAddress> {
        let mut hits = Vec::new();
        for &p in &self.schedule {
            for (i, r) in self.blocks[p].iter().enumerate() {
                if pattern.is_empty() || r.payload.windows(pattern.len()).any(|w| w == pattern) {
                    hits.push(self.canonical(p, i as u64));
                }
            }
        }
        hits
    }

    /// Hops from the access vertex to the nearest named vertex of the block's partition.
    pub fn access_cost(&self, addr: &BlockAddress) -> Result<usize, StoreError> {
        let p = self.locate(addr)?;
        Ok(self.routes[p].len() - 1)
    }

    /// Path the data counters are charged along for the block's partition.
    pub fn access_route(&self, addr: &BlockAddress) -> Result<&[Label], StoreError> {
        let p = self.table.position(&addr.name)?;
        Ok(&self.routes[p])
    }

    /// Records in sequence order with their addresses.
    pub fn records(&self) -> impl Iterator<Item = (BlockAddress, &Record)> + '_ {
        self.by_seq
            .iter()
            .map(|&(p, i)| (self.canonical(p, i), &self.blocks[p][i as usize]))
    }

    pub fn to_log(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(LOG_MAGIC);
        out.push(FORMAT_VERSION);
        for (addr, r) in self.records() {
            let text = addr.to_string();
            let len = u32::try_from(r.payload.len()).expect("payload fits u32");
            out.extend_from_slice(&len.to_le_bytes());
            out.push(u8::try_from(text.len()).expect("address fits 255 bytes"));
            out.extend_from_slice(text.as_bytes());
            out.extend_from_slice(&r.payload);
        }
        out
    }

    /// Replays a log into an empty store. Records must arrive in fill order.
    pub fn load_log(&mut self, bytes: &[u8]) -> Result<(), StoreError> {
        let take = |at: usize, n: usize| -> Result<&[u8], StoreError> {
            bytes.get(at..at + n).ok_or(StoreError::Truncated {
                offset: bytes.len(),
            })
        };
        if take(0, 4)? != LOG_MAGIC {
            return Err(StoreError::BadMagic { offset: 0 });
        }
        let version = take(4, 1)?[0];
        if version != FORMAT_VERSION {
            return Err(StoreError::Version {
                found: version,
                offset: 4,
            });
        }
        let mut at = 5;
        while at < bytes.len() {
            let start = at;
            let len = u32::from_le_bytes(take(at, 4)?.try_into().expect("4 bytes")) as usize;
            at += 4;
            let alen = take(at, 1)?[0] as usize;
            at += 1;
            let text = std::str::from_utf8(take(at, alen)?).map_err(|_| StoreError::Replay {
                offset: at,
                msg: "address is not UTF-8".into(),
            })?;
            at += alen;
            let payload = take(at, len)?.to_vec();
            at += len;
            let bad = |msg: String| StoreError::Replay { offset: start, msg };
            let addr: BlockAddress = text
                .parse()
                .map_err(|e: PartitionError| bad(e.to_string()))?;
            let p = self.locate(&addr).map_err(|e| bad(e.to_string()))?;
            if addr.index != self.blocks[p].len() as u64 {
                return Err(bad(format!("{addr} is out of fill order")));
            }
            self.place(p, payload);
        }
        self.cursor = 0;
        Ok(())
    }

    pub fn export_manifest(&self) -> Manifest {
        let partitions = self
            .table
            .partitions()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let layout = self.layouts[i].clone();
                (
                    p.name.clone(),
                    PartitionEntry {
                        rows: layout.rows,
                        total: layout.total,
                        occupied: self.blocks[i].len() as u64,
                    },
                )
            })
            .collect();
        Manifest {
            format_version: FORMAT_VERSION,
            anchor: self.config.anchor.clone(),
            scale: self.config.unit.clone(),
            theta: self.theta.clone(),
            access_vertex: self.access.0.clone(),
            capacity: self.capacity(),
            occupied: self.occupied(),
            partitions,
        }
    }
}

/// Rebuilds an empty store from a manifest, checking its partition table.
pub fn import_manifest(text: &str) -> Result<BlockStore, StoreError> {
    let m = Manifest::parse(text)?;
    let config = ConstructionConfig {
        anchor: m.anchor.clone(),
        unit: m.scale.clone(),
        theta: m.theta.theta().clone(),
    };
    let (result, _) = run_construction(&config)?;
    let store = open_store(
        &result,
        m.theta.clone(),
        AccessPoint(m.access_vertex.clone()),
    )?;
    let fresh = store.export_manifest();
    if fresh.partitions.len() != m.partitions.len() || fresh.capacity != m.capacity {
        return Err(StoreError::Manifest {
            line: 0,
            msg: "partition table does not match the construction".into(),
        });
    }
    for (name, e) in &m.partitions {
        match fresh.partitions.get(name) {
            Some(f) if f.rows == e.rows && f.total == e.total => {}
            _ => {
                return Err(StoreError::Manifest {
                    line: 0,
                    msg: format!("partition {name} does not match the construction"),
                })
            }
        }
    }
    Ok(store)
}

/// Manifest plus log back to a populated store; occupancy must agree.
pub fn restore(manifest: &str, log: &[u8]) -> Result<BlockStore, StoreError> {
    let m = Manifest::parse(manifest)?;
    let mut store = import_manifest(manifest)?;
    store.load_log(log)?;
    if store.export_manifest() != m {
        return Err(StoreError::Manifest {
            line: 0,
            msg: "log occupancy disagrees with manifest".into(),
        });
    }
    Ok(store)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionEntry {
    pub rows: Vec<u64>,
    pub total: u64,
    pub occupied: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub format_version: u8,
    pub anchor: Point2,
    pub scale: Rational,
    pub theta: Resolution,
    pub access_vertex: Label,
    pub capacity: u64,
    pub occupied: u64,
    pub partitions: BTreeMap<PartitionName, PartitionEntry>,
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines: BTreeMap<String, String> = BTreeMap::new();
        lines.insert("access_vertex".into(), self.access_vertex.to_string());
        lines.insert("anchor".into(), self.anchor.to_string());
        lines.insert("capacity".into(), self.capacity.to_string());
        lines.insert("format_version".into(), self.format_version.to_string());
        lines.insert("occupied".into(), self.occupied.to_string());
        lines.insert("scale".into(), PQ(&self.scale).to_string());
        lines.insert("theta".into(), self.theta.to_string());
        for (name, e) in &self.partitions {
            let rows: Vec<String> = e.rows.iter().map(u64::to_string).collect();
            lines.insert(
                format!("partition.{name}"),
                format!("{};{};{}", rows.join(","), e.total, e.occupied),
            );
        }
        for (k, v) in lines {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, StoreError> {
        let mut fields: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        let mut partitions = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let bad = |msg: &str| StoreError::Manifest {
                line: line_no,
                msg: msg.to_string(),
            };
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key=value"))?;
            if let Some(name) = k.strip_prefix("partition.") {
                let name: PartitionName = name.parse().map_err(|_| bad("bad partition name"))?;
                let parts: Vec<&str> = v.split(';').collect();
                let [rows, total, occupied] = parts.as_slice() else {
                    return Err(bad("expected rows;total;occupied"));
                };
                let rows = rows
                    .split(',')
                    .map(str::parse)
                    .collect::<Result<Vec<u64>, _>>()
                    .map_err(|_| bad("bad rows"))?;
                partitions.insert(
                    name,
                    PartitionEntry {
                        rows,
                        total: total.parse().map_err(|_| bad("bad total"))?,
                        occupied: occupied.parse().map_err(|_| bad("bad occupied"))?,
                    },
                );
            } else if fields.insert(k, (line_no, v)).is_some() {
                return Err(bad("duplicate key"));
            }
        }
        let get = |k: &str| {
            fields.get(k).copied().ok_or_else(|| StoreError::Manifest {
                line: 0,
                msg: format!("missing key {k}"),
            })
        };
        let num = |k: &str| -> Result<u64, StoreError> {
            let (line, v) = get(k)?;
            v.parse().map_err(|_| StoreError::Manifest {
                line,
                msg: format!("bad {k}"),
            })
        };
        let (line, v) = get("format_version")?;
        let format_version: u8 = v.parse().map_err(|_| StoreError::Manifest {
            line,
            msg: "bad format_version".into(),
        })?;
        if format_version != FORMAT_VERSION {
            return Err(StoreError::Manifest {
                line,
                msg: format!("unsupported format version {format_version}"),
            });
        }
        let rational = |k: &str| -> Result<Rational, StoreError> {
            let (line, v) = get(k)?;
            parse_rational(v).map_err(|e| StoreError::Manifest {
                line,
                msg: e.to_string(),
            })
        };
        let (line, v) = get("anchor")?;
        let anchor = v
            .split_once(',')
            .and_then(|(x, y)| {
                Some(Point2::new(
                    parse_rational(x).ok()?,
                    parse_rational(y).ok()?,
                ))
            })
            .ok_or(StoreError::Manifest {
                line,
                msg: "bad anchor".into(),
            })?;
        let (line, _) = get("theta")?;
        let theta = Resolution::new(rational("theta")?).map_err(|e| StoreError::Manifest {
            line,
            msg: e.to_string(),
        })?;
        Ok(Manifest {
            format_version,
            anchor,
            scale: rational("scale")?,
            theta,
            access_vertex: Label::new(get("access_vertex")?.1),
            capacity: num("capacity")?,
            occupied: num("occupied")?,
            partitions,
        })
    }
}
