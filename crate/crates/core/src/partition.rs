//! Addressable partitions (bounded faces) and their block layouts.
//!
//! A partition is named by three of its boundary labels. Blocks are indexed
//! slots laid out in rows from the partition's base edge inward; the
//! resolution `theta` (grid units per block) sets how many.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::geometry::{face_centroid, Point2};
use crate::label::Label;
use crate::rational::{floor_sqrt, int, parse_rational, Rational, PQ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("theta must be positive")]
    NonPositiveTheta,
    #[error("unnameable face {0}: fewer than 3 labelled boundary vertices")]
    UnnameableFace(usize),
    #[error("unknown partition {0}")]
    UnknownPartition(String),
    #[error("invalid block index {index} (valid 0..{total})")]
    InvalidBlockIndex { index: u64, total: u64 },
    #[error("malformed address `{0}` (expected i,j,k:x)")]
    MalformedAddress(String),
    #[error("malformed partition name `{0}` (expected i,j,k)")]
    MalformedName(String),
    #[error("degenerate face {0}")]
    DegenerateFace(usize),
}

/// Grid units per block edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Resolution(Rational);

impl Resolution {
    pub fn new(theta: Rational) -> Result<Self, PartitionError> {
        if !theta.is_positive() {
            return Err(PartitionError::NonPositiveTheta);
        }
        Ok(Resolution(theta))
    }

    pub fn theta(&self) -> &Rational {
        &self.0
    }

    pub fn halved(&self) -> Resolution {
        Resolution(&self.0 / int(2))
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution(int(1))
    }
}

impl FromStr for Resolution {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_rational(s).map_err(|_| PartitionError::NonPositiveTheta)?;
        Resolution::new(r)
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PQ(&self.0).fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionName(pub [Label; 3]);

impl fmt::Display for PartitionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k] = &self.0;
        write!(f, "{i},{j},{k}")
    }
}

impl FromStr for PartitionName {
    type Err = PartitionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s
            .trim_matches(|c| c == '{' || c == '}')
            .split(',')
            .collect();
        match parts.as_slice() {
            [i, j, k] if [i, j, k].iter().all(|p| !p.trim().is_empty()) => Ok(PartitionName([
                Label::new(i.trim()),
                Label::new(j.trim()),
                Label::new(k.trim()),
            ])),
            _ => Err(PartitionError::MalformedName(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockAddress {
    pub name: PartitionName,
    pub index: u64,
}

impl fmt::Display for BlockAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.index)
    }
}

impl FromStr for BlockAddress {
    type Err = PartitionError;

    /// Accepts `i,j,k:x`, also with braces and spaces as in `{5, 0, c : 37}`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PartitionError::MalformedAddress(s.to_string());
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let (name, index) = inner.rsplit_once(':').ok_or_else(bad)?;
        Ok(BlockAddress {
            name: name.parse().map_err(|_| bad())?,
            index: index.trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    Left,
    Axis,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub name: PartitionName,
    /// Name the partition is also known by, with the axis vertex `t` read as `0`.
    pub alias: Option<PartitionName>,
    pub face: usize,
    pub boundary: Vec<Label>,
    pub polygon: Vec<Point2>,
    pub base_edge: (Label, Label),
    /// Squared length of the base edge.
    pub base_len2: Rational,
    pub centroid: Point2,
    pub side: Side,
    pub mirror: Option<PartitionName>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub rows: Vec<u64>,
    pub total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockDescriptor {
    pub row: usize,
    pub offset: u64,
}

/// Rows of blocks from a base edge of squared length `len2`: the edge row
/// holds `floor(L/theta) + 1` blocks, then even rows `2j, 2(j-1), .., 2` with
/// `j = floor((first - 1) / 2)`.
pub fn block_layout(len2: &Rational, theta: &Resolution) -> BlockLayout {
    assert!(len2.is_positive(), "base edge must have positive length");
    let ratio2 = len2 / (theta.theta() * theta.theta());
    let first = floor_sqrt(&ratio2).to_u64().expect("block count fits u64") + 1;
    let j = (first - 1) / 2;
    let mut rows = vec![first];
    rows.extend((1..=j).rev().map(|i| 2 * i));
    BlockLayout {
        rows,
        total: first + j * (j + 1),
    }
}

pub fn partition_blocks(p: &Partition, theta: &Resolution) -> BlockLayout {
    block_layout(&p.base_len2, theta)
}

impl BlockLayout {
    pub fn locate(&self, index: u64) -> Option<BlockDescriptor> {
        let mut start = 0;
        for (row, &count) in self.rows.iter().enumerate() {
            if index < start + count {
                return Some(BlockDescriptor {
                    row,
                    offset: index - start,
                });
            }
            start += count;
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub theta: Resolution,
    pub layout: BlockLayout,
    /// `(old index, new index)` for every occupied block, in order.
    pub remap: Vec<(u64, u64)>,
}

/// Halves `theta` for `p`. Occupied blocks keep their rank: the k-th occupied
/// block moves to index k.
pub fn refine(p: &Partition, theta: &Resolution, occupied: &[u64]) -> Refinement {
    let next = theta.halved();
    let layout = partition_blocks(p, &next);
    let mut sorted = occupied.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let remap = sorted
        .into_iter()
        .enumerate()
        .map(|(rank, old)| (old, rank as u64))
        .collect();
    Refinement {
        theta: next,
        layout,
        remap,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    partitions: Vec<Partition>,
}

/// One partition per bounded face. Names take three boundary labels by
/// precedence (numbered endpoint, `0`, letter, `m`, `t`), starting at the
/// highest and following the boundary counterclockwise on the right of the
/// `0`-`3` axis and clockwise on its left, so mirror partners carry mirrored
/// names.
pub fn enumerate_partitions(
    arr: &Arrangement,
    labels: &BTreeMap<Label, Point2>,
) -> Result<PartitionTable, PartitionError> {
    let by_vertex = arr.vertex_labels(labels);
    let axis = match (labels.get("0"), labels.get("3")) {
        (Some(a), Some(b)) if a != b => Some((a.clone(), b.clone())),
        _ => None,
    };
    let mut parts = Vec::new();
    for (fi, face) in arr.faces().iter().enumerate() {
        let polygon = arr.face_polygon(fi);
        let centroid = face_centroid(&polygon).map_err(|_| PartitionError::DegenerateFace(fi))?;
        let side = match &axis {
            Some((a, b)) => match b.sub(a).cross(&centroid.sub(a)) {
                c if c.is_positive() => Side::Right,
                c if c.is_zero() => Side::Axis,
                _ => Side::Left,
            },
            None => Side::Axis,
        };
        let ring: Vec<(usize, &Label)> = face
            .boundary
            .iter()
            .enumerate()
            .filter_map(|(pos, &v)| by_vertex[v].as_ref().map(|l| (pos, l)))
            .collect();
        if ring.len() < 3 {
            return Err(PartitionError::UnnameableFace(fi));
        }
        let mut chosen: Vec<&Label> = ring.iter().map(|(_, l)| *l).collect();
        chosen.sort_by_key(|l| (l.name_class(), (*l).clone()));
        chosen.truncate(3);
        let head = ring
            .iter()
            .position(|(_, l)| *l == chosen[0])
            .expect("head on ring");
        let n = ring.len();
        let walk: Vec<&Label> = (0..n)
            .map(|i| {
                let k = if side == Side::Left {
                    (head + n - i) % n
                } else {
                    (head + i) % n
                };
                ring[k].1
            })
            .filter(|l| chosen.contains(l))
            .collect();
        let name = PartitionName([walk[0].clone(), walk[1].clone(), walk[2].clone()]);

        let b = &face.boundary;
        let mut base: Option<(Rational, bool, (Label, Label))> = None;
        for i in 0..b.len() {
            let (u, v) = (b[i], b[(i + 1) % b.len()]);
            let len2 = arr.vertices()[u].dist2(&arr.vertices()[v]);
            let outer = arr
                .edge_index(u, v)
                .is_some_and(|e| arr.on_outer_boundary(e));
            let lu = by_vertex[u].clone().unwrap_or_else(|| Label::new("?"));
            let lv = by_vertex[v].clone().unwrap_or_else(|| Label::new("?"));
            let pair = if lu <= lv { (lu, lv) } else { (lv, lu) };
            let better = match &base {
                None => true,
                Some((l, o, p)) => {
                    (&len2, outer, std::cmp::Reverse(&pair)) > (l, *o, std::cmp::Reverse(p))
                }
            };
            if better {
                base = Some((len2, outer, pair));
            }
        }
        let (base_len2, _, base_edge) = base.expect("face has edges");
        parts.push(Partition {
            name,
            alias: None,
            face: fi,
            boundary: ring.iter().map(|(_, l)| (*l).clone()).collect(),
            polygon,
            base_edge,
            base_len2,
            centroid,
            side,
            mirror: None,
        });
    }

    if let Some((a, b)) = &axis {
        let keys: Vec<Vec<Point2>> = parts
            .iter()
            .map(|p| {
                let mut k = p.polygon.clone();
                k.sort();
                k
            })
            .collect();
        for i in 0..parts.len() {
            let mut reflected: Vec<Point2> = parts[i]
                .polygon
                .iter()
                .map(|q| q.reflect_across(a, b))
                .collect();
            reflected.sort();
            if let Some(j) = keys.iter().position(|k| *k == reflected) {
                parts[i].mirror = Some(parts[j].name.clone());
            }
        }
    }

    parts.sort_by(|x, y| x.name.cmp(&y.name));
    let names: Vec<PartitionName> = parts.iter().map(|p| p.name.clone()).collect();
    for p in &mut parts {
        if p.name.0.iter().any(|l| l.as_str() == "t") {
            let alias = PartitionName(p.name.0.clone().map(|l| {
                if l.as_str() == "t" {
                    Label::new("0")
                } else {
                    l
                }
            }));
            if !names.contains(&alias) {
                p.alias = Some(alias);
            }
        }
    }
    Ok(PartitionTable { partitions: parts })
}

impl PartitionTable {
    /// Partitions in canonical name order.
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Looks a partition up by name or alias.
    pub fn get(&self, name: &PartitionName) -> Result<&Partition, PartitionError> {
        self.position(name).map(|i| &self.partitions[i])
    }

    pub fn position(&self, name: &PartitionName) -> Result<usize, PartitionError> {
        self.partitions
            .iter()
            .position(|p| p.name == *name || p.alias.as_ref() == Some(name))
            .ok_or_else(|| PartitionError::UnknownPartition(name.to_string()))
    }

    pub fn mirror_of(&self, p: &Partition) -> Option<&Partition> {
        p.mirror.as_ref().and_then(|m| self.get(m).ok())
    }

    /// Maps `{i,j,k : x}` to a row and offset, rows counted from the base edge.
    pub fn resolve_address(
        &self,
        addr: &BlockAddress,
        theta: &Resolution,
    ) -> Result<(&Partition, BlockDescriptor), PartitionError> {
        let p = self.get(&addr.name)?;
        let layout = partition_blocks(p, theta);
        let d = layout
            .locate(addr.index)
            .ok_or(PartitionError::InvalidBlockIndex {
                index: addr.index,
                total: layout.total,
            })?;
        Ok((p, d))
    }

    /// `i,j,k<TAB>alias<TAB>theta=p/q<TAB>rows=r0,r1,..<TAB>total=N` per partition.
    pub fn to_text(&self, theta: &Resolution) -> String {
        let mut out = String::new();
        for p in &self.partitions {
            let layout = partition_blocks(p, theta);
            let rows: Vec<String> = layout.rows.iter().map(u64::to_string).collect();
            let alias = p
                .alias
                .as_ref()
                .map_or_else(|| "-".to_string(), ToString::to_string);
            out.push_str(&format!(
                "{}\t{}\ttheta={}\trows={}\ttotal={}\n",
                p.name,
                alias,
                theta,
                rows.join(","),
                layout.total
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{run_construction, ConstructionConfig};
    use crate::rational::ratio;

    fn table() -> PartitionTable {
        let (r, _) = run_construction(&ConstructionConfig::default()).unwrap();
        enumerate_partitions(&r.arrangement().unwrap(), &r.labeled_points).unwrap()
    }

    fn name(s: &str) -> PartitionName {
        s.parse().unwrap()
    }

    fn theta(p: i64, q: i64) -> Resolution {
        Resolution::new(ratio(p, q)).unwrap()
    }

    #[test]
    fn calibrated_layout() {
        let l = block_layout(&int(100), &Resolution::default());
        assert_eq!(l.rows, vec![11, 10, 8, 6, 4, 2]);
        assert_eq!(l.total, 41);
    }

    #[test]
    fn halved_theta_layout() {
        let l = block_layout(&int(100), &theta(1, 2));
        assert_eq!(l.rows[0], 21);
        assert_eq!(l.rows.len(), 11);
        assert_eq!(l.total, 131);
        assert_eq!(l.total, l.rows.iter().sum::<u64>());
    }

    #[test]
    fn single_block_edge() {
        for t in [theta(1, 1), theta(3, 7), theta(5, 1)] {
            let len2 = t.theta() * t.theta();
            let l = block_layout(&len2, &t);
            assert_eq!(l.rows, vec![2]);
            assert_eq!(l.total, 2);
        }
    }

    #[test]
    fn irrational_edge_lengths_floor_exactly() {
        // sqrt(325) = 18.03
        assert_eq!(block_layout(&int(325), &Resolution::default()).rows[0], 19);
        // sqrt(125)/ (1/2) = 22.36
        assert_eq!(block_layout(&int(125), &theta(1, 2)).rows[0], 23);
    }

    #[test]
    fn resolution_must_be_positive() {
        assert_eq!(
            Resolution::new(int(0)),
            Err(PartitionError::NonPositiveTheta)
        );
        assert!("0".parse::<Resolution>().is_err());
        assert!("x".parse::<Resolution>().is_err());
        assert_eq!("1/2".parse::<Resolution>().unwrap(), theta(1, 2));
    }

    #[test]
    fn named_partitions_and_aliases() {
        let t = table();
        let right = t.get(&name("5,t,c")).unwrap();
        assert_eq!(right.alias, Some(name("5,0,c")));
        assert_eq!(right.mirror, Some(name("4,t,b")));
        assert_eq!(right.base_edge, (Label::new("5"), Label::new("t")));
        assert_eq!(right.base_len2, int(100));
        assert_eq!(t.get(&name("4,0,b")).unwrap().name, name("4,t,b"));
        assert!(t.get(&name("9,9,9")).is_err());
    }

    #[test]
    fn mirror_names_reflect_labels() {
        let t = table();
        let swap = |l: &Label| {
            Label::new(match l.as_str() {
                "1" => "2",
                "2" => "1",
                "4" => "5",
                "5" => "4",
                "b" => "c",
                "c" => "b",
                other => other,
            })
        };
        for p in t.partitions() {
            let m = t.mirror_of(p).expect("every face has a mirror");
            assert_eq!(m.name, PartitionName(p.name.0.clone().map(|l| swap(&l))));
            assert_eq!(t.mirror_of(m).unwrap().name, p.name);
        }
    }

    #[test]
    fn addresses() {
        let t = table();
        let one = Resolution::default();
        let (_, d) = t
            .resolve_address(&"5,t,c:37".parse().unwrap(), &one)
            .unwrap();
        assert_eq!(d, BlockDescriptor { row: 4, offset: 2 });
        let (_, d) = t
            .resolve_address(&"{5, 0, c : 37}".parse().unwrap(), &one)
            .unwrap();
        assert_eq!(d, BlockDescriptor { row: 4, offset: 2 });
        let (_, d) = t
            .resolve_address(&"5,t,c:0".parse().unwrap(), &one)
            .unwrap();
        assert_eq!(d, BlockDescriptor { row: 0, offset: 0 });
        assert_eq!(
            t.resolve_address(&"5,t,c:41".parse().unwrap(), &one)
                .unwrap_err(),
            PartitionError::InvalidBlockIndex {
                index: 41,
                total: 41
            }
        );
        assert!(matches!(
            t.resolve_address(&"9,9,9:0".parse().unwrap(), &one),
            Err(PartitionError::UnknownPartition(_))
        ));
        assert!("5,t:3".parse::<BlockAddress>().is_err());
        assert!("5,t,c:x".parse::<BlockAddress>().is_err());
    }

    #[test]
    fn refinement() {
        let t = table();
        let p = t.get(&name("5,t,c")).unwrap();
        let r = refine(p, &Resolution::default(), &[]);
        assert_eq!(r.layout.total, 131);
        assert!(r.remap.is_empty());
        let r = refine(p, &Resolution::default(), &[7, 3, 40]);
        assert_eq!(r.remap, vec![(3, 0), (7, 1), (40, 2)]);
    }

    #[test]
    fn export_lists_every_partition() {
        let t = table();
        let text = t.to_text(&Resolution::default());
        assert_eq!(text.lines().count(), t.len());
        assert!(text.contains("5,t,c\t5,0,c\ttheta=1/1\trows=11,10,8,6,4,2\ttotal=41\n"));
    }
}
