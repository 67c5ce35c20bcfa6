//! Planar arrangement of a segment set: vertices at every endpoint and
//! crossing, segments cut into unit edges, bounded faces by boundary walk.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::geometry::{
    cmp_angle, segment_intersection, signed_area2, GeometryError, Point2, Segment,
    SegmentIntersection,
};
use crate::label::Label;

/// A bounded face; `boundary` lists vertex indices counterclockwise, starting
/// at the smallest index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub boundary: Vec<usize>,
}

/// Which side of an edge a face lies on; `Outer` is the unbounded face (or a
/// hole boundary when the arrangement is disconnected).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceRef {
    Bounded(usize),
    Outer,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    vertices: Vec<Point2>,
    edges: Vec<(usize, usize)>,
    faces: Vec<Face>,
    edge_faces: Vec<[FaceRef; 2]>,
    components: usize,
}

pub fn build_arrangement(segments: &[Segment]) -> Result<Arrangement, GeometryError> {
    build_arrangement_with_marks(segments, &[])
}

/// Like [`build_arrangement`], additionally splitting segments at `marks`.
/// Every mark must lie on some segment.
pub fn build_arrangement_with_marks(
    segments: &[Segment],
    marks: &[Point2],
) -> Result<Arrangement, GeometryError> {
    if segments.is_empty() {
        return Err(GeometryError::NoSegments);
    }
    let segs: Vec<Segment> = segments
        .iter()
        .map(Segment::normalized)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut points: BTreeSet<Point2> = BTreeSet::new();
    for s in &segs {
        points.insert(s.a().clone());
        points.insert(s.b().clone());
    }
    for (i, s) in segs.iter().enumerate() {
        for t in &segs[i + 1..] {
            // overlap endpoints are already segment endpoints
            if let SegmentIntersection::Point(p) = segment_intersection(s, t) {
                points.insert(p);
            }
        }
    }
    for m in marks {
        if !segs.iter().any(|s| s.contains(m)) {
            return Err(GeometryError::DetachedMark(Box::new(m.clone())));
        }
        points.insert(m.clone());
    }
    let vertices: Vec<Point2> = points.into_iter().collect();

    let mut edge_set = BTreeSet::new();
    for s in &segs {
        let mut on: Vec<_> = vertices
            .iter()
            .enumerate()
            .filter_map(|(i, v)| s.param_of(v).map(|t| (t, i)))
            .collect();
        on.sort();
        for w in on.windows(2) {
            let (u, v) = (w[0].1, w[1].1);
            edge_set.insert((u.min(v), u.max(v)));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
    Ok(Arrangement::from_parts(vertices, edges))
}

impl Arrangement {
    fn from_parts(vertices: Vec<Point2>, edges: Vec<(usize, usize)>) -> Self {
        let n = vertices.len();
        // Half-edge 2e is u->v, 2e+1 is v->u for edge e = (u, v).
        let head = |h: usize| {
            let (u, v) = edges[h / 2];
            if h.is_multiple_of(2) {
                v
            } else {
                u
            }
        };
        let tail = |h: usize| head(h ^ 1);

        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
        for h in 0..edges.len() * 2 {
            outgoing[tail(h)].push(h);
        }
        let mut position = vec![0usize; edges.len() * 2];
        for (v, out) in outgoing.iter_mut().enumerate() {
            out.sort_by(|&g, &h| {
                cmp_angle(
                    &vertices[head(g)].sub(&vertices[v]),
                    &vertices[head(h)].sub(&vertices[v]),
                )
            });
            for (i, &h) in out.iter().enumerate() {
                position[h] = i;
            }
        }
        // Face on the left: from u->v continue with the edge at v that
        // precedes v->u in counterclockwise order.
        let next = |h: usize| {
            let twin = h ^ 1;
            let out = &outgoing[head(h)];
            out[(position[twin] + out.len() - 1) % out.len()]
        };

        let mut cycle_of = vec![usize::MAX; edges.len() * 2];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..edges.len() * 2 {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cyc = Vec::new();
            let mut h = start;
            while cycle_of[h] == usize::MAX {
                cycle_of[h] = id;
                cyc.push(h);
                h = next(h);
            }
            cycles.push(cyc);
        }

        let mut bounded: Vec<(Vec<usize>, usize)> = Vec::new();
        for (id, cyc) in cycles.iter().enumerate() {
            let verts: Vec<usize> = cyc.iter().map(|&h| tail(h)).collect();
            let poly: Vec<Point2> = verts.iter().map(|&i| vertices[i].clone()).collect();
            if signed_area2(&poly).is_positive() {
                let k = (0..verts.len()).min_by_key(|&i| verts[i]).unwrap_or(0);
                let mut b = verts[k..].to_vec();
                b.extend_from_slice(&verts[..k]);
                bounded.push((b, id));
            }
        }
        bounded.sort();
        let mut face_of_cycle: BTreeMap<usize, usize> = BTreeMap::new();
        for (fi, (_, id)) in bounded.iter().enumerate() {
            face_of_cycle.insert(*id, fi);
        }
        let side = |h: usize| match face_of_cycle.get(&cycle_of[h]) {
            Some(&f) => FaceRef::Bounded(f),
            None => FaceRef::Outer,
        };
        let edge_faces = (0..edges.len())
            .map(|e| [side(2 * e), side(2 * e + 1)])
            .collect();

        let components = count_components(n, &edges);
        Arrangement {
            vertices,
            edges,
            faces: bounded
                .into_iter()
                .map(|(boundary, _)| Face { boundary })
                .collect(),
            edge_faces,
            components,
        }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn vertex_index(&self, p: &Point2) -> Option<usize> {
        self.vertices.binary_search(p).ok()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Faces on the two sides of edge `e` (left of u->v, left of v->u).
    pub fn edge_faces(&self, e: usize) -> [FaceRef; 2] {
        self.edge_faces[e]
    }

    pub fn on_outer_boundary(&self, e: usize) -> bool {
        self.edge_faces[e].contains(&FaceRef::Outer)
    }

    pub fn face_polygon(&self, f: usize) -> Vec<Point2> {
        self.faces[f]
            .boundary
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn edge_segments(&self) -> Vec<Segment> {
        self.edges
            .iter()
            .map(|&(u, v)| {
                Segment::new(self.vertices[u].clone(), self.vertices[v].clone())
                    .expect("arrangement vertices are distinct")
            })
            .collect()
    }

    /// Holds for any arrangement: `V - E + (bounded faces + 1) = 1 + components`,
    /// which is the usual `= 2` when connected.
    pub fn euler_holds(&self) -> bool {
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64 + 1;
        v - e + f == 1 + self.components as i64
    }

    /// Vertex index -> label for every labelled point that is a vertex.
    /// Points that are not vertices are ignored.
    pub fn vertex_labels(&self, labels: &BTreeMap<Label, Point2>) -> Vec<Option<Label>> {
        let mut out = vec![None; self.vertices.len()];
        for (l, p) in labels {
            if let Some(i) = self.vertex_index(p) {
                out[i] = Some(l.clone());
            }
        }
        out
    }
}

fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}
