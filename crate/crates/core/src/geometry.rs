//! Exact 2-D primitives: points, segments, circles and the predicates built on
//! them. Everything is rational; there are no tolerances.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{int, Rational, PQ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("zero-length ray")]
    ZeroLengthRay,
    #[error("degenerate face")]
    DegenerateFace,
    #[error("circle diameter must be positive")]
    NonPositiveDiameter,
    #[error("segment list is empty")]
    NoSegments,
    #[error("marked point {0} lies on no segment")]
    DetachedMark(Box<Point2>),
}

/// Grid point with exact rational coordinates. Also used as a free vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub x: Rational,
    pub y: Rational,
}

impl Point2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point2 { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Point2::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point2::ints(0, 0)
    }

    pub fn add(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point2) -> Point2 {
        Point2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, s: &Rational) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point2) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point2) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn dist2(&self, o: &Point2) -> Rational {
        self.sub(o).norm2()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Reflection across the line through `a` and `b` (`a != b`).
    pub fn reflect_across(&self, a: &Point2, b: &Point2) -> Point2 {
        let d = b.sub(a);
        let v = self.sub(a);
        let foot = d.scale(&(v.dot(&d) / d.norm2()));
        // a + 2*foot - v
        a.add(&foot.scale(&int(2))).sub(&v)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", PQ(&self.x), PQ(&self.y))
    }
}

/// Sign of the turn `a -> b -> c`: positive for counterclockwise.
pub fn orient(a: &Point2, b: &Point2, c: &Point2) -> Ordering {
    b.sub(a).cross(&c.sub(a)).cmp(&Rational::zero())
}

/// Counterclockwise angular order of direction vectors starting at the +x axis.
pub fn cmp_angle(u: &Point2, v: &Point2) -> Ordering {
    fn half(p: &Point2) -> u8 {
        if p.y.is_positive() || (p.y.is_zero() && p.x.is_positive()) {
            0
        } else {
            1
        }
    }
    half(u)
        .cmp(&half(v))
        .then_with(|| Rational::zero().cmp(&u.cross(v)))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    a: Point2,
    b: Point2,
}

impl Segment {
    pub fn new(a: Point2, b: Point2) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    pub fn a(&self) -> &Point2 {
        &self.a
    }

    pub fn b(&self) -> &Point2 {
        &self.b
    }

    pub fn direction(&self) -> Point2 {
        self.b.sub(&self.a)
    }

    pub fn len2(&self) -> Rational {
        self.a.dist2(&self.b)
    }

    /// Same segment with endpoints in sorted order.
    pub fn normalized(&self) -> Segment {
        if self.a <= self.b {
            self.clone()
        } else {
            Segment {
                a: self.b.clone(),
                b: self.a.clone(),
            }
        }
    }

    /// Parameter `t` with `p = a + t*(b - a)`, if `p` lies on the closed segment.
    pub fn param_of(&self, p: &Point2) -> Option<Rational> {
        let d = self.direction();
        let v = p.sub(&self.a);
        if !d.cross(&v).is_zero() {
            return None;
        }
        let t = v.dot(&d) / d.norm2();
        (!t.is_negative() && t <= Rational::one()).then_some(t)
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.param_of(p).is_some()
    }

    pub fn at(&self, t: &Rational) -> Point2 {
        self.a.add(&self.direction().scale(t))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Compass circle. `theta` is the block resolution the compass carries; it
/// does not affect the geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub center: Point2,
    pub diameter: Rational,
    pub theta: Rational,
}

impl Circle {
    pub fn new(center: Point2, diameter: Rational, theta: Rational) -> Result<Self, GeometryError> {
        if !diameter.is_positive() {
            return Err(GeometryError::NonPositiveDiameter);
        }
        Ok(Circle {
            center,
            diameter,
            theta,
        })
    }
}

pub fn midpoint(s: &Segment) -> Point2 {
    s.a.add(&s.b).scale(&Rational::new(1.into(), 2.into()))
}

/// The point reached by continuing from `from` through `through` to twice the
/// distance: `from + 2*(through - from)`.
pub fn extend_double(from: &Point2, through: &Point2) -> Result<Point2, GeometryError> {
    if from == through {
        return Err(GeometryError::ZeroLengthRay);
    }
    Ok(from.add(&through.sub(from).scale(&int(2))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    Point(Point2),
    Overlap(Segment),
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> SegmentIntersection {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let w = s2.a.sub(&s1.a);
    let denom = d1.cross(&d2);
    let unit = |t: &Rational| !t.is_negative() && *t <= Rational::one();

    if !denom.is_zero() {
        let t = w.cross(&d2) / &denom;
        let u = w.cross(&d1) / &denom;
        if unit(&t) && unit(&u) {
            return SegmentIntersection::Point(s1.at(&t));
        }
        return SegmentIntersection::Empty;
    }
    if !w.cross(&d1).is_zero() {
        return SegmentIntersection::Empty;
    }
    // Collinear: clip s2's parameter interval on s1 to [0, 1].
    let n = d1.norm2();
    let t0 = w.dot(&d1) / &n;
    let t1 = s2.b.sub(&s1.a).dot(&d1) / &n;
    let (lo, hi) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
    let lo = lo.max(Rational::zero());
    let hi = hi.min(Rational::one());
    match lo.cmp(&hi) {
        Ordering::Greater => SegmentIntersection::Empty,
        Ordering::Equal => SegmentIntersection::Point(s1.at(&lo)),
        Ordering::Less => SegmentIntersection::Overlap(
            Segment::new(s1.at(&lo), s1.at(&hi)).expect("distinct parameters"),
        ),
    }
}

/// Twice the signed area of a polygon (positive when counterclockwise).
pub fn signed_area2(poly: &[Point2]) -> Rational {
    let n = poly.len();
    (0..n)
        .map(|i| poly[i].cross(&poly[(i + 1) % n]))
        .fold(Rational::zero(), |acc, c| acc + c)
}

/// Area-weighted centroid of a simple polygon.
pub fn face_centroid(poly: &[Point2]) -> Result<Point2, GeometryError> {
    let a2 = signed_area2(poly);
    if a2.is_zero() {
        return Err(GeometryError::DegenerateFace);
    }
    let n = poly.len();
    let mut cx = Rational::zero();
    let mut cy = Rational::zero();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        let c = p.cross(q);
        cx += (&p.x + &q.x) * &c;
        cy += (&p.y + &q.y) * &c;
    }
    let k = a2 * int(3);
    Ok(Point2::new(cx / &k, cy / k))
}
