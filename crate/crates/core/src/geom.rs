//! Exact rational geometry: points, orientation predicates and segment
//! intersection classification.
//!
//! Every quantity here is a [`Rational`]; nothing is ever rounded, so the
//! genericity conditions used by the rest of the crate (transversality, no
//! triple points, no vertex contacts) are decided exactly.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `n / d` as a rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sign of a rational as `-1`, `0` or `+1`.
pub fn sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A point (or vector) of the plane with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

/// Vectors share the point representation.
pub type Vector = Point;

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn zero() -> Self {
        Point::new(Rational::zero(), Rational::zero())
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Vector {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Vector {
        Point::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, k: &Rational) -> Vector {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn cross(&self, o: &Vector) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &Vector) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    /// Rotation by +90 degrees: the left normal of a direction.
    pub fn perp(&self) -> Vector {
        Point::new(-&self.y, self.x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `a + t (b - a)`.
    pub fn lerp(a: &Point, b: &Point, t: &Rational) -> Point {
        a.add(&b.sub(a).scale(t))
    }

    pub fn midpoint(a: &Point, b: &Point) -> Point {
        Point::lerp(a, b, &rat(1, 2))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.x), rational_to_f64(&self.y))
    }
}

/// Lossy conversion used only for rendering.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Sign of the determinant of `(b - a, c - a)`: `+1` for a counterclockwise
/// triple, `0` iff collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    sign(&b.sub(a).cross(&c.sub(a)))
}

/// `+1` iff `(u, v)` is a positive basis of the plane.
pub fn cross_sign(u: &Vector, v: &Vector) -> i32 {
    sign(&u.cross(v))
}

/// Which half of the circle of directions `v` lies in: `0` for angles in
/// `[0, pi)`, `1` for `[pi, 2 pi)`.
fn half_plane(v: &Vector) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Total order of nonzero directions by polar angle in `[0, 2 pi)`.
pub fn angle_cmp(u: &Vector, v: &Vector) -> Ordering {
    let (hu, hv) = (half_plane(u), half_plane(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    match cross_sign(u, v) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// A closed segment between two distinct points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

/// Classification of the intersection of two segments.
///
/// Parameters `t` (first segment) and `u` (second segment) are affine
/// coordinates in `[0, 1]` along each segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    /// A single crossing point in the interior of both segments.
    Transverse {
        point: Point,
        t: Rational,
        u: Rational,
    },
    /// A single common point that is an endpoint of at least one segment
    /// (including collinear segments meeting end to end).
    Touching {
        point: Point,
        t: Rational,
        u: Rational,
    },
    /// Collinear segments sharing a piece of positive length.
    Overlap { start: Point, end: Point },
}

impl SegmentIntersection {
    pub fn point(&self) -> &Point {
        match self {
            SegmentIntersection::Transverse { point, .. }
            | SegmentIntersection::Touching { point, .. } => point,
            SegmentIntersection::Overlap { start, .. } => start,
        }
    }
}

pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Option<SegmentIntersection> {
    intersect(&s1.a, &s1.b, &s2.a, &s2.b)
}

fn in_unit(num: &Rational, den: &Rational) -> bool {
    // num / den in [0, 1] with den > 0
    !num.is_negative() && num <= den
}

/// Intersection of segments `[a0, a1]` and `[b0, b1]`.
pub fn intersect(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Option<SegmentIntersection> {
    // bounding boxes first: cheap rejection
    let (ax_lo, ax_hi) = minmax(&a0.x, &a1.x);
    let (bx_lo, bx_hi) = minmax(&b0.x, &b1.x);
    if ax_hi < bx_lo || bx_hi < ax_lo {
        return None;
    }
    let (ay_lo, ay_hi) = minmax(&a0.y, &a1.y);
    let (by_lo, by_hi) = minmax(&b0.y, &b1.y);
    if ay_hi < by_lo || by_hi < ay_lo {
        return None;
    }

    let d1 = a1.sub(a0);
    let d2 = b1.sub(b0);
    let w = b0.sub(a0);
    let mut denom = d1.cross(&d2);
    if !denom.is_zero() {
        let mut tn = w.cross(&d2);
        let mut un = w.cross(&d1);
        if denom.is_negative() {
            denom = -denom;
            tn = -tn;
            un = -un;
        }
        if !in_unit(&tn, &denom) || !in_unit(&un, &denom) {
            return None;
        }
        let t = &tn / &denom;
        let u = &un / &denom;
        let point = a0.add(&d1.scale(&t));
        let interior = tn.is_positive() && tn < denom && un.is_positive() && un < denom;
        return Some(if interior {
            SegmentIntersection::Transverse { point, t, u }
        } else {
            SegmentIntersection::Touching { point, t, u }
        });
    }
    if !w.cross(&d1).is_zero() {
        return None;
    }
    // collinear
    let dd = d1.norm2();
    let tb0 = w.dot(&d1) / &dd;
    let tb1 = b1.sub(a0).dot(&d1) / &dd;
    let (lo_b, hi_b) = minmax(&tb0, &tb1);
    let zero = Rational::zero();
    let one = Rational::one();
    let lo = if lo_b > &zero { lo_b.clone() } else { zero };
    let hi = if hi_b < &one { hi_b.clone() } else { one };
    match lo.cmp(&hi) {
        Ordering::Greater => None,
        Ordering::Equal => {
            let point = a0.add(&d1.scale(&lo));
            let u = (&lo - &tb0) / (&tb1 - &tb0);
            Some(SegmentIntersection::Touching { point, t: lo, u })
        }
        Ordering::Less => Some(SegmentIntersection::Overlap {
            start: a0.add(&d1.scale(&lo)),
            end: a0.add(&d1.scale(&hi)),
        }),
    }
}

fn minmax<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True iff `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    let (xl, xh) = minmax(&a.x, &b.x);
    let (yl, yh) = minmax(&a.y, &b.y);
    xl <= &p.x && &p.x <= xh && yl <= &p.y && &p.y <= yh
}

/// Smallest `s >= 0` such that `origin + s * dir` lies on the segment
/// `[a, b]`, if any.
pub fn ray_hit(origin: &Point, dir: &Vector, a: &Point, b: &Point) -> Option<Rational> {
    let d2 = b.sub(a);
    let w = a.sub(origin);
    let denom = dir.cross(&d2);
    if !denom.is_zero() {
        let s = w.cross(&d2) / &denom;
        let u = w.cross(dir) / &denom;
        if s.is_negative() || u.is_negative() || u > Rational::one() {
            return None;
        }
        return Some(s);
    }
    if !w.cross(dir).is_zero() {
        return None;
    }
    let dd = dir.norm2();
    let sa = w.dot(dir) / &dd;
    let sb = b.sub(origin).dot(dir) / &dd;
    let (lo, hi) = minmax(&sa, &sb);
    if hi.is_negative() {
        None
    } else if lo.is_negative() {
        Some(Rational::zero())
    } else {
        Some(lo.clone())
    }
}

/// Twice the signed area of a closed polygon.
pub fn signed_area2(pts: &[Point]) -> Rational {
    let n = pts.len();
    let mut acc = Rational::zero();
    for i in 0..n {
        acc += pts[i].cross(&pts[(i + 1) % n]);
    }
    acc
}

/// Squared distance from `p` to the segment `[a, b]`.
pub fn dist2_point_segment(p: &Point, a: &Point, b: &Point) -> Rational {
    let d = b.sub(a);
    let dd = d.norm2();
    let t = p.sub(a).dot(&d) / &dd;
    let t = if t.is_negative() {
        Rational::zero()
    } else if t > Rational::one() {
        Rational::one()
    } else {
        t
    };
    Point::lerp(a, b, &t).sub(p).norm2()
}

/// Canonical "num/den" text form of a rational.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl serde::Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&format_rational(&self.x))?;
        t.serialize_element(&format_rational(&self.y))?;
        t.end()
    }
}

impl<'de> serde::Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let px = parse_rational(&x)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {x:?}")))?;
        let py = parse_rational(&y)
            .ok_or_else(|| serde::de::Error::custom(format!("bad rational {y:?}")))?;
        Ok(Point::new(px, py))
    }
}
