//! Closed polyline curves, bridges between two curves, and the genericity
//! checks that make them stand-ins for generic immersed curves.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arrangement::{Crossing, Pass};
use crate::error::{Error, Result};
use crate::geom::{int, intersect, on_segment, Point, Rational, SegmentIntersection, Vector};

/// A position on a curve: an edge index and an affine parameter along it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveLocation {
    pub edge: usize,
    pub param: Rational,
}

impl CurveLocation {
    pub fn new(edge: usize, param: Rational) -> Self {
        CurveLocation { edge, param }
    }

    /// Position along the whole curve, in `[0, n)`.
    pub fn global(&self) -> Rational {
        int(self.edge as i64) + &self.param
    }

    pub fn is_edge_interior(&self) -> bool {
        self.param.is_positive() && self.param < Rational::one()
    }
}

/// A closed oriented polyline. The vertex order is the orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyCurve {
    vertices: Vec<Point>,
}

impl PolyCurve {
    /// Builds a curve after structural checks: at least three vertices, no
    /// repeated consecutive vertex, no edge doubling back over its
    /// predecessor.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Malformed(format!("{n} vertices, need at least 3")));
        }
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            if a == b {
                return Err(Error::Malformed(format!("vertex {i} repeated")));
            }
            let d1 = b.sub(a);
            let d2 = c.sub(b);
            if d1.cross(&d2).is_zero() && d1.dot(&d2).is_negative() {
                return Err(Error::Malformed(format!(
                    "edge {} doubles back at vertex {}",
                    (i + 1) % n,
                    (i + 1) % n
                )));
            }
        }
        Ok(PolyCurve { vertices })
    }

    pub fn from_ints(pts: &[(i64, i64)]) -> Result<Self> {
        PolyCurve::new(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of edges (= number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edge_dir(&self, i: usize) -> Vector {
        let (a, b) = self.edge(i);
        b.sub(a)
    }

    pub fn point_at(&self, loc: &CurveLocation) -> Point {
        let (a, b) = self.edge(loc.edge);
        Point::lerp(a, b, &loc.param)
    }

    /// The same image traversed backwards.
    pub fn reverse(&self) -> PolyCurve {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyCurve { vertices: v }
    }

    /// Where `loc` ends up on [`PolyCurve::reverse`].
    pub fn reverse_location(&self, loc: &CurveLocation) -> CurveLocation {
        let n = self.len();
        // edge i (v_i -> v_{i+1}) becomes edge n-2-i (mod n) of the reversal
        let edge = (2 * n - 2 - loc.edge) % n;
        if loc.param.is_zero() {
            CurveLocation::new((edge + 1) % n, Rational::zero())
        } else {
            CurveLocation::new(edge, Rational::one() - &loc.param)
        }
    }

    pub fn translate(&self, v: &Vector) -> PolyCurve {
        PolyCurve {
            vertices: self.vertices.iter().map(|p| p.add(v)).collect(),
        }
    }

    /// Applies `p -> m p + t` with `m = [[a, b], [c, d]]`.
    pub fn affine(&self, m: [&Rational; 4], t: &Vector) -> PolyCurve {
        let [a, b, c, d] = m;
        PolyCurve {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point::new(a * &p.x + b * &p.y + &t.x, c * &p.x + d * &p.y + &t.y))
                .collect(),
        }
    }

    /// Inserts a vertex at `param` on `edge`.
    pub fn subdivide(&self, edge: usize, param: &Rational) -> PolyCurve {
        let p = self.point_at(&CurveLocation::new(edge, param.clone()));
        let mut v = self.vertices.clone();
        v.insert(edge + 1, p);
        PolyCurve { vertices: v }
    }

    /// Cyclic relabeling starting at vertex `k`.
    pub fn rotate(&self, k: usize) -> PolyCurve {
        let mut v = self.vertices.clone();
        v.rotate_left(k % self.len());
        PolyCurve { vertices: v }
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox(&self.vertices)
    }
}

pub(crate) fn bbox(pts: &[Point]) -> (Point, Point) {
    let mut lo = pts[0].clone();
    let mut hi = pts[0].clone();
    for p in &pts[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Which polyline an edge reference points into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Owner {
    Curve(usize),
    Bridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRef {
    pub owner: Owner,
    pub index: usize,
}

impl EdgeRef {
    pub fn curve(curve: usize, index: usize) -> Self {
        EdgeRef {
            owner: Owner::Curve(curve),
            index,
        }
    }
    pub fn bridge(index: usize) -> Self {
        EdgeRef {
            owner: Owner::Bridge,
            index,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// A vertex lies on a non-adjacent edge.
    VertexOnEdge,
    /// Two edges share a segment.
    Overlap,
    /// Three or more branches through one point.
    TriplePoint,
    /// Two curves touch at a vertex instead of crossing transversally.
    VertexContact,
    /// A bridge endpoint is not in the interior of an edge.
    EndpointAtVertex,
    /// A bridge endpoint is a double point of its curve (bridge condition 1).
    EndpointOnDoublePoint,
    /// A bridge endpoint lies on the other curve.
    EndpointOnOtherCurve,
    /// The bridge passes through a double point of a curve (condition 1).
    BridgeThroughDoublePoint,
    /// A double point of the bridge lies on a curve (condition 2).
    BridgeDoublePointOnCurve,
    /// The bridge meets a curve non-transversally (condition 3).
    NonTransverseContact,
    /// The bridge polyline is malformed (repeated point, backtrack).
    MalformedBridge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub edges: Vec<EdgeRef>,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn passed() -> Self {
        ValidationReport {
            ok: true,
            violations: Vec::new(),
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{:?} at {:?}", v.rule, v.points))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn adjacent(n: usize, i: usize, j: usize) -> bool {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j == i + 1 || (i == 0 && j == n - 1)
}

/// Scans a single curve. Returns its transverse self-crossings (first
/// branch on the lower edge index) together with every genericity violation.
pub(crate) fn scan_self(curve: &PolyCurve, id: usize) -> (Vec<Crossing>, Vec<Violation>) {
    let n = curve.len();
    let mut crossings = Vec::new();
    let mut violations = Vec::new();
    for i in 0..n {
        let (a0, a1) = curve.edge(i);
        for j in i + 1..n {
            if adjacent(n, i, j) {
                continue;
            }
            let (b0, b1) = curve.edge(j);
            match intersect(a0, a1, b0, b1) {
                None => {}
                Some(SegmentIntersection::Transverse { point, t, u }) => crossings.push(Crossing {
                    point,
                    branches: [
                        Pass {
                            curve: id,
                            loc: CurveLocation::new(i, t),
                            dir: curve.edge_dir(i),
                        },
                        Pass {
                            curve: id,
                            loc: CurveLocation::new(j, u),
                            dir: curve.edge_dir(j),
                        },
                    ],
                    mutual: false,
                }),
                Some(SegmentIntersection::Touching { point, .. }) => violations.push(Violation {
                    rule: Rule::VertexOnEdge,
                    edges: vec![EdgeRef::curve(id, i), EdgeRef::curve(id, j)],
                    points: vec![point],
                }),
                Some(SegmentIntersection::Overlap { start, end }) => violations.push(Violation {
                    rule: Rule::Overlap,
                    edges: vec![EdgeRef::curve(id, i), EdgeRef::curve(id, j)],
                    points: vec![start, end],
                }),
            }
        }
    }
    violations.extend(duplicate_points(&crossings));
    (crossings, violations)
}

fn duplicate_points(crossings: &[Crossing]) -> Vec<Violation> {
    let mut idx: Vec<usize> = (0..crossings.len()).collect();
    idx.sort_by(|&a, &b| crossings[a].point.cmp(&crossings[b].point));
    let mut out = Vec::new();
    for w in idx.windows(2) {
        let (c1, c2) = (&crossings[w[0]], &crossings[w[1]]);
        if c1.point == c2.point {
            let edges = c1
                .branches
                .iter()
                .chain(c2.branches.iter())
                .map(|p| EdgeRef::curve(p.curve, p.loc.edge))
                .collect();
            out.push(Violation {
                rule: Rule::TriplePoint,
                edges,
                points: vec![c1.point.clone()],
            });
        }
    }
    out
}

/// Genericity of a single curve: only transverse double points of edge
/// interiors, no vertex on a non-adjacent edge, no overlaps, no triple points.
pub fn validate_generic(curve: &PolyCurve) -> ValidationReport {
    ValidationReport::from_violations(scan_self(curve, 0).1)
}

/// Self-crossings of a generic curve.
pub fn self_crossings(curve: &PolyCurve, id: usize) -> Result<Vec<Crossing>> {
    let (c, v) = scan_self(curve, id);
    if v.is_empty() {
        Ok(c)
    } else {
        Err(Error::Genericity(ValidationReport::from_violations(v)))
    }
}

pub(crate) fn scan_mutual(c0: &PolyCurve, c1: &PolyCurve) -> (Vec<Crossing>, Vec<Violation>) {
    let mut crossings = Vec::new();
    let mut violations = Vec::new();
    for i in 0..c0.len() {
        let (a0, a1) = c0.edge(i);
        for j in 0..c1.len() {
            let (b0, b1) = c1.edge(j);
            match intersect(a0, a1, b0, b1) {
                None => {}
                Some(SegmentIntersection::Transverse { point, t, u }) => crossings.push(Crossing {
                    point,
                    branches: [
                        Pass {
                            curve: 0,
                            loc: CurveLocation::new(i, t),
                            dir: c0.edge_dir(i),
                        },
                        Pass {
                            curve: 1,
                            loc: CurveLocation::new(j, u),
                            dir: c1.edge_dir(j),
                        },
                    ],
                    mutual: true,
                }),
                Some(SegmentIntersection::Touching { point, .. }) => violations.push(Violation {
                    rule: Rule::VertexContact,
                    edges: vec![EdgeRef::curve(0, i), EdgeRef::curve(1, j)],
                    points: vec![point],
                }),
                Some(SegmentIntersection::Overlap { start, end }) => violations.push(Violation {
                    rule: Rule::Overlap,
                    edges: vec![EdgeRef::curve(0, i), EdgeRef::curve(1, j)],
                    points: vec![start, end],
                }),
            }
        }
    }
    (crossings, violations)
}

/// General position of two (individually generic) curves: every common
/// point is a transverse crossing of edge interiors, distinct from all
/// double points.
pub fn validate_general_position(c0: &PolyCurve, c1: &PolyCurve) -> ValidationReport {
    let (mutual, mut violations) = scan_mutual(c0, c1);
    let mut all = mutual;
    all.extend(scan_self(c0, 0).0);
    all.extend(scan_self(c1, 1).0);
    violations.extend(duplicate_points(&all));
    ValidationReport::from_violations(violations)
}

/// Crossings between two curves in general position.
pub fn mutual_crossings(c0: &PolyCurve, c1: &PolyCurve) -> Result<Vec<Crossing>> {
    let report = validate_general_position(c0, c1);
    if !report.ok {
        return Err(Error::Genericity(report));
    }
    Ok(scan_mutual(c0, c1).0)
}

/// An oriented polyline from a point of curve 0 to a point of curve 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub start: CurveLocation,
    pub end: CurveLocation,
    pub interior: Vec<Point>,
}

impl Bridge {
    pub fn new(start: CurveLocation, end: CurveLocation, interior: Vec<Point>) -> Self {
        Bridge {
            start,
            end,
            interior,
        }
    }

    /// Straight bridge between the two locations.
    pub fn straight(start: CurveLocation, end: CurveLocation) -> Self {
        Bridge {
            start,
            end,
            interior: Vec::new(),
        }
    }

    /// The full polyline `b0, interior..., b1`.
    pub fn points(&self, c0: &PolyCurve, c1: &PolyCurve) -> Vec<Point> {
        let mut pts = Vec::with_capacity(self.interior.len() + 2);
        pts.push(c0.point_at(&self.start));
        pts.extend(self.interior.iter().cloned());
        pts.push(c1.point_at(&self.end));
        pts
    }

    pub fn segment_count(&self) -> usize {
        self.interior.len() + 1
    }

    /// The same arc run from curve 1 to curve 0 (roles of the curves swapped).
    pub fn swapped(&self) -> Bridge {
        let mut interior = self.interior.clone();
        interior.reverse();
        Bridge {
            start: self.end.clone(),
            end: self.start.clone(),
            interior,
        }
    }

    /// Re-expresses the endpoints on reversed copies of the curves.
    pub fn reoriented(&self, c0: &PolyCurve, c1: &PolyCurve, rev0: bool, rev1: bool) -> Bridge {
        Bridge {
            start: if rev0 {
                c0.reverse_location(&self.start)
            } else {
                self.start.clone()
            },
            end: if rev1 {
                c1.reverse_location(&self.end)
            } else {
                self.end.clone()
            },
            interior: self.interior.clone(),
        }
    }
}

/// A transverse crossing between the bridge interior and one of the curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawBridgeCrossing {
    pub host: usize,
    pub host_loc: CurveLocation,
    pub gamma_loc: CurveLocation,
    pub point: Point,
}

/// Everything [`validate_bridge`] learns about a bridge.
#[derive(Clone, Debug)]
pub(crate) struct BridgeScan {
    pub self_crossings: Vec<(CurveLocation, CurveLocation, Point)>,
    pub crossings: Vec<RawBridgeCrossing>,
    pub violations: Vec<Violation>,
}

pub(crate) fn scan_bridge(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> BridgeScan {
    let mut violations = Vec::new();
    let mut self_x = Vec::new();
    let mut crossings = Vec::new();
    if !bridge.start.is_edge_interior() || bridge.start.edge >= c0.len() {
        violations.push(Violation {
            rule: Rule::EndpointAtVertex,
            edges: vec![EdgeRef::curve(0, bridge.start.edge)],
            points: vec![],
        });
    }
    if !bridge.end.is_edge_interior() || bridge.end.edge >= c1.len() {
        violations.push(Violation {
            rule: Rule::EndpointAtVertex,
            edges: vec![EdgeRef::curve(1, bridge.end.edge)],
            points: vec![],
        });
    }
    if !violations.is_empty() {
        return BridgeScan {
            self_crossings: self_x,
            crossings,
            violations,
        };
    }
    let pts = bridge.points(c0, c1);
    let m = pts.len() - 1;
    for i in 0..m {
        if pts[i] == pts[i + 1] {
            violations.push(Violation {
                rule: Rule::MalformedBridge,
                edges: vec![EdgeRef::bridge(i)],
                points: vec![pts[i].clone()],
            });
        }
        if i + 2 <= m {
            let d1 = pts[i + 1].sub(&pts[i]);
            let d2 = pts[i + 2].sub(&pts[i + 1]);
            if d1.cross(&d2).is_zero() && d1.dot(&d2).is_negative() {
                violations.push(Violation {
                    rule: Rule::MalformedBridge,
                    edges: vec![EdgeRef::bridge(i), EdgeRef::bridge(i + 1)],
                    points: vec![pts[i + 1].clone()],
                });
            }
        }
    }
    if !violations.is_empty() {
        return BridgeScan {
            self_crossings: self_x,
            crossings,
            violations,
        };
    }

    // the bridge itself
    for i in 0..m {
        for j in i + 2..m {
            match intersect(&pts[i], &pts[i + 1], &pts[j], &pts[j + 1]) {
                None => {}
                Some(SegmentIntersection::Transverse { point, t, u }) => {
                    self_x.push((CurveLocation::new(i, t), CurveLocation::new(j, u), point))
                }
                Some(SegmentIntersection::Touching { point, .. }) => violations.push(Violation {
                    rule: Rule::VertexOnEdge,
                    edges: vec![EdgeRef::bridge(i), EdgeRef::bridge(j)],
                    points: vec![point],
                }),
                Some(SegmentIntersection::Overlap { start, end }) => violations.push(Violation {
                    rule: Rule::Overlap,
                    edges: vec![EdgeRef::bridge(i), EdgeRef::bridge(j)],
                    points: vec![start, end],
                }),
            }
        }
    }
    {
        let mut sorted: Vec<&Point> = self_x.iter().map(|s| &s.2).collect();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation {
                    rule: Rule::TriplePoint,
                    edges: vec![],
                    points: vec![w[0].clone()],
                });
            }
        }
    }

    let curves = [c0, c1];
    let d0 = scan_self(c0, 0).0;
    let d1 = scan_self(c1, 1).0;
    let mutual = scan_mutual(c0, c1).0;
    let doubles = [&d0, &d1];
    for (i, p) in [&pts[0], &pts[m]].into_iter().enumerate() {
        if doubles[i].iter().any(|c| &c.point == p) {
            violations.push(Violation {
                rule: Rule::EndpointOnDoublePoint,
                edges: vec![],
                points: vec![p.clone()],
            });
        }
        let other = curves[1 - i];
        if (0..other.len()).any(|e| {
            let (a, b) = other.edge(e);
            on_segment(p, a, b)
        }) {
            violations.push(Violation {
                rule: Rule::EndpointOnOtherCurve,
                edges: vec![],
                points: vec![p.clone()],
            });
        }
    }

    for (ci, curve) in curves.iter().enumerate() {
        for e in 0..curve.len() {
            let (a, b) = curve.edge(e);
            for s in 0..m {
                let hit = match intersect(&pts[s], &pts[s + 1], a, b) {
                    None => continue,
                    Some(h) => h,
                };
                let is_endpoint_attach = (ci == 0 && s == 0 && e == bridge.start.edge)
                    || (ci == 1 && s == m - 1 && e == bridge.end.edge);
                match hit {
                    SegmentIntersection::Transverse { point, t, u } => {
                        crossings.push(RawBridgeCrossing {
                            host: ci,
                            host_loc: CurveLocation::new(e, u),
                            gamma_loc: CurveLocation::new(s, t),
                            point,
                        });
                    }
                    SegmentIntersection::Touching { point, t, u } if is_endpoint_attach => {
                        let at_end = if ci == 0 {
                            t.is_zero() && s == 0
                        } else {
                            t.is_one() && s == m - 1
                        };
                        let expected = if ci == 0 {
                            &bridge.start.param
                        } else {
                            &bridge.end.param
                        };
                        if !(at_end && &u == expected) {
                            violations.push(Violation {
                                rule: Rule::NonTransverseContact,
                                edges: vec![EdgeRef::bridge(s), EdgeRef::curve(ci, e)],
                                points: vec![point],
                            });
                        }
                    }
                    SegmentIntersection::Touching { point, .. } => {
                        let endpoint =
                            (s == 0 && point == pts[0]) || (s == m - 1 && point == pts[m]);
                        // endpoints resting on double points or the other curve are reported above
                        if !endpoint {
                            violations.push(Violation {
                                rule: Rule::NonTransverseContact,
                                edges: vec![EdgeRef::bridge(s), EdgeRef::curve(ci, e)],
                                points: vec![point],
                            });
                        }
                    }
                    SegmentIntersection::Overlap { start, end } => violations.push(Violation {
                        rule: Rule::NonTransverseContact,
                        edges: vec![EdgeRef::bridge(s), EdgeRef::curve(ci, e)],
                        points: vec![start, end],
                    }),
                }
            }
        }
    }

    for x in &crossings {
        let forbidden = doubles[x.host]
            .iter()
            .map(|c| &c.point)
            .chain(mutual.iter().map(|c| &c.point));
        for q in forbidden {
            if q == &x.point {
                violations.push(Violation {
                    rule: Rule::BridgeThroughDoublePoint,
                    edges: vec![EdgeRef::bridge(x.gamma_loc.edge)],
                    points: vec![q.clone()],
                });
            }
        }
    }
    for (_, _, p) in &self_x {
        for curve in curves {
            if (0..curve.len()).any(|e| {
                let (a, b) = curve.edge(e);
                on_segment(p, a, b)
            }) {
                violations.push(Violation {
                    rule: Rule::BridgeDoublePointOnCurve,
                    edges: vec![],
                    points: vec![p.clone()],
                });
            }
        }
    }
    crossings.sort_by(|a, b| a.gamma_loc.cmp(&b.gamma_loc));
    BridgeScan {
        self_crossings: self_x,
        crossings,
        violations,
    }
}

/// Checks the three bridge conditions and that the bridge is itself a
/// generic arc.
pub fn validate_bridge(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> ValidationReport {
    ValidationReport::from_violations(scan_bridge(bridge, c0, c1).violations)
}

/// A polyline realization of the standard curve `K_n`: a counterclockwise
/// outer loop carrying `n - 1` small counterclockwise kinks along its bottom
/// edge; `K_0` is a figure eight. Rotation number is `+n` for `n >= 1`.
pub fn standard_curve(n: usize) -> PolyCurve {
    if n == 0 {
        return PolyCurve::from_ints(&[(0, 0), (2, 2), (2, 0), (0, 2)]).expect("static K0");
    }
    let mut pts = Vec::new();
    for k in 0..(n as i64 - 1) {
        let x = 6 * k;
        pts.extend_from_slice(&[(x, 0), (x + 4, 2), (x + 3, 4), (x + 2, 0)]);
    }
    if n == 1 {
        pts.push((0, 0));
    }
    let w = 6 * (n as i64 - 1) + 4;
    pts.extend_from_slice(&[(w, 0), (w, 8), (-2, 8)]);
    PolyCurve::from_ints(&pts).expect("static Kn")
}
