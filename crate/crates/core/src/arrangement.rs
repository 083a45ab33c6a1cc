//! Planar subdivision of one or two curves: faces, Alexander numbering,
//! rotation and winding numbers, and the normal indices built on them.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::curve::{self, CurveLocation, PolyCurve, ValidationReport};
use crate::error::{Error, Result};
use crate::geom::{
    angle_cmp, int, intersect, on_segment, ray_hit, sign, signed_area2, Point, Rational,
    SegmentIntersection, Vector,
};

/// One branch through a crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pass {
    pub curve: usize,
    pub loc: CurveLocation,
    pub dir: Vector,
}

/// A transverse double point: a self-crossing of one curve or a crossing
/// between the two curves (`mutual`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub point: Point,
    pub branches: [Pass; 2],
    pub mutual: bool,
}

/// A face of the subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionInfo {
    pub id: usize,
    /// Winding number of each input curve (as oriented) around the face.
    pub winding: Vec<i64>,
    pub witness: Point,
    pub bounded: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossingTally {
    pub l_plus: usize,
    pub l_minus: usize,
}

#[derive(Clone, Debug)]
pub struct HalfEdge {
    pub origin: usize,
    pub dest: usize,
    pub curve: usize,
    /// Runs along the curve's orientation.
    pub forward: bool,
    pub twin: usize,
    pub next: usize,
    pub face: usize,
}

#[derive(Clone, Debug)]
struct Cycle {
    edges: Vec<usize>,
    area2: Rational,
    polygon: Vec<Point>,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub curves: Vec<PolyCurve>,
    pub crossings: Vec<Crossing>,
    pub vertices: Vec<Point>,
    pub half_edges: Vec<HalfEdge>,
    pub faces: Vec<RegionInfo>,
    pub unbounded: usize,
    components: usize,
    cycles: Vec<Cycle>,
    cycle_face: Vec<usize>,
}

impl Arrangement {
    /// Builds the subdivision of one or two curves.
    pub fn build(curves: &[PolyCurve]) -> Result<Arrangement> {
        if curves.is_empty() || curves.len() > 2 {
            return Err(Error::Malformed(format!(
                "arrangement of {} curves",
                curves.len()
            )));
        }
        let mut crossings = Vec::new();
        for (i, c) in curves.iter().enumerate() {
            crossings.extend(curve::self_crossings(c, i)?);
        }
        if curves.len() == 2 {
            crossings.extend(curve::mutual_crossings(&curves[0], &curves[1])?);
        }

        // split parameters per (curve, edge)
        let mut splits: HashMap<(usize, usize), Vec<(Rational, Point)>> = HashMap::new();
        for x in &crossings {
            for b in &x.branches {
                splits
                    .entry((b.curve, b.loc.edge))
                    .or_default()
                    .push((b.loc.param.clone(), x.point.clone()));
            }
        }

        let mut vertices: Vec<Point> = Vec::new();
        let mut vid: HashMap<Point, usize> = HashMap::new();
        let mut get = |p: &Point, vertices: &mut Vec<Point>| -> usize {
            if let Some(&i) = vid.get(p) {
                return i;
            }
            vertices.push(p.clone());
            vid.insert(p.clone(), vertices.len() - 1);
            vertices.len() - 1
        };

        let mut half_edges: Vec<HalfEdge> = Vec::new();
        for (ci, c) in curves.iter().enumerate() {
            for e in 0..c.len() {
                let (a, b) = c.edge(e);
                let mut pts = vec![a.clone()];
                if let Some(s) = splits.get_mut(&(ci, e)) {
                    s.sort();
                    pts.extend(s.iter().map(|(_, p)| p.clone()));
                }
                pts.push(b.clone());
                for w in pts.windows(2) {
                    let u = get(&w[0], &mut vertices);
                    let v = get(&w[1], &mut vertices);
                    let h = half_edges.len();
                    half_edges.push(HalfEdge {
                        origin: u,
                        dest: v,
                        curve: ci,
                        forward: true,
                        twin: h + 1,
                        next: 0,
                        face: 0,
                    });
                    half_edges.push(HalfEdge {
                        origin: v,
                        dest: u,
                        curve: ci,
                        forward: false,
                        twin: h,
                        next: 0,
                        face: 0,
                    });
                }
            }
        }

        // angular order of outgoing half-edges
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
        for (h, he) in half_edges.iter().enumerate() {
            outgoing[he.origin].push(h);
        }
        let dir = |h: &HalfEdge| vertices[h.dest].sub(&vertices[h.origin]);
        let mut pos = vec![0usize; half_edges.len()];
        for list in outgoing.iter_mut() {
            list.sort_by(|&a, &b| angle_cmp(&dir(&half_edges[a]), &dir(&half_edges[b])));
            for (i, &h) in list.iter().enumerate() {
                pos[h] = i;
            }
        }
        for h in 0..half_edges.len() {
            let t = half_edges[h].twin;
            let list = &outgoing[half_edges[h].dest];
            let k = list.len();
            half_edges[h].next = list[(pos[t] + k - 1) % k];
        }

        // boundary cycles
        let mut cycle_of = vec![usize::MAX; half_edges.len()];
        let mut cycles = Vec::new();
        for start in 0..half_edges.len() {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let mut edges = Vec::new();
            let mut h = start;
            loop {
                cycle_of[h] = cycles.len();
                edges.push(h);
                h = half_edges[h].next;
                if h == start {
                    break;
                }
            }
            let polygon: Vec<Point> = edges
                .iter()
                .map(|&h| vertices[half_edges[h].origin].clone())
                .collect();
            let area2 = signed_area2(&polygon);
            cycles.push(Cycle {
                edges,
                area2,
                polygon,
            });
        }

        // connected components of the vertex graph
        let mut parent: Vec<usize> = (0..vertices.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for he in &half_edges {
            let (a, b) = (find(&mut parent, he.origin), find(&mut parent, he.dest));
            if a != b {
                parent[a] = b;
            }
        }
        let comp: Vec<usize> = (0..vertices.len()).map(|v| find(&mut parent, v)).collect();
        let mut roots: Vec<usize> = comp.clone();
        roots.sort();
        roots.dedup();
        let components = roots.len();

        // faces: positive cycles are bounded faces, the rest are holes
        const UNB: usize = usize::MAX;
        let mut cycle_face_tmp = vec![UNB; cycles.len()];
        let positive: Vec<usize> = (0..cycles.len())
            .filter(|&c| cycles[c].area2.is_positive())
            .collect();
        for (k, &c) in positive.iter().enumerate() {
            cycle_face_tmp[c] = k;
        }
        for c in 0..cycles.len() {
            if cycles[c].area2.is_positive() {
                continue;
            }
            let my_comp = comp[half_edges[cycles[c].edges[0]].origin];
            let probe = &cycles[c].polygon[0];
            let mut best: Option<usize> = None;
            for &pc in &positive {
                if comp[half_edges[cycles[pc].edges[0]].origin] == my_comp {
                    continue;
                }
                if polygon_winding(&cycles[pc].polygon, probe) != 0
                    && best.is_none_or(|b| cycles[pc].area2 < cycles[b].area2)
                {
                    best = Some(pc);
                }
            }
            cycle_face_tmp[c] = match best {
                Some(pc) => cycle_face_tmp[pc],
                None => UNB,
            };
        }

        // canonical face ids: unbounded first, then by smallest boundary half-edge
        let nb = positive.len();
        let mut keys: Vec<Option<(Point, Point)>> = vec![None; nb];
        for (c, cyc) in cycles.iter().enumerate() {
            let f = cycle_face_tmp[c];
            if f == UNB {
                continue;
            }
            for &h in &cyc.edges {
                let key = (
                    vertices[half_edges[h].origin].clone(),
                    vertices[half_edges[h].dest].clone(),
                );
                if keys[f].as_ref().is_none_or(|k| key < *k) {
                    keys[f] = Some(key);
                }
            }
        }
        let mut order: Vec<usize> = (0..nb).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        let mut rename = vec![0usize; nb];
        for (new, &old) in order.iter().enumerate() {
            rename[old] = new + 1;
        }
        let cycle_face: Vec<usize> = cycle_face_tmp
            .iter()
            .map(|&f| if f == UNB { 0 } else { rename[f] })
            .collect();
        for (c, cyc) in cycles.iter().enumerate() {
            for &h in &cyc.edges {
                half_edges[h].face = cycle_face[c];
            }
        }

        // Alexander numbering by breadth-first search from the unbounded face
        let nfaces = nb + 1;
        let ncurves = curves.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nfaces];
        for (h, he) in half_edges.iter().enumerate() {
            adj[half_edges[he.twin].face].push(h);
        }
        let mut winding: Vec<Option<Vec<i64>>> = vec![None; nfaces];
        winding[0] = Some(vec![0; ncurves]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            let wf = winding[f].clone().expect("visited");
            for &h in &adj[f] {
                let he = &half_edges[h];
                let g = he.face;
                if winding[g].is_some() {
                    continue;
                }
                let mut w = wf.clone();
                w[he.curve] += if he.forward { 1 } else { -1 };
                winding[g] = Some(w);
                queue.push_back(g);
            }
        }

        let mut faces: Vec<RegionInfo> = Vec::with_capacity(nfaces);
        let (lo, _) = curve::bbox(&vertices);
        #[allow(clippy::needless_range_loop)]
        for f in 0..nfaces {
            let witness = if f == 0 {
                lo.sub(&Point::from_ints(1, 1))
            } else {
                let c = (0..cycles.len())
                    .find(|&c| cycle_face[c] == f && cycles[c].area2.is_positive())
                    .expect("outer cycle");
                let h = cycles[c].edges[0];
                let a = &vertices[half_edges[h].origin];
                let b = &vertices[half_edges[h].dest];
                let mid = Point::midpoint(a, b);
                let n = b.sub(a).perp();
                let s = first_hit(curves, &mid, &n).expect("bounded face closes off");
                mid.add(&n.scale(&(s / int(2))))
            };
            faces.push(RegionInfo {
                id: f,
                winding: winding[f].clone().expect("every face reachable"),
                witness,
                bounded: f != 0,
            });
        }

        Ok(Arrangement {
            curves: curves.to_vec(),
            crossings,
            vertices,
            half_edges,
            faces,
            unbounded: 0,
            components,
            cycles,
            cycle_face,
        })
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.half_edges.len() / 2
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// `V - E + F - 1 - components`; zero for a valid planar subdivision.
    pub fn euler_defect(&self) -> i64 {
        self.vertices.len() as i64 - self.edge_count() as i64 + self.face_count() as i64
            - 1
            - self.components as i64
    }

    /// The face containing `p`.
    pub fn locate(&self, p: &Point) -> Result<usize> {
        for c in &self.curves {
            if on_curve(c, p) {
                return Err(Error::PointOnCurve);
            }
        }
        let mut best: Option<usize> = None;
        for (c, cyc) in self.cycles.iter().enumerate() {
            if cyc.area2.is_positive()
                && polygon_winding(&cyc.polygon, p) != 0
                && best.is_none_or(|b| cyc.area2 < self.cycles[b].area2)
            {
                best = Some(c);
            }
        }
        Ok(best.map_or(0, |c| self.cycle_face[c]))
    }

    /// Crossing points lying on the boundary of face `f`.
    pub fn face_crossings(&self, f: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (c, cyc) in self.cycles.iter().enumerate() {
            if self.cycle_face[c] != f {
                continue;
            }
            for p in &cyc.polygon {
                if let Some(i) = self.crossings.iter().position(|x| &x.point == p) {
                    if !out.contains(&i) {
                        out.push(i);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Winding of the `v`-compatible orientation of curve `ci` over face `f`.
    pub fn ind_v_region(&self, ci: usize, x: &CurveLocation, v: &Vector, f: usize) -> Result<i64> {
        let s = compatible_sign(&self.curves[ci], x, v)?;
        let face = self
            .faces
            .get(f)
            .ok_or_else(|| Error::Malformed(format!("no face {f}")))?;
        Ok(s * face.winding[ci])
    }
}

/// Smallest `s > 0` at which the ray `origin + s dir` meets any of the curves.
pub(crate) fn first_hit(curves: &[PolyCurve], origin: &Point, dir: &Vector) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    for c in curves {
        for e in 0..c.len() {
            let (a, b) = c.edge(e);
            if let Some(s) = ray_hit(origin, dir, a, b) {
                if s.is_positive() && best.as_ref().is_none_or(|b| &s < b) {
                    best = Some(s);
                }
            }
        }
    }
    best
}

pub(crate) fn on_curve(c: &PolyCurve, p: &Point) -> bool {
    (0..c.len()).any(|e| {
        let (a, b) = c.edge(e);
        on_segment(p, a, b)
    })
}

/// Winding number of a closed polygon around `p` (not on it), by the
/// half-open crossing rule along direction `d`.
fn polygon_winding_along(pts: &[Point], p: &Point, d: &Vector) -> i64 {
    let n = pts.len();
    let mut w = 0;
    for i in 0..n {
        let a = pts[i].sub(p);
        let b = pts[(i + 1) % n].sub(p);
        let ha = d.cross(&a);
        let hb = d.cross(&b);
        // side of p relative to the directed edge, in the frame of d
        let left = || sign(&a.cross(&b));
        if !ha.is_positive() && hb.is_positive() {
            if left() > 0 {
                w += 1;
            }
        } else if ha.is_positive() && !hb.is_positive() && left() < 0 {
            w -= 1;
        }
    }
    w
}

fn polygon_winding(pts: &[Point], p: &Point) -> i64 {
    polygon_winding_along(pts, p, &Point::from_ints(1, 0))
}

/// Rotation (tangent winding) number, from exact quadrant bookkeeping of the
/// turn at every vertex.
pub fn rotation_number(curve: &PolyCurve) -> i64 {
    let n = curve.len();
    let mut r = 0;
    for i in 0..n {
        let prev = curve.edge_dir(i + n - 1);
        let next = curve.edge_dir(i);
        match sign(&prev.cross(&next)) {
            1 if angle_cmp(&next, &prev) == Ordering::Less => r += 1,
            -1 if angle_cmp(&next, &prev) == Ordering::Greater => r -= 1,
            _ => {}
        }
    }
    r
}

/// Winding number of the oriented curve around `p`.
pub fn winding(curve: &PolyCurve, p: &Point) -> Result<i64> {
    winding_along(curve, p, &Point::from_ints(1, 0))
}

/// [`winding`] evaluated along an explicit ray direction `d`.
pub fn winding_along(curve: &PolyCurve, p: &Point, d: &Vector) -> Result<i64> {
    if d.is_zero() {
        return Err(Error::Malformed("zero ray direction".into()));
    }
    if on_curve(curve, p) {
        return Err(Error::PointOnCurve);
    }
    Ok(polygon_winding_along(curve.vertices(), p, d))
}

/// `+1` when `<v, c'>` is already a positive basis at `x`, `-1` when the
/// reversed curve is the compatible one.
pub(crate) fn compatible_sign(curve: &PolyCurve, x: &CurveLocation, v: &Vector) -> Result<i64> {
    if !x.is_edge_interior() {
        return Err(Error::DegenerateArc(format!(
            "location at vertex {}",
            x.edge
        )));
    }
    match sign(&v.cross(&curve.edge_dir(x.edge))) {
        0 => Err(Error::TangentVector),
        s => Ok(s as i64),
    }
}

/// A point of the region entered by a short step from `x` along `v`.
pub fn probe_point(curve: &PolyCurve, x: &CurveLocation, v: &Vector) -> Point {
    let p = curve.point_at(x);
    match first_hit(std::slice::from_ref(curve), &p, v) {
        Some(s) => p.add(&v.scale(&(s / int(2)))),
        None => p.add(v),
    }
}

fn check_not_double(curve: &PolyCurve, x: &CurveLocation) -> Result<()> {
    let p = curve.point_at(x);
    if curve::self_crossings(curve, 0)?
        .iter()
        .any(|c| c.point == p)
    {
        return Err(Error::BaseOnDoublePoint);
    }
    Ok(())
}

/// Normal index: winding of the `v`-compatible orientation over the region
/// `v` points into.
pub fn ind_v(curve: &PolyCurve, x: &CurveLocation, v: &Vector) -> Result<i64> {
    let s = compatible_sign(curve, x, v)?;
    check_not_double(curve, x)?;
    Ok(s * winding(curve, &probe_point(curve, x, v))?)
}

/// Winding of the `v`-compatible orientation around an arbitrary point `p`
/// off the curve.
pub fn ind_v_at(curve: &PolyCurve, x: &CurveLocation, v: &Vector, p: &Point) -> Result<i64> {
    let s = compatible_sign(curve, x, v)?;
    Ok(s * winding(curve, p)?)
}

/// Counts the interior crossings of an arc leaving the curve at `arc[0]`
/// by whether the curve points the same side of the arc there as at the
/// start (`l_plus`) or the opposite side (`l_minus`).
pub fn arc_crossing_tally(arc: &[Point], curve: &PolyCurve) -> Result<CrossingTally> {
    if arc.len() < 2 {
        return Err(Error::DegenerateArc("arc needs two points".into()));
    }
    let start = &arc[0];
    let start_edges: Vec<usize> = (0..curve.len())
        .filter(|&e| {
            let (a, b) = curve.edge(e);
            on_segment(start, a, b)
        })
        .collect();
    if start_edges.len() != 1 || curve.vertices().contains(start) {
        return Err(Error::DegenerateArc(
            "arc must start in an edge interior".into(),
        ));
    }
    let e0 = start_edges[0];
    let doubles = curve::self_crossings(curve, 0)?;
    if doubles.iter().any(|c| &c.point == start) {
        return Err(Error::BaseOnDoublePoint);
    }
    if on_curve(curve, arc.last().expect("nonempty")) {
        return Err(Error::DegenerateArc("arc ends on the curve".into()));
    }
    let sigma0 = sign(&arc[1].sub(&arc[0]).cross(&curve.edge_dir(e0)));
    if sigma0 == 0 {
        return Err(Error::DegenerateArc("arc tangent at its start".into()));
    }
    let mut tally = CrossingTally::default();
    for s in 0..arc.len() - 1 {
        let ad = arc[s + 1].sub(&arc[s]);
        for e in 0..curve.len() {
            let (a, b) = curve.edge(e);
            match intersect(&arc[s], &arc[s + 1], a, b) {
                None => {}
                Some(SegmentIntersection::Transverse { point, .. }) => {
                    if doubles.iter().any(|c| c.point == point) {
                        return Err(Error::DegenerateArc(format!(
                            "arc passes double point {point}"
                        )));
                    }
                    if sign(&ad.cross(&curve.edge_dir(e))) == sigma0 {
                        tally.l_plus += 1;
                    } else {
                        tally.l_minus += 1;
                    }
                }
                Some(SegmentIntersection::Touching { point, t, .. }) => {
                    let is_start = s == 0 && t.is_zero() && e == e0;
                    if !is_start {
                        return Err(Error::DegenerateArc(format!(
                            "non-transverse contact at {point}"
                        )));
                    }
                }
                Some(SegmentIntersection::Overlap { start, .. }) => {
                    return Err(Error::DegenerateArc(format!(
                        "arc overlaps the curve at {start}"
                    )));
                }
            }
        }
    }
    // arc self-intersections are allowed; tangencies at arc vertices are not
    for p in &arc[1..arc.len() - 1] {
        if on_curve(curve, p) {
            return Err(Error::DegenerateArc(format!("arc vertex {p} on the curve")));
        }
    }
    Ok(tally)
}

/// Convenience: report for a curve pair, used by the CLI.
pub fn analyze_report(curves: &[PolyCurve]) -> ValidationReport {
    let mut r = curve::validate_generic(&curves[0]);
    for c in &curves[1..] {
        let r1 = curve::validate_generic(c);
        r.violations.extend(r1.violations);
    }
    if curves.len() == 2 {
        r.violations
            .extend(curve::validate_general_position(&curves[0], &curves[1]).violations);
    }
    r.ok = r.violations.is_empty();
    r
}
