//! Bridges and surgery: compatible orientations, the signs `s(x)`, bridge
//! statistics, the generalized connected sum and the pushed appendix.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arrangement::{self, Arrangement};
use crate::combinatorics;
use crate::curve::{self, Bridge, CurveLocation, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{dist2_point_segment, int, rat, sign, Point, Rational, Vector};

/// An interior crossing of the bridge with one of the curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeCrossing {
    pub host: usize,
    pub host_loc: CurveLocation,
    pub gamma_loc: CurveLocation,
    pub point: Point,
    pub s: i32,
}

#[derive(Clone, Debug)]
pub struct BridgeStats {
    pub n_gamma: usize,
    /// Ordered by position along the bridge.
    pub crossings: Vec<BridgeCrossing>,
    pub self_crossings: Vec<Point>,
    pub v0: Vector,
    pub v1: Vector,
    /// Face of the arrangement of `C_i` alone that contains `b_{1-i}`.
    pub r0: usize,
    pub r1: usize,
    pub b0: CurveLocation,
    pub b1: CurveLocation,
    pub ind_v0: i64,
    pub ind_v1: i64,
    /// `ind^{R_i}_{v_i}(C_i)`.
    pub ind_r0: i64,
    pub ind_r1: i64,
    /// `|C_0 \cap C_1|`.
    pub mutual: usize,
    pub separated: bool,
}

impl BridgeStats {
    pub fn interior_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn interior_count_on(&self, host: usize) -> usize {
        self.crossings.iter().filter(|x| x.host == host).count()
    }

    /// `sum s(x) s(y)` over `x` on `C_0` preceding `y` on `C_1` along the bridge.
    pub fn ordered_s_product(&self) -> i64 {
        let mut acc = 0;
        let mut prefix = 0i64;
        for x in &self.crossings {
            if x.host == 0 {
                prefix += x.s as i64;
            } else {
                acc += prefix * x.s as i64;
            }
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumClass {
    ConnectedSum,
    StrangeSum,
    MendesRomero,
    General,
}

fn require_valid(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> Result<curve::BridgeScan> {
    for c in [c0, c1] {
        let r = curve::validate_generic(c);
        if !r.ok {
            return Err(Error::Genericity(r));
        }
    }
    let r = curve::validate_general_position(c0, c1);
    if !r.ok {
        return Err(Error::Genericity(r));
    }
    let scan = curve::scan_bridge(bridge, c0, c1);
    if !scan.violations.is_empty() {
        return Err(Error::BridgeInvalid(curve::ValidationReport {
            ok: false,
            violations: scan.violations,
        }));
    }
    Ok(scan)
}

fn end_vectors(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> (Vector, Vector) {
    let pts = bridge.points(c0, c1);
    let m = pts.len();
    (pts[1].sub(&pts[0]), pts[m - 2].sub(&pts[m - 1]))
}

/// Whether each curve must be reversed to obtain the compatible pair in
/// which `c_i` is compatible with `v_i` (the other compatible pair is the
/// simultaneous reversal).
pub fn compatible_orientations(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
) -> Result<(bool, bool)> {
    require_valid(bridge, c0, c1)?;
    let (v0, v1) = end_vectors(bridge, c0, c1);
    let s0 = sign(&v0.cross(&c0.edge_dir(bridge.start.edge)));
    let s1 = sign(&v1.cross(&c1.edge_dir(bridge.end.edge)));
    Ok((s0 < 0, s1 < 0))
}

/// The curves reoriented compatibly, with the bridge re-expressed on them.
pub fn orient_compatibly(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
) -> Result<(PolyCurve, PolyCurve, Bridge)> {
    let (r0, r1) = compatible_orientations(c0, c1, bridge)?;
    let o0 = if r0 { c0.reverse() } else { c0.clone() };
    let o1 = if r1 { c1.reverse() } else { c1.clone() };
    Ok((o0, o1, bridge.reoriented(c0, c1, r0, r1)))
}

fn s_of(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve, x: &curve::RawBridgeCrossing) -> i32 {
    let pts = bridge.points(c0, c1);
    let m = pts.len();
    let host = if x.host == 0 { c0 } else { c1 };
    let g = pts[x.gamma_loc.edge + 1].sub(&pts[x.gamma_loc.edge]);
    let sigma_x = sign(&g.cross(&host.edge_dir(x.host_loc.edge)));
    let sigma_b = if x.host == 0 {
        sign(&pts[1].sub(&pts[0]).cross(&c0.edge_dir(bridge.start.edge)))
    } else {
        sign(
            &pts[m - 1]
                .sub(&pts[m - 2])
                .cross(&c1.edge_dir(bridge.end.edge)),
        )
    };
    if sigma_x == sigma_b {
        1
    } else {
        -1
    }
}

/// `+1` iff the host curve points to the same side of the bridge at `x` as
/// at the bridge endpoint on that curve.
pub fn s_sign(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve, x: &Point) -> Result<i32> {
    let scan = require_valid(bridge, c0, c1)?;
    let raw = scan
        .crossings
        .iter()
        .find(|r| &r.point == x)
        .ok_or(Error::NotAnInteriorCrossing)?;
    Ok(s_of(bridge, c0, c1, raw))
}

pub fn bridge_stats(bridge: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> Result<BridgeStats> {
    let scan = require_valid(bridge, c0, c1)?;
    let (v0, v1) = end_vectors(bridge, c0, c1);
    let crossings = scan
        .crossings
        .iter()
        .map(|r| BridgeCrossing {
            host: r.host,
            host_loc: r.host_loc.clone(),
            gamma_loc: r.gamma_loc.clone(),
            point: r.point.clone(),
            s: s_of(bridge, c0, c1, r),
        })
        .collect();
    let p0 = c0.point_at(&bridge.start);
    let p1 = c1.point_at(&bridge.end);
    let a0 = Arrangement::build(std::slice::from_ref(c0))?;
    let a1 = Arrangement::build(std::slice::from_ref(c1))?;
    Ok(BridgeStats {
        n_gamma: scan.self_crossings.len(),
        crossings,
        self_crossings: scan.self_crossings.iter().map(|s| s.2.clone()).collect(),
        r0: a0.locate(&p1)?,
        r1: a1.locate(&p0)?,
        ind_v0: arrangement::ind_v(c0, &bridge.start, &v0)?,
        ind_v1: arrangement::ind_v(c1, &bridge.end, &v1)?,
        ind_r0: arrangement::ind_v_at(c0, &bridge.start, &v0, &p1)?,
        ind_r1: arrangement::ind_v_at(c1, &bridge.end, &v1, &p0)?,
        v0,
        v1,
        b0: bridge.start.clone(),
        b1: bridge.end.clone(),
        mutual: curve::scan_mutual(c0, c1).0.len(),
        separated: combinatorics::separated(c0, c1)?,
    })
}

pub fn classify(c0: &PolyCurve, c1: &PolyCurve, bridge: &Bridge) -> Result<SumClass> {
    let scan = require_valid(bridge, c0, c1)?;
    let sep = combinatorics::separated(c0, c1)?;
    let clean = scan.self_crossings.is_empty() && scan.crossings.is_empty();
    Ok(match (sep, clean) {
        (true, true) => SumClass::ConnectedSum,
        (true, false) => SumClass::StrangeSum,
        (false, true) => SumClass::MendesRomero,
        (false, false) => SumClass::General,
    })
}

/// Predicates behind [`SumClass`], which overlap for connected sums.
pub fn is_strange(class: SumClass) -> bool {
    matches!(class, SumClass::ConnectedSum | SumClass::StrangeSum)
}

pub fn is_mendes_romero(class: SumClass) -> bool {
    matches!(class, SumClass::ConnectedSum | SumClass::MendesRomero)
}

/// Expected number of double points of the sum.
pub fn expected_double_points(d0: usize, d1: usize, stats: &BridgeStats) -> usize {
    d0 + d1 + stats.mutual + 2 * stats.interior_count() + 4 * stats.n_gamma
}

/// Where a feature of the bridge reappears in the constructed curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogEntry {
    pub kind: &'static str,
    pub source: Point,
    pub images: Vec<Point>,
}

#[derive(Clone, Debug)]
pub struct SumConstruction {
    pub curve: PolyCurve,
    pub delta: Rational,
    pub log: Vec<LogEntry>,
}

fn line_meet(a: &Point, da: &Vector, b: &Point, db: &Vector) -> Option<Point> {
    let den = da.cross(db);
    if den.is_zero() {
        return None;
    }
    let lam = b.sub(a).cross(db) / den;
    Some(a.add(&da.scale(&lam)))
}

fn edge_param(c: &PolyCurve, e: usize, p: &Point) -> Rational {
    let (a, _) = c.edge(e);
    let d = c.edge_dir(e);
    p.sub(a).dot(&d) / d.norm2()
}

enum StrandEnd<'a> {
    Curve(&'a PolyCurve, usize),
    Cap(Rational),
}

/// Offset polylines at signed distance `sigma * delta * |d_j|` to the left of
/// each bridge segment, from the line of `C_0`'s edge to the given end.
fn strand(
    g: &[Point],
    sigma: i64,
    delta: &Rational,
    c0: &PolyCurve,
    e0: usize,
    end: &StrandEnd,
) -> Option<Vec<Point>> {
    let k = g.len() - 1;
    let off = int(sigma) * delta;
    let d: Vec<Vector> = (0..k).map(|j| g[j + 1].sub(&g[j])).collect();
    let base: Vec<Point> = (0..k).map(|j| g[j].add(&d[j].perp().scale(&off))).collect();
    let mut pts = Vec::new();
    pts.push(line_meet(&base[0], &d[0], c0.vertex(e0), &c0.edge_dir(e0))?);
    for j in 1..k {
        if d[j - 1].cross(&d[j]).is_zero() {
            let a = g[j].add(&d[j - 1].perp().scale(&off));
            let b = g[j].add(&d[j].perp().scale(&off));
            if a == b {
                pts.push(a);
            } else {
                pts.push(a);
                pts.push(b);
            }
        } else {
            pts.push(line_meet(&base[j - 1], &d[j - 1], &base[j], &d[j])?);
        }
    }
    pts.push(match end {
        StrandEnd::Curve(c1, e1) => {
            line_meet(&base[k - 1], &d[k - 1], c1.vertex(*e1), &c1.edge_dir(*e1))?
        }
        StrandEnd::Cap(lam) => base[k - 1].add(&d[k - 1].scale(lam)),
    });
    Some(pts)
}

/// The `n` vertices met when walking once around `c` from a point of edge
/// `e` back to edge `e`, forward or backward.
fn around(c: &PolyCurve, e: usize, forward: bool) -> Vec<Point> {
    let n = c.len();
    if forward {
        (1..=n).map(|i| c.vertex(e + i).clone()).collect()
    } else {
        (0..n).map(|i| c.vertex(e + n - i).clone()).collect()
    }
}

/// Power of two no larger than the clearance around the bridge divided by
/// the longest bridge segment.
fn initial_delta(
    g: &[Point],
    c0: &PolyCurve,
    c1: &PolyCurve,
    scan: &curve::BridgeScan,
) -> Rational {
    let k = g.len() - 1;
    let mut on_gamma: Vec<Point> = g.to_vec();
    on_gamma.extend(scan.crossings.iter().map(|x| x.point.clone()));
    on_gamma.extend(scan.self_crossings.iter().map(|x| x.2.clone()));
    let mut others: Vec<Point> = c0.vertices().to_vec();
    others.extend(c1.vertices().iter().cloned());
    let mut best: Option<Rational> = None;
    let mut upd = |d: Rational| {
        if d.is_positive() && best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    };
    for j in 0..k {
        for p in others.iter().chain(on_gamma.iter()) {
            upd(dist2_point_segment(p, &g[j], &g[j + 1]));
        }
    }
    for (i, p) in on_gamma.iter().enumerate() {
        for q in &on_gamma[i + 1..] {
            upd(p.sub(q).norm2());
        }
        for c in [c0, c1] {
            for e in 0..c.len() {
                let (a, b) = c.edge(e);
                upd(dist2_point_segment(p, a, b));
            }
        }
    }
    let clr = best.unwrap_or_else(Rational::one);
    let maxd = (0..k)
        .map(|j| g[j + 1].sub(&g[j]).norm2())
        .max()
        .expect("segments");
    let bound = clr / (maxd * int(64));
    let mut delta = Rational::one();
    while &delta * &delta > bound {
        delta *= rat(1, 2);
    }
    delta
}

const HALVINGS: usize = 20;

fn build_sum(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
    delta: &Rational,
) -> Option<PolyCurve> {
    let g = bridge.points(c0, c1);
    let (e0, e1) = (bridge.start.edge, bridge.end.edge);
    let sp = strand(&g, 1, delta, c0, e0, &StrandEnd::Curve(c1, e1))?;
    let sm = strand(&g, -1, delta, c0, e0, &StrandEnd::Curve(c1, e1))?;
    let (tp, tm) = (edge_param(c0, e0, &sp[0]), edge_param(c0, e0, &sm[0]));
    let (before, after) = if tp < tm { (&sp, &sm) } else { (&sm, &sp) };
    let mut pts = vec![after[0].clone()];
    pts.extend(around(c0, e0, true));
    pts.extend(before.iter().cloned());
    let ub = edge_param(c1, e1, before.last()?);
    let ua = edge_param(c1, e1, after.last()?);
    pts.extend(around(c1, e1, ub > ua));
    pts.extend(after.iter().rev().take(after.len() - 1).cloned());
    let c = PolyCurve::new(pts).ok()?;
    Some(c)
}

fn sum_log(c: &PolyCurve, stats: &BridgeStats) -> Vec<LogEntry> {
    let xs = curve::self_crossings(c, 0).unwrap_or_default();
    let mut log = Vec::new();
    let mut sources: Vec<(&'static str, Point, usize)> = stats
        .crossings
        .iter()
        .map(|x| ("bridge-crossing", x.point.clone(), 2))
        .collect();
    sources.extend(
        stats
            .self_crossings
            .iter()
            .map(|p| ("bridge-self-crossing", p.clone(), 4)),
    );
    for (kind, src, want) in sources {
        let mut d: Vec<(Rational, Point)> = xs
            .iter()
            .map(|x| (x.point.sub(&src).norm2(), x.point.clone()))
            .collect();
        d.sort();
        log.push(LogEntry {
            kind,
            source: src,
            images: d.into_iter().take(want).map(|x| x.1).collect(),
        });
    }
    log
}

/// The generalized connected sum `C_0 +_Gamma C_1`, together with the tube
/// width used and the images of the bridge crossings.
pub fn construct_sum_logged(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
) -> Result<SumConstruction> {
    let scan = require_valid(bridge, c0, c1)?;
    let stats = bridge_stats(bridge, c0, c1)?;
    let g = bridge.points(c0, c1);
    let mut delta = initial_delta(&g, c0, c1, &scan);
    // accept the first width whose curve is generic and keeps its crossing
    // count when the width is halved once more
    let generic_count = |d: &Rational| -> Option<(PolyCurve, usize)> {
        let c = build_sum(c0, c1, bridge, d)?;
        if !curve::validate_generic(&c).ok {
            return None;
        }
        let n = curve::self_crossings(&c, 0).ok()?.len();
        Some((c, n))
    };
    let mut current = generic_count(&delta);
    for _ in 0..HALVINGS {
        let half = &delta * rat(1, 2);
        let next = generic_count(&half);
        if let (Some((c, n)), Some((_, m))) = (&current, &next) {
            if n == m {
                let log = sum_log(c, &stats);
                return Ok(SumConstruction {
                    curve: c.clone(),
                    delta,
                    log,
                });
            }
        }
        current = next;
        delta = half;
    }
    Err(Error::ConstructionDegenerate(format!(
        "no stable tube width after {HALVINGS} halvings"
    )))
}

pub fn construct_sum(c0: &PolyCurve, c1: &PolyCurve, bridge: &Bridge) -> Result<PolyCurve> {
    Ok(construct_sum_logged(c0, c1, bridge)?.curve)
}

fn build_appendix(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
    delta: &Rational,
    cap: &Rational,
) -> Option<(PolyCurve, Bridge)> {
    let g = bridge.points(c0, c1);
    let e0 = bridge.start.edge;
    let sp = strand(&g, 1, delta, c0, e0, &StrandEnd::Cap(cap.clone()))?;
    let sm = strand(&g, -1, delta, c0, e0, &StrandEnd::Cap(cap.clone()))?;
    let (tp, tm) = (edge_param(c0, e0, &sp[0]), edge_param(c0, e0, &sm[0]));
    let (before, after) = if tp < tm { (&sp, &sm) } else { (&sm, &sp) };
    let mut pts = vec![after[0].clone()];
    pts.extend(around(c0, e0, true));
    pts.extend(before.iter().cloned());
    let cap_edge = pts.len() - 1;
    pts.extend(after.iter().rev().take(after.len() - 1).cloned());
    let bar = PolyCurve::new(pts).ok()?;
    let gamma = Bridge::straight(CurveLocation::new(cap_edge, rat(1, 2)), bridge.end.clone());
    Some((bar, gamma))
}

/// Pushes a finger of `C_0` along the bridge up to just short of `b_1`.
/// Returns the new curve and the short residual bridge.
pub fn push_appendix(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
) -> Result<(PolyCurve, Bridge)> {
    let scan = require_valid(bridge, c0, c1)?;
    let d0 = curve::self_crossings(c0, 0)?.len();
    let m = curve::scan_mutual(c0, c1).0.len();
    let on0 = scan.crossings.iter().filter(|x| x.host == 0).count();
    let on1 = scan.crossings.len() - on0;
    let n_gamma = scan.self_crossings.len();
    let g = bridge.points(c0, c1);
    let last = g.len() - 2;
    let mut lam = Rational::zero();
    for x in &scan.crossings {
        if x.gamma_loc.edge == last && x.gamma_loc.param > lam {
            lam = x.gamma_loc.param.clone();
        }
    }
    for (a, b, _) in &scan.self_crossings {
        for l in [a, b] {
            if l.edge == last && l.param > lam {
                lam = l.param.clone();
            }
        }
    }
    let cap = (lam + Rational::one()) / int(2);
    let mut delta = initial_delta(&g, c0, c1, &scan);
    for _ in 0..=HALVINGS {
        if let Some((bar, gamma)) = build_appendix(c0, c1, bridge, &delta, &cap) {
            let ok = curve::self_crossings(&bar, 0)
                .is_ok_and(|x| x.len() == d0 + 2 * on0 + 4 * n_gamma)
                && curve::mutual_crossings(&bar, c1).is_ok_and(|x| x.len() == m + 2 * on1)
                && curve::validate_bridge(&gamma, &bar, c1).ok
                && curve::scan_bridge(&gamma, &bar, c1).crossings.is_empty();
            if ok {
                return Ok((bar, gamma));
            }
        }
        delta *= rat(1, 2);
    }
    Err(Error::ConstructionDegenerate(format!(
        "no valid appendix width after {HALVINGS} halvings"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::winding;
    use crate::curve::{scan_bridge, standard_curve};

    fn square(k: i64) -> PolyCurve {
        PolyCurve::from_ints(&[(0, 0), (k, 0), (k, k), (0, k)]).unwrap()
    }

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()
    }

    /// Two 4x4 squares ten apart joined by a straight bridge.
    fn far_pair() -> (PolyCurve, PolyCurve, Bridge) {
        let a = square(4);
        let b = square(4).translate(&Point::from_ints(10, 0));
        let g = Bridge::straight(
            CurveLocation::new(1, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
        );
        (a, b, g)
    }

    /// The bridge of `far_pair` with an extra loop.
    fn looped(a: &PolyCurve, b: &PolyCurve) -> Bridge {
        let _ = (a, b);
        Bridge::new(
            CurveLocation::new(1, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(7, 2), (7, 4), (6, 3), (8, 3)]),
        )
    }

    #[test]
    fn compatible_pair_for_far_squares() {
        let (a, b, g) = far_pair();
        assert_eq!(compatible_orientations(&a, &b, &g).unwrap(), (false, false));
        let (ar, br) = (a.reverse(), b.reverse());
        let gr = g.reoriented(&a, &b, true, true);
        assert_eq!(
            compatible_orientations(&ar, &br, &gr).unwrap(),
            (true, true)
        );
        let gm = g.reoriented(&a, &b, true, false);
        assert_eq!(
            compatible_orientations(&ar, &b, &gm).unwrap(),
            (true, false)
        );
    }

    #[test]
    fn classification() {
        let (a, b, g) = far_pair();
        assert_eq!(classify(&a, &b, &g).unwrap(), SumClass::ConnectedSum);
        assert_eq!(
            classify(&a, &b, &looped(&a, &b)).unwrap(),
            SumClass::StrangeSum
        );
        let l0 = PolyCurve::from_ints(&[(0, 0), (4, -2), (8, 0), (4, 2)]).unwrap();
        let l1 = l0.translate(&Point::from_ints(5, 0));
        // from the far left tip region of l0 to the far right of l1, around below
        let gl = Bridge::new(
            CurveLocation::new(0, rat(1, 4)),
            CurveLocation::new(1, rat(1, 2)),
            pts(&[(2, -4), (16, -4)]),
        );
        assert_eq!(classify(&l0, &l1, &gl).unwrap(), SumClass::MendesRomero);
    }

    #[test]
    fn connected_sum_of_squares() {
        let (a, b, g) = far_pair();
        let s = construct_sum(&a, &b, &g).unwrap();
        assert!(curve::validate_generic(&s).ok);
        assert!(curve::self_crossings(&s, 0).unwrap().is_empty());
        assert_eq!(arrangement::rotation_number(&s).abs(), 1);
    }

    #[test]
    fn looped_sum_has_four_double_points() {
        let (a, b, _) = far_pair();
        let g = looped(&a, &b);
        let st = bridge_stats(&g, &a, &b).unwrap();
        assert_eq!(st.n_gamma, 1);
        let sc = construct_sum_logged(&a, &b, &g).unwrap();
        assert_eq!(curve::self_crossings(&sc.curve, 0).unwrap().len(), 4);
        assert_eq!(sc.log.len(), 1);
        assert_eq!(sc.log[0].images.len(), 4);
    }

    #[test]
    fn one_interior_crossing_gives_two_double_points() {
        // leave the top of square A, come down across its right edge and go right
        let a = square(4);
        let b = square(4).translate(&Point::from_ints(10, 0));
        let g = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(2, 6), (6, 6), (6, 3), (3, 3), (3, 1), (9, 1)]),
        );
        let st = bridge_stats(&g, &a, &b).unwrap();
        assert_eq!(st.interior_count(), 2);
        let s = construct_sum(&a, &b, &g).unwrap();
        assert_eq!(curve::self_crossings(&s, 0).unwrap().len(), 4);
        let g1 = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(2, 6), (6, 6), (6, 3), (9, 3)]),
        );
        let st1 = bridge_stats(&g1, &a, &b).unwrap();
        assert_eq!(st1.interior_count(), 0);
        let g2 = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(2, 2), (6, 2)]),
        );
        let st2 = bridge_stats(&g2, &a, &b).unwrap();
        assert_eq!(st2.interior_count(), 1);
        assert_eq!(st2.crossings[0].s, -1);
        let s2 = construct_sum(&a, &b, &g2).unwrap();
        assert_eq!(curve::self_crossings(&s2, 0).unwrap().len(), 2);
    }

    #[test]
    fn s_signs_and_index_identity() {
        // bridge from the bottom of A straight up through A's top edge, around
        // and back down through A's top edge again, then to B
        let a = square(4);
        let b = square(4).translate(&Point::from_ints(10, 0));
        let g = Bridge::new(
            CurveLocation::new(0, rat(1, 4)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(1, 6), (3, 6), (3, 2), (8, 2)]),
        );
        let st = bridge_stats(&g, &a, &b).unwrap();
        assert_eq!(st.interior_count(), 3);
        // index identity along the bridge: ind^R_v - ind_v = -sum s(x) over C0 crossings
        let sum_s: i64 = st
            .crossings
            .iter()
            .filter(|x| x.host == 0)
            .map(|x| x.s as i64)
            .sum();
        assert_eq!(st.ind_r0 - st.ind_v0, -sum_s);
        let sum_s1: i64 = st
            .crossings
            .iter()
            .filter(|x| x.host == 1)
            .map(|x| x.s as i64)
            .sum();
        assert_eq!(st.ind_r1 - st.ind_v1, -sum_s1);
        let p = st.crossings[0].point.clone();
        assert_eq!(s_sign(&g, &a, &b, &p).unwrap(), st.crossings[0].s);
        assert!(matches!(
            s_sign(&g, &a, &b, &Point::from_ints(99, 99)),
            Err(Error::NotAnInteriorCrossing)
        ));
    }

    #[test]
    fn regions_of_stats() {
        let (a, b, g) = far_pair();
        let st = bridge_stats(&g, &a, &b).unwrap();
        assert_eq!((st.r0, st.r1), (0, 0));
        assert_eq!(st.ind_v0, 0);
        assert_eq!(st.ind_v1, 0);
        // b1 inside a big C0: R0 is C0's interior face
        let big = square(40).translate(&Point::from_ints(-20, -20));
        let small = square(2);
        let g = Bridge::straight(
            CurveLocation::new(3, rat(1, 2)),
            CurveLocation::new(1, rat(1, 2)),
        );
        let gpts = g.points(&big, &small);
        let r = validate_and_stats(&g, &big, &small);
        assert_eq!(r.r0, 1);
        assert_eq!(winding(&big, gpts.last().unwrap()).unwrap(), 1);
    }

    fn validate_and_stats(g: &Bridge, a: &PolyCurve, b: &PolyCurve) -> BridgeStats {
        let scan = scan_bridge(g, a, b);
        assert!(scan.violations.is_empty(), "{:?}", scan.violations);
        bridge_stats(g, a, b).unwrap()
    }

    #[test]
    fn appendix_counts() {
        let (a, b, g) = far_pair();
        let (bar, gb) = push_appendix(&a, &b, &g).unwrap();
        assert!(curve::self_crossings(&bar, 0).unwrap().is_empty());
        assert!(curve::validate_bridge(&gb, &bar, &b).ok);
        let (bar, _) = push_appendix(&a, &b, &looped(&a, &b)).unwrap();
        assert_eq!(curve::self_crossings(&bar, 0).unwrap().len(), 4);
        let g2 = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            pts(&[(2, 2), (6, 2)]),
        );
        let (bar, gb) = push_appendix(&a, &b, &g2).unwrap();
        assert_eq!(curve::self_crossings(&bar, 0).unwrap().len(), 2);
        let s1 = construct_sum(&a, &b, &g2).unwrap();
        let s2 = construct_sum(&bar, &b, &gb).unwrap();
        assert_eq!(
            curve::self_crossings(&s1, 0).unwrap().len(),
            curve::self_crossings(&s2, 0).unwrap().len()
        );
    }

    #[test]
    fn sum_with_standard_curves() {
        let k2 = standard_curve(2);
        let k3 = standard_curve(3).translate(&Point::from_ints(20, 0));
        let g = Bridge::straight(
            CurveLocation::new(k2.len() - 3, rat(1, 2)),
            CurveLocation::new(k3.len() - 1, rat(1, 2)),
        );
        let r = curve::validate_bridge(&g, &k2, &k3);
        assert!(r.ok, "{r}");
        let s = construct_sum(&k2, &k3, &g).unwrap();
        assert_eq!(curve::self_crossings(&s, 0).unwrap().len(), 3);
    }
}
