//! Base-pointed structure of a curve: double-point signs, splicing, and the
//! polygon decomposition of two intersecting disks.

use num_traits::{One, Zero};

use crate::arrangement::{Arrangement, Crossing};
use crate::curve::{self, CurveLocation, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{cross_sign, int, rat, Point, Rational, Vector};

/// The two branch directions at a double point, in the order they are
/// visited after the base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraversalOrder {
    pub point: Point,
    pub first: Vector,
    pub second: Vector,
}

impl TraversalOrder {
    pub fn sign(&self) -> i32 {
        cross_sign(&self.first, &self.second)
    }
}

/// Cyclic distance from `base` to `loc` along a curve with `n` edges.
pub(crate) fn cyclic_offset(n: usize, base: &Rational, loc: &CurveLocation) -> Rational {
    let d = loc.global() - base;
    if d < Rational::zero() {
        d + int(n as i64)
    } else {
        d
    }
}

fn order_at(n: usize, base: &Rational, x: &Crossing) -> TraversalOrder {
    let [a, b] = &x.branches;
    let (first, second) = if cyclic_offset(n, base, &a.loc) < cyclic_offset(n, base, &b.loc) {
        (a, b)
    } else {
        (b, a)
    };
    TraversalOrder {
        point: x.point.clone(),
        first: first.dir.clone(),
        second: second.dir.clone(),
    }
}

/// Traversal orders of every double point of `curve` from `base`.
pub fn traversal_orders(curve: &PolyCurve, base: &CurveLocation) -> Result<Vec<TraversalOrder>> {
    let xs = curve::self_crossings(curve, 0)?;
    let bp = curve.point_at(base);
    if xs.iter().any(|x| x.point == bp) {
        return Err(Error::BaseOnDoublePoint);
    }
    let g = base.global();
    Ok(xs.iter().map(|x| order_at(curve.len(), &g, x)).collect())
}

/// `+1` iff the first- and second-visit directions at `p` form a positive
/// basis when the curve is run from `base`.
pub fn e_sign(curve: &PolyCurve, base: &CurveLocation, p: &Crossing) -> Result<i32> {
    if p.mutual {
        return Err(Error::Malformed("e_sign of a mutual crossing".into()));
    }
    if curve.point_at(base) == p.point {
        return Err(Error::BaseOnDoublePoint);
    }
    Ok(order_at(curve.len(), &base.global(), p).sign())
}

struct PassRef {
    edge: usize,
    param: Rational,
    partner: usize,
}

fn arc_points(curve: &PolyCurve, passes: &[PassRef], k: usize, delta: &Rational) -> Vec<Point> {
    let n = curve.len();
    let m = passes.len();
    let (a, b) = (&passes[k], &passes[(k + 1) % m]);
    let mut pts = vec![curve.point_at(&CurveLocation::new(a.edge, &a.param + delta))];
    let mut count = (b.edge + n - a.edge) % n;
    if count == 0 && b.param <= a.param {
        count = n;
    }
    for i in 1..=count {
        pts.push(curve.vertex(a.edge + i).clone());
    }
    pts.push(curve.point_at(&CurveLocation::new(b.edge, &b.param - delta)));
    pts
}

fn splice_with(curve: &PolyCurve, passes: &[PassRef], delta: &Rational) -> Result<Vec<PolyCurve>> {
    let m = passes.len();
    let mut used = vec![false; m];
    let mut out = Vec::new();
    for start in 0..m {
        if used[start] {
            continue;
        }
        let mut pts = Vec::new();
        let mut k = start;
        while !used[k] {
            used[k] = true;
            pts.extend(arc_points(curve, passes, k, delta));
            k = passes[(k + 1) % m].partner;
        }
        out.push(PolyCurve::new(pts)?);
    }
    Ok(out)
}

fn splice_ok(orig: &PolyCurve, parts: &[PolyCurve], context: &[PolyCurve]) -> bool {
    for (i, p) in parts.iter().enumerate() {
        match curve::self_crossings(p, 0) {
            Ok(x) if x.is_empty() => {}
            _ => return false,
        }
        for q in &parts[i + 1..] {
            if !curve::scan_mutual(p, q).0.is_empty() || !curve::scan_mutual(p, q).1.is_empty() {
                return false;
            }
        }
    }
    for c in context {
        let mut before: Vec<Point> = curve::scan_mutual(orig, c)
            .0
            .into_iter()
            .map(|x| x.point)
            .collect();
        let mut after = Vec::new();
        for p in parts {
            if !curve::validate_general_position(p, c).ok {
                return false;
            }
            after.extend(curve::scan_mutual(p, c).0.into_iter().map(|x| x.point));
        }
        before.sort();
        after.sort();
        if before != after {
            return false;
        }
    }
    true
}

/// Orientation-respecting smoothing of every double point, leaving the
/// intersections with the curves in `context` untouched.
pub fn splice_in_context(curve: &PolyCurve, context: &[PolyCurve]) -> Result<Vec<PolyCurve>> {
    let xs = curve::self_crossings(curve, 0)?;
    if xs.is_empty() {
        return Ok(vec![curve.clone()]);
    }
    let mut raw: Vec<(usize, Rational, usize)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for b in &x.branches {
            raw.push((b.loc.edge, b.loc.param.clone(), i));
        }
    }
    raw.sort();
    let mut passes: Vec<PassRef> = raw
        .iter()
        .map(|(e, t, _)| PassRef {
            edge: *e,
            param: t.clone(),
            partner: 0,
        })
        .collect();
    for k in 0..raw.len() {
        passes[k].partner = (0..raw.len())
            .find(|&j| j != k && raw[j].2 == raw[k].2)
            .expect("two branches");
    }
    // smallest parameter gap on any edge, edge ends included
    let mut gap = Rational::one();
    for (k, p) in passes.iter().enumerate() {
        let lower = if k > 0 && passes[k - 1].edge == p.edge {
            passes[k - 1].param.clone()
        } else {
            Rational::zero()
        };
        gap = gap.min(&p.param - lower);
        let upper = if k + 1 < passes.len() && passes[k + 1].edge == p.edge {
            passes[k + 1].param.clone()
        } else {
            Rational::one()
        };
        gap = gap.min(upper - &p.param);
    }
    let mut delta = gap * rat(1, 4);
    for _ in 0..40 {
        if let Ok(parts) = splice_with(curve, &passes, &delta) {
            if splice_ok(curve, &parts, context) {
                return Ok(parts);
            }
        }
        delta *= rat(1, 2);
    }
    Err(Error::ConstructionDegenerate(
        "splice radius search exhausted".into(),
    ))
}

pub fn splice(curve: &PolyCurve) -> Result<Vec<PolyCurve>> {
    splice_in_context(curve, &[])
}

/// Splices both curves of a pair so that the mutual crossings stay fixed.
pub fn splice_pair(c0: &PolyCurve, c1: &PolyCurve) -> Result<(Vec<PolyCurve>, Vec<PolyCurve>)> {
    let s0 = splice_in_context(c0, std::slice::from_ref(c1))?;
    let s1 = splice_in_context(c1, &s0)?;
    Ok((s0, s1))
}

/// A face inside both disks bounded by two simple curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonComponent {
    pub id: usize,
    /// The component is a `2k`-gon; `k = 0` for a disk nested in the other.
    pub k: usize,
    pub boundary: Vec<Point>,
}

/// Faces of the arrangement of two simple curves lying inside both disks.
pub fn disk_intersection_components(
    c0: &PolyCurve,
    c1: &PolyCurve,
) -> Result<Vec<PolygonComponent>> {
    let arr = Arrangement::build(&[c0.clone(), c1.clone()])?;
    if arr.crossings.iter().any(|x| !x.mutual) {
        return Err(Error::NotSimple);
    }
    let mut out = Vec::new();
    for f in &arr.faces {
        if f.winding[0].abs() == 1 && f.winding[1].abs() == 1 {
            let xs = arr.face_crossings(f.id);
            out.push(PolygonComponent {
                id: f.id,
                k: xs.len() / 2,
                boundary: xs.iter().map(|&i| arr.crossings[i].point.clone()).collect(),
            });
        }
    }
    Ok(out)
}

/// True iff each curve lies in the unbounded complementary region of the other.
pub fn separated(c0: &PolyCurve, c1: &PolyCurve) -> Result<bool> {
    let report = curve::validate_general_position(c0, c1);
    if !report.ok {
        return Err(Error::Genericity(report));
    }
    if !curve::scan_mutual(c0, c1).0.is_empty() {
        return Ok(false);
    }
    let a1 = Arrangement::build(std::slice::from_ref(c1))?;
    let a0 = Arrangement::build(std::slice::from_ref(c0))?;
    Ok(a1.locate(c0.vertex(0))? == a1.unbounded && a0.locate(c1.vertex(0))? == a0.unbounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::rotation_number;
    use crate::curve::standard_curve;
    use proptest::prelude::*;

    fn square(k: i64) -> PolyCurve {
        PolyCurve::from_ints(&[(0, 0), (k, 0), (k, k), (0, k)]).unwrap()
    }

    #[test]
    fn bowtie_sign() {
        // base on edge 0 ((0,0)->(2,2)); first visit along (2,2), second along (-2,2)
        let c = standard_curve(0);
        let x = &curve::self_crossings(&c, 0).unwrap()[0];
        let base = CurveLocation::new(0, rat(1, 4));
        assert_eq!(e_sign(&c, &base, x).unwrap(), 1);
        let r = c.reverse();
        let xr = &curve::self_crossings(&r, 0).unwrap()[0];
        assert_eq!(e_sign(&r, &c.reverse_location(&base), xr).unwrap(), -1);
        assert!(matches!(
            e_sign(&c, &CurveLocation::new(0, rat(1, 2)), x),
            Err(Error::BaseOnDoublePoint)
        ));
    }

    #[test]
    fn splice_simple_is_identity() {
        let s = square(3);
        assert_eq!(splice(&s).unwrap(), vec![s]);
    }

    #[test]
    fn splice_bowtie() {
        let parts = splice(&standard_curve(0)).unwrap();
        assert_eq!(parts.len(), 2);
        let rs: Vec<i64> = parts.iter().map(rotation_number).collect();
        assert_eq!(rs.iter().sum::<i64>(), 0);
        for p in &parts {
            assert!(curve::self_crossings(p, 0).unwrap().is_empty());
            assert_eq!(splice(p).unwrap(), vec![p.clone()]);
        }
    }

    #[test]
    fn splice_kn() {
        for n in 1..=6 {
            let parts = splice(&standard_curve(n)).unwrap();
            assert_eq!(parts.len(), n);
            assert_eq!(parts.iter().map(rotation_number).sum::<i64>(), n as i64);
        }
    }

    #[test]
    fn splice_keeps_mutual_crossings() {
        let k3 = standard_curve(3);
        let line = PolyCurve::from_ints(&[(-3, 1), (30, 1), (30, -5), (-3, -5)]).unwrap();
        let (s0, s1) = splice_pair(&k3, &line).unwrap();
        assert_eq!(s1.len(), 1);
        let before = curve::mutual_crossings(&k3, &line).unwrap().len();
        let after: usize = s0
            .iter()
            .map(|p| curve::mutual_crossings(p, &line).unwrap().len())
            .sum();
        assert_eq!(before, after);
    }

    #[test]
    fn lens_and_nested_components() {
        let l0 = PolyCurve::from_ints(&[(0, 0), (4, -2), (8, 0), (4, 2)]).unwrap();
        let l1 = l0.translate(&Point::from_ints(5, 0));
        let comps = disk_intersection_components(&l0, &l1).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].k, 1);
        let far = l0.translate(&Point::from_ints(50, 0));
        assert!(disk_intersection_components(&l0, &far).unwrap().is_empty());
        let nested = disk_intersection_components(
            &square(10),
            &square(2).translate(&Point::from_ints(3, 3)),
        )
        .unwrap();
        assert_eq!(nested.len(), 1);
        assert_eq!(nested[0].k, 0);
    }

    #[test]
    fn flower_components() {
        // a triangle against its rotated copy: a six-pointed star, one hexagon
        let t0 = PolyCurve::from_ints(&[(0, 0), (12, 0), (6, 10)]).unwrap();
        let t1 = PolyCurve::from_ints(&[(0, 7), (6, -3), (12, 7)]).unwrap();
        let m = curve::mutual_crossings(&t0, &t1).unwrap().len();
        assert_eq!(m, 6);
        let comps = disk_intersection_components(&t0, &t1).unwrap();
        assert_eq!(comps.iter().map(|c| 2 * c.k).sum::<usize>(), m);
        assert_eq!(comps.len(), 1);
        // a plus-shaped overlap of two bars: four corners, one 4-gon... of two rectangles
        let bar0 = PolyCurve::from_ints(&[(0, 4), (20, 4), (20, 6), (0, 6)]).unwrap();
        let comb = PolyCurve::from_ints(&[
            (2, 0),
            (4, 0),
            (4, 8),
            (6, 8),
            (6, 0),
            (8, 0),
            (8, 10),
            (2, 10),
        ])
        .unwrap();
        let comps = disk_intersection_components(&bar0, &comb).unwrap();
        let m = curve::mutual_crossings(&bar0, &comb).unwrap().len();
        assert_eq!(comps.iter().map(|c| 2 * c.k).sum::<usize>(), m);
    }

    #[test]
    fn separation() {
        let a = square(2);
        assert!(separated(&a, &a.translate(&Point::from_ints(10, 0))).unwrap());
        assert!(!separated(&square(10), &a.translate(&Point::from_ints(3, 3))).unwrap());
        let l0 = PolyCurve::from_ints(&[(0, 0), (4, -2), (8, 0), (4, 2)]).unwrap();
        assert!(!separated(&l0, &l0.translate(&Point::from_ints(5, 0))).unwrap());
    }

    proptest! {
        #[test]
        fn e_sign_stable_along_edge(n in 2usize..6, num in 1i64..8) {
            let c = standard_curve(n);
            let xs = curve::self_crossings(&c, 0).unwrap();
            let last = c.len() - 1;
            let b1 = CurveLocation::new(last, rat(num, 9));
            let b2 = CurveLocation::new(last, rat(num + 1, 9));
            for x in &xs {
                prop_assert_eq!(e_sign(&c, &b1, x).unwrap(), e_sign(&c, &b2, x).unwrap());
            }
        }
    }
}
