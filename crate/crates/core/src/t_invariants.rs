//! Closed forms for the tangency counts `T+`, `T-` and the triple-point
//! count `T^St` of a separating homotopy.

use serde::Serialize;

use crate::arrangement::{rotation_number, winding};
use crate::combinatorics::{disk_intersection_components, e_sign, separated, splice_pair};
use crate::curve::{self, Bridge, PolyCurve};
use crate::error::{Error, Result};
use crate::sums::{self, orient_compatibly, push_appendix};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct TPair {
    pub t_plus: i64,
    pub t_minus: i64,
}

impl TPair {
    pub fn new(t_plus: i64, t_minus: i64) -> Self {
        TPair { t_plus, t_minus }
    }

    pub fn sum(&self) -> i64 {
        self.t_plus + self.t_minus
    }
}

impl std::ops::Add for TPair {
    type Output = TPair;
    fn add(self, o: TPair) -> TPair {
        TPair::new(self.t_plus + o.t_plus, self.t_minus + o.t_minus)
    }
}

impl std::fmt::Display for TPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.t_plus, self.t_minus)
    }
}

fn require_simple(c: &PolyCurve) -> Result<()> {
    if !curve::self_crossings(c, 0)?.is_empty() {
        return Err(Error::NotSimple);
    }
    Ok(())
}

fn same_rotation(c0: &PolyCurve, c1: &PolyCurve) -> bool {
    rotation_number(c0) == rotation_number(c1)
}

/// `T+-` of two oriented simple curves from the number of crossings and the
/// number of components of the intersection of their disks.
pub fn t_pm_simple(c0: &PolyCurve, c1: &PolyCurve) -> Result<TPair> {
    require_simple(c0)?;
    require_simple(c1)?;
    if separated(c0, c1)? {
        return Ok(TPair::default());
    }
    let m = curve::mutual_crossings(c0, c1)?.len() as i64;
    let s = disk_intersection_components(c0, c1)?.len() as i64;
    Ok(if same_rotation(c0, c1) {
        TPair::new(-m / 2 + s, -s)
    } else {
        TPair::new(-s, -m / 2 + s)
    })
}

/// `T+-` of two oriented simple curves from the `2k`-gon decomposition.
pub fn t_pm_polygon(c0: &PolyCurve, c1: &PolyCurve) -> Result<TPair> {
    require_simple(c0)?;
    require_simple(c1)?;
    if separated(c0, c1)? {
        return Ok(TPair::default());
    }
    let comps = disk_intersection_components(c0, c1)?;
    let s = comps.len() as i64;
    // a disk nested inside the other is a component without corners
    let excess: i64 = comps.iter().map(|c| c.k as i64 - 1).sum();
    Ok(if same_rotation(c0, c1) {
        TPair::new(-excess, -s)
    } else {
        TPair::new(-s, -excess)
    })
}

/// `T+-` of two oriented generic curves, by splicing both and summing over
/// component pairs.
pub fn t_pm_oriented(c0: &PolyCurve, c1: &PolyCurve) -> Result<TPair> {
    let (s0, s1) = splice_pair(c0, c1)?;
    let mut t = TPair::default();
    for a in &s0 {
        for b in &s1 {
            t = t + t_pm_simple(a, b)?;
        }
    }
    Ok(t)
}

/// `T+-_Gamma(C_0, C_1)` with the orientations made compatible by the bridge.
pub fn t_pm(c0: &PolyCurve, c1: &PolyCurve, bridge: &Bridge) -> Result<TPair> {
    let (o0, o1, _) = orient_compatibly(c0, c1, bridge)?;
    t_pm_oriented(&o0, &o1)
}

/// `sum_p e^{c_0}_{b_0}(p) ind(c_1, p) + sum_q e^{c_1}_{b_1}(q) ind(c_0, q)`
/// for already oriented curves.
pub fn t_st_oriented(c0: &PolyCurve, c1: &PolyCurve, bridge: &Bridge) -> Result<i64> {
    let mut t = 0;
    for p in curve::self_crossings(c0, 0)? {
        t += e_sign(c0, &bridge.start, &p)? as i64 * winding(c1, &p.point)?;
    }
    for q in curve::self_crossings(c1, 1)? {
        t += e_sign(c1, &bridge.end, &q)? as i64 * winding(c0, &q.point)?;
    }
    Ok(t)
}

/// `T^St_Gamma(C_0, C_1)` with compatible orientations and base points at
/// the bridge ends.
pub fn t_st(c0: &PolyCurve, c1: &PolyCurve, bridge: &Bridge) -> Result<i64> {
    let (o0, o1, g) = orient_compatibly(c0, c1, bridge)?;
    t_st_oriented(&o0, &o1, &g)
}

/// Both sides of the change of `T^St` under pushing an appendix of `C_0`
/// along the bridge: `T^St` after the push, and `T^St` before it minus
/// `2 sum_j s(x_j) ind(C_1, x_j)` over the crossings of the bridge with `C_0`.
pub fn t_st_appendix_identity(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
) -> Result<(i64, i64)> {
    let (bar, gamma) = push_appendix(c0, c1, bridge)?;
    let lhs = t_st(&bar, c1, &gamma)?;
    let stats = sums::bridge_stats(bridge, c0, c1)?;
    let (_, r1) = sums::compatible_orientations(c0, c1, bridge)?;
    let o1 = if r1 { c1.reverse() } else { c1.clone() };
    let mut corr = 0;
    for x in stats.crossings.iter().filter(|x| x.host == 0) {
        corr += x.s as i64 * winding(&o1, &x.point)?;
    }
    Ok((lhs, t_st(c0, c1, bridge)? - 2 * corr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{standard_curve, CurveLocation};
    use crate::geom::{rat, Point};

    fn square(k: i64) -> PolyCurve {
        PolyCurve::from_ints(&[(0, 0), (k, 0), (k, k), (0, k)]).unwrap()
    }

    fn lens() -> (PolyCurve, PolyCurve) {
        let l0 = PolyCurve::from_ints(&[(0, 0), (4, -2), (8, 0), (4, 2)]).unwrap();
        (l0.clone(), l0.translate(&Point::from_ints(5, 0)))
    }

    #[test]
    fn simple_examples() {
        let a = square(2);
        assert_eq!(
            t_pm_simple(&a, &a.translate(&Point::from_ints(9, 0))).unwrap(),
            TPair::new(0, 0)
        );
        let nested = square(2).translate(&Point::from_ints(3, 3));
        assert_eq!(
            t_pm_simple(&nested, &square(10)).unwrap(),
            TPair::new(1, -1)
        );
        assert_eq!(
            t_pm_simple(&nested.reverse(), &square(10)).unwrap(),
            TPair::new(-1, 1)
        );
        let (l0, l1) = lens();
        assert_eq!(t_pm_simple(&l0, &l1).unwrap(), TPair::new(0, -1));
        assert_eq!(t_pm_polygon(&l0, &l1).unwrap(), TPair::new(0, -1));
        assert!(matches!(
            t_pm_simple(&standard_curve(0), &l1),
            Err(Error::NotSimple)
        ));
    }

    #[test]
    fn flower_agrees() {
        let t0 = PolyCurve::from_ints(&[(0, 0), (12, 0), (6, 10)]).unwrap();
        let t1 = PolyCurve::from_ints(&[(0, 7), (6, -3), (12, 7)]).unwrap();
        for (a, b) in [(t0.clone(), t1.clone()), (t0.clone(), t1.reverse())] {
            let x = t_pm_simple(&a, &b).unwrap();
            assert_eq!(x, t_pm_polygon(&a, &b).unwrap());
            assert_eq!(x.sum(), -3);
        }
    }

    #[test]
    fn figure_eight_in_circle() {
        // both lobes of the figure eight inside a big square
        let f8 = PolyCurve::from_ints(&[(0, 0), (2, 2), (2, 0), (0, 2)])
            .unwrap()
            .translate(&Point::from_ints(4, 4));
        let big = square(10);
        // the lobes carry opposite rotation, so exactly one of them matches the square
        let t = t_pm_oriented(&f8, &big).unwrap();
        assert_eq!(t, TPair::new(0, 0));
        // with a curve whose two lobes turn the same way
        let k2 = standard_curve(2).translate(&Point::from_ints(3, 1));
        let bigger = square(20);
        assert_eq!(t_pm_oriented(&k2, &bigger).unwrap(), TPair::new(2, -2));
    }

    #[test]
    fn t_st_examples() {
        let a = square(2);
        let b = square(2).translate(&Point::from_ints(5, 0));
        let g = Bridge::straight(
            CurveLocation::new(1, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
        );
        assert_eq!(t_st(&a, &b, &g).unwrap(), 0);
        let f8 = standard_curve(0).translate(&Point::from_ints(2, 2));
        let big = square(8).translate(&Point::from_ints(-1, -1));
        // bridge from the figure eight's edge 1 ((4,4)->(4,2)) out to the big square's right edge
        let g = Bridge::straight(
            CurveLocation::new(1, rat(1, 4)),
            CurveLocation::new(1, rat(5, 16)),
        );
        let r = curve::validate_bridge(&g, &f8, &big);
        assert!(r.ok, "{r}");
        let t = t_st(&f8, &big, &g).unwrap();
        assert_eq!(t.abs(), 1);
    }

    #[test]
    fn appendix_identity_examples() {
        let a = square(4);
        let b = square(4).translate(&Point::from_ints(10, 0));
        let g = Bridge::straight(
            CurveLocation::new(1, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
        );
        let (l, r) = t_st_appendix_identity(&a, &b, &g).unwrap();
        assert_eq!((l, r), (0, 0));
        // C1 big, C0 inside it; bridge crosses C0 once before leaving to C1
        let small = square(4).translate(&Point::from_ints(4, 4));
        let big = square(20).translate(&Point::from_ints(-2, -2));
        let g = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(1, rat(1, 2)),
            vec![
                Point::from_ints(6, 10),
                Point::from_ints(10, 10),
                Point::from_ints(10, 6),
                Point::from_ints(7, 6),
                Point::from_ints(7, 5),
                Point::from_ints(16, 5),
            ],
        );
        let r = curve::validate_bridge(&g, &small, &big);
        assert!(r.ok, "{r}");
        let (l, r) = t_st_appendix_identity(&small, &big, &g).unwrap();
        assert_eq!(l, r);
    }
}
