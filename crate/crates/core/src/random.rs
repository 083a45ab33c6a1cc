//! Seeded instance generation. Pieces are built so that their ledgers are
//! known: affine images of standard curves, star polygons on lattice circle
//! points, and connected sums of those. Placement and bridges are found by
//! rejection sampling against the validators.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{self, on_curve};
use crate::combinatorics;
use crate::curve::{self, standard_curve, Bridge, CurveLocation, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{angle_cmp, int, intersect, rat, Point, Rational, Vector};
use crate::invariants::{base_invariants_kn, strange_sum_invariants, InvariantLedger};
use crate::io::Instance;
use crate::sums::{self, SumClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RandomSpec {
    pub seed: u64,
    /// Double points per piece.
    pub d_max: usize,
    /// Self-crossings of the bridge.
    pub g_max: usize,
    /// Crossings of the bridge interior with the curves.
    pub x_max: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            seed: 7,
            d_max: 6,
            g_max: 3,
            x_max: 6,
        }
    }
}

impl RandomSpec {
    pub fn with_seed(seed: u64) -> Self {
        RandomSpec {
            seed,
            ..RandomSpec::default()
        }
    }
}

/// Independent stream for item `index` of family `tag`.
pub fn stream_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((tag << 40) ^ index);
    r
}

const ATTEMPTS: usize = 400;

fn exhausted(what: &str) -> Error {
    Error::ConstructionDegenerate(format!("no {what} found after {ATTEMPTS} attempts"))
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub curve: PolyCurve,
    pub ledger: InvariantLedger,
}

impl Piece {
    pub fn double_points(&self) -> usize {
        self.ledger.d_count
    }
}

const CIRCLE_R: i64 = 325;

/// Lattice points on the circle of radius 325, by angle.
fn circle_points() -> Vec<Point> {
    let mut pts = Vec::new();
    for x in -CIRCLE_R..=CIRCLE_R {
        let y2 = CIRCLE_R * CIRCLE_R - x * x;
        let y = (y2 as f64).sqrt().round() as i64;
        if y * y == y2 {
            pts.push(Point::from_ints(x, y));
            if y != 0 {
                pts.push(Point::from_ints(x, -y));
            }
        }
    }
    pts.sort_by(angle_cmp);
    pts
}

/// A random orientation-preserving linear map: a Pythagorean rotation,
/// sometimes followed by a shear.
fn random_linear(rng: &mut ChaCha8Rng, shear: bool) -> [Rational; 4] {
    let p = rng.random_range(1i64..5);
    let q = rng.random_range(0..p);
    let (mut a, mut b) = (p * p - q * q, 2 * p * q);
    for _ in 0..rng.random_range(0..4) {
        (a, b) = (-b, a);
    }
    let c = p * p + q * q;
    let r = [rat(a, c), rat(-b, c), rat(b, c), rat(a, c)];
    if !shear || rng.random_bool(0.5) {
        return r;
    }
    let s = rat(rng.random_range(-3i64..=3), rng.random_range(2i64..6));
    // r * [[1, s], [0, 1]]
    [
        r[0].clone(),
        &r[0] * &s + &r[1],
        r[2].clone(),
        &r[2] * &s + &r[3],
    ]
}

fn apply(c: &PolyCurve, m: &[Rational; 4]) -> PolyCurve {
    c.affine([&m[0], &m[1], &m[2], &m[3]], &Point::zero())
}

fn shuffle_start(rng: &mut ChaCha8Rng, c: &PolyCurve) -> PolyCurve {
    let c = c.rotate(rng.random_range(0..c.len()));
    if rng.random_bool(0.5) {
        c.reverse()
    } else {
        c
    }
}

/// An affine image of `K_n`.
pub fn standard_piece(rng: &mut ChaCha8Rng, n: usize) -> Piece {
    let m = random_linear(rng, true);
    let c = shuffle_start(rng, &apply(&standard_curve(n), &m));
    Piece {
        curve: c,
        ledger: base_invariants_kn(n).with_step("affine-image", ""),
    }
}

/// A simple polygon, star-shaped about the origin, on lattice circle
/// points (convex unless `jagged`).
pub fn star_piece(rng: &mut ChaCha8Rng, jagged: bool) -> Piece {
    let circle = circle_points();
    let scale = rat(1, 25);
    loop {
        let k = if jagged {
            rng.random_range(5usize..=12)
        } else {
            rng.random_range(3usize..=8)
        };
        let mut idx: Vec<usize> = (0..k).map(|_| rng.random_range(0..circle.len())).collect();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() < 3 {
            continue;
        }
        let pts: Vec<Point> = idx
            .iter()
            .map(|&i| {
                let f = if jagged {
                    rat(rng.random_range(1i64..=6), 6)
                } else {
                    Rational::one()
                };
                circle[i].scale(&(&f * &scale))
            })
            .collect();
        let n = pts.len();
        let fan = (0..n).all(|i| pts[i].cross(&pts[(i + 1) % n]) > Rational::zero());
        let bent = (0..n).all(|i| {
            let (a, b, c) = (&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]);
            !b.sub(a).cross(&c.sub(b)).is_zero()
        });
        if !fan || !bent {
            continue;
        }
        let Ok(c) = PolyCurve::new(pts) else { continue };
        if !curve::validate_generic(&c).ok {
            continue;
        }
        let c = shuffle_start(rng, &c);
        return Piece {
            curve: c,
            ledger: base_invariants_kn(1).with_step("simple-polygon", ""),
        };
    }
}

fn bbox(c: &PolyCurve) -> (Point, Point) {
    c.bbox()
}

fn center(c: &PolyCurve) -> Point {
    let (lo, hi) = bbox(c);
    Point::midpoint(&lo, &hi)
}

fn random_location(rng: &mut ChaCha8Rng, c: &PolyCurve) -> CurveLocation {
    CurveLocation::new(
        rng.random_range(0..c.len()),
        rat(rng.random_range(1i64..19), 19),
    )
}

/// A straight crossing-free bridge between two separated curves.
fn connecting_bridge(rng: &mut ChaCha8Rng, a: &PolyCurve, b: &PolyCurve) -> Result<Bridge> {
    let ca = center(a);
    let cb = center(b);
    let d = cb.sub(&ca);
    // edges facing each other first
    let facing = |c: &PolyCurve, dir: &Vector| {
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.sort_by(|&i, &j| {
            let mi = Point::midpoint(c.edge(i).0, c.edge(i).1);
            let mj = Point::midpoint(c.edge(j).0, c.edge(j).1);
            mj.dot(dir).cmp(&mi.dot(dir))
        });
        order
    };
    let fa = facing(a, &d);
    let fb = facing(b, &d.neg());
    for attempt in 0..ATTEMPTS {
        let (ea, eb) = if attempt < 9 {
            (fa[attempt / 3 % fa.len()], fb[attempt % 3 % fb.len()])
        } else {
            (rng.random_range(0..a.len()), rng.random_range(0..b.len()))
        };
        let g = Bridge::straight(
            CurveLocation::new(ea, rat(rng.random_range(3i64..16), 19)),
            CurveLocation::new(eb, rat(rng.random_range(3i64..16), 19)),
        );
        if !curve::validate_bridge(&g, a, b).ok {
            continue;
        }
        if sums::classify(a, b, &g)? == SumClass::ConnectedSum {
            return Ok(g);
        }
    }
    Err(exhausted("connecting bridge"))
}

/// Translates `b` so its bounding box sits right of `a`'s.
fn place_right(a: &PolyCurve, b: &PolyCurve, gap: i64) -> PolyCurve {
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    let dx = &ahi.x - &blo.x + int(gap);
    let dy = (&alo.y + &ahi.y - &blo.y - &bhi.y) / int(2);
    b.translate(&Point::new(dx, dy))
}

/// A connected sum of two smaller pieces.
pub fn composite_piece(rng: &mut ChaCha8Rng, d_budget: usize) -> Result<Piece> {
    let small = |rng: &mut ChaCha8Rng, budget: usize| -> Piece {
        if budget == 0 || rng.random_bool(0.4) {
            let jagged = rng.random_bool(0.5);
            star_piece(rng, jagged)
        } else {
            let top = budget.min(4);
            let n = rng.random_range(0..=top + 1);
            let n = if n == 0 && budget < 1 { 1 } else { n };
            standard_piece(rng, n)
        }
    };
    let a = small(rng, d_budget);
    let b = small(rng, d_budget - a.double_points().min(d_budget));
    if a.double_points() + b.double_points() > d_budget {
        return composite_piece(rng, d_budget);
    }
    let bc = place_right(&a.curve, &b.curve, 6);
    let g = connecting_bridge(rng, &a.curve, &bc)?;
    let stats = sums::bridge_stats(&g, &a.curve, &bc)?;
    let ledger =
        strange_sum_invariants(&a.ledger, &b.ledger, &stats)?.with_step("connected-sum", "");
    let c = sums::construct_sum(&a.curve, &bc, &g)?;
    let c = c.translate(&center(&c).neg());
    Ok(Piece { curve: c, ledger })
}

/// Any piece with at most `d_max` double points.
pub fn random_piece(rng: &mut ChaCha8Rng, d_max: usize) -> Result<Piece> {
    match rng.random_range(0..10) {
        0..=3 => {
            let n = rng.random_range(0..=(d_max + 1).min(7));
            let n = if n == 0 && d_max == 0 { 1 } else { n };
            let p = standard_piece(rng, n);
            Ok(Piece {
                curve: p.curve.translate(&center(&p.curve).neg()),
                ledger: p.ledger,
            })
        }
        4..=6 => {
            let jagged = rng.random_bool(0.6);
            Ok(star_piece(rng, jagged))
        }
        _ => composite_piece(rng, d_max),
    }
}

fn random_offset(rng: &mut ChaCha8Rng, a: &PolyCurve, b: &PolyCurve) -> Vector {
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    let w = (&ahi.x - &alo.x + &bhi.x - &blo.x) / int(2);
    let h = (&ahi.y - &alo.y + &bhi.y - &blo.y) / int(2);
    let fx = rat(rng.random_range(-60i64..=60), 97);
    let fy = rat(rng.random_range(-60i64..=60), 97);
    Point::new(w * fx, h * fy)
}

/// Moves `b` so that it overlaps `a` (centers close together).
fn place_overlapping(rng: &mut ChaCha8Rng, a: &PolyCurve, b: &PolyCurve) -> PolyCurve {
    let t = center(a).sub(&center(b)).add(&random_offset(rng, a, b));
    b.translate(&t)
}

/// Moves `b` clear of `a`'s bounding box in a random direction.
fn place_apart(rng: &mut ChaCha8Rng, a: &PolyCurve, b: &PolyCurve) -> PolyCurve {
    let (alo, ahi) = bbox(a);
    let (blo, bhi) = bbox(b);
    let gap = int(rng.random_range(2i64..30));
    let jitter = random_offset(rng, a, b);
    let t = match rng.random_range(0..4) {
        0 => Point::new(
            &ahi.x - &blo.x + gap,
            &center(a).y - &center(b).y + jitter.y,
        ),
        1 => Point::new(
            &alo.x - &bhi.x - gap,
            &center(a).y - &center(b).y + jitter.y,
        ),
        2 => Point::new(
            &center(a).x - &center(b).x + jitter.x,
            &ahi.y - &blo.y + gap,
        ),
        _ => Point::new(
            &center(a).x - &center(b).x + jitter.x,
            &alo.y - &bhi.y - gap,
        ),
    };
    b.translate(&t)
}

fn in_general_position(c0: &PolyCurve, c1: &PolyCurve) -> bool {
    curve::validate_generic(c0).ok
        && curve::validate_generic(c1).ok
        && curve::validate_general_position(c0, c1).ok
}

fn random_point_in(rng: &mut ChaCha8Rng, lo: &Point, hi: &Point) -> Point {
    let pad = int(4);
    let lx = &lo.x - &pad;
    let ly = &lo.y - &pad;
    let w = &hi.x - &lo.x + int(8);
    let h = &hi.y - &lo.y + int(8);
    let fx = rat(rng.random_range(0i64..=193), 193);
    let fy = rat(rng.random_range(0i64..=191), 191);
    Point::new(lx + w * fx, ly + h * fy)
}

fn joint_bbox(c0: &PolyCurve, c1: &PolyCurve) -> (Point, Point) {
    let (a, b) = bbox(c0);
    let (c, d) = bbox(c1);
    let m =
        |p: &Rational, q: &Rational, lo: bool| if (p < q) == lo { p.clone() } else { q.clone() };
    (
        Point::new(m(&a.x, &c.x, true), m(&a.y, &c.y, true)),
        Point::new(m(&b.x, &d.x, false), m(&b.y, &d.y, false)),
    )
}

/// A small loop at `m`, aligned with the direction `d` of the host segment,
/// that crosses itself once and not the host segment.
fn curl(m: &Point, d: &Vector, eps: &Rational) -> Vec<Point> {
    let u = d.scale(eps);
    let w = u.perp();
    [(0, 0), (2, 1), (1, 2), (1, -1)]
        .iter()
        .map(|&(a, b)| m.add(&u.scale(&int(a))).add(&w.scale(&int(b))))
        .collect()
}

/// A random polyline bridge within the limits of `spec`: a few random
/// corners plus small curls for the self-crossings.
pub fn random_bridge(
    rng: &mut ChaCha8Rng,
    c0: &PolyCurve,
    c1: &PolyCurve,
    spec: &RandomSpec,
) -> Result<Bridge> {
    let (lo, hi) = joint_bbox(c0, c1);
    let target = rng.random_range(0..=spec.g_max);
    for attempt in 0..ATTEMPTS {
        let want = if attempt < ATTEMPTS / 2 { target } else { 0 };
        let start = random_location(rng, c0);
        let end = random_location(rng, c1);
        let k = rng.random_range(0usize..=2);
        let mut path = vec![c0.point_at(&start)];
        path.extend((0..k).map(|_| random_point_in(rng, &lo, &hi)));
        path.push(c1.point_at(&end));
        for _ in 0..want {
            let s = rng.random_range(0..path.len() - 1);
            let t = rat(rng.random_range(2i64..=8), 10);
            let d = path[s + 1].sub(&path[s]);
            let m = Point::lerp(&path[s], &path[s + 1], &t);
            let eps = rat(1, rng.random_range(60i64..=140));
            let loop_pts = curl(&m, &d, &eps);
            path.splice(s + 1..s + 1, loop_pts);
        }
        let interior = path[1..path.len() - 1].to_vec();
        let g = Bridge::new(start, end, interior);
        let scan = curve::scan_bridge(&g, c0, c1);
        if scan.violations.is_empty()
            && scan.self_crossings.len() <= spec.g_max
            && scan.crossings.len() <= spec.x_max
        {
            return Ok(g);
        }
    }
    Err(exhausted("bridge"))
}

fn clean_bridge(g: &Bridge, c0: &PolyCurve, c1: &PolyCurve) -> bool {
    let scan = curve::scan_bridge(g, c0, c1);
    scan.violations.is_empty() && scan.self_crossings.is_empty() && scan.crossings.is_empty()
}

/// A bridge with no self-crossings meeting the curves only at its ends.
pub fn embedded_bridge(rng: &mut ChaCha8Rng, c0: &PolyCurve, c1: &PolyCurve) -> Result<Bridge> {
    let mutual = curve::mutual_crossings(c0, c1)?;
    if !mutual.is_empty() {
        // short chords next to a crossing of the two curves
        for _ in 0..ATTEMPTS / 4 {
            let x = &mutual[rng.random_range(0..mutual.len())];
            let p0 = x
                .branches
                .iter()
                .find(|p| p.curve == 0)
                .expect("branch on c0");
            let p1 = x
                .branches
                .iter()
                .find(|p| p.curve == 1)
                .expect("branch on c1");
            let side0 = if rng.random_bool(0.5) { 1 } else { -1 };
            let side1 = if rng.random_bool(0.5) { 1 } else { -1 };
            let mut eps = rat(1, 4);
            for _ in 0..24 {
                let t0 = &p0.loc.param + &eps * int(side0);
                let t1 = &p1.loc.param + &eps * int(side1);
                eps /= int(2);
                if t0 <= Rational::zero()
                    || t0 >= Rational::one()
                    || t1 <= Rational::zero()
                    || t1 >= Rational::one()
                {
                    continue;
                }
                let mut g = Bridge::straight(
                    CurveLocation::new(p0.loc.edge, t0),
                    CurveLocation::new(p1.loc.edge, t1),
                );
                if rng.random_bool(0.3) {
                    // bend it through a point just off the chord
                    let a = c0.point_at(&g.start);
                    let b = c1.point_at(&g.end);
                    let m = Point::midpoint(&a, &b);
                    g.interior.push(m.add(&b.sub(&a).perp().scale(&rat(1, 5))));
                }
                if clean_bridge(&g, c0, c1) {
                    return Ok(g);
                }
            }
        }
    }
    let mut cands: Vec<(Rational, Bridge)> = (0..60)
        .map(|_| {
            let g = Bridge::straight(random_location(rng, c0), random_location(rng, c1));
            let d = c0.point_at(&g.start).sub(&c1.point_at(&g.end)).norm2();
            (d, g)
        })
        .collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, g) in cands {
        if clean_bridge(&g, c0, c1) {
            return Ok(g);
        }
    }
    Err(exhausted("embedded bridge"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKind {
    /// Overlapping curves, any admissible bridge.
    General,
    /// Separated curves (strange sums).
    Separated,
    /// A bridge meeting the curves only at its ends, without self-crossings.
    MendesRomero,
    /// A mix of the above.
    Mixed,
}

impl InstanceKind {
    fn tag(self) -> u64 {
        match self {
            InstanceKind::General => 1,
            InstanceKind::Separated => 2,
            InstanceKind::MendesRomero => 3,
            InstanceKind::Mixed => 4,
        }
    }
}

/// A generalized-sum instance with ledgers for both pieces.
pub fn random_instance(spec: &RandomSpec, kind: InstanceKind, index: u64) -> Result<Instance> {
    let mut rng = stream_rng(spec.seed, kind.tag(), index);
    let kind = match kind {
        InstanceKind::Mixed => match rng.random_range(0..4) {
            0 | 1 => InstanceKind::General,
            2 => InstanceKind::Separated,
            _ => InstanceKind::MendesRomero,
        },
        k => k,
    };
    for _ in 0..ATTEMPTS {
        let p0 = random_piece(&mut rng, spec.d_max)?;
        let p1 = random_piece(&mut rng, spec.d_max)?;
        let c1 = match kind {
            InstanceKind::Separated => place_apart(&mut rng, &p0.curve, &p1.curve),
            InstanceKind::MendesRomero if rng.random_bool(0.2) => {
                place_apart(&mut rng, &p0.curve, &p1.curve)
            }
            _ => place_overlapping(&mut rng, &p0.curve, &p1.curve),
        };
        let c0 = p0.curve;
        if !in_general_position(&c0, &c1) {
            continue;
        }
        if kind == InstanceKind::Separated && !combinatorics::separated(&c0, &c1)? {
            continue;
        }
        let bridge = match kind {
            InstanceKind::MendesRomero => embedded_bridge(&mut rng, &c0, &c1),
            _ => random_bridge(&mut rng, &c0, &c1, spec),
        };
        let Ok(bridge) = bridge else { continue };
        return Ok(Instance {
            c0,
            c1,
            bridge,
            ledger0: Some(p0.ledger),
            ledger1: Some(p1.ledger),
        });
    }
    Err(exhausted("instance"))
}

/// Two oriented curves in general position, overlapping; both simple when
/// `simple` is set, and then never separated.
pub fn random_pair(
    seed: u64,
    index: u64,
    d_max: usize,
    simple: bool,
) -> Result<(PolyCurve, PolyCurve)> {
    let mut rng = stream_rng(seed, if simple { 6 } else { 5 }, index);
    for _ in 0..ATTEMPTS {
        let (a, b) = if simple {
            let (j0, j1) = (rng.random_bool(0.7), rng.random_bool(0.7));
            (star_piece(&mut rng, j0), star_piece(&mut rng, j1))
        } else {
            (
                random_piece(&mut rng, d_max)?,
                random_piece(&mut rng, d_max)?,
            )
        };
        let c1 = place_overlapping(&mut rng, &a.curve, &b.curve);
        let c0 = a.curve;
        if !in_general_position(&c0, &c1) {
            continue;
        }
        if simple && combinatorics::separated(&c0, &c1)? {
            continue;
        }
        return Ok((c0, c1));
    }
    Err(exhausted("pair"))
}

/// A curve with an arc leaving it at `start` and ending off the curve.
#[derive(Clone, Debug)]
pub struct ArcInstance {
    pub curve: PolyCurve,
    pub start: CurveLocation,
    pub arc: Vec<Point>,
}

fn arc_admissible(c: &PolyCurve, arc: &[Point]) -> bool {
    if arrangement::arc_crossing_tally(arc, c).is_err() {
        return false;
    }
    // self-crossings of the arc must stay off the curve
    for i in 0..arc.len() - 1 {
        for j in i + 2..arc.len() - 1 {
            if let Some(x) = intersect(&arc[i], &arc[i + 1], &arc[j], &arc[j + 1]) {
                if on_curve(c, x.point()) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn random_arc_instance(seed: u64, index: u64, d_max: usize) -> Result<ArcInstance> {
    let mut rng = stream_rng(seed, 7, index);
    let piece = random_piece(&mut rng, d_max)?;
    let c = piece.curve;
    let (lo, hi) = bbox(&c);
    for _ in 0..ATTEMPTS {
        let start = random_location(&mut rng, &c);
        let mut arc = vec![c.point_at(&start)];
        for _ in 0..rng.random_range(1usize..=4) {
            arc.push(random_point_in(&mut rng, &lo, &hi));
        }
        if arc_admissible(&c, &arc) {
            return Ok(ArcInstance {
                curve: c,
                start,
                arc,
            });
        }
    }
    Err(exhausted("arc"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_circle_is_rich() {
        let pts = circle_points();
        assert!(pts.len() >= 40);
        assert!(pts.iter().all(|p| p.norm2() == int(CIRCLE_R * CIRCLE_R)));
    }

    #[test]
    fn pieces_match_their_ledgers() {
        for i in 0..12 {
            let mut rng = stream_rng(3, 9, i);
            let p = random_piece(&mut rng, 4).unwrap();
            let d = curve::self_crossings(&p.curve, 0).unwrap().len();
            assert_eq!(d, p.ledger.d_count, "piece {i}");
            assert!(curve::validate_generic(&p.curve).ok);
            assert!(d <= 4);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = RandomSpec::with_seed(11);
        for i in 0..3 {
            let a = random_instance(&spec, InstanceKind::Mixed, i).unwrap();
            let b = random_instance(&spec, InstanceKind::Mixed, i).unwrap();
            assert_eq!(a.c0, b.c0);
            assert_eq!(a.c1, b.c1);
            assert_eq!(a.bridge, b.bridge);
        }
    }

    #[test]
    fn instance_kinds_hold() {
        let spec = RandomSpec::with_seed(5);
        for i in 0..3 {
            let s = random_instance(&spec, InstanceKind::Separated, i).unwrap();
            assert!(sums::is_strange(
                sums::classify(&s.c0, &s.c1, &s.bridge).unwrap()
            ));
            let m = random_instance(&spec, InstanceKind::MendesRomero, i).unwrap();
            assert!(sums::is_mendes_romero(
                sums::classify(&m.c0, &m.c1, &m.bridge).unwrap()
            ));
        }
    }
}
