//! Exact event-driven simulation of a separating homotopy: `C_0` is
//! translated rigidly along a direction `u` until it is separated from `C_1`,
//! and every crossing of the discriminant is classified and signed.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::Crossing;
use crate::combinatorics::cyclic_offset;
use crate::curve::{self, Bridge, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{cross_sign, dist2_point_segment, int, rat, sign, Point, Rational, Vector};
use crate::sums::orient_compatibly;
use crate::t_invariants::TPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "feature", rename_all = "kebab-case")]
pub enum Feature {
    Vertex { curve: usize, index: usize },
    Edge { curve: usize, index: usize },
    Crossing { curve: usize, index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EventKind {
    /// Two branches become tangent. `sign` is `+1` when two crossings are born.
    Tangency { direct: bool, sign: i32 },
    /// A double point of one curve passes through a branch of the other.
    /// `sign` follows the side the double point comes from; `triangle_sign`
    /// is read off the newborn triangle directly.
    Triple { sign: i32, triangle_sign: i32 },
    /// A corner slides across an edge without a tangency.
    Transparent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Event {
    #[serde(serialize_with = "ser_rational")]
    pub time: Rational,
    pub kind: EventKind,
    /// Feature of the moving curve `C_0`.
    pub moving: Feature,
    /// Feature of the static curve `C_1`.
    pub fixed: Feature,
    pub point: Point,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::geom::format_rational(r))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimulationResult {
    pub t_pair: TPair,
    /// Signed triple-point count; present when base points are known.
    pub t_st: Option<i64>,
    /// The same count using newborn-triangle signs.
    pub t_st_triangle: Option<i64>,
    pub events: Vec<Event>,
    pub direction: Vector,
    #[serde(serialize_with = "ser_rational")]
    pub travel: Rational,
    /// Parameter `e` of the similarity `[[1, -e], [e, 1]]` applied to `C_0`
    /// before translating, when edges of the two curves were parallel.
    pub pre_rotation: Option<String>,
    /// Result of the crossing-count ledger check, when requested.
    pub ledger_ok: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct SimOptions {
    pub direction: Option<Vector>,
    pub seed: u64,
    pub check_ledger: bool,
    /// Skip this many accepted directions (for independence tests).
    pub skip: usize,
}

const SAMPLE_BUDGET: usize = 64;

fn any_parallel_edges(c0: &PolyCurve, c1: &PolyCurve) -> bool {
    (0..c0.len()).any(|i| {
        let d = c0.edge_dir(i);
        (0..c1.len()).any(|j| d.cross(&c1.edge_dir(j)).is_zero())
    })
}

fn similarity(c: &PolyCurve, e: &Rational, center: &Point) -> PolyCurve {
    let one = Rational::one();
    let ne = -e.clone();
    let t = center.sub(&Point::new(
        center.x.clone() - e * &center.y,
        e * &center.x + &center.y,
    ));
    c.affine([&one, &ne, e, &one], &t)
}

/// Squared clearance between features of one curve and the other curve.
fn cross_clearance2(c0: &PolyCurve, c1: &PolyCurve, x0: &[Crossing], x1: &[Crossing]) -> Rational {
    let mut best: Option<Rational> = None;
    let mut upd = |d: Rational| {
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
    };
    let p0: Vec<&Point> = c0
        .vertices()
        .iter()
        .chain(x0.iter().map(|x| &x.point))
        .collect();
    let p1: Vec<&Point> = c1
        .vertices()
        .iter()
        .chain(x1.iter().map(|x| &x.point))
        .collect();
    for p in &p0 {
        for e in 0..c1.len() {
            let (a, b) = c1.edge(e);
            upd(dist2_point_segment(p, a, b));
        }
    }
    for p in &p1 {
        for e in 0..c0.len() {
            let (a, b) = c0.edge(e);
            upd(dist2_point_segment(p, a, b));
        }
    }
    best.unwrap_or_else(Rational::one)
}

/// A small similarity of `C_0` that removes parallelism with `C_1` without
/// letting any feature of one curve reach the other.
fn unparallel(c0: &PolyCurve, c1: &PolyCurve) -> Result<(PolyCurve, Option<Rational>)> {
    if !any_parallel_edges(c0, c1) {
        return Ok((c0.clone(), None));
    }
    let x0 = curve::self_crossings(c0, 0)?;
    let x1 = curve::self_crossings(c1, 1)?;
    let clr = cross_clearance2(c0, c1, &x0, &x1);
    let center = c0.vertex(0).clone();
    let r2 = c0
        .vertices()
        .iter()
        .map(|p| p.sub(&center).norm2())
        .max()
        .expect("vertices");
    let mut e = Rational::one();
    // displacement of every point is at most e * R; keep it below half the clearance
    while &e * &e * &r2 * int(4) >= clr {
        e *= rat(1, 2);
    }
    for _ in 0..64 {
        let moved = similarity(c0, &e, &center);
        if !any_parallel_edges(&moved, c1) && curve::validate_general_position(&moved, c1).ok {
            return Ok((moved, Some(e)));
        }
        e *= rat(1, 2);
    }
    Err(Error::NoGenericDirection(0))
}

/// Time at which point `a`, moving with velocity `w`, meets segment `[p, q]`,
/// with the contact parameter on the segment.
fn hit_time(a: &Point, w: &Vector, p: &Point, q: &Point) -> Option<(Rational, Rational)> {
    let e = q.sub(p);
    let den = e.cross(w);
    if den.is_zero() {
        return None;
    }
    let t = e.cross(&p.sub(a)) / den;
    if !t.is_positive() {
        return None;
    }
    let x = a.add(&w.scale(&t));
    let s = x.sub(p).dot(&e) / e.norm2();
    if s.is_negative() || s > Rational::one() {
        return None;
    }
    Some((t, s))
}

struct Raw {
    time: Rational,
    kind: EventKind,
    moving: Feature,
    fixed: Feature,
    point: Point,
}

/// Whether `+e` (rather than `-e`) lies in the short turn from `p` to `q`.
fn corner_tangent_is_forward(p: &Vector, q: &Vector, e: &Vector) -> bool {
    let turn = sign(&p.cross(q));
    let within = |v: &Vector| {
        if turn >= 0 {
            sign(&p.cross(v)) >= 0 && sign(&v.cross(q)) >= 0
        } else {
            sign(&p.cross(v)) <= 0 && sign(&v.cross(q)) <= 0
        }
    };
    within(e)
}

fn line_meet(a: &Point, da: &Vector, b: &Point, db: &Vector) -> Point {
    let lam = b.sub(a).cross(db) / da.cross(db);
    a.add(&da.scale(&lam))
}

/// `(-1)^q` for the triangle cut out by three oriented lines listed in the
/// cyclic order of their branches.
fn triangle_sign(lines: [(&Point, &Vector); 3]) -> i32 {
    let v12 = line_meet(lines[0].0, lines[0].1, lines[1].0, lines[1].1);
    let v23 = line_meet(lines[1].0, lines[1].1, lines[2].0, lines[2].1);
    let v31 = line_meet(lines[2].0, lines[2].1, lines[0].0, lines[0].1);
    let mut q = 0;
    if v12.sub(&v31).dot(lines[0].1).is_positive() {
        q += 1;
    }
    if v23.sub(&v12).dot(lines[1].1).is_positive() {
        q += 1;
    }
    if v31.sub(&v23).dot(lines[2].1).is_positive() {
        q += 1;
    }
    if q % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Branch directions of a crossing in visiting order from `base`.
fn ordered(n: usize, base: &Rational, x: &Crossing) -> (Vector, Vector) {
    let [a, b] = &x.branches;
    if cyclic_offset(n, base, &a.loc) < cyclic_offset(n, base, &b.loc) {
        (a.dir.clone(), b.dir.clone())
    } else {
        (b.dir.clone(), a.dir.clone())
    }
}

struct Setup<'a> {
    c0: &'a PolyCurve,
    c1: &'a PolyCurve,
    x0: Vec<Crossing>,
    x1: Vec<Crossing>,
    bases: Option<(Rational, Rational)>,
}

/// All events for direction `u`, or `None` if `u` is not generic.
fn events_for(s: &Setup, u: &Vector) -> Option<Vec<Raw>> {
    let (c0, c1) = (s.c0, s.c1);
    for c in [c0, c1] {
        for i in 0..c.len() {
            if u.cross(&c.edge_dir(i)).is_zero() {
                return None;
            }
        }
    }
    let sp0: Vec<&Point> = c0
        .vertices()
        .iter()
        .chain(s.x0.iter().map(|x| &x.point))
        .collect();
    let sp1: Vec<&Point> = c1
        .vertices()
        .iter()
        .chain(s.x1.iter().map(|x| &x.point))
        .collect();
    for a in &sp0 {
        for b in &sp1 {
            if u.cross(&b.sub(a)).is_zero() {
                return None;
            }
        }
    }
    let neg = u.neg();
    let mut out = Vec::new();
    // corners against edges, in both directions
    for (mc, sc, w, mover) in [(c0, c1, u, 0usize), (c1, c0, &neg, 1usize)] {
        for vi in 0..mc.len() {
            let v = mc.vertex(vi);
            let prev = mc.vertex(vi + mc.len() - 1);
            let next = mc.vertex(vi + 1);
            for ei in 0..sc.len() {
                let (p, q) = sc.edge(ei);
                let Some((t, _)) = hit_time(v, w, p, q) else {
                    continue;
                };
                let e = sc.edge_dir(ei);
                let sa = sign(&e.cross(&prev.sub(v)));
                let sb = sign(&e.cross(&next.sub(v)));
                if sa == 0 || sb == 0 {
                    return None;
                }
                let kind = if sa == sb {
                    let born = sign(&e.cross(w)) == -sa;
                    let direct = corner_tangent_is_forward(&v.sub(prev), &next.sub(v), &e);
                    EventKind::Tangency {
                        direct,
                        sign: if born { 1 } else { -1 },
                    }
                } else {
                    EventKind::Transparent
                };
                let vf = Feature::Vertex {
                    curve: mover,
                    index: vi,
                };
                let ef = Feature::Edge {
                    curve: 1 - mover,
                    index: ei,
                };
                let point = if mover == 0 {
                    v.add(&u.scale(&t))
                } else {
                    v.clone()
                };
                let (moving, fixed) = if mover == 0 { (vf, ef) } else { (ef, vf) };
                out.push(Raw {
                    time: t,
                    kind,
                    moving,
                    fixed,
                    point,
                });
            }
        }
    }
    // double points against edges of the other curve
    for (xs, sc, w, mover) in [(&s.x0, c1, u, 0usize), (&s.x1, c0, &neg, 1usize)] {
        for (xi, x) in xs.iter().enumerate() {
            for ei in 0..sc.len() {
                let (p, q) = sc.edge(ei);
                let Some((t, _)) = hit_time(&x.point, w, p, q) else {
                    continue;
                };
                let e = sc.edge_dir(ei);
                if x.branches.iter().any(|b| b.dir.cross(&e).is_zero()) {
                    return None;
                }
                let from_left = e.cross(w).is_negative();
                let (mut lemma, mut tri) = (0, 0);
                if let Some((b0, b1)) = &s.bases {
                    let (n, base) = if mover == 0 {
                        (c0.len(), b0)
                    } else {
                        (c1.len(), b1)
                    };
                    let (d1, d2) = ordered(n, base, x);
                    let ex = cross_sign(&d1, &d2);
                    lemma = if from_left { ex } else { -ex };
                    // positions one time unit after the event
                    let later = &t + int(1);
                    tri = if mover == 0 {
                        let xp = x.point.add(&u.scale(&later));
                        triangle_sign([(&xp, &d1), (&xp, &d2), (p, &e)])
                    } else {
                        let pp = p.add(&u.scale(&later));
                        triangle_sign([(&pp, &e), (&x.point, &d1), (&x.point, &d2)])
                    };
                }
                let xf = Feature::Crossing {
                    curve: mover,
                    index: xi,
                };
                let ef = Feature::Edge {
                    curve: 1 - mover,
                    index: ei,
                };
                let point = if mover == 0 {
                    x.point.add(&u.scale(&t))
                } else {
                    x.point.clone()
                };
                let (moving, fixed) = if mover == 0 { (xf, ef) } else { (ef, xf) };
                out.push(Raw {
                    time: t,
                    kind: EventKind::Triple {
                        sign: lemma,
                        triangle_sign: tri,
                    },
                    moving,
                    fixed,
                    point,
                });
            }
        }
    }
    out.sort_by(|a, b| a.time.cmp(&b.time));
    // simultaneous events are fine as long as they happen at different places
    let mut i = 0;
    while i < out.len() {
        let j = out[i..]
            .iter()
            .position(|e| e.time != out[i].time)
            .map_or(out.len(), |k| i + k);
        for a in i..j {
            if out[a + 1..j].iter().any(|b| b.point == out[a].point) {
                return None;
            }
        }
        i = j;
    }
    Some(out)
}

fn candidates(seed: u64) -> impl Iterator<Item = Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = std::iter::once(Point::from_ints(1, 0));
    first.chain(std::iter::repeat_with(move || loop {
        let a: i64 = rng.random_range(-97..=97);
        let b: i64 = rng.random_range(-97..=97);
        if a != 0 || b != 0 {
            return Point::from_ints(a, b);
        }
    }))
}

/// The first `k` pairwise non-parallel generic directions for the pair.
pub fn choose_directions(
    c0: &PolyCurve,
    c1: &PolyCurve,
    k: usize,
    seed: u64,
) -> Result<Vec<Vector>> {
    let (m0, _) = unparallel(c0, c1)?;
    let setup = Setup {
        c0: &m0,
        c1,
        x0: curve::self_crossings(&m0, 0)?,
        x1: curve::self_crossings(c1, 1)?,
        bases: None,
    };
    let mut found: Vec<Vector> = Vec::new();
    for (tries, u) in candidates(seed).enumerate() {
        if tries >= SAMPLE_BUDGET * k.max(1) {
            return Err(Error::NoGenericDirection(tries));
        }
        if found.iter().any(|f| f.cross(&u).is_zero()) {
            continue;
        }
        if events_for(&setup, &u).is_some() {
            found.push(u);
            if found.len() == k {
                return Ok(found);
            }
        }
    }
    unreachable!("candidate stream is infinite")
}

/// A generic translation direction for the pair.
pub fn choose_direction(c0: &PolyCurve, c1: &PolyCurve) -> Result<Vector> {
    Ok(choose_directions(c0, c1, 1, 0)?.remove(0))
}

fn mutual_count_at(c0: &PolyCurve, c1: &PolyCurve, u: &Vector, t: &Rational) -> usize {
    curve::scan_mutual(&c0.translate(&u.scale(t)), c1).0.len()
}

fn simulate_inner(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bases: Option<(Rational, Rational)>,
    opts: &SimOptions,
) -> Result<SimulationResult> {
    let r = curve::validate_general_position(c0, c1);
    if !r.ok {
        return Err(Error::Genericity(r));
    }
    let (m0, pre) = unparallel(c0, c1)?;
    let setup = Setup {
        c0: &m0,
        c1,
        x0: curve::self_crossings(&m0, 0)?,
        x1: curve::self_crossings(c1, 1)?,
        bases,
    };
    let (u, raw) = match &opts.direction {
        Some(u) => match events_for(&setup, u) {
            Some(ev) => (u.clone(), ev),
            None => return Err(Error::NoGenericDirection(1)),
        },
        None => {
            let mut pick = None;
            let mut accepted = 0;
            let mut seen: Vec<Vector> = Vec::new();
            for (tries, u) in candidates(opts.seed).enumerate() {
                if tries >= SAMPLE_BUDGET * (opts.skip + 1) {
                    return Err(Error::NoGenericDirection(tries));
                }
                if seen.iter().any(|f| f.cross(&u).is_zero()) {
                    continue;
                }
                if let Some(ev) = events_for(&setup, &u) {
                    seen.push(u.clone());
                    if accepted == opts.skip {
                        pick = Some((u, ev));
                        break;
                    }
                    accepted += 1;
                }
            }
            pick.expect("loop exits with a pick or an error")
        }
    };

    let mut tp = TPair::default();
    let mut st = 0;
    let mut st_tri = 0;
    for e in &raw {
        match e.kind {
            EventKind::Tangency { direct: true, sign } => tp.t_plus += sign as i64,
            EventKind::Tangency {
                direct: false,
                sign,
            } => tp.t_minus += sign as i64,
            EventKind::Triple {
                sign,
                triangle_sign,
            } => {
                st += sign as i64;
                st_tri += triangle_sign as i64;
            }
            EventKind::Transparent => {}
        }
    }
    let travel = raw.last().map_or_else(Rational::zero, |e| &e.time + int(1));

    let ledger_ok = if opts.check_ledger {
        let mut times: Vec<&Rational> = raw.iter().map(|e| &e.time).collect();
        times.dedup();
        let mut ok = true;
        let mut count = mutual_count_at(&m0, c1, &u, &Rational::zero()) as i64;
        for (k, t) in times.iter().enumerate() {
            let next_t = match times.get(k + 1) {
                Some(n) => (*t + *n) / int(2),
                None => *t + int(1),
            };
            let born: i64 = raw
                .iter()
                .filter(|e| &e.time == *t)
                .map(|e| match e.kind {
                    EventKind::Tangency { sign, .. } => 2 * sign as i64,
                    _ => 0,
                })
                .sum();
            let c = mutual_count_at(&m0, c1, &u, &next_t) as i64;
            ok &= c == count + born;
            count = c;
        }
        Some(ok && count == 0)
    } else {
        None
    };

    let has_bases = setup.bases.is_some();
    Ok(SimulationResult {
        t_pair: tp,
        t_st: has_bases.then_some(st),
        t_st_triangle: has_bases.then_some(st_tri),
        events: raw
            .into_iter()
            .map(|r| Event {
                time: r.time,
                kind: r.kind,
                moving: r.moving,
                fixed: r.fixed,
                point: r.point,
            })
            .collect(),
        direction: u,
        travel,
        pre_rotation: pre.map(|e| crate::geom::format_rational(&e)),
        ledger_ok,
    })
}

/// Simulates a separating translation of the oriented curve `c0` away from
/// `c1`. Without a bridge only the tangency counts are meaningful.
pub fn simulate_oriented(
    c0: &PolyCurve,
    c1: &PolyCurve,
    opts: &SimOptions,
) -> Result<SimulationResult> {
    simulate_inner(c0, c1, None, opts)
}

/// Simulates the separating homotopy for the pair with the orientations and
/// base points supplied by the bridge.
pub fn simulate_separation(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: &Bridge,
    opts: &SimOptions,
) -> Result<SimulationResult> {
    let (o0, o1, g) = orient_compatibly(c0, c1, bridge)?;
    simulate_inner(&o0, &o1, Some((g.start.global(), g.end.global())), opts)
}

/// The pair actually moved by the simulator: compatibly oriented when a
/// bridge is given, with the small similarity applied to `c0` if needed.
pub fn simulated_pair(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: Option<&Bridge>,
) -> Result<(PolyCurve, PolyCurve)> {
    let (o0, o1) = match bridge {
        Some(b) => {
            let (o0, o1, _) = orient_compatibly(c0, c1, b)?;
            (o0, o1)
        }
        None => (c0.clone(), c1.clone()),
    };
    let (m0, _) = unparallel(&o0, &o1)?;
    Ok((m0, o1))
}
