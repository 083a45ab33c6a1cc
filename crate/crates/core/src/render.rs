//! Deterministic SVG output: curves, crossings, region windings, the bridge,
//! the constructed sum, and three-panel filmstrips around simulator events.

use std::fmt::Write as _;

use num_traits::Zero;

use crate::arrangement::Arrangement;
use crate::curve::{self, Bridge, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{int, rational_to_f64, Point, Rational};
use crate::homotopy::{simulated_pair, EventKind, Feature, SimulationResult};

const COLORS: [&str; 3] = ["#1f5fa8", "#b8321f", "#2e7d32"];
const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub curves: Vec<PolyCurve>,
    /// Drawn dashed; its ends lie on curves 0 and 1.
    pub bridge: Option<Bridge>,
    /// Typically the constructed sum, drawn thin over the inputs.
    pub overlay: Option<PolyCurve>,
    pub labels: bool,
    pub title: Option<String>,
}

/// Maps plane coordinates into a square panel, y up.
struct Frame {
    lo: (f64, f64),
    scale: f64,
    origin: (f64, f64),
    size: f64,
}

impl Frame {
    fn fit(lo: (f64, f64), hi: (f64, f64), origin: (f64, f64), size: f64) -> Frame {
        let w = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-12);
        Frame {
            lo,
            scale: (size - 2.0 * MARGIN) / w,
            origin,
            size,
        }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.to_f64();
        (
            self.origin.0 + MARGIN + (x - self.lo.0) * self.scale,
            self.origin.1 + self.size - MARGIN - (y - self.lo.1) * self.scale,
        )
    }

    fn path(&self, pts: &[Point]) -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{x:.3},{y:.3}");
        }
        s
    }
}

fn bounds(pts: impl IntoIterator<Item = Point>) -> ((f64, f64), (f64, f64)) {
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        let (x, y) = p.to_f64();
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    (lo, hi)
}

fn header(w: f64, h: f64) -> String {
    format!("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_svg(scene: &Scene) -> Result<String> {
    if scene.curves.is_empty() {
        return Err(Error::Malformed("nothing to render".into()));
    }
    let mut all: Vec<Point> = scene
        .curves
        .iter()
        .flat_map(|c| c.vertices().iter().cloned())
        .collect();
    if let (Some(b), true) = (&scene.bridge, scene.curves.len() >= 2) {
        all.extend(b.points(&scene.curves[0], &scene.curves[1]));
    }
    let (lo, hi) = bounds(all);
    let f = Frame::fit(lo, hi, (0.0, 0.0), SIZE);
    let mut out = header(SIZE, SIZE);
    out.push_str("<rect id=\"background\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if let Some(t) = &scene.title {
        let _ = writeln!(
            out,
            "<text id=\"title\" x=\"8\" y=\"16\" font-size=\"12\">{}</text>",
            escape(t)
        );
    }

    let arr = Arrangement::build(&scene.curves[..scene.curves.len().min(2)])?;
    if scene.labels {
        out.push_str("<g id=\"regions\" font-size=\"11\" text-anchor=\"middle\" fill=\"#555\">\n");
        for r in &arr.faces {
            let (x, y) = f.map(&r.witness);
            let label: Vec<String> = r.winding.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(
                out,
                "<text id=\"region-{}\" x=\"{x:.3}\" y=\"{y:.3}\">{}</text>",
                r.id,
                label.join(",")
            );
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g id=\"curves\" fill=\"none\" stroke-width=\"2\">\n");
    for (i, c) in scene.curves.iter().enumerate() {
        let _ = writeln!(
            out,
            "<polygon id=\"curve-{i}\" stroke=\"{}\" points=\"{}\"/>",
            COLORS[i % COLORS.len()],
            f.path(c.vertices())
        );
    }
    out.push_str("</g>\n");

    if let Some(o) = &scene.overlay {
        let _ = writeln!(out, "<polygon id=\"sum\" fill=\"none\" stroke=\"#222\" stroke-width=\"0.8\" points=\"{}\"/>", f.path(o.vertices()));
    }

    if let (Some(b), true) = (&scene.bridge, scene.curves.len() >= 2) {
        let pts = b.points(&scene.curves[0], &scene.curves[1]);
        let _ = writeln!(
            out,
            "<polyline id=\"bridge\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" points=\"{}\"/>",
            f.path(&pts)
        );
    }

    out.push_str("<g id=\"crossings\" fill=\"black\">\n");
    let mut xs: Vec<&crate::arrangement::Crossing> = arr.crossings.iter().collect();
    xs.sort_by(|a, b| (&a.point.x, &a.point.y).cmp(&(&b.point.x, &b.point.y)));
    for (i, x) in xs.iter().enumerate() {
        let (px, py) = f.map(&x.point);
        let kind = if x.mutual { "mutual" } else { "self" };
        let _ = writeln!(
            out,
            "<circle id=\"crossing-{i}\" class=\"{kind}\" cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"3\"/>"
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

fn line_meet(a: &Point, da: &Point, b: &Point, db: &Point) -> Option<Point> {
    let den = da.cross(db);
    if den.is_zero() {
        return None;
    }
    let t = b.sub(a).cross(db) / den;
    Some(a.add(&da.scale(&t)))
}

/// Three panels (before, at, after) around event `index` of a simulation
/// of `c0` against `c1`. The newborn triangle of a triple event is filled
/// in the last panel.
pub fn render_filmstrip(
    c0: &PolyCurve,
    c1: &PolyCurve,
    bridge: Option<&Bridge>,
    sim: &SimulationResult,
    index: usize,
) -> Result<String> {
    let ev = sim
        .events
        .get(index)
        .ok_or_else(|| Error::Malformed(format!("no event {index}")))?;
    let (m0, o1) = simulated_pair(c0, c1, bridge)?;
    let u = &sim.direction;
    let prev = if index == 0 {
        Rational::zero()
    } else {
        sim.events[index - 1].time.clone()
    };
    let next = sim
        .events
        .get(index + 1)
        .map_or_else(|| &ev.time + int(1), |e| e.time.clone());
    let h = std::cmp::min(&ev.time - &prev, &next - &ev.time) / int(2);
    let times = [&ev.time - &h, ev.time.clone(), &ev.time + &h];

    let reach = rational_to_f64(&h) * u.to_f64().0.hypot(u.to_f64().1);
    let (cx, cy) = ev.point.to_f64();
    let r = (3.0 * reach).max(1e-9);
    let lo = (cx - r, cy - r);
    let hi = (cx + r, cy + r);

    let w = 3.0 * SIZE;
    let mut out = header(w, SIZE);
    out.push_str("<rect id=\"background\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    let kind = match ev.kind {
        EventKind::Tangency { direct: true, sign } => format!("direct tangency, sign {sign:+}"),
        EventKind::Tangency {
            direct: false,
            sign,
        } => format!("inverse tangency, sign {sign:+}"),
        EventKind::Triple { sign, .. } => format!("triple point, sign {sign:+}"),
        EventKind::Transparent => "transparent".to_string(),
    };
    for (k, (t, name)) in times.iter().zip(["before", "at", "after"]).enumerate() {
        let f = Frame::fit(lo, hi, (k as f64 * SIZE, 0.0), SIZE);
        let moved = m0.translate(&u.scale(t));
        let _ = writeln!(out, "<g id=\"panel-{name}\">");
        let _ = writeln!(out, "<clipPath id=\"clip-{name}\"><rect x=\"{:.0}\" y=\"0\" width=\"{SIZE:.0}\" height=\"{SIZE:.0}\"/></clipPath>", k as f64 * SIZE);
        let _ = writeln!(
            out,
            "<g clip-path=\"url(#clip-{name})\" fill=\"none\" stroke-width=\"2\">"
        );
        if k == 2 {
            if let Some(tri) = newborn_triangle(&moved, &o1, ev.moving, ev.fixed)? {
                let _ = writeln!(
                    out,
                    "<polygon id=\"triangle\" fill=\"#f2c94c\" stroke=\"none\" points=\"{}\"/>",
                    f.path(&tri)
                );
            }
        }
        let _ = writeln!(
            out,
            "<polygon id=\"moving-{name}\" stroke=\"{}\" points=\"{}\"/>",
            COLORS[0],
            f.path(moved.vertices())
        );
        let _ = writeln!(
            out,
            "<polygon id=\"fixed-{name}\" stroke=\"{}\" points=\"{}\"/>",
            COLORS[1],
            f.path(o1.vertices())
        );
        out.push_str("</g>\n");
        if k == 1 {
            let (px, py) = f.map(&ev.point);
            let _ = writeln!(out, "<circle id=\"event-point\" cx=\"{px:.3}\" cy=\"{py:.3}\" r=\"4\" fill=\"none\" stroke=\"black\"/>");
        }
        let _ = writeln!(
            out,
            "<text x=\"{:.0}\" y=\"16\" font-size=\"12\">{name}: {}</text>",
            k as f64 * SIZE + 8.0,
            escape(&kind)
        );
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// The triangle cut out by the two branches through the double point and
/// the edge it crossed, at the given positions.
fn newborn_triangle(
    m0: &PolyCurve,
    c1: &PolyCurve,
    moving: Feature,
    fixed: Feature,
) -> Result<Option<Vec<Point>>> {
    let (x_curve, x_index, e_curve, e_index) = match (moving, fixed) {
        (Feature::Crossing { index, .. }, Feature::Edge { index: e, .. }) => (m0, index, c1, e),
        (Feature::Edge { index: e, .. }, Feature::Crossing { index, .. }) => (c1, index, m0, e),
        _ => return Ok(None),
    };
    let xs = curve::self_crossings(x_curve, 0)?;
    let Some(x) = xs.get(x_index) else {
        return Ok(None);
    };
    let (p, q) = e_curve.edge(e_index);
    let d = q.sub(p);
    let b0 = &x.branches[0];
    let b1 = &x.branches[1];
    let (a0, _) = x_curve.edge(b0.loc.edge);
    let (a1, _) = x_curve.edge(b1.loc.edge);
    let v0 = line_meet(a0, &b0.dir, a1, &b1.dir);
    let v1 = line_meet(a0, &b0.dir, p, &d);
    let v2 = line_meet(a1, &b1.dir, p, &d);
    Ok(match (v0, v1, v2) {
        (Some(a), Some(b), Some(c)) => Some(vec![a, b, c]),
        _ => None,
    })
}
