//! The JSON instance format. Coordinates and parameters are "num/den"
//! strings so files round-trip exactly.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::curve::{Bridge, CurveLocation, PolyCurve};
use crate::error::{Error, Result};
use crate::geom::{format_rational, parse_rational, Point};
use crate::invariants::InvariantLedger;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub id: String,
    pub vertices: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger: Option<InvariantLedger>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Endpoint {
    pub curve: String,
    pub edge: usize,
    pub param: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeEntry {
    pub id: String,
    pub from: Endpoint,
    pub to: Endpoint,
    #[serde(default)]
    pub interior: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveFile {
    pub version: u32,
    pub curves: Vec<CurveEntry>,
    #[serde(default)]
    pub bridges: Vec<BridgeEntry>,
}

/// Two curves and a bridge from the first to the second, with whatever
/// ledgers the file carried.
#[derive(Clone, Debug)]
pub struct Instance {
    pub c0: PolyCurve,
    pub c1: PolyCurve,
    pub bridge: Bridge,
    pub ledger0: Option<InvariantLedger>,
    pub ledger1: Option<InvariantLedger>,
}

fn endpoint(curve: &str, loc: &CurveLocation) -> Endpoint {
    Endpoint {
        curve: curve.to_string(),
        edge: loc.edge,
        param: format_rational(&loc.param),
    }
}

impl CurveFile {
    pub fn new() -> Self {
        CurveFile {
            version: FORMAT_VERSION,
            curves: Vec::new(),
            bridges: Vec::new(),
        }
    }

    pub fn push_curve(&mut self, id: &str, c: &PolyCurve, ledger: Option<InvariantLedger>) {
        self.curves.push(CurveEntry {
            id: id.to_string(),
            vertices: c.vertices().to_vec(),
            ledger,
        });
    }

    pub fn push_bridge(&mut self, id: &str, from: &str, to: &str, b: &Bridge) {
        self.bridges.push(BridgeEntry {
            id: id.to_string(),
            from: endpoint(from, &b.start),
            to: endpoint(to, &b.end),
            interior: b.interior.clone(),
        });
    }

    pub fn single(c: &PolyCurve, ledger: Option<InvariantLedger>) -> Self {
        let mut f = CurveFile::new();
        f.push_curve("c0", c, ledger);
        f
    }

    pub fn instance(inst: &Instance) -> Self {
        let mut f = CurveFile::new();
        f.push_curve("c0", &inst.c0, inst.ledger0.clone());
        f.push_curve("c1", &inst.c1, inst.ledger1.clone());
        f.push_bridge("g0", "c0", "c1", &inst.bridge);
        f
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CurveFile = serde_json::from_str(text)?;
        f.check()?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve files always serialize");
        s.push('\n');
        s
    }

    fn check(&self) -> Result<()> {
        if self.version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format version {}",
                self.version
            )));
        }
        let mut ids = BTreeSet::new();
        for c in &self.curves {
            if !ids.insert(c.id.as_str()) {
                return Err(Error::Parse(format!("duplicate curve id {:?}", c.id)));
            }
        }
        let mut bids = BTreeSet::new();
        for b in &self.bridges {
            if !bids.insert(b.id.as_str()) {
                return Err(Error::Parse(format!("duplicate bridge id {:?}", b.id)));
            }
            for e in [&b.from, &b.to] {
                if !ids.contains(e.curve.as_str()) {
                    return Err(Error::Parse(format!(
                        "bridge {:?} names unknown curve {:?}",
                        b.id, e.curve
                    )));
                }
                parse_rational(&e.param)
                    .ok_or_else(|| Error::Parse(format!("bad parameter {:?}", e.param)))?;
            }
        }
        Ok(())
    }

    pub fn curve_index(&self, id: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::Parse(format!("no curve {id:?}")))
    }

    pub fn curve(&self, i: usize) -> Result<PolyCurve> {
        let e = self
            .curves
            .get(i)
            .ok_or_else(|| Error::Parse(format!("no curve at index {i}")))?;
        PolyCurve::new(e.vertices.clone())
    }

    pub fn curves(&self) -> Result<Vec<PolyCurve>> {
        (0..self.curves.len()).map(|i| self.curve(i)).collect()
    }

    fn location(&self, e: &Endpoint) -> Result<CurveLocation> {
        let param = parse_rational(&e.param)
            .ok_or_else(|| Error::Parse(format!("bad parameter {:?}", e.param)))?;
        Ok(CurveLocation::new(e.edge, param))
    }

    /// The instance given by a bridge (the first one when `id` is `None`).
    pub fn bridge_instance(&self, id: Option<&str>) -> Result<Instance> {
        let b = match id {
            Some(id) => self.bridges.iter().find(|b| b.id == id),
            None => self.bridges.first(),
        }
        .ok_or_else(|| Error::Parse("no such bridge in file".into()))?;
        let i0 = self.curve_index(&b.from.curve)?;
        let i1 = self.curve_index(&b.to.curve)?;
        Ok(Instance {
            c0: self.curve(i0)?,
            c1: self.curve(i1)?,
            bridge: Bridge::new(
                self.location(&b.from)?,
                self.location(&b.to)?,
                b.interior.clone(),
            ),
            ledger0: self.curves[i0].ledger.clone(),
            ledger1: self.curves[i1].ledger.clone(),
        })
    }

    /// The first two curves, ignoring bridges.
    pub fn pair(&self) -> Result<(PolyCurve, PolyCurve)> {
        if self.curves.len() < 2 {
            return Err(Error::Parse("need two curves".into()));
        }
        Ok((self.curve(0)?, self.curve(1)?))
    }
}

impl Default for CurveFile {
    fn default() -> Self {
        CurveFile::new()
    }
}
