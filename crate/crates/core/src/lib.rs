//! Exact plane-curve arrangements, generalized connected sums of generic
//! plane curves, and bookkeeping for Arnold's invariants `J+`, `J-` and `St`.

pub mod arrangement;
pub mod combinatorics;
pub mod curve;
pub mod error;
pub mod geom;
pub mod homotopy;
pub mod invariants;
pub mod io;
pub mod random;
pub mod render;
pub mod sums;
pub mod t_invariants;
pub mod verify;

pub use arrangement::{Arrangement, Crossing, CrossingTally, Pass, RegionInfo};
pub use curve::{Bridge, CurveLocation, PolyCurve, ValidationReport, Violation};
pub use error::{Error, Result};
pub use geom::{Point, Rational, Vector};
pub use invariants::InvariantLedger;
pub use io::{CurveFile, Instance};
pub use sums::SumClass;
pub use t_invariants::TPair;
