//! Ledgers of `J+`, `J-`, `St` and `|D|`, with the formulas that produce
//! them for standard curves and for generalized connected sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sums::BridgeStats;
use crate::t_invariants::TPair;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceStep {
    pub rule: String,
    pub inputs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantLedger {
    pub j_plus: i64,
    pub j_minus: i64,
    pub st: i64,
    pub d_count: usize,
    #[serde(default)]
    pub provenance: Vec<ProvenanceStep>,
}

impl InvariantLedger {
    pub fn new(j_plus: i64, j_minus: i64, st: i64, d_count: usize) -> Self {
        InvariantLedger {
            j_plus,
            j_minus,
            st,
            d_count,
            provenance: Vec::new(),
        }
    }

    /// A user-supplied ledger, checked only for internal consistency.
    pub fn asserted(j_plus: i64, j_minus: i64, st: i64, d_count: usize) -> Self {
        InvariantLedger::new(j_plus, j_minus, st, d_count).with_step("asserted", "")
    }

    pub fn with_step(mut self, rule: &str, inputs: impl Into<String>) -> Self {
        self.provenance.push(ProvenanceStep {
            rule: rule.to_string(),
            inputs: inputs.into(),
        });
        self
    }

    /// `(J+, J-, St)`.
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.j_plus, self.j_minus, self.st)
    }

    pub fn same_values(&self, o: &InvariantLedger) -> bool {
        self.triple() == o.triple() && self.d_count == o.d_count
    }

    fn inherit(&mut self, a: &InvariantLedger, b: &InvariantLedger) {
        let mut steps = a.provenance.clone();
        steps.extend(b.provenance.iter().cloned());
        steps.append(&mut self.provenance);
        self.provenance = steps;
    }
}

/// Values of the standard curve `K_n`.
pub fn base_invariants_kn(n: usize) -> InvariantLedger {
    let (jp, jm, st, d) = if n == 0 {
        (0, -1, 0, 1)
    } else {
        let k = n as i64 - 1;
        (-2 * k, -3 * k, k, n - 1)
    };
    InvariantLedger::new(jp, jm, st, d).with_step("standard-curve", format!("n={n}"))
}

fn check_order(stats: &BridgeStats) -> Result<()> {
    for w in stats.crossings.windows(2) {
        if w[0].gamma_loc >= w[1].gamma_loc {
            return Err(Error::InconsistentInputs(
                "bridge crossings out of order".into(),
            ));
        }
    }
    Ok(())
}

fn sum_d(l0: &InvariantLedger, l1: &InvariantLedger, stats: &BridgeStats) -> usize {
    l0.d_count + l1.d_count + stats.mutual + 2 * stats.interior_count() + 4 * stats.n_gamma
}

/// The general sum formulas for `J+-` and `St`.
pub fn sum_invariants(
    l0: &InvariantLedger,
    l1: &InvariantLedger,
    stats: &BridgeStats,
    t: &TPair,
    t_st: i64,
) -> Result<InvariantLedger> {
    check_order(stats)?;
    let n = stats.n_gamma as i64;
    let x = stats.interior_count() as i64;
    let ind = stats.ind_v0 + stats.ind_v1 + stats.ind_r0 + stats.ind_r1;
    let j_plus = l0.j_plus + l1.j_plus - 2 * t.t_plus + ind + 2 * n + x;
    let j_minus = l0.j_minus + l1.j_minus + 2 * t.t_minus + ind - 2 * n - x;
    let st = l0.st + l1.st - t_st + 2 * stats.ind_v0 * stats.ind_v1 - 2 * stats.ordered_s_product();
    let mut out = InvariantLedger::new(j_plus, j_minus, st, sum_d(l0, l1, stats));
    out.provenance.push(ProvenanceStep {
        rule: "sum-formula".into(),
        inputs: format!(
            "T={t} TSt={t_st} n={n} x={x} ind=({},{},{},{})",
            stats.ind_v0, stats.ind_v1, stats.ind_r0, stats.ind_r1
        ),
    });
    out.inherit(l0, l1);
    Ok(out)
}

/// The formulas for separated curves, where `St` is additive.
pub fn strange_sum_invariants(
    l0: &InvariantLedger,
    l1: &InvariantLedger,
    stats: &BridgeStats,
) -> Result<InvariantLedger> {
    if !stats.separated {
        return Err(Error::NotSeparated);
    }
    check_order(stats)?;
    let n = stats.n_gamma as i64;
    let x = stats.interior_count() as i64;
    let ind = stats.ind_v0 + stats.ind_v1;
    let mut out = InvariantLedger::new(
        l0.j_plus + l1.j_plus + ind + 2 * n + x,
        l0.j_minus + l1.j_minus + ind - 2 * n - x,
        l0.st + l1.st,
        sum_d(l0, l1, stats),
    );
    out.provenance.push(ProvenanceStep {
        rule: "strange-sum-formula".into(),
        inputs: format!("n={n} x={x}"),
    });
    out.inherit(l0, l1);
    Ok(out)
}

/// The formulas for an embedded bridge meeting the curves only at its ends.
pub fn mendes_romero_invariants(
    l0: &InvariantLedger,
    l1: &InvariantLedger,
    stats: &BridgeStats,
    t: &TPair,
    t_st: i64,
) -> Result<InvariantLedger> {
    if stats.n_gamma != 0 || !stats.crossings.is_empty() {
        return Err(Error::HypothesisViolated(
            "bridge must be embedded and meet the curves only at its ends".into(),
        ));
    }
    let (a, b) = (stats.ind_v0, stats.ind_v1);
    let mut out = InvariantLedger::new(
        l0.j_plus + l1.j_plus - 2 * t.t_plus + 2 * a + 2 * b,
        l0.j_minus + l1.j_minus + 2 * t.t_minus + 2 * a + 2 * b,
        l0.st + l1.st - t_st + 2 * a * b,
        sum_d(l0, l1, stats),
    );
    out.provenance.push(ProvenanceStep {
        rule: "embedded-bridge-formula".into(),
        inputs: format!("T={t} TSt={t_st}"),
    });
    out.inherit(l0, l1);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub ok: bool,
    /// `(J+ - J-) - |D|`.
    pub delta: i64,
    /// Difference between the ledger's `|D|` and an independently counted one.
    pub count_delta: Option<i64>,
}

/// Checks `J+ - J- = |D|`, and `|D|` against a count when one is given.
pub fn consistency_check(ledger: &InvariantLedger, counted: Option<usize>) -> ConsistencyReport {
    let delta = ledger.j_plus - ledger.j_minus - ledger.d_count as i64;
    let count_delta = counted.map(|c| ledger.d_count as i64 - c as i64);
    ConsistencyReport {
        ok: delta == 0 && count_delta.unwrap_or(0) == 0,
        delta,
        count_delta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{standard_curve, Bridge, CurveLocation, PolyCurve};
    use crate::geom::{rat, Point};
    use crate::sums::{bridge_stats, construct_sum};
    use crate::t_invariants::{t_pm, t_st};

    #[test]
    fn standard_values() {
        let want = [
            (0, -1, 0),
            (0, 0, 0),
            (-2, -3, 1),
            (-4, -6, 2),
            (-6, -9, 3),
            (-8, -12, 4),
            (-10, -15, 5),
        ];
        for (n, w) in want.iter().enumerate() {
            let l = base_invariants_kn(n);
            assert_eq!(l.triple(), *w);
            assert!(consistency_check(&l, None).ok);
        }
        assert_eq!(base_invariants_kn(0).d_count, 1);
        assert_eq!(base_invariants_kn(5).d_count, 4);
    }

    #[test]
    fn corrupted_ledger_fails() {
        let mut l = base_invariants_kn(4);
        l.j_plus += 1;
        let r = consistency_check(&l, None);
        assert!(!r.ok);
        assert_eq!(r.delta, 1);
        assert!(!consistency_check(&base_invariants_kn(4), Some(2)).ok);
    }

    fn kn_pair(a: usize, b: usize) -> (PolyCurve, PolyCurve, Bridge) {
        let ka = standard_curve(a);
        let kb = standard_curve(b).translate(&Point::from_ints(6 * a as i64 + 20, 0));
        // from the right edge of ka to the left edge of kb ((-2,8)->(0,0) closes kb)
        let g = Bridge::straight(
            CurveLocation::new(ka.len() - 3, rat(1, 2)),
            CurveLocation::new(kb.len() - 1, rat(1, 2)),
        );
        (ka, kb, g)
    }

    #[test]
    fn connected_sum_of_k2_and_k3() {
        let (a, b, g) = kn_pair(2, 3);
        let stats = bridge_stats(&g, &a, &b).unwrap();
        let t = t_pm(&a, &b, &g).unwrap();
        let ts = t_st(&a, &b, &g).unwrap();
        let l = sum_invariants(
            &base_invariants_kn(2),
            &base_invariants_kn(3),
            &stats,
            &t,
            ts,
        )
        .unwrap();
        assert_eq!(l.triple(), (-6, -9, 3));
        let s = construct_sum(&a, &b, &g).unwrap();
        let d = crate::curve::self_crossings(&s, 0).unwrap().len();
        assert!(consistency_check(&l, Some(d)).ok);
        let ls =
            strange_sum_invariants(&base_invariants_kn(2), &base_invariants_kn(3), &stats).unwrap();
        assert!(ls.same_values(&l));
        let lm = mendes_romero_invariants(
            &base_invariants_kn(2),
            &base_invariants_kn(3),
            &stats,
            &t,
            ts,
        )
        .unwrap();
        assert!(lm.same_values(&l));
    }

    #[test]
    fn strange_sum_of_circles_with_one_crossing() {
        // the bridge leaves the top of C0, re-enters C0 through its right edge
        // and leaves again through its bottom before reaching C1
        let a = PolyCurve::from_ints(&[(0, 0), (4, 0), (4, 4), (0, 4)]).unwrap();
        let b = a.translate(&Point::from_ints(10, 0));
        let g = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            vec![
                Point::from_ints(2, 6),
                Point::from_ints(6, 6),
                Point::from_ints(6, 3),
                Point::from_ints(3, 3),
                Point::from_ints(3, -1),
                Point::from_ints(9, -1),
            ],
        );
        let stats = bridge_stats(&g, &a, &b).unwrap();
        assert_eq!(stats.interior_count(), 2);
        let g1 = Bridge::new(
            CurveLocation::new(2, rat(1, 2)),
            CurveLocation::new(3, rat(1, 2)),
            vec![Point::from_ints(2, 2), Point::from_ints(6, 2)],
        );
        let st1 = bridge_stats(&g1, &a, &b).unwrap();
        assert_eq!(st1.interior_count(), 1);
        assert_eq!(st1.ind_v0, -1);
        assert_eq!(st1.ind_v1, 0);
        let l0 = base_invariants_kn(1);
        let t = t_pm(&a, &b, &g1).unwrap();
        let ts = t_st(&a, &b, &g1).unwrap();
        let l = sum_invariants(&l0, &l0, &st1, &t, ts).unwrap();
        assert_eq!(l.triple(), (0, -2, 0));
        assert_eq!(l.d_count, 2);
        assert!(strange_sum_invariants(&l0, &l0, &st1)
            .unwrap()
            .same_values(&l));
        assert!(matches!(
            mendes_romero_invariants(&l0, &l0, &st1, &t, ts),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
