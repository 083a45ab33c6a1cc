//! The per-instance identity suite and seeded batches of it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{self, PolyCurve};
use crate::error::Result;
use crate::homotopy::{choose_directions, simulate_separation, SimOptions};
use crate::invariants::{
    consistency_check, mendes_romero_invariants, strange_sum_invariants, sum_invariants,
    InvariantLedger,
};
use crate::io::Instance;
use crate::random::{random_instance, InstanceKind, RandomSpec};
use crate::sums::{self, SumClass};
use crate::t_invariants::{t_pm, t_st, t_st_appendix_identity, TPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub identity: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub index: u64,
    pub class: Option<SumClass>,
    pub checks: Vec<Check>,
    /// Set when the instance could not be generated or evaluated at all.
    pub error: Option<String>,
}

impl InstanceReport {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Number of separating directions compared for independence (1 = off).
    pub directions: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            directions: 1,
            seed: 0,
        }
    }
}

fn check(identity: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        identity,
        ok,
        detail: detail.into(),
    }
}

fn ledgers(inst: &Instance) -> Option<(&InvariantLedger, &InvariantLedger)> {
    Some((inst.ledger0.as_ref()?, inst.ledger1.as_ref()?))
}

fn count(c: &PolyCurve) -> Result<usize> {
    Ok(curve::self_crossings(c, 0)?.len())
}

fn run_checks(inst: &Instance, opts: &VerifyOptions, out: &mut Vec<Check>) -> Result<SumClass> {
    let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
    let class = sums::classify(c0, c1, g)?;
    let stats = sums::bridge_stats(g, c0, c1)?;
    let (d0, d1) = (count(c0)?, count(c1)?);

    let sum = sums::construct_sum(c0, c1, g)?;
    let d_sum = count(&sum)?;
    let want = sums::expected_double_points(d0, d1, &stats);
    out.push(check(
        "count-identity",
        d_sum == want,
        format!("|D(sum)|={d_sum} formula={want}"),
    ));
    out.push(check("sum-generic", curve::validate_generic(&sum).ok, ""));

    let t = t_pm(c0, c1, g)?;
    let ts = t_st(c0, c1, g)?;
    let m = stats.mutual as i64;
    out.push(check(
        "t-sum",
        2 * t.sum() == -m,
        format!("T={t} |C0^C1|={m}"),
    ));

    let sim = simulate_separation(
        c0,
        c1,
        g,
        &SimOptions {
            seed: opts.seed,
            ..SimOptions::default()
        },
    )?;
    out.push(check(
        "t-pm-oracle",
        sim.t_pair == t,
        format!("closed={t} simulated={}", sim.t_pair),
    ));
    let sim_st = sim.t_st.unwrap_or(i64::MIN);
    out.push(check(
        "t-st-oracle",
        sim_st == ts,
        format!("closed={ts} simulated={sim_st}"),
    ));
    if opts.directions > 1 {
        let dirs = choose_directions(c0, c1, opts.directions, opts.seed)?;
        let mut seen: Vec<(TPair, Option<i64>)> = Vec::new();
        for u in dirs {
            let r = simulate_separation(
                c0,
                c1,
                g,
                &SimOptions {
                    direction: Some(u),
                    seed: opts.seed,
                    ..SimOptions::default()
                },
            )?;
            seen.push((r.t_pair, r.t_st));
        }
        let same = seen.windows(2).all(|w| w[0] == w[1]);
        out.push(check("direction-independence", same, format!("{seen:?}")));
    }

    let (lhs, rhs) = t_st_appendix_identity(c0, c1, g)?;
    out.push(check(
        "appendix-identity",
        lhs == rhs,
        format!("{lhs} vs {rhs}"),
    ));

    if let Some((l0, l1)) = ledgers(inst) {
        for (name, l, d) in [("ledger0", l0, d0), ("ledger1", l1, d1)] {
            let r = consistency_check(l, Some(d));
            out.push(check(
                if name == "ledger0" {
                    "piece0-ledger"
                } else {
                    "piece1-ledger"
                },
                r.ok,
                format!("{r:?}"),
            ));
        }
        let ls = sum_invariants(l0, l1, &stats, &t, ts)?;
        let r = consistency_check(&ls, Some(d_sum));
        out.push(check(
            "ledger-difference",
            r.ok,
            format!("J+-J-={} |D(sum)|={d_sum}", ls.j_plus - ls.j_minus),
        ));

        // the same unoriented sum seen from the other side
        let gs = g.swapped();
        let stats_s = sums::bridge_stats(&gs, c1, c0)?;
        let lsw = sum_invariants(l1, l0, &stats_s, &t_pm(c1, c0, &gs)?, t_st(c1, c0, &gs)?)?;
        out.push(check(
            "swap-symmetry",
            lsw.same_values(&ls),
            format!("{:?} vs {:?}", ls.triple(), lsw.triple()),
        ));

        if sums::is_strange(class) {
            let lst = strange_sum_invariants(l0, l1, &stats)?;
            let additive = ls.st == l0.st + l1.st;
            out.push(check(
                "strange-reduction",
                lst.same_values(&ls) && additive,
                format!("{:?} vs {:?}", ls.triple(), lst.triple()),
            ));
        }
        if sums::is_mendes_romero(class) {
            let lmr = mendes_romero_invariants(l0, l1, &stats, &t, ts)?;
            out.push(check(
                "mendes-romero-reduction",
                lmr.same_values(&ls),
                format!("{:?} vs {:?}", ls.triple(), lmr.triple()),
            ));
        }
    }
    Ok(class)
}

/// Runs every applicable identity on one instance.
pub fn verify_instance(inst: &Instance, index: u64, opts: &VerifyOptions) -> InstanceReport {
    let mut checks = Vec::new();
    match run_checks(inst, opts, &mut checks) {
        Ok(class) => InstanceReport {
            index,
            class: Some(class),
            checks,
            error: None,
        },
        Err(e) => InstanceReport {
            index,
            class: None,
            checks,
            error: Some(e.to_string()),
        },
    }
}

/// A seeded batch, evaluated in parallel and reported in index order.
pub fn verify_random(
    spec: &RandomSpec,
    kind: InstanceKind,
    count: u64,
    opts: &VerifyOptions,
) -> Vec<(Option<Instance>, InstanceReport)> {
    (0..count)
        .into_par_iter()
        .map(|i| match random_instance(spec, kind, i) {
            Ok(inst) => {
                let r = verify_instance(&inst, i, opts);
                (Some(inst), r)
            }
            Err(e) => (
                None,
                InstanceReport {
                    index: i,
                    class: None,
                    checks: Vec::new(),
                    error: Some(format!("generation: {e}")),
                },
            ),
        })
        .collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

/// Pass/fail counts per identity, plus `errors` for instances that did not
/// evaluate.
pub fn summarize<'a>(
    reports: impl IntoIterator<Item = &'a InstanceReport>,
) -> BTreeMap<&'static str, Tally> {
    let mut table: BTreeMap<&'static str, Tally> = BTreeMap::new();
    for r in reports {
        for c in &r.checks {
            let t = table.entry(c.identity).or_default();
            if c.ok {
                t.pass += 1;
            } else {
                t.fail += 1;
            }
        }
        if r.error.is_some() {
            table.entry("errors").or_default().fail += 1;
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{standard_curve, Bridge, CurveLocation};
    use crate::geom::{rat, Point};
    use crate::invariants::base_invariants_kn;

    #[test]
    fn connected_sum_instance_passes() {
        let a = standard_curve(2);
        let b = standard_curve(3).translate(&Point::from_ints(32, 0));
        let g = Bridge::straight(
            CurveLocation::new(4, rat(1, 2)),
            CurveLocation::new(b.len() - 1, rat(1, 2)),
        );
        let inst = Instance {
            c0: a,
            c1: b,
            bridge: g,
            ledger0: Some(base_invariants_kn(2)),
            ledger1: Some(base_invariants_kn(3)),
        };
        let r = verify_instance(
            &inst,
            0,
            &VerifyOptions {
                directions: 2,
                seed: 1,
            },
        );
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.class, Some(SumClass::ConnectedSum));
        assert!(r.checks.iter().any(|c| c.identity == "strange-reduction"));
        assert!(r
            .checks
            .iter()
            .any(|c| c.identity == "mendes-romero-reduction"));
    }

    #[test]
    fn bad_ledger_is_reported() {
        let a = standard_curve(1);
        let b = standard_curve(1).translate(&Point::from_ints(20, 0));
        let g = Bridge::straight(
            CurveLocation::new(0, rat(1, 2)),
            CurveLocation::new(2, rat(1, 2)),
        );
        let mut l = base_invariants_kn(1);
        l.j_plus = 5;
        let inst = Instance {
            c0: a,
            c1: b,
            bridge: g,
            ledger0: Some(l),
            ledger1: Some(base_invariants_kn(1)),
        };
        let r = verify_instance(&inst, 0, &VerifyOptions::default());
        assert!(!r.ok());
        assert!(r.failures().any(|c| c.identity == "piece0-ledger"));
    }

    #[test]
    fn small_batch_is_deterministic() {
        let spec = RandomSpec::with_seed(3);
        let a = verify_random(&spec, InstanceKind::Mixed, 4, &VerifyOptions::default());
        let b = verify_random(&spec, InstanceKind::Mixed, 4, &VerifyOptions::default());
        let pa: Vec<_> = a.iter().map(|x| x.1.checks.clone()).collect();
        let pb: Vec<_> = b.iter().map(|x| x.1.checks.clone()).collect();
        assert_eq!(pa, pb);
        for (_, r) in &a {
            assert!(r.ok(), "{r:?}");
        }
    }
}
