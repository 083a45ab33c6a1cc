use std::time::{Duration, Instant};

use curvesum::arrangement::{arc_crossing_tally, ind_v, ind_v_at};
use curvesum::curve::{self, PolyCurve};
use curvesum::homotopy::{choose_directions, simulate_oriented, simulate_separation, SimOptions};
use curvesum::invariants::{
    base_invariants_kn, mendes_romero_invariants, strange_sum_invariants, sum_invariants,
};
use curvesum::random::{
    random_arc_instance, random_instance, random_pair, InstanceKind, RandomSpec,
};
use curvesum::sums::{self, bridge_stats, construct_sum};
use curvesum::t_invariants::{
    t_pm, t_pm_oriented, t_pm_polygon, t_pm_simple, t_st, t_st_appendix_identity,
};

struct Outcome {
    pass: usize,
    total: usize,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: 0,
            total: 0,
            notes: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.pass += 1;
        } else if self.notes.len() < 5 {
            self.notes.push(note());
        }
    }

    fn ok(&self) -> bool {
        self.pass == self.total && self.total > 0
    }
}

fn report(n: usize, what: &str, o: &Outcome, took: Duration, limit: Option<Duration>) -> bool {
    let in_time = limit.is_none_or(|l| took <= l);
    let ok = o.ok() && in_time;
    println!(
        "criterion {n:>2}: {} {what}: {}/{} in {:.1}s{}",
        if ok { "PASS" } else { "FAIL" },
        o.pass,
        o.total,
        took.as_secs_f64(),
        if in_time { "" } else { " (over time limit)" }
    );
    for note in &o.notes {
        println!("              {note}");
    }
    ok
}

fn dcount(c: &PolyCurve) -> usize {
    curve::self_crossings(c, 0).unwrap().len()
}

const SEED: u64 = 20240611;

fn main() {
    let start = Instant::now();
    let mut all = true;

    // 1
    let t = Instant::now();
    let mut o = Outcome::new();
    let jp = [0, 0, -2, -4, -6, -8, -10];
    let jm = [-1, 0, -3, -6, -9, -12, -15];
    let st = [0, 0, 1, 2, 3, 4, 5];
    for n in 0..=6 {
        let l = base_invariants_kn(n);
        o.record(l.triple() == (jp[n], jm[n], st[n]), || {
            format!("K_{n}: {:?}", l.triple())
        });
        let d = dcount(&curve::standard_curve(n));
        o.record(l.d_count == d, || {
            format!("K_{n}: ledger |D|={} drawn {d}", l.d_count)
        });
    }
    all &= report(
        1,
        "standard curve anchors",
        &o,
        t.elapsed(),
        Some(Duration::from_secs(1)),
    );

    // 2 and 3 share their instances
    let t = Instant::now();
    let spec = RandomSpec {
        seed: SEED,
        d_max: 6,
        g_max: 3,
        x_max: 6,
    };
    let mut o2 = Outcome::new();
    let mut o3 = Outcome::new();
    let mut counts2 = Vec::new();
    for i in 0..200 {
        let inst = random_instance(&spec, InstanceKind::Mixed, i).expect("instance");
        let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
        let stats = bridge_stats(g, c0, c1).unwrap();
        let (d0, d1) = (dcount(c0), dcount(c1));
        assert!(d0 <= 6 && d1 <= 6 && stats.n_gamma <= 3 && stats.interior_count() <= 6);
        let sum = match construct_sum(c0, c1, g) {
            Ok(s) => s,
            Err(e) => {
                o2.record(false, || format!("#{i}: construction failed: {e}"));
                o3.record(false, || format!("#{i}: construction failed: {e}"));
                continue;
            }
        };
        let d = dcount(&sum);
        let want = d0 + d1 + stats.mutual + 2 * stats.interior_count() + 4 * stats.n_gamma;
        counts2.push(d);
        o2.record(d == want && curve::validate_generic(&sum).ok, || {
            format!("#{i}: |D|={d} want {want}")
        });
        let ledger = sum_invariants(
            inst.ledger0.as_ref().unwrap(),
            inst.ledger1.as_ref().unwrap(),
            &stats,
            &t_pm(c0, c1, g).unwrap(),
            t_st(c0, c1, g).unwrap(),
        )
        .unwrap();
        let diff = ledger.j_plus - ledger.j_minus;
        o3.record(diff == d as i64, || format!("#{i}: J+-J-={diff} |D|={d}"));
    }
    let took = t.elapsed();
    all &= report(
        2,
        "construction count identity",
        &o2,
        took,
        Some(Duration::from_secs(60)),
    );
    all &= report(3, "ledger difference identity", &o3, took, None);

    // 4
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..200 {
        let (c0, c1) = random_pair(SEED + 4, i, 5, i % 3 == 0).expect("pair");
        let closed = t_pm_oriented(&c0, &c1).unwrap();
        let sim = simulate_oriented(&c0, &c1, &SimOptions::default()).unwrap();
        let m = curve::mutual_crossings(&c0, &c1).unwrap().len() as i64;
        o.record(sim.t_pair == closed && 2 * closed.sum() == -m, || {
            format!("#{i}: closed {closed} simulated {} m={m}", sim.t_pair)
        });
    }
    all &= report(
        4,
        "T+- simulation vs closed form",
        &o,
        t.elapsed(),
        Some(Duration::from_secs(120)),
    );

    // 5
    let t = Instant::now();
    let mut o = Outcome::new();
    let spec5 = RandomSpec {
        seed: SEED + 5,
        d_max: 5,
        ..spec.clone()
    };
    for i in 0..200 {
        let inst = random_instance(&spec5, InstanceKind::Mixed, i).expect("instance");
        let closed = t_st(&inst.c0, &inst.c1, &inst.bridge).unwrap();
        let sim =
            simulate_separation(&inst.c0, &inst.c1, &inst.bridge, &SimOptions::default()).unwrap();
        o.record(sim.t_st == Some(closed), || {
            format!("#{i}: closed {closed} simulated {:?}", sim.t_st)
        });
    }
    all &= report(
        5,
        "T^St simulation vs closed form",
        &o,
        t.elapsed(),
        Some(Duration::from_secs(120)),
    );

    // 6
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..200 {
        let (c0, c1) = random_pair(SEED + 6, i, 0, true).expect("pair");
        let a = t_pm_simple(&c0, &c1).unwrap();
        let b = t_pm_polygon(&c0, &c1).unwrap();
        o.record(a == b, || {
            format!("#{i}: crossings form {a} polygon form {b}")
        });
    }
    all &= report(6, "T+- crossing form vs 2k-gon form", &o, t.elapsed(), None);

    // 7
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..500 {
        let a = random_arc_instance(SEED + 7, i, 6).expect("arc");
        let v = a.arc[1].sub(&a.arc[0]);
        let end = a.arc.last().unwrap();
        let lhs =
            ind_v_at(&a.curve, &a.start, &v, end).unwrap() - ind_v(&a.curve, &a.start, &v).unwrap();
        let tally = arc_crossing_tally(&a.arc, &a.curve).unwrap();
        let rhs = tally.l_minus as i64 - tally.l_plus as i64;
        o.record(lhs == rhs, || format!("#{i}: {lhs} vs {rhs}"));
    }
    all &= report(
        7,
        "adjacent index identity",
        &o,
        t.elapsed(),
        Some(Duration::from_secs(30)),
    );

    // 8
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..100 {
        let inst = random_instance(&spec, InstanceKind::Separated, i).expect("instance");
        let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
        let (l0, l1) = (
            inst.ledger0.as_ref().unwrap(),
            inst.ledger1.as_ref().unwrap(),
        );
        let stats = bridge_stats(g, c0, c1).unwrap();
        let general = sum_invariants(
            l0,
            l1,
            &stats,
            &t_pm(c0, c1, g).unwrap(),
            t_st(c0, c1, g).unwrap(),
        )
        .unwrap();
        let strange = strange_sum_invariants(l0, l1, &stats).unwrap();
        let ok = general.same_values(&strange) && general.st == l0.st + l1.st;
        o.record(ok, || {
            format!("#{i}: {:?} vs {:?}", general.triple(), strange.triple())
        });
    }
    all &= report(8, "strange-sum reduction", &o, t.elapsed(), None);

    // 9
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..100 {
        let inst = random_instance(&spec, InstanceKind::MendesRomero, i).expect("instance");
        let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
        assert!(sums::is_mendes_romero(sums::classify(c0, c1, g).unwrap()));
        let (l0, l1) = (
            inst.ledger0.as_ref().unwrap(),
            inst.ledger1.as_ref().unwrap(),
        );
        let stats = bridge_stats(g, c0, c1).unwrap();
        let (tp, ts) = (t_pm(c0, c1, g).unwrap(), t_st(c0, c1, g).unwrap());
        let general = sum_invariants(l0, l1, &stats, &tp, ts).unwrap();
        let mr = mendes_romero_invariants(l0, l1, &stats, &tp, ts).unwrap();
        o.record(general.same_values(&mr), || {
            format!("#{i}: {:?} vs {:?}", general.triple(), mr.triple())
        });
    }
    all &= report(9, "embedded-bridge reduction", &o, t.elapsed(), None);

    // 10
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..50 {
        let inst = random_instance(&spec, InstanceKind::General, i).expect("instance");
        match t_st_appendix_identity(&inst.c0, &inst.c1, &inst.bridge) {
            Ok((l, r)) => o.record(l == r, || format!("#{i}: {l} vs {r}")),
            Err(e) => o.record(false, || format!("#{i}: {e}")),
        }
    }
    all &= report(10, "appendix identity", &o, t.elapsed(), None);

    // 11
    let t = Instant::now();
    let mut o = Outcome::new();
    for i in 0..50 {
        let inst = random_instance(&spec5, InstanceKind::Mixed, i).expect("instance");
        let again = random_instance(&spec5, InstanceKind::Mixed, i).expect("instance");
        o.record(
            inst.c0 == again.c0 && inst.c1 == again.c1 && inst.bridge == again.bridge,
            || format!("#{i}: generation not deterministic"),
        );
        let (o0, o1, _) = sums::orient_compatibly(&inst.c0, &inst.c1, &inst.bridge).unwrap();
        let dirs = choose_directions(&o0, &o1, 3, i).unwrap();
        let results: Vec<_> = dirs
            .iter()
            .map(|u| {
                let r = simulate_separation(
                    &inst.c0,
                    &inst.c1,
                    &inst.bridge,
                    &SimOptions {
                        direction: Some(u.clone()),
                        ..SimOptions::default()
                    },
                )
                .unwrap();
                (r.t_pair, r.t_st)
            })
            .collect();
        o.record(results.windows(2).all(|w| w[0] == w[1]), || {
            format!("#{i}: {results:?}")
        });
    }
    let mut replay = Vec::new();
    for i in 0..10 {
        let inst = random_instance(&spec, InstanceKind::Mixed, i).unwrap();
        replay.push(dcount(
            &construct_sum(&inst.c0, &inst.c1, &inst.bridge).unwrap(),
        ));
    }
    o.record(counts2.len() >= 10 && replay[..] == counts2[..10], || {
        "replayed batch differs".to_string()
    });
    let total = start.elapsed();
    all &= report(
        11,
        "direction independence and determinism",
        &o,
        t.elapsed(),
        None,
    );
    let in_time = total <= Duration::from_secs(300);
    println!(
        "total wall time {:.1}s{}",
        total.as_secs_f64(),
        if in_time {
            ""
        } else {
            " (over the 5 minute budget)"
        }
    );
    all &= in_time;

    assert!(all, "some acceptance criteria failed");
}
