use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use curvesum::arrangement::{rotation_number, Arrangement};
use curvesum::curve::{self, standard_curve, PolyCurve};
use curvesum::homotopy::{simulate_oriented, simulate_separation, SimOptions};
use curvesum::invariants::{
    base_invariants_kn, consistency_check, sum_invariants, InvariantLedger,
};
use curvesum::random::{random_instance, random_pair, InstanceKind, RandomSpec};
use curvesum::render::{render_filmstrip, render_svg, Scene};
use curvesum::sums::{self, bridge_stats, construct_sum_logged};
use curvesum::t_invariants::{t_pm, t_pm_oriented, t_st};
use curvesum::verify::{summarize, verify_instance, verify_random, VerifyOptions};
use curvesum::{CurveFile, Error, Instance};

// a closed pipe is not an error worth a panic
macro_rules! outln {
    ($($t:tt)*) => {{
        let _ = writeln!(io::stdout(), $($t)*);
    }};
}

macro_rules! out {
    ($($t:tt)*) => {{
        let _ = write!(io::stdout(), $($t)*);
    }};
}

/// Exact plane curves, generalized connected sums and Arnold invariants.
#[derive(Parser)]
#[command(name = "curvesum", version)]
struct Cli {
    /// Seed for random generation and direction sampling.
    #[arg(long, global = true, env = "CURVESUM_SEED", default_value_t = 7)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a standard curve or a random instance as JSON.
    Gen(GenArgs),
    /// Check genericity, general position and bridges.
    Validate { file: PathBuf },
    /// Print the arrangement (faces, windings, crossings) as JSON.
    Analyze { file: PathBuf },
    /// Construct the generalized connected sum along a bridge.
    Sum {
        file: PathBuf,
        #[arg(long)]
        bridge: Option<String>,
    },
    /// Tangency counts T+ and T-.
    Tpm(MethodArgs),
    /// Triple-point count T^St (needs a bridge).
    Tst {
        #[command(flatten)]
        m: MethodArgs,
        /// Print the simulated events.
        #[arg(long)]
        trace: bool,
    },
    /// Check or compute ledgers (reads stdin when no file is given).
    Invariants { file: Option<PathBuf> },
    /// Run the identity suite on a file or on a random batch.
    Verify(VerifyArgs),
    /// Draw an instance as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    /// The standard curve K_n.
    #[arg(long, conflicts_with = "random")]
    standard: Option<usize>,
    /// A random instance.
    #[arg(long)]
    random: bool,
    #[arg(long, value_enum, default_value_t = Kind::Mixed)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    index: u64,
    #[arg(long, default_value_t = 6)]
    d_max: usize,
    #[arg(long, default_value_t = 3)]
    g_max: usize,
    #[arg(long, default_value_t = 6)]
    x_max: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    General,
    Separated,
    MendesRomero,
    Mixed,
    /// Two curves without a bridge.
    Pair,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    ClosedForm,
    Simulate,
    Both,
}

#[derive(Args)]
struct MethodArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
    #[arg(long)]
    bridge: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    random: bool,
    #[arg(long, default_value_t = 20)]
    count: u64,
    #[arg(long, value_enum, default_value_t = Kind::Mixed)]
    kind: Kind,
    /// Compare this many separating directions per instance.
    #[arg(long, default_value_t = 1)]
    directions: usize,
    /// Where reproducers of failing instances are written.
    #[arg(long, default_value = ".")]
    repro_dir: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    file: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Overlay the constructed sum.
    #[arg(long)]
    sum: bool,
    /// Draw a before/at/after filmstrip of this simulator event instead.
    #[arg(long)]
    filmstrip: Option<usize>,
    #[arg(long)]
    no_labels: bool,
}

/// Exit statuses: 1 invalid input, 2 consistency mismatch, 3 I/O or usage.
enum Failure {
    Invalid(String),
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Json(_) | Error::Parse(_) => Failure::Usage(e.to_string()),
            Error::InconsistentInputs(_) => Failure::Mismatch(e.to_string()),
            e => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read_file(path: &Path) -> Result<CurveFile, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(CurveFile::from_json(&text)?)
}

fn print_json(v: &serde_json::Value) {
    outln!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

fn kind_of(k: Kind) -> InstanceKind {
    match k {
        Kind::General => InstanceKind::General,
        Kind::Separated => InstanceKind::Separated,
        Kind::MendesRomero => InstanceKind::MendesRomero,
        Kind::Mixed | Kind::Pair => InstanceKind::Mixed,
    }
}

fn gen(seed: u64, a: &GenArgs) -> Outcome {
    let file = if let Some(n) = a.standard {
        CurveFile::single(&standard_curve(n), Some(base_invariants_kn(n)))
    } else if a.random {
        if let Kind::Pair = a.kind {
            let (c0, c1) = random_pair(seed, a.index, a.d_max, false)?;
            let mut f = CurveFile::new();
            f.push_curve("c0", &c0, None);
            f.push_curve("c1", &c1, None);
            f
        } else {
            let spec = RandomSpec {
                seed,
                d_max: a.d_max,
                g_max: a.g_max,
                x_max: a.x_max,
            };
            CurveFile::instance(&random_instance(&spec, kind_of(a.kind), a.index)?)
        }
    } else {
        return Err(Failure::Usage("gen needs --standard N or --random".into()));
    };
    out!("{}", file.to_json());
    Ok(())
}

fn validate(path: &Path) -> Outcome {
    let f = read_file(path)?;
    let curves = f.curves()?;
    let mut reports = Vec::new();
    let mut ok = true;
    for (i, c) in curves.iter().enumerate() {
        let r = curve::validate_generic(c);
        ok &= r.ok;
        reports.push(json!({ "curve": f.curves[i].id, "ok": r.ok, "violations": r.violations }));
    }
    if curves.len() >= 2 {
        let r = curve::validate_general_position(&curves[0], &curves[1]);
        ok &= r.ok;
        reports.push(json!({ "pair": [f.curves[0].id, f.curves[1].id], "ok": r.ok, "violations": r.violations }));
    }
    for b in &f.bridges {
        let inst = f.bridge_instance(Some(&b.id))?;
        let r = curve::validate_bridge(&inst.bridge, &inst.c0, &inst.c1);
        ok &= r.ok;
        reports.push(json!({ "bridge": b.id, "ok": r.ok, "violations": r.violations }));
    }
    print_json(&json!({ "ok": ok, "reports": reports }));
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid("validation failed".into()))
    }
}

fn analyze(path: &Path) -> Outcome {
    let f = read_file(path)?;
    let curves = f.curves()?;
    let used = &curves[..curves.len().min(2)];
    let arr = Arrangement::build(used)?;
    let faces: Vec<_> = arr
        .faces
        .iter()
        .map(|r| json!({ "id": r.id, "bounded": r.bounded, "winding": r.winding, "witness": r.witness }))
        .collect();
    let crossings: Vec<_> = arr
        .crossings
        .iter()
        .map(|x| json!({ "point": x.point, "mutual": x.mutual, "curves": [x.branches[0].curve, x.branches[1].curve] }))
        .collect();
    print_json(&json!({
        "vertices": arr.vertices.len(),
        "edges": arr.edge_count(),
        "faces": arr.face_count(),
        "components": arr.component_count(),
        "euler_defect": arr.euler_defect(),
        "rotation_numbers": used.iter().map(rotation_number).collect::<Vec<_>>(),
        "regions": faces,
        "crossings": crossings,
    }));
    Ok(())
}

fn sum_ledger(inst: &Instance) -> Result<Option<InvariantLedger>, Failure> {
    let (Some(l0), Some(l1)) = (&inst.ledger0, &inst.ledger1) else {
        return Ok(None);
    };
    let stats = bridge_stats(&inst.bridge, &inst.c0, &inst.c1)?;
    let t = t_pm(&inst.c0, &inst.c1, &inst.bridge)?;
    let ts = t_st(&inst.c0, &inst.c1, &inst.bridge)?;
    Ok(Some(sum_invariants(l0, l1, &stats, &t, ts)?))
}

fn sum(path: &Path, bridge: Option<&str>) -> Outcome {
    let f = read_file(path)?;
    let inst = f.bridge_instance(bridge)?;
    let built = construct_sum_logged(&inst.c0, &inst.c1, &inst.bridge)?;
    let ledger = sum_ledger(&inst)?;
    if let Some(l) = &ledger {
        let d = curve::self_crossings(&built.curve, 0)?.len();
        let r = consistency_check(l, Some(d));
        if !r.ok {
            out!(
                "{}",
                CurveFile::single(&built.curve, ledger.clone()).to_json()
            );
            return Err(Failure::Mismatch(format!(
                "sum ledger disagrees with the constructed curve: {r:?}"
            )));
        }
    }
    out!("{}", CurveFile::single(&built.curve, ledger).to_json());
    Ok(())
}

fn compare<T: PartialEq + std::fmt::Display>(
    method: Method,
    closed: impl FnOnce() -> Result<T, Failure>,
    sim: impl FnOnce() -> Result<T, Failure>,
) -> Outcome {
    let c = if method != Method::Simulate {
        Some(closed()?)
    } else {
        None
    };
    let s = if method != Method::ClosedForm {
        Some(sim()?)
    } else {
        None
    };
    if let Some(c) = &c {
        outln!("closed-form {c}");
    }
    if let Some(s) = &s {
        outln!("simulate {s}");
    }
    if let (Some(c), Some(s)) = (&c, &s) {
        if c != s {
            return Err(Failure::Mismatch("methods disagree".into()));
        }
        outln!("agree");
    }
    Ok(())
}

fn tpm(seed: u64, a: &MethodArgs) -> Outcome {
    let f = read_file(&a.file)?;
    let opts = SimOptions {
        seed,
        ..SimOptions::default()
    };
    if f.bridges.is_empty() {
        let (c0, c1) = f.pair()?;
        compare(
            a.method,
            || Ok(t_pm_oriented(&c0, &c1)?),
            || Ok(simulate_oriented(&c0, &c1, &opts)?.t_pair),
        )
    } else {
        let inst = f.bridge_instance(a.bridge.as_deref())?;
        let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
        compare(
            a.method,
            || Ok(t_pm(c0, c1, g)?),
            || Ok(simulate_separation(c0, c1, g, &opts)?.t_pair),
        )
    }
}

fn tst(seed: u64, a: &MethodArgs, trace: bool) -> Outcome {
    let f = read_file(&a.file)?;
    let inst = f.bridge_instance(a.bridge.as_deref())?;
    let (c0, c1, g) = (&inst.c0, &inst.c1, &inst.bridge);
    let opts = SimOptions {
        seed,
        check_ledger: trace,
        ..SimOptions::default()
    };
    compare(
        a.method,
        || Ok(t_st(c0, c1, g)?),
        || {
            let r = simulate_separation(c0, c1, g, &opts)?;
            if trace {
                eprintln!(
                    "{}",
                    serde_json::to_string_pretty(&r).expect("serializable")
                );
            }
            r.t_st
                .ok_or_else(|| Failure::Invalid("simulation produced no triple count".into()))
        },
    )
}

fn invariants(file: Option<&Path>) -> Outcome {
    let f = match file {
        Some(p) => read_file(p)?,
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            CurveFile::from_json(&text)?
        }
    };
    let (ledger, curve_for_count): (InvariantLedger, Option<PolyCurve>) = if f.bridges.is_empty() {
        let l = f
            .curves
            .first()
            .and_then(|c| c.ledger.clone())
            .ok_or_else(|| Failure::Usage("curve carries no ledger".into()))?;
        (l, Some(f.curve(0)?))
    } else {
        let inst = f.bridge_instance(None)?;
        let l =
            sum_ledger(&inst)?.ok_or_else(|| Failure::Usage("both curves need ledgers".into()))?;
        (l, None)
    };
    let counted = match &curve_for_count {
        Some(c) => Some(curve::self_crossings(c, 0)?.len()),
        None => None,
    };
    let r = consistency_check(&ledger, counted);
    outln!("({}, {}, {})", ledger.j_plus, ledger.j_minus, ledger.st);
    eprintln!(
        "{}",
        serde_json::to_string(&json!({ "ledger": ledger, "consistency": r }))
            .expect("serializable")
    );
    if r.ok {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("ledger inconsistent: {r:?}")))
    }
}

fn dump_repro(dir: &Path, name: &str, inst: &Instance) -> io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let p = dir.join(name);
    fs::write(&p, CurveFile::instance(inst).to_json())?;
    Ok(p)
}

fn verify(seed: u64, a: &VerifyArgs) -> Outcome {
    let opts = VerifyOptions {
        directions: a.directions,
        seed,
    };
    let runs: Vec<(Option<Instance>, _)> = if let Some(p) = &a.file {
        let inst = read_file(p)?.bridge_instance(None)?;
        let r = verify_instance(&inst, 0, &opts);
        vec![(Some(inst), r)]
    } else if a.random {
        let spec = RandomSpec::with_seed(seed);
        verify_random(&spec, kind_of(a.kind), a.count, &opts)
    } else {
        return Err(Failure::Usage("verify needs a file or --random".into()));
    };
    let table = summarize(runs.iter().map(|r| &r.1));
    let width = table.keys().map(|k| k.len()).max().unwrap_or(8);
    outln!("{:<width$}  {:>5}  {:>5}", "identity", "pass", "fail");
    for (k, t) in &table {
        outln!("{k:<width$}  {:>5}  {:>5}", t.pass, t.fail);
    }
    let mut failed = 0;
    for (inst, r) in &runs {
        if r.ok() {
            continue;
        }
        failed += 1;
        let names: Vec<&str> = r.failures().map(|c| c.identity).collect();
        let what = if names.is_empty() {
            r.error.clone().unwrap_or_default()
        } else {
            names.join(", ")
        };
        match inst {
            Some(inst) => {
                let p = dump_repro(
                    &a.repro_dir,
                    &format!("curvesum-repro-{seed}-{}.json", r.index),
                    inst,
                )?;
                outln!(
                    "instance {} failed: {what} (reproducer {})",
                    r.index,
                    p.display()
                );
            }
            None => outln!("instance {} failed: {what}", r.index),
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{failed} instance(s) failed")))
    }
}

fn render(seed: u64, a: &RenderArgs) -> Outcome {
    let f = read_file(&a.file)?;
    let svg = if let Some(k) = a.filmstrip {
        if f.bridges.is_empty() {
            let (c0, c1) = f.pair()?;
            let sim = simulate_oriented(
                &c0,
                &c1,
                &SimOptions {
                    seed,
                    ..SimOptions::default()
                },
            )?;
            render_filmstrip(&c0, &c1, None, &sim, k)?
        } else {
            let inst = f.bridge_instance(None)?;
            let sim = simulate_separation(
                &inst.c0,
                &inst.c1,
                &inst.bridge,
                &SimOptions {
                    seed,
                    ..SimOptions::default()
                },
            )?;
            render_filmstrip(&inst.c0, &inst.c1, Some(&inst.bridge), &sim, k)?
        }
    } else {
        let mut scene = Scene {
            curves: f.curves()?,
            labels: !a.no_labels,
            ..Scene::default()
        };
        if !f.bridges.is_empty() {
            let inst = f.bridge_instance(None)?;
            if a.sum {
                scene.overlay = Some(sums::construct_sum(&inst.c0, &inst.c1, &inst.bridge)?);
            }
            scene.curves = vec![inst.c0, inst.c1];
            scene.bridge = Some(inst.bridge);
        }
        render_svg(&scene)?
    };
    match &a.output {
        Some(p) => fs::write(p, svg)?,
        None => {
            let _ = io::stdout().write_all(svg.as_bytes());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let seed = cli.seed;
    match &cli.command {
        Command::Gen(a) => gen(seed, a),
        Command::Validate { file } => validate(file),
        Command::Analyze { file } => analyze(file),
        Command::Sum { file, bridge } => sum(file, bridge.as_deref()),
        Command::Tpm(a) => tpm(seed, a),
        Command::Tst { m, trace } => tst(seed, m, *trace),
        Command::Invariants { file } => invariants(file.as_deref()),
        Command::Verify(a) => verify(seed, a),
        Command::Render(a) => render(seed, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
