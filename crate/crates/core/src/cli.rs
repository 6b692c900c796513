//! Command-line front end.
//!
//! Exit codes: 0 success or passing verification, 1 failed verification,
//! 2 usage, constraint or I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::alphred::{
    diamond, run_schedule, schedule_b1, triple_gamma, DiamondInput, PipelineOutput, Schedule,
};
use crate::bundle::{Bundle, Object};
use crate::certificate::{Certificate, Claim, VerifyMode, DEFAULT_DET_LIMIT, DEFAULT_SEED};
use crate::classical::{all_points, rs_code, LinearCode};
use crate::enumerate::DEFAULT_BUDGET;
use crate::error::{Error, Result};
use crate::flinalg::Mat;
use crate::gf::Field;
use crate::multfriendly::{lift_classical, mf_quantum, mf_rm, mf_rs, verify_mf};
use crate::transversal::{
    build_from_classical, derive_u_certificate, rs_transversal, verify_ccz, DistanceBounds,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Environment variable overriding the default enumeration budget.
pub const BUDGET_ENV: &str = "CODEKIT_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "codekit", version, about = "CSS codes with transversal CCZ gates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a code and write it as a bundle.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Check a property of a bundle; the certificate is written alongside.
    Verify(VerifyArgs),
    /// Exact distance, or the certified lower bound when enumeration is out of budget.
    Distance(DistanceArgs),
    /// Parameters, provenance and certificates of a bundle.
    Info(InArgs),
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output bundle; printed to stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BuildCmd {
    /// Reed-Solomon transversal triple [[q−k, k, ℓ+1−k]]_q.
    Rs {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classical linear code.
    #[command(subcommand)]
    Linear(LinearCmd),
    /// Transversal triple from a classical code bundle.
    Transversal {
        #[arg(long)]
        classical: PathBuf,
        /// Information set A, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        a_set: Vec<usize>,
        /// Certified d(C), skipping enumeration.
        #[arg(long)]
        d: Option<usize>,
        /// Certified d(C^{*3}).
        #[arg(long)]
        d_star: Option<usize>,
        /// Certified d(C⊥).
        #[arg(long)]
        d_dual: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Multiplication-friendly collection.
    #[command(subcommand)]
    Mf(MfCmd),
    /// Alphabet reduction of a triple by a 4-MF collection.
    Diamond {
        #[arg(long)]
        mf: PathBuf,
        #[arg(long)]
        triple: PathBuf,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Iterated alphabet reduction.
    Pipeline {
        /// `b1` or a JSON schedule file.
        #[arg(long)]
        schedule: String,
        /// Number of reduction levels (b1 only).
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Alphabet of the final code (b1 only).
        #[arg(long, default_value_t = 2)]
        base_q: u64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum LinearCmd {
    /// Reed-Solomon code evaluated on the first n field elements.
    Rs {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Code generated by the rows of a JSON matrix file.
    Matrix {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        gen: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct MfCommon {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Replace every member by member H, keeping Dec.
    #[arg(long, value_name = "H")]
    pub share_member: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum MfCmd {
    Rs {
        #[command(flatten)]
        common: MfCommon,
        #[arg(long)]
        n: usize,
        /// Lift to the quantum collection CSS(F_q^n, C).
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    Rm {
        #[command(flatten)]
        common: MfCommon,
        #[arg(long)]
        lift: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    Quantum {
        #[command(flatten)]
        common: MfCommon,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    Ccz,
    U,
    Mf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Det,
    Rand,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub property: Property,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Det)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cap on multiply-adds for deterministic checks.
    #[arg(long, default_value_t = DEFAULT_DET_LIMIT)]
    pub limit: u128,
    /// Certificate path; defaults to `<in>.<property>.cert.json`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct InArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

/// Flag, then `CODEKIT_BUDGET`, then the library default.
pub fn budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var(BUDGET_ENV).ok()?.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        // Reader went away (e.g. piped into `head`).
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Build(b) => build(b, out),
        Command::Verify(v) => verify(v, out),
        Command::Distance(d) => distance(d, out),
        Command::Info(i) => info(&i.input, out),
    }
}

fn emit(bundle: &Bundle, dest: &OutArgs, out: &mut dyn Write) -> Result<i32> {
    let summary = summary_line(&bundle.object);
    match &dest.out {
        Some(p) => {
            bundle.save(p)?;
            writeln!(out, "{summary} -> {}", p.display())?;
        }
        None => write!(out, "{}", bundle.to_json()?)?,
    }
    Ok(EXIT_OK)
}

fn load(p: &Path) -> Result<Bundle> {
    Bundle::load(p).map_err(|e| match e {
        Error::Io(io) => Error::Bundle(format!("{}: {io}", p.display())),
        other => other,
    })
}

fn build(cmd: BuildCmd, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        BuildCmd::Rs { q, k, l, out: dest } => {
            let t = rs_transversal(&Field::with_order(q)?, k, l)?;
            let b = Bundle::new(
                Object::TransversalTriple(t),
                json!({"construction": "rs_transversal", "q": q, "k": k, "l": l}),
            );
            emit(&b, &dest, out)
        }
        BuildCmd::Linear(LinearCmd::Rs { q, n, k, out: dest }) => {
            let f = Field::with_order(q)?;
            let pts = all_points(&f);
            let n = n.unwrap_or(pts.len());
            if n > pts.len() {
                return Err(Error::Constraint("n ≤ q".into()));
            }
            let c = rs_code(&f, &pts[..n], k)?;
            let b = Bundle::new(
                Object::LinearCode(c),
                json!({"construction": "reed_solomon", "q": q, "n": n, "k": k}),
            );
            emit(&b, &dest, out)
        }
        BuildCmd::Linear(LinearCmd::Matrix { q, gen, out: dest }) => {
            let f = Field::with_order(q)?;
            let rows: Vec<Vec<u32>> = serde_json::from_str(&std::fs::read_to_string(&gen)?)?;
            let cols = rows.first().map_or(0, |r| r.len());
            let c = LinearCode::new(Mat::from_rows_with_cols(&f, rows, cols)?)?;
            let b = Bundle::new(
                Object::LinearCode(c),
                json!({"construction": "generator_matrix", "q": q}),
            );
            emit(&b, &dest, out)
        }
        BuildCmd::Transversal {
            classical,
            a_set,
            d,
            d_star,
            d_dual,
            budget: bflag,
            out: dest,
        } => {
            let src = load(&classical)?;
            let Object::LinearCode(c) = &src.object else {
                return Err(Error::Bundle("--classical expects a linear_code bundle".into()));
            };
            let bounds = DistanceBounds { d, d_star, d_dual };
            let t = build_from_classical(c, &a_set, bounds, budget(bflag))?;
            let b = Bundle::new(
                Object::TransversalTriple(t),
                json!({
                    "construction": "build_from_classical",
                    "a_set": a_set,
                    "classical": src.provenance,
                }),
            );
            emit(&b, &dest, out)
        }
        BuildCmd::Mf(m) => build_mf(m, out),
        BuildCmd::Diamond { mf, triple, r, out: dest } => {
            let mb = load(&mf)?;
            let tb = load(&triple)?;
            let Object::MfCollection(mfc) = mb.object else {
                return Err(Error::Bundle("--mf expects an mf_collection bundle".into()));
            };
            let Some(t) = tb.object.triple().cloned() else {
                return Err(Error::Bundle("--triple expects a transversal triple".into()));
            };
            let input = DiamondInput {
                mf: mfc,
                triple: t,
                r,
            };
            let t = diamond(&input)?;
            let b = Bundle::new(
                Object::TransversalTriple(t),
                json!({
                    "construction": "diamond",
                    "r": r,
                    "mf": mb.provenance,
                    "triple": tb.provenance,
                }),
            );
            emit(&b, &dest, out)
        }
        BuildCmd::Pipeline {
            schedule,
            depth,
            base_q,
            out: dest,
        } => {
            let (sched, label) = if schedule == "b1" {
                (schedule_b1(base_q, depth)?, json!("b1"))
            } else {
                let s: Schedule = serde_json::from_str(&std::fs::read_to_string(&schedule)?)?;
                (s, json!("custom"))
            };
            let p = run_schedule(&sched)?;
            let b = Bundle::new(
                Object::PipelineOutput(p),
                json!({
                    "construction": "pipeline",
                    "schedule_kind": label,
                    "schedule": serde_json::to_value(&sched)?,
                }),
            );
            emit(&b, &dest, out)
        }
    }
}

fn build_mf(cmd: MfCmd, out: &mut dyn Write) -> Result<i32> {
    let (common, dest, mut prov) = match &cmd {
        MfCmd::Rs { common, n, lift, out } => (
            common,
            out,
            json!({"construction": "mf_rs", "n": n, "lift": lift}),
        ),
        MfCmd::Rm { common, lift, out } => {
            (common, out, json!({"construction": "mf_rm", "lift": lift}))
        }
        MfCmd::Quantum { common, r, l, out } => (
            common,
            out,
            json!({"construction": "mf_quantum", "r": r, "l": l}),
        ),
    };
    let f = Field::with_order(common.q)?;
    let mut mf = match &cmd {
        MfCmd::Rs { n, lift, .. } => {
            let c = mf_rs(&f, *n, common.k, common.m)?;
            if *lift {
                lift_classical(&c)?
            } else {
                c
            }
        }
        MfCmd::Rm { lift, .. } => {
            let c = mf_rm(&f, common.k, common.m)?;
            if *lift {
                lift_classical(&c)?
            } else {
                c
            }
        }
        MfCmd::Quantum { r, l, .. } => mf_quantum(&f, common.k, *r, *l, common.m)?,
    };
    if let Some(h) = common.share_member {
        if h >= mf.m() {
            return Err(Error::IndexOutOfRange {
                index: h,
                len: mf.m(),
            });
        }
        mf = mf.with_shared_member(h);
        prov["share_member"] = json!(h);
    }
    prov["q"] = json!(common.q);
    prov["k"] = json!(common.k);
    prov["m"] = json!(common.m);
    emit(&Bundle::new(Object::MfCollection(mf), prov), dest, out)
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let bundle = load(&args.input)?;
    let mode = match args.mode {
        ModeArg::Det => VerifyMode::Deterministic { limit: args.limit },
        ModeArg::Rand => VerifyMode::randomized(args.samples, args.seed),
    };
    let cert: Certificate = match args.property {
        Property::Ccz | Property::U => {
            let t = bundle
                .object
                .triple()
                .ok_or_else(|| Error::Bundle("expected a transversal triple".into()))?;
            if args.property == Property::U && !t.same_code() {
                return Err(Error::SameCodeRequired);
            }
            let ccz = verify_ccz(t, mode)?;
            if args.property == Property::Ccz || !ccz.passed {
                ccz
            } else {
                derive_u_certificate(t, &ccz, budget(args.budget))?
            }
        }
        Property::Mf => {
            let Object::MfCollection(mf) = &bundle.object else {
                return Err(Error::Bundle("expected an mf_collection bundle".into()));
            };
            verify_mf(mf, mode)?
        }
    };
    let path = args.cert.unwrap_or_else(|| {
        let mut s = args.input.clone().into_os_string();
        s.push(format!(".{}.cert.json", cert.property));
        PathBuf::from(s)
    });
    let mut text = serde_json::to_string_pretty(&cert)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    writeln!(out, "{}", cert.summary())?;
    writeln!(out, "certificate: {}", path.display())?;
    Ok(if cert.passed { EXIT_OK } else { EXIT_FAIL })
}

/// Exact distance when enumerable within `budget`, otherwise the stored claim.
pub fn distance_report(object: &Object, budget: u64) -> Result<Claim> {
    let exact = |d: usize| Claim::exact("d", d as u64, "enumeration");
    match object {
        Object::LinearCode(c) => Ok(exact(c.distance_bruteforce(budget)?)),
        Object::CssCode(c) => Ok(exact(c.distance_bruteforce(budget)?)),
        Object::MfCollection(mf) => match mf.members() {
            crate::multfriendly::Members::Quantum(_) if mf.distance_bound() > 1 => Ok(
                Claim::bound("d", mf.distance_bound(), "multiplication-friendly construction"),
            ),
            _ => Err(Error::InvalidCode(
                "collection carries no distance certificate".into(),
            )),
        },
        Object::TransversalTriple(_) | Object::PipelineOutput(_) => {
            let t = object.triple().unwrap();
            let n_codes = if t.same_code() { 1 } else { 3 };
            let mut best = None;
            let mut fallback = None;
            for c in &t.codes()[..n_codes] {
                match c.distance_bruteforce(budget) {
                    Ok(d) => best = Some(best.map_or(d, |b: usize| b.min(d))),
                    Err(e @ Error::ZeroCode) => return Err(e),
                    Err(e) => {
                        fallback = Some(e);
                        break;
                    }
                }
            }
            match (fallback, best) {
                (None, Some(d)) => Ok(exact(d)),
                (Some(e), _) => t.distance().cloned().ok_or(e),
                (None, None) => Err(Error::ZeroCode),
            }
        }
    }
}

fn distance(args: DistanceArgs, out: &mut dyn Write) -> Result<i32> {
    let bundle = load(&args.input)?;
    let claim = distance_report(&bundle.object, budget(args.budget))?;
    writeln!(out, "{}", claim.describe())?;
    Ok(EXIT_OK)
}

fn summary_line(object: &Object) -> String {
    match object {
        Object::LinearCode(c) => format!("classical [{},{}]_{}", c.n(), c.k(), c.field().order()),
        Object::CssCode(c) => format!("css [[{},{}]]_{}", c.n(), c.k(), c.field().order()),
        Object::TransversalTriple(t) => format!("transversal triple {}", t.params()),
        Object::MfCollection(m) => m.params(),
        Object::PipelineOutput(p) => format!("pipeline output {}", p.triple.params()),
    }
}

fn provenance_tree(v: &Value, indent: usize, out: &mut dyn Write) -> std::io::Result<()> {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        writeln!(out, "{pad}{k}:")?;
                        provenance_tree(x, indent + 1, out)?;
                    }
                    _ => writeln!(out, "{pad}{k}: {x}")?,
                }
            }
            Ok(())
        }
        other => writeln!(out, "{pad}{other}"),
    }
}

fn level_table(p: &PipelineOutput, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{:>5} {:>6} {:>8} {:>7} {:>4} {:>4} {:>3} {:>8} {:>4} {:>4}",
        "level", "q", "family", "nbar", "kbar", "dbar", "r", "n", "k", "d≥"
    )?;
    for l in &p.levels {
        writeln!(
            out,
            "{:>5} {:>6} {:>8} {:>7} {:>4} {:>4} {:>3} {:>8} {:>4} {:>4}",
            l.level,
            l.q,
            l.family,
            l.nbar,
            l.kbar,
            l.dbar,
            l.r,
            l.n,
            l.k,
            l.d.map_or("-".into(), |d| d.to_string())
        )?;
    }
    writeln!(
        out,
        "{:>5} {:>6} {:>8} {:>7} {:>4} {:>4} {:>3} {:>8} {:>4} {:>4}",
        "base",
        p.base.q,
        "rs",
        "-",
        "-",
        "-",
        "-",
        p.base.n,
        p.base.k,
        p.base.d.map_or("-".into(), |d| d.to_string())
    )
}

fn info(input: &Path, out: &mut dyn Write) -> Result<i32> {
    let bundle = load(input)?;
    writeln!(out, "kind: {}", bundle.kind())?;
    match &bundle.object {
        Object::LinearCode(c) => match c.distance_bruteforce(budget(None)) {
            Ok(d) => writeln!(out, "classical [{},{},{}]_{}", c.n(), c.k(), d, c.field().order())?,
            Err(_) => writeln!(out, "classical [{},{}]_{}", c.n(), c.k(), c.field().order())?,
        },
        other => writeln!(out, "{}", summary_line(other))?,
    }
    if let Some(t) = bundle.object.triple() {
        if let Some(d) = t.distance() {
            writeln!(out, "distance: {}", d.describe())?;
        }
        if let Some(g) = triple_gamma(t) {
            writeln!(out, "γ = log(n/k)/log(d) ≈ {g:.4}")?;
        }
    }
    if let Object::PipelineOutput(p) = &bundle.object {
        level_table(p, out)?;
    }
    writeln!(out, "provenance:")?;
    provenance_tree(&bundle.provenance, 1, out)?;
    if !bundle.certificates.is_empty() {
        writeln!(out, "certificates:")?;
        for c in &bundle.certificates {
            writeln!(out, "  {}", c.summary())?;
        }
    }
    Ok(EXIT_OK)
}
