//! Acceptance gate: one line per criterion, written straight to stderr so it
//! survives libtest's output capture.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use codekit::alphred::{
    audit_chain, diamond_parts, gamma_exponent, run_schedule, triple_gamma, BaseParams,
    DiamondInput, Level, MfFamily, Schedule, PRODUCT_BOUND,
};
use codekit::bundle::{Bundle, Object};
use codekit::certificate::{ClaimKind, VerifyMode};
use codekit::classical::{all_points, rs_code, LinearCode};
use codekit::css::{Bilinear, CssCode};
use codekit::flinalg::Mat;
use codekit::gf::{Field, Tower};
use codekit::multfriendly::{
    lift_classical, mf_quantum, mf_rm, mf_rs, verify_mf, verify_mf_exhaustive_oracle,
};
use codekit::transversal::{
    build_from_classical, derive_u_certificate, rs_transversal, verify_ccz,
    verify_ccz_exhaustive_oracle, DistanceBounds, TransversalTriple,
};
use codekit::Error;

const ORACLE_BUDGET: u64 = 1 << 22;

fn field(q: u64) -> Field {
    Field::with_order(q).unwrap()
}

/// Minimum weight over `span(space) ∖ span(exclude)` by plain counting in base q.
fn naive_min_weight(space: &Mat, exclude: &Mat) -> usize {
    let f = space.field().clone();
    let q = f.order();
    let ex = exclude.rref();
    let dim = space.rows();
    let mut best = usize::MAX;
    let mut coeffs = vec![0u32; dim];
    for _ in 0..q.pow(dim as u32) {
        let mut v = vec![0u32; space.cols()];
        for (c, row) in coeffs.iter().zip(space.row_iter()) {
            for (x, &y) in v.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(*c, y));
            }
        }
        if v.iter().any(|&x| x != 0) && !ex.contains(&v) {
            best = best.min(v.iter().filter(|&&x| x != 0).count());
        }
        for c in coeffs.iter_mut() {
            *c += 1;
            if (*c as u64) < q {
                break;
            }
            *c = 0;
        }
    }
    best
}

fn z_side(c: &CssCode) -> usize {
    naive_min_weight(c.qz(), c.x_stab())
}

fn x_side(c: &CssCode) -> usize {
    naive_min_weight(&c.x_stab().kernel(), &c.qz().kernel())
}

/// Every `k` columns of the generator are independent.
fn is_mds(c: &LinearCode) -> bool {
    let g = c.gen();
    let (k, n) = (g.rows(), g.cols());
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if g.select_cols(&idx).unwrap().rank() != k {
            return false;
        }
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn scale_cols(m: &Mat, d: &[u32]) -> Mat {
    let f = m.field().clone();
    let rows = m
        .row_iter()
        .map(|r| r.iter().zip(d).map(|(&x, &c)| f.mul(x, c)).collect())
        .collect();
    Mat::from_rows_with_cols(&f, rows, m.cols()).unwrap()
}

/// The same code with coordinate j of every Z-side vector multiplied by `d_j`.
fn scaled(c: &CssCode, d: &[u32]) -> CssCode {
    CssCode::new(
        &scale_cols(c.x_stab(), d),
        &scale_cols(c.qz(), d),
        &scale_cols(c.encz(), d),
    )
    .unwrap()
}

fn random_full_rank(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
    let q = f.order() as u32;
    loop {
        let m = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..q)).collect())
            .collect();
        let m = Mat::from_rows_with_cols(f, m, cols).unwrap();
        if m.rank() == rows {
            return m;
        }
    }
}

/// Small transversal triples: Reed-Solomon ones, ones from random classical
/// codes, and coordinate-rescaled copies with three distinct codes.
fn tiny_instances(rng: &mut ChaCha8Rng, want: usize) -> Vec<TransversalTriple> {
    let mut out = vec![
        rs_transversal(&field(5), 1, 2).unwrap(),
        rs_transversal(&field(7), 1, 2).unwrap(),
    ];
    while out.len() < want {
        let q = [2u64, 3, 4, 5, 7][rng.gen_range(0..5)];
        let f = field(q);
        let k = rng.gen_range(1..=2usize);
        let nc = rng.gen_range(4..=8 + k);
        let l = rng.gen_range(k + 1..=4usize.min(nc - 1));
        let c = LinearCode::new(random_full_rank(&f, l, nc, rng)).unwrap();
        let mut a: Vec<usize> = (0..nc).collect();
        for i in 0..k {
            let j = rng.gen_range(i..nc);
            a.swap(i, j);
        }
        a.truncate(k);
        a.sort();
        let Ok(t) = build_from_classical(&c, &a, DistanceBounds::default(), 1 << 16) else {
            continue;
        };
        if t.n() > 8 || verify_ccz_exhaustive_oracle(&t, ORACLE_BUDGET).is_err() {
            continue;
        }
        if q > 2 && rng.gen_bool(0.5) {
            let d: Vec<Vec<u32>> = (0..3)
                .map(|_| (0..t.n()).map(|_| rng.gen_range(1..q as u32)).collect())
                .collect();
            let codes = [0, 1, 2].map(|h| scaled(t.code(0), &d[h]));
            let b = (0..t.n())
                .map(|j| {
                    let p = f.mul(f.mul(d[0][j], d[1][j]), d[2][j]);
                    f.div(t.b()[j], p).unwrap()
                })
                .collect();
            let s = TransversalTriple::new(codes, b, None).unwrap();
            assert!(!s.same_code());
            out.push(s);
        } else {
            out.push(t);
        }
    }
    out
}

fn c1() -> String {
    let mut notes = Vec::new();
    for (q, k, l) in [(5u64, 1usize, 2usize), (8, 1, 2), (13, 2, 4)] {
        let t = rs_transversal(&field(q), k, l).unwrap();
        let c = t.code(0);
        let d = l + 1 - k;
        assert_eq!(t.n(), q as usize - k);
        assert_eq!(c.qz().rank() - c.x_stab().rank(), k, "dimension by rank");
        let claim = t.distance().unwrap();
        assert_eq!((claim.value, claim.kind), (d as u64, ClaimKind::Bound));
        let dz = z_side(c);
        assert_eq!(dz, c.distance_z(1 << 24).unwrap());
        if q < 13 {
            let dx = x_side(c);
            assert_eq!(dz.min(dx), d, "exact distance over F_{q}");
            assert_eq!(c.distance_bruteforce(1 << 24).unwrap(), d);
            notes.push(format!("[[{},{},{}]]_{q} exact", t.n(), k, d));
        } else {
            // Q_X side: d(C⊥) − k with C⊥ shown MDS column by column.
            let cc = rs_code(&field(q), &all_points(&field(q)), l).unwrap();
            let dual = cc.dual();
            assert!(is_mds(&dual));
            let d_dual = dual.n() - dual.k() + 1;
            assert_eq!(d_dual - k, d);
            assert!(dz >= d);
            notes.push(format!(
                "[[{},{},≥{}]]_{q} (Q_Z side exact {dz}, Q_X side ≥ d⊥−k = {})",
                t.n(),
                k,
                d,
                d_dual - k
            ));
        }
        assert!(verify_ccz(&t, VerifyMode::deterministic()).unwrap().passed);
    }
    notes.join("; ")
}

fn c2() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let instances = tiny_instances(&mut rng, 30);
    let (mut pos, mut neg, mut distinct) = (0, 0, 0);
    for t in &instances {
        assert!(t.field().order() <= 7 && t.n() <= 8 && t.k() <= 2);
        if !t.same_code() {
            distinct += 1;
        }
        let mut cases = vec![t.clone()];
        let j = rng.gen_range(0..t.n());
        let q = t.field().order() as u32;
        let mut b = t.b().to_vec();
        b[j] = t.field().add(b[j], rng.gen_range(1..q));
        cases.push(t.with_b(b).unwrap());
        for case in &cases {
            let det = verify_ccz(case, VerifyMode::deterministic()).unwrap().passed;
            let oracle = verify_ccz_exhaustive_oracle(case, ORACLE_BUDGET).unwrap();
            assert_eq!(det, oracle, "disagreement on {}", case.params());
            if oracle {
                pos += 1;
            } else {
                neg += 1;
            }
        }
    }
    assert!(instances.len() >= 20 && neg >= 5);
    format!(
        "{} instances ({distinct} with distinct codes), {pos} positive / {neg} negative, 0 disagreements",
        instances.len()
    )
}

fn c3() -> String {
    let mf5 = mf_rs(&field(5), 5, 2, 4).unwrap();
    let rm = mf_rm(&field(2), 2, 4).unwrap();
    let qu = mf_quantum(&field(8), 1, 1, 2, 4).unwrap();
    for mf in [&mf5, &rm, &qu] {
        assert!(verify_mf(mf, VerifyMode::deterministic()).unwrap().passed, "{}", mf.params());
    }
    assert!(verify_mf_exhaustive_oracle(&qu, 1 << 25).unwrap());
    for h in 0..4 {
        let c = qu.member_css(h).unwrap();
        assert_eq!(z_side(&c).min(x_side(&c)), 2);
        assert_eq!(c.distance_bruteforce(1 << 24).unwrap(), 2);
    }
    assert_eq!(qu.distance_bound(), 2);
    let shared = rm.with_shared_member(0);
    let cert = verify_mf(&shared, VerifyMode::deterministic()).unwrap();
    assert!(!cert.passed);
    assert!(!verify_mf_exhaustive_oracle(&shared, 1 << 20).unwrap());
    format!(
        "{}, {}, {} pass; quantum member distance 2; shared-member RM fails ({})",
        mf5.params(),
        rm.params(),
        qu.params(),
        cert.failure.unwrap_or_default()
    )
}

/// `B(X^i, X^l)` from Frobenius traces, or `δ_il`.
fn form_value(form: &Bilinear, i: usize, l: usize) -> u32 {
    match form {
        Bilinear::Standard => (i == l) as u32,
        Bilinear::Trace(t) => t.trace_naive(t.ext().mul(t.basis(i), t.basis(l))),
        Bilinear::BlockTrace(..) => unreachable!(),
    }
}

/// Checks `Enc_X(e_i) · Enc_Z(e_l) = B(e_i, e_l)` for canonical representatives
/// and every single-stabilizer shift on either side. Returns the pair count.
fn check_compatible(c: &CssCode, form: &Bilinear) -> usize {
    let c = c.compatible_encx(form).unwrap();
    let f = c.field().clone();
    let encx = c.encx().unwrap();
    let zs = c.z_stab();
    let mut checked = 0;
    for i in 0..c.k() {
        for l in 0..c.k() {
            let want = form_value(form, i, l);
            let x0 = encx.row(i).to_vec();
            let z0 = c.encz().row(l).to_vec();
            let mut xs = vec![x0.clone()];
            for s in zs.row_iter() {
                xs.push(x0.iter().zip(s).map(|(&a, &b)| f.add(a, b)).collect());
            }
            let mut zz = vec![z0.clone()];
            for s in c.x_stab().row_iter() {
                zz.push(z0.iter().zip(s).map(|(&a, &b)| f.add(a, b)).collect());
            }
            for x in &xs {
                assert_eq!(f.dot(x, &z0), want);
                checked += 1;
            }
            for z in &zz {
                assert_eq!(f.dot(&x0, z), want);
                checked += 1;
            }
        }
    }
    checked
}

fn c4() -> String {
    let mut standard: Vec<CssCode> = Vec::new();
    for (q, k, l) in [(5, 1, 2), (7, 1, 2), (8, 1, 2), (13, 2, 4), (16, 2, 5), (25, 2, 8)] {
        standard.push(rs_transversal(&field(q), k, l).unwrap().code(0).clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for t in tiny_instances(&mut rng, 8) {
        standard.extend(t.codes().iter().cloned());
    }
    standard.dedup();

    let mut trace: Vec<(CssCode, Bilinear)> = Vec::new();
    let mfs = [
        lift_classical(&mf_rs(&field(5), 5, 2, 4).unwrap()).unwrap(),
        lift_classical(&mf_rm(&field(2), 2, 4).unwrap()).unwrap(),
        lift_classical(&mf_rs(&field(7), 7, 3, 2).unwrap()).unwrap(),
        mf_quantum(&field(8), 2, 3, 3, 2).unwrap(),
    ];
    for mf in &mfs {
        for h in 0..mf.m() {
            trace.push((mf.member_css(h).unwrap(), Bilinear::Trace(mf.tower().clone())));
        }
    }
    for (q, k) in [(2u64, 3usize), (3, 2), (4, 2), (5, 3)] {
        let f = field(q);
        let tower = Tower::new(&f, k).unwrap();
        let enc = random_full_rank(&f, k, k + 3, &mut rng);
        trace.push((CssCode::from_classical(&enc).unwrap(), Bilinear::Trace(tower)));
    }
    assert!(standard.len() >= 10 && trace.len() >= 10);
    let mut pairs = 0;
    for c in &standard {
        pairs += check_compatible(c, &Bilinear::Standard);
    }
    for (c, form) in &trace {
        pairs += check_compatible(c, form);
    }
    format!(
        "{} codes (standard form), {} codes (trace form), {pairs} pairings exact",
        standard.len(),
        trace.len()
    )
}

fn q5_input() -> DiamondInput {
    let mf = lift_classical(&mf_rs(&field(5), 5, 2, 4).unwrap()).unwrap();
    let base = rs_transversal(mf.tower().ext(), 2, 8).unwrap();
    DiamondInput {
        mf,
        triple: base,
        r: 1,
    }
}

fn c5() -> String {
    let input = q5_input();
    let (t, _) = diamond_parts(&input).unwrap();
    assert_eq!((t.n(), t.k(), t.field().order()), (115, 2, 5));
    assert!(t.same_code());
    let claim = t.distance().unwrap();
    assert_eq!((claim.value, claim.kind), (7, ClaimKind::Bound));
    assert_eq!(claim.source, PRODUCT_BOUND);
    let ccz = verify_ccz(&t, VerifyMode::deterministic()).unwrap();
    assert!(ccz.passed);
    let u = derive_u_certificate(&t, &ccz, 1 << 24).unwrap();
    assert!(u.passed);
    // log(n/k)/log(d) with n/k = 57.5, d = 7 is 2.0822056; the figure 2.081
    // quoted alongside this formula is an arithmetic slip.
    let g = triple_gamma(&t).unwrap();
    let expected = (57.5f64).ln() / 7f64.ln();
    assert!((g - expected).abs() < 1e-9);
    assert_eq!(gamma_exponent(115, 2, 7).unwrap(), g);
    format!(
        "{}; {}; {}; γ = log(57.5)/log(7) = {g:.7} (|Δ| < 1e-9; quoted 2.081 ± 0.001 is off by {:.4}, see decisions ledger)",
        t.params(),
        ccz.summary(),
        u.summary(),
        (g - 2.081).abs()
    )
}

fn desk_schedule() -> Schedule {
    Schedule {
        q: 2,
        levels: vec![
            Level {
                q: 2,
                family: MfFamily::Rm { k: 2 },
                r: 1,
            },
            Level {
                q: 4,
                family: MfFamily::Rm { k: 2 },
                r: 1,
            },
        ],
        base: Some(BaseParams { q: 16, k: 2, l: 5 }),
    }
}

fn c6() -> String {
    let shipped: Schedule = serde_json::from_str(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../schedules/desk-q2.json"))
            .unwrap(),
    )
    .unwrap();
    assert_eq!(shipped, desk_schedule());
    let out = run_schedule(&desk_schedule()).unwrap();
    let t = &out.triple;
    assert_eq!((t.n(), t.k(), t.field().order()), (57344, 2, 2));
    let claim = t.distance().unwrap();
    assert_eq!((claim.value, claim.kind), (4, ClaimKind::Bound));
    let cert = verify_ccz(t, VerifyMode::randomized(1000, 0x5eed)).unwrap();
    assert!(cert.passed, "{}", cert.summary());

    // A coordinate in the support of all three Q_Z, so the perturbation is a
    // genuine fault: the cubic form changes by δ·v¹_j v²_j v³_j ≢ 0.
    let j = (0..t.n())
        .find(|&j| (0..3).all(|h| t.code(h).qz().col(j).iter().any(|&x| x != 0)))
        .unwrap();
    let mut b = t.b().to_vec();
    b[j] = t.field().add(b[j], 1);
    let faulty = t.with_b(b).unwrap();
    let detected = (0..50u64)
        .filter(|&seed| !verify_ccz(&faulty, VerifyMode::randomized(1000, seed)).unwrap().passed)
        .count();
    assert!(detected * 100 >= 99 * 50, "detected in {detected}/50 trials");
    format!(
        "{}; {}; planted fault at coordinate {j} detected in {detected}/50 seeds",
        t.params(),
        cert.summary()
    )
}

fn c7() -> String {
    let input = q5_input();
    let (t, parts) = diamond_parts(&input).unwrap();
    let audit = audit_chain(&input, &t, &parts, 1 << 24).unwrap();
    assert!(audit.passed(), "{audit:?}");
    assert!(audit.combinations >= 8);
    format!(
        "{} combinations over the 8 logical basis triples, link failures {:?}, degree violations {}, membership failures {}",
        audit.combinations, audit.link_failures, audit.degree_violations, audit.membership_failures
    )
}

fn c8() -> String {
    let dir = tempfile::tempdir().unwrap();
    let t = rs_transversal(&field(25), 2, 8).unwrap();
    let objects = vec![
        Object::LinearCode(rs_code(&field(7), &all_points(&field(7)), 3).unwrap()),
        Object::CssCode(t.code(0).clone()),
        Object::TransversalTriple(t.clone()),
        Object::MfCollection(mf_quantum(&field(8), 1, 1, 2, 4).unwrap()),
        Object::PipelineOutput(run_schedule(&desk_schedule()).unwrap()),
    ];
    let mut kinds = Vec::new();
    for (i, o) in objects.into_iter().enumerate() {
        let cert = o
            .triple()
            .map(|t| verify_ccz(t, VerifyMode::randomized(20, 1)).unwrap());
        let mut b = Bundle::new(o, serde_json::json!({"index": i}));
        if let Some(c) = cert {
            b = b.with_certificate(c);
        }
        let p1 = dir.path().join(format!("{i}.json"));
        let p2 = dir.path().join(format!("{i}.again.json"));
        b.save(&p1).unwrap();
        Bundle::load(&p1).unwrap().save(&p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        kinds.push(b.kind());
    }

    // Corruption: an X-stabilizer outside Q_Z.
    let css = Bundle::new(Object::CssCode(t.code(0).clone()), Value::Null);
    let mut v: Value = serde_json::from_str(&css.to_json().unwrap()).unwrap();
    let qz = t.code(0).qz().rref();
    let n = t.n();
    let outside = (0..n)
        .map(|j| {
            let mut e = vec![0u32; n];
            e[j] = 1;
            e
        })
        .find(|e| !qz.contains(e))
        .unwrap();
    v["payload"]["x_stab"]["rows"] = serde_json::json!([outside]);
    let err = Bundle::from_json(&v.to_string()).unwrap_err();
    assert!(matches!(err, Error::InvalidCode(_)), "{err}");

    // Corruption: a symbol outside the field.
    let mut v: Value = serde_json::from_str(&css.to_json().unwrap()).unwrap();
    v["payload"]["encz"]["rows"][0][0] = serde_json::json!(25);
    assert!(Bundle::from_json(&v.to_string()).is_err());
    format!("byte-identical round trip for {}; corrupted bundles rejected ({err})", kinds.join(", "))
}

type Criterion = (u32, &'static str, fn() -> String, Duration);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        (1, "Reed-Solomon instances", c1, Duration::from_secs(60)),
        (2, "oracle equivalence", c2, Duration::from_secs(120)),
        (3, "multiplication-friendly suite", c3, Duration::from_secs(120)),
        (4, "encoder compatibility", c4, Duration::from_secs(120)),
        (5, "q = 5 end to end", c5, Duration::from_secs(300)),
        (6, "q = 2 end to end", c6, Duration::from_secs(1800)),
        (7, "reduction chain audit", c7, Duration::from_secs(300)),
        (8, "serialization", c8, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    let mut lines = String::from("\nacceptance\n");
    for (id, name, run, limit) in criteria {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run));
        let el = t0.elapsed();
        let line = match res {
            Ok(detail) if el <= limit => {
                format!("criterion {id} PASS {name} [{el:.1?} ≤ {limit:?}]: {detail}")
            }
            Ok(detail) => {
                failed.push(id);
                format!("criterion {id} FAIL {name}: runtime {el:.1?} > {limit:?}: {detail}")
            }
            Err(e) => {
                failed.push(id);
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                format!("criterion {id} FAIL {name}: {msg}")
            }
        };
        lines.push_str(&line);
        lines.push('\n');
    }
    // Direct write: libtest captures print!/eprint! but not the raw handle.
    let _ = std::io::stderr().write_all(lines.as_bytes());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
