//! End-to-end acceptance run: one line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use chow_cli::schema::validate_report;
use chow_cli::session::run_script;
use chow_core::chern::{dual, tensor_line, whitney_quotient, Bundle};
use chow_core::grasstower::{extend, oracle, PresentedRing, TowerLevel};
use chow_core::polyring::{Poly, Ring, VarTable};
use chow_core::so4pipeline::{
    assemble_presentation, build_geometry, enumerate_structure, divisor_lattice_check, mod_j, names,
    presentation_ring, run_all, Config, Geometry, DivisorData, Report, Status, TWISTS,
};
use chow_core::zgraded::{primitive, GradedIdeal};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRINTED_PUSHES: [&str; 6] = [
    "13*c1 - 2*f1",
    "0",
    "-2*f3",
    "c3 - f3",
    "(c2-f2)^2 - 4*c4",
    "c2*f3 + f2*c3",
];
const FINAL_IDEAL: [&str; 6] = ["c1", "f1", "2*c3", "c3 - f3", "(c2-f2)^2 - 4*c4", "(c2-f2)*c3"];

struct Ctx {
    geo: Geometry,
    report: Report,
}

/// Outcome of one criterion: pass flag plus detail lines.
type Verdict = Result<(bool, Vec<String>), String>;
type Criterion = fn(&Ctx) -> Verdict;

fn p(ring: &Ring, s: &str) -> Result<Poly, String> {
    Poly::parse(ring, s).map_err(|e| format!("{s}: {e}"))
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn report_status(r: &Report, name: &str) -> Status {
    r.check(name).map_or(Status::Fail, |c| c.status)
}

fn criterion_1(cx: &Ctx) -> Verdict {
    let ring = cx.geo.y.ring();
    let y = cx.geo.class_y().map_err(e)?;
    let factor = cx.geo.class_g2e_factor().map_err(e)?;
    let want_y = p(ring, "-f3 + (c1-b1)*f2 - (c1-b1)^2*f1 + (c1-b1)^3")?;
    let want_f = p(ring, "b1^2 - c1*b1 + c1^2 - 2*c1*f1 + f1^2 - f2 + 2*c2")?;
    let ok = y == want_y && factor == want_f;
    Ok((ok, vec![format!("[Y] = {y}"), format!("factor = {factor}")]))
}

fn computed_pushes(cx: &Ctx) -> Result<Vec<Poly>, String> {
    let g2e = cx.geo.class_g2e().map_err(e)?;
    TWISTS
        .iter()
        .map(|t| cx.geo.pushforward(&g2e, t).map_err(e))
        .collect()
}

fn criterion_2(cx: &Ctx) -> Verdict {
    let ring = cx.geo.g3.ring();
    let mut ok = true;
    let mut lines = Vec::new();
    for (i, (raw, printed)) in computed_pushes(cx)?.iter().zip(PRINTED_PUSHES).enumerate() {
        let got = if i == 0 { raw.clone() } else { mod_j(raw).map_err(e)? };
        let want = p(ring, printed)?;
        let hit = got == want;
        ok &= hit;
        lines.push(format!(
            "{} {}: computed {got}, printed {want}",
            if hit { "match" } else { "DIFFERS" },
            TWISTS[i]
        ));
    }
    Ok((ok, lines))
}

fn criterion_3(cx: &Ctx) -> Verdict {
    let ring = cx.geo.g3.ring();
    let ideal = GradedIdeal::new(
        ring,
        FINAL_IDEAL.iter().map(|g| p(ring, g)).collect::<Result<_, _>>()?,
    )
    .map_err(e)?;
    let printed = [
        "(c2-f2)^2 - 4*c4",
        "2*f2*f3 - 2*c2*f3",
        "f2*(-(c2-f2)^2 + 4*c4) + f3^2 - c3^2",
    ];
    let mut ok = true;
    let mut lines = Vec::new();
    for (t, want) in cx.geo.t_relations().iter().zip(printed) {
        let reduced = mod_j(t).map_err(e)?;
        let same = reduced == p(ring, want)?;
        let member = match ideal.member(t).map_err(e)? {
            Some(cert) => cert.verify(&ideal, t),
            None => false,
        };
        ok &= same && member;
        lines.push(format!("mod J {reduced}: printed {same}, certified member {member}"));
    }
    Ok((ok, lines))
}

fn criterion_4(cx: &Ctx) -> Verdict {
    let ring = cx.geo.g3.ring();
    let mut gens = computed_pushes(cx)?;
    gens.push(p(ring, "c1")?);
    gens.push(p(ring, "f1")?);
    let pushed = GradedIdeal::new(ring, gens).map_err(e)?;
    let six = GradedIdeal::new(
        ring,
        FINAL_IDEAL.iter().map(|g| p(ring, g)).collect::<Result<_, _>>()?,
    )
    .map_err(e)?;
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, big, small) in [("six in pushed", &pushed, &six), ("pushed in six", &six, &pushed)] {
        let c = big.contains(small, 8).map_err(e)?;
        let certified = c
            .certificates
            .iter()
            .all(|(i, cert)| cert.verify(big, &small.generators()[*i]));
        let complete = c.certificates.len() == small.generators().len() && c.skipped.is_empty();
        ok &= c.holds && certified && complete;
        lines.push(format!(
            "{label}: holds {}, {} certificates verified {certified}",
            c.holds,
            c.certificates.len()
        ));
    }
    Ok((ok, lines))
}

fn criterion_5(_: &Ctx) -> Verdict {
    let prim = primitive(&[BigInt::from(13), BigInt::from(-2)]).map_err(e)?;
    let out = divisor_lattice_check(&DivisorData::new(13, -2)).map_err(e)?;
    let ok = prim
        && out.f1_pullback == BigInt::from(26)
        && out.image_index == BigInt::from(2)
        && out.n_generates;
    Ok((ok, vec![format!("(13,-2) primitive {prim}; {out}")]))
}

fn criterion_6(cx: &Ctx) -> Verdict {
    let reduced = computed_pushes(cx)?
        .iter()
        .map(|q| mod_j(q).map_err(e))
        .collect::<Result<Vec<_>, _>>()?;
    let pres = assemble_presentation(&reduced, 10).map_err(e)?;
    let ring = presentation_ring(10).map_err(e)?;
    let shown: BTreeSet<String> = pres.relations.iter().map(ToString::to_string).collect();
    let mut want = BTreeSet::new();
    for r in ["c1", "2*c3", "x*c3", "x^2 - 4*c4"] {
        let q = p(&ring, r)?;
        want.insert(q.to_string());
        want.insert((-q).to_string());
    }
    let relations_ok = shown.len() == 4 && shown.iter().all(|s| want.contains(s));
    let listed = ["Z", "0", "Z^2", "Z/2", "Z^3", "Z/2", "Z^4 + Z/2"];
    let mut groups_ok = true;
    let mut pieces = Vec::new();
    for (d, want) in listed.iter().enumerate() {
        let got = pres.ideal.quotient_structure(d as u32).map_err(e)?;
        groups_ok &= got.to_string() == *want && got == enumerate_structure(d as u32);
        pieces.push(format!("A{d}={got}"));
    }
    let ok = relations_ok && groups_ok && report_status(&cx.report, names::STRUCTURE) == Status::Pass;
    Ok((
        ok,
        vec![
            format!("relations {}", pres.relations.iter().map(e).collect::<Vec<_>>().join(", ")),
            pieces.join(", "),
        ],
    ))
}

fn criterion_7(cx: &Ctx) -> Verdict {
    let f2 = cx.report.check(names::RULING_F2).ok_or("missing check")?;
    let x = cx.report.check(names::RULING_X).ok_or("missing check")?;
    let ok = f2.status == Status::Pass && x.status == Status::Pass;
    Ok((
        ok,
        vec![
            format!("f2~ = {} (want {})", f2.computed, f2.expected),
            format!("c2 - f2~ = {} (want {})", x.computed, x.expected),
        ],
    ))
}

// Property suites.

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_homogeneous(ring: &Ring, d: u32, terms: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut out = Poly::zero(ring);
    for m in ring.monomials(d).choose_multiple(rng, terms) {
        out = &out + &Poly::from_terms(ring, [(m.clone(), BigInt::from(rng.gen_range(-9i64..=9)))]);
    }
    out
}

fn random_bundle(ring: &Ring, rank: usize, rng: &mut ChaCha8Rng) -> Result<Bundle, String> {
    let mut classes = vec![Poly::one(ring)];
    for i in 1..=rank {
        classes.push(random_homogeneous(ring, i as u32, 3, rng));
    }
    Bundle::new(rank, classes).map_err(e)
}

fn distinct_roots(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigInt> {
    let mut roots = Vec::new();
    while roots.len() < n {
        let r = BigInt::from(rng.gen_range(-25i64..=25));
        if !roots.contains(&r) {
            roots.push(r);
        }
    }
    roots
}

fn g24() -> Result<TowerLevel, String> {
    let base = PresentedRing::point(10);
    extend(&base, &Bundle::trivial(base.ring(), 4), 2, "b").map_err(e)
}

fn g2s() -> Result<TowerLevel, String> {
    let ring = VarTable::new(VarTable::chern_vars("c", 4), 10).map_err(e)?;
    let s = Bundle::from_vars(&ring, "c", 4).map_err(e)?;
    extend(&PresentedRing::free(&ring), &s, 2, "b").map_err(e)
}

fn criterion_8(_: &Ctx) -> Verdict {
    let mut r = rng(8);
    let mut lines = Vec::new();
    let mut ok = true;

    let ring = VarTable::new(
        [("c1", 1), ("c2", 2), ("c3", 3), ("c4", 4), ("b1", 1), ("b2", 2)]
            .iter()
            .map(|(n, d)| (n.to_string(), *d)),
        10,
    )
    .map_err(e)?;
    let mut bundle_fail = 0;
    for _ in 0..20 {
        let a = random_bundle(&ring, r.gen_range(1..=3), &mut r)?;
        let q = random_bundle(&ring, r.gen_range(1..=3), &mut r)?;
        let total = Bundle::from_total(a.rank() + q.rank(), &(&a.total() * &q.total())).map_err(e)?;
        let l = random_homogeneous(&ring, 1, 2, &mut r);
        let back = tensor_line(&tensor_line(&a, &l).map_err(e)?, &-l.clone()).map_err(e)?;
        let good = whitney_quotient(&total, &a, None).map_err(e)? == q
            && back == a
            && dual(&dual(&a)) == a;
        bundle_fail += usize::from(!good);
    }
    ok &= bundle_fail == 0;
    lines.push(format!("Whitney/twist/dual on 20 random bundles: {bundle_fail} failures"));

    let (g24, g2s) = (g24()?, g2s()?);
    let mut oracle_fail = 0;
    for level in [&g24, &g2s] {
        let chern: Vec<&str> = if level.base().ring().is_empty() {
            vec![]
        } else {
            vec!["c1", "c2", "c3", "c4"]
        };
        for _ in 0..20 {
            let d = r.gen_range(0..=8);
            let cls = random_homogeneous(level.ring(), d, 4, &mut r);
            let pushed = level.gysin(&cls).map_err(e)?;
            for _ in 0..10 {
                let roots = distinct_roots(&mut r, 4);
                let none = HashMap::new();
                let lhs = oracle::symmetrization(&cls, &["b1", "b2"], &chern, &roots, &none);
                let agree = if chern.is_empty() {
                    // Over a point only the constant part of the sum survives:
                    // above the fiber dimension the sum is a positive-degree
                    // function of the roots and the pushforward is zero.
                    let value = BigRational::from_integer(pushed.constant_term());
                    if d <= 4 {
                        lhs == value
                    } else {
                        pushed.is_zero()
                    }
                } else {
                    lhs == oracle::evaluate_base(&pushed, &chern, &roots, &none)
                };
                oracle_fail += usize::from(!agree);
            }
        }
    }
    ok &= oracle_fail == 0;
    lines.push(format!(
        "Gysin vs fixed-point oracle, 2 x 20 classes x 10 specializations: {oracle_fail} disagreements"
    ));

    let mut proj_fail = 0;
    let base = g2s.base().ring().clone();
    for _ in 0..20 {
        let a = random_homogeneous(&base, r.gen_range(0..=3), 3, &mut r);
        let cls = random_homogeneous(g2s.ring(), r.gen_range(3..=6), 4, &mut r);
        let lhs = g2s.gysin(&(&a.embed(g2s.ring()).map_err(e)? * &cls)).map_err(e)?;
        let rhs = &a * &g2s.gysin(&cls).map_err(e)?;
        proj_fail += usize::from(lhs != rhs);
    }
    ok &= proj_fail == 0;
    lines.push(format!("projection formula on 20 pairs: {proj_fail} failures"));

    let b2 = g24.gysin(&p(g24.ring(), "b2^2")?).map_err(e)?;
    let b1 = g24.gysin(&p(g24.ring(), "b1^4")?).map_err(e)?;
    let integrals = b2.constant_term() == BigInt::from(1) && b1.constant_term() == BigInt::from(2);
    ok &= integrals;
    lines.push(format!("integrals over G(2,4): b2^2 -> {b2}, b1^4 -> {b1}"));

    let mut cert_fail = 0;
    for _ in 0..20 {
        let gens: Vec<Poly> = (0..3)
            .map(|_| {
                let d = r.gen_range(1..=3);
                random_homogeneous(&ring, d, 3, &mut r)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        let ideal = GradedIdeal::new(&ring, gens.clone()).map_err(e)?;
        let target = gens.iter().fold(Poly::zero(&ring), |acc, g| {
            let d = 6 - g.degree().unwrap_or(0);
            &acc + &(g * &random_homogeneous(&ring, d, 2, &mut r))
        });
        let good = match ideal.member(&target).map_err(e)? {
            Some(cert) => cert.recombine(&ideal) == target,
            None => false,
        };
        cert_fail += usize::from(!good);
    }
    ok &= cert_fail == 0;
    lines.push(format!("membership certificates on 20 random members: {cert_fail} failures"));
    Ok((ok, lines))
}

fn criterion_9(cx: &Ctx) -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_chow"))
        .args(["verify-so4", "--format", "json"])
        .env_remove("CHOW_DEGREE_BOUND")
        .output()
        .map_err(e)?;
    let code = out.status.code();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(e)?;
    let schema = validate_report(&json);
    let mut lines = vec![
        format!("verify-so4 --format json exit code {code:?}"),
        format!("schema validation: {}", schema.clone().err().unwrap_or_else(|| "ok".into())),
    ];

    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/so4.chow");
    let t = run_script(&fs::read_to_string(script).map_err(e)?, 10).map_err(e)?;
    let ring = cx.geo.g3.ring();
    let mut dsl_ok = true;
    let mut printed_ok = true;
    for (i, raw) in computed_pushes(cx)?.iter().enumerate() {
        let (name, value) = if i == 0 {
            ("Q0".to_string(), raw.clone())
        } else {
            (format!("P{i}"), mod_j(raw).map_err(e)?)
        };
        let shown = t.value_of(&name).unwrap_or("<missing>");
        dsl_ok &= shown == value.to_string();
        printed_ok &= shown == p(ring, PRINTED_PUSHES[i])?.to_string();
    }
    lines.push(format!(
        "eval so4.chow: agrees with the pipeline {dsl_ok}, equals the printed values {printed_ok}"
    ));
    let ok = code == Some(0) && schema.is_ok() && dsl_ok && printed_ok;
    Ok((ok, lines))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cx = Ctx {
        geo: build_geometry(10).expect("geometry builds"),
        report: run_all(&Config::default()),
    };
    let criteria: [(&str, Criterion); 9] = [
        ("exact classes [Y] and [G(2,E)] factor", criterion_1),
        ("six pushforwards against the printed list", criterion_2),
        ("t4, t5, t6 mod J and certified membership", criterion_3),
        ("ideal identity through degree 8, both containments", criterion_4),
        ("divisor lattice check on (13, -2)", criterion_5),
        ("presentation relations and graded structure", criterion_6),
        ("ruling symmetry", criterion_7),
        ("property suites", criterion_8),
        ("command line: verify-so4 json and so4.chow", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, lines) = match run(&cx) {
            Ok(v) => v,
            Err(msg) => (false, vec![format!("error: {msg}")]),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {}: {} {title} ({} ms)",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            t.elapsed().as_millis()
        );
        for l in lines {
            println!("    {l}");
        }
    }
    println!(
        "acceptance: {} of 9 criteria pass ({} ms)",
        9 - failed,
        start.elapsed().as_millis()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
