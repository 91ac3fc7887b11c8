//! Acceptance criteria, one line per criterion.
//!
//! Run with `cargo test -p folidx --test acceptance`.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use folidx::arith::{cotangent_pair_sum, dedekind_sum, LensTable, COTANGENT_TOLERANCE};
use folidx::catalog::{builtin_example, builtin_names, builtin_source};
use folidx::cohomology::{basic_euler_oracle, carriere_basic_betti, FlatCircleBundle};
use folidx::eta::{
    blowup_defect_check, transverse_signature, transverse_signature_original, SignatureProblem,
};
use folidx::group::{exterior_power_action, isotypic_multiplicity, CyclicGroup, IntMatrix};
use folidx::strata::{
    beta_coefficient, gauss_bonnet, h_de_rham, leaf_closure_euler, rep_valued_gauss_bonnet,
    SphereRepresentation,
};
use folidx::{LensDatum, Rational};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    ensure(got == want, format!("{what}: got {got:?}, want {want:?}"))
}

fn oracle_euler(name: &str) -> Result<(i64, Vec<u64>), String> {
    let doc = builtin_example(name).ok_or("missing example")?;
    let betti = doc
        .oracle
        .as_ref()
        .ok_or("no oracle")?
        .basic_betti()
        .map_err(|e| e.to_string())?;
    Ok((basic_euler_oracle(&betti), betti.as_slice().to_vec()))
}

fn assembled(name: &str) -> Result<i64, String> {
    let doc = builtin_example(name).ok_or("missing example")?;
    gauss_bonnet(&doc.foliation().ok_or("no strata")?).map_err(|e| e.to_string())
}

fn ac1_rotation() -> Check {
    let doc = builtin_example("rotation-s2").ok_or("missing")?;
    let example = doc.foliation().ok_or("no strata")?;
    let oracle = doc.oracle.clone().ok_or("no oracle")?;
    let start = Instant::now();
    let chi = gauss_bonnet(&example).map_err(|e| e.to_string())?;
    let betti = oracle.basic_betti().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    eq("assembly", chi, 2)?;
    eq("oracle betti", betti.as_slice(), &[1, 0, 1][..])?;
    eq("oracle chi", basic_euler_oracle(&betti), 2)?;
    ensure(
        elapsed < Duration::from_millis(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("chi = 2 both ways, h1 = 0, {elapsed:?}"))
}

fn ac2_double_rotation() -> Check {
    let (chi, betti) = oracle_euler("double-rotation-s1xs2")?;
    eq("oracle betti", betti, vec![1, 1, 1, 1])?;
    eq("oracle chi", chi, 0)?;
    eq("assembly", assembled("double-rotation-s1xs2")?, 0)?;
    Ok("betti (1,1,1,1), chi = 0 both ways".into())
}

fn ac3_klein() -> Check {
    let doc = builtin_example("klein-bottle").ok_or("missing")?;
    let strata = doc.strata.as_ref().ok_or("no strata")?;
    let values: Vec<i64> = strata
        .iter()
        .map(|s| leaf_closure_euler(&s.leaf_closure, s.effective_twist()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    eq("leaf closure chi", values, vec![1, 0])?;
    for s in strata {
        ensure(
            matches!(
                s.leaf_closure,
                folidx::LeafClosureModel::SuspensionClosure { .. }
            ),
            "leaf closures must be suspension models",
        )?;
    }
    eq("assembly", assembled("klein-bottle")?, 2)?;
    let (chi, betti) = oracle_euler("klein-bottle")?;
    eq("oracle", (chi, betti), (2, vec![1, 0, 1]))?;
    Ok("leaf closures (1, 0), chi = 2*1 + (-1)*0 = 2".into())
}

fn ac4_carriere() -> Check {
    let betti = carriere_basic_betti(&FlatCircleBundle::Nontrivial).map_err(|e| e.to_string())?;
    eq("betti", betti.as_slice(), &[1, 1, 0][..])?;
    eq("oracle chi", basic_euler_oracle(&betti), 0)?;
    eq("assembly", assembled("carriere")?, 0)?;
    let (chi, _) = oracle_euler("carriere")?;
    eq("catalog oracle", chi, 0)?;
    Ok("betti (1,1,0), chi = 0*0 = 0".into())
}

fn ac5_z4() -> Check {
    let doc = builtin_example("z4-torus").ok_or("missing")?;
    let example = doc.foliation().ok_or("no strata")?;
    let g = CyclicGroup::new(4).unwrap();
    let want = [2, -1, 0, -1];
    let quarter = IntMatrix::from_rows(vec![vec![0, -1], vec![1, 0]]).unwrap();
    let action = exterior_power_action(g, &quarter);
    for (j, &w) in want.iter().enumerate() {
        let rho = g.character(j as i64);
        let via_table = rep_valued_gauss_bonnet(&example, &rho).map_err(|e| e.to_string())?;
        eq(&format!("rho_{j} assembly"), via_table, w)?;
        let mults: Vec<i64> = (0..=2)
            .map(|k| isotypic_multiplicity(&action, k, &rho).map(|m| m as i64))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let via_oracle = mults[0] - mults[1] + mults[2];
        eq(&format!("rho_{j} isotypic"), via_oracle, w)?;
    }
    // kernel spans: rho_1 and rho_3 each see one line in H^1, rho_0 sees 1 and the area form
    eq(
        "rho_1 in H^1",
        isotypic_multiplicity(&action, 1, &g.character(1)).unwrap(),
        1,
    )?;
    eq(
        "rho_0 in H^0+H^2",
        isotypic_multiplicity(&action, 0, &g.character(0)).unwrap()
            + isotypic_multiplicity(&action, 2, &g.character(0)).unwrap(),
        2,
    )?;
    Ok("chi^rho = (2, -1, 0, -1) by table and by isotypic multiplicities".into())
}

fn ac6_h_table() -> Check {
    use SphereRepresentation::*;
    let table = [
        h_de_rham(Trivial, true),
        h_de_rham(Trivial, false),
        h_de_rham(Xi, false),
        h_de_rham(Xi, true),
    ];
    eq("h table", table, [2, 1, 1, 0])?;
    eq(
        "other rep",
        (h_de_rham(Other, true), h_de_rham(Other, false)),
        (0, 0),
    )?;
    for b in [true, false] {
        eq(
            &format!("beta coefficient, preserving={b}"),
            beta_coefficient(b),
            q(1, 1),
        )?;
    }
    Ok("h = (2,1,1,0); (h(xi)+h(1))/2 = 1 in both cases".into())
}

/// Direct double-precision cotangent sum, independent of the library.
struct CotOracle {
    p: i64,
    cot: Vec<f64>,
}

impl CotOracle {
    fn new(p: i64) -> Self {
        let cot = (0..p)
            .map(|r| 1.0 / (std::f64::consts::PI * r as f64 / p as f64).tan())
            .collect();
        Self { p, cot }
    }

    fn sum(&self, m: i64, n: i64) -> f64 {
        let (mut a, mut b, mut total) = (0, 0, 0.0);
        for _ in 1..self.p {
            a += m;
            if a >= self.p {
                a -= self.p;
            }
            b += n;
            if b >= self.p {
                b -= self.p;
            }
            total += self.cot[a as usize] * self.cot[b as usize];
        }
        total
    }
}

fn ac7_eta_cross_validation() -> Check {
    let start = Instant::now();
    let mut pairs = 0usize;
    let mut worst = 0.0f64;
    for p in 2..=200i64 {
        let table = LensTable::new(p).map_err(|e| e.to_string())?;
        let oracle = CotOracle::new(p);
        let units: Vec<i64> = (1..p).filter(|u| u.gcd(&p) == 1).collect();
        for &m in &units {
            for &n in &units {
                let s = table.pair_sum(m, n).map_err(|e| e.to_string())?;
                let exact = folidx::arith::rational_to_f64(&s.exact);
                let direct = oracle.sum(m, n);
                let err = (exact - direct).abs().max((exact - s.float).abs());
                worst = worst.max(err);
                ensure(
                    err < COTANGENT_TOLERANCE,
                    format!("p={p} m={m} n={n}: exact {} vs float {direct}", s.exact),
                )?;
                pairs += 1;
            }
        }
        let closed = cotangent_pair_sum(&LensDatum::new(p, 1, 1).unwrap()).exact;
        eq(
            &format!("closed form p={p}"),
            closed,
            q((p - 1) * (p - 2), 3),
        )?;
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "{pairs} pairs, max |exact - float| = {worst:.1e}, {elapsed:?}"
    ))
}

fn ac8_reciprocity() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for h in 1..=50i64 {
        for k in 1..=50i64 {
            if h.gcd(&k) != 1 {
                continue;
            }
            let (bh, bk) = (BigInt::from(h), BigInt::from(k));
            let lhs = dedekind_sum(&bh, &bk) + dedekind_sum(&bk, &bh);
            let rhs = q(-1, 4) + (q(h, k) + q(k, h) + q(1, h * k)) / q(12, 1);
            eq(&format!("s({h},{k}) + s({k},{h})"), lhs, rhs)?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("{count} coprime pairs exact, {elapsed:?}"))
}

/// Deterministic family of problems with `p1_original - p1_blowup = 3N`.
fn synthetic_problems() -> Vec<SignatureProblem> {
    let mut out = Vec::new();
    for p in 2..=23i64 {
        let units: Vec<i64> = (1..p).filter(|u| u.gcd(&p) == 1).collect();
        for n_fixed in 0..=4usize {
            for (b_num, b_den) in [(0, 1), (3, 1), (-7, 2), (5, 3)] {
                let fixed_points = (0..n_fixed)
                    .map(|i| {
                        let m = units[(i * 3 + p as usize) % units.len()];
                        let n = units[(i * 5 + 1) % units.len()];
                        LensDatum::new(p, m, n).unwrap()
                    })
                    .collect();
                let blowup = q(b_num, b_den);
                let original = &blowup + q(3 * n_fixed as i64, 1);
                out.push(SignatureProblem {
                    p,
                    fixed_points,
                    p1_integral_blowup: blowup,
                    p1_integral_original: Some(original),
                });
            }
        }
    }
    out
}

fn ac9_signature_identity() -> Check {
    let problems = synthetic_problems();
    for pr in &problems {
        ensure(
            blowup_defect_check(pr).map_err(|e| e.to_string())?,
            format!("defect check failed for {pr:?}"),
        )?;
        let a = transverse_signature(pr).map_err(|e| e.to_string())?.value;
        let b = transverse_signature_original(pr)
            .map_err(|e| e.to_string())?
            .value;
        eq("two displays", &a, &b)?;
    }
    // a mismatched defect is caught
    let mut bad = problems
        .iter()
        .find(|p| !p.fixed_points.is_empty())
        .unwrap()
        .clone();
    bad.p1_integral_original = Some(bad.p1_integral_blowup.clone());
    ensure(
        !blowup_defect_check(&bad).unwrap(),
        "defect check accepted a bad problem",
    )?;
    let a = transverse_signature(&bad).unwrap().value;
    let b = transverse_signature_original(&bad).unwrap().value;
    ensure(!(a - b).is_zero(), "displays agree on a bad problem")?;
    Ok(format!(
        "{} synthetic problems (p1 values are synthetic inputs); both forms agree exactly",
        problems.len()
    ))
}

fn ac10_verify_catalog() -> Check {
    let bin = env!("CARGO_BIN_EXE_folidx");
    let start = Instant::now();
    let ok = Command::new(bin)
        .arg("verify-catalog")
        .env_remove("FOLIDX_CATALOG_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    eq("clean exit code", ok.status.code(), Some(0))?;
    let stdout = String::from_utf8_lossy(&ok.stdout);
    ensure(
        stdout.contains(" 0 failed"),
        format!("unexpected report:\n{stdout}"),
    )?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for name in builtin_names() {
        let mut src = builtin_source(name).unwrap().to_string();
        if name == "klein-bottle" {
            src = src.replacen("\"euler\": {\"value\": 2", "\"euler\": {\"value\": 4", 1);
        }
        std::fs::write(dir.path().join(format!("{name}.json")), src).map_err(|e| e.to_string())?;
    }
    let bad = Command::new(bin)
        .args(["verify-catalog", "--json"])
        .env("FOLIDX_CATALOG_DIR", dir.path())
        .output()
        .map_err(|e| e.to_string())?;
    eq("fault-injected exit code", bad.status.code(), Some(3))?;
    let report: serde_json::Value =
        serde_json::from_slice(&bad.stdout).map_err(|e| e.to_string())?;
    eq(
        "failing rows",
        report["summary"]["failed"].as_u64(),
        Some(1),
    )?;
    let elapsed = start.elapsed();
    Ok(format!(
        "clean run exits 0, one injected fault exits 3 with 1 failing row, {elapsed:?}"
    ))
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("AC1  rotation example", ac1_rotation),
        ("AC2  S1 x S2 example", ac2_double_rotation),
        ("AC3  Klein bottle example", ac3_klein),
        ("AC4  Carriere example", ac4_carriere),
        ("AC5  Z4 representation-valued", ac5_z4),
        ("AC6  de Rham h-table", ac6_h_table),
        ("AC7  eta cross-validation p<=200", ac7_eta_cross_validation),
        ("AC8  Dedekind reciprocity h,k<=50", ac8_reciprocity),
        ("AC9  blowup defect identity", ac9_signature_identity),
        ("AC10 verify-catalog exit codes", ac10_verify_catalog),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    let total = suite_start.elapsed();
    if total >= Duration::from_secs(10) {
        failures += 1;
        println!("FAIL suite runtime {total:?} exceeds 10 s");
    } else {
        println!("PASS suite runtime {total:?}");
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
