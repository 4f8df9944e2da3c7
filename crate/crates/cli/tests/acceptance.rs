//! One line per acceptance criterion; exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};

use skein_core::axioms::{self, ProductTable};
use skein_core::campaign::{self, Options, Report};
use skein_core::dmod::{self, DMorphism};
use skein_core::homlab;
use skein_core::models::{self, SkeinFixtures, SkeinIndex, Table, Transcription};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn require(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn checks_pass(report: &Report, prefixes: &[&str]) -> Result<usize, String> {
    let selected: Vec<_> = report
        .checks
        .iter()
        .filter(|c| prefixes.iter().any(|p| c.id == *p || c.id.starts_with(&format!("{p}."))))
        .collect();
    require(!selected.is_empty(), format!("no checks under {prefixes:?}"))?;
    if let Some(c) = selected.iter().find(|c| c.status != campaign::Status::Pass) {
        return Err(format!("{}: {}", c.id, c.witness.clone().unwrap_or_default()));
    }
    Ok(selected.len())
}

fn algebra() -> Outcome {
    let fx = SkeinFixtures::standard();
    let t = ProductTable::new(&fx.alg);
    require(t.len() == 430, format!("{} generators", t.len()))?;
    for (name, r) in [
        ("d²", axioms::d_squared(&t)),
        ("Leibniz", axioms::leibniz(&fx.alg, &t)),
        ("associativity", axioms::associativity(&fx.alg, &t)),
        ("idempotents", axioms::idempotent_laws(&fx.alg)),
    ] {
        require(r.passed(), format!("{name}: {}", r.first().unwrap_or_default()))?;
    }
    Ok(format!("430 generators, {} compatible pairs", t.compatible_pairs()))
}

fn modules(fx: &SkeinFixtures) -> Outcome {
    for k in SkeinIndex::ALL {
        let r = dmod::structure_check(&fx.alg, fx.bsd(k));
        require(r.passed(), format!("BSD(B_{k}): {}", r.first().unwrap_or_default()))?;
    }
    Ok("δ²-equation holds for BSD(B_1), BSD(B_infty), BSD(B_0)".into())
}

fn triangle(fx: &SkeinFixtures) -> Outcome {
    let report = homlab::verify_triangle(&fx.alg, &campaign::triangle_data(fx));
    require(report.passed(), format!("conditions {:?} fail", report.failed_conditions()))?;
    let t = Transcription::standard();
    let mut caught = 0;
    for (i, (table, _)) in t.rows.iter().enumerate() {
        if matches!(table, Table::Delta(_)) {
            continue;
        }
        let broken = SkeinFixtures::build(&t.without_row(i)).map_err(|e| e.to_string())?;
        let r = homlab::verify_triangle(&broken.alg, &campaign::triangle_data(&broken));
        require(!r.passed(), format!("deleting row {i} ({table}) is not detected"))?;
        caught += 1;
    }
    Ok(format!("9 identities exact; {caught}/{caught} single-term deletions detected"))
}

fn equivalence(fx: &SkeinFixtures) -> Outcome {
    let alg = &fx.alg;
    let data = campaign::triangle_data(fx);
    for k in SkeinIndex::ALL {
        let eq = homlab::skein_equivalence(alg, &data, k).map_err(|e| format!("k={k}: {e}"))?;
        require(dmod::morphism_boundary(alg, &eq.g).is_zero(), format!("k={k}: ∂G ≠ 0"))?;
        require(dmod::morphism_boundary(alg, &eq.psi).is_zero(), format!("k={k}: ∂Ψ ≠ 0"))?;
        let psi_g = dmod::compose(alg, &eq.psi, &eq.g).map_err(|e| e.to_string())?;
        require(psi_g == DMorphism::identity(fx.bsd(k).clone()), format!("k={k}: ΨG ≠ Id"))?;
        let g_psi = dmod::compose(alg, &eq.g, &eq.psi).map_err(|e| e.to_string())?;
        let lhs = dmod::morphism_boundary(alg, &eq.h).add(&g_psi).map_err(|e| e.to_string())?;
        require(lhs == DMorphism::identity(eq.cone.clone()), format!("k={k}: ∂H ≠ GΨ + Id"))?;
    }
    Ok("G, Ψ, H certified for k = 1, infty, 0".into())
}

fn gradings(fx: &SkeinFixtures, report: &Report) -> Outcome {
    let n = checks_pass(
        report,
        &[
            "grading.table",
            "grading.table-skein",
            "grading.periodic-domain",
            "grading.connecting-y2",
            "grading.graded",
            "grading.derived",
        ],
    )?;
    let expected = [
        ("x", [0, 0, 0, 0]),
        ("y1", [0, 0, 0, 1]),
        ("y2", [0, -1, 0, 0]),
        ("y3", [0; 4]),
        ("z1", [0; 4]),
        ("z2", [0; 4]),
    ];
    for (name, coords) in expected {
        let k = match &name[..1] {
            "x" => SkeinIndex::One,
            "y" => SkeinIndex::Infty,
            _ => SkeinIndex::Zero,
        };
        require(fx.gradings(k).grades.get(name) == Some(&coords.to_vec()), format!("grading of {name}"))?;
    }
    Ok(format!("19 element gradings and 6 generator gradings reproduced ({n} checks)"))
}

fn shifts(fx: &SkeinFixtures, report: &Report) -> Outcome {
    checks_pass(report, &["shift"])?;
    let r = fx.refinement.as_ref().map_err(|e| e.to_string())?;
    let mut found = Vec::new();
    for k in [SkeinIndex::Zero, SkeinIndex::One, SkeinIndex::Infty] {
        let s = dmod::morphism_shift(&fx.alg, &fx.skein_map(k), fx.gradings(k), fx.gradings(k.succ()), r, &fx.basis)
            .map_err(|e| e.to_string())?;
        found.push(s);
    }
    require(found == [Some(-1), Some(0), Some(0)], format!("shifts {found:?}"))?;
    Ok("(f0, f1, finfty) = (-1, 0, 0); every part homogeneous".into())
}

fn lattice(fx: &SkeinFixtures) -> Outcome {
    let expected =
        [("meridional", ["Z + Z", "Z + Z + Z", "Z + Z", "Z"]), ("torsion", ["Z + Z/2", "Z + Z/18", "Z + Z/12", "Z/6"])];
    for (ex, (name, shown)) in models::lattice_examples().iter().zip(expected) {
        require(ex.name == name, format!("example {}", ex.name))?;
        let mut got: Vec<String> = SkeinIndex::ALL
            .iter()
            .map(|k| ex.quotient(fx.stabilizer(*k)).map(|q| q.to_string()).unwrap_or_default())
            .collect();
        got.push(ex.quotient(&models::skein_relators()).map(|q| q.to_string()).unwrap_or_default());
        require(got == shown, format!("{name}: {got:?}"))?;
    }
    Ok("both examples exact".into())
}

fn pairing(report: &Report) -> Outcome {
    checks_pass(report, &["pairing.box", "pairing.cone", "pairing.chain-map"])?;
    Ok("∂² = 0 on 82, 262, 180 generators; cones agree entrywise".into())
}

fn standalone() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_skeinctl");
    let run = |args: &[&str]| Command::new(bin).args(args).output().map_err(|e| e.to_string());
    let clean = run(&["verify"])?;
    require(clean.status.code() == Some(0), "clean verify does not exit 0")?;
    let names = String::from_utf8(run(&["verify", "--list-mutations"])?.stdout).map_err(|e| e.to_string())?;
    let names: Vec<&str> = names.lines().collect();
    require(names.len() >= 20, format!("only {} mutation cases", names.len()))?;
    for name in &names {
        let out = run(&["verify", "--mutate", name])?;
        require(out.status.code() == Some(1), format!("{name}: exit {:?}", out.status.code()))?;
    }
    Ok(format!("clean run exits 0; {} mutations each exit 1", names.len()))
}

fn main() -> ExitCode {
    let fx = SkeinFixtures::standard();
    let report = campaign::verify_all(&Options::default());
    let criteria: Vec<Criterion> = vec![
        ("algebra axioms", Box::new(algebra)),
        ("module fixtures", Box::new(|| modules(&fx))),
        ("skein triangle", Box::new(|| triangle(&fx))),
        ("cone equivalence", Box::new(|| equivalence(&fx))),
        ("gradings", Box::new(|| gradings(&fx, &report))),
        ("graded shifts", Box::new(|| shifts(&fx, &report))),
        ("lattice examples", Box::new(|| lattice(&fx))),
        ("pairing", Box::new(|| pairing(&report))),
        ("standalone property suite", Box::new(standalone)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("acceptance {}: PASS  {name}: {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {}: FAIL  {name}: {why}", n + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
