//! The verification campaign: every check over one transcription, merged
//! into a deterministic report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::axioms::{self, ProductTable, J_PRIME};
use crate::dmod::{self, morphism_boundary, CheckReport, DMorphism, Tensor};
use crate::homlab::{self, mor_basis, Solution, TriangleData};
use crate::lattice::GroupInvariants;
use crate::models::{self, SkeinFixtures, SkeinIndex, Transcription, GRADING_TABLE};
use crate::pairing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub claim: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    fn new(mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = checks.iter().filter(|c| c.status == Status::Pass).count();
        let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
        Report { checks, summary }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(out, "{tag}  {:<34} {}", c.id, c.claim);
            if let (Status::Fail, Some(w)) = (c.status, &c.witness) {
                let _ = writeln!(out, "      witness: {w}");
            }
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Where golden files live when no directory is given.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden")
}

/// Options for one campaign run.
#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Comma-separated id prefixes; empty runs everything.
    pub only: Option<String>,
    pub golden_dir: Option<PathBuf>,
}

impl Options {
    pub fn selects(&self, id: &str) -> bool {
        match &self.only {
            None => true,
            Some(filter) => filter
                .split(',')
                .map(str::trim)
                .filter(|f| !f.is_empty())
                .any(|f| id == f || id.starts_with(&format!("{f}.")) || f.starts_with(&format!("{id}."))),
        }
    }
}

struct Sink {
    checks: Vec<Check>,
}

impl Sink {
    fn push(&mut self, id: impl Into<String>, claim: impl Into<String>, outcome: Result<(), String>) {
        let (status, witness) = match outcome {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        self.checks.push(Check { id: id.into(), claim: claim.into(), status, witness });
    }

    fn report(&mut self, id: impl Into<String>, claim: impl Into<String>, r: &CheckReport) {
        let outcome = match r.first() {
            None => Ok(()),
            Some(first) if r.violations.len() == 1 => Err(first.to_string()),
            Some(first) => Err(format!("{first} (and {} more)", r.violations.len() - 1)),
        };
        self.push(id, claim, outcome);
    }
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

/// The check groups, in campaign order.
pub const GROUPS: [&str; 10] =
    ["algebra", "modules", "golden", "triangle", "equivalence", "mor", "grading", "shift", "lattice", "pairing"];

/// Ids and claims of every check, without running anything.
pub fn list_checks() -> Vec<(String, String)> {
    let fx = SkeinFixtures::standard();
    let mut out: Vec<(String, String)> = GROUPS.iter().flat_map(|g| static_checks(g, &fx)).collect();
    out.sort();
    out
}

fn static_checks(group: &str, fx: &SkeinFixtures) -> Vec<(String, String)> {
    let mut v: Vec<(String, String)> = Vec::new();
    let mut add = |id: String, claim: &str| v.push((id, claim.to_string()));
    let ks = SkeinIndex::ALL;
    match group {
        "algebra" => {
            add("algebra.basis-size".into(), "A(Z,5) has 430 basis generators");
            add("algebra.d-squared".into(), "d∘d = 0 on every basis generator");
            add("algebra.leibniz".into(), "Leibniz rule on every compatible pair");
            add("algebra.associativity".into(), "(ab)c = a(bc) on every compatible triple");
            add("algebra.idempotents".into(), "idempotents are orthogonal and I is a unit");
            add("algebra.digit-rule".into(), "nonzero chord words obey the digit rule");
            add("algebra.overlap-rule".into(), "123, 456, 78 vanish against chords sharing a digit");
            add("algebra.identities".into(), "displayed product and differential identities");
        }
        "modules" => {
            for k in ks {
                add(format!("modules.structure.{k}"), "type-D structure equation and idempotents");
            }
            add("modules.delta-y2".into(), "δ(y2) = 0");
            add("modules.b0-terms".into(), "BSD(B0) has five δ terms");
        }
        "golden" => {
            for name in models::golden_files(fx).keys() {
                add(format!("golden.{}", name.trim_end_matches(".json")), "transcription matches the golden fixture");
            }
        }
        "triangle" => {
            for c in 1..=3 {
                for k in ks {
                    let claim = match c {
                        1 => "∂f_k = 0",
                        2 => "f_{k+1}∘f_k + ∂φ_k = 0",
                        _ => "f_{k+2}∘φ_k + φ_{k+1}∘f_k + ∂κ_k = Id",
                    };
                    add(format!("triangle.cond{c}.{k}"), claim);
                }
            }
            add("triangle.sample".into(), "∂f∞,0 vanishes at y1, term by term");
            for k in ks {
                add(format!("triangle.id-essential.{k}"), "Id is not a boundary in Mor(M, M)");
            }
        }
        "equivalence" => {
            for k in ks {
                add(format!("equivalence.{k}"), "BSD(B_k) ≃ Cone(f_{k+1}) with certified G, Ψ, H");
            }
        }
        "mor" => {
            add("mor.d-squared".into(), "∂² = 0 on Mor between every pair of modules");
            add("mor.decompose".into(), "all map and homotopy parts expand in the elementary basis");
        }
        "grading" => {
            add("grading.table".into(), "nineteen refined gradings of algebra elements");
            add("grading.table-skein".into(), "skein reduction of the nineteen gradings");
            add("grading.periodic-domain".into(), "periodic domain of B1 has refined grading −A2−A3");
            add("grading.connecting-y2".into(), "connecting class y2 → y3 agrees with the δ-shift");
            for k in ks {
                add(format!("grading.graded.{k}"), "δ lowers the refined grading by λ modulo the stabilizer");
            }
            for k in ks {
                add(format!("grading.derived.{k}"), "generator gradings follow from δ and the base generator");
            }
            add("grading.generators-skein".into(), "all six generators have skein grading 0");
        }
        "shift" => {
            for k in ks {
                add(format!("shift.f{k}"), "skein-graded shift of f_k");
                for i in [0, 1] {
                    add(format!("shift.f{k}.{i}"), "each part is homogeneous with the map's shift");
                }
                add(format!("shift.phi{k}"), "skein-graded shift of φ_k");
            }
        }
        "lattice" => {
            for ex in models::lattice_examples() {
                for k in ks {
                    add(format!("lattice.{}.{k}", ex.name), "quotient by base and side stabilizers");
                }
                add(format!("lattice.{}.sk", ex.name), "quotient by base stabilizer and A1, A2, A3");
            }
        }
        "pairing" => {
            add("pairing.dg-relations".into(), "regular module satisfies the DG relations");
            for k in ks {
                add(format!("pairing.box.{k}"), "∂² = 0 on A ⊠ BSD(B_k)");
                add(format!("pairing.chain-map.{k}"), "Id ⊠ f_k is a chain map");
                add(format!("pairing.cone.{k}"), "Cone(Id ⊠ f_k) = A ⊠ Cone(f_k)");
                add(format!("pairing.functoriality.{k}"), "Id ⊠ (f_{k+1}∘f_k) = (Id ⊠ f_{k+1})∘(Id ⊠ f_k)");
            }
        }
        _ => {}
    }
    v
}

fn claim_of(group: &str, fx: &SkeinFixtures, id: &str) -> String {
    static_checks(group, fx).into_iter().find(|(i, _)| i == id).map(|(_, c)| c).unwrap_or_default()
}

/// Runs the campaign on the standard transcription.
pub fn verify_all(opts: &Options) -> Report {
    verify_transcription(&Transcription::standard(), opts)
}

/// Runs every selected check; groups run concurrently and the merged report
/// is sorted by id.
pub fn verify_transcription(t: &Transcription, opts: &Options) -> Report {
    let fx = match SkeinFixtures::build(t) {
        Ok(fx) => fx,
        Err(e) => {
            let check = Check {
                id: "fixtures.build".into(),
                claim: "transcription builds".into(),
                status: Status::Fail,
                witness: Some(e.to_string()),
            };
            return Report::new(vec![check]);
        }
    };
    let groups: Vec<&str> =
        GROUPS.iter().copied().filter(|g| static_checks(g, &fx).iter().any(|(id, _)| opts.selects(id))).collect();
    let results: Vec<Vec<Check>> = std::thread::scope(|s| {
        let handles: Vec<_> = groups
            .iter()
            .map(|g| {
                let fx = &fx;
                s.spawn(move || {
                    let mut sink = Sink { checks: Vec::new() };
                    run_group(g, fx, opts, &mut sink);
                    // anything the catalogue promises but the group did not emit
                    for (id, claim) in static_checks(g, fx) {
                        if !sink.checks.iter().any(|c| c.id == id) {
                            sink.push(id, claim, Err("check did not run".into()));
                        }
                    }
                    for c in sink.checks.iter_mut().filter(|c| c.claim.is_empty()) {
                        c.claim = claim_of(g, fx, &c.id);
                    }
                    sink.checks
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check groups do not panic")).collect()
    });
    let checks = results.into_iter().flatten().filter(|c| opts.selects(&c.id)).collect();
    Report::new(checks)
}

fn run_group(group: &str, fx: &SkeinFixtures, opts: &Options, sink: &mut Sink) {
    match group {
        "algebra" => algebra_checks(fx, sink),
        "modules" => module_checks(fx, sink),
        "golden" => golden_checks(fx, opts, sink),
        "triangle" => triangle_checks(fx, sink),
        "equivalence" => equivalence_checks(fx, sink),
        "mor" => mor_checks(fx, sink),
        "grading" => grading_checks(fx, sink),
        "shift" => shift_checks(fx, sink),
        "lattice" => lattice_checks(fx, sink),
        "pairing" => pairing_checks(fx, sink),
        _ => {}
    }
}

fn algebra_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let table = product_table(alg);
    sink.push("algebra.basis-size", "", ensure(table.len() == 430, || format!("found {} generators", table.len())));
    sink.report("algebra.d-squared", "", &axioms::d_squared(&table));
    sink.report("algebra.leibniz", "", &axioms::leibniz(alg, &table));
    sink.report("algebra.associativity", "", &axioms::associativity(alg, &table));
    sink.report("algebra.idempotents", "", &axioms::idempotent_laws(alg));
    sink.report("algebra.digit-rule", "", &axioms::digit_rule(alg, &J_PRIME).1);
    sink.report("algebra.overlap-rule", "", &axioms::overlap_rule(alg, &J_PRIME).1);
    let mut r = CheckReport::default();
    let w = |s: &str| alg.parse_word(s).map_err(|e| e.to_string());
    let identities: [(&str, Result<bool, String>); 5] = [
        ("(12,3,2) = (2,1,23)", (|| Ok(w("12,3,2")? == w("2,1,23")? && !w("2,1,23")?.is_zero()))()),
        ("(45,6,5,2) = (5,4,56,2)", (|| Ok(w("45,6,5,2")? == w("5,4,56,2")? && !w("5,4,56,2")?.is_zero()))()),
        ("d(4,6,7,8,5) = 0", (|| Ok(alg.diff(&w("4,6,7,8,5")?).is_zero()))()),
        ("(4,6,7,8,5)² = 0", (|| Ok(alg.mul_unchecked(&w("4,6,7,8,5")?, &w("4,6,7,8,5")?).is_zero()))()),
        (
            "d(12,3,4,56,2) = (2,1,3,4,56,2) + (12,3,4,6,5,2)",
            (|| {
                let mut rhs = w("2,1,3,4,56,2")?;
                rhs += &w("12,3,4,6,5,2")?;
                Ok(alg.diff(&w("12,3,4,56,2")?) == rhs)
            })(),
        ),
    ];
    for (name, outcome) in identities {
        match outcome {
            Ok(true) => {}
            Ok(false) => r.violations.push(format!("{name} fails")),
            Err(e) => r.violations.push(format!("{name}: {e}")),
        }
    }
    sink.report("algebra.identities", "", &r);
}

fn module_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    for k in SkeinIndex::ALL {
        sink.report(format!("modules.structure.{k}"), "", &dmod::structure_check(&fx.alg, fx.bsd(k)));
    }
    let binf = fx.bsd(SkeinIndex::Infty);
    let y2 = binf.index("y2").map(|i| binf.delta(i).is_zero());
    sink.push("modules.delta-y2", "", ensure(y2 == Ok(true), || format!("{y2:?}")));
    let n = fx.bsd(SkeinIndex::Zero).term_count();
    sink.push("modules.b0-terms", "", ensure(n == 5, || format!("{n} terms")));
}

fn golden_checks(fx: &SkeinFixtures, opts: &Options, sink: &mut Sink) {
    let dir = opts.golden_dir.clone().unwrap_or_else(default_golden_dir);
    for (name, content) in models::golden_files(fx) {
        let id = format!("golden.{}", name.trim_end_matches(".json"));
        let outcome = match std::fs::read_to_string(dir.join(&name)) {
            Ok(expected) if expected == content => Ok(()),
            Ok(expected) => Err(first_difference(&expected, &content)),
            Err(e) => Err(format!("{}: {e}", dir.join(&name).display())),
        };
        sink.push(id, "", outcome);
    }
}

fn first_difference(expected: &str, found: &str) -> String {
    for (n, (a, b)) in expected.lines().zip(found.lines()).enumerate() {
        if a != b {
            return format!("line {}: expected {:?}, found {:?}", n + 1, a.trim(), b.trim());
        }
    }
    format!("length differs: expected {} lines, found {}", expected.lines().count(), found.lines().count())
}

/// The product table, built once per process; fixtures always carry the
/// skein algebra.
fn product_table(alg: &crate::algebra::StrandsAlgebra) -> Arc<ProductTable> {
    static TABLE: OnceLock<Arc<ProductTable>> = OnceLock::new();
    TABLE.get_or_init(|| Arc::new(ProductTable::new(alg))).clone()
}

pub fn triangle_data(fx: &SkeinFixtures) -> TriangleData {
    TriangleData {
        fs: SkeinIndex::ALL.map(|k| fx.skein_map(k)),
        phis: SkeinIndex::ALL.map(|k| fx.skein_homotopy(k)),
        kappas: SkeinIndex::ALL.map(|k| fx.kappa(k)),
    }
}

/// [δ∘f, f∘δ, d(f)] evaluated at y1, kept apart so each piece can be
/// inspected.
pub fn sample_pieces(fx: &SkeinFixtures) -> Result<[Tensor; 3], String> {
    let alg = &fx.alg;
    let f = fx.skein_map_part(SkeinIndex::Infty, 0);
    let (src, tgt) = (f.source(), f.target());
    let y1 = src.index("y1").map_err(|e| e.to_string())?;
    let mut delta_f = Tensor::zero();
    let mut f_delta = Tensor::zero();
    let mut d_f = Tensor::zero();
    for (a, z) in f.image(y1).iter() {
        delta_f += &dmod::left_mul(alg, a, tgt.delta(*z));
        for da in alg.diff_gen(a) {
            d_f.toggle(da, *z);
        }
    }
    for (b, y) in src.delta(y1).iter() {
        f_delta += &dmod::left_mul(alg, b, f.image(*y));
    }
    Ok([delta_f, f_delta, d_f])
}

fn triangle_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let report = homlab::verify_triangle(alg, &triangle_data(fx));
    for c in &report.checks {
        let (cond, k) = c.identity.split_once(":k=").unwrap_or((&c.identity, ""));
        let outcome = ensure(c.holds, || c.witness.clone().unwrap_or_default());
        sink.push(format!("triangle.{cond}.{k}"), "", outcome);
    }
    let sample = sample_pieces(fx).and_then(|[a, b, c]| {
        let mut total = a.clone();
        total += &b;
        total += &c;
        let relation = alg.parse_word("45,6,5,2").ok() == alg.parse_word("5,4,56,2").ok();
        ensure(total.is_zero() && !a.is_zero() && !b.is_zero() && relation, || {
            format!("pieces have {}, {}, {} terms; sum has {}", a.len(), b.len(), c.len(), total.len())
        })
    });
    sink.push("triangle.sample", "", sample);
    for k in SkeinIndex::ALL {
        let outcome = match homlab::identity_obstruction(alg, fx.bsd(k).clone()) {
            Ok(Solution::NoSolution(cert)) => ensure(cert.rank < cert.augmented_rank, || format!("{cert:?}")),
            Ok(Solution::Solved(h)) => Err(format!("Id = ∂H with H of {} terms", h.term_count())),
            Err(e) => Err(e.to_string()),
        };
        sink.push(format!("triangle.id-essential.{k}"), "", outcome);
    }
}

fn equivalence_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let data = triangle_data(fx);
    for k in SkeinIndex::ALL {
        let outcome = homlab::skein_equivalence(&fx.alg, &data, k).map(|_| ()).map_err(|e| e.to_string());
        sink.push(format!("equivalence.{k}"), "", outcome);
    }
}

fn mor_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let mut r = CheckReport::default();
    for a in SkeinIndex::ALL {
        for b in SkeinIndex::ALL {
            if !mor_basis(alg, fx.bsd(a).clone(), fx.bsd(b).clone()).squares_to_zero() {
                r.violations.push(format!("∂² ≠ 0 on Mor(BSD(B{a}), BSD(B{b}))"));
            }
        }
    }
    sink.report("mor.d-squared", "", &r);
    let mut r = CheckReport::default();
    let mut parts: Vec<(String, &DMorphism)> = Vec::new();
    for k in SkeinIndex::ALL {
        for i in [0, 1] {
            parts.push((format!("f{k},{i}"), fx.skein_map_part(k, i)));
        }
        for ij in [0, 1, 10, 11] {
            parts.push((format!("phi{k},{ij:02}"), fx.skein_homotopy_part(k, ij)));
        }
    }
    for (name, f) in parts {
        let complex = mor_basis(alg, f.source().clone(), f.target().clone());
        match complex.decompose(f) {
            Ok(v) if complex.assemble(&v) == *f => {}
            Ok(_) => r.violations.push(format!("{name} does not round-trip")),
            Err(e) => r.violations.push(format!("{name}: {e}")),
        }
    }
    sink.report("mor.decompose", "", &r);
}

fn grading_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let group = fx.group();
    let refinement = match &fx.refinement {
        Ok(r) => r,
        Err(e) => {
            for (id, _) in static_checks("grading", fx) {
                sink.push(id, "", Err(format!("refinement data rejected: {e}")));
            }
            return;
        }
    };
    let mut table = CheckReport::default();
    let mut skein = CheckReport::default();
    for row in GRADING_TABLE.iter() {
        let computed = alg
            .parse_word(row.word)
            .map_err(|e| e.to_string())
            .and_then(|a| refinement.refine(group, alg, &a).map_err(|e| e.to_string()));
        match computed {
            Ok(g) => {
                let expected = row.expected(group);
                if g != expected {
                    table.violations.push(format!("({}) has grading {g}, expected {expected}", row.word));
                }
                let by_coords = fx.basis.coords(&g).map(|c| c[0]);
                let by_reduce = fx.basis.skein_reduce(&g);
                if by_coords != Ok(row.skein) || by_reduce != Ok(row.skein) {
                    skein.violations.push(format!(
                        "({}) reduces to {by_reduce:?} / {by_coords:?}, expected {}",
                        row.word, row.skein
                    ));
                }
            }
            Err(e) => {
                table.violations.push(format!("({}): {e}", row.word));
                skein.violations.push(format!("({}): {e}", row.word));
            }
        }
    }
    sink.report("grading.table", "", &table);
    sink.report("grading.table-skein", "", &skein);

    let domain = models::periodic_domain_x();
    let outcome =
        domain.refined(group, alg, refinement).and_then(|g| fx.basis.coords(&g)).map_err(|e| e.to_string()).and_then(
            |c| {
                let in_stab = fx.stabilizer(SkeinIndex::One).contains(&c);
                ensure(c == domain.expected_coords && in_stab, || format!("coordinates {c:?}"))
            },
        );
    sink.push("grading.periodic-domain", "", outcome);

    sink.push("grading.connecting-y2", "", connecting_y2(fx, refinement));

    for k in SkeinIndex::ALL {
        let r = dmod::graded_check(alg, fx.bsd(k), fx.gradings(k), refinement, &fx.basis);
        sink.report(format!("grading.graded.{k}"), "", &r);
    }
    for (k, base) in [(SkeinIndex::One, "x"), (SkeinIndex::Infty, "y3"), (SkeinIndex::Zero, "z1")] {
        let assigned = fx.gradings(k);
        let outcome = dmod::propagate_gradings(alg, fx.bsd(k), base, refinement, &fx.basis)
            .map_err(|e| e.to_string())
            .and_then(|derived| {
                let m = fx.bsd(k);
                for name in m.names() {
                    let (Some(d), Some(a)) = (derived.get(name), assigned.grades.get(name)) else {
                        return Err(format!("{name} has no derived or assigned grading"));
                    };
                    if !assigned.stabilizer.congruent(d, a) {
                        return Err(format!(
                            "{name}: derived {}, assigned {}",
                            crate::grading::RefinedBasis::format_coords(d),
                            crate::grading::RefinedBasis::format_coords(a)
                        ));
                    }
                }
                Ok(())
            });
        sink.push(format!("grading.derived.{k}"), "", outcome);
    }
    let mut r = CheckReport::default();
    for k in SkeinIndex::ALL {
        let g = fx.gradings(k);
        for name in fx.bsd(k).names() {
            match g.skein(name) {
                Ok(0) => {}
                Ok(s) => r.violations.push(format!("{name} has skein grading {s}")),
                Err(e) => r.violations.push(format!("{name}: {e}")),
            }
        }
    }
    sink.report("grading.generators-skein", "", &r);
}

/// The displayed class (1/2, −[ρ123]) is −A1, and equals the grading that
/// δ(y3) = (1,3) ⊗ y2 forces: gr̄(y2) = λ⁻¹ gr̄(1,3)⁻¹ gr̄(y3).
fn connecting_y2(fx: &SkeinFixtures, refinement: &crate::grading::RefinementData) -> Result<(), String> {
    let alg = &fx.alg;
    let shown = fx.basis.coords(&models::connecting_class_y2()).map_err(|e| e.to_string())?;
    let binf = fx.bsd(SkeinIndex::Infty);
    let y3 = binf.index("y3").map_err(|e| e.to_string())?;
    let y2 = binf.index("y2").map_err(|e| e.to_string())?;
    let term = binf
        .delta(y3)
        .iter()
        .find(|(_, y)| *y == y2)
        .map(|(a, _)| a.clone())
        .ok_or_else(|| "δ(y3) has no term into y2".to_string())?;
    let ga = fx
        .basis
        .coords(&refinement.refine_generator(fx.group(), alg, &term).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let mut via_delta: Vec<i64> = ga.iter().map(|x| -x).collect();
    via_delta[0] -= 1;
    let expected = vec![0, -1, 0, 0];
    ensure(shown == expected && via_delta == expected, || format!("displayed {shown:?}, via δ {via_delta:?}"))
}

fn shift_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let refinement = match &fx.refinement {
        Ok(r) => r,
        Err(e) => {
            for (id, _) in static_checks("shift", fx) {
                sink.push(id, "", Err(format!("refinement data rejected: {e}")));
            }
            return;
        }
    };
    let shift = |f: &DMorphism, k: SkeinIndex, to: SkeinIndex| {
        dmod::morphism_shift(alg, f, fx.gradings(k), fx.gradings(to), refinement, &fx.basis).map_err(|e| e.to_string())
    };
    for k in SkeinIndex::ALL {
        let expected = expected_shift(k);
        let total = shift(&fx.skein_map(k), k, k.succ());
        sink.push(
            format!("shift.f{k}"),
            "",
            total.clone().and_then(|s| ensure(s == Some(expected), || format!("shift {s:?}, expected {expected}"))),
        );
        for i in [0, 1] {
            let part = shift(fx.skein_map_part(k, i), k, k.succ());
            let outcome =
                part.and_then(|s| ensure(s == Some(expected), || format!("part shift {s:?}, map shift {expected}")));
            sink.push(format!("shift.f{k}.{i}"), "", outcome);
        }
        // ∂φ_k = f_{k+1}∘f_k, and ∂ shifts by one
        let composite = expected_shift(k) + expected_shift(k.succ());
        let phi = fx.skein_homotopy(k);
        let outcome = shift(&phi, k, k.succ().succ()).and_then(|s| match (s, phi.is_zero()) {
            (None, true) if k == SkeinIndex::One => Ok(()),
            (Some(s), false) => ensure(s == composite + 1, || format!("shift {s}, expected {}", composite + 1)),
            (s, _) => Err(format!("shift {s:?} for a homotopy with {} terms", phi.term_count())),
        });
        sink.push(format!("shift.phi{k}"), "", outcome);
    }
}

/// Skein-graded shifts of f1, f∞, f0.
pub fn expected_shift(k: SkeinIndex) -> i64 {
    match k {
        SkeinIndex::Zero => -1,
        SkeinIndex::One | SkeinIndex::Infty => 0,
    }
}

fn lattice_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    for ex in models::lattice_examples() {
        let sides: Vec<(String, crate::lattice::AbelianLattice)> = SkeinIndex::ALL
            .iter()
            .map(|k| (k.to_string(), fx.stabilizer(*k).clone()))
            .chain(std::iter::once(("sk".to_string(), models::skein_relators())))
            .collect();
        for ((label, side), (free, torsion)) in sides.into_iter().zip(ex.expected.iter().cloned()) {
            let expected = GroupInvariants::new(free, torsion);
            let found = ex.quotient(&side);
            sink.push(
                format!("lattice.{}.{label}", ex.name),
                "",
                ensure(found.as_ref() == Some(&expected), || format!("found {found:?}, expected {expected}")),
            );
        }
    }
}

fn pairing_checks(fx: &SkeinFixtures, sink: &mut Sink) {
    let alg = &fx.alg;
    let n = pairing::regular_module_from(alg, product_table(alg));
    let pairs = pairing::regular_pairs(alg, &n);
    let triples = pairing::sampled_triples(alg, &n, 2000, 0x5eed);
    sink.report("pairing.dg-relations", "", &pairing::check_dg_relations(alg, &n, &pairs, &triples));
    for k in SkeinIndex::ALL {
        let boxed = pairing::box_tensor(&n, fx.bsd(k), 2).map_err(|e| e.to_string());
        sink.push(
            format!("pairing.box.{k}"),
            "",
            boxed.and_then(|b| ensure(b.squares_to_zero(), || format!("∂² ≠ 0 on {} generators", b.len()))),
        );
        let f = fx.skein_map(k);
        let chain = pairing::box_morphism(&n, &f, 2).map_err(|e| e.to_string());
        sink.push(
            format!("pairing.chain-map.{k}"),
            "",
            chain.and_then(|(s, t, m)| ensure(pairing::is_chain_map(&s, &t, &m), || "∂F ≠ F∂".into())),
        );
        let cone = if morphism_boundary(alg, &f).is_zero() {
            pairing::cone_commutation_defect(alg, &n, &f, 2)
                .map_err(|e| e.to_string())
                .and_then(|d| ensure(d == 0, || format!("{d} mismatched entries")))
        } else {
            Err(format!("f{k} is not a cycle"))
        };
        sink.push(format!("pairing.cone.{k}"), "", cone);
        let g = fx.skein_map(k.succ());
        let functorial = (|| -> Result<(), String> {
            let gf = dmod::compose(alg, &g, &f).map_err(|e| e.to_string())?;
            let (_, _, m_gf) = pairing::box_morphism(&n, &gf, 2).map_err(|e| e.to_string())?;
            let (_, _, m_f) = pairing::box_morphism(&n, &f, 2).map_err(|e| e.to_string())?;
            let (_, _, m_g) = pairing::box_morphism(&n, &g, 2).map_err(|e| e.to_string())?;
            ensure(m_g.mul(&m_f) == m_gf, || "matrices differ".into())
        })();
        sink.push(format!("pairing.functoriality.{k}"), "", functorial);
    }
}

/// Runs the campaign on every mutation of the catalogue and reports which
/// were caught.
pub fn mutation_sweep(opts: &Options) -> Vec<(String, bool)> {
    let base = Transcription::standard();
    models::mutation_catalogue(&base)
        .into_iter()
        .map(|(name, m)| {
            let report = verify_transcription(&m.apply(&base), opts);
            (name, !report.passed())
        })
        .collect()
}
