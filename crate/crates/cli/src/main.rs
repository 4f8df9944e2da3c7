use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use skein_core::campaign::{self, Options};
use skein_core::grading::RefinedBasis;
use skein_core::homlab::{self, certificate_json};
use skein_core::models::{self, SkeinFixtures, SkeinIndex, Transcription, GRADING_TABLE};

// Writes to stdout, ignoring a closed pipe.
macro_rules! put {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "skeinctl", version, about = "Verify the unoriented skein exact triangle over the strands algebra")]
#[command(arg_required_else_help = true)]
struct Cli {
    /// Print every check id with its claim and exit.
    #[arg(long)]
    list_checks: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the verification campaign.
    Verify {
        /// Comma-separated check ids or id prefixes (e.g. `triangle,algebra.leibniz`).
        #[arg(long)]
        only: Option<String>,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Directory holding the golden fixtures.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
        /// Apply a named single-term corruption to the fixtures first.
        #[arg(long)]
        mutate: Option<String>,
        /// List the available mutation names and exit.
        #[arg(long)]
        list_mutations: bool,
    },
    /// Print a module, map or homotopy.
    Show {
        /// `bsd:K`, `map:fK` or `homotopy:phiK` with K one of 1, infty, 0.
        #[arg(long)]
        object: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print refined gradings of the table elements and of the generators.
    Gradings {
        /// Print only the skein-reduced integer gradings.
        #[arg(long)]
        skein_reduced: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Certify BSD(B_k) ≃ Cone(f_{k+1}) and print the maps.
    Cone {
        #[arg(long)]
        k: SkeinIndex,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Quotient invariants for the stabilizer lattice examples.
    Examples {
        /// `6.1` / `meridional` or `6.2` / `torsion`.
        #[arg(long)]
        which: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn usage(msg: impl AsRef<str>) -> ExitCode {
    eprintln!("error: {}", msg.as_ref());
    ExitCode::from(USAGE)
}

fn status(ok: bool) -> ExitCode {
    ExitCode::from(if ok { PASS } else { FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_checks {
        for (id, claim) in campaign::list_checks() {
            say!("{id:<34} {claim}");
        }
        return ExitCode::from(PASS);
    }
    match cli.command {
        None => usage("no subcommand given"),
        Some(Command::Verify { only, report, golden_dir, mutate, list_mutations }) => {
            verify(only, report, golden_dir, mutate, list_mutations)
        }
        Some(Command::Show { object, format }) => show(&object, format),
        Some(Command::Gradings { skein_reduced, format }) => gradings(skein_reduced, format),
        Some(Command::Cone { k, format }) => cone(k, format),
        Some(Command::Examples { which }) => examples(&which),
    }
}

fn verify(
    only: Option<String>,
    report: Option<PathBuf>,
    golden_dir: Option<PathBuf>,
    mutate: Option<String>,
    list_mutations: bool,
) -> ExitCode {
    let base = Transcription::standard();
    let catalogue = models::mutation_catalogue(&base);
    if list_mutations {
        for (name, _) in &catalogue {
            say!("{name}");
        }
        return ExitCode::from(PASS);
    }
    let opts = Options { only, golden_dir };
    if let Some(filter) = &opts.only {
        if !campaign::list_checks().iter().any(|(id, _)| opts.selects(id)) {
            return usage(format!("--only {filter:?} matches no check"));
        }
    }
    let transcription = match mutate {
        None => base,
        Some(name) => match catalogue.iter().find(|(n, _)| *n == name) {
            Some((_, m)) => m.apply(&base),
            None => return usage(format!("unknown mutation {name:?}; see `skeinctl verify --list-mutations`")),
        },
    };
    let result = campaign::verify_transcription(&transcription, &opts);
    put!("{}", result.to_text());
    if let Some(path) = report {
        if let Err(e) = fs::write(&path, result.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(USAGE);
        }
    }
    status(result.passed())
}

enum Object {
    Bsd(SkeinIndex),
    Map(SkeinIndex),
    Homotopy(SkeinIndex),
}

fn parse_object(s: &str) -> Result<Object, String> {
    let bad = || format!("unknown object {s:?} (expected bsd:K, map:fK or homotopy:phiK)");
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "bsd" => rest.parse().map(Object::Bsd),
        "map" => rest.strip_prefix('f').ok_or_else(bad)?.parse().map(Object::Map),
        "homotopy" => rest.strip_prefix("phi").ok_or_else(bad)?.parse().map(Object::Homotopy),
        _ => Err(bad()),
    }
}

fn show(object: &str, format: Format) -> ExitCode {
    let object = match parse_object(object) {
        Ok(o) => o,
        Err(e) => return usage(e),
    };
    let fx = SkeinFixtures::standard();
    let alg = &fx.alg;
    if format == Format::Json {
        let file = match object {
            Object::Bsd(k) => format!("bsd_{k}.json"),
            Object::Map(k) => format!("map_f{k}.json"),
            Object::Homotopy(k) => format!("homotopy_phi{k}.json"),
        };
        put!("{}", models::golden_files(&fx)[&file]);
        return ExitCode::from(PASS);
    }
    match object {
        Object::Bsd(k) => {
            let m = fx.bsd(k);
            say!("BSD(B_{k}): {} generators", m.len());
            for i in 0..m.len() {
                say!("  {} over {}", m.name(i), m.idem(i));
            }
            put!("{}", m.render(alg));
        }
        Object::Map(k) => {
            let to = k.succ();
            say!("f{k}: BSD(B_{k}) -> BSD(B_{to})");
            for i in [0, 1] {
                put!("{}", fx.skein_map_part(k, i).render(alg, &format!("f{k},{i}")));
            }
        }
        Object::Homotopy(k) => {
            let to = k.succ().succ();
            say!("phi{k}: BSD(B_{k}) -> BSD(B_{to})");
            for ij in [0, 1, 10, 11] {
                put!("{}", fx.skein_homotopy_part(k, ij).render(alg, &format!("phi{k},{ij:02}")));
            }
        }
    }
    ExitCode::from(PASS)
}

fn gradings(skein_reduced: bool, format: Format) -> ExitCode {
    let fx = SkeinFixtures::standard();
    let alg = &fx.alg;
    let r = match &fx.refinement {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: refinement data rejected: {e}");
            return ExitCode::from(FAIL);
        }
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for row in GRADING_TABLE.iter() {
        let computed = alg
            .parse_word(row.word)
            .map_err(|e| e.to_string())
            .and_then(|a| r.refine(fx.group(), alg, &a).map_err(|e| e.to_string()))
            .and_then(|g| fx.basis.coords(&g).map(|c| (g, c)).map_err(|e| e.to_string()));
        match computed {
            Ok((g, c)) => {
                ok &= g == row.expected(fx.group()) && c[0] == row.skein;
                rows.push(json!({"word": row.word, "grading": g.to_string(), "coords": c, "skein": c[0]}));
            }
            Err(e) => {
                ok = false;
                rows.push(json!({"word": row.word, "error": e}));
            }
        }
    }
    let mut gens = Vec::new();
    for k in SkeinIndex::ALL {
        let g = fx.gradings(k);
        for name in fx.bsd(k).names() {
            let coords = g.grades.get(name).cloned().unwrap_or_default();
            let skein = g.skein(name).map_err(|e| e.to_string());
            ok &= skein.is_ok();
            gens.push(json!({"k": k.tag(), "generator": name, "coords": coords, "skein": skein.ok()}));
        }
    }
    if format == Format::Json {
        let (rows, gens) = if skein_reduced {
            (keep(&rows, &["word", "skein"]), keep(&gens, &["k", "generator", "skein"]))
        } else {
            (rows.clone(), gens.clone())
        };
        let out = json!({"elements": rows, "generators": gens});
        put!("{}", models::canonical_json(&out));
        return status(ok);
    }
    say!("algebra elements");
    for e in &rows {
        let word = e["word"].as_str().unwrap_or_default();
        if let Some(err) = e.get("error") {
            say!("  ({word:<13}) error: {err}");
        } else if skein_reduced {
            say!("  ({word:<13}) {}", e["skein"]);
        } else {
            let c: Vec<i64> = serde_json::from_value(e["coords"].clone()).unwrap_or_default();
            say!(
                "  ({word:<13}) {:<24} {}",
                e["grading"].as_str().unwrap_or_default(),
                RefinedBasis::format_coords(&c)
            );
        }
    }
    say!("generators");
    for e in &gens {
        let label =
            format!("{} in B_{}", e["generator"].as_str().unwrap_or_default(), e["k"].as_str().unwrap_or_default());
        if skein_reduced {
            say!("  {label:<14} {}", e["skein"]);
        } else {
            let c: Vec<i64> = serde_json::from_value(e["coords"].clone()).unwrap_or_default();
            say!("  {label:<14} {}", RefinedBasis::format_coords(&c));
        }
    }
    status(ok)
}

fn keep(entries: &[Value], keys: &[&str]) -> Vec<Value> {
    entries.iter().map(|e| Value::Object(keys.iter().map(|k| (k.to_string(), e[*k].clone())).collect())).collect()
}

fn cone(k: SkeinIndex, format: Format) -> ExitCode {
    let fx = SkeinFixtures::standard();
    let alg = &fx.alg;
    let data = campaign::triangle_data(&fx);
    let eq = match homlab::skein_equivalence(alg, &data, k) {
        Ok(eq) => eq,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(FAIL);
        }
    };
    let ok = eq.certificates.iter().all(|c| c.holds);
    let k1 = k.succ();
    if format == Format::Json {
        let certificates: Vec<Value> = eq
            .certificates
            .iter()
            .map(|c| {
                let witness = match c.identity.split(':').next() {
                    Some("dG") => Some(&eq.g),
                    Some("dPsi") => Some(&eq.psi),
                    Some("dH=GPsi+Id") => Some(&eq.h),
                    _ => None,
                };
                certificate_json(alg, &c.identity, c.holds, witness)
            })
            .collect();
        let out = json!({
            "k": k.tag(),
            "cone": eq.cone.to_json(alg),
            "G": eq.g.to_json(alg),
            "Psi": eq.psi.to_json(alg),
            "H": eq.h.to_json(alg),
            "certificates": certificates,
        });
        put!("{}", models::canonical_json(&out));
        return status(ok);
    }
    say!("Cone(f{k1}) with {} generators", eq.cone.len());
    put!("{}", eq.cone.render(alg));
    say!("G: BSD(B_{k}) -> Cone(f{k1})");
    put!("{}", eq.g.render(alg, "G"));
    say!("Psi: Cone(f{k1}) -> BSD(B_{k})");
    put!("{}", eq.psi.render(alg, "Psi"));
    say!("H with dH = G Psi + Id ({} terms)", eq.h.term_count());
    put!("{}", eq.h.render(alg, "H"));
    for c in &eq.certificates {
        say!("{}  {}", if c.holds { "PASS" } else { "FAIL" }, c.identity);
    }
    status(ok)
}

fn examples(which: &str) -> ExitCode {
    let name = match which {
        "6.1" | "meridional" => "meridional",
        "6.2" | "torsion" => "torsion",
        other => return usage(format!("unknown example {other:?} (expected 6.1 or 6.2)")),
    };
    let fx = SkeinFixtures::standard();
    let ex = models::lattice_examples().into_iter().find(|e| e.name == name).expect("both examples are defined");
    let skein = models::skein_relators();
    let sides: Vec<(String, &skein_core::lattice::AbelianLattice)> = SkeinIndex::ALL
        .iter()
        .map(|k| (format!("k={k}"), fx.stabilizer(*k)))
        .chain(std::iter::once(("skein".to_string(), &skein)))
        .collect();
    let mut ok = true;
    say!("{name}: base stabilizer {:?}", ex.base);
    for ((label, side), (free, torsion)) in sides.into_iter().zip(ex.expected.iter()) {
        let expected = skein_core::lattice::GroupInvariants::new(*free, torsion.clone());
        match ex.quotient(side) {
            Some(q) => {
                let same = q == expected;
                ok &= same;
                say!("  {label:<7} {q}{}", if same { "" } else { "  (mismatch)" });
            }
            None => {
                ok = false;
                say!("  {label:<7} undefined");
            }
        }
    }
    status(ok)
}
