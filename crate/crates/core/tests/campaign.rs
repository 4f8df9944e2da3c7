use skein_core::campaign::{self, Options, Status};
use skein_core::models::{self, Transcription};

#[test]
fn full_campaign_passes_and_matches_catalogue() {
    let report = campaign::verify_all(&Options::default());
    let failures: Vec<_> = report.failures().map(|c| (&c.id, &c.witness)).collect();
    assert!(report.passed(), "{failures:?}");
    let listed: Vec<String> = campaign::list_checks().into_iter().map(|(id, _)| id).collect();
    let ran: Vec<String> = report.checks.iter().map(|c| c.id.clone()).collect();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(ran, sorted);
    assert_eq!(report.summary.total, 85);
}

#[test]
fn check_ids_are_unique() {
    let ids: Vec<String> = campaign::list_checks().into_iter().map(|(id, _)| id).collect();
    let unique: std::collections::BTreeSet<_> = ids.iter().collect();
    assert_eq!(unique.len(), ids.len());
}

#[test]
fn reports_are_byte_identical() {
    let a = campaign::verify_all(&Options::default());
    let b = campaign::verify_all(&Options::default());
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn only_filter_selects_triangle_conditions() {
    let report = campaign::verify_all(&Options { only: Some("triangle".into()), golden_dir: None });
    assert!(report.checks.iter().all(|c| c.id.starts_with("triangle.")));
    for cond in ["cond1", "cond2", "cond3"] {
        for k in ["1", "infty", "0"] {
            assert!(report.get(&format!("triangle.{cond}.{k}")).is_some());
        }
    }
    let single = campaign::verify_all(&Options { only: Some("lattice.torsion.sk".into()), golden_dir: None });
    assert_eq!(single.summary.total, 1);
}

#[test]
fn json_report_shape() {
    let report = campaign::verify_all(&Options { only: Some("shift".into()), golden_dir: None });
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let first = &v["checks"][0];
    assert!(first["id"].is_string());
    assert!(first["claim"].is_string());
    assert_eq!(first["status"], "pass");
    assert!(first.get("witness").is_none());
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn seeded_mutations_fail_with_witnesses() {
    let base = Transcription::standard();
    let catalogue = models::mutation_catalogue(&base);
    assert_eq!(catalogue.len(), 43);
    for name in ["refinement:occ5", "grading:y1", "delete:finfty,0:y1:45,6#1"] {
        let (_, m) = catalogue.iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("{name} missing"));
        let report = campaign::verify_transcription(&m.apply(&base), &Options::default());
        assert!(!report.passed(), "{name}");
        for c in report.failures() {
            assert_eq!(c.status, Status::Fail);
            assert!(c.witness.as_deref().is_some_and(|w| !w.is_empty()), "{name}: {} has no witness", c.id);
        }
    }
}
