use std::fs;
use std::path::PathBuf;

use skein_core::campaign::{self, Options, Status};
use skein_core::models::{self, SkeinFixtures};

// UPDATE_GOLDEN=1 cargo test --test golden regenerates the fixtures.
#[test]
fn golden_files_match() {
    let dir = campaign::default_golden_dir();
    let files = models::golden_files(&SkeinFixtures::standard());
    assert_eq!(files.len(), 10);
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, body) in &files {
        let path = dir.join(name);
        if update {
            fs::write(&path, body).unwrap();
            continue;
        }
        let on_disk = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(&on_disk, body, "{name} is stale; rerun with UPDATE_GOLDEN=1");
    }
}

#[test]
fn golden_json_is_canonical() {
    for (name, body) in models::golden_files(&SkeinFixtures::standard()) {
        let v: serde_json::Value = serde_json::from_str(&body).unwrap();
        assert_eq!(models::canonical_json(&v), body, "{name}");
    }
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skein-golden-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    for (name, body) in models::golden_files(&SkeinFixtures::standard()) {
        fs::write(dir.join(name), body).unwrap();
    }
    dir
}

#[test]
fn tampered_fixture_is_reported() {
    let dir = scratch_dir("tampered");
    let path = dir.join("map_f0.json");
    let body = fs::read_to_string(&path).unwrap();
    fs::write(&path, body.replacen("\"z1\"", "\"z2\"", 1)).unwrap();
    let report = campaign::verify_all(&Options { only: Some("golden".into()), golden_dir: Some(dir.clone()) });
    let failed: Vec<&str> = report.failures().map(|c| c.id.as_str()).collect();
    assert_eq!(failed, vec!["golden.map_f0"]);
    assert!(report.get("golden.map_f0").unwrap().witness.as_deref().unwrap().contains("line"));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn missing_fixture_is_reported() {
    let dir = scratch_dir("missing");
    fs::remove_file(dir.join("bsd_infty.json")).unwrap();
    let report = campaign::verify_all(&Options { only: Some("golden".into()), golden_dir: Some(dir.clone()) });
    assert_eq!(report.get("golden.bsd_infty").unwrap().status, Status::Fail);
    assert_eq!(report.summary.failed, 1);
    fs::remove_dir_all(dir).unwrap();
}
