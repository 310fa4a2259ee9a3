use std::path::Path;
use std::process::{Command, Output};

fn vdeform(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vdeform"))
        .args(args)
        .current_dir(dir)
        .env("VDEFORM_CACHE_DIR", dir.join("cache"))
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = vdeform(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn pipeline_is_deterministic_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["operator", "--i", "2", "--j", "1", "-o", "l22.json"]);
    ok(d, &["operator", "--i", "2", "--j", "1", "-o", "l22b.json"]);
    assert_eq!(read(d, "l22.json"), read(d, "l22b.json"));

    let cold = ok(d, &["deform", "--operator", "l22.json", "--genus", "2", "-o", "h.json"]);
    assert!(!String::from_utf8_lossy(&cold.stderr).contains("cache hit"));
    let warm = ok(d, &["deform", "--operator", "l22.json", "--genus", "2", "-o", "h_hit.json"]);
    assert!(String::from_utf8_lossy(&warm.stderr).contains("cache hit"));
    ok(d, &["deform", "--operator", "l22.json", "--genus", "2", "--no-cache", "-o", "h_cold.json"]);
    assert_eq!(read(d, "h.json"), read(d, "h_hit.json"));
    assert_eq!(read(d, "h.json"), read(d, "h_cold.json"));

    ok(d, &["hierarchy", "--deformation", "h.json", "--flows", "3", "--eps", "4", "-o", "t.json"]);
    ok(d, &["hierarchy", "--deformation", "h.json", "--flows", "3", "--eps", "4", "-o", "t2.json"]);
    assert_eq!(read(d, "t.json"), read(d, "t2.json"));
    let text = ok(d, &["hierarchy", "--deformation", "h.json", "--flows", "1", "--eps", "2", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("Ω_{0;1} [ε^2] = -3/2*s*w*w1^2 + 1/12*w2"));

    let nf = ok(d, &["normal-form", "--hierarchy", "t.json", "--format", "text"]);
    let nf = String::from_utf8_lossy(&nf.stdout);
    assert!(nf.contains("a_1 = -1/20*s*w") && nf.contains("b_1 = -1/24*s"), "{nf}");

    let v = vdeform(d, &["verify", "--suite", "hierarchy", "--hierarchy", "t.json"]);
    assert_eq!(v.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&v.stdout).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 6);
}

#[test]
fn s_cap_zero_gives_undeformed_free_energies() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["operator", "--i", "2", "--j", "1", "-o", "l22.json"]);
    let out = ok(d, &["deform", "--operator", "l22.json", "--genus", "1", "--s-cap", "0", "--format", "text"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("H_1 = 1/24*log(w1)  [truncated]"));
}

#[test]
fn combination_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("combo.json"),
        r#"[{"coeff": "a12", "i": 1, "j": 1}, {"coeff": "a22", "i": 2, "j": 1}, {"coeff": "a34", "i": 3, "j": 2}]"#,
    )
    .unwrap();
    let out = ok(d, &["operator", "--combine", "combo.json", "--format", "text"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("a22") && text.contains("a34"), "{text}");
}

#[test]
fn anchor_suite_reports_known_discrepancies() {
    let dir = tempfile::tempdir().unwrap();
    let out = vdeform(dir.path(), &["verify", "--suite", "paper"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "FAIL")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["normal_form.l22.b3", "normal_form.combination.a1", "normal_form.combination.a2", "sk.a12"]);
}

#[test]
fn invalid_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("cfg.json"), r#"{"g_max": 3, "cutoff": 5}"#).unwrap();
    let out = vdeform(d, &["--config", "cfg.json", "operator", "--i", "1", "--j", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3·g_max − 2"));
}
