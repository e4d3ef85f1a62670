//! End-to-end checks of the command line binary.

use std::path::PathBuf;
use std::process::Command;

fn scg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scg"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scg-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn icosahedron_file(dir: &PathBuf) -> PathBuf {
    // Build from Cartesian coordinates of the icosahedron.
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut text = String::from("# regular icosahedron\n");
    let norm = (1.0 + phi * phi).sqrt();
    for (a, b) in [(1.0, phi), (1.0, -phi), (-1.0, phi), (-1.0, -phi)] {
        text.push_str(&format!("0 {} {}\n", a / norm, b / norm));
        text.push_str(&format!("{} {} 0\n", a / norm, b / norm));
        text.push_str(&format!("{} 0 {}\n", b / norm, a / norm));
    }
    let path = dir.join("icosahedron.txt");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_icosahedron() {
    let dir = tmp_dir("check");
    let path = icosahedron_file(&dir);
    let out = scg().arg("check").arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("separation (psi): 1.107149"), "{stdout}");
    assert!(stdout.contains("contacts: 30"), "{stdout}");
    assert!(stdout.contains("irreducible: true"), "{stdout}");
}

#[test]
fn check_two_points() {
    let dir = tmp_dir("two");
    let path = dir.join("two.txt");
    std::fs::write(&path, "0 0 1\n1 0 0\n").unwrap();
    let out = scg().arg("check").arg(&path).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("contacts: 1"), "{stdout}");
}

#[test]
fn check_rejects_bad_file_with_code_2() {
    let dir = tmp_dir("bad");
    let path = dir.join("bad.txt");
    std::fs::write(&path, "1 2 3\n4 5 6\n").unwrap();
    let out = scg().arg("check").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_is_code_1() {
    let out = scg().arg("enumerate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = scg().arg("no-such-command").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_table() {
    let out = scg()
        .args(["bounds", "--from", "4", "--to", "12"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("6,1.57080,12"), "{stdout}");
    assert!(stdout.contains("12,1.10715,30"), "{stdout}");
    assert!(stdout.contains("4,1.91063,6"), "{stdout}");
}

#[test]
fn render_octahedron_svg() {
    let dir = tmp_dir("render");
    let cfg = dir.join("octa.txt");
    std::fs::write(&cfg, "0 0 1\n1 0 0\n0 1 0\n-1 0 0\n0 -1 0\n0 0 -1\n").unwrap();
    let svg1 = dir.join("octa1.svg");
    let svg2 = dir.join("octa2.svg");
    for svg in [&svg1, &svg2] {
        let out = scg()
            .arg("render")
            .arg("--config")
            .arg(&cfg)
            .arg("--out")
            .arg(svg)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert_eq!(a, b, "render not deterministic");
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.matches("<circle").count(), 6);
    assert_eq!(text.matches("<polyline").count(), 12);
}

#[test]
fn enumerate_n6_with_cache_round_trip() {
    let dir = tmp_dir("enum6");
    let run = |tag: &str| {
        let out = scg()
            .args(["enumerate", "--n", "6"])
            .arg("--cache-dir")
            .arg(dir.join("cache"))
            .arg("--out")
            .arg(dir.join(format!("records-{tag}.jsonl")))
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run("a");
    assert!(first.contains("\"irreducible_count\": 2"), "{first}");
    // Second run hits the cache and must produce identical records.
    let second = run("b");
    assert!(second.contains("\"irreducible_count\": 2"));
    let a = std::fs::read(dir.join("records-a.jsonl")).unwrap();
    let b = std::fs::read(dir.join("records-b.jsonl")).unwrap();
    assert_eq!(a, b, "cached rerun differs");
}

#[test]
fn enumerate_n8_with_separation_floor() {
    // With a floor of 1.3 on the separation, exactly the three graphs whose
    // ranges reach 1.3 survive (the two flexible ones clipped to
    // [1.3, 1.30653] and the rigid optimum).
    let dir = tmp_dir("enum8");
    let out = scg()
        .args(["enumerate", "--n", "8", "--d-lower", "1.3"])
        .arg("--out")
        .arg(dir.join("records.jsonl"))
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records = std::fs::read_to_string(dir.join("records.jsonl")).unwrap();
    let lines: Vec<&str> = records.lines().filter(|l| !l.trim().is_empty()).collect();
    assert_eq!(lines.len(), 3, "records: {records}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"irreducible_count\": 3"), "{stdout}");
    // Exactly one maximal record at 1.30653.
    assert_eq!(records.matches("\"max\":true").count(), 1);
}
